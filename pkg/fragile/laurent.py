"""Single-band Laurent-polynomial Bloch symbols h(k) = sum_s t_s e^{iks}.

A symbol is evaluated either on real wavevectors (`eval_k`) or on the
complex plane through beta = e^{ik} (`eval_beta`). The characteristic
polynomial beta^n (h(beta) - E) has exactly m + n roots, which
`roots_sorted` returns in the deterministic order used by the GBZ and
Green's-function predictions.
"""

import dataclasses

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import errors


@dataclasses.dataclass(frozen=True)
class LaurentOperator:
    """Coefficient table {s: t_s} of a single-band Bloch symbol.

    n is the hopping range towards negative powers and m towards positive
    powers (both clipped at zero). The range is tight: t_{-n} and t_m are
    nonzero whenever n, m > 0.
    """

    coeffs: dict

    def __post_init__(self):
        if not self.coeffs:
            raise errors.MalformedOperatorError("Symbol has no coefficients.")
        coeffs = {int(s): complex(t) for s, t in self.coeffs.items()}
        object.__setattr__(self, "coeffs", dict(sorted(coeffs.items())))
        if self.n > 0 and self.coeffs.get(-self.n, 0) == 0:
            raise errors.MalformedOperatorError(f"t_{-self.n} vanishes.")
        if self.m > 0 and self.coeffs.get(self.m, 0) == 0:
            raise errors.MalformedOperatorError(f"t_{self.m} vanishes.")

    @classmethod
    def from_terms(cls, terms):
        """Builds a symbol from (s, Re t_s, Im t_s) triples; repeated s add up."""
        coeffs = {}
        for term in terms:
            if len(term) != 3:
                raise errors.MalformedOperatorError(
                    f"Expected (s, re, im) triple but got {tuple(term)}."
                )
            s, re, im = term
            if float(s) != int(s):
                raise errors.MalformedOperatorError(f"Power {s} is not an integer.")
            coeffs[int(s)] = coeffs.get(int(s), 0) + complex(re, im)
        nonzero = {s: t for s, t in coeffs.items() if t != 0}
        return cls(nonzero or {0: 0j})

    @property
    def n(self):
        return max(0, -min(self.coeffs))

    @property
    def m(self):
        return max(0, max(self.coeffs))

    @property
    def degree(self):
        return self.m + self.n

    @property
    def hop_range(self):
        return max(self.m, self.n)

    @property
    def scale(self):
        return max(abs(t) for t in self.coeffs.values())

    def terms(self):
        return [(s, t.real, t.imag) for s, t in self.coeffs.items()]

    def is_hermitian(self, atol=0.0):
        powers = set(self.coeffs) | {-s for s in self.coeffs}
        return all(
            abs(self.coeffs.get(s, 0) - np.conj(self.coeffs.get(-s, 0))) <= atol
            for s in powers
        )

    def scaled(self, r):
        """Symbol with t_s -> t_s r^s, i.e. h'(beta) = h(r beta)."""
        return type(self)({s: t * r**s for s, t in self.coeffs.items()})

    def deformed(self, mu):
        """Analytic continuation h(k - i mu), the symbol scaled by e^mu."""
        return self.scaled(np.exp(mu))

    def shifted(self, energy):
        coeffs = dict(self.coeffs)
        coeffs[0] = coeffs.get(0, 0) - energy
        return type(self)({s: t for s, t in coeffs.items() if t != 0} or {0: 0j})

    def poly_coefficients(self, energy=0.0):
        """Ascending coefficients of beta^n (h(beta) - E)."""
        c = np.zeros(self.degree + 1, dtype=complex)
        for s, t in self.coeffs.items():
            c[s + self.n] += t
        c[self.n] -= energy
        return c


def eval_beta(op, beta):
    """h(beta) = sum_s t_s beta^s for scalar or array beta."""
    beta = np.asarray(beta, dtype=complex)
    if np.any(beta == 0):
        raise errors.ZeroBetaError("h(beta) is evaluated at beta = 0.")
    result = np.zeros(beta.shape, dtype=complex)
    for s, t in op.coeffs.items():
        result = result + t * beta**s
    return result[()] if result.ndim == 0 else result


def eval_k(op, k):
    """h(k) on real wavevectors."""
    return eval_beta(op, np.exp(1j * np.asarray(k, dtype=float)))


def product(a, b):
    """Symbol of h_a(k) h_b(k); coefficient convolution with additive ranges."""
    lo = -(a.n + b.n)
    dense_a = a.poly_coefficients()
    dense_b = b.poly_coefficients()
    dense = np.convolve(dense_a, dense_b)
    coeffs = {lo + j: t for j, t in enumerate(dense) if t != 0}
    return LaurentOperator(coeffs or {0: 0j})


@dataclasses.dataclass(frozen=True)
class RootList:
    """All m + n roots of beta^n (h(beta) - E), by modulus then phase."""

    roots: np.ndarray
    energy: complex

    @property
    def moduli(self):
        return np.abs(self.roots)

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, index):
        """1-based access, beta_1 ... beta_{m+n}, matching the usual labels."""
        if not 1 <= index <= len(self.roots):
            raise IndexError(index)
        return self.roots[index - 1]

    def middle(self, n):
        """The pair (beta_n, beta_{n+1})."""
        return self[n], self[n + 1]


def roots_sorted(op, energy, tie_decimals=12):
    """Roots of the characteristic polynomial at energy E.

    The roots are the eigenvalues of the companion matrix of the monic
    polynomial. Moduli that agree to `tie_decimals` relative digits count
    as equal and are ordered by ascending phase in (-pi, pi].
    """
    if op.degree < 1:
        raise errors.MalformedOperatorError("Constant symbol has no roots.")
    c = op.poly_coefficients(energy)
    if c[-1] == 0 or c[0] == 0 and op.n > 0:
        raise errors.MalformedOperatorError(
            f"Characteristic polynomial at E={energy} has degree below {op.degree}."
        )
    roots = np.linalg.eigvals(npoly.polycompanion(c)) if op.degree > 1 else (
        np.array([-c[0] / c[1]])
    )
    moduli = np.abs(roots)
    scale = max(moduli.max(), np.finfo(float).tiny)
    phase = np.angle(roots)
    phase = np.where(phase <= -np.pi, np.pi, phase)
    order = np.lexsort((phase, np.round(moduli / scale, tie_decimals)))
    return RootList(roots=roots[order], energy=complex(energy))


def preset(name, **params):
    """Named symbols of the laboratory.

    two_step       2t cos k + s1 e^{2ik} + s2 e^{-2ik}
    chain          2t cos k + s1 e^{ik} + s2 e^{-ik}
    hatano_nelson  a e^{ik} + b e^{-ik}
    """
    if name == "two_step":
        t, s1, s2 = params.get("t", 1.0), params.get("s1", 0.5), params.get("s2", 0.2j)
        return LaurentOperator({1: t, -1: t, 2: s1, -2: s2})
    if name == "chain":
        t, s1, s2 = params.get("t", 1.0), params.get("s1", 0.2), params.get("s2", 0.1)
        return LaurentOperator({1: t + s1, -1: t + s2})
    if name == "hatano_nelson":
        return LaurentOperator({1: params.get("a", 1.2), -1: params.get("b", 1.1)})
    raise KeyError(f"Unknown symbol preset: {name}")


class SeparableSymbol:
    """h(k) = sum_i h_i(k_i): one LaurentOperator per lattice axis."""

    def __init__(self, *parts):
        if len(parts) == 1 and isinstance(parts[0], (tuple, list)):
            parts = tuple(parts[0])
        assert parts and all(isinstance(p, LaurentOperator) for p in parts), parts
        self.parts = tuple(parts)

    @classmethod
    def of(cls, symbols):
        if isinstance(symbols, cls):
            return symbols
        if isinstance(symbols, LaurentOperator):
            return cls(symbols)
        return cls(*symbols)

    @property
    def dim(self):
        return len(self.parts)

    def axis_values(self, mu, k):
        """Per-axis arrays h_i(k - i mu_i) sampled on the real grid k."""
        mu = np.broadcast_to(np.asarray(mu, dtype=float), (self.dim,))
        return [eval_beta(p, np.exp(m + 1j * k)) for p, m in zip(self.parts, mu)]

    def __repr__(self):
        return f"SeparableSymbol({', '.join(repr(p.coeffs) for p in self.parts)})"
