"""Generalized Brillouin zones from the middle-root condition.

For an energy E on the open-boundary spectrum, the two middle roots
beta_n(E) and beta_{n+1}(E) of beta^n (h(beta) - E) share a modulus. A
GbzCloud collects those roots for a set of energies; evaluating any symbol
on the cloud gives a non-Bloch spectrum.
"""

import dataclasses
import warnings

import numpy as np
from scipy import spatial

from . import errors
from . import laurent
from . import spectra


@dataclasses.dataclass(frozen=True)
class GbzCloud:
    """Middle roots with the energies they belong to.

    `branch` is 0 for beta_n and 1 for beta_{n+1}.
    """

    beta: np.ndarray
    energy: np.ndarray
    branch: np.ndarray
    symbol: laurent.LaurentOperator
    tol: float

    def __post_init__(self):
        for name, dtype in (("beta", complex), ("energy", complex), ("branch", int)):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype))
        assert len(self.beta) == len(self.energy) == len(self.branch)
        if not len(self.beta):
            warnings.warn(
                f"No energy sample satisfies the middle-root condition at tol "
                f"{self.tol}; the GBZ cloud is empty."
            )

    def __len__(self):
        return len(self.beta)

    @property
    def moduli(self):
        return np.abs(self.beta)

    def certify(self):
        """Recomputes the roots at every energy and checks the condition again."""
        n = self.symbol.n
        for E in self.energy:
            a, b = laurent.roots_sorted(self.symbol, E).middle(n)
            if abs(abs(a) - abs(b)) > self.tol * abs(b):
                return False
        return True

    def rows(self):
        return [
            (float(b.real), float(b.imag), float(e.real), float(e.imag), int(i))
            for b, e, i in zip(self.beta, self.energy, self.branch)
        ]

    def merge(self, other):
        assert other.symbol == self.symbol, (other.symbol, self.symbol)
        return type(self)(
            np.concatenate([self.beta, other.beta]),
            np.concatenate([self.energy, other.energy]),
            np.concatenate([self.branch, other.branch]),
            self.symbol,
            max(self.tol, other.tol),
        )


def _energies(samples):
    if isinstance(samples, spectra.SpectrumCloud):
        return samples.values
    return np.asarray(samples, dtype=complex).ravel()


def gbz_1d(op, energy_samples, tol=0.05, pool=None):
    """Middle roots at every energy sample that passes the moduli test."""
    if op.n < 1 or op.m < 1:
        raise errors.MalformedOperatorError(
            f"GBZ needs hopping in both directions (n={op.n}, m={op.m})."
        )
    energies = _energies(energy_samples)
    jobs = {i: (op, E) for i, E in enumerate(energies)}
    if pool is None:
        found = {i: laurent.roots_sorted(*args) for i, args in jobs.items()}
    else:
        found = pool.map(laurent.roots_sorted, jobs)
    beta, energy, branch = [], [], []
    for i in jobs:
        lo, hi = found[i].middle(op.n)
        if abs(abs(lo) - abs(hi)) <= tol * abs(hi):
            beta += [lo, hi]
            energy += [energies[i]] * 2
            branch += [0, 1]
    return GbzCloud(beta, energy, branch, op, tol)


def scan_energy_grid(op, re_range, im_range, shape=(101, 101), tol=0.05, pool=None):
    """GBZ samples from a rectangular energy grid instead of an eigensolve."""
    re = np.linspace(*re_range, shape[0])
    im = np.linspace(*im_range, shape[1])
    grid = (re[:, None] + 1j * im[None, :]).ravel()
    return gbz_1d(op, grid, tol, pool)


def densify(cloud, factor=4):
    """Fills gaps between neighbouring samples of each branch.

    New points interpolate ln(beta) between phase-sorted neighbours, take
    E = h(beta) and are kept only when the middle-root test passes again.
    """
    if len(cloud) < 2 or factor < 2:
        return cloud
    op, n = cloud.symbol, cloud.symbol.n
    new_beta, new_energy, new_branch = [], [], []
    for branch in (0, 1):
        beta = cloud.beta[cloud.branch == branch]
        beta = beta[np.argsort(np.angle(beta))]
        logs = np.log(beta)
        for a, b in zip(logs, np.roll(logs, -1)):
            b = b.real + 1j * (b.imag + 2 * np.pi * (b.imag < a.imag))
            for frac in np.arange(1, factor) / factor:
                candidate = np.exp(a + frac * (b - a))
                E = laurent.eval_beta(op, candidate)
                lo, hi = laurent.roots_sorted(op, E).middle(n)
                if abs(abs(lo) - abs(hi)) <= cloud.tol * abs(hi):
                    new_beta += [lo, hi]
                    new_energy += [E, E]
                    new_branch += [0, 1]
    extra = GbzCloud(new_beta, new_energy, new_branch, op, cloud.tol)
    return cloud.merge(extra)


def gauge_estimate(op, cloud=None):
    """Real mu with e^mu roughly the GBZ radius.

    Uses the mean log-modulus of a cloud when one is given, otherwise the
    geometric mean of all root moduli, |t_{-n} / t_m|^{1/(m+n)}.
    """
    if cloud is not None and len(cloud):
        return float(np.log(cloud.moduli).mean())
    c = op.poly_coefficients()
    if op.degree < 1 or c[0] == 0:
        return 0.0
    return float(np.log(abs(c[0]) / abs(c[-1])) / op.degree)


def nonbloch_spectrum(op, cloud, tag=None):
    """Symbol `op` evaluated on every GBZ point of `cloud`."""
    if not len(cloud):
        raise errors.EmptyCloudError("Non-Bloch spectrum of an empty GBZ cloud.")
    values = laurent.eval_beta(op, cloud.beta)
    return spectra.SpectrumCloud(values, {"bc": "nonbloch", "tag": tag or "gbz"})


def classify_shape(lambda_plus, lambda_minus, margin=0.02):
    """V when growing to both sides, Lambda when decaying to both."""
    if lambda_plus > margin and lambda_minus < -margin:
        return "V"
    if lambda_plus < -margin and lambda_minus > margin:
        return "Lambda"
    if abs(lambda_plus) < margin and abs(lambda_minus) < margin:
        return "flat"
    return "directional"


@dataclasses.dataclass(frozen=True)
class LambdaPrediction:

    omega: complex
    lambda_plus: float
    lambda_minus: float
    mechanism: str

    @property
    def difference(self):
        return self.lambda_plus - self.lambda_minus

    def shape(self, margin=0.02):
        return classify_shape(self.lambda_plus, self.lambda_minus, margin)


def lambda_pm_predict(op, omega, mechanism="plain"):
    """Growth rates of G(x, x0; omega) right (plus) and left (minus) of x0.

    `plain` reads them off the middle roots at omega for H[h]. `squared`
    handles H[h]^2 through its factorization into resolvents of H[h] at
    plus and minus sqrt(omega).
    """
    n = op.n
    if n < 1 or op.m < 1:
        raise errors.MalformedOperatorError("Needs hopping in both directions.")
    if mechanism == "plain":
        lo, hi = laurent.roots_sorted(op, omega).middle(n)
        return LambdaPrediction(
            complex(omega), float(np.log(abs(lo))), float(np.log(abs(hi))), mechanism
        )
    if mechanism == "squared":
        if omega == 0:
            raise errors.BranchPointError("omega = 0 is the branch point of sqrt.")
        root = np.sqrt(complex(omega))
        pairs = [laurent.roots_sorted(op, z).middle(n) for z in (root, -root)]
        plus = max(np.log(abs(lo)) for lo, _ in pairs)
        minus = min(np.log(abs(hi)) for _, hi in pairs)
        return LambdaPrediction(complex(omega), float(plus), float(minus), mechanism)
    raise KeyError(f"Unknown mechanism: {mechanism}")


def _pairing_tol(energies):
    if len(energies) < 2:
        return 1e-6
    points = np.stack([energies.real, energies.imag], axis=1)
    # Both branches carry the same energy.
    points = np.unique(np.round(points, 12), axis=0)
    if len(points) < 2:
        return 1e-6
    dist, _ = spatial.cKDTree(points).query(points, k=2)
    return 3.0 * float(np.median(dist[:, 1]))


def equienergy_growth_rate(gbz_x, gbz_y, hx, hy, E, direction, tol=None):
    """max of n_x ln|beta_x| + n_y ln|beta_y| over the equienergy line.

    The line pairs x samples with y samples whose energies add up to E
    within `tol`. The default tolerance is three median nearest-neighbour
    spacings of the y energies.
    """
    direction = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(direction) - 1) > 1e-9:
        raise ValueError(f"Direction {direction} is not a unit vector.")
    if not len(gbz_x) or not len(gbz_y):
        raise errors.NoEquienergySolutionError("A GBZ cloud is empty.")
    ex = laurent.eval_beta(hx, gbz_x.beta)
    ey = laurent.eval_beta(hy, gbz_y.beta)
    tol = _pairing_tol(ey) if tol is None else tol
    mismatch = np.abs((E - ex)[:, None] - ey[None, :])
    ix, iy = np.nonzero(mismatch <= tol)
    if not len(ix):
        raise errors.NoEquienergySolutionError(
            f"No GBZ pair reaches energy {E} within {tol:.3g}."
        )
    rates = (
        direction[0] * np.log(np.abs(gbz_x.beta[ix]))
        + direction[1] * np.log(np.abs(gbz_y.beta[iy]))
    )
    return float(rates.max())
