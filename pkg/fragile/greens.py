"""Green's functions G(omega) = (omega - H)^-1 and what they reveal.

Every quantity here comes from one LU factorization of omega - H per
frequency, wrapped in `Resolvent`. Columns, the boundary block used by the
potential series and the log-determinant all reuse it.
"""

import dataclasses
import warnings

import numpy as np
import scipy.linalg
from scipy import stats

from . import errors
from . import gbz
from . import lattice
from . import laurent
from . import spectra

UNDERFLOW = 1e-280

# Resolvents in the V-shape regime are exponentially large by nature, so
# only pivots at the level of exact singularity are rejected.
MIN_RCOND = 1e-30


class Resolvent:
    """LU factorization of omega - H with a condition estimate."""

    def __init__(self, H, omega, min_rcond=MIN_RCOND):
        self.H = H
        self.omega = complex(omega)
        self.shifted = self.omega * np.eye(H.dim) - H.entries
        self.anorm = float(np.abs(self.shifted).sum(axis=0).max())
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            self.lu, self.piv = scipy.linalg.lu_factor(self.shifted, check_finite=False)
        (gecon,) = scipy.linalg.lapack.get_lapack_funcs(("gecon",), (self.lu,))
        rcond, _ = gecon(self.lu, self.anorm, norm="1")
        self.rcond = float(rcond)
        if not np.isfinite(self.rcond) or self.rcond < min_rcond:
            raise errors.NearSpectrumError(
                f"omega - H is numerically singular at omega={omega} "
                f"(rcond {self.rcond:.2e}).",
                rcond=self.rcond,
            )

    def columns(self, rows):
        """Columns G[:, rows] as a dim x len(rows) array."""
        rhs = np.zeros((self.H.dim, len(rows)), dtype=complex)
        rhs[np.asarray(rows), np.arange(len(rows))] = 1.0
        return scipy.linalg.lu_solve((self.lu, self.piv), rhs, check_finite=False)

    def column(self, site):
        return self.columns([self.H.geometry.row(site)])[:, 0]

    def residual(self, cols, rows):
        """Backward error |(omega - H) g - e| / (|g| |omega - H|) per column."""
        rhs = np.zeros_like(cols)
        rhs[np.asarray(rows), np.arange(len(rows))] = 1.0
        error = np.abs(self.shifted @ cols - rhs).max(axis=0)
        return error / (np.abs(cols).max(axis=0) * self.anorm)

    def block(self, sites):
        """G restricted to sites x sites."""
        rows = self.H.geometry.rows(sites)
        return self.columns(rows)[rows, :]

    def log_abs_det(self):
        return float(np.log(np.abs(np.diag(self.lu))).sum())


def greens_column(H, source, omega, tol=1e-10):
    """G(., source; omega), checked against its backward-error bound."""
    resolvent = Resolvent(H, omega)
    row = H.geometry.row(source)
    cols = resolvent.columns([row])
    residual = resolvent.residual(cols, [row])[0]
    if residual > tol:
        warnings.warn(f"Green's column residual {residual:.2e} exceeds {tol:.0e}.")
    return cols[:, 0]


def log_abs(values):
    magnitude = np.abs(values)
    result = np.full(magnitude.shape, np.nan)
    keep = magnitude > UNDERFLOW
    result[keep] = np.log(magnitude[keep])
    return result


@dataclasses.dataclass(frozen=True)
class GreensProfile:

    omega: complex
    source: tuple
    sites: np.ndarray
    log_abs: np.ndarray
    lambda_plus: float
    lambda_minus: float
    r2_plus: float
    r2_minus: float
    shape: str

    def rows(self):
        return [
            (*np.atleast_1d(s).tolist(), float(v))
            for s, v in zip(self.sites, self.log_abs)
        ]


def _fit_window(coords, values, window, side):
    lo, hi = window
    mask = (coords >= lo) & (coords <= hi)
    if hi - lo + 1 < 10:
        raise errors.FitWindowError(f"{side} window {window} spans fewer than 10 sites.")
    mask &= np.isfinite(values)
    if mask.sum() < 10:
        raise errors.FitWindowError(
            f"{side} window {window} keeps {mask.sum()} sites above underflow."
        )
    fit = stats.linregress(coords[mask], values[mask])
    return float(fit.slope), float(fit.rvalue**2)


def fit_lambda_shape(
    coords, values, source, window_plus, window_minus,
    margin=0.02, omega=np.nan, labels=None,
):
    """Least-squares slopes of ln|G| on both sides of the source.

    `coords` is the signed coordinate along the profile and `source` its
    value at the source. Windows are inclusive coordinate ranges and must
    not contain the source. `labels` optionally pairs the coordinates with
    lattice sites as (sites, source_site).
    """
    coords = np.asarray(coords, dtype=float)
    values = np.asarray(values, dtype=float)
    if not window_plus[0] > source or not window_minus[1] < source:
        raise errors.FitWindowError(
            f"Windows {window_plus} and {window_minus} must exclude source {source}."
        )
    if window_plus[1] > coords.max() or window_minus[0] < coords.min():
        raise errors.FitWindowError("Fit window leaves the profile.")
    plus, r2_plus = _fit_window(coords, values, window_plus, "plus")
    minus, r2_minus = _fit_window(coords, values, window_minus, "minus")
    return GreensProfile(
        omega=complex(omega),
        source=lattice.as_site(source) if labels is None else tuple(labels[1]),
        sites=coords if labels is None else np.asarray(labels[0]),
        log_abs=values,
        lambda_plus=plus,
        lambda_minus=minus,
        r2_plus=r2_plus,
        r2_minus=r2_minus,
        shape=gbz.classify_shape(plus, minus, margin),
    )


def default_windows(L, source, pad=10, edge=15):
    """Windows that keep `pad` sites from the source and `edge` from the ends."""
    return (source + pad, L - edge), (edge, source - pad)


def greens_profile(H, omega, source=None, windows=None, margin=0.02):
    """Fitted profile of a chain's Green's column."""
    L = H.dim
    source = (L + 1) // 2 if source is None else int(source)
    window_plus, window_minus = windows or default_windows(L, source)
    g = greens_column(H, source, omega)
    coords = np.arange(1, L + 1)
    return fit_lambda_shape(
        coords, log_abs(g), source, window_plus, window_minus, margin, omega
    )


CUTS = {
    "x": (1, 0),
    "y": (0, 1),
    "diagonal": (1, 1),
    "antidiagonal": (1, -1),
}


def profile_cut(H, omega, source=None, axis="antidiagonal", pad=3, margin=0.02):
    """Fitted profile of a planar Green's column along a line through the source.

    The coordinate along the cut is the signed step count d, so the site is
    source + d * direction. Both sides are fitted from `pad` steps outward.
    """
    g = H.geometry
    source = g.center if source is None else tuple(source)
    step = np.array(CUTS[axis])
    column = greens_column(H, source, omega)
    offsets, sites, values = [], [], []
    reach = max(g.shape)
    for d in range(-reach, reach + 1):
        site = tuple(int(c) for c in np.array(source) + d * step)
        if site in g:
            offsets.append(d)
            sites.append(site)
            values.append(column[g.row(site)])
    offsets = np.array(offsets)
    windows = (pad, offsets.max()), (offsets.min(), -pad)
    return fit_lambda_shape(
        offsets, log_abs(np.array(values)), 0, *windows,
        margin=margin, omega=omega, labels=(sites, source),
    )


def matrix_square(H):
    return H.replace(H.entries @ H.entries)


def symbol_square(op, L):
    return lattice.build_1d(laurent.product(op, op), L)


@dataclasses.dataclass(frozen=True)
class LambdaMap:
    """Fitted profiles with the root-based prediction at each frequency."""

    omegas: np.ndarray
    profiles: tuple
    predictions: tuple
    L: int

    def agreement(self, tol=0.05, r2_min=0.99):
        """Fractions of well-fitted points matching the prediction in value and sign."""
        close, sign, total = 0, 0, 0
        for profile, pred in zip(self.profiles, self.predictions):
            if profile is None or pred is None:
                continue
            if min(profile.r2_plus, profile.r2_minus) <= r2_min:
                continue
            total += 1
            close += (
                abs(profile.lambda_plus - pred.lambda_plus) <= tol
                and abs(profile.lambda_minus - pred.lambda_minus) <= tol
            )
            fitted = profile.lambda_plus - profile.lambda_minus
            sign += np.sign(fitted) == np.sign(pred.difference)
        if not total:
            return {"points": 0, "value": 0.0, "sign": 0.0}
        return {"points": total, "value": close / total, "sign": sign / total}

    def vshape_map(self):
        values = [
            np.nan if p is None else p.lambda_plus - p.lambda_minus
            for p in self.profiles
        ]
        return VShapeMap(self.omegas, np.array(values)[:, None], (self.L,))

    def representatives(self):
        """Per shape class, the frequency with the largest |lambda+ - lambda-|."""
        best = {}
        for omega, profile in zip(self.omegas, self.profiles):
            if profile is None:
                continue
            score = abs(profile.lambda_plus - profile.lambda_minus)
            if profile.shape not in best or score > best[profile.shape][0]:
                best[profile.shape] = (score, complex(omega))
        return {shape: omega for shape, (_, omega) in best.items()}


def _profile_or_none(H, omega, source, windows, margin):
    try:
        return greens_profile(H, omega, source, windows, margin)
    except (errors.NearSpectrumError, errors.FitWindowError):
        return None


def _predict_or_none(op, omega, mechanism):
    try:
        return gbz.lambda_pm_predict(op, omega, mechanism)
    except errors.BranchPointError:
        return None


def lambda_map(op, omegas, L, mechanism="squared", source=None, windows=None,
               margin=0.02, pool=None):
    """Fitted and predicted lambda+- over a frequency grid.

    `squared` studies H[h]^2 (the matrix square), `plain` H[h] itself.
    Frequencies where the solve is singular or a fit window empties are
    kept with a None profile.
    """
    omegas = np.asarray(omegas, dtype=complex).ravel()
    H = lattice.build_1d(op, L)
    if mechanism == "squared":
        H = matrix_square(H)
    jobs = {i: (H, w, source, windows, margin) for i, w in enumerate(omegas)}
    if pool is None:
        profiles = {i: _profile_or_none(*args) for i, args in jobs.items()}
    else:
        profiles = pool.map(_profile_or_none, jobs)
    predictions = tuple(_predict_or_none(op, w, mechanism) for w in omegas)
    return LambdaMap(omegas, tuple(profiles[i] for i in jobs), predictions, L)


def vshape_proxy(H, g=None, omega=0.0, subsample=None, mu=None):
    """I(omega) = max over boundary pairs (r, r') of |G(r', r) G(r, r')|.

    Pairs with r = r' count, so I is never below max |G(r, r)|^2.

    The pair product is gauge invariant, so with `mu` it is evaluated on
    T^-1 H T, whose resolvent is far better conditioned.
    """
    if mu is not None:
        H = lattice.gauge_transform(H, mu)
    g = H.geometry if g is None else g
    boundary = lattice.boundary_sites(g)
    if not boundary:
        raise ValueError("Geometry has no boundary sites.")
    if subsample is None:
        subsample = 2 if max(g.shape) > 40 else 1
    boundary = boundary[::subsample]
    resolvent = Resolvent(H, omega)
    rows = H.geometry.rows(boundary)
    block = resolvent.columns(rows)[rows, :]
    product = np.abs(block * block.T)
    return float(product.max())


@dataclasses.dataclass(frozen=True)
class VShapeMap:
    """values[i, j] belongs to omegas[i] and system_sizes[j]."""

    omegas: np.ndarray
    values: np.ndarray
    system_sizes: tuple

    @property
    def slopes(self):
        if len(self.system_sizes) < 3:
            return None
        sizes = np.asarray(self.system_sizes, dtype=float)
        result = np.full(len(self.omegas), np.nan)
        for i, row in enumerate(self.values):
            keep = np.isfinite(row)
            if keep.sum() >= 3:
                result[i] = stats.linregress(sizes[keep], row[keep]).slope
        return result

    def rows(self):
        return [
            (float(w.real), float(w.imag), float(v), int(L))
            for w, row in zip(self.omegas, self.values)
            for v, L in zip(row, self.system_sizes)
        ]


def _log_proxy(H, omega, mu=None):
    try:
        return float(np.log(vshape_proxy(H, H.geometry, omega, mu=mu)))
    except errors.NearSpectrumError:
        return np.nan


def vshape_map(builder, omegas, sizes, pool=None, mu=None):
    """ln I(omega) for every frequency and size; `builder(L)` returns H."""
    omegas = np.asarray(omegas, dtype=complex).ravel()
    operators = {L: builder(L) for L in sizes}
    jobs = {
        (i, j): (operators[L], w, mu)
        for i, w in enumerate(omegas) for j, L in enumerate(sizes)
    }
    if pool is None:
        found = {key: _log_proxy(*args) for key, args in jobs.items()}
    else:
        found = pool.map(_log_proxy, jobs)
    values = np.array([
        [found[(i, j)] for j in range(len(sizes))] for i in range(len(omegas))
    ])
    return VShapeMap(omegas, values, tuple(sizes))


def factorization_residual(op, L, omega, lhs="matrix_square", probes=None):
    """Relative mismatch of (omega - A)^-1 against the sqrt(omega) split.

    The split (1 / 2 sqrt(omega)) [(sqrt(omega) - H)^-1 + (sqrt(omega) + H)^-1]
    equals (omega - H^2)^-1 exactly. With `lhs="symbol_square"` the left
    side uses H[h^2] instead, which differs from H[h]^2 at the edges.
    """
    if omega == 0:
        raise errors.BranchPointError("omega = 0 is the branch point of sqrt.")
    H = lattice.build_1d(op, L)
    A = matrix_square(H) if lhs == "matrix_square" else symbol_square(op, L)
    rows = np.array(probes if probes is not None else [0, L // 4, L // 2, L - 1])
    root = np.sqrt(complex(omega))
    left = Resolvent(A, omega).columns(rows)
    plus = Resolvent(H, root).columns(rows)
    minus = Resolvent(H.replace(-H.entries), root).columns(rows)
    right = (plus + minus) / (2 * root)
    return float(np.abs(left - right).max() / np.abs(left).max())


def boundary_potential_report(H, omega, delta, tol=1e-3):
    """PotentialReport for H -> H - delta (|1><1| + |L><L|) from one LU."""
    resolvent = Resolvent(H, omega)
    ends = [H.geometry.sites[0], H.geometry.sites[-1]]
    block = resolvent.block(ends)
    phi = resolvent.log_abs_det() / H.dim
    return spectra.perturbation_series(block, delta, H.dim, omega, phi, tol)
