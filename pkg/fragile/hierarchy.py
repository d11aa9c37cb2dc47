"""Where in the frequency plane can Green's functions turn V-shaped?

A frequency lies outside the Bloch spectrum when omega - h(k) stays away
from zero and does not wind around it. It lies outside the amoebic
spectrum when some imaginary shift k -> k - i mu achieves the same. Only
inside the amoebic spectrum can boundary-driven fragile zero modes make
the resolvent grow in every direction.
"""

import dataclasses
import warnings

import numpy as np
import scipy.linalg
from scipy import stats

from . import errors
from . import gbz
from . import greens
from . import lattice
from . import laurent

ZONES = ("outside_bloch", "outside_amoeba_inside_bloch", "inside_amoeba")


def default_grid(dim):
    return 1024 if dim == 1 else 128


def _field(symbols, omega, mu, grid):
    """omega - h(k - i mu) on the k-grid, one array axis per lattice axis."""
    k = 2 * np.pi * np.arange(grid) / grid
    parts = symbols.axis_values(mu, k)
    field = np.asarray(omega, dtype=complex) - parts[0]
    for part in parts[1:]:
        field = field[..., None] - part
    return field


@dataclasses.dataclass(frozen=True)
class WindingResult:
    """Integer windings per axis with the evidence behind them.

    `lines_zero` holds when every single line along every axis has zero
    winding, which is stronger than zero averages.
    """

    values: tuple
    gap: float
    max_increment: float
    min_distance: float
    lines_zero: bool


def winding(symbols, omega, mu=0.0, grid=None, atol=1e-12):
    """Counter-clockwise winding of omega - h(k - i mu) along each k_i."""
    symbols = laurent.SeparableSymbol.of(symbols)
    grid = grid or default_grid(symbols.dim)
    field = _field(symbols, omega, mu, grid)
    distance = float(np.abs(field).min())
    if distance < atol:
        raise errors.OnSpectrumError(
            f"omega - h vanishes on the k-grid at omega={omega}, mu={mu}."
        )
    values, gaps, increments, lines_zero = [], [], [], True
    for axis in range(symbols.dim):
        rolled = np.roll(field, -1, axis=axis)
        steps = np.angle(rolled / field)
        lines = steps.sum(axis=axis) / (2 * np.pi)
        average = float(np.mean(lines))
        values.append(int(round(average)))
        gaps.append(abs(average - round(average)))
        increments.append(float(np.abs(steps).max()))
        lines_zero &= bool(np.all(np.abs(lines) < 0.5))
    return WindingResult(
        tuple(values), max(gaps), max(increments), distance, lines_zero
    )


@dataclasses.dataclass(frozen=True)
class HierarchyVerdict:

    omega: complex
    windings_mu0: tuple
    mu_star: tuple
    zone: str
    certificates: dict

    def row(self):
        dim = len(self.mu_star or self.windings_mu0 or (0,))
        windings = self.windings_mu0 or (None,) * dim
        mu = self.mu_star or (None,) * dim
        return (
            float(self.omega.real), float(self.omega.imag), self.zone,
            *windings, *mu,
            *(self.certificates.get(k) for k in sorted(self.certificates)),
        )


def _zero_winding_distance(symbols, omega, mu, grid, eps):
    """Distance certificate when mu removes all windings, otherwise None."""
    try:
        result = winding(symbols, omega, mu, grid)
    except errors.OnSpectrumError:
        return None, None
    # Steps near pi leave the sense of rotation to rounding.
    resolved = result.max_increment < np.pi / 2
    if result.min_distance <= eps or not result.lines_zero or not resolved:
        return None, result
    return result.min_distance, result


def _search_axes(center, half_width, points):
    return [np.linspace(c - half_width, c + half_width, points) for c in center]


def amoeba_membership(
    symbols, omega, mu_range=2.0, points=41, levels=3, zoom=4, eps=1e-3, grid=None,
    seed=None,
):
    """Zone of omega from the mu = 0 test and a bounded search over mu.

    The search scans [-mu_range, mu_range]^d plus the `seed` point, by
    default the per-axis GBZ gauge estimate, then refines `levels` times
    around the best certified mu with windows shrinking by `zoom`.
    """
    symbols = laurent.SeparableSymbol.of(symbols)
    dim = symbols.dim
    grid = grid or default_grid(dim)
    omega = complex(omega)
    zero = (0.0,) * dim
    distance0, result0 = _zero_winding_distance(symbols, omega, zero, grid, eps)
    windings0 = result0.values if result0 else None
    certificates = {
        "min_dist_mu0": result0.min_distance if result0 else 0.0,
        "rounding_gap_mu0": result0.gap if result0 else np.nan,
    }
    if distance0 is not None:
        return HierarchyVerdict(omega, windings0, zero, "outside_bloch", certificates)

    if seed is None:
        seed = tuple(gbz.gauge_estimate(p) for p in symbols.parts)
    seed = np.broadcast_to(np.asarray(seed, dtype=float), (dim,))
    best, best_mu = None, None
    half_width = mu_range
    center = zero
    spacing = 2 * mu_range / (points - 1)
    for level in range(levels + 1):
        count = points if level == 0 else 2 * zoom + 1
        axes = _search_axes(center, half_width, count)
        candidates = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, dim)
        if level == 0:
            candidates = np.concatenate([candidates, seed[None]])
        for mu in candidates:
            if np.any(np.abs(mu) > mu_range + 1e-12):
                continue
            distance, _ = _zero_winding_distance(symbols, omega, mu, grid, eps)
            if distance is not None and (best is None or distance > best):
                best, best_mu = distance, tuple(float(m) for m in mu)
        if best_mu is None:
            break
        center, half_width = best_mu, spacing
        spacing /= zoom

    if best_mu is None:
        return HierarchyVerdict(omega, windings0, None, "inside_amoeba", certificates)
    if np.any(np.abs(best_mu) >= mu_range - 1e-9):
        warnings.warn(
            f"mu* = {best_mu} lies on the search boundary {mu_range}; "
            "widen the domain to trust the zone."
        )
    certificates["min_dist_mu_star"] = best
    return HierarchyVerdict(
        omega, windings0, best_mu, "outside_amoeba_inside_bloch", certificates
    )


def gauge_bound_check(H, symbols, omega, mu, grid=None, eps=1e-3, sources=8, slack=1.05):
    """Checks |G(r, r')| <= e^{mu . (r - r')} C(omega, mu) on probe pairs.

    C is the k-grid average of 1 / |omega - h(k - i mu)|. Probe pairs take
    every site r against up to `sources` evenly spaced columns r'. The
    bound counts as holding when the largest ratio stays below `slack`.
    """
    symbols = laurent.SeparableSymbol.of(symbols)
    grid = grid or default_grid(symbols.dim)
    mu = np.broadcast_to(np.asarray(mu, dtype=float), (symbols.dim,))
    distance, _ = _zero_winding_distance(symbols, omega, mu, grid, eps)
    if distance is None:
        raise errors.InvalidCertificateError(
            f"mu={tuple(mu)} does not remove all windings off the spectrum at {omega}."
        )
    constant = float(np.mean(1.0 / np.abs(_field(symbols, omega, mu, grid))))
    resolvent = greens.Resolvent(H, omega)
    rows = np.unique(np.linspace(0, H.dim - 1, min(sources, H.dim)).astype(int))
    cols = resolvent.columns(rows)
    coords = H.geometry.coords.astype(float)
    exponent = (coords[:, None, :] - coords[None, rows, :]) @ mu
    ratio = np.abs(cols) / (np.exp(exponent) * constant)
    max_ratio = float(ratio.max())
    return {
        "bound_holds": max_ratio <= slack,
        "max_violation": max(0.0, max_ratio - 1.0),
        "max_ratio": max_ratio,
        "margin": 1.0 / max_ratio,
        "constant": constant,
    }


@dataclasses.dataclass(frozen=True)
class FragileModeScan:

    omega: complex
    sizes: tuple
    sigma_min: tuple
    decay_rate: float


def smallest_singular_value(H, omega):
    shifted = omega * np.eye(H.dim) - H.entries
    return float(scipy.linalg.svdvals(shifted, check_finite=False).min())


def fragile_mode_scan(builder, omega, sizes, mu=None, pool=None):
    """sigma_min(omega - H(L)) across sizes and its exponential rate in L.

    With `mu`, the operators are gauge transformed first, which separates
    fragile zero modes from those forced by a winding.
    """
    sizes = tuple(int(L) for L in sizes)
    if len(sizes) < 3 or list(sizes) != sorted(set(sizes)):
        warnings.warn(f"Sizes {sizes} should be at least three increasing values.")

    def job(L):
        H = builder(L)
        if mu is not None:
            H = lattice.gauge_transform(H, mu)
        return smallest_singular_value(H, omega)

    jobs = {L: (L,) for L in sizes}
    found = pool.map(job, jobs) if pool else {L: job(L) for L in sizes}
    sigma = tuple(found[L] for L in sizes)
    rate = np.nan
    if len(sizes) >= 2:
        rate = float(stats.linregress(sizes, np.log(np.maximum(sigma, 1e-300))).slope)
    return FragileModeScan(complex(omega), sizes, sigma, rate)


def _proxy_slope(builder, omega, sizes, mu=None):
    logs = []
    for L in sizes:
        try:
            logs.append(np.log(greens.vshape_proxy(builder(L), omega=omega, mu=mu)))
        except errors.NearSpectrumError:
            return np.nan
    return float(stats.linregress(sizes, logs).slope)


def hierarchy_classify(
    symbols, omegas, builder=None, sizes=(), margin=0.02, pool=None, **search
):
    """Verdict per frequency, optionally cross-checked against the resolvent.

    With a `builder` and three or more `sizes`, the slope of ln I(omega)
    versus L is recorded. Frequencies outside the amoebic spectrum must not
    show growth beyond `margin`; this is stored as `consistent`.
    """
    symbols = laurent.SeparableSymbol.of(symbols)
    omegas = np.asarray(omegas, dtype=complex).ravel()

    def job(omega):
        verdict = amoeba_membership(symbols, omega, **search)
        if builder is None or len(sizes) < 3:
            return verdict
        slope = _proxy_slope(builder, omega, sizes, verdict.mu_star)
        certificates = dict(verdict.certificates, proxy_slope=slope)
        if verdict.zone != "inside_amoeba" and np.isfinite(slope):
            certificates["consistent"] = bool(slope <= margin)
        return dataclasses.replace(verdict, certificates=certificates)

    jobs = {i: (w,) for i, w in enumerate(omegas)}
    found = pool.map(job, jobs) if pool else {i: job(w) for i, (w,) in jobs.items()}
    return [found[i] for i in jobs]
