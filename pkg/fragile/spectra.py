"""Eigenvalue clouds, spectral metrics and the logarithmic potential."""

import dataclasses

import numpy as np
import scipy.linalg
from scipy.spatial import distance

from . import errors
from . import laurent
from . import lattice


@dataclasses.dataclass(frozen=True)
class SpectrumCloud:

    values: np.ndarray
    source: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex).ravel()
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "source", dict(self.source))

    def __len__(self):
        return len(self.values)

    @property
    def max_imag(self):
        if not len(self):
            raise errors.EmptyCloudError("Spectrum cloud is empty.")
        return float(self.values.imag.max())

    @property
    def points(self):
        return np.stack([self.values.real, self.values.imag], axis=1)

    def rows(self, tag=None):
        tag = tag or self.source.get("tag", "")
        return [(float(v.real), float(v.imag), tag) for v in self.values]


def _describe(H, **extra):
    return {
        "geometry": H.geometry.kind,
        "dim": H.dim,
        "bc": H.bc,
        **extra,
    }


def eig(H, mu=None, tag=None):
    """All eigenvalues of a dense operator.

    With `mu`, the spectrum of the similar matrix T^-1 H T is computed
    instead. Skin-mode matrices become far less non-normal under the right
    gauge, which keeps eigenvalues accurate at large sizes.
    """
    if H.dim < 1:
        raise ValueError("Empty operator.")
    matrix = H if mu is None else lattice.gauge_transform(H, mu)
    values = scipy.linalg.eigvals(matrix.entries, check_finite=False)
    source = _describe(H, mu=None if mu is None else np.ravel(mu).tolist())
    if tag:
        source["tag"] = tag
    return SpectrumCloud(values, source)


def residual_witness(H, energy):
    """Smallest singular value of (E - H), relative to the operator norm."""
    shifted = energy * np.eye(H.dim) - H.entries
    sigma = scipy.linalg.svdvals(shifted, check_finite=False)
    return float(sigma.min() / max(np.abs(H.entries).max(), 1e-300))


def eigen_residuals(H):
    """Relative residuals |Hv - Ev| / (|v| |H|) of every eigenpair."""
    values, vectors = scipy.linalg.eig(H.entries, check_finite=False)
    residual = H.entries @ vectors - vectors * values[None, :]
    norm = np.linalg.norm(H.entries, 2)
    return np.linalg.norm(residual, axis=0) / np.linalg.norm(vectors, axis=0) / norm


def separable_spectrum_2d(cloud_x, cloud_y):
    values = (cloud_x.values[:, None] + cloud_y.values[None, :]).ravel()
    return SpectrumCloud(values, {"geometry": "square", "separable": True})


def bloch_spectrum(symbols, grid=256):
    """Symbol values on the uniform real k-grid of every axis."""
    if grid < 64:
        raise ValueError(f"Bloch grid {grid} is below 64 points per axis.")
    symbols = laurent.SeparableSymbol.of(symbols)
    k = 2 * np.pi * np.arange(grid) / grid
    axes = symbols.axis_values(0.0, k)
    values = axes[0]
    for other in axes[1:]:
        values = (values[:, None] + other[None, :]).ravel()
    return SpectrumCloud(values, {"bc": "bloch", "grid": grid, "dim": symbols.dim})


def hausdorff(a, b):
    pa, pb = a.points, b.points
    return float(max(distance.directed_hausdorff(pa, pb)[0],
                     distance.directed_hausdorff(pb, pa)[0]))


def cloud_metrics(a, b):
    if not len(a) or not len(b):
        raise errors.EmptyCloudError("Cannot compare an empty spectrum cloud.")
    return {
        "max_imag_a": a.max_imag,
        "hausdorff": hausdorff(a, b),
        "centroid_shift": float(abs(a.values.mean() - b.values.mean())),
    }


def noise_floor(dense, reference, scale=1.0):
    """Spurious imaginary parts of a dense eigensolve of a real spectrum.

    `reference` is the exactly computed spectrum of the same operator (for
    separable models, the 1D sums). The floor never drops below machine
    precision times `scale`, the operator norm.
    """
    excess = np.abs(dense.values.imag).max() - np.abs(reference.values.imag).max()
    return float(max(excess, np.finfo(float).eps * scale))


def coulomb_potential(cloud, omega, atol=1e-12):
    """Average of ln|omega - E| over the cloud."""
    if not len(cloud):
        raise errors.EmptyCloudError("Potential of an empty cloud.")
    dist = np.abs(omega - cloud.values)
    if dist.min() < atol:
        raise errors.SingularPotentialError(
            f"Frequency {omega} sits on an eigenvalue (distance {dist.min():.2e})."
        )
    return float(np.log(dist).mean())


def log_det_potential(H, omega):
    """(1/dim) ln|det(omega - H)|, the same potential without eigenvalues."""
    sign, logabs = np.linalg.slogdet(omega * np.eye(H.dim) - H.entries)
    if sign == 0 or not np.isfinite(logabs):
        raise errors.SingularPotentialError(f"omega - H is singular at {omega}.")
    return float(logabs / H.dim)


@dataclasses.dataclass(frozen=True)
class PotentialReport:

    omega: complex
    phi: float
    series_terms: tuple
    converged: bool

    def summary(self):
        first, second = self.series_terms
        return {
            "omega": self.omega,
            "phi": self.phi,
            "dphi1": first,
            "dphi2": second,
            "converged": self.converged,
        }


def perturbation_series(G, delta, L, omega=np.nan, phi=np.nan, tol=1e-3):
    """First and second order change of the potential under H -> H - delta B.

    B projects on two sites (the chain ends). `G` is the 2x2 block of the
    resolvent (omega - H)^-1 on those sites. A Perturbation adding v on the
    sites corresponds to delta = -v.
    """
    if isinstance(delta, lattice.Perturbation):
        assert len(delta.site_set) == 2, delta.site_set
        delta = -delta.strength
    G = np.asarray(G, dtype=complex).reshape(2, 2)
    first = delta / L * (G[0, 0] + G[1, 1]).real
    square = G[0, 0] ** 2 + G[1, 1] ** 2 + 2 * G[0, 1] * G[1, 0]
    second = -(delta**2) / (2 * L) * square.real
    first, second = float(np.real(first)), float(np.real(second))
    converged = abs(second) <= tol * max(1.0, abs(first))
    return PotentialReport(complex(omega), float(phi), (first, second), converged)
