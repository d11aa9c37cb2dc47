"""Real-space operators on chains and two-dimensional geometries.

Matrices are dense complex arrays indexed by the canonical site order of
their geometry: x ascending in 1D, x outer and y inner in 2D, so that the
row of site (x, y) on an Lx by Ly box is (x - 1) * Ly + (y - 1). Sites are
1-based coordinate tuples.
"""

import dataclasses

import numpy as np

from . import errors
from . import laurent


@dataclasses.dataclass(frozen=True)
class LatticeGeometry:

    sites: tuple
    kind: str = "custom"
    hop_range: int = 1
    index: dict = dataclasses.field(default=None, compare=False, repr=False)

    def __post_init__(self):
        sites = tuple(tuple(int(c) for c in as_site(s)) for s in self.sites)
        if not sites:
            raise ValueError("Geometry has no sites.")
        if len({len(s) for s in sites}) != 1:
            raise ValueError("Sites mix coordinate dimensions.")
        index = {site: i for i, site in enumerate(sites)}
        if len(index) != len(sites):
            raise ValueError("Geometry sites are not unique.")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "index", index)

    def __len__(self):
        return len(self.sites)

    def __contains__(self, site):
        return as_site(site) in self.index

    @property
    def dim(self):
        return len(self.sites[0])

    @property
    def shape(self):
        """Extent of the bounding box anchored at the origin site 1."""
        return tuple(int(x) for x in np.max(self.coords, axis=0))

    @property
    def coords(self):
        return np.array(self.sites, dtype=int)

    @property
    def center(self):
        return tuple((L + 1) // 2 for L in self.shape)

    def row(self, site):
        site = as_site(site)
        try:
            return self.index[site]
        except KeyError:
            raise errors.SiteNotInGeometryError(f"Site {site} is not in the geometry.")

    def rows(self, sites):
        return np.array([self.row(s) for s in sites], dtype=int)


def as_site(site):
    if isinstance(site, (int, np.integer)):
        return (int(site),)
    return tuple(int(c) for c in site)


def interval(L, hop_range=1):
    return LatticeGeometry([(x,) for x in range(1, L + 1)], "interval", hop_range)


def square(L, Ly=None, hop_range=1):
    Ly = L if Ly is None else Ly
    sites = [(x, y) for x in range(1, L + 1) for y in range(1, Ly + 1)]
    return LatticeGeometry(sites, "square", hop_range)


def corner_cut(L, cut=1, hop_range=1):
    """Square without the sites at Manhattan distance < cut from a corner."""
    corners = [(1, 1), (1, L), (L, 1), (L, L)]
    sites = [
        s for s in square(L).sites
        if all(abs(s[0] - c[0]) + abs(s[1] - c[1]) >= cut for c in corners)
    ]
    return LatticeGeometry(sites, "corner_cut", hop_range)


def disk(L, R=None, hop_range=1):
    R = L / 2 if R is None else R
    c = (L + 1) / 2
    sites = [
        s for s in square(L).sites if (s[0] - c) ** 2 + (s[1] - c) ** 2 <= R**2
    ]
    return LatticeGeometry(sites, "disk", hop_range)


def custom(sites, hop_range=1):
    return LatticeGeometry(sites, "custom", hop_range)


def make_geometry(kind, L, R=None, cut=1, hop_range=1):
    if kind == "interval":
        return interval(L, hop_range)
    if kind == "square":
        return square(L, hop_range=hop_range)
    if kind == "corner_cut":
        return corner_cut(L, cut, hop_range)
    if kind == "disk":
        return disk(L, R, hop_range)
    raise KeyError(f"Unknown geometry kind: {kind}")


def _neighbour_counts(g):
    counts = np.zeros(len(g), dtype=int)
    for i, site in enumerate(g.sites):
        for axis in range(g.dim):
            for d in range(1, g.hop_range + 1):
                for sign in (-1, 1):
                    other = list(site)
                    other[axis] += sign * d
                    counts[i] += tuple(other) in g.index
    return counts


def boundary_sites(g):
    """Sites missing at least one axis neighbour within the hopping range."""
    counts = _neighbour_counts(g)
    full = 2 * g.dim * g.hop_range
    return [s for s, c in zip(g.sites, counts) if c < full]


def corner_sites(g):
    """Boundary sites with the fewest in-geometry neighbours."""
    counts = _neighbour_counts(g)
    lowest = counts.min()
    return [s for s, c in zip(g.sites, counts) if c == lowest]


@dataclasses.dataclass(frozen=True)
class OperatorMatrix:

    entries: np.ndarray
    geometry: LatticeGeometry
    bc: str = "open"

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        assert entries.shape == (len(self.geometry),) * 2, (
            entries.shape, len(self.geometry))
        assert self.bc in ("open", "periodic"), self.bc
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def norm_inf(self):
        return float(np.abs(self.entries).sum(axis=1).max())

    def replace(self, entries):
        return type(self)(entries, self.geometry, self.bc)


def build_1d(op, L, bc="open"):
    """Banded Toeplitz matrix with (H)_{ij} = t_{j-i}."""
    if L <= op.m + op.n:
        raise errors.ChainTooShortError(
            f"Chain length {L} must exceed the hopping range m + n = {op.m + op.n}."
        )
    assert bc in ("open", "periodic"), bc
    H = np.zeros((L, L), dtype=complex)
    for s, t in op.coeffs.items():
        rows = np.arange(max(0, -s), min(L, L - s))
        H[rows, rows + s] += t
        if bc == "periodic" and s != 0:
            wrap = np.arange(L - s, L) if s > 0 else np.arange(0, -s)
            H[wrap, (wrap + s) % L] += t
    return OperatorMatrix(H, interval(L, op.hop_range), bc)


def kron_sum_2d(Hx, Hy):
    """Hx (x) I + I (x) Hy on the Lx by Ly box."""
    if Hx.geometry.dim != 1 or Hy.geometry.dim != 1:
        raise ValueError("Kronecker sums take two chains.")
    if Hx.bc != Hy.bc:
        raise ValueError(f"Boundary conditions differ: {Hx.bc} and {Hy.bc}.")
    Lx, Ly = Hx.dim, Hy.dim
    entries = np.kron(Hx.entries, np.eye(Ly)) + np.kron(np.eye(Lx), Hy.entries)
    hop = max(Hx.geometry.hop_range, Hy.geometry.hop_range)
    return OperatorMatrix(entries, square(Lx, Ly, hop), Hx.bc)


def restrict_geometry(H, g):
    """Principal submatrix of H on the sites of g."""
    rows = np.array([H.geometry.row(s) for s in g.sites], dtype=int)
    return OperatorMatrix(H.entries[np.ix_(rows, rows)], g, H.bc)


def build_2d(symbols, g, bc="open"):
    """Separable operator restricted to an arbitrary planar geometry."""
    symbols = laurent.SeparableSymbol.of(symbols)
    assert symbols.dim == 2 and g.dim == 2, (symbols, g.dim)
    Lx, Ly = g.shape
    hx, hy = symbols.parts
    full = kron_sum_2d(build_1d(hx, Lx, bc), build_1d(hy, Ly, bc))
    if g.kind == "square" and len(g) == Lx * Ly:
        return full
    return restrict_geometry(full, g)


@dataclasses.dataclass(frozen=True)
class Perturbation:

    kind: str
    strength: complex
    site_set: tuple
    seed: int = 0
    width: float = 1.0

    def __post_init__(self):
        assert self.kind in ("corner_onsite", "boundary_disorder", "custom_onsite")
        object.__setattr__(self, "site_set", tuple(as_site(s) for s in self.site_set))

    def values(self):
        """On-site increments aligned with site_set."""
        if self.kind == "boundary_disorder":
            rng = np.random.default_rng(self.seed)
            draws = rng.uniform(-self.width / 2, self.width / 2, len(self.site_set))
            return self.strength * draws
        return np.full(len(self.site_set), self.strength, dtype=complex)


def corner_onsite(g, delta):
    return Perturbation("corner_onsite", delta, corner_sites(g))


def boundary_disorder(g, width=1.0, seed=0, strength=1.0):
    return Perturbation(
        "boundary_disorder", strength, boundary_sites(g), seed=seed, width=width
    )


def custom_onsite(sites, delta):
    return Perturbation("custom_onsite", delta, sites)


def add_onsite(H, p):
    rows = H.geometry.rows(p.site_set)
    entries = H.entries.copy()
    entries[rows, rows] += p.values()
    return H.replace(entries)


def gauge_transform(H, mu):
    """Similarity T^-1 H T with T|r> = e^{mu . r}|r>.

    Entry (i, j) picks up e^{mu . (r_j - r_i)}, which turns the symbol of a
    translation-invariant operator into h(k - i mu). Coordinates are
    centred first; the similarity is unchanged by that shift.
    """
    mu = np.broadcast_to(np.asarray(mu, dtype=float), (H.geometry.dim,))
    coords = H.geometry.coords.astype(float)
    coords -= coords.mean(axis=0)
    weight = np.exp(coords @ mu)
    return H.replace(H.entries / weight[:, None] * weight[None, :])


def is_hermitian(H, atol=0.0):
    return bool(np.allclose(H.entries, H.entries.conj().T, rtol=0.0, atol=atol))


def triplets(H, atol=0.0):
    """Nonzero entries as (row, col, re, im) tuples, 1-based."""
    rows, cols = np.nonzero(np.abs(H.entries) > atol)
    values = H.entries[rows, cols]
    return [
        (int(i) + 1, int(j) + 1, float(v.real), float(v.imag))
        for i, j, v in zip(rows, cols, values)
    ]
