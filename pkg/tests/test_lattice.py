import numpy as np
import pytest

from fragile import errors
from fragile import lattice
from fragile import laurent


def test_build_1d_toeplitz_convention(two_step):
    """Entry (i, j) holds t_{j - i}."""
    H = lattice.build_1d(two_step, 6)
    assert H.entries[0, 1] == 1.0
    assert H.entries[0, 2] == 0.5
    assert H.entries[2, 0] == 0.2j
    assert H.entries[0, 3] == 0.0
    assert H.dim == 6 and H.bc == "open"


def test_build_1d_periodic_wraps(hatano_nelson):
    """The periodic chain closes the ring in both directions."""
    H = lattice.build_1d(hatano_nelson, 5, "periodic")
    assert H.entries[4, 0] == 1.2
    assert H.entries[0, 4] == 1.1


def test_chain_too_short(two_step):
    """L must exceed m + n."""
    with pytest.raises(errors.ChainTooShortError):
        lattice.build_1d(two_step, 4)
    lattice.build_1d(two_step, 5)


def test_entries_are_read_only(hatano_nelson):
    H = lattice.build_1d(hatano_nelson, 4)
    with pytest.raises(ValueError):
        H.entries[0, 0] = 1.0


def test_kron_sum_basis_order(hatano_nelson):
    """Row of (x, y) is (x - 1) Ly + (y - 1)."""
    Hx = lattice.build_1d(hatano_nelson, 3)
    Hy = lattice.build_1d(laurent.LaurentOperator({1: 2.0, -1: 3.0}), 4)
    H = lattice.kron_sum_2d(Hx, Hy)
    g = H.geometry
    assert g.shape == (3, 4)
    assert g.row((2, 3)) == 1 * 4 + 2
    assert H.entries[g.row((1, 1)), g.row((2, 1))] == 1.2
    assert H.entries[g.row((1, 1)), g.row((1, 2))] == 2.0
    assert H.entries[g.row((1, 1)), g.row((2, 2))] == 0.0


def test_kron_sum_needs_matching_bc(hatano_nelson):
    with pytest.raises(ValueError):
        lattice.kron_sum_2d(
            lattice.build_1d(hatano_nelson, 3),
            lattice.build_1d(hatano_nelson, 3, "periodic"),
        )


def test_geometries():
    """Corner cut 1 drops the four corners; the disk fits the square."""
    assert len(lattice.square(5)) == 25
    cut = lattice.corner_cut(5, 1)
    assert len(cut) == 21
    assert (1, 1) not in cut and (5, 5) not in cut and (1, 2) in cut
    assert len(lattice.corner_cut(5, 2)) == 25 - 4 * 3
    disk = lattice.disk(10)
    assert 0 < len(disk) < 100
    assert disk.center == (5, 5)
    with pytest.raises(KeyError):
        lattice.make_geometry("hexagon", 5)


def test_site_lookup():
    g = lattice.square(3)
    assert g.row((3, 3)) == 8
    with pytest.raises(errors.SiteNotInGeometryError):
        g.row((4, 1))
    assert lattice.interval(4).row(2) == 1


def test_boundary_and_corner_sites():
    """A nearest-neighbour square has 4L - 4 boundary sites and 4 corners."""
    g = lattice.square(5)
    assert len(lattice.boundary_sites(g)) == 16
    assert sorted(lattice.corner_sites(g)) == [(1, 1), (1, 5), (5, 1), (5, 5)]
    wide = lattice.square(6, hop_range=2)
    assert len(lattice.boundary_sites(wide)) == 36 - 4


def test_build_2d_restricts(nnn):
    """Geometry operators are principal submatrices of the square."""
    symbols = laurent.SeparableSymbol(nnn, nnn)
    full = lattice.build_2d(symbols, lattice.square(6, hop_range=2))
    cut = lattice.build_2d(symbols, lattice.corner_cut(6, 1, 2))
    assert cut.dim == 32
    a, b = (1, 2), (3, 2)
    assert cut.entries[cut.geometry.row(a), cut.geometry.row(b)] == (
        full.entries[full.geometry.row(a), full.geometry.row(b)]
    )


def test_perturbations():
    """Corner terms hit the corners; disorder is reproducible per seed."""
    g = lattice.square(4)
    H = lattice.kron_sum_2d(
        lattice.build_1d(laurent.preset("chain"), 4), lattice.build_1d(laurent.preset("chain"), 4)
    )
    corner = lattice.add_onsite(H, lattice.corner_onsite(g, 0.5))
    diff = np.diag(corner.entries - H.entries)
    assert np.count_nonzero(diff) == 4 and np.allclose(diff[diff != 0], 0.5)
    a = lattice.boundary_disorder(g, width=1.0, seed=3).values()
    b = lattice.boundary_disorder(g, width=1.0, seed=3).values()
    c = lattice.boundary_disorder(g, width=1.0, seed=4).values()
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert np.all(np.abs(a) <= 0.5)
    with pytest.raises(errors.SiteNotInGeometryError):
        lattice.add_onsite(H, lattice.custom_onsite([(9, 9)], 1.0))


def test_gauge_transform_hermitizes_hatano_nelson(hatano_nelson):
    """T^-1 H T with mu = ln(b / a) / 2 is Hermitian and isospectral."""
    H = lattice.build_1d(hatano_nelson, 12)
    mu = 0.5 * np.log(1.1 / 1.2)
    G = lattice.gauge_transform(H, mu)
    assert lattice.is_hermitian(G, atol=1e-12)
    assert not lattice.is_hermitian(H)
    expected = np.sort(np.linalg.eigvalsh(G.entries))
    assert np.allclose(np.sort(np.linalg.eigvals(H.entries).real), expected, atol=1e-8)


def test_triplets(hatano_nelson):
    H = lattice.build_1d(hatano_nelson, 3)
    assert (1, 2, 1.2, 0.0) in lattice.triplets(H)
    assert len(lattice.triplets(H)) == 4
