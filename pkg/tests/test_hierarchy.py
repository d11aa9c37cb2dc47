import functools
import warnings

import numpy as np
import pytest

from fragile import errors
from fragile import hierarchy
from fragile import lattice
from fragile import laurent
from fragile import spectra


@pytest.fixture
def lopsided():
    """Hatano-Nelson chain with a strong imbalance, gauge mu = ln(1/2)."""
    return laurent.preset("hatano_nelson", a=2.0, b=0.5)


def test_winding_of_hatano_nelson(hatano_nelson):
    """The Bloch ellipse winds once counter-clockwise around its centre."""
    result = hierarchy.winding(hatano_nelson, 0.05j)
    assert result.values == (1,)
    assert result.gap < 1e-9
    assert not result.lines_zero
    outside = hierarchy.winding(hatano_nelson, 3.0)
    assert outside.values == (0,)
    assert outside.lines_zero
    assert outside.min_distance > 0.5


def test_winding_on_spectrum_raises(hermitian_chain):
    with pytest.raises(errors.OnSpectrumError):
        hierarchy.winding(hermitian_chain, 0.0, grid=1024)


def test_winding_in_two_dimensions(nnn):
    symbols = laurent.SeparableSymbol(nnn, nnn)
    result = hierarchy.winding(symbols, 10.0)
    assert result.values == (0, 0)
    assert result.lines_zero


def test_zones_of_hatano_nelson(hatano_nelson):
    """Inside the ellipse but off the open segment lies outside the amoeba."""
    outside = hierarchy.amoeba_membership(hatano_nelson, 1.0j)
    assert outside.zone == "outside_bloch"
    assert outside.mu_star == (0.0,)
    between = hierarchy.amoeba_membership(hatano_nelson, 0.05j)
    assert between.zone == "outside_amoeba_inside_bloch"
    assert between.mu_star[0] == pytest.approx(0.5 * np.log(1.1 / 1.2), abs=0.02)
    assert between.windings_mu0 == (1,)
    assert between.certificates["min_dist_mu_star"] > 1e-3
    inside = hierarchy.amoeba_membership(hatano_nelson, 0.5)
    assert inside.zone == "inside_amoeba"
    assert inside.mu_star is None


def test_hermitian_chain_has_two_zones(hermitian_chain):
    """Self-adjoint symbols have no zone between Bloch and amoebic spectra."""
    omegas = [0.5j, 3.0, -1.0, 0.5, 1.0 + 0.2j]
    zones = {hierarchy.amoeba_membership(hermitian_chain, w).zone for w in omegas}
    assert zones == {"outside_bloch", "inside_amoeba"}


def test_boundary_warning(lopsided):
    """A certified mu on the edge of the domain is reported."""
    with pytest.warns(UserWarning):
        verdict = hierarchy.amoeba_membership(
            lopsided, 0.5j, mu_range=0.6, points=13, levels=0
        )
    assert verdict.zone == "outside_amoeba_inside_bloch"


def test_verdict_row(hatano_nelson):
    verdict = hierarchy.amoeba_membership(hatano_nelson, 0.05j)
    row = verdict.row()
    assert row[:3] == (0.0, 0.05, "outside_amoeba_inside_bloch")
    assert row[3] == 1


def test_gauge_bound(lopsided):
    """The deformed bound certificate needs a mu without windings."""
    H = lattice.build_1d(lopsided, 30)
    mu = 0.5 * np.log(0.5 / 2.0)
    report = hierarchy.gauge_bound_check(H, lopsided, 0.5j, mu)
    assert 0 < report["max_ratio"] < 2.0
    assert report["margin"] == pytest.approx(1.0 / report["max_ratio"])
    assert report["constant"] > 0
    with pytest.raises(errors.InvalidCertificateError):
        hierarchy.gauge_bound_check(H, lopsided, 0.5j, 0.0)


def test_fragile_mode_scan(lopsided):
    """Winding-forced singular values decay in L; the gauge removes them."""
    builder = functools.partial(lattice.build_1d, lopsided)
    plain = hierarchy.fragile_mode_scan(builder, 0.5j, (20, 30, 40))
    gauged = hierarchy.fragile_mode_scan(
        builder, 0.5j, (20, 30, 40), mu=0.5 * np.log(0.25)
    )
    assert plain.decay_rate < -0.2
    assert abs(gauged.decay_rate) < 0.05
    assert gauged.sigma_min[0] == pytest.approx(
        hierarchy.smallest_singular_value(
            lattice.gauge_transform(builder(20), 0.5 * np.log(0.25)), 0.5j
        )
    )
    with pytest.warns(UserWarning):
        hierarchy.fragile_mode_scan(builder, 0.5j, (20, 30))


def test_classify_with_cross_check(lopsided):
    """Frequencies outside the amoeba show no growth of the proxy."""
    builder = functools.partial(lattice.build_1d, lopsided)
    verdicts = hierarchy.hierarchy_classify(
        lopsided, [3.0j, 0.5j], builder, (8, 10, 12), points=21
    )
    assert [v.zone for v in verdicts] == ["outside_bloch", "outside_amoeba_inside_bloch"]
    for verdict in verdicts:
        assert verdict.certificates["consistent"]
        assert verdict.certificates["proxy_slope"] < 0.02


def test_open_spectrum_is_enclosed(lopsided):
    """Every open-chain eigenvalue lies inside the amoebic spectrum."""
    values = spectra.eig(lattice.build_1d(lopsided, 20), 0.5 * np.log(0.25)).values
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        verdicts = hierarchy.hierarchy_classify(lopsided, values[::4], points=21)
    assert all(v.zone == "inside_amoeba" for v in verdicts)


def test_outside_bloch_resolvent_is_size_independent(two_step):
    """Far from the spectrum the largest |G| barely depends on L."""
    omegas = 10.0 * np.exp(1j * np.linspace(0, 2 * np.pi, 8, endpoint=False))
    for omega in omegas:
        assert hierarchy.amoeba_membership(two_step, omega).zone == "outside_bloch"
        small, large = (
            np.abs(np.linalg.inv(omega * np.eye(L) - lattice.build_1d(two_step, L).entries)).max()
            for L in (100, 200)
        )
        assert 0.5 < small / large < 2.0


@pytest.mark.slow
def test_square_open_spectrum_is_enclosed(nnn):
    """Clean-square eigenvalues at L = 20 never lie outside the amoeba."""
    symbols = laurent.SeparableSymbol(nnn, nnn)
    H = lattice.build_2d(symbols, lattice.square(20, hop_range=2))
    mu = np.log(0.1 / 0.2) / 4
    values = np.sort_complex(spectra.eig(H, (mu, mu)).values)[::20]
    verdicts = hierarchy.hierarchy_classify(symbols, values)
    assert all(v.zone != "outside_bloch" for v in verdicts)
    assert all(v.zone == "inside_amoeba" for v in verdicts)
