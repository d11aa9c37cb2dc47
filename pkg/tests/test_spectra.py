import numpy as np
import pytest

from fragile import errors
from fragile import lattice
from fragile import laurent
from fragile import spectra


def test_hatano_nelson_open_spectrum(hatano_nelson):
    """OBC eigenvalues are 2 sqrt(ab) cos(j pi / (L + 1))."""
    L = 40
    cloud = spectra.eig(lattice.build_1d(hatano_nelson, L), mu=0.5 * np.log(1.1 / 1.2))
    j = np.arange(1, L + 1)
    expected = np.sort(2 * np.sqrt(1.32) * np.cos(j * np.pi / (L + 1)))
    assert np.allclose(np.sort(cloud.values.real), expected, atol=1e-10)
    assert np.abs(cloud.values.imag).max() < 1e-10
    assert cloud.source["mu"] == [pytest.approx(0.5 * np.log(1.1 / 1.2))]


def test_kronecker_sum_oracle(nnn):
    """Dense 2D eig matches all pairwise sums of 1D eigenvalues."""
    L = 8
    Hx = lattice.build_1d(nnn, L)
    dense = spectra.eig(lattice.kron_sum_2d(Hx, Hx))
    one = spectra.eig(Hx)
    sums = spectra.separable_spectrum_2d(one, one)
    assert len(sums) == L * L
    assert spectra.hausdorff(dense, sums) < 1e-8


def test_clean_square_is_real(nnn):
    """Separable sums at L = 30 carry no imaginary part."""
    mu = np.log(0.1 / 0.2) / 4
    one = spectra.eig(lattice.build_1d(nnn, 30), mu)
    sums = spectra.separable_spectrum_2d(one, one)
    assert np.abs(sums.values.imag).max() < 1e-10


@pytest.mark.slow
def test_dense_square_is_real_under_gauge(nnn):
    """Dense eig of the L = 20 square stays real to 1e-6."""
    symbols = laurent.SeparableSymbol(nnn, nnn)
    H = lattice.build_2d(symbols, lattice.square(20, hop_range=2))
    mu = np.log(0.1 / 0.2) / 4
    assert np.abs(spectra.eig(H, (mu, mu)).values.imag).max() < 1e-6


@pytest.mark.slow
def test_corner_cut_turns_complex(nnn):
    """Removing four corners of the L = 30 square makes the spectrum complex."""
    symbols = laurent.SeparableSymbol(nnn, nnn)
    cut = lattice.build_2d(symbols, lattice.corner_cut(30, 1, 2))
    assert np.abs(spectra.eig(cut).values.imag).max() > 1e-2


def test_bloch_spectrum(nnn):
    """The planar Bloch set reaches max Im = 0.2 for the nnn symbol."""
    cloud = spectra.bloch_spectrum(laurent.SeparableSymbol(nnn, nnn), grid=64)
    assert len(cloud) == 64 * 64
    assert cloud.max_imag == pytest.approx(0.2, abs=1e-3)
    with pytest.raises(ValueError):
        spectra.bloch_spectrum(nnn, grid=32)


def test_empty_cloud():
    cloud = spectra.SpectrumCloud([])
    with pytest.raises(errors.EmptyCloudError):
        cloud.max_imag
    with pytest.raises(errors.EmptyCloudError):
        spectra.cloud_metrics(cloud, spectra.SpectrumCloud([1.0]))


def test_cloud_metrics_and_rows():
    a = spectra.SpectrumCloud([0.0, 1.0 + 0.5j], {"tag": "a"})
    b = spectra.SpectrumCloud([0.0, 1.0])
    metrics = spectra.cloud_metrics(a, b)
    assert metrics["max_imag_a"] == 0.5
    assert metrics["hausdorff"] == pytest.approx(0.5)
    assert a.rows() == [(0.0, 0.0, "a"), (1.0, 0.5, "a")]


def test_noise_floor_has_machine_minimum():
    dense = spectra.SpectrumCloud([1.0 + 1e-14j, 2.0])
    reference = spectra.SpectrumCloud([1.0, 2.0])
    assert spectra.noise_floor(dense, reference) == pytest.approx(1e-14)
    assert spectra.noise_floor(reference, reference, 10.0) == pytest.approx(
        10 * np.finfo(float).eps
    )


def test_potentials_agree(hatano_nelson):
    """Mean log distance to the eigenvalues equals (1/L) ln|det(omega - H)|."""
    H = lattice.build_1d(hatano_nelson, 20)
    omega = 0.3 + 0.7j
    cloud = spectra.eig(H)
    assert spectra.coulomb_potential(cloud, omega) == pytest.approx(
        spectra.log_det_potential(H, omega), abs=1e-9
    )
    with pytest.raises(errors.SingularPotentialError):
        spectra.coulomb_potential(cloud, cloud.values[0])


def test_residual_witnesses(hatano_nelson):
    H = lattice.build_1d(hatano_nelson, 10)
    assert np.all(spectra.eigen_residuals(H) < 1e-10)
    energy = spectra.eig(H).values[0]
    assert spectra.residual_witness(H, energy) < 1e-8
    assert spectra.residual_witness(H, 10.0) > 1e-2


def test_perturbation_series_orders():
    """Both orders follow the two-site expansion of ln det."""
    G = np.array([[0.5, 0.1], [0.2, 0.4]])
    report = spectra.perturbation_series(G, 1e-3, 10, omega=1.0, phi=0.0)
    assert report.series_terms[0] == pytest.approx(1e-3 / 10 * 0.9)
    square = 0.25 + 0.16 + 2 * 0.02
    assert report.series_terms[1] == pytest.approx(-(1e-6) / 20 * square)
    assert report.converged
    loose = spectra.perturbation_series(G, 100.0, 10)
    assert not loose.converged
    assert set(report.summary()) == {"omega", "phi", "dphi1", "dphi2", "converged"}


def test_perturbation_series_from_perturbation():
    """Adding v on the two sites corresponds to delta = -v."""
    g = lattice.interval(6)
    p = lattice.custom_onsite([1, 6], 0.01)
    G = np.eye(2)
    direct = spectra.perturbation_series(G, -0.01, 6)
    assert spectra.perturbation_series(G, p, 6).series_terms == direct.series_terms
    assert len(g) == 6
