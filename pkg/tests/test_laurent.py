import numpy as np
import pytest

from fragile import errors
from fragile import laurent


def test_ranges(two_step, hatano_nelson):
    """Hopping ranges follow the extreme powers."""
    assert (two_step.n, two_step.m, two_step.degree) == (2, 2, 4)
    assert (hatano_nelson.n, hatano_nelson.m) == (1, 1)
    onesided = laurent.LaurentOperator({1: 1.0, 2: 0.5})
    assert (onesided.n, onesided.m) == (0, 2)


def test_untight_range_is_rejected():
    """A vanishing extreme coefficient is malformed."""
    with pytest.raises(errors.MalformedOperatorError):
        laurent.LaurentOperator({2: 0.0, 1: 1.0, -1: 1.0})
    with pytest.raises(errors.MalformedOperatorError):
        laurent.LaurentOperator({})


def test_from_terms_adds_repeated_powers():
    """Triples with equal powers accumulate."""
    op = laurent.LaurentOperator.from_terms([[1, 1.0, 0.0], [1, 0.5, 0.5], [-1, 2.0, 0.0]])
    assert op.coeffs == {-1: 2.0, 1: 1.5 + 0.5j}
    with pytest.raises(errors.MalformedOperatorError):
        laurent.LaurentOperator.from_terms([[1.5, 1.0, 0.0]])


def test_eval_beta_on_unit_circle_matches_eval_k(two_step):
    """h(e^{ik}) equals h(k)."""
    k = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(laurent.eval_beta(two_step, np.exp(1j * k)), laurent.eval_k(two_step, k))
    expected = 2 * np.cos(k) + 0.5 * np.exp(2j * k) + 0.2j * np.exp(-2j * k)
    assert np.allclose(laurent.eval_k(two_step, k), expected)


def test_eval_beta_rejects_zero(two_step):
    """beta = 0 is a pole of any symbol with negative powers."""
    with pytest.raises(errors.ZeroBetaError):
        laurent.eval_beta(two_step, 0.0)


def test_product_matches_pointwise(two_step):
    """The product symbol evaluates to the product of values."""
    sq = laurent.product(two_step, two_step)
    assert (sq.n, sq.m) == (4, 4)
    beta = np.array([0.7 + 0.2j, 1.3 - 0.4j, -0.9j])
    assert np.allclose(laurent.eval_beta(sq, beta), laurent.eval_beta(two_step, beta) ** 2)


def test_roots_are_roots_and_sorted(two_step):
    """Every root solves h(beta) = E and moduli never decrease."""
    energy = 0.3 + 0.1j
    roots = laurent.roots_sorted(two_step, energy)
    assert len(roots) == 4
    assert np.all(np.diff(roots.moduli) >= -1e-12)
    assert np.allclose(laurent.eval_beta(two_step, roots.roots), energy, atol=1e-10)


def test_root_list_is_one_based(two_step):
    """beta_1 is the smallest root and beta_{m+n} the largest."""
    roots = laurent.roots_sorted(two_step, 1.0)
    assert roots[1] == roots.roots[0]
    assert roots[4] == roots.roots[-1]
    with pytest.raises(IndexError):
        roots[0]
    with pytest.raises(IndexError):
        roots[5]
    assert roots.middle(2) == (roots[2], roots[3])


def test_equal_moduli_are_ordered_by_phase(hermitian_chain):
    """Roots on the unit circle sort by ascending phase."""
    roots = laurent.roots_sorted(hermitian_chain, 1.0)
    assert np.allclose(roots.moduli, 1.0)
    phases = np.angle(roots.roots)
    assert phases[0] < phases[1]


def test_hermiticity(hatano_nelson, hermitian_chain, two_step):
    assert hermitian_chain.is_hermitian()
    assert not hatano_nelson.is_hermitian()
    assert not two_step.is_hermitian()


def test_deformed_is_analytic_continuation(hatano_nelson):
    """h(k - i mu) equals h(e^mu beta)."""
    mu = 0.3
    beta = np.exp(1j * np.linspace(0, 2 * np.pi, 9))
    deformed = hatano_nelson.deformed(mu)
    assert np.allclose(
        laurent.eval_beta(deformed, beta), laurent.eval_beta(hatano_nelson, np.exp(mu) * beta)
    )


def test_hatano_nelson_gauge_makes_symbol_hermitian(hatano_nelson):
    """mu = ln(b / a) / 2 balances both hoppings."""
    mu = 0.5 * np.log(1.1 / 1.2)
    assert hatano_nelson.deformed(mu).is_hermitian(atol=1e-12)


def test_shifted_and_poly_coefficients(hatano_nelson):
    """beta (h - E) = a beta^2 - E beta + b."""
    c = hatano_nelson.poly_coefficients(0.5)
    assert np.allclose(c, [1.1, -0.5, 1.2])
    assert hatano_nelson.shifted(0.5).coeffs[0] == -0.5


def test_separable_symbol():
    """Axis values add up to the planar symbol."""
    hx = laurent.preset("chain")
    symbols = laurent.SeparableSymbol(hx, hx)
    assert symbols.dim == 2
    assert laurent.SeparableSymbol.of(symbols) is symbols
    assert laurent.SeparableSymbol.of(hx).dim == 1
    k = np.array([0.0, 1.0])
    x, y = symbols.axis_values((0.0, 0.0), k)
    assert np.allclose(x, laurent.eval_k(hx, k))
    assert np.allclose(y, laurent.eval_k(hx, k))


def test_presets():
    with pytest.raises(KeyError):
        laurent.preset("unknown")
    assert laurent.preset("two_step").coeffs == {-2: 0.2j, -1: 1.0, 1: 1.0, 2: 0.5}
    assert laurent.preset("chain", s1=0.0, s2=0.0).is_hermitian()
