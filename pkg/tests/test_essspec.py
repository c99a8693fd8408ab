import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinboson import (
    CONVENTION,
    MINUS,
    PLUS,
    ROOT,
    TABLE,
    Coupling,
    DomainError,
    ModelSpec,
    UsageError,
    asymptotic_report,
    bottom_ess_spectrum,
    build_radial_grid,
    default_grid,
    eval_phi,
    find_phi_root,
    integrate,
    phi_derivative,
    sample,
)

# One node at r = 1 with weight 4, unit coupling and dispersion: every branch
# quantity reduces to a rational function.
#   Phi_plus(z) = -1 - z - 4 / (2 - z)


@pytest.fixture(scope="module")
def toy():
    q = build_radial_grid(1, 1, 2.0)
    spec = ModelSpec(eps=1.0, alpha=1.0, coupling=Coupling(family=TABLE, table=(1.0,)))
    return spec, q


@pytest.fixture(scope="module")
def default():
    spec = ModelSpec()
    q = default_grid(spec, 32, 4.0)
    return spec, q


def test_toy_phi_values(toy):
    spec, q = toy
    assert eval_phi(spec, q, PLUS, 0.0) == pytest.approx(-3.0, abs=1e-15)
    assert eval_phi(spec, q, PLUS, -2.0) == pytest.approx(0.0, abs=1e-15)
    assert phi_derivative(spec, q, PLUS, -2.0) == pytest.approx(-1.25, abs=1e-15)


def test_toy_roots(toy):
    spec, q = toy
    plus = find_phi_root(spec, q, PLUS)
    assert plus.kind == ROOT
    assert plus.value == pytest.approx(-2.0, abs=1e-10)
    assert plus.residual <= 1e-9
    assert plus.iterations > 1

    # Phi_minus(z) = 1 - z - 4/(-z): zero of z^2 - z - 4 below -1
    minus = find_phi_root(spec, q, MINUS)
    assert minus.kind == ROOT
    assert minus.value == pytest.approx((1.0 - math.sqrt(17.0)) / 2.0, abs=1e-10)


def test_phi_domain(toy):
    spec, q = toy
    for sigma in (PLUS, MINUS):
        se = sigma * spec.eps
        with pytest.raises(DomainError):
            eval_phi(spec, q, sigma, se)
        with pytest.raises(DomainError):
            eval_phi(spec, q, sigma, se + 0.5)
        with pytest.raises(DomainError):
            phi_derivative(spec, q, sigma, se)


def test_convention_below_threshold(default):
    spec, q = default
    res = find_phi_root(spec.with_alpha(0.5), q, MINUS)
    assert res.kind == CONVENTION
    assert res.value == -1.0
    assert math.isnan(res.residual)


def test_root_above_threshold(default):
    spec, q = default
    res = find_phi_root(spec.with_alpha(1.5), q, MINUS)
    assert res.kind == ROOT
    assert res.value < -1.0


def test_weak_coupling_expansion(default):
    # E_plus = -eps - alpha^2 int |lambda|^2/(omega + 2 eps) + O(alpha^4)
    spec, q = default
    alpha = 1e-3
    omega, lam = sample(spec, q)
    i2 = integrate(q, abs(lam) ** 2 / (omega + 2.0))
    res = find_phi_root(spec.with_alpha(alpha), q, PLUS)
    assert res.kind == ROOT
    assert res.value == pytest.approx(-1.0 - alpha**2 * i2, abs=1e-11)


def test_bottom_ess_spectrum(default):
    spec, q = default
    bot = bottom_ess_spectrum(spec.with_alpha(2.0), q)
    assert bot.e_plus.value < -1.0
    assert bot.e_min == min(bot.e_plus.value, bot.e_minus.value)

    free = bottom_ess_spectrum(spec.with_alpha(0.0), q)
    assert free.e_plus.value == pytest.approx(-1.0, abs=1e-9)
    assert free.e_minus.kind == CONVENTION
    assert free.e_min == pytest.approx(-1.0, abs=1e-9)


def test_asymptotic_report(default):
    spec, q = default
    with pytest.raises(UsageError):
        asymptotic_report(spec, q, [0.0, 1.0])
    with pytest.raises(UsageError):
        asymptotic_report(spec, q, [2.0, 1.0])

    # exactly at the spin-down threshold the branch is conventional: the gap
    # closes and the ratio column must degrade to NaN instead of dividing by 0
    at_threshold = asymptotic_report(spec, q, [1.0])
    conv = [r for r in at_threshold if r.kind == CONVENTION]
    assert len(conv) == 1 and conv[0].sigma == MINUS
    assert math.isnan(conv[0].strength_ratio)

    rows = asymptotic_report(spec, q, [10.0, 100.0, 1000.0])
    assert len(rows) == 6
    last = [r for r in rows if r.alpha == 1000.0]
    for row in last:
        # default model has ||lambda|| = 1
        assert row.energy_over_alpha == pytest.approx(-1.0, rel=1e-3)
        assert row.strength_ratio == pytest.approx(0.5, rel=1e-2)
    # the approach is monotone from below in |E|/alpha
    for sigma in (PLUS, MINUS):
        branch = [r for r in rows if r.sigma == sigma]
        ratios = [abs(r.energy_over_alpha) for r in branch]
        assert ratios == sorted(ratios)


@settings(deadline=None, max_examples=80)
@given(
    alpha=st.floats(min_value=0.01, max_value=20.0, allow_nan=False),
    sigma=st.sampled_from((PLUS, MINUS)),
)
def test_root_property(default_module_grid, alpha, sigma):
    spec, q = default_module_grid
    res = find_phi_root(spec.with_alpha(alpha), q, sigma)
    if res.kind == ROOT:
        assert res.value < sigma * spec.eps
        assert res.residual <= 1e-8 * max(1.0, alpha**2)
        # strict decrease pins the root: positive above-left, negative below-right
        assert eval_phi(spec.with_alpha(alpha), q, sigma, res.value - 0.1) > 0.0
    else:
        assert sigma == MINUS
        assert res.value == -spec.eps


@settings(deadline=None, max_examples=60)
@given(
    alpha=st.floats(min_value=0.0, max_value=10.0, allow_nan=False),
    sigma=st.sampled_from((PLUS, MINUS)),
    z1=st.floats(min_value=-30.0, max_value=-2.0, allow_nan=False),
    gap=st.floats(min_value=0.1, max_value=10.0, allow_nan=False),
)
def test_phi_strictly_decreasing(default_module_grid, alpha, sigma, z1, gap):
    spec, q = default_module_grid
    s = spec.with_alpha(alpha)
    z2 = z1 + gap
    if not (z2 < sigma * s.eps):
        return
    assert eval_phi(s, q, sigma, z1) > eval_phi(s, q, sigma, z2)


@pytest.fixture(scope="module")
def default_module_grid():
    spec = ModelSpec()
    return spec, default_grid(spec, 16, 4.0)
