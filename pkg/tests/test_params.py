import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stable_potentials import DomainError, char_exponent, char_function, dual, levy_density, make_params
from conftest import stable_params


def test_cauchy_constants(cauchy):
    assert cauchy.rho_hat == 0.5
    assert cauchy.c == 1.0
    assert cauchy.beta == 0.0
    assert math.isclose(cauchy.c_plus, 1 / math.pi, rel_tol=1e-15)
    assert math.isclose(cauchy.c_minus, 1 / math.pi, rel_tol=1e-15)
    assert math.isclose(cauchy.q, 1 / math.pi, rel_tol=1e-15)


@pytest.mark.parametrize(
    "alpha, rho, fragment",
    [
        (3.0, 0.5, "alpha must lie in (0,2)"),
        (0.0, 0.5, "alpha must lie in (0,2)"),
        (1.0, 0.6, "alpha=1 requires rho=1/2"),
        (1.5, 0.2, "alpha>1 requires rho"),
        (1.5, 1 / 1.5, "alpha>1 requires rho"),
        (0.5, 1.0, "rho must lie in (0,1)"),
        (float("nan"), 0.5, "finite"),
    ],
)
def test_inadmissible(alpha, rho, fragment):
    with pytest.raises(DomainError, match=None) as info:
        make_params(alpha, rho)
    assert fragment in str(info.value)


def test_alpha_below_one_takes_any_rho():
    p = make_params(0.5, 0.99)
    assert p.rho == 0.99


def test_relaxed_mode_accepts_perturbed_rho():
    p = make_params(1.0, 0.6, strict=False)
    assert p.rho == 0.6 and p.beta == 0.0
    with pytest.raises(DomainError):
        make_params(2.5, 0.5, strict=False)


@given(stable_params())
def test_rho_hat_complements(p):
    assert p.rho + p.rho_hat == pytest.approx(1.0, abs=1e-15)


@given(stable_params())
def test_dual_is_involution(p):
    assert dual(dual(p)) == p


@given(stable_params())
def test_dual_swaps_roles(p):
    q = dual(p)
    assert q.rho == p.rho_hat and q.c_plus == p.c_minus and q.beta == -p.beta
    assert q.q == pytest.approx(q.c_minus / q.alpha, rel=1e-15)


@given(stable_params())
def test_jump_constants_match_gamma_form(p):
    # Gamma(alpha+1) / (Gamma(a) Gamma(1-a)), evaluated directly
    for a, c in ((p.a_rho, p.c_plus), (p.a_rho_hat, p.c_minus)):
        direct = math.gamma(p.alpha + 1) / (math.gamma(a) * math.gamma(1 - a))
        assert c == pytest.approx(direct, rel=1e-12)
        assert c > 0


@given(stable_params())
def test_positivity_parameter_from_char_exponent(p):
    # for a strictly stable law, rho = 1/2 + arctan(beta tan(pi alpha/2)) / (pi alpha)
    if p.alpha == 1.0:
        return
    rho = 0.5 + math.atan(p.beta * math.tan(math.pi * p.alpha / 2)) / (math.pi * p.alpha)
    assert rho == pytest.approx(p.rho, abs=1e-12)


@given(stable_params(), st.floats(0.1, 10.0))
def test_char_exponent_scaling(p, k):
    theta = 0.7
    lhs = char_exponent(p, k * theta)
    rhs = k**p.alpha * char_exponent(p, theta)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_char_exponent_cauchy(cauchy):
    assert char_exponent(cauchy, -2.5) == pytest.approx(2.5)
    assert char_function(cauchy, 1.0, t=2.0) == pytest.approx(math.exp(-2.0))
    assert char_exponent(cauchy, 0.0) == 0


@given(stable_params(), st.floats(0.01, 100.0))
def test_levy_density_sides(p, x):
    assert levy_density(p, x) == pytest.approx(p.c_plus * x ** (-p.alpha - 1), rel=1e-14)
    assert levy_density(p, -x) == pytest.approx(p.c_minus * x ** (-p.alpha - 1), rel=1e-14)


def test_levy_density_origin(cauchy):
    with pytest.raises(DomainError):
        levy_density(cauchy, 0.0)


def test_str(cauchy):
    assert str(cauchy) == "StableParams(alpha=1.0, rho=0.5)"
