import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonlocal_rd.errors import EvaluationError
from nonlocal_rd.model import (ConstantDiffusion, CustomReaction, DiffusionSpec, ReactionSpec,
                               coupling_source, diffusion_coefficient, lipschitz_estimate)

BASE_DIFFUSION = DiffusionSpec(epsilon=1e-6, m0=1.0)


@pytest.mark.parametrize("literal", [False, True])
@pytest.mark.parametrize("xi, expected", [(1.0, 2.0), (2.0, 1.5)])
def test_diffusion_both_forms(xi, expected, literal):
    spec = DiffusionSpec(1e-6, 1.0, literal_form=literal)
    assert diffusion_coefficient(xi, spec) == expected


def test_diffusion_clamped_at_zero():
    assert diffusion_coefficient(0.0, BASE_DIFFUSION) == pytest.approx(1e6 + 1, rel=1e-15)


def test_diffusion_literal_form_is_unbounded():
    spec = DiffusionSpec(1e-6, 1.0, literal_form=True)
    assert spec(1e-10) == pytest.approx(1e10 + 1)
    assert math.isinf(spec(0.0))
    # literal max(eps, 1/|xi|) picks eps only for large |xi|
    assert spec(1e7) == pytest.approx(1e-6 + 1.0)


@pytest.mark.parametrize("xi", [math.nan, math.inf, -math.inf])
def test_diffusion_rejects_nonfinite(xi):
    with pytest.raises(EvaluationError):
        BASE_DIFFUSION(xi)


def test_diffusion_bounds_sweep():
    xs = np.concatenate([[0.0], np.logspace(-12, 12, 2001)])
    for xi in xs:
        a = BASE_DIFFUSION(xi)
        assert BASE_DIFFUSION.m0 <= a <= 1 / BASE_DIFFUSION.epsilon + BASE_DIFFUSION.m0
        assert a >= BASE_DIFFUSION.m


@given(st.floats(-1e300, 1e300))
def test_diffusion_even(xi):
    for spec in (BASE_DIFFUSION, DiffusionSpec(1e-6, 0.1, literal_form=True)):
        assert spec(xi) == spec(-xi)


def test_diffusion_spec_validation():
    with pytest.raises(ValueError):
        DiffusionSpec(epsilon=0.0)
    with pytest.raises(ValueError):
        DiffusionSpec(m0=-0.1)
    with pytest.raises(ValueError):
        DiffusionSpec(m0=0.0)
    assert DiffusionSpec(m0=0.0, m=1e-3).m == 1e-3


def test_constant_diffusion():
    a = ConstantDiffusion(1.0)
    assert a(0.0) == a(123.0) == 1.0 == a.m


LOGISTIC = ReactionSpec(r=1.0, kappa=10.0)


@pytest.mark.parametrize("w, expected", [(0.0, 0.0), (10.0, 0.0), (1.0, -9.0)])
def test_coupling_source_examples(w, expected):
    assert coupling_source(w, LOGISTIC) == expected


def test_alpha_cancels_out_of_source():
    assert coupling_source(3.0, ReactionSpec(1.0, 10.0, alpha=2.5)) == coupling_source(3.0, LOGISTIC)
    assert ReactionSpec(1.0, 10.0, alpha=2.5).f(3.0) == 21.0 + 7.5


# dyadic w keeps kappa - w exact, so the symmetry holds bit for bit
dyadic = st.integers(-2**24, 2**24).map(lambda k: k / 2**20)


@given(dyadic)
def test_coupling_source_symmetric_about_half_kappa(w):
    assert coupling_source(10.0 - w, LOGISTIC) == coupling_source(w, LOGISTIC)


def test_custom_reaction_source():
    cubic = CustomReaction(lambda w: w**3, alpha=0.5)
    assert coupling_source(2.0, cubic) == 0.5 * 2.0 - 8.0


def test_lipschitz_identity():
    assert lipschitz_estimate(lambda w: w, -1.0, 1.0, 11) == pytest.approx(1.0, rel=1e-12)


def test_lipschitz_logistic():
    est = lipschitz_estimate(LOGISTIC.f, -2.0, 2.0, 4001)
    # exact sup |f'| = |kappa - 2w| at w = -2 is 14; the estimate is a lower bound
    assert 14.0 - 1e-2 <= est <= 14.0


def test_lipschitz_constant():
    assert lipschitz_estimate(lambda w: 3.0, 0.0, 1.0, 5) == 0.0


def test_lipschitz_errors():
    with pytest.raises(ValueError):
        lipschitz_estimate(lambda w: w, 1.0, 1.0, 5)
    with pytest.raises(ValueError):
        lipschitz_estimate(lambda w: w, 0.0, 1.0, 1)
    with pytest.raises(EvaluationError):
        lipschitz_estimate(lambda w: math.inf, 0.0, 1.0, 3)
