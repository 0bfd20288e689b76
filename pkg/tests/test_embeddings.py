import math

import numpy as np
import pytest

from pvarlab import (
    LambdaSequence,
    ModulusOfVariation,
    PhiSequence,
    SampledFunction,
    WitnessBudget,
    corollary_criteria,
    embedding_criterion,
    exp_orlicz,
    phi_partial_inverse,
    power_orlicz,
    pvariation_dp,
    var_phi,
    witness_generate,
    wu_bound_check,
)
from pvarlab.functions import make_zigzag

NU_SQRT = ModulusOfVariation.power(0.5)
NU_LOG = ModulusOfVariation.log()


# -- gauges and inverses -------------------------------------------------------

def test_lambda_sequence_validation():
    with pytest.raises(ValueError):
        LambdaSequence.power(1.5)  # summable reciprocals
    with pytest.raises(ValueError):
        LambdaSequence.from_table([3.0, 2.0])  # decreasing
    lam = LambdaSequence.harmonic()
    assert lam.reciprocal_cumsum(3) == pytest.approx([1.0, 1.5, 11 / 6])


def test_phi_sequence_validation():
    with pytest.raises(ValueError):
        PhiSequence.power_all(0.5)
    with pytest.raises(ValueError):
        PhiSequence.custom([lambda x: np.sqrt(x)])  # concave
    # increasing in j is rejected
    with pytest.raises(ValueError):
        PhiSequence.custom([lambda x: x ** 2, lambda x: 2 * x ** 2])


def test_phi_partial_inverse_closed_forms():
    assert phi_partial_inverse(PhiSequence.power_all(2.0), 4, 1.0) == pytest.approx(0.5, rel=1e-11)
    lam = LambdaSequence.harmonic()
    Phi = PhiSequence.orlicz_over_lambda(power_orlicz(2.0), lam)
    assert phi_partial_inverse(Phi, 2, 1.0) == pytest.approx(math.sqrt(2 / 3), rel=1e-11)
    Phe = PhiSequence.orlicz_all(exp_orlicz())
    assert phi_partial_inverse(Phe, 1, 1.0) == pytest.approx(math.log(2), rel=1e-11)
    assert phi_partial_inverse(Phe, 3, 0.0) == 0.0
    with pytest.raises(ValueError):
        phi_partial_inverse(Phe, 1, -1.0)


@pytest.mark.parametrize("Phi", [
    PhiSequence.power_all(2.0),
    PhiSequence.orlicz_all(exp_orlicz()),
    PhiSequence.orlicz_over_lambda(power_orlicz(3.0), LambdaSequence.harmonic()),
])
def test_inverse_roundtrip(Phi):
    for n in (1, 13, 257, 10_000):
        for y in (0.25, 1.0, 9.0):
            x = phi_partial_inverse(Phi, n, y)
            assert float(Phi.partial(n, x)) == pytest.approx(y, rel=1e-10)


def test_concave_inverse_scaling(rng):
    Phi = PhiSequence.orlicz_all(exp_orlicz())
    for _ in range(60):
        n = int(rng.integers(1, 200))
        x = float(rng.uniform(0.01, 5.0))
        alpha = float(rng.uniform(0.01, 8.0))
        lhs = phi_partial_inverse(Phi, n, alpha * x)
        rhs = (1.0 + alpha) * phi_partial_inverse(Phi, n, x)
        assert lhs <= rhs * (1 + 1e-9)


# -- embedding criterion ---------------------------------------------------------

def test_bv2_into_sqrt_embeds_with_unit_trace():
    rep = corollary_criteria("BVq", NU_SQRT, 1.0, 4096, q=2.0)
    assert rep.verdict == "Embeds"
    assert np.allclose(rep.trace, 1.0, atol=1e-12)
    assert rep.running_sup == pytest.approx(1.0, abs=1e-12)


def test_bv2_into_log_fails():
    rep = embedding_criterion(PhiSequence.power_all(2.0), NU_LOG, 1.0, 100_000)
    assert rep.verdict == "Fails"


def test_power_q_equals_p_embeds():
    # Phi_k^{-1}(1) = k^{-1/p} makes the trace 1/nu(n) -> 0
    rep = embedding_criterion(PhiSequence.power_all(2.0), NU_LOG, 2.0, 4096)
    assert rep.verdict == "Embeds"
    assert rep.trace[-1] == pytest.approx(1.0 / NU_LOG.value(4096), rel=1e-9)


@pytest.mark.parametrize("case,kw", [
    ("BVq", {"q": 2.0}),
    ("Salem", {"phi": power_orlicz(2.0)}),
    ("LambdaBV", {"lam": LambdaSequence.harmonic()}),
    ("WatermanShiba", {"lam": LambdaSequence.harmonic(), "q": 2.0}),
    ("PhiLambda", {"lam": LambdaSequence.harmonic(), "phi": exp_orlicz()}),
])
def test_corollary_crosscheck(case, kw):
    rep = corollary_criteria(case, NU_SQRT, 2.0, 2048, **kw)
    assert rep.crosscheck_gap is not None and rep.crosscheck_gap <= 1e-9


def test_salem_power_matches_bvq():
    a = corollary_criteria("BVq", NU_SQRT, 1.0, 512, q=2.0)
    b = corollary_criteria("Salem", NU_SQRT, 1.0, 512, phi=power_orlicz(2.0))
    assert np.allclose(a.trace, b.trace, atol=1e-12)


def test_lambda_bv_harmonic_number_trace():
    lam = LambdaSequence.harmonic()
    horizon = 256
    ks = np.arange(1, horizon + 1, dtype=float)
    nu = ModulusOfVariation.from_table(ks / np.log(ks + 2.0))  # concave over this range
    rep = corollary_criteria("LambdaBV", nu, 1.0, horizon, lam=lam)
    harm = np.cumsum(1.0 / ks)
    expected = np.maximum.accumulate(ks / harm) / nu.table(horizon)
    assert np.allclose(rep.trace, expected, atol=1e-9)


# -- Phi-variation ----------------------------------------------------------------

def test_var_phi_monotone_rise():
    f = SampledFunction([0.0, 0.5, 1.0], [0.0, 0.4, 1.0])
    Phi = PhiSequence.orlicz_over_lambda(power_orlicz(1.0), LambdaSequence.power(0.0))
    assert var_phi(f, Phi) == pytest.approx(1.0, abs=1e-12)


def test_var_phi_zigzag_weighted():
    Phi = PhiSequence.orlicz_over_lambda(power_orlicz(1.0), LambdaSequence.harmonic())
    assert var_phi(make_zigzag(5), Phi) == pytest.approx(25 / 12, abs=1e-12)


def test_var_phi_constant_and_budget():
    c = SampledFunction([0.0, 1.0], [1.0, 1.0])
    Phi = PhiSequence.power_all(2.0)
    assert var_phi(c, Phi) == 0.0
    big = SampledFunction(np.linspace(0, 1, 20), np.sin(np.linspace(0, 9, 20)))
    with pytest.raises(ValueError):
        var_phi(big, Phi)
    assert var_phi(big, Phi, exact=False) > 0  # heuristic lower bound allowed


def test_var_phi_power_specialization(rng):
    # with phi_j = x^p the Phi-variation is v_p(n, f)^p at the swing budget
    p = 2.0
    Phi = PhiSequence.power_all(p)
    for _ in range(10):
        vals = rng.uniform(-1, 1, 7)
        f = SampledFunction(np.arange(7.0), vals)
        exact = var_phi(f, Phi)
        v, _ = pvariation_dp(f, p, 6)
        assert exact == pytest.approx(v ** p, rel=1e-10)


# -- Wu bound ----------------------------------------------------------------------

def test_wu_zero_sequence():
    lhs, rhs, ok = wu_bound_check(PhiSequence.power_all(2.0), np.zeros(4), 2.0, 1.0)
    assert lhs == 0.0 and rhs > 0 and ok


def test_wu_worked_example():
    lhs, rhs, ok = wu_bound_check(PhiSequence.power_all(2.0), [0.5, 0.5], 2.0, 0.5)
    assert lhs == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert rhs == pytest.approx(16 * math.sqrt(0.5), rel=1e-9)
    assert ok


def test_wu_requires_admissible_input():
    Phi = PhiSequence.power_all(2.0)
    with pytest.raises(ValueError):
        wu_bound_check(Phi, [0.2, 0.5], 2.0, 1.0)  # increasing
    with pytest.raises(ValueError):
        wu_bound_check(Phi, [2.0, 1.0], 2.0, 0.1)  # budget violated


def test_wu_randomized(rng):
    for Phi in (PhiSequence.power_all(2.0), PhiSequence.orlicz_all(exp_orlicz()),
                PhiSequence.orlicz_over_lambda(power_orlicz(2.0), LambdaSequence.harmonic())):
        for _ in range(100):
            n = int(rng.integers(1, 10))
            x = np.sort(rng.uniform(0, 2, n))[::-1]
            budget = sum(float(Phi.phi(j + 1, v)) for j, v in enumerate(x)) + 1e-12
            lhs, rhs, ok = wu_bound_check(Phi, x, float(rng.uniform(1.0, 3.0)), budget)
            assert ok


# -- witness -----------------------------------------------------------------------

def test_witness_requires_failing_verdict():
    with pytest.raises(ValueError):
        witness_generate(PhiSequence.power_all(2.0), NU_SQRT, 1.0, 2,
                         WitnessBudget(criterion_horizon=4096))
    with pytest.raises(ValueError):
        # q = p always embeds
        witness_generate(PhiSequence.power_all(2.0), NU_LOG, 2.0, 2,
                         WitnessBudget(criterion_horizon=4096))


def test_witness_small_run_certified():
    w = witness_generate(PhiSequence.power_all(2.0), NU_LOG, 1.0, 1)
    assert w is not None and w.certified
    blk = w.blocks[0]
    assert blk.n > 2 ** 3 and blk.r <= min(blk.m, blk.s)
    cert = w.certificates[0]
    assert cert.ratio >= 2.0
    assert cert.prefix_dp_ok
    assert w.varphi_total <= 2.0
    # the grid really is a step function reaching the advertised height
    assert np.max(w.function.values) == pytest.approx(blk.height, abs=1e-15)
    # DP on a window confirms the certificate objective independently
    assert cert.window_dp_ran
    assert cert.window_dp_value >= cert.objective * (1 - 1e-9)


def test_witness_json_omits_huge_grids():
    w = witness_generate(PhiSequence.power_all(2.0), NU_LOG, 1.0, 1)
    d = w.to_json_dict(max_function_points=10)
    assert d["function"].get("omitted") is True
    d2 = w.to_json_dict(max_function_points=10 ** 9)
    assert len(d2["function"]["grid"]) == len(w.function)


def test_witness_lambda_gauge_literal_blocks():
    # the Orlicz-over-Lambda scan path reaches the full 2^(4k) rate cheaply
    Phi = PhiSequence.orlicz_over_lambda(power_orlicz(2.0), LambdaSequence.harmonic())
    w = witness_generate(Phi, NU_SQRT, 1.0, 2)
    assert w is not None and w.certified
    assert all(b.literal for b in w.blocks)
    assert all(b.rate > 2.0 ** (4 * b.k) for b in w.blocks)
    ratios = {c.k: c.ratio for c in w.certificates}
    assert ratios[1] >= 2.0 and ratios[2] >= 4.0
