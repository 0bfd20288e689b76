import math

import numpy as np
import pytest

from pvarlab import (
    LambdaSequence,
    ModulusOfVariation,
    PhiSequence,
    SampledFunction,
    dual_harmonic_estimate,
    epsilon_p_table,
    exp_orlicz,
    fundamental_sequence,
    lorentz_norm,
    marcinkiewicz_norm,
    modular_norm,
    orlicz_norm,
    power_orlicz,
    pvariation_profile,
    rearrange,
)

NU_SQRT = ModulusOfVariation.power(0.5)
NU_LOG = ModulusOfVariation.log()
HARMONIC_W = 1.0 / np.arange(1, 64, dtype=np.float64)


def test_rearrange_examples():
    assert rearrange([3, -1, 2]).tolist() == [3.0, 2.0, 1.0]
    assert rearrange([5.0, 4.0, 1.0]).tolist() == [5.0, 4.0, 1.0]
    assert rearrange(np.zeros(3)).tolist() == [0.0, 0.0, 0.0]


def test_marcinkiewicz_examples(rng):
    assert marcinkiewicz_norm([1, 0, 0], NU_SQRT, 2.0) == pytest.approx(1.0, abs=1e-12)
    eps = epsilon_p_table(NU_SQRT, 2.0, 32)
    assert marcinkiewicz_norm(eps, NU_SQRT, 2.0) == pytest.approx(1.0, abs=1e-12)
    # brute-force the sup over n
    x = rng.uniform(-2, 2, 9)
    xs = rearrange(x)
    brute = max(
        float(np.sum(xs[:n] ** 2) ** 0.5) / NU_SQRT.value(n) for n in range(1, 10)
    )
    assert marcinkiewicz_norm(x, NU_SQRT, 2.0) == pytest.approx(brute, abs=1e-12)


def test_lorentz_examples():
    assert lorentz_norm([1, 0, 0], HARMONIC_W, 2.0) == pytest.approx(1.0, abs=1e-12)
    assert lorentz_norm([3, 1, 2], [1, 0.5, 1 / 3], 1.0) == pytest.approx(13 / 3, abs=1e-12)
    assert lorentz_norm([1, 1], [1, 0.5], 1.0) == pytest.approx(1.5, abs=1e-12)
    with pytest.raises(ValueError):
        lorentz_norm([1, 1], [0.5, 1.0], 1.0)


def test_orlicz_examples():
    assert orlicz_norm([3, 4], power_orlicz(2.0)) == pytest.approx(5.0, rel=1e-10)
    assert orlicz_norm([1.0], exp_orlicz()) == pytest.approx(1 / math.log(2), rel=1e-10)
    assert orlicz_norm([1, 1], power_orlicz(3.0)) == pytest.approx(2 ** (1 / 3), rel=1e-10)
    assert orlicz_norm(np.zeros(5), power_orlicz(2.0)) == 0.0


def test_modular_examples():
    Phi_sq = PhiSequence.power_all(2.0)
    x = [0.3, -1.2, 0.8]
    assert modular_norm(x, Phi_sq) == pytest.approx(orlicz_norm(x, power_orlicz(2.0)), rel=1e-9)
    Phi_lam = PhiSequence.orlicz_over_lambda(power_orlicz(2.0), LambdaSequence.harmonic())
    assert modular_norm([1, 1], Phi_lam) == pytest.approx(math.sqrt(1.5), rel=1e-10)
    assert modular_norm([1, 0], PhiSequence.power_all(2.0)) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("norm", [
    lambda v: marcinkiewicz_norm(v, NU_SQRT, 2.0),
    lambda v: lorentz_norm(v, HARMONIC_W, 1.0),
    lambda v: orlicz_norm(v, power_orlicz(2.0)),
    lambda v: modular_norm(v, PhiSequence.orlicz_over_lambda(power_orlicz(2.0),
                                                             LambdaSequence.harmonic())),
])
def test_norm_axioms(norm, rng):
    for _ in range(50):
        n = int(rng.integers(1, 14))
        x = rng.uniform(-2, 2, n)
        y = rng.uniform(-2, 2, n)
        # symmetry under permutations and sign flips
        perm = rng.permutation(x) * rng.choice([-1.0, 1.0], n)
        assert norm(perm) == pytest.approx(norm(x), rel=1e-9, abs=1e-10)
        # triangle inequality
        assert norm(x + y) <= norm(x) + norm(y) + 1e-9
        # monotone in the rearrangement
        xs, ys = rearrange(x), rearrange(y)
        smaller = np.minimum(xs, ys)
        assert norm(smaller) <= norm(xs) + 1e-10


def test_space_coincidence_with_pvariation(rng):
    # sup over interval selections of the Marcinkiewicz norm of the difference
    # vector equals max_n v_p(n, f)/nu(n)
    p = 2.0
    for _ in range(10):
        vals = rng.uniform(-1, 1, 8)
        f = SampledFunction(np.arange(8.0), vals)
        m = 8
        best = 0.0

        def recurse(start, chosen):
            nonlocal best
            if chosen:
                best = max(best, marcinkiewicz_norm(np.asarray(chosen), NU_SQRT, p))
            if len(chosen) >= 5:
                return
            for i in range(start, m - 1):
                for j in range(i + 1, m):
                    chosen.append(abs(vals[j] - vals[i]))
                    recurse(j, chosen)
                    chosen.pop()

        recurse(0, [])
        prof = pvariation_profile(f, p, 5)
        via_dp = float(np.max(prof / NU_SQRT.table(5)))
        assert best == pytest.approx(via_dp, abs=1e-10)


def test_fundamental_sequences():
    assert fundamental_sequence("marcinkiewicz", 1, nu=NU_SQRT, p=1.0) == pytest.approx(1.0)
    assert fundamental_sequence("marcinkiewicz", 9, nu=NU_SQRT, p=1.0) == pytest.approx(3.0)
    assert fundamental_sequence("lorentz", 3, w=[1, 0.5, 1 / 3], q=1.0) == pytest.approx(11 / 6)
    # Orlicz indicator: c with n*phi(1/c) = 1
    val = fundamental_sequence("orlicz", 4, phi=power_orlicz(2.0))
    assert val == pytest.approx(2.0, rel=1e-9)
    # modular ties to the partial inverse
    Phi = PhiSequence.power_all(2.0)
    val2 = fundamental_sequence("modular", 4, Phi=Phi)
    assert val2 == pytest.approx(2.0, rel=1e-9)


def test_dual_harmonic_estimates():
    lower, upper = dual_harmonic_estimate(NU_SQRT, 2.0, 1)
    assert lower == pytest.approx(1.0) and upper == pytest.approx(1.0)
    lower, upper = dual_harmonic_estimate(NU_SQRT, 2.0, 10_000)
    assert lower <= upper + 1e-12
    assert upper / lower < 1.5  # both behave like the harmonic series
    lower, upper = dual_harmonic_estimate(NU_LOG, 1.0, 10_000)
    assert lower <= upper
    for h in (16, 64, 1024):
        lo, up = dual_harmonic_estimate(NU_LOG, 2.0, h)
        assert lo <= up + 1e-12
