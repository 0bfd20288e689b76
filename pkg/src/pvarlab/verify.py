"""Deterministic invariant battery behind the ``verify`` CLI subcommand."""

from __future__ import annotations

import numpy as np

from . import fourier, seqspaces
from .embeddings import (
    LambdaSequence,
    PhiSequence,
    corollary_criteria,
    embedding_criterion,
    exp_orlicz,
    phi_partial_inverse,
    power_orlicz,
    wu_bound_check,
)
from .functions import make_random, make_square_wave, make_zigzag
from .kfunctional import bracket_count, kfunctional_bounds, pl_interpolate, varp_pl
from .modulus import ModulusOfVariation, epsilon_p_table
from .sampled import SampledFunction, extrema_reduce
from .variation import pvariation_bruteforce, pvariation_dp, pvariation_profile, vpnu_norm

_FAMILIES = [
    (ModulusOfVariation.power(0.25), 2.0),
    (ModulusOfVariation.power(0.5), 1.0),
    (ModulusOfVariation.log(), 1.0),
]


class Battery:
    def __init__(self, seed: int):
        self.seed = int(seed)
        self.rng = np.random.default_rng(self.seed)
        self.rows: list[tuple[str, bool, float]] = []

    def record(self, name: str, ok: bool, value: float):
        self.rows.append((name, bool(ok), float(value)))

    # -- individual checks ---------------------------------------------------

    def check_dp_oracle(self, cases: int = 60):
        worst = 0.0
        ps = [1.0, 1.5, 2.0, 3.0]
        for i in range(cases):
            f = make_random(self.rng, int(self.rng.integers(4, 13)))
            p = ps[i % len(ps)]
            n = int(self.rng.integers(1, 6))
            bf, _ = pvariation_bruteforce(f, p, n)
            dp, _ = pvariation_dp(f, p, n)
            worst = max(worst, abs(bf - dp) / (1.0 + bf))
        self.record("dp_oracle_equivalence", worst <= 1e-12, worst)

    def check_holder_chain(self, cases: int = 40):
        worst = 0.0
        for i in range(cases):
            f = make_random(self.rng, int(self.rng.integers(4, 13)))
            p = [1.5, 2.0, 3.0][i % 3]
            n = int(self.rng.integers(1, 6))
            up, _ = pvariation_dp(f, p, n)
            u1, _ = pvariation_dp(f, 1.0, n)
            viol = max(up - u1, u1 - up * n ** (1.0 - 1.0 / p))
            worst = max(worst, viol)
        self.record("holder_chain", worst <= 1e-10, worst)

    def check_triangle_homogeneity(self, cases: int = 30):
        worst = 0.0
        for i in range(cases):
            pts = int(self.rng.integers(4, 12))
            f = make_random(self.rng, pts)
            g = SampledFunction(f.grid, self.rng.uniform(-1, 1, pts))
            p = [1.0, 2.0][i % 2]
            n = int(self.rng.integers(1, 5))
            fg = SampledFunction(f.grid, f.values + g.values)
            vsum, _ = pvariation_dp(fg, p, n)
            vf, _ = pvariation_dp(f, p, n)
            vg, _ = pvariation_dp(g, p, n)
            worst = max(worst, vsum - vf - vg)
            c = float(self.rng.uniform(0.1, 3.0))
            vcf, _ = pvariation_dp(f.scaled(c), p, n)
            worst = max(worst, abs(vcf - c * vf))
        self.record("triangle_homogeneity", worst <= 1e-10, worst)

    def check_extrema_reduce(self, cases: int = 30):
        worst = 0.0
        for _ in range(cases):
            f = make_random(self.rng, int(self.rng.integers(5, 13)))
            red = extrema_reduce(f)
            for n in (1, 2, 4):
                a, _ = pvariation_dp(f, 2.0, n)
                b, _ = pvariation_dp(red, 2.0, n)
                worst = max(worst, abs(a - b))
        self.record("extrema_reduction", worst <= 1e-12, worst)

    def check_epsilon_properties(self, horizon: int = 4096):
        worst = 0.0
        for nu, p in _FAMILIES:
            eps = epsilon_p_table(nu, p, horizon)
            nut = nu.table(horizon)
            ks = np.arange(1, horizon + 1, dtype=np.float64)
            tele = np.abs(np.cumsum(eps ** p) ** (1.0 / p) - nut) / (1.0 + nut)
            worst = max(worst, float(np.max(tele)))
            ratio = nut / ks ** (1.0 / p)
            if np.all(np.diff(ratio) <= 1e-15):
                worst = max(worst, float(np.max(eps - ratio)))
        self.record("epsilon_telescoping", worst <= 1e-12, worst)

    def check_kfunctional(self):
        worst = -np.inf
        low = np.inf
        fs = [make_zigzag(5), make_zigzag(9),
              SampledFunction(np.linspace(0, 1, 33), np.sin(8 * np.linspace(0, 1, 33))),
              make_random(self.rng, 21)]
        ts = [1.0, 0.5, 0.25, 0.11]
        competitors_ok = True
        for f in fs:
            for t in ts:
                for p in (1.0, 2.0):
                    ks = kfunctional_bounds(f, t, p)
                    if ks.lower > 0:
                        worst = max(worst, ks.ratio)
                        low = min(low, ks.ratio)
                    M = bracket_count(t, p)
                    prof = pvariation_profile(f, p, M)
                    for _ in range(10):
                        sz = int(self.rng.integers(2, min(8, len(f)) + 1))
                        idx = np.sort(self.rng.choice(len(f), size=sz, replace=False))
                        idx[0], idx[-1] = 0, len(f) - 1
                        idx = np.unique(idx)
                        g = pl_interpolate(f, idx)
                        cost = float(np.max(np.abs(f.values - g(f.grid)))) + t * varp_pl(g, p)
                        if cost < 0.5 * t * prof[M - 1] - 1e-10:
                            competitors_ok = False
        ok = worst <= 5.0 + 1e-9 and low >= 0.5 - 1e-9 and competitors_ok
        self.record("kfunctional_sandwich", ok, worst)

    def check_fejer(self):
        worst = 0.0
        for n in (0, 1, 5, 10):
            worst = max(worst, abs(fourier.fejer_kernel_integral(n) - np.pi))
        self.record("fejer_kernel_integral", worst <= 1e-9, worst)
        nu = ModulusOfVariation.power(0.5)
        contraction = 0.0
        for f in (make_square_wave(256), make_square_wave(128)):
            c = fourier.fourier_coeffs(f, 24)
            fn = SampledFunction(f.grid, fourier.fejer_mean(c, 24, f.grid),
                                 periodic=True, period=f.period)
            vf, sf = vpnu_norm(f, nu, 2.0, 16)
            vfn, sfn = vpnu_norm(fn, nu, 2.0, 16)
            if vf > 0:
                contraction = max(contraction, vfn / vf)
        self.record("fejer_contraction", contraction <= 1.05, contraction)

    def check_lemma_q(self):
        worst = 0.0
        ks = np.arange(1, 100_001, dtype=np.float64)
        for p in (1.0, 1.5, 2.0, 4.0):
            q = fourier.q_sequence(p, ks)
            worst = max(worst, float(np.max(q) - 2.0 ** (-1.0 / p)))
            worst = max(worst, float((1.0 - 1.0 / p) - np.min(q)))
            worst = max(worst, float(np.max(np.diff(q))))
        self.record("lemma_q_bounds", worst <= 1e-12, worst)

    def check_theta_bracket(self):
        worst = 0.0
        omegas = [fourier.OmegaPower(0.5), fourier.OmegaLog()]
        for (nu, p), om in zip(_FAMILIES, omegas * 2):
            for n in range(3, 257):
                th = fourier.theta(nu, om, p, n)
                w = om(1.0 / n)
                if th < n - 1:
                    worst = max(worst, nu.value(th + 1) / (th + 1) ** (1.0 / p) - w)
                if th >= 2:
                    worst = max(worst, w - nu.value(th) / th ** (1.0 / p))
        self.record("theta_bracket", worst <= 1e-12, worst)

    def check_unif2(self):
        ok = True
        worst = 0.0
        for nu in (ModulusOfVariation.power(0.25), ModulusOfVariation.power(0.5),
                   ModulusOfVariation.log()):
            for p in (1.0, 2.0):
                rep = fourier.unif2_verdicts(nu, p, 10_000)
                ok = ok and rep.agree
                lower, upper = seqspaces.dual_harmonic_estimate(nu, p, 10_000)
                worst = max(worst, lower - upper)
                ok = ok and lower <= upper + 1e-12
        self.record("unif2_and_dual", ok, worst)

    def check_sine_integral(self):
        worst = 0.0
        for a, b, n in [(1, 2, 4), (2, 3, 6), (1, 10, 20), (3, 5, 8), (1, 40, 80)]:
            lhs, rhs = fourier.sine_integral_lower(a, b, n)
            worst = max(worst, rhs - lhs)
        self.record("sine_integral", worst <= 0.0 + 1e-12, worst)

    def check_embedding(self):
        ok = True
        nu_sqrt = ModulusOfVariation.power(0.5)
        rep = corollary_criteria("BVq", nu_sqrt, 1.0, 4096, q=2.0)
        ok = ok and rep.verdict == "Embeds" and abs(rep.running_sup - 1.0) <= 1e-9
        rep2 = embedding_criterion(PhiSequence.power_all(2.0), ModulusOfVariation.log(),
                                   1.0, 100_000)
        ok = ok and rep2.verdict == "Fails"
        gap = 0.0
        lam = LambdaSequence.harmonic()
        for case, kw in [("Salem", {"phi": power_orlicz(2.0)}),
                         ("LambdaBV", {"lam": lam}),
                         ("WatermanShiba", {"lam": lam, "q": 2.0}),
                         ("PhiLambda", {"lam": lam, "phi": exp_orlicz()})]:
            r = corollary_criteria(case, nu_sqrt, 2.0, 2048, **kw)
            gap = max(gap, r.crosscheck_gap or 0.0)
        self.record("embedding_criteria", ok and gap <= 1e-9, gap)

    def check_inverse(self):
        worst = 0.0
        for Phi in (PhiSequence.power_all(2.0), PhiSequence.orlicz_all(exp_orlicz()),
                    PhiSequence.orlicz_over_lambda(power_orlicz(3.0), LambdaSequence.harmonic())):
            for n in (1, 7, 100, 10_000):
                for y in (0.5, 1.0, 7.0):
                    x = phi_partial_inverse(Phi, n, y)
                    worst = max(worst, abs(float(Phi.partial(n, x)) - y) / y)
        self.record("phi_inverse_roundtrip", worst <= 1e-10, worst)

    def check_wu(self, cases: int = 60):
        ok = True
        for Phi in (PhiSequence.power_all(2.0), PhiSequence.orlicz_all(exp_orlicz()),
                    PhiSequence.orlicz_over_lambda(power_orlicz(2.0), LambdaSequence.harmonic())):
            for _ in range(cases):
                n = int(self.rng.integers(1, 12))
                x = np.sort(self.rng.uniform(0, 1, n))[::-1]
                total = sum(float(Phi.phi(j + 1, v)) for j, v in enumerate(x))
                budget = total * float(self.rng.uniform(1.0, 2.0)) + 1e-9
                lhs, rhs, holds = wu_bound_check(Phi, x, 2.0, budget)
                ok = ok and holds
        self.record("wu_inequality", ok, 16.0)

    def check_norms(self, cases: int = 50):
        ok = True
        worst = 0.0
        nu = ModulusOfVariation.power(0.5)
        w = 1.0 / np.arange(1, 40, dtype=np.float64)
        phi = power_orlicz(2.0)
        Phi = PhiSequence.orlicz_over_lambda(power_orlicz(2.0), LambdaSequence.harmonic())
        norms = [
            lambda v: seqspaces.marcinkiewicz_norm(v, nu, 2.0),
            lambda v: seqspaces.lorentz_norm(v, w, 1.0),
            lambda v: seqspaces.orlicz_norm(v, phi),
            lambda v: seqspaces.modular_norm(v, Phi),
        ]
        for _ in range(cases):
            n = int(self.rng.integers(1, 12))
            x = self.rng.uniform(-1, 1, n)
            y = self.rng.uniform(-1, 1, n)
            for norm in norms:
                sym = abs(norm(x) - norm(self.rng.permutation(x) * self.rng.choice([-1, 1], n)))
                worst = max(worst, sym)
                tri = norm(x + y) - norm(x) - norm(y)
                worst = max(worst, tri)
                xs, ys = seqspaces.rearrange(x), seqspaces.rearrange(y)
                smaller = np.minimum(xs, ys)
                mono = norm(smaller) - norm(xs)
                worst = max(worst, mono)
        ok = worst <= 1e-10
        fund = seqspaces.fundamental_sequence("marcinkiewicz", 9,
                                              nu=ModulusOfVariation.power(0.5), p=1.0)
        ok = ok and abs(fund - 3.0) <= 1e-12
        self.record("sequence_norms", ok, worst)

    def run(self) -> list[tuple[str, bool, float]]:
        self.check_dp_oracle()
        self.check_holder_chain()
        self.check_triangle_homogeneity()
        self.check_extrema_reduce()
        self.check_epsilon_properties()
        self.check_kfunctional()
        self.check_fejer()
        self.check_lemma_q()
        self.check_theta_bracket()
        self.check_unif2()
        self.check_sine_integral()
        self.check_embedding()
        self.check_inverse()
        self.check_wu()
        self.check_norms()
        return self.rows


def run_battery(seed: int) -> tuple[str, bool]:
    """Run all checks; returns (report text, all passed)."""
    battery = Battery(seed)
    rows = battery.run()
    lines = [f"seed {seed}"]
    for name, ok, value in rows:
        lines.append(f"{'ok  ' if ok else 'FAIL'} {name} {value:.12g}")
    passed = all(ok for _, ok, _ in rows)
    lines.append(f"{'PASS' if passed else 'FAIL'} {sum(ok for _, ok, _ in rows)}/{len(rows)}")
    return "\n".join(lines) + "\n", passed
