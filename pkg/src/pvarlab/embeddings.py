"""Phi-sequence machinery, embedding criteria, and non-embedding witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .modulus import ModulusOfVariation
from .sampled import SampledFunction, extrema_reduce
from .variation import pvariation_dp

__all__ = [
    "OrliczFunction",
    "power_orlicz",
    "exp_orlicz",
    "LambdaSequence",
    "PhiSequence",
    "phi_partial_inverse",
    "CriterionReport",
    "embedding_criterion",
    "corollary_criteria",
    "var_phi",
    "wu_bound_check",
    "WitnessBudget",
    "Witness",
    "witness_generate",
]


# ---------------------------------------------------------------------------
# Convex gauges
# ---------------------------------------------------------------------------

class OrliczFunction:
    """Increasing convex function with phi(0) = 0, vectorized over x."""

    def __init__(self, name: str, fn, inv=None):
        self.name = name
        self._fn = fn
        self._inv = inv

    def __call__(self, x):
        return self._fn(np.asarray(x, dtype=np.float64))

    def inverse(self, y):
        y = np.asarray(y, dtype=np.float64)
        if self._inv is not None:
            return self._inv(y)
        return _bisect_increasing(lambda x: self._fn(x), y)


def power_orlicz(q: float) -> OrliczFunction:
    if q < 1:
        raise ValueError("power gauge needs q >= 1")
    return OrliczFunction(f"power:{q:g}", lambda x: x ** q, lambda y: y ** (1.0 / q))


def exp_orlicz() -> OrliczFunction:
    return OrliczFunction("exp", np.expm1, np.log1p)


def _bisect_increasing(fn, y, rel=1e-13, max_iter=200):
    """Vectorized inverse of an increasing fn with fn(0) = 0."""
    y = np.asarray(y, dtype=np.float64)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    if np.any(y < 0):
        raise ValueError("inverse needs y >= 0")
    lo = np.zeros_like(y)
    hi = np.ones_like(y)
    for _ in range(max_iter):
        need = np.asarray(fn(hi)) < y
        if not np.any(need):
            break
        hi[need] *= 2.0
    else:
        raise RuntimeError("bisection bracket did not close")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = np.asarray(fn(mid)) < y
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if float(np.max((hi - lo) / np.maximum(hi, 1e-300))) <= rel:
            break
    out = 0.5 * (lo + hi)
    out[y == 0] = 0.0
    return float(out[0]) if scalar else out


class LambdaSequence:
    """Nondecreasing positive lambda_j with divergent reciprocal sum."""

    def __init__(self, kind: str, beta: float | None = None, table=None):
        self.kind = kind
        self.beta = beta
        self._table = None
        if kind == "power":
            if beta is None or beta < 0:
                raise ValueError("power Lambda-sequence needs beta >= 0")
            if beta > 1:
                raise ValueError("lambda_j = j^beta with beta > 1 has summable reciprocals")
            self.name = f"power:{beta:g}"
        elif kind == "table":
            t = np.asarray(table, dtype=np.float64)
            if t.ndim != 1 or t.size == 0 or np.any(t <= 0):
                raise ValueError("Lambda table must be positive")
            if np.any(np.diff(t) < 0):
                raise ValueError("Lambda-sequence must be nondecreasing")
            self._table = t
            self.name = "table"
        else:
            raise ValueError(f"unknown Lambda kind {kind!r}")

    @classmethod
    def power(cls, beta: float) -> "LambdaSequence":
        return cls("power", beta=beta)

    @classmethod
    def harmonic(cls) -> "LambdaSequence":
        return cls("power", beta=1.0)

    @classmethod
    def from_table(cls, values) -> "LambdaSequence":
        return cls("table", table=values)

    def value(self, j):
        j = np.asarray(j, dtype=np.float64)
        if self.kind == "power":
            return j ** self.beta
        idx = j.astype(np.int64)
        if np.any(idx > self._table.size):
            raise ValueError("index beyond Lambda table")
        return self._table[idx - 1]

    def reciprocal_cumsum(self, n: int) -> np.ndarray:
        """Lambda_k = sum_{j<=k} 1/lambda_j for k = 1..n."""
        js = np.arange(1, n + 1, dtype=np.float64)
        return np.cumsum(1.0 / self.value(js))


# ---------------------------------------------------------------------------
# Phi-sequences
# ---------------------------------------------------------------------------

_CHECK_XS = np.array([0.25, 0.5, 1.0, 2.0, 4.0])


class PhiSequence:
    """Nonincreasing-in-j sequence of increasing convex phi_j with phi_j(0) = 0.

    Kinds: ``power_all`` (phi_j = x^q), ``orlicz_all`` (phi_j = phi),
    ``orlicz_over_lambda`` (phi_j = phi/lambda_j), ``custom`` (explicit list,
    declared divergent by the caller).
    """

    def __init__(self, kind: str, *, q: float | None = None, phi: OrliczFunction | None = None,
                 lam: LambdaSequence | None = None, phis: list | None = None,
                 divergent: bool = True):
        self.kind = kind
        self.q = q
        self.phi_fn = phi
        self.lam = lam
        self._phis = phis
        if kind == "power_all":
            if q is None or q < 1:
                raise ValueError("power_all needs q >= 1")
            self.name = f"power:{q:g}"
        elif kind == "orlicz_all":
            if phi is None:
                raise ValueError("orlicz_all needs an Orlicz function")
            self.name = f"orlicz:{phi.name}"
        elif kind == "orlicz_over_lambda":
            if phi is None or lam is None:
                raise ValueError("orlicz_over_lambda needs phi and a Lambda-sequence")
            self.name = f"orlicz:{phi.name}/lambda:{lam.name}"
        elif kind == "custom":
            if not phis:
                raise ValueError("custom needs a list of functions")
            if not divergent:
                raise ValueError("custom Phi-sequences must be declared divergent")
            self.name = f"custom[{len(phis)}]"
        else:
            raise ValueError(f"unknown Phi kind {kind!r}")
        self._lambda_cum: np.ndarray | None = None
        self._validate()

    # constructors ----------------------------------------------------------

    @classmethod
    def power_all(cls, q: float) -> "PhiSequence":
        return cls("power_all", q=q)

    @classmethod
    def orlicz_all(cls, phi: OrliczFunction) -> "PhiSequence":
        return cls("orlicz_all", phi=phi)

    @classmethod
    def orlicz_over_lambda(cls, phi: OrliczFunction, lam: LambdaSequence) -> "PhiSequence":
        return cls("orlicz_over_lambda", phi=phi, lam=lam)

    @classmethod
    def custom(cls, phis: list, divergent: bool = True) -> "PhiSequence":
        return cls("custom", phis=phis, divergent=divergent)

    # validation ------------------------------------------------------------

    def _validate(self):
        max_j = 8 if self.kind != "custom" else len(self._phis)
        xs = _CHECK_XS
        prev = None
        for j in range(1, max_j + 1):
            vals = self.phi(j, xs)
            if abs(float(self.phi(j, 0.0))) > 1e-12:
                raise ValueError(f"phi_{j}(0) != 0")
            if np.any(np.diff(vals) <= 0):
                raise ValueError(f"phi_{j} is not increasing on the check grid")
            mid = self.phi(j, 0.5 * (xs[:-1] + xs[1:]))
            if np.any(mid > 0.5 * (vals[:-1] + vals[1:]) + 1e-9):
                raise ValueError(f"phi_{j} fails the midpoint convexity test")
            if prev is not None and np.any(vals > prev + 1e-12):
                raise ValueError("phi_(j+1) must not exceed phi_j pointwise")
            prev = vals

    # evaluation ------------------------------------------------------------

    def _lam_cum(self, n: int) -> np.ndarray:
        if self._lambda_cum is None or self._lambda_cum.size < n:
            self._lambda_cum = self.lam.reciprocal_cumsum(max(n, 1024))
        return self._lambda_cum

    def phi(self, j: int, x):
        """phi_j(x)."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "power_all":
            return x ** self.q
        if self.kind == "orlicz_all":
            return self.phi_fn(x)
        if self.kind == "orlicz_over_lambda":
            return self.phi_fn(x) / float(self.lam.value(j))
        if j > len(self._phis):
            raise ValueError("index beyond the custom Phi list")
        return np.asarray(self._phis[j - 1](x), dtype=np.float64)

    def partial(self, n: int, x):
        """Phi_n(x) = sum_{j<=n} phi_j(x)."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "power_all":
            return n * x ** self.q
        if self.kind == "orlicz_all":
            return n * self.phi_fn(x)
        if self.kind == "orlicz_over_lambda":
            return float(self._lam_cum(n)[n - 1]) * self.phi_fn(x)
        if n > len(self._phis):
            raise ValueError("index beyond the custom Phi list")
        return sum(np.asarray(p(x), dtype=np.float64) for p in self._phis[:n])

    def partial_rows(self, ns: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Phi_{ns[i]}(x[i]) elementwise, used by the vectorized inverse."""
        if self.kind == "power_all":
            return ns * x ** self.q
        if self.kind == "orlicz_all":
            return ns * self.phi_fn(x)
        if self.kind == "orlicz_over_lambda":
            cum = self._lam_cum(int(np.max(ns)))
            return cum[ns.astype(np.int64) - 1] * self.phi_fn(x)
        out = np.empty(x.shape)
        for i, (n, xi) in enumerate(zip(ns.astype(int), x)):
            out[i] = float(self.partial(n, xi))
        return out

    def inverse_at(self, n: int, y: float) -> float:
        """Phi_n^{-1}(y) by monotone bisection (1e-12 relative)."""
        return float(phi_partial_inverse(self, n, y))

    def inverse_at_one_table(self, kmax: int) -> np.ndarray:
        """[Phi_k^{-1}(1) for k = 1..kmax] by vectorized bisection."""
        if self.kind == "custom" and kmax > 4096:
            raise ValueError("custom Phi inverse tables are capped at 4096")
        ns = np.arange(1, kmax + 1, dtype=np.float64)
        ones = np.ones(kmax)
        lo = np.zeros(kmax)
        hi = np.ones(kmax)
        for _ in range(200):
            need = self.partial_rows(ns, hi) < ones
            if not np.any(need):
                break
            hi[need] *= 2.0
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            below = self.partial_rows(ns, mid) < ones
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def inverse_at_one_closed(self, ks: np.ndarray) -> np.ndarray | None:
        """Closed-form Phi_k^{-1}(1) for scan-scale work, or None."""
        if self.kind == "power_all":
            return ks ** (-1.0 / self.q)
        if self.kind == "orlicz_all" and self.phi_fn._inv is not None:
            return self.phi_fn.inverse(1.0 / ks)
        if self.kind == "orlicz_over_lambda" and self.phi_fn._inv is not None:
            cum = self._lam_cum(int(np.max(ks)))
            return self.phi_fn.inverse(1.0 / cum[ks.astype(np.int64) - 1])
        return None


def phi_partial_inverse(Phi: PhiSequence, n: int, y: float) -> float:
    """x with Phi_n(x) = y, via monotone bisection to 1e-12 relative."""
    if y < 0:
        raise ValueError("y must be >= 0")
    if y == 0:
        return 0.0
    return float(_bisect_increasing(lambda x: Phi.partial(n, x), y, rel=1e-13))


# ---------------------------------------------------------------------------
# Embedding criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CriterionReport:
    horizon: int
    trace: np.ndarray
    running_sup: float
    verdict: str
    crosscheck_gap: float | None = None

    def to_json_dict(self) -> dict:
        d = {
            "horizon": self.horizon,
            "trace": [float(v) for v in self.trace],
            "running_sup": self.running_sup,
            "verdict": self.verdict,
        }
        if self.crosscheck_gap is not None:
            d["crosscheck_gap"] = self.crosscheck_gap
        return d


def _verdict_from_trace(trace: np.ndarray, growth_factor: float, ref_fraction: float,
                        tail_tol: float) -> str:
    h = trace.size
    ref = max(1, int(h * ref_fraction))
    floor = float(np.min(trace[:ref]))
    end = float(trace[-1])
    mid = float(trace[h // 2 - 1])
    if floor > 0 and end > growth_factor * floor:
        return "Fails"
    if end <= mid * (1.0 + tail_tol):
        return "Embeds"
    return "Inconclusive"


def _report_from_scores(scores: np.ndarray, nu: ModulusOfVariation, growth_factor: float,
                        ref_fraction: float, tail_tol: float,
                        crosscheck_gap: float | None = None) -> CriterionReport:
    horizon = scores.size
    trace = np.maximum.accumulate(scores) / nu.table(horizon)
    return CriterionReport(
        horizon=horizon,
        trace=trace,
        running_sup=float(np.max(trace)),
        verdict=_verdict_from_trace(trace, growth_factor, ref_fraction, tail_tol),
        crosscheck_gap=crosscheck_gap,
    )


def embedding_criterion(Phi: PhiSequence, nu: ModulusOfVariation, p: float, horizon: int,
                        growth_factor: float = 10.0, ref_fraction: float = 0.25,
                        tail_tol: float = 1e-9) -> CriterionReport:
    """Trace of (1/nu(n)) max_{k<=n} k^(1/p) Phi_k^{-1}(1) with a verdict.

    Fails when the trace ends above ``growth_factor`` times the minimum it
    attained over the first ``ref_fraction`` of the horizon; Embeds when the
    tail has stopped increasing; otherwise Inconclusive.
    """
    if horizon < 8:
        raise ValueError("horizon must be >= 8")
    ks = np.arange(1, horizon + 1, dtype=np.float64)
    scores = ks ** (1.0 / p) * Phi.inverse_at_one_table(horizon)
    return _report_from_scores(scores, nu, growth_factor, ref_fraction, tail_tol)


_COROLLARY_CASES = ("BVq", "Salem", "LambdaBV", "WatermanShiba", "PhiLambda")


def corollary_criteria(case: str, nu: ModulusOfVariation, p: float, horizon: int, *,
                       q: float | None = None, phi: OrliczFunction | None = None,
                       lam: LambdaSequence | None = None,
                       growth_factor: float = 10.0, ref_fraction: float = 0.25,
                       tail_tol: float = 1e-9) -> CriterionReport:
    """Case-specific embedding expressions, cross-checked against the generic
    criterion on the induced Phi-sequence (max gap must stay within 1e-9)."""
    if case not in _COROLLARY_CASES:
        raise ValueError(f"case must be one of {_COROLLARY_CASES}")
    ks = np.arange(1, horizon + 1, dtype=np.float64)
    kp = ks ** (1.0 / p)
    if case == "BVq":
        if q is None:
            raise ValueError("BVq needs q")
        expr = ks ** (1.0 / p - 1.0 / q)
        induced = PhiSequence.power_all(q)
    elif case == "Salem":
        if phi is None:
            raise ValueError("Salem needs an Orlicz function")
        expr = kp * phi.inverse(1.0 / ks)
        induced = PhiSequence.orlicz_all(phi)
    elif case == "LambdaBV":
        if lam is None:
            raise ValueError("LambdaBV needs a Lambda-sequence")
        expr = kp / lam.reciprocal_cumsum(horizon)
        induced = PhiSequence.orlicz_over_lambda(power_orlicz(1.0), lam)
    elif case == "WatermanShiba":
        if lam is None or q is None:
            raise ValueError("WatermanShiba needs q and a Lambda-sequence")
        expr = kp * lam.reciprocal_cumsum(horizon) ** (-1.0 / q)
        induced = PhiSequence.orlicz_over_lambda(power_orlicz(q), lam)
    else:  # PhiLambda
        if lam is None or phi is None:
            raise ValueError("PhiLambda needs an Orlicz function and a Lambda-sequence")
        expr = kp * phi.inverse(1.0 / lam.reciprocal_cumsum(horizon))
        induced = PhiSequence.orlicz_over_lambda(phi, lam)

    generic = kp * induced.inverse_at_one_table(horizon)
    gap = float(np.max(np.abs(expr - generic) / np.maximum(1.0, np.abs(expr))))
    if gap > 1e-9:
        raise RuntimeError(f"corollary expression disagrees with the generic criterion (gap {gap:g})")
    return _report_from_scores(expr, nu, growth_factor, ref_fraction, tail_tol, crosscheck_gap=gap)


# ---------------------------------------------------------------------------
# Phi-variation of sampled functions
# ---------------------------------------------------------------------------

def var_phi(f: SampledFunction, Phi: PhiSequence, n_budget: int = 13, exact: bool = True) -> float:
    """sup over selections of sum_j phi_j(|f(I_j)|), largest difference first.

    Exact mode enumerates all selections of at most ``n_budget`` intervals
    (grids of at most 14 points).  With ``exact=False`` a descending pairing
    of the local-extrema differences is returned; it is only a lower bound.
    """
    v = f.values
    if not exact:
        red = extrema_reduce(f)
        d = np.sort(np.abs(np.diff(red.values)))[::-1]
        d = d[d > 0][:n_budget]
        return float(sum(float(Phi.phi(j + 1, x)) for j, x in enumerate(d)))
    if len(f) > 14:
        raise ValueError("exact-mode budget exceeded (grid > 14 points); pass exact=False")
    m = len(f)
    budget = min(n_budget, m - 1)
    best = 0.0

    def value_of(diffs: list[float]) -> float:
        d = sorted(diffs, reverse=True)
        return float(sum(float(Phi.phi(j + 1, x)) for j, x in enumerate(d)))

    def recurse(start: int, left: int, diffs: list[float]):
        nonlocal best
        if diffs:
            val = value_of(diffs)
            if val > best:
                best = val
        if left == 0:
            return
        for i in range(start, m - 1):
            for j in range(i + 1, m):
                d = abs(v[j] - v[i])
                if d > 0:
                    diffs.append(d)
                    recurse(j, left - 1, diffs)
                    diffs.pop()

    recurse(0, budget, [])
    return best


def wu_bound_check(Phi: PhiSequence, x, p: float, var_budget: float):
    """((sum x_j^p)^(1/p), 16 max_m m^(1/p) Phi_m^{-1}(var_budget), lhs <= rhs)."""
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs < 0) or np.any(np.diff(xs) > 1e-12):
        raise ValueError("x must be nonincreasing and nonnegative")
    total = sum(float(Phi.phi(j + 1, xj)) for j, xj in enumerate(xs))
    if total > var_budget * (1.0 + 1e-12) + 1e-15:
        raise ValueError("sum phi_j(x_j) exceeds the variation budget")
    lhs = float(np.sum(xs ** p) ** (1.0 / p)) if xs.size else 0.0
    n = max(1, xs.size)
    ms = np.arange(1, n + 1, dtype=np.float64)
    invs = np.array([Phi.inverse_at(int(m), var_budget) for m in range(1, n + 1)])
    rhs = 16.0 * float(np.max(ms ** (1.0 / p) * invs))
    return lhs, rhs, bool(lhs <= rhs * (1.0 + 1e-12))


# ---------------------------------------------------------------------------
# Witness generation for failed embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessBudget:
    n_max: int = 1 << 34          # largest block index searched
    literal_n_max: int = 1 << 27  # scan cap while chasing the full 2^(4k) rate
    max_points: int = 30_000_000  # total materialized grid points
    dp_ops: float = 6e8           # full-window DP cost cap (value ops)
    prefix_teeth: int = 40        # teeth in the small replica DP check
    criterion_horizon: int = 100_000


@dataclass(frozen=True)
class WitnessBlock:
    k: int
    n: int
    m: int
    s: int
    r: int
    height: float
    rate: float
    literal: bool


@dataclass(frozen=True)
class BlockCertificate:
    k: int
    n: int
    intervals: int
    objective: float
    ratio: float
    required: float
    varphi_term: float
    varphi_cap: float
    prefix_dp_ok: bool
    window_dp_ran: bool
    window_dp_value: float | None


@dataclass(frozen=True, eq=False)
class Witness:
    function: SampledFunction
    blocks: tuple
    certificates: tuple
    varphi_total: float
    certified: bool

    def to_json_dict(self, max_function_points: int = 200_000) -> dict:
        if len(self.function) <= max_function_points:
            fn = self.function.to_json_dict()
        else:
            fn = {"points": len(self.function), "omitted": True}
        return {
            "function": fn,
            "blocks": [dict(vars(b)) for b in self.blocks],
            "certificates": [dict(vars(c)) for c in self.certificates],
            "varphi_total": self.varphi_total,
            "certified": self.certified,
        }


class _ScoreScan:
    """Prefix argmax of g(k) = k^(1/p) Phi_k^{-1}(1), scanned in chunks."""

    _CHUNK = 1 << 21

    def __init__(self, Phi: PhiSequence, p: float):
        self.Phi = Phi
        self.p = p
        self._scanned = 0
        self._best_m = 0
        self._best_g = -np.inf
        self._checkpoints: list[tuple[int, int, float]] = [(0, 0, -np.inf)]

    def _g_chunk(self, lo: int, hi: int) -> np.ndarray:
        ks = np.arange(lo, hi + 1, dtype=np.float64)
        inv = self.Phi.inverse_at_one_closed(ks)
        if inv is None:
            if hi > 1 << 22:
                raise ValueError("generic Phi scans are capped at 2^22; no closed inverse")
            inv = self.Phi.inverse_at_one_table(hi)[lo - 1:]
        return ks ** (1.0 / self.p) * inv

    def argmax_upto(self, n: int) -> tuple[int, float]:
        while self._scanned < n:
            lo = self._scanned + 1
            hi = min(self._scanned + self._CHUNK, n)
            g = self._g_chunk(lo, hi)
            i = int(np.argmax(g))
            if g[i] > self._best_g:
                self._best_g = float(g[i])
                self._best_m = lo + i
            self._scanned = hi
            self._checkpoints.append((hi, self._best_m, self._best_g))
        # best over a strict prefix of the scanned range
        base_m, base_g = 0, -np.inf
        last_cp = 0
        for cp, m, gval in self._checkpoints:
            if cp <= n:
                base_m, base_g, last_cp = m, gval, cp
            else:
                break
        if last_cp < n:
            g = self._g_chunk(last_cp + 1, n)
            i = int(np.argmax(g))
            if g[i] > base_g:
                return last_cp + 1 + i, float(g[i])
        return base_m, base_g


def _block_geometry(k: int, n: int, m: int, Phi: PhiSequence):
    s = int((2.0 ** (-k) * n + 1.0) // 2)
    height = 2.0 ** (-k) * Phi.inverse_at(m, 1.0)
    return s, height


def _search_block(scan: _ScoreScan, nu: ModulusOfVariation, p: float, k: int,
                  budget: WitnessBudget, point_cap: int):
    """Smallest n > 2^(k+2) whose block is certifiable; full growth rate first."""
    Phi = scan.Phi
    n_min = 2 ** (k + 2) + 1
    full_rate_target = 2.0 ** (4 * k)
    required = 2.0 ** k

    def rate(n: int) -> tuple[int, float]:
        m, g = scan.argmax_upto(n)
        return m, g / nu.value(n)

    # Pass 1: the full 2^(4k) rate, if it is reachable within the scan cap
    # and its block fits the point budget.
    n = n_min
    found = None
    while n <= budget.literal_n_max:
        m, rt = rate(n)
        if rt > full_rate_target:
            found = n
            break
        n = max(n + 1, int(n * 2))
    if found is not None:
        lo, hi = max(n_min, found // 2), found
        while lo < hi:
            mid = (lo + hi) // 2
            _, rt = rate(mid)
            if rt > full_rate_target:
                hi = mid
            else:
                lo = mid + 1
        n = lo
        m, rt = rate(n)
        s, height = _block_geometry(k, n, m, Phi)
        r = min(m, s)
        if 3 * r + 2 <= point_cap:
            return WitnessBlock(k=k, n=n, m=m, s=s, r=r, height=height, rate=rt, literal=True)

    # Pass 2: smallest n still certifying a 2^k growth ratio within the budget.
    margin = 1.02

    def feasible(n: int):
        m, rt = rate(n)
        s, height = _block_geometry(k, n, m, Phi)
        if height <= 0:
            return None
        need = (required * nu.value(n) * margin / height) ** p / 2.0
        r_needed = int(math.ceil(need))
        if r_needed <= min(m, s) and 3 * r_needed + 2 <= point_cap:
            return WitnessBlock(k=k, n=n, m=m, s=s, r=r_needed, height=height, rate=rt,
                                literal=False)
        return None

    n = n_min
    hit = None
    while n <= budget.n_max:
        hit = feasible(n)
        if hit is not None:
            break
        n = max(n + 1, int(n * 1.5))
    if hit is None:
        return None
    lo, hi = max(n_min, int(n / 1.5)), n
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid) is not None:
            hi = mid
        else:
            lo = mid + 1
    return feasible(lo) or hit


def _materialize(blocks: list[WitnessBlock]):
    """Step blocks on [0, 1]; three points per tooth, jumps on the left edge."""
    xs_parts = [np.array([0.0])]
    vs_parts = [np.array([0.0])]
    sel_starts: list[np.ndarray] = []
    sel_ends: list[np.ndarray] = []
    offset = 1
    for blk in sorted(blocks, key=lambda b: b.k, reverse=True):
        start = 2.0 ** (-blk.k)
        w = 1.0 / blk.n
        j = np.arange(blk.r, dtype=np.float64)
        us = start + 2.0 * w * j
        pts = np.empty(3 * blk.r)
        pts[0::3] = us
        pts[1::3] = us + 0.5 * w
        pts[2::3] = us + w
        vals = np.zeros(3 * blk.r)
        vals[0::3] = blk.height
        vals[1::3] = blk.height
        prev = xs_parts[-1]
        if prev[-1] >= pts[0]:
            # A block may end exactly where the next one starts; grid positions
            # are free between neighbours, so slide the trailing zero left.
            left_anchor = prev[-2] if prev.size > 1 else 0.0
            prev[-1] = 0.5 * (left_anchor + pts[0])
        xs_parts.append(pts)
        vs_parts.append(vals)
        idx = offset + 3 * np.arange(blk.r, dtype=np.int64)
        up = np.stack([idx - 1, idx])          # previous zero -> tooth left edge
        down = np.stack([idx + 1, idx + 2])    # tooth interior -> right edge
        sel_starts.append(np.concatenate([up[0], down[0]]))
        sel_ends.append(np.concatenate([up[1], down[1]]))
        offset += 3 * blk.r
    xs = np.concatenate(xs_parts)
    vs = np.concatenate(vs_parts)
    if xs[-1] < 1.0 - 1e-12:
        xs = np.append(xs, 1.0)
        vs = np.append(vs, 0.0)
    f = SampledFunction(xs, vs)
    return f, sel_starts, sel_ends


def _prefix_dp_check(f: SampledFunction, blk: WitnessBlock, start_idx: int, p: float,
                     teeth: int) -> bool:
    t = min(blk.r, teeth)
    lo = start_idx - 1
    hi = start_idx + 3 * t
    sub = SampledFunction(f.grid[lo:hi], f.values[lo:hi])
    val, _ = pvariation_dp(sub, p, 2 * t)
    expected = (2.0 * t) ** (1.0 / p) * blk.height
    return abs(val - expected) <= 1e-9 * (1.0 + expected)


def _window_dp_value(f: SampledFunction, blk: WitnessBlock, start_idx: int, p: float,
                     budget: WitnessBudget) -> float | None:
    lo = start_idx - 1
    hi = start_idx + 3 * blk.r
    sub = extrema_reduce(SampledFunction(f.grid[lo:hi], f.values[lo:hi]))
    m = len(sub)
    cost = m * float(blk.n) if p == 1.0 else m * m * float(blk.n)
    if cost > budget.dp_ops:
        return None
    if p == 1.0:
        prof = _kernels.dp1_profile(sub.values, blk.n)
        return float(prof[blk.n])
    prof = _kernels.dp_profile_pow(sub.values, p, blk.n)
    return float(prof[blk.n] ** (1.0 / p))


def witness_generate(Phi: PhiSequence, nu: ModulusOfVariation, p: float, k_max: int,
                     budget: WitnessBudget | None = None):
    """Build a function in the Phi-variation ball violating the nu growth bound.

    Returns a certified :class:`Witness` or ``None`` when no certifiable block
    configuration fits the search budget.  Requires the embedding criterion to
    Fail for (Phi, nu, p).
    """
    if not (1 <= k_max <= 5):
        raise ValueError("k_max must lie in 1..5")
    budget = budget or WitnessBudget()
    report = embedding_criterion(Phi, nu, p, budget.criterion_horizon)
    if report.verdict != "Fails":
        raise ValueError(
            f"embedding criterion verdict is {report.verdict}; witnesses exist only for Fails"
        )
    scan = _ScoreScan(Phi, p)
    blocks: list[WitnessBlock] = []
    points_left = budget.max_points
    for k in range(1, k_max + 1):
        blk = _search_block(scan, nu, p, k, budget, points_left)
        if blk is None:
            return None
        points_left -= 3 * blk.r + 2
        blocks.append(blk)

    f, sel_starts, sel_ends = _materialize(blocks)
    ordered = sorted(blocks, key=lambda b: b.k, reverse=True)
    certs = []
    all_ok = True
    varphi_total = 0.0
    offset = 1
    for blk in ordered:
        i = ordered.index(blk)
        starts, ends = sel_starts[i], sel_ends[i]
        diffs = np.abs(f.values[ends] - f.values[starts])
        objective = float(np.sum(diffs ** p) ** (1.0 / p))
        count = int(starts.size)
        if count > blk.n:
            raise RuntimeError("certificate selection uses more intervals than allowed")
        ratio = objective / nu.value(blk.n)
        required = 2.0 ** blk.k
        term = float(Phi.partial(2 * blk.r, blk.height))
        cap = 2.0 * 2.0 ** (-blk.k)
        varphi_total += term
        prefix_ok = _prefix_dp_check(f, blk, offset, p, budget.prefix_teeth)
        window_val = _window_dp_value(f, blk, offset, p, budget)
        ok = (
            ratio >= required
            and term <= cap * (1.0 + 1e-9)
            and prefix_ok
            and (window_val is None or window_val >= objective * (1.0 - 1e-9))
        )
        all_ok = all_ok and ok
        certs.append(BlockCertificate(
            k=blk.k, n=blk.n, intervals=count, objective=objective, ratio=float(ratio),
            required=required, varphi_term=term, varphi_cap=cap, prefix_dp_ok=prefix_ok,
            window_dp_ran=window_val is not None, window_dp_value=window_val,
        ))
        offset += 3 * blk.r
    certified = all_ok and varphi_total <= 2.0 * (1.0 + 1e-9)
    if not certified:
        raise RuntimeError("witness certificates failed; see certificate record")
    certs.sort(key=lambda c: c.k)
    return Witness(
        function=f,
        blocks=tuple(sorted(blocks, key=lambda b: b.k)),
        certificates=tuple(certs),
        varphi_total=float(varphi_total),
        certified=certified,
    )
