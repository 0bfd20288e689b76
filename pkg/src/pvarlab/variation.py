"""Exact p-variation of sampled functions: brute force oracle and DP."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .modulus import ModulusOfVariation
from .sampled import SampledFunction, extrema_reduce

__all__ = [
    "IntervalSelection",
    "pvariation_bruteforce",
    "pvariation_dp",
    "pvariation_profile",
    "vpnu_norm",
]

_BRUTE_MAX_POINTS = 15
_BRUTE_MAX_N = 6


@dataclass(frozen=True, eq=False)
class IntervalSelection:
    """Nonoverlapping grid intervals (i, j) with their difference values."""

    intervals: tuple[tuple[int, int], ...]
    differences: np.ndarray
    objective: float
    p: float

    def __post_init__(self):
        diffs = np.asarray(self.differences, dtype=np.float64)
        object.__setattr__(self, "differences", diffs)
        prev_end = -1
        for i, j in self.intervals:
            if not (0 <= i < j):
                raise ValueError("intervals need start < end")
            if i < prev_end:
                raise ValueError("intervals overlap")
            prev_end = j
        recomputed = float(np.sum(diffs ** self.p) ** (1.0 / self.p)) if diffs.size else 0.0
        if abs(recomputed - self.objective) > 1e-12 * (1.0 + abs(self.objective)):
            raise ValueError("objective inconsistent with differences")


def _selection_from_indices(f: SampledFunction, pairs, p: float) -> IntervalSelection:
    diffs = np.array([abs(f.values[j] - f.values[i]) for i, j in pairs])
    obj = float(np.sum(diffs ** p) ** (1.0 / p)) if diffs.size else 0.0
    return IntervalSelection(tuple(pairs), diffs, obj, float(p))


def pvariation_bruteforce(f: SampledFunction, p: float, n: int):
    """Exhaustive maximum over all selections of at most n nonoverlapping intervals.

    Deliberately naive; serves as the oracle for the DP.  Enforced budget:
    at most 15 grid points and n <= 6.
    """
    m = len(f)
    if m > _BRUTE_MAX_POINTS or n > _BRUTE_MAX_N:
        raise ValueError("brute-force budget exceeded (<= 15 points, n <= 6)")
    if n < 1:
        raise ValueError("n must be >= 1")
    v = f.values
    best_pow = 0.0
    best_sel: list[tuple[int, int]] = []

    def recurse(start: int, left: int, acc: float, chosen: list[tuple[int, int]]):
        nonlocal best_pow, best_sel
        if acc > best_pow:
            best_pow = acc
            best_sel = list(chosen)
        if left == 0:
            return
        for i in range(start, m - 1):
            for j in range(i + 1, m):
                chosen.append((i, j))
                recurse(j, left - 1, acc + abs(v[j] - v[i]) ** p, chosen)
                chosen.pop()

    recurse(0, n, 0.0, [])
    value = best_pow ** (1.0 / p)
    return value, _selection_from_indices(f, best_sel, p)


def _swing_count(values: np.ndarray) -> int:
    d = np.diff(values)
    d = d[d != 0]
    if d.size == 0:
        return 0
    return int(1 + np.sum(d[1:] * d[:-1] < 0))


def pvariation_dp(f: SampledFunction, p: float, n: int):
    """Exact grid-restricted maximum of (sum |f(I_j)|^p)^(1/p) over <= n intervals.

    Runs on the extrema-reduced grid (value-preserving) and backtracks one
    optimal selection, mapped to original grid indices.  Ties prefer earlier
    interval placement, making the selection deterministic.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if p < 1:
        raise ValueError("p must be >= 1")
    red = extrema_reduce(f)
    kept = _kept_indices(f, red)
    swings = _swing_count(red.values)
    n_eff = max(1, min(n, swings)) if swings else 1
    table, take = _kernels.dp_with_parents(red.values, p, n_eff)
    value = float(table[n_eff, -1] ** (1.0 / p))
    pairs = []
    k, i = n_eff, len(red) - 1
    while k > 0 and i > 0:
        j = take[k, i]
        if j < 0:
            i -= 1
        else:
            pairs.append((int(kept[j]), int(kept[i])))
            i = int(j)
            k -= 1
    pairs.reverse()
    return value, _selection_from_indices(f, pairs, p)


def _kept_indices(f: SampledFunction, red: SampledFunction) -> np.ndarray:
    return np.searchsorted(f.grid, red.grid)


def pvariation_profile(f: SampledFunction, p: float, n_max: int) -> np.ndarray:
    """(v_p(1, f), ..., v_p(n_max, f)) in one DP sweep; nondecreasing.

    The profile stabilizes once the budget exceeds the number of monotone
    swings, so the DP only runs up to that point and the tail is padded.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    red = extrema_reduce(f)
    swings = _swing_count(red.values)
    if swings == 0:
        return np.zeros(n_max)
    n_eff = min(n_max, swings)
    if p == 1.0:
        pow_profile = _kernels.dp1_profile(red.values, n_eff)
    else:
        pow_profile = _kernels.dp_profile_pow(red.values, p, n_eff)
    prof = pow_profile[1:] ** (1.0 / p)
    if n_max > n_eff:
        prof = np.concatenate([prof, np.full(n_max - n_eff, prof[-1])])
    return prof


def vpnu_norm(f: SampledFunction, nu: ModulusOfVariation, p: float, n_max: int):
    """(sup_{n <= n_max} v_p(n, f)/nu(n), sup |f|); their sum is the norm proxy."""
    prof = pvariation_profile(f, p, n_max)
    ratios = prof / nu.table(n_max)
    return float(np.max(ratios)), f.sup_abs()
