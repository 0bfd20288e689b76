"""Symmetric sequence-space norms on finitely supported sequences.

Every norm is applied to the nonincreasing rearrangement, which makes
permutation and sign invariance definitional.
"""

from __future__ import annotations

import numpy as np

from .embeddings import OrliczFunction, PhiSequence
from .modulus import ModulusOfVariation, epsilon_p_table

__all__ = [
    "rearrange",
    "marcinkiewicz_norm",
    "lorentz_norm",
    "orlicz_norm",
    "modular_norm",
    "fundamental_sequence",
    "dual_harmonic_estimate",
]


def _as_seq(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sequence entries must be finite")
    return arr


def rearrange(x) -> np.ndarray:
    """Nonincreasing rearrangement of |x|."""
    return np.sort(np.abs(_as_seq(x)))[::-1]


def marcinkiewicz_norm(x, nu: ModulusOfVariation, p: float) -> float:
    """sup_n (sum_{j<=n} (x*_j)^p)^(1/p) / nu(n) over the support length."""
    xs = rearrange(x)
    if xs.size == 0 or xs[0] == 0.0:
        return 0.0
    partial = np.cumsum(xs ** p) ** (1.0 / p)
    return float(np.max(partial / nu.table(xs.size)))


def lorentz_norm(x, w, q: float) -> float:
    """(sum (x*_j)^q w_j)^(1/q) for a nonincreasing positive weight."""
    xs = rearrange(x)
    ws = _as_seq(w)
    if np.any(ws <= 0) or np.any(np.diff(ws) > 1e-15):
        raise ValueError("weights must be positive and nonincreasing")
    if ws.size < xs.size:
        raise ValueError("weight sequence shorter than the support")
    return float(np.sum(xs ** q * ws[: xs.size]) ** (1.0 / q))


def orlicz_norm(x, phi: OrliczFunction) -> float:
    """Luxemburg norm inf{c > 0 : sum phi(|x_j|/c) <= 1}; 0 for x = 0."""
    xs = rearrange(x)
    xs = xs[xs > 0]
    if xs.size == 0:
        return 0.0
    # The modular c -> sum phi(x_j/c) decreases; bracket its crossing of 1.
    hi = float(np.max(xs))
    while float(np.sum(phi(xs / hi))) > 1.0:
        hi *= 2.0
    lo = hi
    while float(np.sum(phi(xs / lo))) < 1.0 and lo > 1e-280:
        lo /= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(np.sum(phi(xs / mid))) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-11 * hi:
            break
    return float(hi)


def modular_norm(x, Phi: PhiSequence) -> float:
    """inf{c > 0 : sum phi_j(x*_j / c) <= 1} on the rearrangement."""
    xs = rearrange(x)
    xs = xs[xs > 0]
    if xs.size == 0:
        return 0.0
    js = np.arange(1, xs.size + 1)

    def modular(c):
        return float(sum(float(Phi.phi(int(j), xj / c)) for j, xj in zip(js, xs)))

    hi = float(np.max(xs))
    while modular(hi) > 1.0:
        hi *= 2.0
    lo = hi
    while modular(lo) < 1.0 and lo > 1e-280:
        lo /= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if modular(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-11 * hi:
            break
    return float(hi)


def fundamental_sequence(space: str, n: int, *, nu: ModulusOfVariation | None = None,
                         p: float | None = None, w=None, q: float | None = None,
                         phi: OrliczFunction | None = None,
                         Phi: PhiSequence | None = None) -> float:
    """Norm of the n-term indicator sequence.

    For the Marcinkiewicz space this equals n^(1/p)/nu(n) because
    nu(m)/m^(1/p) is nonincreasing; the norm is computed and the closed form
    asserted.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ones = np.ones(n)
    s = space.lower()
    if s == "marcinkiewicz":
        val = marcinkiewicz_norm(ones, nu, p)
        closed = n ** (1.0 / p) / nu.value(n)
        if abs(val - closed) > 1e-10 * (1.0 + closed):
            raise RuntimeError("Marcinkiewicz fundamental sequence differs from n^(1/p)/nu(n)")
        return float(closed)
    if s == "lorentz":
        return lorentz_norm(ones, w, q)
    if s == "orlicz":
        return orlicz_norm(ones, phi)
    if s == "modular":
        return modular_norm(ones, Phi)
    raise ValueError(f"unknown space {space!r}")


def dual_harmonic_estimate(nu: ModulusOfVariation, p: float, horizon: int):
    """(sum_{k<=h} eps_p(k)/k, sum_{k<=h} nu(k)/k^(1+1/p)).

    The first sum is the pairing of {1/k} with the extremal unit vector
    {eps_p(k)} of the Marcinkiewicz ball, the second the dual-norm bound.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    ks = np.arange(1, horizon + 1, dtype=np.float64)
    lower = float(np.sum(epsilon_p_table(nu, p, horizon) / ks))
    upper = float(np.sum(nu.table(horizon) / ks ** (1.0 + 1.0 / p)))
    return lower, upper
