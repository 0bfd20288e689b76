"""Fourier partial sums, Fejer means, and uniform-convergence criteria.

Coefficient convention: a_n = (1/pi) integral f cos(nx), b_n likewise with
sin, S_n = a0/2 + sum_{k<=n} a_k cos(kx) + b_k sin(kx), and the coefficient
magnitude is sqrt(a_n^2 + b_n^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _kernels
from .modulus import ModulusOfVariation, epsilon_p_table
from .sampled import SampledFunction

TWO_PI = 2.0 * math.pi

__all__ = [
    "FourierCoeffs",
    "fourier_coeffs",
    "partial_sum",
    "fejer_mean",
    "fejer_kernel",
    "fejer_kernel_integral",
    "modulus_of_continuity",
    "OmegaPower",
    "OmegaLog",
    "omega_of",
    "theta",
    "ConvergenceSequences",
    "convergence_sequences",
    "convergence_sweep",
    "q_sequence",
    "Unif2Report",
    "unif2_verdicts",
    "coeff_decay_report",
    "sine_integral_lower",
    "nikolskii_bound_check",
]


# ---------------------------------------------------------------------------
# Coefficients, partial sums, Fejer means
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FourierCoeffs:
    a0: float
    a: np.ndarray
    b: np.ndarray
    N: int

    def magnitude(self, n: int) -> float:
        """sqrt(a_n^2 + b_n^2) for 1 <= n <= N."""
        return float(math.hypot(self.a[n - 1], self.b[n - 1]))


def _one_period(f: SampledFunction):
    if not f.periodic or f.period is None:
        raise ValueError("Fourier coefficients need a periodic function")
    if abs(f.period - TWO_PI) > 1e-9:
        raise ValueError("expected period 2*pi")
    g, v = f.grid, f.values
    if abs((g[-1] - g[0]) - f.period) <= 1e-12:  # duplicated endpoint
        g, v = g[:-1], v[:-1]
    steps = np.diff(g)
    if np.max(steps) - np.min(steps) > 1e-9 * np.max(steps):
        raise ValueError("need a uniform grid over one period")
    return g, v


def fourier_coeffs(f: SampledFunction, N: int) -> FourierCoeffs:
    """Rectangle-rule trigonometric coefficients, exact below the aliasing limit."""
    g, v = _one_period(f)
    m = g.size
    if 2 * N >= m:
        raise ValueError(f"aliasing limit exceeded: need N < {m}/2")
    ns = np.arange(1, N + 1)
    phase = np.outer(ns, g)
    a = (2.0 / m) * (np.cos(phase) @ v)
    b = (2.0 / m) * (np.sin(phase) @ v)
    a0 = float((2.0 / m) * np.sum(v))
    return FourierCoeffs(a0=a0, a=a, b=b, N=int(N))


def partial_sum(c: FourierCoeffs, n: int, x_grid) -> np.ndarray:
    """Pointwise S_n(f, x) on x_grid."""
    if n > c.N:
        raise ValueError("n exceeds the computed harmonics")
    x = np.asarray(x_grid, dtype=np.float64)
    out = np.full(x.shape, c.a0 / 2.0)
    for k in range(1, n + 1):
        out += c.a[k - 1] * np.cos(k * x) + c.b[k - 1] * np.sin(k * x)
    return out


def fejer_mean(c: FourierCoeffs, n: int, x_grid) -> np.ndarray:
    """F_n = (S_0 + ... + S_n)/(n+1); Cesaro weights 1 - k/(n+1)."""
    if n > c.N:
        raise ValueError("n exceeds the computed harmonics")
    x = np.asarray(x_grid, dtype=np.float64)
    out = np.full(x.shape, c.a0 / 2.0)
    for k in range(1, n + 1):
        w = 1.0 - k / (n + 1.0)
        out += w * (c.a[k - 1] * np.cos(k * x) + c.b[k - 1] * np.sin(k * x))
    return out


def fejer_kernel(n: int, t):
    """K_n(t) = (2/(n+1)) * (sin((n+1)t/2) / (2 sin(t/2)))^2, K_n(0) = (n+1)/2."""
    t = np.asarray(t, dtype=np.float64)
    s = np.sin(t / 2.0)
    num = np.sin((n + 1) * t / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (2.0 / (n + 1)) * (num / (2.0 * s)) ** 2
    val = np.where(np.abs(s) < 1e-9, (n + 1) / 2.0, val)
    return val if val.ndim else float(val)


def fejer_kernel_integral(n: int) -> float:
    """Adaptive quadrature of K_n over [-pi, pi]; equals pi."""
    if n < 0:
        raise ValueError("n must be >= 0")
    val, _ = quad(lambda t: fejer_kernel(n, t), -math.pi, math.pi,
                  limit=200, epsabs=1e-12, epsrel=1e-12, points=[0.0])
    return float(val)


# ---------------------------------------------------------------------------
# Moduli of continuity
# ---------------------------------------------------------------------------

def modulus_of_continuity(f: SampledFunction, delta: float) -> float:
    """Grid-restricted sup over shifts h <= delta of sup_x |f(x+h) - f(x)|.

    Periodic functions use wraparound shifts; the wrap jump of a sawtooth is
    therefore included by design.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if delta == 0:
        return 0.0
    g, v = f.grid, f.values
    m = g.size
    if f.periodic:
        span = f.period
        cut = int(np.searchsorted(g, g[0] + min(delta, span), side="right"))
        ge = np.concatenate([g, g[: cut + 1] + span]) if cut else g
        ve = np.concatenate([v, v[: cut + 1]]) if cut else v
        return _kernels.shift_max(ge, ve, min(delta, span), m)
    return _kernels.shift_max(g, v, delta, m)


class OmegaPower:
    """omega(d) = d^alpha for alpha in (0, 1]."""

    def __init__(self, alpha: float):
        if not (0.0 < alpha <= 1.0):
            raise ValueError("alpha must lie in (0, 1]")
        self.alpha = alpha
        self.name = f"power:{alpha:g}"

    def __call__(self, d: float) -> float:
        return float(d) ** self.alpha if d > 0 else 0.0


class OmegaLog:
    """omega(d) = 1/log(e + 1/d)."""

    name = "log"

    def __call__(self, d: float) -> float:
        return 1.0 / math.log(math.e + 1.0 / d) if d > 0 else 0.0


def omega_of(f: SampledFunction):
    """Measured modulus of continuity of a sampled function, as a callable."""

    def w(d: float) -> float:
        return modulus_of_continuity(f, d)

    w.name = "measured"  # type: ignore[attr-defined]
    return w


# ---------------------------------------------------------------------------
# Convergence criterion sequences
# ---------------------------------------------------------------------------

def _criterion_prefixes(nu: ModulusOfVariation, p: float, n: int):
    ks = np.arange(1, n, dtype=np.float64)  # 1..n-1
    harm = np.cumsum(1.0 / ks)
    tail_terms = nu.table(n - 1) / ks ** (1.0 + 1.0 / p)
    tail_cum = np.cumsum(tail_terms)
    return harm, tail_cum


def theta(nu: ModulusOfVariation, omega, p: float, n: int) -> int:
    """Smallest r in [1, n-1] minimizing omega(1/n) H_r + sum_{k>r} nu(k)/k^(1+1/p)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    w = omega(1.0 / n)
    harm, tail_cum = _criterion_prefixes(nu, p, n)
    total = tail_cum[-1]
    obj = w * harm + (total - tail_cum)
    return int(np.argmin(obj)) + 1


@dataclass(frozen=True)
class ConvergenceSequences:
    n: int
    theta: int
    rho: float
    sigma: float
    tau: float
    eta: float


def convergence_sequences(nu: ModulusOfVariation, omega, p: float, n: int) -> ConvergenceSequences:
    """rho, sigma, tau, eta at n; tails are empty at n = 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    w = omega(1.0 / n)
    harm, tail_cum = _criterion_prefixes(nu, p, n)
    total = tail_cum[-1]
    obj = w * harm + (total - tail_cum)
    th = int(np.argmin(obj)) + 1
    head = w * harm[th - 1]
    rho = float(obj[th - 1])

    ks = np.arange(1, n, dtype=np.float64)
    nut = nu.table(n - 1)
    eps = epsilon_p_table(nu, p, n - 1)
    nu_prev = np.concatenate(([0.0], nut[:-1]))
    sigma = head + float(np.sum(eps[th:] / ks[th:]))
    tau = head + float(np.sum((nut[th:] - nu_prev[th:]) / ks[th:] ** (1.0 / p)))
    delta_w = ks ** (-1.0 / p) - (ks + 1.0) ** (-1.0 / p)
    eta = head + float(np.sum(delta_w[th:] * nut[th:]))
    return ConvergenceSequences(n=int(n), theta=th, rho=rho, sigma=float(sigma),
                                tau=float(tau), eta=float(eta))


def convergence_sweep(nu: ModulusOfVariation, omega, p: float, ns) -> list[ConvergenceSequences]:
    return [convergence_sequences(nu, omega, p, int(n)) for n in ns]


def q_sequence(p: float, ks) -> np.ndarray:
    """Q_k = 1 - k + k^(1+1/p)/(k+1)^(1/p), computed cancellation-free.

    Q_k = 1 - k(1 - (k/(k+1))^(1/p)); bounds 1 - 1/p <= Q_k <= 2^(-1/p).
    """
    k = np.asarray(ks, dtype=np.float64)
    eps = 1.0 / (k + 1.0)
    return 1.0 + k * np.expm1(np.log1p(-eps) / p)


# ---------------------------------------------------------------------------
# The uniform-convergence series battery
# ---------------------------------------------------------------------------

_SERIES_LABELS = ("nu_tail", "weighted_delta", "nu_increment", "epsp_harmonic", "dual_lower")


@dataclass(frozen=True)
class Unif2Report:
    horizon: int
    partials: dict
    half_partials: dict
    converges: dict
    agree: bool
    method: str


def _series_terms(nu: ModulusOfVariation, p: float, horizon: int) -> dict:
    ks = np.arange(1, horizon + 1, dtype=np.float64)
    nut = nu.table(horizon)
    nu_prev = np.concatenate(([0.0], nut[:-1]))
    eps_p = epsilon_p_table(nu, p, horizon)
    delta_w = ks ** (-1.0 / p) - (ks + 1.0) ** (-1.0 / p)
    epsp_div_k = eps_p / ks
    return {
        "nu_tail": nut / ks ** (1.0 + 1.0 / p),
        "weighted_delta": delta_w * nut,
        "nu_increment": (nut - nu_prev) / ks ** (1.0 / p),
        "epsp_harmonic": epsp_div_k,
        "dual_lower": epsp_div_k,
    }


def _family_converges(nu: ModulusOfVariation, p: float) -> bool | None:
    """Integral-test verdict shared by all five series, for closed-form families."""
    if nu.kind == "power":
        return nu.alpha < 1.0 / p
    if nu.kind == "log":
        return True
    return None


def unif2_verdicts(nu: ModulusOfVariation, p: float, horizon: int) -> Unif2Report:
    """Partial sums at horizon and horizon/2 of the five series with verdicts.

    For power/log families the integral test decides convergence (the
    partial-sum increment heuristic misclassifies series on the p-series
    boundary at finite horizons); the raw partials make this auditable.
    Table moduli fall back to the increment heuristic.
    """
    if horizon < 16:
        raise ValueError("horizon must be >= 16")
    terms = _series_terms(nu, p, horizon)
    half = horizon // 2
    partials = {k: float(np.sum(v)) for k, v in terms.items()}
    half_partials = {k: float(np.sum(v[:half])) for k, v in terms.items()}
    truth = _family_converges(nu, p)
    converges = {}
    for k in _SERIES_LABELS:
        if truth is not None:
            converges[k] = truth
        else:
            inc = partials[k] - half_partials[k]
            converges[k] = inc < max(1e-6, 1e-3 * partials[k])
    agree = len(set(converges.values())) == 1
    return Unif2Report(
        horizon=int(horizon),
        partials=partials,
        half_partials=half_partials,
        converges=converges,
        agree=agree,
        method="integral-test" if truth is not None else "increment-heuristic",
    )


def coeff_decay_report(f: SampledFunction, nu: ModulusOfVariation, p: float, N: int) -> float:
    """sup over 1 <= n <= N of |f^(n)| n^(1/p) / nu(n)."""
    c = fourier_coeffs(f, N)
    mags = np.hypot(c.a, c.b)
    ns = np.arange(1, N + 1, dtype=np.float64)
    return float(np.max(mags * ns ** (1.0 / p) / nu.table(N)))


def sine_integral_lower(a: int, b: int, n: int):
    """(quadrature of int_{a pi/n}^{b pi/n} sin^2(nt)/t dt, (1/12) sum_{i=a}^{b} 1/i).

    Substituting u = nt, the integral equals int_{a pi}^{b pi} sin^2(u)/u du.
    """
    if not (a >= 1 and b >= 1 and n >= 1):
        raise ValueError("a, b, n must be positive integers")
    if a >= b:
        raise ValueError("need a < b")
    pieces = []
    edges = np.linspace(a * math.pi, b * math.pi, min(b - a, 256) + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = quad(lambda u: math.sin(u) ** 2 / u, lo, hi, limit=200,
                      epsabs=1e-12, epsrel=1e-12)
        pieces.append(val)
    lhs = float(np.sum(pieces))
    rhs = float(np.sum(1.0 / np.arange(a, b + 1, dtype=np.float64)) / 12.0)
    return lhs, rhs


def nikolskii_bound_check(f: SampledFunction, nu: ModulusOfVariation, omega, p: float, n: int):
    """(grid sup of |f - S_n f|, sigma(n) + nu(n)/n^(1/p))."""
    c = fourier_coeffs(f, n)
    s = partial_sum(c, n, f.grid)
    err = float(np.max(np.abs(f.values - s)))
    seqs = convergence_sequences(nu, omega, p, n)
    bound = seqs.sigma + nu.value(n) / n ** (1.0 / p)
    return err, float(bound)
