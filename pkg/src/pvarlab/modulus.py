"""Variation moduli: validated nondecreasing concave positive sequences."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModulusOfVariation",
    "ModulusValidation",
    "validate_modulus",
    "epsilon_p",
    "epsilon_p_table",
]

_CONCAVITY_SLACK = 1e-12


class ModulusOfVariation:
    """Sequence nu with nu(0) = 0, nu(k) > 0 nondecreasing and concave.

    Three kinds: ``power`` (nu(k) = k**alpha), ``log`` (nu(k) = log(k+1)) and
    finite ``table``.  Tables are never extrapolated; indexing past the end
    raises.
    """

    def __init__(self, kind: str, alpha: float | None = None, table: np.ndarray | None = None,
                 unbounded: bool | None = None):
        self.kind = kind
        self.alpha = alpha
        self._table = None
        if kind == "power":
            if alpha is None or not (0.0 < alpha <= 1.0):
                raise ValueError("power modulus needs alpha in (0, 1]")
            self.unbounded = True
        elif kind == "log":
            self.unbounded = True
        elif kind == "table":
            t = np.asarray(table, dtype=np.float64)
            if t.ndim != 1 or t.size == 0:
                raise ValueError("table modulus needs a nonempty sequence")
            if not np.all(np.isfinite(t)):
                raise ValueError("table entries must be finite")
            if np.any(t <= 0):
                raise ValueError("modulus values must be positive")
            if np.any(np.diff(t) < -_CONCAVITY_SLACK):
                raise ValueError("modulus must be nondecreasing")
            if t.size >= 3:
                mid = t[1:-1]
                if np.any(t[2:] + t[:-2] > 2 * mid + _CONCAVITY_SLACK):
                    raise ValueError("modulus must be concave")
            # nu(1) <= 2 nu(1) - nu(0) trivially; check the k = 1 step too
            if t.size >= 2 and t[1] > 2 * t[0] + _CONCAVITY_SLACK:
                raise ValueError("modulus must be concave (k = 1 step)")
            self._table = t
            self.unbounded = bool(unbounded)
        else:
            raise ValueError(f"unknown modulus kind {kind!r}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def power(cls, alpha: float) -> "ModulusOfVariation":
        return cls("power", alpha=alpha)

    @classmethod
    def log(cls) -> "ModulusOfVariation":
        return cls("log")

    @classmethod
    def from_table(cls, values, unbounded: bool = False) -> "ModulusOfVariation":
        return cls("table", table=values, unbounded=unbounded)

    # -- evaluation ---------------------------------------------------------

    @property
    def max_index(self) -> float:
        return float("inf") if self._table is None else float(self._table.size)

    def value(self, k):
        """nu(k) for integer k >= 0 (scalar or array)."""
        arr = np.asarray(k)
        if np.any(arr < 0):
            raise ValueError("modulus index must be nonnegative")
        kk = arr.astype(np.float64)
        if self.kind == "power":
            out = np.where(arr == 0, 0.0, kk ** self.alpha)
        elif self.kind == "log":
            out = np.log1p(kk)
        else:
            if np.any(arr > self._table.size):
                raise ValueError("index beyond table; modulus tables are not extrapolated")
            out = np.where(arr == 0, 0.0, self._table[np.maximum(arr, 1) - 1])
        return float(out) if np.isscalar(k) or arr.ndim == 0 else out

    def table(self, n: int) -> np.ndarray:
        """Array of nu(1), ..., nu(n)."""
        return self.value(np.arange(1, n + 1))

    def describe(self) -> str:
        if self.kind == "power":
            return f"power:{self.alpha:g}"
        if self.kind == "log":
            return "log"
        return "table:" + ",".join(f"{v:g}" for v in self._table)

    def __repr__(self):
        return f"ModulusOfVariation({self.describe()})"


@dataclass(frozen=True)
class ModulusValidation:
    """Checks recorded by :func:`validate_modulus`."""

    modulus: ModulusOfVariation
    p: float
    nondecreasing: bool
    concave: bool
    nu_p_quasiconcave: bool
    ratio_nonincreasing: bool
    ratio_vanishes: bool


def _parse_candidate(candidate) -> ModulusOfVariation:
    if isinstance(candidate, ModulusOfVariation):
        return candidate
    if isinstance(candidate, str):
        s = candidate.strip().lower()
        if s.startswith("power:"):
            return ModulusOfVariation.power(float(s.split(":", 1)[1]))
        if s == "log":
            return ModulusOfVariation.log()
        if s.startswith("table:"):
            vals = [float(x) for x in s.split(":", 1)[1].split(",")]
            return ModulusOfVariation.from_table(vals)
        raise ValueError(f"unknown modulus spec {candidate!r}")
    return ModulusOfVariation.from_table(candidate)


def validate_modulus(candidate, p: float, horizon: int = 4096) -> ModulusValidation:
    """Validate a modulus against the regularity needed for exponent p.

    Raises on positivity, monotonicity or concavity failures and when
    nu(k)/k^(1/p) provably fails to decrease to zero (closed-form families).
    For tables the ratio is checked over the table only.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    nu = _parse_candidate(candidate)  # constructors enforce the hard axioms

    if nu.kind == "power":
        ratio_noninc = nu.alpha <= 1.0 / p
        ratio_vanishes = nu.alpha < 1.0 / p
        if not ratio_vanishes:
            raise ValueError(
                f"nu(k) = k^{nu.alpha:g} with p = {p:g}: nu(k)/k^(1/p) does not decrease to 0"
            )
        horizon_n = horizon
    elif nu.kind == "log":
        ratio_vanishes = True
        horizon_n = horizon
        ks = np.arange(1, horizon_n + 1, dtype=np.float64)
        ratio = np.log1p(ks) / ks ** (1.0 / p)
        ratio_noninc = bool(np.all(np.diff(ratio) <= 1e-15))
    else:
        horizon_n = int(nu.max_index)
        ks = np.arange(1, horizon_n + 1, dtype=np.float64)
        ratio = nu.table(horizon_n) / ks ** (1.0 / p)
        ratio_noninc = bool(np.all(np.diff(ratio) <= 1e-15))
        ratio_vanishes = bool(nu.unbounded) and ratio_noninc

    t = nu.table(min(horizon_n, horizon))
    nondecreasing = bool(np.all(np.diff(t) >= -_CONCAVITY_SLACK))
    concave = bool(np.all(t[2:] + t[:-2] <= 2 * t[1:-1] + _CONCAVITY_SLACK)) if t.size >= 3 else True
    tp = t ** p
    quasi = bool(np.all(np.diff(tp) >= -1e-12)) and bool(
        np.all(np.diff(tp / np.arange(1, t.size + 1)) <= 1e-12)
    )
    return ModulusValidation(
        modulus=nu,
        p=float(p),
        nondecreasing=nondecreasing,
        concave=concave,
        nu_p_quasiconcave=quasi,
        ratio_nonincreasing=ratio_noninc,
        ratio_vanishes=ratio_vanishes,
    )


def epsilon_p(nu: ModulusOfVariation, p: float, k: int) -> float:
    """(nu(k)^p - nu(k-1)^p)^(1/p) for k >= 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    a = nu.value(k) ** p
    b = nu.value(k - 1) ** p
    return float((a - b) ** (1.0 / p))


def epsilon_p_table(nu: ModulusOfVariation, p: float, n: int) -> np.ndarray:
    """Array of epsilon_p(1), ..., epsilon_p(n)."""
    t = np.concatenate(([0.0], nu.table(n))) ** p
    return np.diff(t) ** (1.0 / p)
