"""Fidelities against coherent targets and the closed-form telecloning results.

All formulas assume vacuum quadrature variance 1 (see :mod:`teleclone.gaussian`).
``r = math.inf`` and ``M = math.inf`` are accepted by the closed forms and
evaluate the exact limits.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .gaussian import ModeState

VARIANTS = ("A", "A-swapped", "A-generalized", "B", "baseline")


@dataclass(frozen=True)
class FidelityResult:
    value: float
    gain_deficit: tuple[float, float]
    unity_gain: bool


def fidelity_vs_coherent(state: ModeState, target, atol: float = 1e-12) -> FidelityResult:
    """Overlap of a single-mode Gaussian state with the coherent state at ``target``.

    ``F = 2 / sqrt(det(V + I)) * exp(-d^T (V + I)^{-1} d / 2)`` with ``d`` the
    mean mismatch. For diagonal ``V`` this is the familiar
    ``2 / sqrt((1+Vx)(1+Vp)) * exp(...)`` expression.
    """
    V = np.asarray(state.cov, dtype=float)
    A = V + np.eye(2)
    det = np.linalg.det(A)
    if not det > 0:
        raise ValueError(f"V + I is singular (det = {det})")
    d = state.mean - np.asarray(target, dtype=float)
    value = 2.0 / math.sqrt(det) * math.exp(-0.5 * float(d @ np.linalg.solve(A, d)))
    unity = bool(np.all(np.abs(d) <= atol))
    return FidelityResult(min(value, 1.0), (float(d[0]), float(d[1])), unity)


def fidelity_unity_gain(var_x: float, var_p: float) -> float:
    if var_x <= 0 or var_p <= 0:
        raise ValueError("variances must be positive")
    return 2.0 / math.sqrt((1.0 + var_x) * (1.0 + var_p))


def _e(r: float) -> float:
    return math.exp(-2.0 * r)


def reflectivity(M: int, N: int = 1) -> float:
    """BS0 reflectivity ``(M-N)^2 / (M+N)^2`` that restores unity gain."""
    return (M - N) ** 2 / (M + N) ** 2


# --- closed-form variances -------------------------------------------------

def variance_A(M, N=1, r=math.inf, which="clone") -> float:
    """Clone/anticlone variance of the one-EPR protocol (nonlocal clones)."""
    if math.isinf(M):
        base = 1.0 + 1.0 / (2 * N)
        return base
    base = 1.0 + (M - N) ** 2 / (2.0 * M * M * N)
    if which == "clone":
        return base + 2.0 * _e(r) / M
    if which == "anticlone":
        return base
    raise ValueError(f"which must be 'clone' or 'anticlone', got {which!r}")


def variance_B(M, r1=math.inf, r2=math.inf, which="clone") -> float:
    """Clone/anticlone variance with both outputs nonlocal (two EPR pairs)."""
    if math.isinf(M):
        return 1.5 + (0.5 * _e(r2))
    if which == "clone":
        return 1.0 + (M - 1) ** 2 / (2.0 * M * M) * (1.0 + _e(r2)) + 2.0 * _e(r1) / M
    if which == "anticlone":
        return 1.0 + (M - 1) ** 2 / (2.0 * M * M) + (M + 1) ** 2 / (2.0 * M * M) * _e(r2)
    raise ValueError(f"which must be 'clone' or 'anticlone', got {which!r}")


# --- closed-form fidelities ------------------------------------------------

def fidelity_A(M, N=1, r=math.inf, which="clone") -> float:
    if math.isinf(M):
        return 4.0 * N / (4.0 * N + 1.0)
    num = 4.0 * M * M * N
    den = num + (M - N) ** 2
    if which == "clone":
        den += 4.0 * M * N * _e(r)
    elif which != "anticlone":
        raise ValueError(f"which must be 'clone' or 'anticlone', got {which!r}")
    return num / den


def fidelity_B(M, r1=math.inf, r2=math.inf, which="clone") -> float:
    if math.isinf(M):
        return 2.0 / (1.0 + variance_B(M, r1, r2, which))
    num = 4.0 * M * M
    if which == "clone":
        return num / (num + (M - 1) ** 2 * (1.0 + _e(r2)) + 4.0 * M * _e(r1))
    if which == "anticlone":
        return num / (num + (M - 1) ** 2 + (M + 1) ** 2 * _e(r2))
    raise ValueError(f"which must be 'clone' or 'anticlone', got {which!r}")


def baseline_standard_fidelity(M, N=1, r=math.inf) -> tuple[float, float]:
    """Standard ``2N -> M + (M-2N)`` telecloning from identical copies.

    For ``N = 1``: ``F_clone = 2M / (3M - 2 + 2 e^{-2r})`` and
    ``F_anti = 2/3``. For general ``N`` the clone formula is extended as
    ``2NM / (2NM + M - 2N + 2N e^{-2r})`` and the anticlone value is the
    measure-and-prepare bound ``2N/(2N+1)``; both give ``2N/(2N+1)`` as
    ``M -> inf``. Returns ``nan`` for the clone when ``M < 2N`` (fewer
    clones than identical inputs, outside the protocol's range).
    """
    anti = 2.0 * N / (2.0 * N + 1.0)
    if math.isinf(M):
        return anti, anti
    if M < 2 * N:
        return math.nan, anti
    if N == 1:
        clone = 2.0 * M / (3.0 * M - 2.0 + 2.0 * _e(r))
    else:
        clone = 2.0 * N * M / (2.0 * N * M + M - 2.0 * N + 2.0 * N * _e(r))
    return clone, anti


def closed_form(variant: str, M, N: int = 1, r: float = math.inf,
                r2: float | None = None, which: str = "clone") -> float:
    """Closed-form fidelity for any protocol variant.

    ``A-swapped`` exchanges the roles: its clones are the local ones and
    its anticlones are teleported, so ``which`` is mapped accordingly.
    """
    if which not in ("clone", "anticlone"):
        raise ValueError(f"which must be 'clone' or 'anticlone', got {which!r}")
    if variant in ("A", "A-generalized"):
        return fidelity_A(M, N, r, which)
    if variant == "A-swapped":
        return fidelity_A(M, N, r, "anticlone" if which == "clone" else "clone")
    if variant == "B":
        return fidelity_B(M, r, r if r2 is None else r2, which)
    if variant == "baseline":
        clone, anti = baseline_standard_fidelity(M, N, r)
        return clone if which == "clone" else anti
    raise ValueError(f"unknown variant {variant!r}")


def closed_form_variance(variant: str, M, N: int = 1, r: float = math.inf,
                         r2: float | None = None, which: str = "clone") -> float:
    if variant in ("A", "A-generalized"):
        return variance_A(M, N, r, which)
    if variant == "A-swapped":
        return variance_A(M, N, r, "anticlone" if which == "clone" else "clone")
    if variant == "B":
        return variance_B(M, r, r if r2 is None else r2, which)
    raise ValueError(f"no output variance for variant {variant!r}")
