"""Dual-homodyne measurement and classical feedforward as row operations.

In the Heisenberg picture a measured quadrature is just a row over the
input quadratures. Displacing a target mode by a gain times the measured
outcome adds that scaled row to the target's X or P row. Averaged over
outcomes this gives the unconditional output moments directly.

Gain normalisation: a receiver with gains ``(g_x, g_p)`` applies::

    X_target += g_x * X_m,    P_target += g_p * P_m

with ``X_m = (X_a + X_b)/sqrt(2)`` and ``P_m = (P_a - P_b)/sqrt(2)``. No
further factor is needed: with ``g1 = sqrt(2/(M(1-R)))`` this makes the
cascade input displaced by ``g1 sqrt(M/2)`` times the measured signal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import Circuit, QuadratureTransform, TOL, omega

SQRT1_2 = 1.0 / np.sqrt(2.0)


class NonCommutingRecordError(ValueError):
    pass


@dataclass(frozen=True)
class MeasurementRecord:
    """Measured operators ``X_m`` and ``P_m`` as rows over input quadratures."""

    x_row: np.ndarray
    p_row: np.ndarray
    source_modes: tuple

    def padded(self, n_modes: int) -> "MeasurementRecord":
        def pad(row):
            out = np.zeros(2 * n_modes)
            out[:row.size] = row
            return out
        return MeasurementRecord(pad(self.x_row), pad(self.p_row), self.source_modes)

    def mean(self, input_mean: np.ndarray) -> tuple[float, float]:
        return float(self.x_row @ input_mean), float(self.p_row @ input_mean)


def dual_homodyne(T: QuadratureTransform, mode_a: int, mode_b: int
                  ) -> tuple[QuadratureTransform, MeasurementRecord]:
    """Mix ``mode_a`` and ``mode_b`` on a 50/50 splitter and measure X and P.

    Returns the transform with both modes consumed, plus the record with
    ``X_m = (X_a + X_b)/sqrt(2)`` and ``P_m = (P_a - P_b)/sqrt(2)``.
    """
    if mode_a == mode_b:
        raise ValueError("dual homodyne needs two distinct modes")
    T.require_retained(mode_a, mode_b)
    Xa, Pa = T.rows(mode_a)
    Xb, Pb = T.rows(mode_b)
    rec = MeasurementRecord(SQRT1_2 * (Xa + Xb), SQRT1_2 * (Pa - Pb), (mode_a, mode_b))
    T2 = T.with_matrix(T.matrix.copy(), T.retained - {mode_a, mode_b}, T.records + (rec,))
    return T2, rec


def measure(circuit: Circuit, mode_a: int, mode_b: int) -> MeasurementRecord:
    circuit.transform, rec = dual_homodyne(circuit.transform, mode_a, mode_b)
    return rec


def feedforward(T: QuadratureTransform, rec: MeasurementRecord, target: int,
                g_x: float, g_p: float) -> QuadratureTransform:
    """Displace ``target`` by ``(g_x x_m, g_p p_m)``."""
    T.require_retained(target)
    W = omega(T.matrix.shape[1] // 2)
    rows = T.rows(target)
    comm = np.abs(np.vstack([rec.x_row, rec.p_row]) @ W @ rows.T).max()
    if comm > 1e3 * TOL:
        raise NonCommutingRecordError(
            f"record does not commute with mode {target} (residual {comm:.3g})")
    S = T.matrix.copy()
    S[2 * target] += g_x * rec.x_row
    S[2 * target + 1] += g_p * rec.p_row
    return T.with_matrix(S)


def apply_feedforward(circuit: Circuit, rec: MeasurementRecord, targets, g_x: float,
                      g_p: float) -> None:
    for t in targets:
        circuit.transform = feedforward(circuit.transform, rec, t, g_x, g_p)


def combine_records(rec1: MeasurementRecord, rec2: MeasurementRecord,
                    g1x: float, g1p: float, g2x: float, g2p: float) -> MeasurementRecord:
    """Classical combination ``x_s = g1x x1 + g2x x2``, ``p_s = g1p p1 + g2p p2``.

    The result is applied with unit gains.
    """
    if set(rec1.source_modes) & set(rec2.source_modes):
        raise ValueError("records share measured modes")
    n = max(rec1.x_row.size, rec2.x_row.size) // 2
    r1, r2 = rec1.padded(n), rec2.padded(n)
    return MeasurementRecord(g1x * r1.x_row + g2x * r2.x_row,
                             g1p * r1.p_row + g2p * r2.p_row,
                             tuple(rec1.source_modes) + tuple(rec2.source_modes))
