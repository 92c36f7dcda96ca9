"""Beam splitters, the 1 -> M splitter cascade and N-copy concentration.

A lossless beam splitter applies the same real orthogonal 2x2 matrix to
the X rows and to the P rows of the two modes it mixes, so every network
built here is orthogonal and therefore symplectic.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .gaussian import Circuit, QuadratureTransform

CONVENTIONS = ("generic", "paper-cascade", "paper-BS0")


@dataclass(frozen=True)
class SplitterSpec:
    """Two-mode beam splitter.

    ``generic`` / ``paper-cascade`` (identical)::

        out_a = sqrt(t) in_a + sqrt(1-t) in_b
        out_b = sqrt(1-t) in_a - sqrt(t) in_b

    ``paper-BS0`` (transmitted field stays on ``mode_a``)::

        out_a = sqrt(t) in_a - rho in_b        (transmitted)
        out_b = rho in_a + sqrt(t) in_b        (reflected)

    where ``rho = reflection_sign * sqrt(1-t)``. A negative sign is a BS0
    with a pi phase on its reflected amplitude; it is still orthogonal.
    """

    mode_a: int
    mode_b: int
    t: float
    convention: str = "generic"
    reflection_sign: int = 1

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"transmissivity must lie in [0, 1], got {self.t}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")
        if self.mode_a == self.mode_b:
            raise ValueError("beam splitter needs two distinct modes")
        if self.reflection_sign not in (1, -1):
            raise ValueError("reflection_sign must be +1 or -1")

    def matrix2(self) -> np.ndarray:
        """Mode-space 2x2 matrix acting on ``(in_a, in_b)``."""
        st = math.sqrt(self.t)
        sr = math.sqrt(1.0 - self.t)
        if self.convention == "paper-BS0":
            rho = self.reflection_sign * sr
            return np.array([[st, -rho], [rho, st]])
        return np.array([[st, sr], [sr, -st]])


def splitter_matrix(spec: SplitterSpec, n_modes: int) -> np.ndarray:
    """Full ``2n x 2n`` quadrature matrix for one splitter."""
    B = spec.matrix2()
    S = np.eye(2 * n_modes)
    for q in range(2):
        ia, ib = 2 * spec.mode_a + q, 2 * spec.mode_b + q
        S[ia, ia], S[ia, ib] = B[0]
        S[ib, ia], S[ib, ib] = B[1]
    return S


def beam_splitter(T: QuadratureTransform, spec: SplitterSpec) -> QuadratureTransform:
    """Compose one splitter after ``T``.

    Equivalent to ``splitter_matrix(spec, n) @ T.matrix`` but only the four
    affected rows are recomputed.
    """
    T.require_retained(spec.mode_a, spec.mode_b)
    B = spec.matrix2()
    S = T.matrix.copy()
    for q in range(2):
        ia, ib = 2 * spec.mode_a + q, 2 * spec.mode_b + q
        ra, rb = T.matrix[ia], T.matrix[ib]
        S[ia] = B[0, 0] * ra + B[0, 1] * rb
        S[ib] = B[1, 0] * ra + B[1, 1] * rb
    return T.with_matrix(S)


def apply_splitter(circuit: Circuit, spec: SplitterSpec) -> None:
    circuit.transform = beam_splitter(circuit.transform, spec)


def splitter_cascade(circuit: Circuit, source: int, M: int, label: str = "out",
                     n_outputs: int | None = None) -> list[int]:
    """Distribute ``source`` over ``M`` modes with ``M - 1`` splitters.

    Splitter ``j`` (1-based) has transmissivity ``1/(M-j+1)`` and mixes the
    running mode with a fresh vacuum; its transmitted port is output ``j``
    and the other port continues to splitter ``j+1``. Every output carries
    the source with amplitude ``1/sqrt(M)``.

    ``n_outputs = k < M`` builds only the first ``k`` splitters and returns
    outputs ``1..k``. Later splitters never act on those modes, so they are
    exactly the operators of the full cascade; the unsplit remainder stays
    on a retained mode that is not returned.
    """
    if M < 1:
        raise ValueError(f"cascade needs M >= 1, got {M}")
    k = M if n_outputs is None else min(int(n_outputs), M)
    if k < 1:
        raise ValueError(f"n_outputs must be >= 1, got {n_outputs}")
    circuit.transform.require_retained(source)
    outputs = []
    running = source
    for j in range(1, min(k + 1, M)):
        vac = circuit.add_vacuum(f"{label}_vac{j}")
        apply_splitter(circuit, SplitterSpec(running, vac, 1.0 / (M - j + 1), "paper-cascade"))
        # transmitted port stays on `running`, continuing port sits on `vac`
        outputs.append(running)
        running = vac
    if k == M:
        outputs.append(running)
    return outputs


def concentrate(circuit: Circuit, sources: list[int]) -> int:
    """Combine ``N`` modes into ``sum(sources) / sqrt(N)`` on ``sources[0]``.

    The ``N - 1`` orthogonal combinations stay on the other source modes,
    retained but unused.
    """
    sources = list(sources)
    if not sources:
        raise ValueError("concentrate needs at least one source mode")
    circuit.transform.require_retained(*sources)
    head = sources[0]
    for k, other in enumerate(sources[1:], start=1):
        # head holds the uniform sum of k modes; weight it k:1 against the next
        apply_splitter(circuit, SplitterSpec(head, other, k / (k + 1), "generic"))
    return head
