"""Multimode Gaussian inputs and linear quadrature transforms.

Quadrature convention used throughout the package::

    a = (X + iP) / 2,    [X, P] = 2i,    vacuum Var(X) = Var(P) = 1

so a coherent state has covariance ``I`` and the two-mode vacuum noise
limit of ``Var(X1 + X2)`` is 2. Literature using ``hbar = 1`` (vacuum
variance 1/2) differs by a factor of two in every covariance.

Quadrature vectors are interleaved per mode: ``(X0, P0, X1, P1, ...)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

TOL = 1e-12

_OMEGA_1 = np.array([[0.0, 2.0], [-2.0, 0.0]])


class ConsumedModeError(ValueError):
    """Raised when an operation touches a mode already consumed by measurement."""


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form for ``n_modes`` modes with ``[X, P] = 2i``."""
    return np.kron(np.eye(n_modes), _OMEGA_1)


def quad_index(mode: int) -> tuple[int, int]:
    return 2 * mode, 2 * mode + 1


def _mode_slice(modes) -> np.ndarray:
    return np.array([q for m in modes for q in quad_index(m)], dtype=int)


@dataclass(frozen=True)
class ModeDescriptor:
    kind: str  # "vacuum" | "coherent" | "epr"
    label: str = ""


@dataclass(frozen=True)
class ModeState:
    """First and second moments of a single output mode."""

    mean_x: float
    mean_p: float
    cov: np.ndarray

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.mean_x, self.mean_p])

    @property
    def var_x(self) -> float:
        return float(self.cov[0, 0])

    @property
    def var_p(self) -> float:
        return float(self.cov[1, 1])

    def satisfies_uncertainty(self, tol: float = TOL) -> bool:
        return bool(np.linalg.det(self.cov) >= 1.0 - tol and self.cov[0, 0] > 0)


class InputRegistry:
    """Ordered collection of input modes with their means and covariance.

    The covariance is assembled from independent noise blocks: a 2x2
    identity for every vacuum or coherent mode and a 4x4 block for each
    EPR (two-mode squeezed) pair.
    """

    def __init__(self):
        self.modes: list[ModeDescriptor] = []
        self._mean: list[float] = []
        # (first mode index, block matrix)
        self._blocks: list[tuple[int, np.ndarray]] = []
        self._factors: dict[int, np.ndarray] = {}

    def __len__(self):
        return len(self.modes)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def mean(self) -> np.ndarray:
        return np.array(self._mean, dtype=float)

    @property
    def cov(self) -> np.ndarray:
        n = 2 * self.n_modes
        V = np.zeros((n, n))
        for start, block in self._blocks:
            k = block.shape[0]
            V[2 * start:2 * start + k, 2 * start:2 * start + k] = block
        return V

    @property
    def cov_factor(self) -> np.ndarray:
        """Square root ``L`` with ``cov = L @ L.T``.

        EPR blocks use their physical factorisation (two single-mode
        squeezers on a balanced splitter), so moments propagated as
        ``(S L)(S L)^T`` keep full precision even when ``cosh(2r)`` is huge.
        """
        n = 2 * self.n_modes
        L = np.zeros((n, n))
        for start, block in self._blocks:
            k = block.shape[0]
            sl = slice(2 * start, 2 * start + k)
            L[sl, sl] = self._factors[start] if start in self._factors else np.eye(k)
        return L

    @property
    def blocks(self) -> list[tuple[int, np.ndarray]]:
        return [(s, b.copy()) for s, b in self._blocks]

    def _append(self, desc: ModeDescriptor, x: float, p: float) -> int:
        self.modes.append(desc)
        self._mean.extend((x, p))
        return self.n_modes - 1

    def add_vacuum(self, label: str = "") -> int:
        idx = self._append(ModeDescriptor("vacuum", label), 0.0, 0.0)
        self._blocks.append((idx, np.eye(2)))
        return idx

    def add_coherent(self, x: float, p: float, conjugate: bool = False,
                     label: str = "") -> int:
        """Coherent state with quadrature means ``(x, p)``.

        With ``conjugate=True`` the phase-conjugate state is added instead,
        i.e. mean ``(x, -p)``; the covariance is unchanged.
        """
        if not (math.isfinite(x) and math.isfinite(p)):
            raise ValueError(f"coherent amplitude must be finite, got ({x}, {p})")
        idx = self._append(ModeDescriptor("coherent", label),
                           float(x), -float(p) if conjugate else float(p))
        self._blocks.append((idx, np.eye(2)))
        return idx

    def add_epr_pair(self, r: float, labels: tuple[str, str] = ("", "")) -> tuple[int, int]:
        """Two-mode squeezed vacuum with ``Var(X1+X2) = Var(P1-P2) = 2 exp(-2r)``."""
        if not r >= 0 or not math.isfinite(r):
            raise ValueError(f"squeezing must be finite and >= 0, got {r}")
        i = self._append(ModeDescriptor("epr", labels[0]), 0.0, 0.0)
        j = self._append(ModeDescriptor("epr", labels[1]), 0.0, 0.0)
        self._blocks.append((i, epr_block(r)))
        self._factors[i] = epr_factor(r)
        return i, j

    def index(self, label: str) -> int:
        for i, m in enumerate(self.modes):
            if m.label == label:
                return i
        raise KeyError(label)


def epr_block(r: float) -> np.ndarray:
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    Z = np.diag([1.0, -1.0])
    return np.block([[c * np.eye(2), -s * Z], [-s * Z, c * np.eye(2)]])


def epr_factor(r: float) -> np.ndarray:
    """``L`` with ``L @ L.T == epr_block(r)``; columns are independent unit noises."""
    u, v = math.exp(r) / math.sqrt(2), math.exp(-r) / math.sqrt(2)
    return np.array([
        [u, v, 0, 0],
        [0, 0, u, v],
        [-u, v, 0, 0],
        [0, 0, u, -v],
    ])


@dataclass(frozen=True)
class QuadratureTransform:
    """Linear map from input quadratures to output quadratures.

    The matrix is square: output mode ``k`` occupies rows ``2k, 2k+1``.
    Modes consumed by a measurement keep their rows (for audit) but are
    removed from ``retained``; the measured operators themselves live in
    ``records``.
    """

    matrix: np.ndarray
    retained: frozenset = field(default_factory=frozenset)
    records: tuple = ()

    @classmethod
    def identity(cls, n_modes: int) -> "QuadratureTransform":
        return cls(np.eye(2 * n_modes), frozenset(range(n_modes)))

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def consumed(self) -> frozenset:
        return frozenset(range(self.n_modes)) - self.retained

    def rows(self, mode: int) -> np.ndarray:
        return self.matrix[2 * mode:2 * mode + 2]

    def require_retained(self, *modes: int) -> None:
        for m in modes:
            if not 0 <= m < self.n_modes:
                raise IndexError(f"mode {m} out of range")
            if m not in self.retained:
                raise ConsumedModeError(f"mode {m} was consumed by a measurement")

    def padded(self, n_modes: int) -> "QuadratureTransform":
        """Extend to ``n_modes`` modes; new modes pass through unchanged."""
        n_old = self.n_modes
        if n_modes < n_old:
            raise ValueError("cannot shrink a transform")
        S = np.eye(2 * n_modes)
        S[:2 * n_old, :2 * n_old] = self.matrix
        records = tuple(rec.padded(n_modes) for rec in self.records)
        return QuadratureTransform(S, self.retained | frozenset(range(n_old, n_modes)),
                                   records)

    def compose(self, local: np.ndarray) -> "QuadratureTransform":
        """Apply ``local`` (acting on output quadratures) after this transform."""
        return QuadratureTransform(local @ self.matrix, self.retained, self.records)

    def with_matrix(self, matrix: np.ndarray, retained=None, records=None) -> "QuadratureTransform":
        return QuadratureTransform(
            matrix,
            self.retained if retained is None else frozenset(retained),
            self.records if records is None else tuple(records),
        )


class Circuit:
    """Builder pairing an :class:`InputRegistry` with the transform acting on it.

    Adding an input mode pads the transform with an identity block so the
    two always agree on dimension.
    """

    def __init__(self):
        self.registry = InputRegistry()
        self.transform = QuadratureTransform.identity(0)

    def _grow(self):
        self.transform = self.transform.padded(self.registry.n_modes)

    def add_vacuum(self, label: str = "") -> int:
        i = self.registry.add_vacuum(label)
        self._grow()
        return i

    def add_coherent(self, x: float, p: float, conjugate: bool = False, label: str = "") -> int:
        i = self.registry.add_coherent(x, p, conjugate, label)
        self._grow()
        return i

    def add_epr_pair(self, r: float, labels=("", "")) -> tuple[int, int]:
        ij = self.registry.add_epr_pair(r, labels)
        self._grow()
        return ij

    def output_state(self, mode: int) -> ModeState:
        return output_state(self.registry, self.transform, mode)


def add_vacuum(reg: InputRegistry, label: str = "") -> int:
    return reg.add_vacuum(label)


def add_coherent(reg: InputRegistry, x: float, p: float, conjugate: bool = False) -> int:
    return reg.add_coherent(x, p, conjugate)


def add_epr_pair(reg: InputRegistry, r: float) -> tuple[int, int]:
    return reg.add_epr_pair(r)


def _check_dims(reg: InputRegistry, T: QuadratureTransform):
    if T.matrix.shape[1] != 2 * reg.n_modes:
        raise ValueError(
            f"transform acts on {T.matrix.shape[1] // 2} modes, registry has {reg.n_modes}")


def output_state(reg: InputRegistry, T: QuadratureTransform, mode: int) -> ModeState:
    """Exact mean and covariance of one retained output mode."""
    _check_dims(reg, T)
    T.require_retained(mode)
    S = T.rows(mode)
    mean = S @ reg.mean
    K = S @ reg.cov_factor
    cov = K @ K.T
    return ModeState(float(mean[0]), float(mean[1]), cov)


def joint_covariance(reg: InputRegistry, T: QuadratureTransform, modes) -> np.ndarray:
    """Covariance of several retained output modes, in the order given."""
    _check_dims(reg, T)
    modes = list(modes)
    T.require_retained(*modes)
    K = T.matrix[_mode_slice(modes)] @ reg.cov_factor
    return K @ K.T


def joint_mean(reg: InputRegistry, T: QuadratureTransform, modes) -> np.ndarray:
    _check_dims(reg, T)
    modes = list(modes)
    T.require_retained(*modes)
    return T.matrix[_mode_slice(modes)] @ reg.mean


def symplectic_residual(T: QuadratureTransform) -> float:
    """Largest deviation from canonical commutators among retained rows.

    Also covers measurement rows, which must commute with every retained
    row and with each other.
    """
    n_in = T.matrix.shape[1] // 2
    if n_in == 0:
        return 0.0
    W = omega(n_in)
    ret = sorted(T.retained)
    S_ret = T.matrix[_mode_slice(ret)]
    resid = np.abs(S_ret @ W @ S_ret.T - omega(len(ret))).max() if ret else 0.0
    if T.records:
        meas = np.vstack([row for rec in T.records for row in (rec.x_row, rec.p_row)])
        if ret:
            resid = max(resid, np.abs(meas @ W @ S_ret.T).max())
        resid = max(resid, np.abs(meas @ W @ meas.T).max())
    return float(resid)


def physical_cov_residual(V: np.ndarray) -> float:
    """Most negative eigenvalue of ``V + i Omega / 2`` (0 when physical).

    With ``[X, P] = 2i`` the Robertson bound reads ``V + i Omega/2 >= 0``;
    the vacuum (``V = I``) sits exactly on it.
    """
    n = V.shape[0] // 2
    ev = np.linalg.eigvalsh(V + 0.5j * omega(n))
    return float(max(0.0, -ev.min()))
