"""Monte Carlo cross-check of the telecloning protocols.

Every state, optical element and measurement in these protocols is
Gaussian, so the Wigner function of the full system is a positive
Gaussian probability density over the quadratures. Homodyne outcomes are
samples of that density, and a linear network acts on each sample as
the same linear map. Drawing classical quadrature samples, pushing them
through the network shot by shot, reading off measured values and
displacing the receivers numerically therefore reproduces the exact
output statistics. Nothing here uses the transform machinery of
:mod:`teleclone.gaussian`; only the analytic targets come from there.

Random numbers: numpy's PCG64 bit generator, one stream per chunk of
shots, spawned from ``numpy.random.SeedSequence(seed)``. Chunks are
combined in order, so results are identical for a given seed and chunk
size. EPR samples use the lower-triangular Cholesky factor of the 4x4
block.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

MIN_SAMPLES = 1000
DEFAULT_CHUNK = 1 << 17
Z_THRESHOLD = 5.0


class _Shots:
    """Named per-shot quadrature samples for one chunk."""

    def __init__(self, rng: np.random.Generator, n: int):
        self.rng = rng
        self.n = n
        self.X: dict[str, np.ndarray] = {}
        self.P: dict[str, np.ndarray] = {}

    def coherent(self, name, x, p):
        z = self.rng.standard_normal((2, self.n))
        self.X[name] = x + z[0]
        self.P[name] = p + z[1]

    def vacuum(self, name):
        self.coherent(name, 0.0, 0.0)

    def epr(self, name1, name2, r):
        c, s = math.cosh(2 * r), math.sinh(2 * r)
        V = np.array([[c, 0, -s, 0], [0, c, 0, s], [-s, 0, c, 0], [0, s, 0, c]])
        L = np.linalg.cholesky(V)
        q = L @ self.rng.standard_normal((4, self.n))
        self.X[name1], self.P[name1], self.X[name2], self.P[name2] = q

    def mix(self, a, b, ta, tb):
        """``a <- ta[0] a + ta[1] b``, ``b <- tb[0] a + tb[1] b`` on X and P."""
        for Q in (self.X, self.P):
            qa, qb = Q[a], Q[b]
            Q[a], Q[b] = ta[0] * qa + ta[1] * qb, tb[0] * qa + tb[1] * qb

    def concentrate(self, names, out):
        k = math.sqrt(len(names))
        self.X[out] = sum(self.X[m] for m in names) / k
        self.P[out] = sum(self.P[m] for m in names) / k

    def cascade(self, source, M, prefix):
        outs = []
        running = source
        for j in range(1, M):
            vac = f"{prefix}_v{j}"
            self.vacuum(vac)
            t = 1.0 / (M - j + 1)
            a, b = math.sqrt(t), math.sqrt(1 - t)
            out = f"{prefix}_out{j}"
            self.X[out] = a * self.X[running] + b * self.X[vac]
            self.P[out] = a * self.P[running] + b * self.P[vac]
            nxt = f"{prefix}_c{j + 1}"
            self.X[nxt] = b * self.X[running] - a * self.X[vac]
            self.P[nxt] = b * self.P[running] - a * self.P[vac]
            outs.append(out)
            running = nxt
        outs.append(running)
        return outs

    def homodyne(self, a, b):
        x = (self.X[a] + self.X[b]) / math.sqrt(2)
        p = (self.P[a] - self.P[b]) / math.sqrt(2)
        return x, p

    def displace(self, names, dx, dp):
        for m in names:
            self.X[m] = self.X[m] + dx
            self.P[m] = self.P[m] + dp


def _bs0(shots, bs0_in, a1, M, N):
    # transmitted field stays on bs0_in, reflected on a1
    s = (M - N) / (M + N)
    t = math.sqrt(1 - s * s)
    shots.mix(bs0_in, a1, (t, -s), (s, t))
    return s, math.sqrt(2.0 / (M * (1 - s * s)))


def _chunk_one_epr(spec, shots: _Shots, swap: bool):
    M, N = spec.M, spec.N
    for l in range(N):
        shots.coherent(f"c{l}", spec.x_in, spec.p_in)
        shots.coherent(f"k{l}", spec.x_in, -spec.p_in)
    shots.epr("a1", "a2", spec.r)
    shots.concentrate([f"c{l}" for l in range(N)], "cin")
    shots.concentrate([f"k{l}" for l in range(N)], "conj")
    hom, into_bs0 = ("conj", "cin") if swap else ("cin", "conj")

    remote = shots.cascade("a2", M, "a")
    s, G = _bs0(shots, into_bs0, "a1", M, N)
    local = shots.cascade(into_bs0, M, "b")
    xm, pm = shots.homodyne("a1", hom)
    shots.displace(remote, G * xm, -G * pm)
    shots.displace(local, s * G * xm, s * G * pm)
    clones, anti = (local, remote) if swap else (remote, local)
    return clones, anti


def _chunk_B(spec, shots: _Shots):
    M = spec.M
    shots.coherent("cin", spec.x_in, spec.p_in)
    shots.coherent("conj", spec.x_in, -spec.p_in)
    shots.epr("a1", "a2", spec.r)
    shots.epr("b1", "b2", spec.squeezing2)
    remote_a = shots.cascade("a2", M, "a")
    s, G = _bs0(shots, "b1", "a1", M, 1)
    remote_b = shots.cascade("b1", M, "b")
    x1, p1 = shots.homodyne("a1", "cin")
    x2, p2 = shots.homodyne("b2", "conj")
    shots.displace(remote_a, G * x1 + s * G * x2, -G * p1 + s * G * p2)
    shots.displace(remote_b, s * G * x1 + G * x2, s * G * p1 - G * p2)
    return remote_a, remote_b


def _simulate_chunk(spec, rng, n) -> tuple[np.ndarray, list[str]]:
    shots = _Shots(rng, n)
    if spec.variant == "B":
        clones, anti = _chunk_B(spec, shots)
    elif spec.variant in ("A", "A-generalized"):
        clones, anti = _chunk_one_epr(spec, shots, swap=False)
    elif spec.variant == "A-swapped":
        clones, anti = _chunk_one_epr(spec, shots, swap=True)
    else:
        raise ValueError(f"variant {spec.variant!r} has no network to sample")
    cols, labels = [], []
    for kind, names in (("clone", clones), ("anticlone", anti)):
        for j, m in enumerate(names):
            cols += [shots.X[m], shots.P[m]]
            labels += [f"{kind}{j}.x", f"{kind}{j}.p"]
    return np.column_stack(cols), labels


class _Moments:
    """Running mean and scatter matrix, merged chunk by chunk (Chan et al.)."""

    def __init__(self):
        self.n = 0
        self.mean = None
        self.scatter = None

    def add(self, data: np.ndarray):
        nb = data.shape[0]
        mb = data.mean(axis=0)
        d = data - mb
        Sb = d.T @ d
        if self.n == 0:
            self.n, self.mean, self.scatter = nb, mb, Sb
            return
        na = self.n
        delta = mb - self.mean
        n = na + nb
        self.mean = self.mean + delta * (nb / n)
        self.scatter = self.scatter + Sb + np.outer(delta, delta) * (na * nb / n)
        self.n = n

    @property
    def cov(self) -> np.ndarray:
        return self.scatter / (self.n - 1)


def _sample(simulate, n_samples: int, seed: int, chunk_size: int):
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n_samples}")
    sizes = [chunk_size] * (n_samples // chunk_size)
    if n_samples % chunk_size:
        sizes.append(n_samples % chunk_size)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    acc = _Moments()
    labels = None
    for ss, n in zip(children, sizes):
        data, labels = simulate(np.random.Generator(np.random.PCG64(ss)), n)
        acc.add(data)
    return acc, labels


@dataclass
class SampleRun:
    """Empirical output moments next to the analytic ones.

    ``labels[i]`` names quadrature ``i`` (``"clone0.x"``, ``"anticlone2.p"``, ...).
    """

    spec: object
    n_samples: int
    seed: int
    labels: list[str]
    mean: np.ndarray
    cov: np.ndarray
    target_mean: np.ndarray
    target_cov: np.ndarray

    @property
    def var(self) -> np.ndarray:
        return np.diag(self.cov).copy()

    @property
    def se_mean(self) -> np.ndarray:
        return np.sqrt(self.var / self.n_samples)

    @property
    def se_var(self) -> np.ndarray:
        # samples are exactly Gaussian: Var(s^2) = 2 sigma^4 / (n - 1)
        return self.var * math.sqrt(2.0 / (self.n_samples - 1))


def _analytic_targets(spec):
    from .protocols import build

    _, report = build(spec)
    means = []
    cov_blocks = []
    for st in report.clone_states + report.anticlone_states:
        means += [st.mean_x, st.mean_p]
        cov_blocks.append(st.cov)
    return np.array(means), cov_blocks


def run_oracle(spec, n_samples: int = 10 ** 6, seed: int = 0,
               chunk_size: int = DEFAULT_CHUNK) -> SampleRun:
    """Sample the protocol shot by shot and collect the output moments."""
    if not (math.isfinite(spec.r) and math.isfinite(spec.squeezing2)):
        raise ValueError("the oracle needs finite squeezing")
    acc, labels = _sample(lambda rng, n: _simulate_chunk(spec, rng, n),
                          n_samples, seed, chunk_size)
    target_mean, blocks = _analytic_targets(spec)
    target_cov = np.zeros((len(labels), len(labels)))
    for k, b in enumerate(blocks):
        target_cov[2 * k:2 * k + 2, 2 * k:2 * k + 2] = b
    return SampleRun(spec, n_samples, seed, labels, acc.mean, acc.cov,
                     target_mean, target_cov)


def sample_registry(reg, T, modes, n_samples: int = 10 ** 6, seed: int = 0,
                    chunk_size: int = DEFAULT_CHUNK) -> tuple[np.ndarray, np.ndarray]:
    """Empirical mean and covariance of retained output modes of ``T``.

    Inputs are drawn block by block (Cholesky factor of each noise block)
    and mapped through ``T.matrix``; used to check moments that have no
    dedicated per-shot pipeline, such as the four-mode resource state.
    """
    rows = np.array([q for m in modes for q in (2 * m, 2 * m + 1)])
    S = T.matrix[rows]
    mu = reg.mean
    blocks = reg.blocks
    dim = 2 * reg.n_modes

    def simulate(rng, n):
        q = np.empty((dim, n))
        for start, block in blocks:
            k = block.shape[0]
            L = np.linalg.cholesky(block)
            q[2 * start:2 * start + k] = L @ rng.standard_normal((k, n))
        q += mu[:, None]
        return (S @ q).T, None

    acc, _ = _sample(simulate, n_samples, seed, chunk_size)
    return acc.mean, acc.cov


def sample_four_mode_resource(spec, n_samples: int = 10 ** 6, seed: int = 0,
                              chunk_size: int = DEFAULT_CHUNK):
    """Per-shot sampling of ``(a_EPR2, c1t, c1r, b_EPR2)`` for the two-EPR protocol."""

    def simulate(rng, n):
        shots = _Shots(rng, n)
        shots.coherent("cin", spec.x_in, spec.p_in)
        shots.coherent("conj", spec.x_in, -spec.p_in)
        shots.epr("a1", "a2", spec.r)
        shots.epr("b1", "b2", spec.squeezing2)
        _bs0(shots, "b1", "a1", spec.M, 1)
        cols = []
        for m in ("a2", "b1", "a1", "b2"):
            cols += [shots.X[m], shots.P[m]]
        return np.column_stack(cols), None

    acc, _ = _sample(simulate, n_samples, seed, chunk_size)
    return acc.mean, acc.cov


@dataclass
class Discrepancy:
    labels: list[str]
    z_mean: np.ndarray
    z_var: np.ndarray
    threshold: float = Z_THRESHOLD

    @property
    def max_abs_z(self) -> float:
        return float(max(np.abs(self.z_mean).max(), np.abs(self.z_var).max()))

    @property
    def passed(self) -> bool:
        return self.max_abs_z <= self.threshold

    def flagged(self) -> list[str]:
        out = [f"mean {l}" for l, z in zip(self.labels, self.z_mean) if abs(z) > self.threshold]
        out += [f"var {l}" for l, z in zip(self.labels, self.z_var) if abs(z) > self.threshold]
        return out


def compare(run: SampleRun, threshold: float = Z_THRESHOLD) -> Discrepancy:
    """z-scores of every empirical mean and variance against the analytic value."""
    z_mean = (run.mean - run.target_mean) / run.se_mean
    z_var = (run.var - np.diag(run.target_cov)) / run.se_var
    return Discrepancy(list(run.labels), z_mean, z_var, threshold)
