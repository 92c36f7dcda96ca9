import dataclasses
import math

import numpy as np
import pytest

from teleclone.gaussian import Circuit
from teleclone.optics import splitter_cascade
from teleclone.oracle import MIN_SAMPLES, compare, run_oracle, sample_registry
from teleclone.protocols import ProtocolSpec


def test_vacuum_network_samples_identity():
    c = Circuit()
    src = c.add_vacuum()
    outs = splitter_cascade(c, src, 3)
    mean, cov = sample_registry(c.registry, c.transform, outs, n_samples=200_000, seed=1)
    n = 200_000
    assert np.all(np.abs(mean) < 5 / math.sqrt(n))
    # unit-variance Gaussian entries: se of a covariance entry <= sqrt(2/n)
    assert np.all(np.abs(cov - np.eye(6)) < 5 * math.sqrt(2 / n))


@pytest.mark.parametrize("spec", [
    ProtocolSpec("A", 2, r=1.0, x_in=2, p_in=4),
    ProtocolSpec("B", 3, r=0.5, x_in=-3, p_in=1.5),
    ProtocolSpec("A-swapped", 2, r=0.0, x_in=1, p_in=1),
    ProtocolSpec("A-generalized", 3, N=2, r=1.0, x_in=0.5, p_in=-1),
])
def test_oracle_agrees_with_analytic_moments(spec):
    run = run_oracle(spec, n_samples=200_000, seed=3)
    d = compare(run)
    assert d.passed, d.flagged()
    assert len(run.labels) == 4 * spec.M


def test_oracle_flags_an_injected_shift():
    run = run_oracle(ProtocolSpec("A", 2, r=1.0), n_samples=50_000, seed=0)
    shifted = dataclasses.replace(run, target_mean=run.target_mean + 10 * run.se_mean)
    d = compare(shifted)
    assert not d.passed
    assert len(d.flagged()) == len(run.labels)


def test_exact_moments_give_zero_z():
    run = run_oracle(ProtocolSpec("A", 2, r=1.0), n_samples=5_000, seed=0)
    exact = dataclasses.replace(run, mean=run.target_mean.copy(), cov=run.target_cov.copy())
    d = compare(exact)
    assert d.max_abs_z == 0.0


def test_replay_is_bit_identical():
    spec = ProtocolSpec("B", 2, r=0.5)
    a = run_oracle(spec, n_samples=30_000, seed=11, chunk_size=4096)
    b = run_oracle(spec, n_samples=30_000, seed=11, chunk_size=4096)
    assert a.mean.tobytes() == b.mean.tobytes()
    assert a.cov.tobytes() == b.cov.tobytes()
    c = run_oracle(spec, n_samples=30_000, seed=12, chunk_size=4096)
    assert a.mean.tobytes() != c.mean.tobytes()


def test_standard_errors_shrink_like_inverse_root_n():
    spec = ProtocolSpec("A", 2, r=1.0)
    small = run_oracle(spec, n_samples=10_000, seed=0)
    large = run_oracle(spec, n_samples=160_000, seed=0)
    ratio = small.se_mean / large.se_mean
    assert np.all((ratio > 2) & (ratio < 8))
    ratio_v = small.se_var / large.se_var
    assert np.all((ratio_v > 2) & (ratio_v < 8))


def test_too_few_samples_rejected():
    with pytest.raises(ValueError):
        run_oracle(ProtocolSpec("A", 2, r=1.0), n_samples=MIN_SAMPLES - 1)


def test_infinite_squeezing_rejected():
    with pytest.raises(ValueError):
        run_oracle(ProtocolSpec("A", 2, r=math.inf))
