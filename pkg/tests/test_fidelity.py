import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teleclone.fidelity import (
    baseline_standard_fidelity,
    closed_form,
    closed_form_variance,
    fidelity_unity_gain,
    fidelity_vs_coherent,
    reflectivity,
)
from teleclone.gaussian import ModeState


def _state(x, p, cov):
    return ModeState(x, p, np.asarray(cov, dtype=float))


def test_coherent_state_matches_itself():
    r = fidelity_vs_coherent(_state(2.0, 4.0, np.eye(2)), (2.0, 4.0))
    assert r.value == pytest.approx(1.0, abs=1e-15)
    assert r.unity_gain


def test_thermalised_state():
    # 2 / (1 + 2.125) = 0.64
    r = fidelity_vs_coherent(_state(0, 0, 2.125 * np.eye(2)), (0, 0))
    assert r.value == pytest.approx(0.64, abs=1e-15)


def test_displaced_coherent_overlap():
    # |<0|alpha>|^2 = exp(-|alpha|^2) with alpha = (X + iP)/2 = 1/2
    r = fidelity_vs_coherent(_state(1.0, 0.0, np.eye(2)), (0.0, 0.0))
    assert r.value == pytest.approx(math.exp(-0.25), rel=1e-14)
    assert not r.unity_gain
    assert r.gain_deficit == (1.0, 0.0)


def test_singular_state_rejected():
    with pytest.raises(ValueError):
        fidelity_vs_coherent(_state(0, 0, -np.eye(2)), (0, 0))


@pytest.mark.parametrize("vx, vp, expected", [
    (1.0, 1.0, 1.0),
    (1.125, 1.125, 16 / 17),
    (3.0, 1.0, 2 / math.sqrt(8)),
])
def test_unity_gain_form(vx, vp, expected):
    assert fidelity_unity_gain(vx, vp) == pytest.approx(expected, rel=1e-15)


def test_unity_gain_rejects_nonpositive():
    with pytest.raises(ValueError):
        fidelity_unity_gain(0.0, 1.0)


@given(st.floats(0.01, 50), st.floats(0.01, 50))
def test_unity_gain_agrees_with_general_form(vx, vp):
    general = fidelity_vs_coherent(_state(0.3, -0.2, np.diag([vx, vp])), (0.3, -0.2)).value
    assert general == pytest.approx(min(1.0, fidelity_unity_gain(vx, vp)), rel=1e-12)


@given(st.floats(0, 2 * math.pi), st.floats(0.5, 5), st.floats(0.5, 5))
def test_fidelity_is_rotation_invariant(theta, a, b):
    Rm = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    V = np.diag([a, b])
    f0 = fidelity_vs_coherent(_state(0, 0, V), (0, 0)).value
    f1 = fidelity_vs_coherent(_state(0, 0, Rm @ V @ Rm.T), (0, 0)).value
    assert f1 == pytest.approx(f0, rel=1e-12)


def test_reflectivity_values():
    assert reflectivity(2) == pytest.approx(1 / 9)
    assert reflectivity(1) == 0.0
    assert reflectivity(4, 2) == pytest.approx(1 / 9)


def test_closed_form_headline_values():
    assert closed_form("A", 2) == pytest.approx(16 / 17, rel=1e-15)
    assert closed_form("A", 2, which="anticlone") == pytest.approx(16 / 17, rel=1e-15)
    assert closed_form("A", math.inf) == pytest.approx(0.8)
    assert closed_form("A", math.inf, which="anticlone") == pytest.approx(0.8)
    assert closed_form("A-generalized", math.inf, N=3) == pytest.approx(12 / 13)
    assert closed_form("A", 1) == pytest.approx(1.0)
    # variant B at r = 0: 16 / (16 + 1*2 + 8) = 16/26
    assert closed_form("B", 2, r=0.0) == pytest.approx(16 / 26, rel=1e-15)


def test_swapped_exchanges_roles():
    for M in (1, 2, 5):
        assert closed_form("A-swapped", M, r=0.5) == closed_form("A", M, r=0.5, which="anticlone")
        assert closed_form("A-swapped", M, r=0.5, which="anticlone") == closed_form("A", M, r=0.5)


def test_variant_b_reduces_to_single_pair_when_second_pair_is_perfect():
    for M in range(1, 7):
        for r in (0.0, 1.0):
            assert closed_form("B", M, r=r, r2=math.inf) == pytest.approx(closed_form("A", M, r=r))
            assert closed_form("B", M, r=r, r2=math.inf, which="anticlone") == pytest.approx(
                closed_form("A", M, r=r, which="anticlone"))


@settings(max_examples=200)
@given(st.sampled_from(["A", "A-swapped", "A-generalized", "B"]),
       st.integers(1, 50), st.integers(1, 6), st.floats(0, 5), st.floats(0, 5),
       st.sampled_from(["clone", "anticlone"]))
def test_closed_form_is_unity_gain_of_closed_variance(variant, M, N, r, r2, which):
    if variant in ("A", "A-swapped", "B"):
        N = 1
    v = closed_form_variance(variant, M, N, r, r2, which)
    assert closed_form(variant, M, N, r, r2, which) == pytest.approx(
        fidelity_unity_gain(v, v), rel=1e-12)


def test_baseline_values():
    clone, anti = baseline_standard_fidelity(2, r=math.inf)
    assert clone == 1.0 and anti == pytest.approx(2 / 3, rel=1e-15)
    assert baseline_standard_fidelity(2, r=10)[0] == pytest.approx(1.0, abs=1e-8)
    assert baseline_standard_fidelity(10 ** 6)[0] == pytest.approx(2 / 3, abs=1e-6)
    assert baseline_standard_fidelity(math.inf) == pytest.approx((2 / 3, 2 / 3))
    assert math.isnan(baseline_standard_fidelity(1)[0])


def test_baseline_general_n_matches_n1_and_asymptote():
    for M in (2, 3, 9):
        assert baseline_standard_fidelity(M, 1, 0.7)[0] == pytest.approx(
            2 * M / (2 * M + M - 2 + 2 * math.exp(-1.4)))
    assert baseline_standard_fidelity(10 ** 7, 3)[0] == pytest.approx(6 / 7, abs=1e-6)


def test_unknown_variant_and_role():
    with pytest.raises(ValueError):
        closed_form("Z", 2)
    with pytest.raises(ValueError):
        closed_form("A", 2, which="both")
