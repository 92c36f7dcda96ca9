"""End-to-end builders for phase-conjugate-input telecloning.

Each builder assembles the optical network on a :class:`~teleclone.gaussian.Circuit`,
performs the dual-homodyne measurements and feedforward, and returns the
final transform together with a :class:`CloneReport` that puts the exact
simulated moments next to the closed-form predictions.

Variants
--------
``A``
    one EPR pair, ``M`` clones sent to remote receivers, ``M`` anticlones
    kept locally (``N = 1``).
``A-swapped``
    same network with the coherent and conjugate inputs exchanged: local
    clones, remote anticlones.
``A-generalized``
    ``N`` copies of each input concentrated into one mode first.
``B``
    two EPR pairs, both clones and anticlones remote.
``baseline``
    standard telecloning from identical copies; closed form only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from . import fidelity as fid
from .gaussian import Circuit, InputRegistry, ModeState, QuadratureTransform, \
    symplectic_residual
from .measurement import apply_feedforward, combine_records, measure
from .optics import SplitterSpec, apply_splitter, concentrate, splitter_cascade

LARGE_SQUEEZING = 10.0

BUILDABLE = ("A", "A-swapped", "A-generalized", "B")


@dataclass(frozen=True)
class ProtocolSpec:
    variant: str
    M: int
    N: int = 1
    r: float = LARGE_SQUEEZING
    r2: float | None = None
    x_in: float = 0.0
    p_in: float = 0.0

    def __post_init__(self):
        if self.variant not in fid.VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {fid.VARIANTS}")
        for name in ("M", "N"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {v!r}")
        for name in ("r", "r2"):
            v = getattr(self, name)
            if v is not None and not v >= 0:
                raise ValueError(f"{name} must be >= 0, got {v!r}")
        if not (math.isfinite(self.x_in) and math.isfinite(self.p_in)):
            raise ValueError("input amplitude must be finite")
        if self.variant == "B" and self.N != 1:
            raise ValueError("variant B is defined for a single input pair (N = 1)")
        if self.variant == "A" and self.N != 1:
            raise ValueError("variant A takes N = 1; use 'A-generalized' for N > 1")

    @property
    def squeezing2(self) -> float:
        return self.r if self.r2 is None else self.r2

    @property
    def reflection_amplitude(self) -> float:
        """Signed BS0 reflection amplitude ``(M-N)/(M+N)``.

        Negative only when ``M < N``; the sign keeps the gain at unity.
        """
        return (self.M - self.N) / (self.M + self.N)

    @property
    def R(self) -> float:
        return self.reflection_amplitude ** 2

    @property
    def T(self) -> float:
        return 1.0 - self.R

    @property
    def amplification(self) -> float:
        return 1.0 / (1.0 - self.R)

    @property
    def g1(self) -> float:
        return math.sqrt(2.0 / (self.M * (1.0 - self.R)))

    @property
    def g2(self) -> float:
        """Anticlone gain; equals ``sqrt(2R/(M(1-R)))`` for ``M >= N``."""
        return self.reflection_amplitude * self.g1

    def gains_B(self) -> dict[str, float]:
        """Gain set for the two-EPR protocol.

        Keys ``{x,p}{1,2}_{a,b}``: record 1 is sender 1 (input), record 2 is
        sender 2 (conjugate input); ``a`` feeds clones, ``b`` anticlones.
        """
        G, s = self.g1, self.reflection_amplitude
        return {
            "x1_a": G, "p1_a": -G, "x2_a": s * G, "p2_a": s * G,
            "x1_b": s * G, "p1_b": s * G, "x2_b": G, "p2_b": -G,
        }

    def with_(self, **kw) -> "ProtocolSpec":
        d = dict(variant=self.variant, M=self.M, N=self.N, r=self.r, r2=self.r2,
                 x_in=self.x_in, p_in=self.p_in)
        d.update(kw)
        return ProtocolSpec(**d)


@dataclass
class CloneReport:
    spec: ProtocolSpec
    registry: InputRegistry
    clone_modes: list[int]
    anticlone_modes: list[int]
    clone_states: list[ModeState]
    anticlone_states: list[ModeState]
    predicted_clone_var: float
    predicted_anticlone_var: float
    fidelity_clone: float
    fidelity_clone_formula: float
    fidelity_anticlone: float
    fidelity_anticlone_formula: float
    max_discrepancy: float
    symplectic_residual: float
    min_det: float
    flags: list[str] = field(default_factory=list)

    @property
    def clone_target(self) -> tuple[float, float]:
        return self.spec.x_in, self.spec.p_in

    @property
    def anticlone_target(self) -> tuple[float, float]:
        return self.spec.x_in, -self.spec.p_in


def _report(spec: ProtocolSpec, circuit: Circuit, clones, anticlones, flags) -> CloneReport:
    reg, T = circuit.registry, circuit.transform
    clone_states = [circuit.output_state(m) for m in clones]
    anti_states = [circuit.output_state(m) for m in anticlones]
    r2 = spec.squeezing2
    v_clone = fid.closed_form_variance(spec.variant, spec.M, spec.N, spec.r, r2, "clone")
    v_anti = fid.closed_form_variance(spec.variant, spec.M, spec.N, spec.r, r2, "anticlone")
    f_clone = fid.closed_form(spec.variant, spec.M, spec.N, spec.r, r2, "clone")
    f_anti = fid.closed_form(spec.variant, spec.M, spec.N, spec.r, r2, "anticlone")

    clone_t = (spec.x_in, spec.p_in)
    anti_t = (spec.x_in, -spec.p_in)
    disc = 0.0
    sim_f = {}
    for label, states, target, v, f in (("clone", clone_states, clone_t, v_clone, f_clone),
                                        ("anticlone", anti_states, anti_t, v_anti, f_anti)):
        fs = []
        for st in states:
            F = fid.fidelity_vs_coherent(st, target).value
            fs.append(F)
            disc = max(disc, abs(st.var_x - v), abs(st.var_p - v), abs(st.cov[0, 1]),
                       abs(st.mean_x - target[0]), abs(st.mean_p - target[1]), abs(F - f))
        sim_f[label] = fs[0]
    dets = [float(np.linalg.det(s.cov)) for s in clone_states + anti_states]
    return CloneReport(
        spec=spec, registry=reg, clone_modes=list(clones), anticlone_modes=list(anticlones),
        clone_states=clone_states, anticlone_states=anti_states,
        predicted_clone_var=v_clone, predicted_anticlone_var=v_anti,
        fidelity_clone=sim_f["clone"], fidelity_clone_formula=f_clone,
        fidelity_anticlone=sim_f["anticlone"], fidelity_anticlone_formula=f_anti,
        max_discrepancy=disc, symplectic_residual=symplectic_residual(T),
        min_det=min(dets), flags=list(flags),
    )


def _check_buildable(spec: ProtocolSpec):
    for name in ("r", "r2"):
        v = getattr(spec, name)
        if v is not None and not math.isfinite(v):
            raise ValueError(
                f"{name} = inf has no finite network; use a large value such as "
                f"{LARGE_SQUEEZING} or the closed forms in teleclone.fidelity")


def _one_epr(spec: ProtocolSpec, swap: bool, n_outputs=None) -> tuple[QuadratureTransform, CloneReport]:
    _check_buildable(spec)
    M, N = spec.M, spec.N
    c = Circuit()
    coh = [c.add_coherent(spec.x_in, spec.p_in, False, f"c_in{l}") for l in range(N)]
    conj = [c.add_coherent(spec.x_in, spec.p_in, True, f"c_conj{l}") for l in range(N)]
    a1, a2 = c.add_epr_pair(spec.r, ("a_EPR1", "a_EPR2"))
    c_in = concentrate(c, coh)
    c_conj = concentrate(c, conj)
    # the mode sent to the homodyne vs the one mixed into BS0
    hom_in, bs0_in = (c_conj, c_in) if swap else (c_in, c_conj)

    remote = splitter_cascade(c, a2, M, "a", n_outputs)
    s = spec.reflection_amplitude
    apply_splitter(c, SplitterSpec(bs0_in, a1, spec.T, "paper-BS0", -1 if s < 0 else 1))
    c1t, c1r = bs0_in, a1
    local = splitter_cascade(c, c1t, M, "b", n_outputs)

    rec = measure(c, c1r, hom_in)
    apply_feedforward(c, rec, remote, spec.g1, -spec.g1)
    apply_feedforward(c, rec, local, spec.g2, spec.g2)

    flags = _output_flags(M, n_outputs)
    if M < N:
        flags.append("M < N: BS0 reflection amplitude is negative")
    if swap:
        flags.append("local clones, nonlocal anticlones")
        clones, anticlones = local, remote
    else:
        clones, anticlones = remote, local
    return c.transform, _report(spec, c, clones, anticlones, flags)


def _output_flags(M, n_outputs):
    if n_outputs is not None and n_outputs < M:
        return [f"first {n_outputs} of {M} outputs per cascade materialised"]
    return []


def build_variant_A(spec: ProtocolSpec, n_outputs: int | None = None):
    """``1+1 -> M+M``: nonlocal clones, local anticlones, one EPR pair.

    ``n_outputs`` limits how many clones/anticlones are built (all ``M``
    by default); the ones built are exact.
    """
    if spec.variant != "A":
        spec = spec.with_(variant="A")
    return _one_epr(spec, False, n_outputs)


def build_variant_A_swapped(spec: ProtocolSpec, n_outputs: int | None = None):
    """Inputs exchanged: clones stay local, anticlones are teleported."""
    if spec.variant != "A-swapped":
        spec = spec.with_(variant="A-swapped")
    return _one_epr(spec, True, n_outputs)


def build_variant_A_generalized(spec: ProtocolSpec, n_outputs: int | None = None):
    """``N+N -> M+M`` with ``R = (M-N)^2/(M+N)^2``."""
    if spec.variant != "A-generalized":
        spec = spec.with_(variant="A-generalized")
    return _one_epr(spec, False, n_outputs)


def _variant_B_network(spec: ProtocolSpec):
    """Inputs, both EPR pairs and BS0; returns the circuit and named modes."""
    c = Circuit()
    modes = {}
    modes["c_in"] = c.add_coherent(spec.x_in, spec.p_in, False, "c_in")
    modes["c_conj"] = c.add_coherent(spec.x_in, spec.p_in, True, "c_conj")
    modes["a_EPR1"], modes["a_EPR2"] = c.add_epr_pair(spec.r, ("a_EPR1", "a_EPR2"))
    modes["b_EPR1"], modes["b_EPR2"] = c.add_epr_pair(spec.squeezing2, ("b_EPR1", "b_EPR2"))
    apply_splitter(c, SplitterSpec(modes["b_EPR1"], modes["a_EPR1"], spec.T, "paper-BS0"))
    modes["c1t"], modes["c1r"] = modes["b_EPR1"], modes["a_EPR1"]
    return c, modes


def variant_B_resource(spec: ProtocolSpec) -> tuple[InputRegistry, QuadratureTransform, list[int]]:
    """The four-mode entangled resource ``(a_EPR2, c1t, c1r, b_EPR2)`` after BS0."""
    if spec.variant != "B":
        spec = spec.with_(variant="B")
    _check_buildable(spec)
    c, m = _variant_B_network(spec)
    return c.registry, c.transform, [m["a_EPR2"], m["c1t"], m["c1r"], m["b_EPR2"]]


def build_variant_B(spec: ProtocolSpec, n_outputs: int | None = None):
    """``1+1 -> M+M`` with clones and anticlones both nonlocal (two EPR pairs)."""
    if spec.variant != "B":
        spec = spec.with_(variant="B")
    _check_buildable(spec)
    c, m = _variant_B_network(spec)
    remote_a = splitter_cascade(c, m["a_EPR2"], spec.M, "a", n_outputs)
    remote_b = splitter_cascade(c, m["c1t"], spec.M, "b", n_outputs)
    rec1 = measure(c, m["c1r"], m["c_in"])
    rec2 = measure(c, m["b_EPR2"], m["c_conj"])
    g = spec.gains_B()
    to_clones = combine_records(rec1, rec2, g["x1_a"], g["p1_a"], g["x2_a"], g["p2_a"])
    to_anti = combine_records(rec1, rec2, g["x1_b"], g["p1_b"], g["x2_b"], g["p2_b"])
    apply_feedforward(c, to_clones, remote_a, 1.0, 1.0)
    apply_feedforward(c, to_anti, remote_b, 1.0, 1.0)
    return c.transform, _report(spec, c, remote_a, remote_b, _output_flags(spec.M, n_outputs))


_BUILDERS = {
    "A": build_variant_A,
    "A-swapped": build_variant_A_swapped,
    "A-generalized": build_variant_A_generalized,
    "B": build_variant_B,
}


def build(spec: ProtocolSpec, n_outputs: int | None = None):
    """Dispatch on ``spec.variant``; the baseline has no network."""
    try:
        builder = _BUILDERS[spec.variant]
    except KeyError:
        raise ValueError(f"variant {spec.variant!r} has no network to build") from None
    return builder(spec, n_outputs)


def baseline_standard_fidelity(M, N=1, r=math.inf) -> tuple[float, float]:
    return fid.baseline_standard_fidelity(M, N, r)
