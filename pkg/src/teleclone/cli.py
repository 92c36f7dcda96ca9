"""Command-line front end: ``teleclone simulate|sweep|verify|table``.

Exit codes: 0 success, 1 an invariant or statistical check failed,
2 invalid arguments.
"""

from __future__ import annotations

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import fidelity as fid
from .gaussian import TOL
from .oracle import MIN_SAMPLES, compare, run_oracle
from .protocols import LARGE_SQUEEZING, ProtocolSpec, build

SCHEMA = 1
SEED_ENV = "TELECLONE_SEED"
DISCREPANCY_TOL = 1e-10
# beyond this many clones only the first few outputs of each cascade are built
FULL_NETWORK_MAX_M = 64
REPRESENTATIVE_OUTPUTS = 3

SWEEP_HEADER = ["variant", "M", "N", "r", "r2", "F_clone_sim", "F_clone_formula",
                "F_anti_sim", "F_anti_formula", "F_baseline_clone"]
TABLE_HEADER = ["M", "N", "r", "F_pci_clone", "F_pci_anti", "F_standard_clone",
                "F_standard_anti"]

_VARIANT_NAMES = {
    "a": "A", "a-swapped": "A-swapped", "a-generalized": "A-generalized",
    "b": "B", "baseline": "baseline",
}

VERIFY_GRID_M = (1, 2, 3, 5)
VERIFY_GRID_R = (0.0, 1.0)


def fmt(v) -> str:
    """12 significant digits; ``inf``/``nan`` spelled out; ints unchanged."""
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def round12(v):
    if v is None or isinstance(v, (bool, int, np.integer)):
        return v if not isinstance(v, np.integer) else int(v)
    v = float(v)
    if not math.isfinite(v):
        return fmt(v)
    return float(f"{v:.12g}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (float, np.floating, int, np.integer)) and not isinstance(obj, bool):
        return round12(obj)
    return obj


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# --- argument parsing ------------------------------------------------------

def _squeezing(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(v) or v < 0:
        raise argparse.ArgumentTypeError(f"squeezing must be >= 0 or 'inf', got {text!r}")
    return v


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,p', got {text!r}")
    try:
        x, p = (float(s) for s in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers, got {text!r}") from None
    if not (math.isfinite(x) and math.isfinite(p)):
        raise argparse.ArgumentTypeError("input amplitude must be finite")
    return x, p


def _variant(text: str) -> str:
    try:
        return _VARIANT_NAMES[text.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"unknown variant {text!r}; choose from {sorted(_VARIANT_NAMES)}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_protocol_args(p, variant_default="a"):
    p.add_argument("--variant", type=_variant, default=_variant(variant_default),
                   help="a | a-swapped | a-generalized | b | baseline "
                        "(a with --copies > 1 runs a-generalized)")
    p.add_argument("--clones", "-M", type=_positive_int, default=2, help="number of clones M")
    p.add_argument("--copies", "-N", type=_positive_int, default=1, help="input copies N")
    p.add_argument("--squeezing", "-r", type=_squeezing, default=math.inf,
                   help="EPR squeezing r (accepts 'inf')")
    p.add_argument("--squeezing2", type=_squeezing, default=None,
                   help="second EPR squeezing r2 (variant b); defaults to r")
    p.add_argument("--input", type=_pair, default=(0.0, 0.0), metavar="X,P",
                   help="coherent input quadrature means")


def _add_output_args(p, default_format):
    p.add_argument("--format", choices=("json", "csv"), default=default_format)
    p.add_argument("--output", "-o", default=None, help="write to file instead of stdout")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleclone",
        description="Phase-conjugate-input telecloning of coherent states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="build one protocol and report its outputs")
    _add_protocol_args(p)
    _add_output_args(p, "json")

    p = sub.add_parser("sweep", help="fidelities over a parameter range (CSV)")
    _add_protocol_args(p)
    p.add_argument("--axis", choices=("M", "N", "r", "r2"), required=True)
    p.add_argument("--range", dest="span", required=True, metavar="START:STOP",
                   help="inclusive range of the swept parameter")
    p.add_argument("--steps", type=_positive_int, default=None,
                   help="grid points (default: unit steps for M/N, 11 for r/r2)")
    p.add_argument("--jobs", type=_positive_int, default=1)
    _add_output_args(p, "csv")

    p = sub.add_parser("verify", help="Monte Carlo cross-check of the analytic results")
    p.add_argument("--variant", type=_variant, default=None,
                   help="verify a single cell instead of the default grid")
    p.add_argument("--clones", "-M", type=_positive_int, default=2)
    p.add_argument("--copies", "-N", type=_positive_int, default=1)
    p.add_argument("--squeezing", "-r", type=_squeezing, default=1.0)
    p.add_argument("--squeezing2", type=_squeezing, default=None)
    p.add_argument("--input", type=_pair, default=(2.0, 4.0), metavar="X,P")
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (overrides ${SEED_ENV}; default 0)")
    p.add_argument("--jobs", type=_positive_int, default=1)
    _add_output_args(p, "json")

    p = sub.add_parser("table", help="fixed comparison table: PCI vs standard telecloning")
    _add_output_args(p, "csv")
    return parser


def resolve_seed(flag: int | None, environ=None) -> int:
    environ = os.environ if environ is None else environ
    if flag is not None:
        return flag
    if environ.get(SEED_ENV):
        return int(environ[SEED_ENV])
    return 0


def _spec(variant, M, N, r, r2, xp) -> ProtocolSpec:
    if variant != "B":
        r2 = None
    if variant == "A" and N > 1:
        variant = "A-generalized"
    return ProtocolSpec(variant, M, N, r, r2, xp[0], xp[1])


def _build(spec: ProtocolSpec):
    n_out = REPRESENTATIVE_OUTPUTS if spec.M > FULL_NETWORK_MAX_M else None
    return build(spec, n_out)


def _simulable(spec: ProtocolSpec) -> ProtocolSpec:
    """Replace infinite squeezing by the large finite proxy."""
    r = spec.r if math.isfinite(spec.r) else LARGE_SQUEEZING
    r2 = spec.r2
    if r2 is not None and not math.isfinite(r2):
        r2 = LARGE_SQUEEZING
    return spec.with_(r=r, r2=r2)


# --- simulate --------------------------------------------------------------

def _state_doc(mode, st):
    return {"mode": mode, "mean": [st.mean_x, st.mean_p], "cov": st.cov}


def cmd_simulate(spec: ProtocolSpec) -> dict:
    doc = {
        "schema": SCHEMA,
        "command": "simulate",
        "spec": {"variant": spec.variant, "M": spec.M, "N": spec.N, "r": spec.r,
                 "r2": spec.r2, "input": [spec.x_in, spec.p_in]},
    }
    if spec.variant == "baseline":
        clone, anti = fid.baseline_standard_fidelity(spec.M, spec.N, spec.r)
        doc.update(fidelity_clone=clone, fidelity_anticlone=anti,
                   fidelity_clone_formula=clone, fidelity_anticlone_formula=anti,
                   closed_form_only=True,
                   invariants={"passed": True})
        return doc

    sim = _simulable(spec)
    _, rep = _build(sim)
    doc["derived"] = {"R": sim.R, "T": sim.T, "g1": sim.g1, "g2": sim.g2,
                      "amplification": sim.amplification}
    if spec.variant == "B":
        doc["derived"]["gains"] = sim.gains_B()
    doc["simulated_squeezing"] = {"r": sim.r, "r2": sim.r2}
    doc["clones"] = [_state_doc(m, s) for m, s in zip(rep.clone_modes, rep.clone_states)]
    doc["anticlones"] = [_state_doc(m, s) for m, s in
                         zip(rep.anticlone_modes, rep.anticlone_states)]
    doc.update(
        predicted_clone_var=rep.predicted_clone_var,
        predicted_anticlone_var=rep.predicted_anticlone_var,
        fidelity_clone=rep.fidelity_clone,
        fidelity_clone_formula=rep.fidelity_clone_formula,
        fidelity_anticlone=rep.fidelity_anticlone,
        fidelity_anticlone_formula=rep.fidelity_anticlone_formula,
        max_discrepancy=rep.max_discrepancy,
        flags=rep.flags,
    )
    if sim != spec:
        r2 = spec.squeezing2 if spec.variant == "B" else None
        doc["limit"] = {
            "fidelity_clone": fid.closed_form(spec.variant, spec.M, spec.N, spec.r, r2, "clone"),
            "fidelity_anticlone": fid.closed_form(spec.variant, spec.M, spec.N, spec.r, r2,
                                                  "anticlone"),
        }
    passed = (rep.max_discrepancy <= DISCREPANCY_TOL
              and rep.symplectic_residual <= TOL
              and rep.min_det >= 1.0 - TOL)
    doc["invariants"] = {"symplectic_residual": rep.symplectic_residual,
                         "min_det": rep.min_det,
                         "max_discrepancy": rep.max_discrepancy,
                         "passed": passed}
    return doc


# --- sweep -----------------------------------------------------------------

def sweep_values(axis: str, span: str, steps: int | None) -> list:
    try:
        a, b = span.split(":")
    except ValueError:
        raise ValueError(f"range must be START:STOP, got {span!r}") from None
    if axis in ("M", "N"):
        lo, hi = int(a), int(b)
        if lo < 1 or hi < lo:
            raise ValueError(f"empty or invalid range {span!r}")
        if steps is None:
            return list(range(lo, hi + 1))
        vals = np.unique(np.round(np.linspace(lo, hi, steps)).astype(int))
        return [int(v) for v in vals]
    lo, hi = float(a), float(b)
    if not (lo >= 0 and hi >= lo) or math.isnan(hi):
        raise ValueError(f"empty or invalid range {span!r}")
    if math.isinf(hi):
        if steps not in (None, 1) or not math.isinf(lo):
            raise ValueError("an infinite range end is only allowed as 'inf:inf'")
        return [math.inf]
    n = steps if steps is not None else 11
    return [round12(v) for v in np.linspace(lo, hi, n)]


def sweep_row(spec: ProtocolSpec) -> dict:
    variant = spec.variant
    r2 = spec.r2 if variant == "B" else None
    f_clone = fid.closed_form(variant, spec.M, spec.N, spec.r, r2, "clone")
    f_anti = fid.closed_form(variant, spec.M, spec.N, spec.r, r2, "anticlone")
    if variant == "baseline":
        s_clone, s_anti = f_clone, f_anti
    else:
        _, rep = _build(_simulable(spec))
        s_clone, s_anti = rep.fidelity_clone, rep.fidelity_anticlone
    base, _ = fid.baseline_standard_fidelity(spec.M, spec.N, spec.r)
    return {"variant": variant, "M": spec.M, "N": spec.N, "r": spec.r, "r2": r2,
            "F_clone_sim": s_clone, "F_clone_formula": f_clone,
            "F_anti_sim": s_anti, "F_anti_formula": f_anti, "F_baseline_clone": base}


def cmd_sweep(base: ProtocolSpec, axis: str, span: str, steps=None, jobs: int = 1) -> list:
    values = sweep_values(axis, span, steps)
    specs = []
    for v in values:
        kw = {axis: v}
        if axis == "r2" and base.variant != "B":
            raise ValueError("axis r2 only applies to variant b")
        if axis == "N" and base.variant == "A" and v > 1:
            kw["variant"] = "A-generalized"
        s = base.with_(**kw)
        if s.variant == "B" and s.r2 is None:
            s = s.with_(r2=s.r)
        specs.append(s)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(sweep_row, specs))


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([row[k] if isinstance(row[k], str) else fmt(row[k]) for k in header])
    return buf.getvalue()


# --- verify ----------------------------------------------------------------

def verify_grid() -> list[ProtocolSpec]:
    specs = []
    for M in VERIFY_GRID_M:
        for r in VERIFY_GRID_R:
            specs.append(ProtocolSpec("A", M, 1, r, None, 2.0, 4.0))
            specs.append(ProtocolSpec("A-swapped", M, 1, r, None, 2.0, 4.0))
            specs.append(ProtocolSpec("A-generalized", M, 2, r, None, 2.0, 4.0))
            specs.append(ProtocolSpec("B", M, 1, r, r, 2.0, 4.0))
    return specs


def _verify_cell(args):
    spec, n, seed = args
    run = run_oracle(spec, n, seed)
    d = compare(run)
    return {
        "spec": {"variant": spec.variant, "M": spec.M, "N": spec.N, "r": spec.r,
                 "r2": spec.r2, "input": [spec.x_in, spec.p_in]},
        "max_abs_z": d.max_abs_z,
        "passed": d.passed,
        "flagged": d.flagged(),
        "z_mean": dict(zip(d.labels, d.z_mean.tolist())),
        "z_var": dict(zip(d.labels, d.z_var.tolist())),
    }


def cmd_verify(specs, n_samples: int, seed: int, jobs: int = 1) -> dict:
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"--samples must be >= {MIN_SAMPLES}")
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        cells = list(pool.map(_verify_cell, [(s, n_samples, seed) for s in specs]))
    return {"schema": SCHEMA, "command": "verify", "samples": n_samples, "seed": seed,
            "z_threshold": 5.0, "cells": cells, "passed": all(c["passed"] for c in cells)}


# --- table -----------------------------------------------------------------

def comparison_table() -> list[dict]:
    """PCI vs standard telecloning at infinite squeezing: M = 2, 3, inf; N = 1..4 at M = inf."""
    inf = math.inf
    rows = []
    for M, N in [(2, 1), (3, 1), (inf, 1), (inf, 2), (inf, 3), (inf, 4)]:
        std_clone, std_anti = fid.baseline_standard_fidelity(M, N, inf)
        rows.append({"M": M, "N": N, "r": inf,
                     "F_pci_clone": fid.fidelity_A(M, N, inf, "clone"),
                     "F_pci_anti": fid.fidelity_A(M, N, inf, "anticlone"),
                     "F_standard_clone": std_clone, "F_standard_anti": std_anti})
    return rows


# --- entry point -----------------------------------------------------------

def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            spec = _spec(args.variant, args.clones, args.copies, args.squeezing,
                         args.squeezing2, args.input)
            doc = cmd_simulate(spec)
            if args.format == "csv":
                row = sweep_row(spec)
                text = rows_to_csv(SWEEP_HEADER, [row])
            else:
                text = dumps(doc)
            _emit(text, args.output)
            return 0 if doc["invariants"]["passed"] else 1

        if args.command == "sweep":
            base = _spec(args.variant, args.clones, args.copies, args.squeezing,
                         args.squeezing2, args.input)
            rows = cmd_sweep(base, args.axis, args.span, args.steps, args.jobs)
            text = (rows_to_csv(SWEEP_HEADER, rows) if args.format == "csv"
                    else dumps({"schema": SCHEMA, "command": "sweep", "rows": rows}))
            _emit(text, args.output)
            return 0

        if args.command == "verify":
            seed = resolve_seed(args.seed)
            if args.variant is None:
                specs = verify_grid()
            else:
                specs = [_spec(args.variant, args.clones, args.copies, args.squeezing,
                               args.squeezing2, args.input)]
                if specs[0].variant == "baseline":
                    raise ValueError("the baseline has no network to verify")
            doc = cmd_verify(specs, args.samples, seed, args.jobs)
            _emit(dumps(doc), args.output)
            return 0 if doc["passed"] else 1

        if args.command == "table":
            rows = comparison_table()
            text = (rows_to_csv(TABLE_HEADER, rows) if args.format == "csv"
                    else dumps({"schema": SCHEMA, "command": "table", "rows": rows}))
            _emit(text, args.output)
            return 0
    except ValueError as exc:
        parser.error(str(exc))
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
