"""Command-line interface.

Subcommands
-----------
bounds        evaluate every bound at one (model, theta, weight) and print JSON
sweep-weight  grid over weight space at fixed theta, CSV rows per cell
sweep-theta   grid over parameter space at fixed weight, CSV rows per cell
classify      point and optional grid classification of a model
verify        oracle-versus-closed-form residual suite on random instances

Exit codes: 0 success, 1 verification failure, 2 invalid input.  Input
validation failures print the exception class name (for example
``PureStateError``) with the message.  CSV output is deterministic for a
fixed spec and seed: rows are emitted in row-major grid order with floats
printed to 17 significant digits, and the header carries a schema version.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .bloch import BlochModelPoint
from .bounds import (
    WeightMatrix,
    boundary_weight_family,
    holevo_bound,
    weight_from_angles,
)
from .classify import classify_family, classify_point
from .errors import ModelError
from .fisher import fisher_bundle
from .models import load_model
from .verify import run_verification

__all__ = ["main", "build_parser"]

CSV_SCHEMA = "v1"
BOUND_COLUMNS = [
    "c_s",
    "c_r",
    "c_z",
    "c_n",
    "c_h",
    "s_correction",
    "b_theta",
    "branch",
    "gamma1",
    "gamma2",
    "d_invariant",
    "asymptotically_classical",
]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_floats(text: str, count: int, name: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != count:
        raise ModelError(f"{name} expects {count} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ModelError(f"could not parse {name} = {text!r}") from exc


def _parse_weight(text: str) -> WeightMatrix:
    w11, w12, w22 = _parse_floats(text, 3, "--weight")
    return WeightMatrix(w11, w12, w22)


def _load_family(args):
    if args.model is None:
        raise ModelError("--model FILE is required")
    return load_model(args.model)


def _bounds_record(
    point: BlochModelPoint, weight: WeightMatrix, fb=None, cls=None
) -> dict:
    if fb is None:
        fb = fisher_bundle(point)
    report = holevo_bound(fb, weight)
    if cls is None:
        cls = classify_point(point)
    return {
        "c_s": report.c_s,
        "c_r": report.c_r,
        "c_z": report.c_z,
        "c_n": report.c_n,
        "c_h": report.c_h,
        "s_correction": report.s_correction,
        "b_theta": report.b_value,
        "branch": report.branch.value,
        "gamma1": float(fb.gamma[0]),
        "gamma2": float(fb.gamma[1]),
        "d_invariant": cls.d_invariant,
        "asymptotically_classical": cls.asymptotically_classical,
        "xi_star": [float(v) for v in report.xi_star],
    }


def _record_csv_fields(record: dict) -> list[str]:
    out = []
    for col in BOUND_COLUMNS:
        value = record[col]
        if col == "branch":
            out.append(str(value))
        elif isinstance(value, bool):
            out.append("1" if value else "0")
        else:
            out.append(_fmt(value))
    return out


def _emit_csv(path, header_name: str, columns: list[str], rows) -> None:
    lines = [f"# holevo2q {header_name} schema {CSV_SCHEMA}", ",".join(columns)]
    lines.extend(",".join(row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _map_cells(worker, cells, jobs: int):
    if jobs <= 1:
        return [worker(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, cells))


def cmd_bounds(args) -> int:
    family = _load_family(args)
    theta = _parse_floats(args.theta, 2, "--theta")
    weight = _parse_weight(args.weight)
    point = family.evaluate(theta)
    record = {"theta1": theta[0], "theta2": theta[1], **_bounds_record(point, weight)}
    print(json.dumps(record, indent=2))
    return 0


def cmd_sweep_weight(args) -> int:
    family = _load_family(args)
    theta = _parse_floats(args.theta, 2, "--theta")
    point = family.evaluate(theta)
    fb = fisher_bundle(point)
    n = args.grid
    if n < 2:
        raise ModelError("--grid must be at least 2")

    if args.weight_family == "53":
        first = np.linspace(-args.w_max, args.w_max, n)
        second = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        columns = ["w", "omega"] + BOUND_COLUMNS

        def make_weight(a, b):
            return weight_from_angles(a, b)

    else:  # family "42": boundary-adapted coordinates (w, w2)
        first = np.linspace(-args.w_max, args.w_max, n)
        second = np.linspace(args.w2_min, args.w2_max, n)
        columns = ["w", "w2"] + BOUND_COLUMNS

        def make_weight(a, b):
            return boundary_weight_family(fb, a, b)

    cells = [(a, b) for a in first for b in second]
    cls = classify_point(point)

    def worker(cell):
        a, b = cell
        record = _bounds_record(point, make_weight(a, b), fb=fb, cls=cls)
        return [_fmt(a), _fmt(b)] + _record_csv_fields(record)

    rows = _map_cells(worker, cells, args.jobs)
    _emit_csv(args.out, "sweep-weight", columns, rows)
    return 0


def cmd_sweep_theta(args) -> int:
    family = _load_family(args)
    weight = _parse_weight(args.weight)
    n = args.grid
    if n < 2:
        raise ModelError("--grid must be at least 2")
    dom = family.domain

    def _axis(lo: float, hi: float) -> np.ndarray:
        pad = args.shrink * (hi - lo)
        return np.linspace(lo + pad, hi - pad, n)

    axis1 = _axis(*dom.theta1)
    axis2 = _axis(*dom.theta2)
    columns = ["theta1", "theta2"] + BOUND_COLUMNS
    cells = [(t1, t2) for t1 in axis1 for t2 in axis2]

    def worker(cell):
        t1, t2 = cell
        try:
            point = family.evaluate((t1, t2))
            if not point.is_mixed:
                return None
        except ModelError:
            return None  # outside the mixed-state disk of the family
        record = _bounds_record(point, weight)
        return [_fmt(t1), _fmt(t2)] + _record_csv_fields(record)

    rows = [row for row in _map_cells(worker, cells, args.jobs) if row is not None]
    _emit_csv(args.out, "sweep-theta", columns, rows)
    return 0


def cmd_classify(args) -> int:
    family = _load_family(args)
    out: dict = {"model": family.to_descriptor()}
    if args.theta is not None:
        theta = _parse_floats(args.theta, 2, "--theta")
        cls = classify_point(family.evaluate(theta))
        out["point"] = {
            "theta1": theta[0],
            "theta2": theta[1],
            "label": cls.label.value,
            "d_invariant": cls.d_invariant,
            "asymptotically_classical": cls.asymptotically_classical,
            "gamma": [float(g) for g in cls.gamma],
            "triple_product": cls.triple_product,
        }
    if args.grid:
        dom = family.domain
        n = args.grid
        f1 = np.linspace(dom.theta1[0], dom.theta1[1], n + 2)[1:-1]
        f2 = np.linspace(dom.theta2[0], dom.theta2[1], n + 2)[1:-1]
        grid = [(a, b) for a in f1 for b in f2]
        usable = []
        for th in grid:
            try:
                family.evaluate(th)
                usable.append(th)
            except ModelError:
                continue
        fam = classify_family(family, usable)
        labels = sorted({c.label.value for c in fam.point_classes})
        out["family"] = {
            "globally_d_invariant": fam.globally_d_invariant,
            "grid_points": len(usable),
            "labels_present": labels,
        }
    print(json.dumps(out, indent=2))
    return 0


def cmd_verify(args) -> int:
    if args.count <= 0:
        raise ModelError("--count must be a positive integer")
    report = run_verification(
        seed=args.seed, count=args.count, inject_failure=args.inject_failure
    )
    print(report.table())
    if report.passed:
        print(f"verify: all {len(report.rows)} checks passed")
        return 0
    failing = [row.name for row in report.rows if not row.ok]
    print(f"verify: FAILED checks: {', '.join(failing)}")
    for row in report.rows:
        if not row.ok and row.witness:
            print(f"  witness for {row.name}: {row.witness}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holevo2q",
        description="Bounds for two-parameter qubit estimation models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="evaluate bounds at one point")
    p_bounds.add_argument("--model", required=True, help="model descriptor JSON file")
    p_bounds.add_argument("--theta", required=True, help="parameter point A,B")
    p_bounds.add_argument("--weight", required=True, help="weight entries w11,w12,w22")
    p_bounds.set_defaults(func=cmd_bounds)

    p_sw = sub.add_parser("sweep-weight", help="sweep the weight-space grid")
    p_sw.add_argument("--model", required=True)
    p_sw.add_argument("--theta", required=True)
    p_sw.add_argument("--grid", type=int, default=101, help="grid points per axis")
    p_sw.add_argument(
        "--weight-family",
        choices=("53", "42"),
        default="53",
        help="53: rotated trace-one weights (w, omega); 42: boundary-adapted (w, w2)",
    )
    p_sw.add_argument("--w-max", type=float, default=0.99)
    p_sw.add_argument("--w2-min", type=float, default=0.05)
    p_sw.add_argument("--w2-max", type=float, default=1.95)
    p_sw.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p_sw.add_argument("--jobs", type=int, default=1)
    p_sw.set_defaults(func=cmd_sweep_weight)

    p_st = sub.add_parser("sweep-theta", help="sweep the parameter-space grid")
    p_st.add_argument("--model", required=True)
    p_st.add_argument("--weight", required=True)
    p_st.add_argument("--grid", type=int, default=101)
    p_st.add_argument(
        "--shrink",
        type=float,
        default=0.0,
        help="fraction to shrink the domain rectangle on each side",
    )
    p_st.add_argument("--out", default=None)
    p_st.add_argument("--jobs", type=int, default=1)
    p_st.set_defaults(func=cmd_sweep_theta)

    p_cl = sub.add_parser("classify", help="classify a model point or family")
    p_cl.add_argument("--model", required=True)
    p_cl.add_argument("--theta", default=None)
    p_cl.add_argument("--grid", type=int, default=0, help="family grid points per axis")
    p_cl.set_defaults(func=cmd_classify)

    p_v = sub.add_parser("verify", help="run the oracle verification suite")
    p_v.add_argument("--seed", type=int, default=42)
    p_v.add_argument("--count", type=int, default=200)
    p_v.add_argument(
        "--inject-failure",
        action="store_true",
        help="test hook: corrupt one tolerance to force a failing run",
    )
    p_v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
