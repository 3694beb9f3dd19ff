"""Command-line front end.

Exit codes: 0 ok, 1 check failed, 2 invalid input, 3 inadmissible data.
Failures print a JSON object to stderr. ``PLATEKIT_TOL`` overrides the
default tolerance of every command.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import boundary_data as bd
from .curve import ClosedCurve
from .dichotomy import classify_field
from .manufactured import eval_all_boundary_data, random_airy
from .nulllag import det_C_hessian_counterexample, null_lagrangian_reports
from .poly import PolyField
from .tensor4 import Tensor4, isotropic_plate
from .transforms import (
    DEFAULT_CLOSURE_TOL,
    displacement_to_moments,
    moments_to_displacement,
    plate_dirichlet_to_traction,
    plate_neumann_via_psi,
    plate_residual,
    traction_to_plate_dirichlet,
)

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_INADMISSIBLE = 0, 1, 2, 3

CONVERSIONS = {
    ("elast-neumann", "plate-dirichlet"),
    ("plate-dirichlet", "elast-neumann"),
    ("elast-dirichlet", "plate-neumann"),
    ("plate-neumann", "elast-dirichlet"),
}

FIXTURE_FILES = {
    "plate-dirichlet": "plate_dirichlet.csv",
    "plate-neumann": "plate_neumann.csv",
    "elast-dirichlet": "elast_dirichlet.csv",
    "elast-neumann": "elast_neumann.csv",
}


class CliError(Exception):
    def __init__(self, code: int, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.extra = extra


def _tol(arg, default: float) -> float:
    if arg is not None:
        tol = arg
    elif os.environ.get("PLATEKIT_TOL"):
        try:
            tol = float(os.environ["PLATEKIT_TOL"])
        except ValueError:
            raise CliError(EXIT_INVALID, f"PLATEKIT_TOL is not a number: {os.environ['PLATEKIT_TOL']!r}")
    else:
        tol = default
    if not tol > 0:
        raise CliError(EXIT_INVALID, f"tolerance must be positive, got {tol}")
    return tol


def _dumps(obj) -> str:
    return json.dumps(bd._jsonable(obj), indent=2, sort_keys=True)


def _read_json(path) -> object:
    path = Path(path)
    if not path.is_file():
        raise CliError(EXIT_INVALID, f"file not found: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INVALID, f"{path}: invalid JSON ({exc})")


def load_curve(spec: str) -> ClosedCurve:
    """Curve from a descriptor file or ``circle:R:N`` / ``ellipse:A:B:N``."""
    try:
        if Path(spec).is_file():
            return ClosedCurve.from_descriptor(_read_json(spec))
        kind, *nums = spec.split(":")
        if kind == "circle":
            r = float(nums[0]) if nums else 1.0
            N = int(nums[1]) if len(nums) > 1 else 256
            return ClosedCurve.circle(r, N)
        if kind == "ellipse":
            N = int(nums[2]) if len(nums) > 2 else 256
            return ClosedCurve.ellipse(float(nums[0]), float(nums[1]), N)
    except CliError:
        raise
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise CliError(EXIT_INVALID, f"bad curve spec {spec!r}: {exc}")
    raise CliError(EXIT_INVALID, f"unknown curve spec {spec!r}")


def load_tensor(spec: str, rng: np.random.Generator | None = None) -> Tensor4:
    """Tensor from a JSON file, ``isotropic:B,nu`` or ``random``."""
    try:
        if Path(spec).is_file():
            return Tensor4.from_dict(_read_json(spec))
        if spec.startswith("isotropic:"):
            B, nu = (float(v) for v in spec.split(":", 1)[1].split(","))
            return isotropic_plate(B, nu)
        if spec == "random":
            return Tensor4.random_convex(rng if rng is not None else np.random.default_rng(0))
    except CliError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_INVALID, f"bad tensor spec {spec!r}: {exc}")
    raise CliError(EXIT_INVALID, f"unknown tensor spec {spec!r}")


def _read_data(path, curve, kind=None):
    if not Path(path).is_file():
        raise CliError(EXIT_INVALID, f"file not found: {path}")
    try:
        return bd.read_dataset(path, curve, kind)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_convert(args) -> int:
    pair = (args.from_kind, args.to_kind)
    if pair not in CONVERSIONS:
        legal = ", ".join(f"{a} -> {b}" for a, b in sorted(CONVERSIONS))
        raise CliError(EXIT_INVALID, f"{pair[0]} -> {pair[1]} is not a supported conversion ({legal})")
    tol = _tol(args.tol, DEFAULT_CLOSURE_TOL)
    curve = load_curve(args.curve)
    data = _read_data(args.data, curve, args.from_kind)
    tensor = load_tensor(args.tensor) if args.tensor else None
    report = {"from": args.from_kind, "to": args.to_kind, "tolerance": tol,
              "admissibility": bd.admissibility(data)}
    if tensor is not None:
        report["tensor"] = tensor.to_dict()
    try:
        if pair == ("elast-neumann", "plate-dirichlet"):
            out, gauge = traction_to_plate_dirichlet(curve, data, tol)
            report["gauge"] = gauge.to_dict()
        elif pair == ("plate-dirichlet", "elast-neumann"):
            out = plate_dirichlet_to_traction(curve, data)
        elif pair == ("elast-dirichlet", "plate-neumann"):
            out = displacement_to_moments(curve, data)
        else:
            out, gauge = moments_to_displacement(curve, data, tol)
            report["gauge"] = gauge.to_dict()
    except bd.InadmissibleDataError as exc:
        raise CliError(EXIT_INADMISSIBLE, str(exc), residuals=exc.residuals,
                       admissibility=report["admissibility"])
    out_path = Path(args.out)
    bd.write_dataset(out, out_path, curve_ref=str(args.curve))
    report_path = Path(args.report) if args.report else out_path.with_name(out_path.stem + ".report.json")
    report_path.write_text(_dumps(report) + "\n")
    print(_dumps({"output": str(out_path), "report": str(report_path)}))
    return EXIT_OK


def generate_fixture(out: Path, degree: int, tensor_spec: str, curve_spec: str, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    C = load_tensor(tensor_spec, rng)
    if C.kind != "elastic":
        raise CliError(EXIT_INVALID, "generate needs an elastic-kind plate tensor")
    curve = load_curve(curve_spec)
    if not 0 <= degree <= 4:
        raise CliError(EXIT_INVALID, f"degree must be between 0 and 4, got {degree}")
    u = random_airy(rng, C, degree)
    sol = eval_all_boundary_data(u, C, curve)
    out.mkdir(parents=True, exist_ok=True)
    (out / "curve.json").write_text(_dumps(curve.to_descriptor()) + "\n")
    (out / "tensor.json").write_text(_dumps(C.to_dict()) + "\n")
    truth = {"degree": degree, "seed": seed, "u": u.to_dict(), "v": sol.v.to_dict(),
             "pde_residual": plate_residual(u, C).max_abs(), "displacement_gauge":
             {"base_index": curve.base_index, "v": 0.0, "rotation": 0.0}}
    (out / "truth.json").write_text(_dumps(truth) + "\n")
    for kind, d in sol.datasets().items():
        bd.write_dataset(d, out / FIXTURE_FILES[kind], curve_ref="curve.json")
    return truth


def cmd_generate(args) -> int:
    truth = generate_fixture(Path(args.out), args.degree, args.tensor, args.curve, args.seed)
    print(_dumps({"out": args.out, "degree": truth["degree"], "pde_residual": truth["pde_residual"]}))
    return EXIT_OK


def _load_fixture(path):
    d = Path(path)
    if not d.is_dir():
        raise CliError(EXIT_INVALID, f"fixture directory not found: {d}")
    missing = [f for f in ("curve.json", *FIXTURE_FILES.values()) if not (d / f).is_file()]
    if missing:
        raise CliError(EXIT_INVALID, f"fixture {d} is missing {missing}")
    curve = load_curve(str(d / "curve.json"))
    data = {k: _read_data(d / f, curve, k) for k, f in FIXTURE_FILES.items()}
    C = load_tensor(str(d / "tensor.json")) if (d / "tensor.json").is_file() else None
    truth = _read_json(d / "truth.json") if (d / "truth.json").is_file() else None
    return curve, data, C, truth


def _check(name, value, tol):
    return {"name": name, "value": float(value), "tolerance": tol, "passed": bool(value <= tol)}


def run_verify(curve, data, C, truth, tol: float, closure_tol: float = DEFAULT_CLOSURE_TOL) -> list:
    pd, pn = data["plate-dirichlet"], data["plate-neumann"]
    ed, en = data["elast-dirichlet"], data["elast-neumann"]
    checks = []
    adm = bd.admissibility(en)
    scale = adm["scale"]
    force = float(np.linalg.norm(adm["net_force"]))
    checks.append(_check("traction_net_force", force / scale if scale > 0 else force, closure_tol))
    try:
        pd_rec, _ = traction_to_plate_dirichlet(curve, en, closure_tol)
        checks.append(_check("R1_plate_dirichlet_from_traction",
                             bd.equal_mod_gauge(pd_rec, pd, relative=True)[1], tol))
        en_rec = plate_dirichlet_to_traction(curve, pd_rec)
        checks.append(_check("R1_traction_roundtrip",
                             bd.equal_mod_gauge(en_rec, en, relative=True)[1], tol))
    except bd.InadmissibleDataError as exc:
        checks.append({"name": "R1_plate_dirichlet_from_traction", "value": None, "tolerance": tol,
                       "passed": False, "error": str(exc)})
    checks.append(_check("R1_traction_from_plate_dirichlet",
                         bd.equal_mod_gauge(plate_dirichlet_to_traction(curve, pd), en, relative=True)[1], tol))
    pn_disp = displacement_to_moments(curve, ed)
    try:
        ed_rec, _ = moments_to_displacement(curve, pn_disp, closure_tol)
        checks.append(_check("R2_displacement_roundtrip",
                             bd.equal_mod_gauge(ed_rec, ed, relative=True)[1], tol))
    except bd.InadmissibleDataError as exc:
        checks.append({"name": "R2_displacement_roundtrip", "value": None, "tolerance": tol,
                       "passed": False, "error": str(exc)})
    checks.extend(_cross_route_checks("cross_route_stored", pn, pn_disp, tol))
    if truth is not None and C is not None:
        u = PolyField.from_dict(truth["u"])
        checks.extend(_cross_route_checks("cross_route_psi", plate_neumann_via_psi(curve, u, C),
                                          pn_disp, tol))
    return checks


def _cross_route_checks(prefix, pn_a, pn_b, tol):
    scale = max(np.abs(pn_b.M_n).max(), np.abs(pn_b.M_t).max(), 1e-300)
    mn = np.abs(pn_a.M_n - pn_b.M_n).max() / scale
    spread = np.ptp(pn_a.M_t - pn_b.M_t) / scale
    return [_check(f"{prefix}_M_n", mn, tol), _check(f"{prefix}_M_t_spread", spread, tol)]


def cmd_verify(args) -> int:
    tol = _tol(args.tol, 1e-9)
    curve, data, C, truth = _load_fixture(args.fixture)
    checks = run_verify(curve, data, C, truth, tol)
    passed = all(c["passed"] for c in checks)
    print(_dumps({"fixture": str(args.fixture), "passed": passed, "checks": checks}))
    if not passed:
        failed = [c["name"] for c in checks if not c["passed"]]
        raise CliError(EXIT_FAILED, f"checks failed: {', '.join(failed)}", failed=failed)
    return EXIT_OK


def cmd_dichotomy(args) -> int:
    tol = _tol(args.tol, 1e-9)
    records = _read_json(args.input)
    if not isinstance(records, list):
        raise CliError(EXIT_INVALID, "dichotomy input must be a JSON array of {point, tensor}")
    try:
        samples = [(list(map(float, r["point"])), Tensor4.from_dict(r["tensor"])) for r in records]
        report = classify_field(samples, tol)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_INVALID, f"invalid dichotomy input: {exc}")
    text = _dumps(report.to_dict())
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    if not report.holds:
        raise CliError(EXIT_FAILED, "dichotomy condition violated", offending_points=report.offending)
    return EXIT_OK


def _format_value(v) -> str:
    if v is None:
        return "-"
    a = np.atleast_1d(np.asarray(v, dtype=float)).ravel()
    return " ".join(f"{x: .10e}" for x in a)


def cmd_nulllag(args) -> int:
    curve, data, C, truth = _load_fixture(args.fixture)
    if truth is None or C is None:
        raise CliError(EXIT_INVALID, "nulllag needs truth.json and tensor.json in the fixture")
    u = PolyField.from_dict(truth["u"])
    try:
        reports = null_lagrangian_reports(curve, data["plate-dirichlet"].grad_u(),
                                          data["elast-dirichlet"].v, u, C)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc))
    extra = {}
    if args.counterexample:
        desc = curve.descriptor
        if desc.get("type") != "circle" or desc["params"].get("radius", 1.0) != 1.0 or "center" in desc["params"]:
            raise CliError(EXIT_INVALID, "the counterexample needs the unit circle")
        ce = det_C_hessian_counterexample(curve, C)
        reports.extend(ce.reports())
        extra = {"separation": ce.separation, "control_gap": ce.control_gap,
                 "dirichlet_gap": ce.dirichlet_gap}
    if args.format == "json":
        print(_dumps([r.to_dict() for r in reports] + ([extra] if extra else [])))
    else:
        w = max(len(r.quantity) for r in reports)
        print(f"{'quantity':<{w}}  {'boundary':>40}  {'area':>40}  discrepancy")
        for r in reports:
            disc = "-" if r.discrepancy is None else f"{r.discrepancy:.3e}"
            print(f"{r.quantity:<{w}}  {_format_value(r.boundary_value):>40}  "
                  f"{_format_value(r.area_value):>40}  {disc}")
        for k, v in extra.items():
            print(f"{k} = {v:.17g}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_INVALID, message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="platekit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="convert one boundary dataset into its dual")
    c.add_argument("--from", dest="from_kind", required=True, choices=sorted(bd.DATASET_TYPES))
    c.add_argument("--to", dest="to_kind", required=True, choices=sorted(bd.DATASET_TYPES))
    c.add_argument("--curve", required=True, help="curve descriptor JSON or circle:R:N / ellipse:A:B:N")
    c.add_argument("--data", required=True, help="input dataset CSV")
    c.add_argument("--tensor", help="tensor JSON (recorded in the report only)")
    c.add_argument("--out", required=True, help="output dataset CSV")
    c.add_argument("--report", help="report JSON path (default: <out>.report.json)")
    c.add_argument("--tol", type=float, help="relative closure tolerance")
    c.set_defaults(func=cmd_convert)

    v = sub.add_parser("verify", help="roundtrip and cross-route checks on a fixture directory")
    v.add_argument("--fixture", required=True)
    v.add_argument("--tol", type=float)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="write a manufactured fixture directory")
    g.add_argument("--degree", type=int, default=3)
    g.add_argument("--tensor", default="isotropic:1,0.3", help="tensor JSON, isotropic:B,nu or random")
    g.add_argument("--curve", default="circle:1:256")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("dichotomy-check", help="classify a sampled compliance field")
    d.add_argument("--input", required=True, help="JSON array of {point, tensor}")
    d.add_argument("--out")
    d.add_argument("--tol", type=float)
    d.set_defaults(func=cmd_dichotomy)

    n = sub.add_parser("nulllag", help="boundary vs area null-Lagrangian averages for a fixture")
    n.add_argument("--fixture", required=True)
    n.add_argument("--format", choices=("json", "table"), default="json")
    n.add_argument("--counterexample", action="store_true",
                   help="add the <det C grad^2 u> pair on the unit disk")
    n.set_defaults(func=cmd_nulllag)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        payload = {"error": str(exc), "exit_code": exc.code}
        payload.update(exc.extra)
        sys.stderr.write(_dumps(payload) + "\n")
        return exc.code
    except (ValueError, OSError) as exc:
        sys.stderr.write(_dumps({"error": str(exc), "exit_code": EXIT_INVALID}) + "\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
