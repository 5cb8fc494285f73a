"""Command line front end: parse operator JSON, run constructions, emit reports.

Exit codes: 0 all verdicts pass, 1 a verdict failed (including divergence
and infeasibility reports), 2 invalid input, 3 budget exhausted.
"""

import argparse
import csv
import datetime
import json
import os
import sys

import numpy as np

from .errors import BudgetError, InputValidationError
from .numerics import op_norm
from .operators import Operator, operator_from_dict, operator_to_dict
from . import defect as defect_mod
from .shiftlift import build_bilateral_dilation, build_shift_lift
from .convexlift import build_convex_lift, iterate_tower, lmi_feasibility
from .vnfoguel import (
    FoguelSpec,
    ergodic_diagnostic,
    foguel_hankel_lift,
    foguel_power_report,
    unitary_extension_dilation,
    vn_check,
)

__all__ = ["main", "run"]

SCHEMA = 1


def _real(x):
    x = complex(x)
    return [x.real, x.imag]


def _matrix_payload(m):
    m = np.asarray(m, dtype=complex)
    return {"re": np.real(m).tolist(), "im": np.imag(m).tolist()}


def _operator_payload(op):
    if isinstance(op, Operator):
        return operator_to_dict(op)
    return {"kind": "dense", **_matrix_payload(op)}


def _load_operator(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputValidationError(f"cannot read operator JSON {path}: {exc}")
    return operator_from_dict(data)


def _emit(report, out_path, verdict):
    report = dict(report)
    report["schema"] = SCHEMA
    report["verdict"] = bool(verdict)
    report["threads"] = os.environ.get("ISOLAB_THREADS")
    body = json.dumps(report, sort_keys=True, indent=2, default=str)
    stamped = dict(report)
    stamped["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(stamped, sort_keys=True, indent=2, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(body + "\n")
    return 0 if verdict else 1


def _write_csv(path, header, rows):
    if not path:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_defect(args):
    op = _load_operator(args.input)
    rep = defect_mod.is_m_isometric(op, args.order, tol=args.tol)
    return _emit(
        {
            "command": "defect",
            "order": rep.order,
            "defect_norm_interior": rep.defect_norm_interior,
            "interior_dim": rep.interior_dim,
            "tol": rep.tol,
            "seed": args.seed,
        },
        args.out,
        rep.verdict,
    )


def _cmd_classify(args):
    op = _load_operator(args.input)
    cls = defect_mod.classify(op, tol=args.tol)
    return _emit(
        {
            "command": "classify",
            "classes": sorted(cls.as_set()),
            "growth_K": cls.growth_K,
            "seed": args.seed,
        },
        args.out,
        True,
    )


def _cmd_lift_shift(args):
    op = _load_operator(args.input)
    cert = build_shift_lift(op, args.m, args.trunc)
    ok = (
        cert.iso_residual <= args.tol
        and cert.intertwine_residual <= args.tol
        and cert.defect_norm <= args.tol
        and cert.expansive_margin >= -args.tol
    )
    return _emit(
        {
            "command": "lift shift",
            "m": args.m,
            "defect_order": cert.defect_order,
            "K": cert.plan.K,
            "q": cert.plan.q,
            "tail_bound": cert.plan.tail_bound,
            "iso_residual": cert.iso_residual,
            "intertwine_residual": cert.intertwine_residual,
            "defect_norm_interior": cert.defect_norm,
            "expansive_margin": cert.expansive_margin,
            "lift": _operator_payload(cert.lift),
            "embedding": _matrix_payload(cert.embedding),
            "seed": args.seed,
        },
        args.out,
        ok,
    )


def _cmd_lift_convex(args):
    op = _load_operator(args.input)
    result = iterate_tower(op, args.steps, target=args.target)
    rows = [
        (st.level, st.dim, st.defect2_norm, st.growth_c) for st in result.states
    ]
    _write_csv(args.csv, ["level", "dim", "defect2_norm", "growth_c"], rows)
    payload = {
        "command": "lift convex",
        "steps": args.steps,
        "target": result.target,
        "diverging": result.diverging,
        "converged": result.converged,
        "levels": rows,
        "seed": args.seed,
    }
    if result.diverging:
        payload["note"] = "squared power norms grow superlinearly; tower refused"
        return _emit(payload, args.out, False)
    return _emit(payload, args.out, result.converged)


def _cmd_lift_foguel(args):
    try:
        with open(args.input) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputValidationError(f"cannot read operator JSON {args.input}: {exc}")
    if data.get("kind") != "block" or len(data.get("blocks", [])) != 2:
        raise InputValidationError("lift foguel expects a 2x2 block operator JSON")
    (b00, b01), (_, b11) = data["blocks"]
    c0 = operator_from_dict(b00)
    c = operator_from_dict(b01).matrix
    c1 = operator_from_dict(b11)
    cert = foguel_hankel_lift(c0.matrix, c, c1.matrix, args.trunc, tol=args.tol)
    ok = (
        cert.q_square_norm == 0.0
        and cert.commutator_norm <= args.tol
        and cert.defect3_interior <= args.tol
        and cert.lifting_residual <= args.tol
        and cert.commutant.norm_excess <= args.tol
    )
    return _emit(
        {
            "command": "lift foguel",
            "q_square_norm": cert.q_square_norm,
            "commutator_norm": cert.commutator_norm,
            "defect3_interior": cert.defect3_interior,
            "lifting_residual": cert.lifting_residual,
            "commutant_norm_excess": cert.commutant.norm_excess,
            "lift": _operator_payload(cert.lift),
            "embedding": _matrix_payload(cert.embedding),
            "seed": args.seed,
        },
        args.out,
        ok,
    )


def _cmd_dilate(args):
    op = _load_operator(args.input)
    if args.kind == "unitary":
        rep = unitary_extension_dilation(op, args.trunc, n_max=args.power, tol=args.tol)
        return _emit(
            {
                "command": "dilate",
                "kind": "unitary",
                "unitary_residual": rep.unitary_residual,
                "power_residuals": rep.power_residuals,
                "seed": args.seed,
            },
            args.out,
            rep.verdict,
        )
    cert = build_bilateral_dilation(
        op, args.m, args.trunc, args.power, exponent=args.exponent
    )
    ok = cert.iso_residual <= args.tol and max(cert.power_residuals) <= args.tol
    return _emit(
        {
            "command": "dilate",
            "kind": "bilateral",
            "m": args.m,
            "exponent_used": cert.exponent_used,
            "K": cert.plan.K,
            "iso_residual": cert.iso_residual,
            "power_residuals": cert.power_residuals,
            "min_weight_sq": cert.min_weight_sq,
            "seed": args.seed,
        },
        args.out,
        ok,
    )


def _parse_poly(text):
    try:
        coeffs = json.loads(text)
    except json.JSONDecodeError:
        raise InputValidationError(f"polynomial must be a JSON list, got {text!r}")
    if not isinstance(coeffs, list) or not coeffs:
        raise InputValidationError("polynomial must be a nonempty list")
    out = []
    for c in coeffs:
        if isinstance(c, list):
            out.append(complex(c[0], c[1]))
        else:
            out.append(complex(c))
    return out


def _cmd_vn(args):
    op = _load_operator(args.input)
    coeffs = _parse_poly(args.poly)
    sweep = [int(x) for x in args.sweep.split(",")]
    rep = vn_check(coeffs, op, args.K, sweep, tol=args.tol)
    _write_csv(args.csv, ["N", "shift_norm"], list(zip(rep.sweep, rep.shift_norms)))
    return _emit(
        {
            "command": "vn",
            "poly_norm": rep.poly_norm,
            "shift_norms": rep.shift_norms,
            "sweep": rep.sweep,
            "K": rep.K,
            "power_sup": rep.power_sup,
            "monotone": rep.monotone,
            "seed": args.seed,
        },
        args.out,
        rep.verdict,
    )


def _cmd_foguel_power(args):
    spec = FoguelSpec(args.n_param, args.trunc, args.k_max)
    rep = foguel_power_report(spec, n_max=args.n_max, tol=args.tol)
    rows = [
        (n + 1, rep.power_norms[n], rep.hankel_norms[n])
        for n in range(len(rep.power_norms))
    ]
    _write_csv(args.csv, ["n", "power_norm", "hankel_norm"], rows)
    return _emit(
        {
            "command": "foguel-power",
            "n_param": args.n_param,
            "k_max": args.k_max,
            "trunc": args.trunc,
            "bound": rep.bound,
            "sup_power_norm": max(rep.power_norms),
            "sup_hankel_norm": max(rep.hankel_norms),
            "seed": args.seed,
        },
        args.out,
        rep.verdict,
    )


def _cmd_ergodic(args):
    op = _load_operator(args.input)
    rep = ergodic_diagnostic(op, n_max=args.n_max)
    rows = [
        (n + 1, rep.cesaro_norms[n], rep.difference_norms[n])
        for n in range(len(rep.cesaro_norms))
    ]
    _write_csv(args.csv, ["n", "cesaro_norm", "difference_norm"], rows)
    return _emit(
        {
            "command": "ergodic",
            "cesaro_vanishing": rep.cesaro_vanishing,
            "difference_vanishing": rep.difference_vanishing,
            "eigenvalues": [_real(z) for z in rep.eigenvalues],
            "spectrum_compatible": rep.spectrum_compatible,
            "seed": args.seed,
        },
        args.out,
        True,
    )


def _common(p):
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.add_argument("--csv", default=None, help="write a CSV table here, where applicable")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0, help="recorded for reproducibility")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="isolab", description="numerical lifting and dilation laboratory"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("defect", help="m-isometry defect check")
    p.add_argument("--input", required=True)
    p.add_argument("--order", type=int, required=True)
    _common(p)
    p.set_defaults(fn=_cmd_defect)

    p = sub.add_parser("classify", help="operator class predicates")
    p.add_argument("--input", required=True)
    _common(p)
    p.set_defaults(fn=_cmd_classify)

    lift = sub.add_parser("lift", help="lifting constructions")
    lsub = lift.add_subparsers(dest="mode", required=True)

    p = lsub.add_parser("shift", help="weighted shift lifting of order m+3")
    p.add_argument("--input", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--trunc", type=int, default=256)
    _common(p)
    p.set_defaults(fn=_cmd_lift_shift)

    p = lsub.add_parser("convex", help="doubling tower for convex operators")
    p.add_argument("--input", required=True)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--target", type=float, default=1e-6)
    _common(p)
    p.set_defaults(fn=_cmd_lift_convex)

    p = lsub.add_parser("foguel", help="3-isometric lifting of a 2x2 block operator")
    p.add_argument("--input", required=True)
    p.add_argument("--trunc", type=int, default=16)
    _common(p)
    p.set_defaults(fn=_cmd_lift_foguel)

    p = sub.add_parser("dilate", help="power dilations")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("bilateral", "unitary"), default="bilateral")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--trunc", type=int, default=128)
    p.add_argument("--power", type=int, default=8)
    p.add_argument("--exponent", type=int, default=None)
    _common(p)
    p.set_defaults(fn=_cmd_dilate)

    p = sub.add_parser("vn", help="polynomial calculus check against the extremal shift")
    p.add_argument("--input", required=True)
    p.add_argument("--poly", required=True, help="JSON list of coefficients, ascending")
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--sweep", default="64,128,256")
    _common(p)
    p.set_defaults(fn=_cmd_vn)

    p = sub.add_parser("foguel-power", help="power norms of the Foguel operator")
    p.add_argument("--n-param", type=int, default=4)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--trunc", type=int, default=100)
    p.add_argument("--n-max", type=int, default=60)
    _common(p)
    p.set_defaults(fn=_cmd_foguel_power)

    p = sub.add_parser("ergodic", help="ergodicity diagnostics for I - T coupling")
    p.add_argument("--input", required=True)
    p.add_argument("--n-max", type=int, default=60)
    _common(p)
    p.set_defaults(fn=_cmd_ergodic)

    return parser


def run(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputValidationError as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return 2
    except BudgetError as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return 3


def main():
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
