"""Command-line front end.

Subcommands: height (global pairing from a JSON job), frobenius (matrix,
characteristic polynomial, cup Gram matrix), integrate (Coleman integral
between two points), check (self-check suites with TSV/CSV/PNG reports).

All output is JSON (or TSV for check reports) and deterministic: the same
job produces byte-identical output.  Exit codes: 0 success, 1 internal
error, 2 scope error (input outside the supported domain), 64 usage or
malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .coleman import ColemanContext, coleman_integral
from .curve import CurvePoint, Divisor, HyperellipticCurve, ThirdKindForm, third_kind_with_residue
from .errors import PadicHeightsError, ScopeError
from .heights import HeightResult, IdeleCharacter, global_height, validate_character
from .padic import LogBranch, PadicNumber
from .poly import parse_poly
from .reports import SUITES, render_report, run_suite, write_tsv
from .rigidcoh import (
    Subspace,
    frobenius_matrix,
    unit_root_subspace,
)

EX_OK = 0
EX_INTERNAL = 1
EX_SCOPE = 2
EX_USAGE = 64


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_curve(spec) -> HyperellipticCurve:
    if isinstance(spec, dict):
        return HyperellipticCurve.from_json(spec)
    return HyperellipticCurve(parse_poly(spec))


def _parse_point(curve, spec) -> CurvePoint:
    if isinstance(spec, str) and spec.strip().lower() in ("infinity", "inf"):
        return curve.infinity()
    if isinstance(spec, str):
        spec = json.loads(spec)
    return CurvePoint.from_json(curve, spec)


def _parse_divisor(curve, spec) -> Divisor:
    if isinstance(spec, str):
        spec = json.loads(spec)
    return Divisor.from_json(curve, spec)


def _parse_subspace(spec, fd) -> Subspace:
    if spec is None or spec == "unit-root":
        return unit_root_subspace(fd)
    if isinstance(spec, str):
        spec = json.loads(spec)
    vectors = []
    for vec in spec:
        vectors.append([PadicNumber.from_rational(Fraction(c), fd.p, fd.work_prec)
                        for c in vec])
    return Subspace(vectors, "explicit")


def _parse_character(spec, p: int, precision: int) -> IdeleCharacter:
    if spec is None:
        return IdeleCharacter.canonical(p, precision)
    t = Fraction(spec.get("t", 1))
    branch = LogBranch.from_rational(Fraction(spec.get("branch", 0)), p, precision)
    overrides = {int(q): Fraction(v)
                 for q, v in (spec.get("overrides") or {}).items()}
    return IdeleCharacter(p, precision, t, branch, overrides)


def _height_job(args) -> dict:
    if args.json:
        with open(args.json) as fh:
            return json.load(fh)
    job = {
        "curve": {"f": None},
        "p": args.p,
        "precision": args.prec,
    }
    if not (args.curve and args.p and args.divisor_y and args.divisor_z):
        raise _Usage("height needs --json or --curve/--p/--divisor-y/--divisor-z")
    job["curve"] = args.curve
    job["divisor_y"] = json.loads(args.divisor_y)
    job["divisor_z"] = json.loads(args.divisor_z)
    if args.w:
        job["W"] = args.w if args.w == "unit-root" else json.loads(args.w)
    if args.t is not None or args.branch is not None:
        job["character"] = {"t": args.t or "1", "branch": args.branch or "0"}
    return job


class _Usage(Exception):
    pass


def cmd_height(args) -> int:
    job = _height_job(args)
    curve = _parse_curve(job["curve"])
    p = int(job["p"])
    precision = int(job.get("precision", 8))
    y = _parse_divisor(curve, job["divisor_y"])
    z = _parse_divisor(curve, job["divisor_z"])
    chi = _parse_character(job.get("character"), p, precision)
    validate_character(chi)
    cache_dir = os.environ.get("PADICHEIGHTS_CACHE")
    fd = frobenius_matrix(curve, p, precision, cache_dir=cache_dir)
    ctx = ColemanContext(curve, p, precision, chi.branch, fd)
    W = _parse_subspace(job.get("W"), fd)
    result = global_height(y, z, W, chi, ctx)
    _emit(result.to_json(), args.out)
    return EX_OK


def cmd_frobenius(args) -> int:
    curve = _parse_curve(args.curve)
    cache_dir = args.cache_dir or os.environ.get("PADICHEIGHTS_CACHE")
    fd = frobenius_matrix(curve, args.p, args.prec, cache_dir=cache_dir,
                          need_certificates=False)
    payload = {
        "curve": curve.to_json(),
        "p": args.p,
        "precision": args.prec,
        "matrix": [[e.to_json() for e in row] for row in fd.matrix],
        "charpoly": fd.charpoly_int(),
        "gram": [[str(c) for c in row] for row in fd.gram],
        "precision_report": {"measured_loss": fd.measured_loss(),
                             "work_precision": fd.work_prec},
    }
    _emit(payload, args.out)
    return EX_OK


def cmd_integrate(args) -> int:
    curve = _parse_curve(args.curve)
    p, precision = args.p, args.prec
    fd = frobenius_matrix(curve, p, precision)
    branch = LogBranch.from_rational(Fraction(args.branch or 0), p, precision)
    ctx = ColemanContext(curve, p, precision, branch, fd)
    hol = json.loads(args.holomorphic) if args.holomorphic else None
    hol = [Fraction(c) for c in hol] if hol else None
    if args.residue_divisor:
        D = _parse_divisor(curve, args.residue_divisor)
        if args.w:
            from .rigidcoh import omega_w
            form = omega_w(D, _parse_subspace(args.w, fd), fd)
        else:
            form = third_kind_with_residue(D)
        if hol:
            form = form.with_hol([a + b for a, b in zip(form.hol, hol)])
    else:
        if not hol:
            raise _Usage("integrate needs --holomorphic and/or --residue-divisor")
        form = ThirdKindForm(curve, hol)
    P = _parse_point(curve, getattr(args, "from"))
    Q = _parse_point(curve, args.to)
    value = coleman_integral(form, P, Q, ctx)
    _emit({"value": value.to_json(),
           "from": P.to_json(), "to": Q.to_json()}, args.out)
    return EX_OK


def cmd_check(args) -> int:
    if args.suite not in SUITES:
        sys.stderr.write(f"unknown suite {args.suite!r}; "
                         f"choose from {sorted(SUITES)}\n")
        return EX_USAGE
    report = run_suite(args.suite, seed=args.seed, p=args.p, precision=args.prec)
    write_tsv(report, sys.stdout)
    if args.out_dir:
        csv_path, png_path = render_report(report, args.out_dir)
        sys.stdout.write(f"wrote {csv_path}\nwrote {png_path}\n")
    return EX_OK if report.passed else EX_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="padicheights",
        description="p-adic height pairings on odd hyperelliptic curves over Q")
    sub = ap.add_subparsers(dest="command", required=True)

    h = sub.add_parser("height", help="global height pairing from a JSON job")
    h.add_argument("--json", help="job file (curve, p, precision, divisors, W, character)")
    h.add_argument("--curve", help="polynomial f, e.g. 'x^3 - x + 1'")
    h.add_argument("--p", type=int)
    h.add_argument("--prec", type=int, default=8)
    h.add_argument("--divisor-y", dest="divisor_y")
    h.add_argument("--divisor-z", dest="divisor_z")
    h.add_argument("--w", help="'unit-root' or JSON basis")
    h.add_argument("--t", help="character scalar t (default 1)")
    h.add_argument("--branch", help="branch constant log(p) (default 0)")
    h.add_argument("--out")
    h.set_defaults(fn=cmd_height)

    f = sub.add_parser("frobenius", help="Frobenius matrix and cup Gram matrix")
    f.add_argument("--curve", required=True)
    f.add_argument("--p", type=int, required=True)
    f.add_argument("--prec", type=int, default=8)
    f.add_argument("--cache-dir")
    f.add_argument("--out")
    f.set_defaults(fn=cmd_frobenius)

    i = sub.add_parser("integrate", help="Coleman integral between two points")
    i.add_argument("--curve", required=True)
    i.add_argument("--p", type=int, required=True)
    i.add_argument("--prec", type=int, default=8)
    i.add_argument("--from", required=True,
                   help="point JSON {\"x\":..,\"y\":..} or 'infinity'")
    i.add_argument("--to", required=True)
    i.add_argument("--holomorphic", help="JSON vector against x^i dx/(2y)")
    i.add_argument("--residue-divisor", dest="residue_divisor",
                   help="divisor JSON; integrand has this residue divisor")
    i.add_argument("--w", help="normalize via omega_W: 'unit-root' or basis")
    i.add_argument("--branch", help="branch constant (default 0 = Iwasawa)")
    i.add_argument("--out")
    i.set_defaults(fn=cmd_integrate)

    c = sub.add_parser("check", help="run a self-check suite")
    c.add_argument("suite", help="|".join(sorted(SUITES)))
    c.add_argument("--p", type=int, default=5)
    c.add_argument("--prec", type=int, default=8)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out-dir", dest="out_dir",
                   help="write CSV and PNG report files here")
    c.set_defaults(fn=cmd_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EX_USAGE if e.code not in (0, None) else EX_OK
    try:
        return args.fn(args)
    except _Usage as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EX_USAGE
    except (json.JSONDecodeError, KeyError, ValueError) as e:
        sys.stderr.write(f"malformed input: {type(e).__name__}: {e}\n")
        return EX_USAGE
    except ScopeError as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return EX_SCOPE
    except PadicHeightsError as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return EX_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
