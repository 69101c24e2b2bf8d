"""Command-line front end: case files in, field/report files out.

Cases are JSON documents describing the data triple (f, h, g) plus optional
quadrature overrides and a sampling seed:

    {
      "schema": 1,
      "f": {"fourier": [[1, 1.0, 0.0]]},
      "h": {"samples": [[0.0, 0.0], ...]},
      "g": {"terms": [[0, 0, 4.0, 0.0]]},
      "quadrature": {"circle_nodes": 512},
      "seed": 42
    }

Fourier coefficients are [mode, re, im] triples, monomial loads are
[a, b, re, im] quadruples, and every omitted field defaults to zero data.
Unknown keys anywhere are rejected. Output files are written atomically
(temp file then rename) with sorted keys and shortest round-trip floats,
so identical inputs produce byte-identical files.

Commands: identities, solve, verify, lipschitz, kernel. Exit status is 0
only on full success; malformed input exits 2, failed checks and policy
violations exit 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

from . import __version__, green, kernels, lipschitz, verify
from .errors import (
    CaseFormatError,
    DegenerateDataError,
    DomainError,
    FingerprintMismatchError,
    ResolutionPolicyError,
    SingularityError,
)
from .quadrature import CircleRule, DiskRule, RuleSet
from .solver import BoundaryData, SourceTerm, solve_grid

_SCHEMA = 1

# default interior points for the gradient crosscheck
_CROSSCHECK_POINTS = (0.3 + 0.2j, -0.4 + 0j, 0.5j)

# default radii for the boundary trace checks
_TRACE_RADII = (0.98, 0.99)

# grid used to sample the empirical difference quotient
_QUOTIENT_GRID = (40, 80, 0.95)


@dataclass(eq=False)
class CaseFile:
    """A parsed case: data triple, quadrature rules, sampling seed."""

    f: BoundaryData
    h: BoundaryData
    g: SourceTerm
    rules: RuleSet
    seed: int


def _require_keys(doc: dict, allowed: set, where: str):
    unknown = set(doc) - allowed
    if unknown:
        raise CaseFormatError(
            f"unknown key {sorted(unknown)[0]!r} in {where}"
        )


def _parse_boundary(doc, where: str) -> BoundaryData:
    if doc is None:
        return BoundaryData.zero()
    if not isinstance(doc, dict):
        raise CaseFormatError(f"{where} must be an object")
    _require_keys(doc, {"fourier", "samples", "n_samples"}, where)
    if "fourier" in doc and "samples" in doc:
        raise CaseFormatError(f"{where} cannot give both fourier and samples")
    n_samples = doc.get("n_samples", 512)
    if not isinstance(n_samples, int) or n_samples < 4 or n_samples % 2:
        raise CaseFormatError(f"{where}.n_samples must be an even integer >= 4")
    if "samples" in doc:
        if "n_samples" in doc:
            raise CaseFormatError(f"{where}.n_samples conflicts with samples")
        rows = doc["samples"]
        try:
            values = [complex(float(re), float(im)) for re, im in rows]
        except (TypeError, ValueError) as exc:
            raise CaseFormatError(f"{where}.samples must be [re, im] pairs") from exc
        try:
            return BoundaryData(values)
        except DegenerateDataError as exc:
            raise CaseFormatError(f"{where}.samples: {exc}") from exc
    modes = []
    for row in doc.get("fourier", ()):
        try:
            m, re, im = row
            modes.append((int(m), complex(float(re), float(im))))
        except (TypeError, ValueError) as exc:
            raise CaseFormatError(
                f"{where}.fourier must be [mode, re, im] triples") from exc
    try:
        return BoundaryData.from_fourier(modes, n_samples)
    except DegenerateDataError as exc:
        raise CaseFormatError(f"{where}.fourier: {exc}") from exc


def _parse_source(doc, where: str) -> SourceTerm:
    if doc is None:
        return SourceTerm.zero()
    if not isinstance(doc, dict):
        raise CaseFormatError(f"{where} must be an object")
    _require_keys(doc, {"terms"}, where)
    terms = []
    for row in doc.get("terms", ()):
        try:
            a, b, re, im = row
            a, b = int(a), int(b)
        except (TypeError, ValueError) as exc:
            raise CaseFormatError(
                f"{where}.terms must be [a, b, re, im] quadruples") from exc
        if a < 0 or b < 0:
            raise CaseFormatError(f"negative exponent in {where}.terms")
        terms.append((a, b, complex(float(re), float(im))))
    try:
        return SourceTerm(terms)
    except DomainError as exc:
        raise CaseFormatError(f"{where}.terms: {exc}") from exc


def _parse_rules(doc) -> RuleSet:
    if doc is None:
        return RuleSet()
    if not isinstance(doc, dict):
        raise CaseFormatError("quadrature must be an object")
    _require_keys(doc, {"circle_nodes", "radial_nodes", "angular_nodes"}, "quadrature")
    for key in doc:
        if not isinstance(doc[key], int) or doc[key] < 1:
            raise CaseFormatError(f"quadrature.{key} must be a positive integer")
    try:
        circle = CircleRule(doc.get("circle_nodes", 512))
        disk = DiskRule(
            n_radial=doc.get("radial_nodes", 128),
            n_angular=doc.get("angular_nodes", 256),
        )
    except DomainError as exc:
        raise CaseFormatError(f"quadrature: {exc}") from exc
    return RuleSet(circle=circle, disk=disk)


def parse_case_dict(doc: dict) -> CaseFile:
    """Validate and build a CaseFile from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise CaseFormatError("case file must contain a JSON object")
    _require_keys(doc, {"schema", "f", "h", "g", "quadrature", "seed"}, "case")
    if doc.get("schema", _SCHEMA) != _SCHEMA:
        raise CaseFormatError(f"unsupported schema {doc.get('schema')!r}")
    seed = doc.get("seed", 42)
    if not isinstance(seed, int):
        raise CaseFormatError("seed must be an integer")
    return CaseFile(
        f=_parse_boundary(doc.get("f"), "f"),
        h=_parse_boundary(doc.get("h"), "h"),
        g=_parse_source(doc.get("g"), "g"),
        rules=_parse_rules(doc.get("quadrature")),
        seed=seed,
    )


def parse_case(path: str) -> CaseFile:
    """Load and validate a case file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CaseFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")
    return parse_case_dict(doc)


def serialize_case(case: CaseFile) -> dict:
    """Canonical JSON document for a case (samples form, explicit keys)."""
    return {
        "schema": _SCHEMA,
        "f": {"samples": [[v.real, v.imag] for v in case.f.samples]},
        "h": {"samples": [[v.real, v.imag] for v in case.h.samples]},
        "g": {"terms": [[a, b, c.real, c.imag] for a, b, c in case.g.terms]},
        "quadrature": {
            "circle_nodes": case.rules.circle.n_nodes,
            "radial_nodes": case.rules.disk.n_radial,
            "angular_nodes": case.rules.disk.n_angular,
        },
        "seed": case.seed,
    }


def _atomic_write_json(path: str, doc) -> None:
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".partial-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value: complex) -> str:
    value = complex(value)
    if value.imag == 0.0:
        return f"{value.real:.12g}"
    return f"{value.real:.12g}{value.imag:+.12g}j"


def _print_checks(checks, out=None) -> bool:
    out = out or sys.stdout
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        print(
            f"{c.name:<{width}}  {c.kind:<8}  computed={_fmt(c.computed):<22}  "
            f"expected={_fmt(c.expected):<22}  margin={c.margin: .3e}  {status}",
            file=out,
        )
    passed = sum(c.passed for c in checks)
    print(f"{passed}/{len(checks)} checks passed", file=out)
    return passed == len(checks)


def _report_doc(checks) -> dict:
    return {
        "schema": _SCHEMA,
        "tool_version": __version__,
        "checks": [c.as_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }


def cmd_identities(args) -> int:
    rules = RuleSet()
    checks = verify.identity_suite(rules, tolerance=args.tol)
    checks += verify.bound_suite(rules, tolerance=1e-6 if args.tol is None else args.tol)
    ok = _print_checks(checks)
    if args.json:
        _atomic_write_json(args.json, _report_doc(checks))
    return 0 if ok else 1


def cmd_solve(args) -> int:
    case = parse_case(args.case)
    try:
        n_r, n_theta = (int(part) for part in args.grid.split(","))
    except ValueError:
        raise CaseFormatError("--grid expects NR,NT with integer sizes")
    field = solve_grid(
        case.f, case.h, case.g, n_r, n_theta,
        rules=case.rules, r_max=args.r_max, with_gradient=args.gradient,
    )
    columns = ["r", "theta", "re", "im"]
    if args.gradient:
        columns += ["dz_re", "dz_im", "dzb_re", "dzb_im"]
    rows = []
    for i, r in enumerate(field.radii):
        for j, th in enumerate(field.thetas):
            v = field.values[i, j]
            row = [float(r), float(th), v.real, v.imag]
            if args.gradient:
                dz, dzb = field.d_z[i, j], field.d_zbar[i, j]
                row += [dz.real, dz.imag, dzb.real, dzb.imag]
            rows.append(row)
    doc = {
        "schema": _SCHEMA,
        "case_fingerprint": field.fingerprint,
        "tool_version": __version__,
        "n_r": field.n_r,
        "n_theta": field.n_theta,
        "r_max": field.r_max,
        "columns": columns,
        "rows": rows,
        "failures": [[i, j, msg] for i, j, msg in field.failures],
    }
    _atomic_write_json(args.out, doc)
    if field.failures:
        print(f"{len(field.failures)} nodes failed to evaluate", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    case = parse_case(args.case)
    checks = [verify.fd_bilaplacian_residual(case, args.fd_h, rules=case.rules)]
    checks += verify.boundary_trace_check(case, _TRACE_RADII, rules=case.rules)
    checks += verify.gradient_crosscheck(case, _CROSSCHECK_POINTS, rules=case.rules)
    ok = _print_checks(checks)
    if args.json:
        _atomic_write_json(args.json, _report_doc(checks))
    return 0 if ok else 1


def cmd_lipschitz(args) -> int:
    case = parse_case(args.case)
    report, ab = lipschitz.analyze_case(case.f, case.h, case.g, case.rules)
    n_r, n_theta, r_max = _QUOTIENT_GRID
    field = solve_grid(case.f, case.h, case.g, n_r, n_theta,
                       rules=case.rules, r_max=r_max)
    quotient = lipschitz.empirical_quotient(field, seed=case.seed)
    print(f"L (boundary Lipschitz estimate) = {report.l_boundary:.12g}")
    print(f"sup|h|                          = {report.h_sup:.12g}")
    print(f"sup|g| (certified bound)        = {report.g_sup:.12g}")
    print(f"sup|g| (grid estimate)          = {report.g_sup_estimate:.12g}")
    print(f"P (gradient bound)              = {report.p_upper:.12g}")
    print(f"A = |Phi_z(0)|^2                = {report.a_value:.12g}")
    print(f"B = |Phi_zbar(0)|^2             = {report.b_value:.12g}")
    print(f"Q = A - B                       = {report.q_value:.12g}")
    print(f"A (integral form)               = {ab.a_integral:.12g}")
    print(f"B (integral form)               = {ab.b_integral:.12g}")
    print(f"upper bound                     = {report.upper_bound:.12g}")
    print(f"lower bound                     = {report.lower_bound:.12g}")
    print(f"empirical quotient              = {quotient:.12g}")
    print(f"verdict: {report.verdict}")
    return 0


def cmd_kernel(args) -> int:
    z = _parse_complex(args.z, "--z")
    if args.which == "G":
        if args.zeta is None:
            raise CaseFormatError("kernel G needs --zeta")
        zeta = _parse_complex(args.zeta, "--zeta")
        value = complex(green.g_eval(z, zeta))
    elif args.which == "F0":
        value = complex(kernels.f0_eval(z))
    else:
        value = complex(kernels.h0_eval(z))
    print(json.dumps(
        {"which": args.which, "z": [z.real, z.imag], "value": [value.real, value.imag]},
        sort_keys=True,
    ))
    return 0


def _parse_complex(text: str, flag: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise CaseFormatError(f"{flag} expects RE,IM")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise CaseFormatError(f"{flag} expects numeric RE,IM")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biharmonic-disk",
        description="Solve and verify the disk biharmonic Dirichlet problem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identities", help="run the identity and bound checks")
    p.add_argument("--tol", type=float, default=None,
                   help="override every check tolerance")
    p.add_argument("--json", default=None, help="also write a JSON report")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("solve", help="solve a case on a polar grid")
    p.add_argument("--case", required=True)
    p.add_argument("--grid", required=True, metavar="NR,NT")
    p.add_argument("--gradient", action="store_true",
                   help="include Wirtinger gradient columns")
    p.add_argument("--r-max", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="residual, trace, and gradient checks on a case")
    p.add_argument("--case", required=True)
    p.add_argument("--fd-h", type=float, default=0.02,
                   help="finite-difference spacing")
    p.add_argument("--json", default=None, help="also write a JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lipschitz", help="distortion constants and verdict")
    p.add_argument("--case", required=True)
    p.set_defaults(func=cmd_lipschitz)

    p = sub.add_parser("kernel", help="evaluate a kernel at a point")
    p.add_argument("--which", required=True, choices=["F0", "H0", "G"])
    p.add_argument("--z", required=True, metavar="RE,IM")
    p.add_argument("--zeta", default=None, metavar="RE,IM")
    p.set_defaults(func=cmd_kernel)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except CaseFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, DegenerateDataError, SingularityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ResolutionPolicyError, FingerprintMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
