"""Single entry-point command line: one subcommand per module.

All structured I/O is JSON tagged "schema": "fdiv/1" (see jsonio for the
document formats); ``--table`` switches to an aligned human-readable
rendering.  Exit codes: 0 success, 1 a mathematical check failed or the
computation rejected its input, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import jsonio
from .bundle_p1 import (
    BundleP1,
    birkhoff_split_factors,
    cech_h,
    check_h0_decreasing,
    check_numerical_triviality,
    euler_char,
    fdiv_rigidity,
)
from .dcohomology import CohomologyTowerSet, dcoh_dims, finiteness_report
from .diffops import DividedOperator, apply as op_apply, compose
from .dmod_affine import (
    dmod_from_tower,
    extract_level,
    h1d_affine_witness,
    validate_dmodule,
)
from .errors import FdivError, InvalidTower
from .fields import FieldSpec, binom_mod_p
from .laurent import LaurentMatrix, LaurentPoly
from .spectral import bound_edge, bound_upper, simulate
from .towers import bound_check, check_ML, lim_dim, r1lim_dim, stable_subspace
from .verify import ALL_CHECKS, run_checks


@dataclass
class RunConfig:
    field: FieldSpec | None
    seed: int
    cap: int
    mode: str  # "json" | "table"


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as ex:
        raise UsageError(f"cannot read {path}: {ex.strerror}") from ex
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise UsageError(
            f"{path}: malformed JSON at line {ex.lineno}, column {ex.colno}: {ex.msg}"
        ) from ex


def _field_of(args, doc=None) -> FieldSpec:
    if doc and isinstance(doc, dict) and "field" in doc:
        return jsonio.field_from_json(doc["field"])
    if getattr(args, "field", None):
        try:
            return jsonio.field_from_json(json.loads(args.field))
        except json.JSONDecodeError as ex:
            raise UsageError(f"--field: malformed JSON: {ex.msg}") from ex
    raise UsageError("no field given: embed \"field\" in the document or pass --field")


def _render_table(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k in obj:
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k):<{width}}  {_flat(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}[{i}]")
                lines.append(_render_table(v, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(v)}")
    else:
        lines.append(f"{pad}{_flat(obj)}")
    return "\n".join(lines)


def _is_flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _flat(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _emit(payload: dict, mode: str):
    payload = {"schema": jsonio.SCHEMA, **payload}
    if mode == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(_render_table(payload))


# -- subcommand handlers -----------------------------------------------------


def _cmd_diffop(args, cfg: RunConfig) -> int:
    if args.action == "apply":
        doc = _load(args.op)
        fs = _field_of(args, doc)
        op = jsonio.operator_from_json(fs, doc.get("operator", doc))
        pdoc = _load(args.poly)
        f = jsonio.poly_from_json(fs, pdoc.get("poly", pdoc))
        out = op_apply(op, f)
        _emit({"command": "diffop apply", "result": jsonio.poly_to_json(out)}, cfg.mode)
        return 0
    if args.action == "compose":
        adoc, bdoc = _load(args.a), _load(args.b)
        fs = _field_of(args, adoc)
        a = jsonio.operator_from_json(fs, adoc.get("operator", adoc))
        b = jsonio.operator_from_json(fs, bdoc.get("operator", bdoc))
        c = compose(a, b)
        _emit(
            {"command": "diffop compose", "operator": jsonio.operator_to_json(c)},
            cfg.mode,
        )
        return 0
    # check-relations
    fs = FieldSpec(args.p)
    failures = []
    top = args.max_order
    for k in range(top + 1):
        for l in range(top + 1):
            got = compose(
                DividedOperator.basis(fs, k), DividedOperator.basis(fs, l), check=False
            )
            want = DividedOperator(
                fs, {k + l: LaurentPoly.constant(fs, binom_mod_p(k + l, k, args.p))}
            )
            if got != want:
                failures.append([k, l])
    for m in range(args.max_degree + 1):
        xm = LaurentPoly.x_power(fs, m)
        dx = DividedOperator.mult_by(fs, LaurentPoly.x_power(fs, 1))
        d1 = DividedOperator.basis(fs, 1)
        comm = compose(d1, dx, check=False) - compose(dx, d1, check=False)
        if op_apply(comm, xm) != xm:
            failures.append(["commutator", m])
    payload = {
        "command": "diffop check-relations",
        "p": args.p,
        "max_order": top,
        "passed": not failures,
        "failures": failures,
    }
    _emit(payload, cfg.mode)
    return 0 if not failures else 1


def _cmd_dmod(args, cfg: RunConfig) -> int:
    if args.action == "witness":
        w = h1d_affine_witness(args.p, args.degree)
        _emit(
            {"command": "dmod witness", "p": args.p, "degree": args.degree, "witness": w},
            cfg.mode,
        )
        return 0
    if args.action == "from-tower":
        doc = _load(args.tower)
        fs = _field_of(args, doc)
        mats = [jsonio.matrix_from_json(fs, m) for m in doc["matrices"]]
        M = dmod_from_tower(mats, fs)
        _emit({"command": "dmod from-tower", "module": jsonio.module_to_json(M)}, cfg.mode)
        return 0
    doc = _load(args.module)
    fs = _field_of(args, doc)
    M = jsonio.module_from_json(doc.get("module", doc), fs)
    if args.action == "validate":
        rep = validate_dmodule(M, args.degree)
        _emit(
            {
                "command": "dmod validate",
                "passed": rep.passed,
                "checks_run": rep.checks_run,
                "first_failure": rep.first_failure(),
            },
            cfg.mode,
        )
        return 0 if rep.passed else 1
    # extract
    lvl = extract_level(M, args.level, args.degree or 8)
    _emit(
        {
            "command": "dmod extract",
            "level": lvl.level,
            "rank": lvl.rank,
            "degree_used": lvl.degree_used,
            "twist_convention": lvl.twist_convention,
            "generators": [
                [jsonio.poly_to_json(e) for e in g] for g in lvl.generators
            ],
            "smith_factors": [jsonio.poly_to_json(f) for f in lvl.smith_factors],
        },
        cfg.mode,
    )
    return 0


def _cmd_p1(args, cfg: RunConfig) -> int:
    if args.action == "check-tower":
        doc = _load(args.tower)
        fs = _field_of(args, doc)
        tower = jsonio.p1_tower_from_json(fs, doc)
        reports = {}
        ok = True
        try:
            rep = check_h0_decreasing(tower)
            reports["h0_monotone"] = {"passed": rep.passed, **rep.details}
            ok &= rep.passed
            rep = check_numerical_triviality(tower)
            reports["numerically_trivial"] = {"passed": rep.passed, **rep.details}
            ok &= rep.passed
            rep = fdiv_rigidity(tower)
            reports["rigidity"] = {
                "passed": rep.passed,
                "splitting": rep.details["splitting"],
            }
            ok &= rep.passed
        except InvalidTower as ex:
            reports["rejected"] = str(ex)
            ok = False
        _emit({"command": "p1 check-tower", "passed": ok, "reports": reports}, cfg.mode)
        return 0 if ok else 1
    doc = _load(args.bundle)
    fs = _field_of(args, doc)
    E = jsonio.bundle_from_json(fs, doc.get("bundle", doc))
    if args.action == "split":
        f = birkhoff_split_factors(E)
        _emit(
            {
                "command": "p1 split",
                "splitting": list(f.exponents),
                "degree": E.degree,
                "factors": {
                    "u": jsonio.matrix_to_json(f.u),
                    "diag": jsonio.matrix_to_json(f.diag),
                    "v": jsonio.matrix_to_json(f.v),
                },
            },
            cfg.mode,
        )
        return 0
    if args.action == "cohomology":
        h = cech_h(E, args.i, args.twist)
        _emit(
            {"command": "p1 cohomology", "i": args.i, "twist": args.twist, "h": h},
            cfg.mode,
        )
        return 0
    if args.action == "pullback":
        FE = E.frobenius_pullback()
        _emit({"command": "p1 pullback", "bundle": jsonio.bundle_to_json(FE)}, cfg.mode)
        return 0
    # euler
    chi = euler_char(E, args.twist)
    _emit(
        {
            "command": "p1 euler",
            "twist": args.twist,
            "chi": chi,
            "degree": E.degree,
            "rank": E.rank,
        },
        cfg.mode,
    )
    return 0


def _cmd_tower(args, cfg: RunConfig) -> int:
    doc = _load(args.tower)
    fs = _field_of(args, doc)
    t = jsonio.twisted_tower_from_json(fs, doc)
    if args.action == "stable":
        res = stable_subspace(t, args.level)
        _emit(
            {
                "command": "tower stable",
                "level": res.level,
                "dim": res.dim,
                "stabilization_index": res.stabilization_index,
                "exact": res.exact,
                "basis": jsonio.const_matrix_to_json(fs, res.basis),
            },
            cfg.mode,
        )
        return 0
    if args.action == "ml":
        rep = check_ML(t)
        _emit(
            {"command": "tower ml", "exact": rep.exact, "levels": rep.entries},
            cfg.mode,
        )
        return 0
    if args.action == "lim":
        d, exact = lim_dim(t)
        _emit({"command": "tower lim", "dim": d, "exact": exact}, cfg.mode)
        return 0
    if args.action == "r1lim":
        d, rep = r1lim_dim(t)
        _emit(
            {
                "command": "tower r1lim",
                "dim": d,
                "exact": rep.exact,
                "certificate": rep.entries,
            },
            cfg.mode,
        )
        return 0
    rep = bound_check(t)
    _emit(
        {
            "command": "tower bound",
            "lim": rep.lim,
            "sup_dim": rep.sup_dim,
            "passed": rep.passed,
            "exact": rep.exact,
        },
        cfg.mode,
    )
    return 0 if rep.passed else 1


def _cmd_spectral(args, cfg: RunConfig) -> int:
    doc = _load(args.page)
    page = jsonio.page_from_json(doc.get("page", doc))
    if args.action == "bounds":
        payload = {
            "command": "spectral bounds",
            "n": args.n,
            "upper_bound": bound_upper(page, args.n),
        }
        if args.abutment:
            h = _load(args.abutment)
            hn = h[args.n] if isinstance(h, list) else int(h)
            rep = bound_edge(page, args.n, hn)
            payload["edge"] = {
                "lhs": rep.lhs,
                "rhs": rep.rhs,
                "slack": rep.slack,
                "passed": rep.passed,
            }
        _emit(payload, cfg.mode)
        if "edge" in payload and not payload["edge"]["passed"]:
            return 1
        return 0
    res = simulate(page, cfg.seed)
    _emit(
        {
            "command": "spectral simulate",
            "seed": res.seed,
            "abutment": res.abutment,
            "differential_ranks": res.differentials,
        },
        cfg.mode,
    )
    return 0


def _degree_payload(reports) -> list[dict]:
    return [
        {
            "degree": r.degree,
            "lim": r.lim,
            "r1lim": r.r1lim,
            "dim": r.dim,
            "exact": r.exact,
        }
        for r in reports
    ]


def _cmd_dcoh(args, cfg: RunConfig) -> int:
    if args.action == "p1":
        doc = _load(args.tower)
        fs = _field_of(args, doc)
        tower = jsonio.p1_tower_from_json(fs, doc)
        rep = finiteness_report(tower, degree_cap=cfg.cap)
        _emit(
            {
                "command": "dcoh p1",
                "kind": rep.kind,
                "rank": rep.rank,
                "degrees": _degree_payload(rep.degrees),
            },
            cfg.mode,
        )
        return 0
    if args.action == "affine":
        doc = _load(args.module)
        fs = _field_of(args, doc)
        M = jsonio.module_from_json(doc.get("module", doc), fs)
        truncations = tuple(int(x) for x in args.truncations.split(","))
        rep = finiteness_report(M, truncations=truncations)
        payload = {
            "command": "dcoh affine",
            "kind": rep.kind,
            "rank": rep.rank,
            "degree0": rep.h0_ladder,
            "degree1_witnesses": rep.h1_witnesses,
            "degree1_label": rep.h1_label,
        }
        if args.report_dir:
            from .report import write_affine_report

            payload["report_files"] = write_affine_report(rep, args.report_dir)
        _emit(payload, cfg.mode)
        return 0
    # from-towers
    doc = _load(args.towers)
    fs = _field_of(args, doc)
    towers = {
        int(k): jsonio.twisted_tower_from_json(fs, v)
        for k, v in doc["towers"].items()
    }
    ts = CohomologyTowerSet(fs, towers, "user-supplied")
    reports = dcoh_dims(ts, cap=cfg.cap)
    _emit(
        {"command": "dcoh from-towers", "degrees": _degree_payload(reports)},
        cfg.mode,
    )
    return 0


def _cmd_verify(args, cfg: RunConfig) -> int:
    known = {name for name, _ in ALL_CHECKS}
    only = args.only or None
    if only:
        unknown = [n for n in only if n not in known]
        if unknown:
            raise UsageError(
                f"unknown check name(s) {unknown}; available: {sorted(known)}"
            )
    results = run_checks(cfg.seed, only)
    all_pass = all(r.passed for r in results)
    payload = {
        "command": "verify-paper",
        "seed": cfg.seed,
        "passed": all_pass,
        "checks": [
            {
                "name": r.name,
                "status": "pass" if r.passed else "fail",
                "cases": r.cases,
                "claim": " ".join(r.description.split()),
                "details": r.details,
            }
            for r in results
        ],
    }
    if args.report_dir:
        from .report import write_check_report

        payload["report_files"] = write_check_report(results, args.report_dir, cfg.seed)
    if cfg.mode == "table":
        print(f"seed {cfg.seed}")
        width = max(len(r.name) for r in results)
        for r in results:
            mark = "pass" if r.passed else "FAIL"
            print(f"{r.name:<{width}}  {mark}  cases={r.cases}")
        print("overall:", "pass" if all_pass else "FAIL")
    else:
        _emit(payload, cfg.mode)
    if not all_pass:
        failing = next(r for r in results if not r.passed)
        print(
            f"first failing check: {failing.name}: {failing.details}",
            file=sys.stderr,
        )
        return 1
    return 0


# -- parser ---------------------------------------------------------------------


def _add_common(ap, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    ap.add_argument("--json", dest="mode", action="store_const", const="json",
                    default=d, help="JSON output (default)")
    ap.add_argument("--table", dest="mode", action="store_const", const="table",
                    default=d, help="aligned human-readable output")
    ap.add_argument("--field", default=d,
                    help='inline field, e.g. \'{"p":2,"e":1}\'')
    ap.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 42,
                    help="seed for randomised runs")
    ap.add_argument("--cap", type=int, default=argparse.SUPPRESS if suppress else 2,
                    help="cohomology degree cap")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fdiv",
        description=(
            "Exact computations with divided-power operators, twisted towers, "
            "and bundles on the line, plus an executable verification suite."
        ),
    )
    _add_common(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diffop", help="divided-power operators")
    ds = d.add_subparsers(dest="action", required=True)
    x = ds.add_parser("apply", parents=[common], help="apply an operator to a polynomial")
    x.add_argument("--op", required=True)
    x.add_argument("--poly", required=True)
    x = ds.add_parser("compose", parents=[common], help="compose two operators")
    x.add_argument("--a", required=True)
    x.add_argument("--b", required=True)
    x = ds.add_parser("check-relations", parents=[common], help="verify the composition table")
    x.add_argument("--p", type=int, required=True)
    x.add_argument("--max-order", type=int, default=12)
    x.add_argument("--max-degree", type=int, default=24)

    d = sub.add_parser("dmod", help="modules over the operator ring")
    ds = d.add_subparsers(dest="action", required=True)
    x = ds.add_parser("validate", parents=[common], help="check the generator action relations")
    x.add_argument("--module", required=True)
    x.add_argument("--degree", type=int, default=None)
    x = ds.add_parser("extract", parents=[common], help="extract a level of flat sections")
    x.add_argument("--module", required=True)
    x.add_argument("--level", type=int, required=True)
    x.add_argument("--degree", type=int, default=8)
    x = ds.add_parser("from-tower", parents=[common], help="build the module of a matrix tower")
    x.add_argument("--tower", required=True)
    x = ds.add_parser("witness", parents=[common], help="degree-1 affine cokernel witness")
    x.add_argument("--p", type=int, required=True)
    x.add_argument("--degree", type=int, required=True)

    d = sub.add_parser("p1", help="bundles on the projective line")
    ds = d.add_subparsers(dest="action", required=True)
    for name, hlp in (
        ("split", "splitting type via factorization"),
        ("cohomology", "cohomology dimension of a twist"),
        ("pullback", "Frobenius pullback"),
        ("euler", "Euler characteristic of a twist"),
    ):
        x = ds.add_parser(name, parents=[common], help=hlp)
        x.add_argument("--bundle", required=True)
        if name == "cohomology":
            x.add_argument("--i", type=int, required=True, choices=(0, 1))
        if name in ("cohomology", "euler"):
            x.add_argument("--twist", type=int, default=0)
    x = ds.add_parser("check-tower", parents=[common], help="monotonicity, triviality, rigidity")
    x.add_argument("--tower", required=True)

    d = sub.add_parser("tower", help="twisted inverse systems")
    ds = d.add_subparsers(dest="action", required=True)
    for name, hlp in (
        ("stable", "stable subspace of a level"),
        ("ml", "image-chain stabilization certificates"),
        ("lim", "inverse limit dimension"),
        ("r1lim", "first derived limit with certificate"),
        ("bound", "limit bounded by the largest level"),
    ):
        x = ds.add_parser(name, parents=[common], help=hlp)
        x.add_argument("--tower", required=True)
        if name == "stable":
            x.add_argument("--level", type=int, default=0)

    d = sub.add_parser("spectral", help="first-quadrant page bounds")
    ds = d.add_subparsers(dest="action", required=True)
    x = ds.add_parser("bounds", parents=[common], help="evaluate both inequalities")
    x.add_argument("--page", required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--abutment", default=None)
    x = ds.add_parser("simulate", parents=[common], help="seeded admissible rank simulation")
    x.add_argument("--page", required=True)

    d = sub.add_parser("dcoh", help="assembled module cohomology")
    ds = d.add_subparsers(dest="action", required=True)
    x = ds.add_parser("p1", parents=[common], help="dimensions for a bundle tower")
    x.add_argument("--tower", required=True)
    x = ds.add_parser("affine", parents=[common], help="stabilised kernels and growth witnesses")
    x.add_argument("--module", required=True)
    x.add_argument("--truncations", default="4,8,16")
    x.add_argument("--report-dir", default=None)
    x = ds.add_parser("from-towers", parents=[common], help="dimensions from explicit towers")
    x.add_argument("--towers", required=True)

    x = sub.add_parser("verify-paper", parents=[common], help="run the whole verification suite")
    x.add_argument("--only", action="append", help="run only the named check")
    x.add_argument("--report-dir", default=None,
                   help="write report.csv and figures to this directory")
    return ap


_HANDLERS = {
    "diffop": _cmd_diffop,
    "dmod": _cmd_dmod,
    "p1": _cmd_p1,
    "tower": _cmd_tower,
    "spectral": _cmd_spectral,
    "dcoh": _cmd_dcoh,
    "verify-paper": _cmd_verify,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = RunConfig(None, args.seed, args.cap, args.mode or "json")
    try:
        return _HANDLERS[args.command](args, cfg)
    except UsageError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except FdivError as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
