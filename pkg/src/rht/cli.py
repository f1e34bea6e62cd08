"""Command-line driver: ``rht COMMAND FILE [options]``.

Every command prints a report, as JSON with ``--json``. Each JSON report has
a top-level ``verdict`` (true, false or null when the command computes
something without asserting a property). Exit codes: 0 computed, 1 verdict
false under ``--assert``, 2 bad input, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .cohomology import LieAlgebra, betti_numbers, chevalley_eilenberg, cohomology, euler_characteristic, poincare_check
from .dsl import Declaration, DSLError, element_of, lower, parse_expr, parse_or_raise, select
from .errors import InvariantViolation, RhtError
from .formality import heisenberg_check, is_nilpotent, massey_scan, massey_triple, one_formal, quadratic_presentation
from .formality import sasakian_obstruction
from .gca import FreeCDGA, GradedAlgebra
from .hodge import Bicomplex, bott_chern, ddbar_check, mhd_check, spectral_E1
from .linalg import Gaussian, format_scalar
from .malcev import dualize, invariants, malcev_summary, presented_level_dims
from .minimal import build_tower, check_tower, stage_differentials
from .sasaki import (BasicRing, build_model, heisenberg_ring, hodge_split_check, mhd_fixture, sasaki_pipeline,
                     surface_product_ring, validate_basic_ring)

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_MAX_DIM = 64

BUILTIN_RINGS = {
    "heis3": lambda: heisenberg_ring(1),
    "heis5": lambda: heisenberg_ring(2),
    "heis7": lambda: heisenberg_ring(3),
    "sigma2xT2": surface_product_ring,
}


class InputError(RhtError):
    pass


def max_dim() -> int:
    raw = os.environ.get("RHT_MAX_DIM", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_DIM
    except ValueError:
        raise InputError(f"RHT_MAX_DIM must be an integer, got {raw!r}") from None


def _cap_algebra(alg: GradedAlgebra, what: str):
    cap = max_dim()
    for k in range(alg.top_degree + 1):
        if alg.dim(k) > cap:
            raise InputError(f"{what} has dimension {alg.dim(k)} in degree {k}, above RHT_MAX_DIM = {cap}")


def _cap(n: int, what: str):
    cap = max_dim()
    if n > cap:
        raise InputError(f"{what} has dimension {n}, above RHT_MAX_DIM = {cap}")


# ---------------------------------------------------------------------------
# input handling


def read_declaration(path: str, name: str | None = None) -> Declaration:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return select(parse_or_raise(text), name)


def _kind(decl: Declaration, allowed: tuple[str, ...], command: str):
    if decl.kind not in allowed:
        raise InputError(f"{command} takes a {' or '.join(allowed)} declaration, got {decl.kind} {decl.name!r}")


def _lowered(decl: Declaration):
    obj = lower(decl)
    if isinstance(obj, LieAlgebra):
        _cap(obj.dim, f"Lie algebra {obj.name!r}")
    elif isinstance(obj, Bicomplex):
        _cap(obj.dim, f"bicomplex {obj.name!r}")
    elif isinstance(obj, BasicRing):
        _cap_algebra(obj.ring, f"basic ring {obj.name!r}")
    return obj


def target_algebra(decl: Declaration, command: str) -> GradedAlgebra:
    """The DGA a tower or cohomology computation runs on."""
    _kind(decl, ("lie", "cdga", "basicring"), command)
    obj = _lowered(decl)
    if isinstance(obj, LieAlgebra):
        dga = chevalley_eilenberg(obj)
    elif isinstance(obj, FreeCDGA):
        _cap_algebra(obj, f"cdga {obj.name!r}")
        rep = obj.check_d_squared()
        if not rep.passed:
            raise InputError(f"d^2 != 0 in {obj.name!r} on {', '.join(str(v[0]) for v in rep.violations)}")
        dga = obj
    else:
        dga = build_model(obj).A
    _cap_algebra(dga, f"algebra of {decl.name!r}")
    return dga


def _scalar(x) -> str:
    return format_scalar(x) if isinstance(x, (Fraction, Gaussian)) else str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (Fraction, Gaussian)):
        return _scalar(x)
    if isinstance(x, set):
        return sorted(_jsonable(v) for v in x)
    return x


# ---------------------------------------------------------------------------
# commands; each returns a report dict with a "verdict" key


def cmd_check(args) -> dict:
    decl = read_declaration(args.file, args.name)
    out = {"kind": decl.kind}
    try:
        obj = _lowered(decl)
    except ValueError as exc:
        return {**out, "verdict": False, "problems": [str(exc)]}
    problems = []
    if isinstance(obj, LieAlgebra):
        problems = [f"Jacobi identity fails on ({a}, {b}, {c})" for a, b, c in obj.jacobi_violations()]
        out["dim"] = obj.dim
    elif isinstance(obj, FreeCDGA):
        rep = obj.check_d_squared()
        problems = [f"d^2 {name} = {obj.format(e)}" for name, e in rep.violations]
        out["generators"] = [g.name for g in obj.generators]
    elif isinstance(obj, Bicomplex):
        out["dim"] = obj.dim
    else:
        rep = validate_basic_ring(obj)
        out["validation"] = rep.as_dict()
        problems = [f"{c.name}: {c.detail}".rstrip(": ") for c in rep.checks if not c.passed]
    return {**out, "verdict": not problems, "problems": problems}


def _parse_degrees(text: str | None, top: int) -> list[int]:
    if not text:
        return list(range(top + 1))
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise InputError(f"--degrees takes a..b, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise InputError(f"bad degree range {text!r}")
    return list(range(lo, hi + 1))


def cmd_cohomology(args) -> dict:
    decl = read_declaration(args.file, args.name)
    dga = target_algebra(decl, "cohomology")
    top = dga.top_degree
    degrees = _parse_degrees(args.degrees, top)
    if degrees[-1] > top:
        raise InputError(f"degrees above the top degree {top} requested")
    betti = betti_numbers(dga, degrees)
    out = {"degrees": degrees, "betti": betti, "top_degree": top, "verdict": None}
    if degrees == list(range(top + 1)):
        out["euler_characteristic"] = euler_characteristic(dga)
        out["poincare_duality"] = poincare_check(dga, top)
    out["representatives"] = {str(k): [dga.format(c.representative) for c in cohomology(dga, k).classes]
                              for k in degrees}
    return out


def _tower_report(tower) -> dict:
    problems = check_tower(tower)
    if problems:
        raise InvariantViolation("; ".join(problems))
    diffs = stage_differentials(tower)
    m = tower.cdga()
    stages = []
    for s in tower.stages:
        stages.append({"index": s.index, "generators": list(s.generators),
                       "differentials": {g: m.format(diffs[g]) for g in s.generators}})
    return {"generator_counts": list(tower.generator_counts), "stabilized": tower.stabilized,
            "pending_dim": tower.pending_dim, "stages": stages}


def cmd_minimal1(args) -> dict:
    decl = read_declaration(args.file, args.name)
    tower = build_tower(target_algebra(decl, "minimal1"), args.stages)
    out = _tower_report(tower)
    out["verdict"] = tower.stabilized
    return out


def cmd_formal1(args) -> dict:
    decl = read_declaration(args.file, args.name)
    if decl.kind == "basicring":
        res = sasaki_pipeline(_lowered(decl), max_stage=args.stages)
        return {**res["formality"], "tower_counts": res["tower_counts"], "verdict": res["one_formal"]}
    tower = build_tower(target_algebra(decl, "formal1"), args.stages)
    rep = one_formal(tower)
    return {**rep.as_dict(), "tower_counts": list(tower.generator_counts), "verdict": rep.verdict}


def _class_arg(dga: GradedAlgebra, text: str):
    try:
        e = element_of(dga, parse_expr(text))
    except KeyError as exc:
        raise InputError(f"unknown generator in {text!r}: {exc.args[0]}") from None
    if not e or e.degree is None:
        raise InputError(f"{text!r} is not a nonzero homogeneous element")
    if e.d():
        raise InputError(f"{text!r} is not a cocycle")
    return cohomology(dga, e.degree).class_of(e)


def cmd_massey(args) -> dict:
    decl = read_declaration(args.file, args.name)
    _kind(decl, ("lie", "cdga"), "massey")
    dga = target_algebra(decl, "massey")
    if args.classes:
        if len(args.classes) != 3:
            raise InputError("massey takes three classes, or none to scan H^1")
        a, b, c = (_class_arg(dga, t) for t in args.classes)
        val = massey_triple(dga, a, b, c)
        return {"classes": list(args.classes), **val.as_dict(), "verdict": val.nonzero_mod_indeterminacy}
    h1 = cohomology(dga, 1).classes
    names = [dga.format(c.representative) for c in h1]
    triples = []
    for (i, j, k), val in massey_scan(dga):
        triples.append({"classes": [names[i], names[j], names[k]], **val.as_dict()})
    nonzero = [t for t in triples if t["nonzero_mod_indeterminacy"]]
    return {"h1_basis": names, "defined": len(triples), "nonzero": len(nonzero), "triples": triples,
            "verdict": bool(nonzero)}


def cmd_malcev(args) -> dict:
    decl = read_declaration(args.file, args.name)
    tower = build_tower(target_algebra(decl, "malcev"), args.depth)
    lt = dualize(tower)
    out = malcev_summary(lt)
    out["invariants"] = invariants(lt.levels[-1])
    verdict = tower.stabilized
    if decl.kind == "lie":
        g = _lowered(decl)
        out["input_invariants"] = invariants(g)
        # dualizing recovers g only when g is nilpotent
        verdict = tower.stabilized and out["invariants"] == out["input_invariants"]
        out["matches_input"] = verdict
    rep = one_formal(tower)
    if rep.verdict and not rep.provisional:
        qp = quadratic_presentation(tower, rep)
        out["quadratic_presentation"] = {**qp.as_dict(), "relation_count": len(qp.relations)}
        out["presented_level_dims"] = presented_level_dims(qp, args.depth)
    out["verdict"] = verdict
    return out


def cmd_heisenberg(args) -> dict:
    decl = read_declaration(args.file, args.name)
    _kind(decl, ("lie",), "heisenberg")
    g = _lowered(decl)
    if g.jacobi_violations():
        a, b, c = g.jacobi_violations()[0]
        raise InputError(f"Jacobi identity fails on ({a}, {b}, {c})")
    nil = is_nilpotent(g)
    out = {"dim": g.dim, "nilpotent": nil}
    if g.dim % 2 == 0 or not nil:
        out["heisenberg"] = False
        out["reason"] = "even dimension" if g.dim % 2 == 0 else "not nilpotent"
    else:
        out["heisenberg"] = heisenberg_check(g)
        out["sasakian_obstruction"] = sasakian_obstruction(g).as_dict()
    out["verdict"] = out["heisenberg"]
    return out


def _ring(args) -> BasicRing:
    ring_arg = args.ring
    if Path(ring_arg).is_file():
        decl = read_declaration(ring_arg, args.name)
        _kind(decl, ("basicring",), "sasaki")
        return _lowered(decl)
    if ring_arg in BUILTIN_RINGS:
        return BUILTIN_RINGS[ring_arg]()
    raise InputError(f"--ring takes a basicring file or one of {', '.join(BUILTIN_RINGS)}, got {ring_arg!r}")


def cmd_sasaki(args) -> dict:
    r = _ring(args)
    if args.pipeline:
        res = sasaki_pipeline(r, max_stage=args.stages)
        return {"mode": "pipeline", **res, "verdict": res["one_formal"]}
    if args.mhd:
        m = build_model(r)
        rep = mhd_check(*mhd_fixture(m))
        pages = spectral_E1(m.A, m.W)
        ps = sorted({p for p, _ in pages.E1})
        return {"mode": "mhd", "ring": r.name, "n": r.n, **rep.as_dict(),
                "spectral": {"d0_zero": pages.d0_zero,
                             "E1_columns": {str(p): pages.column(1, p) for p in ps},
                             "E1_totals": pages.totals(1), "E2_totals": pages.totals(2)},
                "verdict": rep.passed}
    if args.hodge_split:
        rep = hodge_split_check(build_model(r))
        return {"mode": "hodge-split", "ring": r.name, **rep.as_dict(), "verdict": rep.passed}
    rep = validate_basic_ring(r)
    out = {"mode": "model", "ring": r.name, "n": r.n, "validation": rep.as_dict()}
    if rep.passed:
        m = build_model(r)
        out["model_dims"] = [m.A.dim(k) for k in range(2 * r.n + 2)]
        out["cohomology"] = m.cohomology_dims()
    out["verdict"] = rep.passed
    return out


def _bicomplex(args, command: str) -> Bicomplex:
    decl = read_declaration(args.file, args.name)
    _kind(decl, ("bicomplex",), command)
    return _lowered(decl)


def cmd_ddbar(args) -> dict:
    res = ddbar_check(_bicomplex(args, "ddbar"))
    return {"holds": res.holds, "failing_degrees": res.failing_degrees, "verdict": res.holds}


def cmd_bottchern(args) -> dict:
    bc = bott_chern(_bicomplex(args, "bottchern"))
    return {**bc.as_dict(), "verdict": bc.natural_map_iso}


COMMANDS = {
    "check": cmd_check, "cohomology": cmd_cohomology, "minimal1": cmd_minimal1, "formal1": cmd_formal1,
    "massey": cmd_massey, "malcev": cmd_malcev, "heisenberg": cmd_heisenberg, "sasaki": cmd_sasaki,
    "ddbar": cmd_ddbar, "bottchern": cmd_bottchern,
}


# ---------------------------------------------------------------------------
# entry point


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print a JSON report")
    common.add_argument("--assert", dest="assert_", action="store_true", default=argparse.SUPPRESS,
                        help="exit 1 when the verdict is false")
    common.add_argument("--name", default=None, help="declaration to use when a file holds several")

    p = argparse.ArgumentParser(prog="rht", description="Exact rational homotopy computations.")
    p.add_argument("--json", action="store_true", help="print a JSON report")
    p.add_argument("--assert", dest="assert_", action="store_true", help="exit 1 when the verdict is false")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text, file=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if file:
            sp.add_argument("file")
        return sp

    add("check", "well-formedness: Jacobi, d^2 = 0, bicomplex identities, basic ring axioms")
    sp = add("cohomology", "Betti numbers and representatives")
    sp.add_argument("--degrees", help="range a..b")
    sp = add("minimal1", "1-minimal model tower")
    sp.add_argument("--stages", type=_positive, default=5)
    sp = add("formal1", "1-formality verdict")
    sp.add_argument("--stages", type=_positive, default=5)
    sp = add("massey", "triple Massey product of three classes, or a scan of H^1")
    sp.add_argument("classes", nargs="*", help="three cocycles, e.g. x1 x1 x2")
    sp = add("malcev", "nilpotent Lie algebra tower dual to the 1-minimal model")
    sp.add_argument("--depth", type=_positive, default=5)
    add("heisenberg", "Heisenberg test and Sasakian obstruction for a nilpotent Lie algebra")
    sp = add("sasaki", "Sasaki model of a basic ring", file=False)
    sp.add_argument("--ring", required=True, help=f"basicring file or one of {', '.join(BUILTIN_RINGS)}")
    sp.add_argument("--stages", type=_positive, default=2)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--pipeline", action="store_true")
    mode.add_argument("--mhd", action="store_true")
    mode.add_argument("--hodge-split", action="store_true")
    add("ddbar", "ddbar-lemma test for a bicomplex")
    add("bottchern", "Bott-Chern cohomology of a bicomplex")
    return p


def exit_code(report: dict, assert_: bool) -> int:
    """Only the verdict matters: false under ``--assert`` exits 1."""
    return EXIT_FALSE if assert_ and report.get("verdict") is False else EXIT_OK


def _print_text(report: dict, out, indent: int = 0):
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict) and v:
            print(f"{pad}{k}:", file=out)
            _print_text(v, out, indent + 1)
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            print(f"{pad}{k}:", file=out)
            for x in v:
                print(f"{pad}  -", file=out)
                _print_text(x, out, indent + 2)
        else:
            print(f"{pad}{k}: {json.dumps(v)}", file=out)


def _error(report_json: bool, kind: str, message: str, code: int, diagnostics=None) -> int:
    if report_json:
        body = {"command": None, "verdict": None, "error": {"kind": kind, "message": message}}
        if diagnostics is not None:
            body["error"]["diagnostics"] = [
                {"severity": d.severity, "message": d.message, "line": d.line, "column": d.column}
                for d in diagnostics]
        print(json.dumps(body, indent=2))
    print(f"rht: {kind}: {message}", file=sys.stderr)
    return code


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    as_json = getattr(args, "json", False)
    try:
        report = COMMANDS[args.command](args)
    except DSLError as exc:
        first = exc.diagnostics[0] if exc.diagnostics else None
        where = f"{getattr(args, 'file', None) or getattr(args, 'ring', '')}:" if first else ""
        return _error(as_json, "parse", f"{where}{exc}", EXIT_INPUT, exc.diagnostics)
    except InvariantViolation as exc:
        return _error(as_json, "internal", str(exc), EXIT_INTERNAL)
    except (RhtError, ValueError) as exc:
        return _error(as_json, type(exc).__name__, str(exc), EXIT_INPUT)
    source = getattr(args, "file", None) or getattr(args, "ring", None)
    report = _jsonable({"command": args.command, "input": source, **report})
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        _print_text(report, sys.stdout)
    return exit_code(report, getattr(args, "assert_", False))


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
