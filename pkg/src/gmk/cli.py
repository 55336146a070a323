"""Command line interface.

Exit codes: 0 when the claim holds (or there is nothing to refute), 1 when it
is refuted (counterexample found, proof rejected, validity refuted), 2 on
usage and input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import algebra, axioms, search
from .formula import FormulaSyntaxError, depth, format_formula, parse_formula, size, subformulas, variables
from .proof import ScriptFormatError, check_proof, load_script
from .semantics import (
    ModelError, decide_prop_validity, evaluate_rows, format_value, global_consequence,
    load_model, local_consequence,
)

OK, REFUTED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, doc: dict, text: str):
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _formula(args):
    text = getattr(args, "formula_pos", None) or args.formula
    if text is None:
        raise UsageError("a formula is required (positional or --formula)")
    return parse_formula(text)


def _csv(text: str | None) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


# ---------------------------------------------------------------------------
# commands

def cmd_parse(args) -> int:
    f = _formula(args)
    doc = {"formula": format_formula(f), "depth": depth(f), "size": size(f),
           "variables": variables(f), "subformulas": len(subformulas(f))}
    _emit(args, doc, doc["formula"])
    return OK


def cmd_eval(args) -> int:
    m = load_model(args.model)
    f = _formula(args)
    row = dict(zip(m.worlds, evaluate_rows(m, f)))
    if args.world is not None:
        if args.world not in row:
            raise UsageError(f"unknown world {args.world!r}")
        x = format_value(row[args.world])
        _emit(args, {"formula": format_formula(f), "world": args.world, "value": x}, x)
    else:
        vals = {w: format_value(x) for w, x in row.items()}
        _emit(args, {"formula": format_formula(f), "values": vals},
              "\n".join(f"{w}: {x}" for w, x in vals.items()))
    return OK


def cmd_entail(args) -> int:
    m = load_model(args.model)
    f = _formula(args)
    premises = [parse_formula(p) for p in _csv(args.premises)]
    check = global_consequence if args.mode == "global" else local_consequence
    verdict = check(m, premises, f)
    doc = {"mode": args.mode, "premises": [format_formula(p) for p in premises],
           "formula": format_formula(f), "holds": verdict.holds}
    if verdict.holds:
        _emit(args, doc, "holds")
        return OK
    w, x = verdict.witness
    doc.update(world=w, value=format_value(x))
    _emit(args, doc, f"fails at {w}: value {format_value(x)}")
    return REFUTED


def cmd_valid_prop(args) -> int:
    f = _formula(args)
    verdict = decide_prop_validity(f)
    doc = {"formula": format_formula(f), "valid": verdict.valid}
    if verdict.valid:
        _emit(args, doc, "valid")
        return OK
    cv = {k: format_value(v) for k, v in sorted(verdict.countervaluation.items())}
    doc["countervaluation"] = cv
    _emit(args, doc, "invalid: " + ", ".join(f"{k}={v}" for k, v in cv.items()))
    return REFUTED


def cmd_countermodel(args) -> int:
    f = _formula(args)
    chain = args.chain if args.chain is not None else (3 if args.valued else 2)
    bounds = search.SearchBounds(args.max_worlds, chain, crisp=not args.valued,
                                 variable_budget=max(3, len(variables(f))))
    result = search.find_countermodel(f, bounds, jobs=args.jobs)
    doc = search.search_result_to_json(f, result)
    if isinstance(result, search.Counterexample):
        m = result.model
        lines = [f"counterexample: value {format_value(result.value)} at {result.world}",
                 f"worlds: {', '.join(m.worlds)}",
                 "relation: " + (", ".join(f"{v}->{w}" + ("" if m.R(v, w) == 1 else f" ({format_value(m.R(v, w))})")
                                           for v in m.worlds for w in m.worlds if m.R(v, w)) or "empty")]
        for var in sorted(m.valuation):
            lines.append(f"{var}: " + ", ".join(f"{w}={format_value(m.value(var, w))}" for w in m.worlds))
        _emit(args, doc, "\n".join(lines))
        return REFUTED
    _emit(args, doc, f"exhausted: no counter-model among {result.models_checked} models "
                     f"(<= {args.max_worlds} worlds, chain {chain}, {'valued' if args.valued else 'crisp'})\n"
                     "note: this does NOT establish validity")
    return OK


def cmd_check_proof(args) -> int:
    script = load_script(args.path)
    overrides = {k: getattr(args, k) for k in ("system", "presentation", "mode") if getattr(args, k)}
    if args.extensions is not None:
        overrides["extensions"] = tuple(_csv(args.extensions))
    if overrides:
        from dataclasses import replace
        script = replace(script, **overrides)
    result = check_proof(script)
    doc = {"ok": result.ok, "lines": len(script.lines),
           "system": script.system, "mode": script.mode}
    if result.ok:
        kind = "depends on premises" if result.premise_dependent else "theorem"
        doc.update(conclusion=format_formula(result.conclusion), theorem=not result.premise_dependent)
        _emit(args, doc, f"ok: conclusion {format_formula(result.conclusion)} ({kind})")
        return OK
    e = result.first_error
    doc["error"] = {"line": e.line, "kind": e.kind, "message": e.message}
    _emit(args, doc, f"rejected: {e}")
    return REFUTED


def cmd_fuzz(args) -> int:
    registry = axioms.resolve_system(args.system, _csv(args.extensions), args.mode, args.presentation)
    cfg = search.FuzzConfig(args.max_worlds, args.chain or 6, args.max_vars, args.max_depth)
    if args.theorems:
        report = search.fuzz_schemes(axioms.THEOREMS, registry.frame_filter(), args.iters,
                                     args.seed, cfg, args.jobs)
        report["system"] = "theorems"
    else:
        report = search.fuzz_axiom_soundness(registry, iters=args.iters, seed=args.seed,
                                             config=cfg, jobs=args.jobs)
    n = len(report["violations"])
    text = [f"{report['system']}: {args.iters} iterations, seed {args.seed}, {n} violations"]
    for v in report["violations"][:10]:
        text.append(f"  iteration {v['iteration']}: {v['scheme']} instance {v['instance']} "
                    f"has value {v['value']} at {v['world']}")
    _emit(args, report, "\n".join(text))
    return REFUTED if n else OK


def _generators(text: str | None) -> list:
    if not text:
        return []
    return [algebra.parse_element(g) for g in text.split(";") if g.strip()]


def cmd_algebra(args) -> int:
    frame = algebra.load_frame(args.frame)
    closure = algebra.generate_subalgebra(frame, _generators(args.generators), _csv(args.ops))
    lines = [f"{len(closure)} elements"]
    lines += [f"{algebra.format_element(g)}  {closure.trace(g)}" for g in closure.elements]
    _emit(args, closure.to_json(), "\n".join(lines))
    return OK


def cmd_nondef(args) -> int:
    frame = algebra.load_frame(args.frame)
    gens = _generators(args.generators)
    if len(gens) != 1:
        raise UsageError("nondef takes exactly one generator")
    rep = algebra.nondefinability_report(frame, gens[0])
    g = "<" + ", ".join(rep["generator"]) + ">"
    lines = [
        f"generator {g}",
        f"box-subalgebra: {rep['box_subalgebra']['size']} elements, "
        f"dia-subalgebra: {rep['dia_subalgebra']['size']} elements",
        f"box{g} = <{', '.join(rep['box_image'])}> "
        + ("escapes the dia-subalgebra: box not definable from dia" if rep["box_escapes_dia_subalgebra"]
           else "lies in the dia-subalgebra: no witness"),
        f"dia{g} = <{', '.join(rep['dia_image'])}> "
        + ("escapes the box-subalgebra: dia not definable from box" if rep["dia_escapes_box_subalgebra"]
           else "lies in the box-subalgebra: no witness"),
    ]
    _emit(args, rep, "\n".join(lines))
    return OK


def _edges_text(worlds, rel) -> str:
    idx = {w: i for i, w in enumerate(worlds)}
    return ", ".join(f"{v}->{w}" for v, w in sorted(rel, key=lambda e: (idx[e[0]], idx[e[1]]))) or "empty"


def cmd_optimal(args) -> int:
    m = load_model(args.model)
    rp = algebra.compute_R_plus(m)
    doc = {"R_plus": [list(e) for e in sorted(rp.relation)], "optimal": rp.is_optimal,
           "subalgebra": rp.subalgebra.to_json()}
    _emit(args, doc, f"R+: {_edges_text(m.worlds, rp.relation)}\n"
                     f"optimal: {'yes' if rp.is_optimal else 'no'}")
    return OK


def cmd_frame_check(args) -> int:
    m = load_model(args.model)
    rep = algebra.frame_report(m)
    lines = ["properties: " + ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in rep["properties"].items()),
             "schemes: " + ", ".join(f"{k}={'valid' if v else 'invalid'}" for k, v in rep["schemes"].items()),
             f"optimal: {'yes' if rep['optimal'] else 'no'}"]
    failed = False
    if rep["correspondence"] is not None:
        for prop, row in rep["correspondence"].items():
            lines.append(f"  {prop}: property {row['property']}, schemes {row['schemes_valid']}"
                         + ("" if row["agree"] else "  MISMATCH"))
            failed |= not row["agree"]
    failed |= not rep["seriality_row"]["agree"]
    _emit(args, rep, "\n".join(lines))
    return REFUTED if failed else OK


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gmk", description="Bi-modal Goedel logic toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name, fn, help, formula=False):
        p = sub.add_parser(name, parents=[common], help=help)
        if formula:
            p.add_argument("formula_pos", nargs="?", metavar="FORMULA")
            p.add_argument("--formula")
        p.set_defaults(fn=fn)
        return p

    command("parse", cmd_parse, "parse and pretty-print a formula", formula=True)

    p = command("eval", cmd_eval, "evaluate a formula in a model", formula=True)
    p.add_argument("--model", required=True)
    p.add_argument("--world")

    p = command("entail", cmd_entail, "local or global consequence in a model", formula=True)
    p.add_argument("--model", required=True)
    p.add_argument("--premises", help="comma separated formulas")
    p.add_argument("--mode", choices=axioms.MODES, default="local")

    command("valid-prop", cmd_valid_prop, "decide propositional Goedel validity", formula=True)

    p = command("countermodel", cmd_countermodel, "bounded counter-model search", formula=True)
    p.add_argument("--max-worlds", type=int, default=2)
    p.add_argument("--chain", type=int, help="chain size (default 2 crisp, 3 valued)")
    p.add_argument("--valued", action="store_true", help="allow [0,1]-valued accessibility")
    p.add_argument("--jobs", type=int, default=1)

    p = command("check-proof", cmd_check_proof, "check a Hilbert proof script")
    p.add_argument("path")
    p.add_argument("--system", choices=axioms.SYSTEMS)
    p.add_argument("--presentation", choices=axioms.PRESENTATIONS)
    p.add_argument("--mode", choices=axioms.MODES)
    p.add_argument("--extensions")

    p = command("fuzz", cmd_fuzz, "soundness fuzzing of axiom schemes")
    p.add_argument("--system", choices=axioms.SYSTEMS, default="GKc")
    p.add_argument("--presentation", choices=axioms.PRESENTATIONS)
    p.add_argument("--mode", choices=axioms.MODES, default="local")
    p.add_argument("--extensions")
    p.add_argument("--theorems", action="store_true", help="fuzz the derived theorem schemes instead")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-worlds", type=int, default=4)
    p.add_argument("--chain", type=int, help="largest chain size (default 6)")
    p.add_argument("--max-vars", type=int, default=3)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)

    p = command("algebra", cmd_algebra, "generated subalgebra of a complex algebra")
    p.add_argument("--frame", required=True)
    p.add_argument("--generators", help="elements separated by ';', coordinates by ','")
    p.add_argument("--ops", default="", help="modal operations: box,dia")

    p = command("nondef", cmd_nondef, "non-interdefinability witness check")
    p.add_argument("--frame", required=True)
    p.add_argument("--generators", required=True)

    p = command("optimal", cmd_optimal, "compute R+ and optimality of a crisp model")
    p.add_argument("--model", required=True)

    p = command("frame-check", cmd_frame_check, "frame properties versus scheme validity")
    p.add_argument("--model", required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        print("gmk: error: --jobs must be positive", file=sys.stderr)
        return USAGE
    try:
        return args.fn(args)
    except (UsageError, FormulaSyntaxError, ScriptFormatError, ModelError, algebra.AlgebraError,
            axioms.RegistryError, search.SearchError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"gmk {args.command}: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
