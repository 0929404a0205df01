"""CLI: tables, the acceptance suite and thin wrappers over the library.

Exit codes: 0 every check in the report passed, 1 a mathematical check
failed, 2 the input was malformed or violated a precondition.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import yaml

from conifold import codec
from conifold.degeneration import (
    DegenerationSpec,
    build_corrected,
    check_les,
    compare_defects,
    les_from_degeneration,
    limiting_graded_dims,
    stratified_quotient,
    vanishing_rank,
)
from conifold.errors import ConifoldError, InvalidZigZagError, SchemaError
from conifold.monodromy import (
    analyze_monodromy,
    check_hard_lefschetz,
    check_weight_conditions,
    jordan_weight_oracle,
    validate_gluing,
    weight_filtration,
)
from conifold.report import (
    Report,
    golden_mismatches,
    render,
    suite_report,
    table1_rows,
    table2_rows,
    write_golden,
    write_suite_artifacts,
)
from conifold.zigzag import (
    assemble,
    classify_self_dual_extensions,
    dual_presentation,
    extension_class,
    is_self_dual_presentation,
    validate,
)

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = "config/default.yaml"


def load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def _resolve_config(args) -> dict:
    """Load the YAML config and resolve its paths against the repository root."""
    path = Path(args.config)
    if path.exists():
        cfg = load_config(str(path))
        base = path.resolve().parent.parent
    elif args.config == DEFAULT_CONFIG:
        cfg, base = {}, Path.cwd()
    else:
        raise SchemaError("config file not found", str(path))
    golden = Path(args.golden_dir) if args.golden_dir else base / cfg.get("golden_dir", "golden")
    cfg["golden_dir"] = str(golden)
    if args.seed is not None:
        cfg["seed"] = args.seed
    return cfg


def _input(args) -> dict:
    if not args.input:
        raise SchemaError("this command needs --input PATH")
    return codec.load_json(args.input)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_tables(args, cfg: dict) -> Report:
    r = cfg.get("table_nodes", 2)
    golden_dir = Path(cfg["golden_dir"])
    if args.write_golden:
        write_golden(golden_dir, r)
    mismatches = golden_mismatches(golden_dir, r)
    return Report(
        command="tables",
        ok=not mismatches,
        summary={"golden_dir": str(golden_dir),
                 "mismatches": [f"{t}:{row}" for t, row in mismatches]},
        tables={
            "table1": [{"row": x["row"], "tuple": x["tuple"], "comment": x["comment"]}
                       for x in table1_rows(r)],
            "table2": [{"row": x["row"], "assembled": x["assembled"],
                        "class_params": x["class_params"], "comment": x["comment"]}
                       for x in table2_rows()],
        },
    )


def cmd_check(args, cfg: dict) -> Report:
    from conifold.suite import run_suite

    result = run_suite(cfg, cfg.get("seed", 0))
    report = suite_report(result.checks, result.seed)
    if args.report_dir:
        write_suite_artifacts(report, result.checks, Path(args.report_dir))
    return report


def cmd_weights(args, cfg: dict) -> Report:
    n, center = codec.weights_input_from_json(_input(args))
    if args.center is not None:
        center = args.center
    if center is None:
        center = cfg.get("default_center", 3)
    w = weight_filtration(n, center)
    lefschetz = check_hard_lefschetz(w)
    oracle_agrees = w == jordan_weight_oracle(n, center)
    conditions = check_weight_conditions(w)
    return Report(
        command="weights",
        ok=conditions and lefschetz.ok and oracle_agrees,
        summary={
            "center": center,
            "graded_dims": {str(k): v for k, v in w.graded_dims().items()},
            "N W_l in W_(l-2)": conditions,
            "hard Lefschetz": lefschetz.ok,
            "Jordan oracle agrees": oracle_agrees,
        },
        tables={"lefschetz": [
            {"j": s.j, "dims_match": s.dims_match, "maps_into": s.maps_into, "injective": s.injective}
            for s in lefschetz.steps
        ]},
        details={"filtration": codec.weight_filtration_to_json(w)},
    )


def cmd_monodromy(args, cfg: dict) -> Report:
    vc = codec.vanishing_config_from_json(_input(args))
    mono = analyze_monodromy(vc, base_change=args.base_change)
    summary = {
        "cycles": vc.r,
        "composition": "T_r @ ... @ T_1 (cycle-list order)",
        "quasi_unipotent": mono.quasi_unipotent,
        "order": mono.order,
        "unipotent": mono.unipotent,
        "power": mono.power,
        "rank N": mono.log_rank,
        "vanishing span rank": mono.span_rank,
    }
    details = {"lattice": codec.lattice_to_json(vc), "T": codec.matrix_to_json(mono.total)}
    if mono.log is not None:
        center = args.center if args.center is not None else cfg.get("default_center", 3)
        w = weight_filtration(mono.log, center)
        summary["graded_dims"] = {str(k): v for k, v in w.graded_dims().items()}
        details["N"] = codec.matrix_to_json(mono.log)
    return Report("monodromy", mono.ok, summary, details=details)


def cmd_classify(args, cfg: dict) -> Report:
    r = args.r if args.r is not None else 1
    rep = classify_self_dual_extensions(r, cfg.get("seed", 0))
    orbits = [{
        "support": list(o.support),
        "class_params": [codec.scalar_to_json(p) for p in o.class_params],
        "split": o.split,
        "self_dual": o.self_dual,
        "corrected": o.nontrivial_everywhere,
    } for o in rep.orbits]
    return Report(
        command="classify",
        ok=rep.ok,
        summary={"nodes": r, "orbits": len(rep.orbits),
                 "corrected support": list(rep.corrected_orbit.support),
                 "corrected self-dual": rep.corrected_orbit.self_dual,
                 "unique nontrivial at every node": rep.unique_corrected},
        tables={"orbits": orbits},
    )


def cmd_les(args, cfg: dict) -> Report:
    data = _input(args)
    if "smooth_betti" in data:
        witness = les_from_degeneration(codec.degeneration_from_json(data))
    else:
        witness = codec.les_witness_from_json(data)
    rep = check_les(witness)
    first = rep.first_failure
    return Report(
        command="les",
        ok=rep.ok,
        summary={
            "alternating sum": rep.alternating_sum,
            "first failure": f"{first.term}^{first.degree}" if first else None,
        },
        tables={"positions": [{"term": p.term, "degree": p.degree, "exact": p.ok}
                              for p in rep.positions]},
        details={"witness": codec.les_witness_to_json(witness)},
    )


def _validate_tuple(data: dict) -> Report:
    raw = codec.raw_zigzag_from_json(data)
    rep = validate(raw)
    return Report("validate", rep.ok, {"kind": "zigzag", **rep.to_dict()})


def _validate_presentation(data: dict, seed: int) -> Report:
    e = codec.presentation_from_json(data)
    assembled = assemble(e)
    self_dual = is_self_dual_presentation(e, seed)
    return Report(
        command="validate",
        ok=True,
        summary={
            "kind": "presentation",
            "support": list(e.support),
            "self_dual": self_dual,
            "extension_class": [[codec.scalar_to_json(x) for x in col] for col in extension_class(e)],
        },
        details={
            "assembled": codec.zigzag_to_json(assembled),
            "dual": codec.presentation_to_json(dual_presentation(e)),
        },
    )


def _validate_gluing(data: dict) -> Report:
    g = codec.gluing_from_json(data)
    ok = validate_gluing(g)
    return Report("validate", ok, {"kind": "gluing", "vu = N": ok})


def cmd_validate(args, cfg: dict) -> Report:
    data = _input(args)
    if not isinstance(data, dict):
        raise SchemaError("expected a JSON object", "$")
    if "sub" in data:
        return _validate_presentation(data, cfg.get("seed", 0))
    if "mprime" in data:
        return _validate_gluing(data)
    return _validate_tuple(data)


def cmd_degeneration(args, cfg: dict) -> Report:
    spec: DegenerationSpec = codec.degeneration_from_json(_input(args))
    summary = {"fiber_dim": spec.fiber_dim, "vanishing rank": vanishing_rank(spec)}
    quotient = stratified_quotient(spec)
    summary["quotient multiplicities"] = list(quotient.multiplicities)
    details = {"quotient": codec.zigzag_to_json(quotient.quot)}
    ok = True
    if all(s.kind == "node" for s in spec.strata):
        seq = build_corrected(spec)
        summary["pointwise defect"] = seq.pointwise_defect
        summary["exact sequence"] = seq.verdict
        details["corrected"] = codec.zigzag_to_json(seq.total)
        ok &= seq.verdict
    if spec.lattice_config is not None and spec.lattice_config.r:
        center = args.center if args.center is not None else spec.fiber_dim
        dims = limiting_graded_dims(spec, center)
        summary["graded_dims"] = {str(k): v for k, v in dims.items()}
        if all(s.kind == "node" for s in spec.strata):
            cmp = compare_defects(spec)
            summary["rank N"] = cmp.log_rank
            summary["defects agree"] = cmp.agree
    return Report("degeneration", ok, summary, details=details)


COMMANDS = {
    "tables": cmd_tables,
    "check": cmd_check,
    "weights": cmd_weights,
    "monodromy": cmd_monodromy,
    "classify": cmd_classify,
    "les": cmd_les,
    "validate": cmd_validate,
    "degeneration": cmd_degeneration,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=DEFAULT_CONFIG, help="Path to YAML config")
    common.add_argument("--input", help="JSON input file")
    common.add_argument("--format", choices=["markdown", "json"], default="markdown")
    common.add_argument("--seed", type=int, help="Seed for the isomorphism search and corpora")
    common.add_argument("--golden-dir", help="Directory holding table1.jsonl and table2.jsonl")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")

    parser = argparse.ArgumentParser(prog="conifold", description="Zig-zag, monodromy and weight calculus")
    sub = parser.add_subparsers(dest="command")

    t = sub.add_parser("tables", parents=[common], help="Emit the standard zig-zag and extension tables")
    t.add_argument("--write-golden", action="store_true", help="Regenerate the golden files")

    c = sub.add_parser("check", parents=[common], help="Run the full acceptance suite")
    c.add_argument("--report-dir", help="Write latest.md, summary.json and checks.csv here")

    w = sub.add_parser("weights", parents=[common], help="Weight filtration of a nilpotent matrix")
    w.add_argument("--center", type=int)

    m = sub.add_parser("monodromy", parents=[common], help="Total monodromy and its logarithm")
    m.add_argument("--center", type=int)
    m.add_argument("--base-change", action="store_true", help="Raise a quasi-unipotent T to T^order")

    k = sub.add_parser("classify", parents=[common], help="Classify self-dual extensions over r nodes")
    k.add_argument("-r", type=int)

    sub.add_parser("les", parents=[common], help="Check nearby/vanishing long exact sequence bookkeeping")
    sub.add_parser("validate", parents=[common], help="Validate a tuple, presentation or gluing datum")

    d = sub.add_parser("degeneration", parents=[common], help="Corrected object and limiting data")
    d.add_argument("--center", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = _resolve_config(args)
        report = COMMANDS[args.command](args, cfg)
    except InvalidZigZagError as exc:
        print(f"[FAIL] {exc}", file=sys.stderr)
        return 1
    except (ConifoldError, ValueError, IndexError, OSError) as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return 2
    print(render(report, args.format))
    if not report.ok:
        logger.info("[FAIL] %s: at least one check failed", args.command)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
