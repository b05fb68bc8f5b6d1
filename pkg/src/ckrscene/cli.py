"""Command line: generate, oracle, export, eval-measure, bench."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .asp import AspSyntaxError, atom, parse_program
from .asp.external import ExternalSolverError
from .bench import rows_to_csv, run_bench
from .ckr2asp import GENERAL, SPECIALIZED, ShapeError, parse_diagnoses
from .kb import ParseError, SceneError, load_scene, parse_ontology, parse_sckr, validate
from .measures import (
    INF,
    Measure,
    SEMIRINGS,
    atomic_query,
    formula_from_json,
    load_costs,
    overall_weight,
)
from .oracle import BoundExceeded, enumerate_ckr_models
from .scenegen import GenerationConfig, diffs_to_json, export_program, generate

EX_OK = 0
EX_INFEASIBLE = 2
EX_TIMEOUT = 3
EX_BOUND = 4
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66

_SEMIRING_FLAGS = {"boolean": "boolean", "minplus": "min-plus", "nat": "natural", "int": "integer"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _inputs(args):
    onto = parse_ontology(_read(args.ontology))
    scene = load_scene(args.scene, onto.concept_names())
    diagnoses = parse_diagnoses(_read(args.diagnoses))
    return scene, onto, diagnoses


def _config(args) -> GenerationConfig:
    modifiable = None
    if args.modifiable:
        modifiable = tuple(c.strip() for c in args.modifiable.split(",") if c.strip())
    if args.solver == "external" and not args.solver_cmd:
        raise UsageError("--solver external needs --solver-cmd")
    return GenerationConfig(
        modifiable=modifiable,
        costs=load_costs(args.costs),
        translation=args.translation,
        solver=args.solver,
        solver_cmd=args.solver_cmd,
        fresh_individuals=args.fresh,
        time_limit=args.time_limit,
        all_optima=getattr(args, "all_optima", False),
        workers=getattr(args, "workers", 1),
    )


def cmd_generate(args) -> int:
    cfg = _config(args)
    scene, onto, diagnoses = _inputs(args)
    diffs = generate(scene, onto, diagnoses, cfg)
    _write(args.out, diffs_to_json(diffs))
    for d in diffs:
        status = "timeout" if d.timed_out else ("infeasible" if not d.feasible else f"cost {d.cost}")
        print(f"{d.context}: {status}", file=sys.stderr)
    if any(d.timed_out for d in diffs):
        return EX_TIMEOUT
    if any(not d.feasible for d in diffs):
        return EX_INFEASIBLE
    return EX_OK


def cmd_export(args) -> int:
    cfg = _config(args)
    scene, onto, diagnoses = _inputs(args)
    _write(args.out, export_program(scene, onto, diagnoses, cfg))
    return EX_OK


def cmd_oracle(args) -> int:
    sckr = parse_sckr(_read(args.sckr))
    problems = validate(sckr)
    if problems:
        for p in problems:
            print(f"invalid: {p}", file=sys.stderr)
        return EX_DATAERR
    try:
        models = enumerate_ckr_models(sckr, args.max_assumptions)
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_BOUND
    for n, m in enumerate(models, 1):
        print(f"model {n}")
        for c in sckr.contexts:
            facts = sorted(m.model.per_context[c], key=lambda a: (a.concept, a.individual))
            print(f"  {c}: {{{', '.join(map(str, facts))}}}")
        chi = sorted(m.assumptions())
        print(f"  chi: {{{', '.join(map(str, chi))}}}")
    print(f"models: {len(models)}")
    return EX_OK


def _fmt(v) -> str:
    if v == INF:
        return "inf"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def cmd_eval_measure(args) -> int:
    program = parse_program(_read(args.program))
    formula = formula_from_json(json.loads(_read(args.formula)))
    m = Measure(program, formula, SEMIRINGS[_SEMIRING_FLAGS[args.semiring]])
    if args.query:
        print(_fmt(atomic_query(m, atom(args.query))))
    else:
        print(_fmt(overall_weight(m)))
    return EX_OK


def cmd_bench(args) -> int:
    onto = parse_ontology(_read(args.ontology))
    scene = load_scene(args.scene, onto.concept_names())
    diagnoses = parse_diagnoses(_read(args.diagnoses))
    if args.max_objects < 1 or args.max_contexts < 1:
        raise UsageError("--max-objects and --max-contexts must be positive")
    if args.max_objects > len(scene.objects):
        raise UsageError(f"the scene has only {len(scene.objects)} objects")
    if args.max_contexts > len(diagnoses):
        raise UsageError(f"only {len(diagnoses)} diagnoses are available")

    def progress(row):
        flag = " (timeout)" if row.timed_out else ""
        print(f"{row.translation} objects={row.objects} contexts={row.contexts} "
              f"{row.solve_ms:.1f} ms{flag}", file=sys.stderr)

    rows = run_bench(scene, onto, diagnoses, args.max_objects, args.max_contexts, args.time_limit,
                     load_costs(args.costs), args.seed, args.workers, progress=progress)
    _write(args.csv, rows_to_csv(rows))
    return EX_OK


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return conv


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def _generation_flags(p):
    p.add_argument("--scene", required=True)
    p.add_argument("--ontology", required=True)
    p.add_argument("--diagnoses", required=True)
    p.add_argument("--costs", help="cost JSON (defaults: unit additions and deletions)")
    p.add_argument("--translation", choices=[SPECIALIZED, GENERAL], default=SPECIALIZED)
    p.add_argument("--solver", choices=["embedded", "external"], default="embedded")
    p.add_argument("--solver-cmd", help="external solver command; {program} is replaced by the file path")
    p.add_argument("--fresh", type=_nonneg, default=0, help="number of fresh individuals f_1..f_N")
    p.add_argument("--time-limit", type=_positive(float), default=120.0, help="seconds per diagnosis")
    p.add_argument("--modifiable", help="comma separated concepts (default: derived per diagnosis)")
    p.add_argument("--out", required=True, help="output file, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ckrscene", description="Contextual scene generation with answer-set programming.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("generate", help="minimal scene diffs per diagnosis")
    _generation_flags(g)
    g.add_argument("--all-optima", action="store_true")
    g.add_argument("--workers", type=_positive(int), default=1)
    g.set_defaults(func=cmd_generate)

    o = sub.add_parser("oracle", help="brute-force CKR models of a repository file")
    o.add_argument("--sckr", required=True)
    o.add_argument("--max-assumptions", type=_nonneg, default=20)
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("export", help="write the compiled program in ASP-Core-2 syntax")
    _generation_flags(e)
    e.set_defaults(func=cmd_export)

    m = sub.add_parser("eval-measure", help="overall weight (or atomic query) of an algebraic measure")
    m.add_argument("--program", required=True)
    m.add_argument("--formula", required=True)
    m.add_argument("--semiring", choices=sorted(_SEMIRING_FLAGS), required=True)
    m.add_argument("--query", help="atom for an atomic query")
    m.set_defaults(func=cmd_eval_measure)

    b = sub.add_parser("bench", help="solve-time grid as CSV")
    b.add_argument("--scene", required=True)
    b.add_argument("--ontology", required=True)
    b.add_argument("--diagnoses", required=True)
    b.add_argument("--costs")
    b.add_argument("--max-objects", type=int, required=True)
    b.add_argument("--max-contexts", type=int, required=True)
    b.add_argument("--time-limit", type=_positive(float), default=120.0)
    b.add_argument("--csv", required=True)
    b.add_argument("--seed", type=int)
    b.add_argument("--workers", type=_positive(int), default=1)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except (ParseError, SceneError, AspSyntaxError, ShapeError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except ExternalSolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
