"""Scene generation: from a base scene and a list of diagnoses to minimal scene diffs.

Every diagnosis gets its own repository with three contexts::

    c_exch   defaults Named ⊑ ADD_C / NOADD_C / DEL_C / NODEL_C and the
             exchange axioms ORIG_C ⊓ NODEL_C ⊑ C, ADD_C ⊑ C
    c_base   the ontology, ADD_C ⊓ NOADD_C ⊑ ⊥, DEL_C ⊓ NODEL_C ⊑ ⊥,
             ORIG_C(o) for modifiable classes, C(o) for the rest, Named(o)
    c_<d>    where the diagnosis constraints are checked

ordered c_<d> < c_base < c_exch under the single relation ``sim``.
"""
from __future__ import annotations

import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .asp import Program, ground, optimize, to_aspcore2
from .asp.external import run_external
from .asp.solver import SolveTimeout
from .ckr2asp import (
    ENV,
    GENERAL,
    NONE,
    SPECIALIZED,
    Diagnosis,
    Translation,
    compile_diagnosis,
    compile_similarity,
    filter_preferred,
    translate,
)
from .kb import (
    SCKR,
    Assertion,
    ContextKB,
    ContextStructure,
    DefeasibleAxiom,
    Ontology,
    Scene,
    SceneError,
    SceneObject,
    normalize,
    sub,
)
from .measures import CostConfig

EXCH, BASE, REL = "c_exch", "c_base", "sim"
KINDS = ("ADD", "NOADD", "DEL", "NODEL")


@dataclass(frozen=True)
class GenerationConfig:
    modifiable: tuple | None = None  # None: derived per diagnosis
    costs: CostConfig = field(default_factory=CostConfig)
    translation: str = SPECIALIZED
    solver: str = "embedded"
    solver_cmd: str | None = None
    fresh_individuals: int = 0
    time_limit: float = 120.0
    all_optima: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.modifiable is not None:
            object.__setattr__(self, "modifiable", tuple(self.modifiable))
        if self.translation not in (GENERAL, SPECIALIZED):
            raise ValueError(f"unknown translation {self.translation!r}")
        if self.solver not in ("embedded", "external"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.solver == "external" and not self.solver_cmd:
            raise ValueError("the external solver needs a command")
        if self.fresh_individuals < 0:
            raise ValueError("fresh_individuals must be nonnegative")
        if not self.time_limit > 0:
            raise ValueError("time_limit must be positive")


@dataclass(frozen=True)
class SceneDiff:
    context: str
    cost: int | None
    additions: tuple = ()
    deletions: tuple = ()
    feasible: bool = True
    timed_out: bool = False

    def __post_init__(self):
        object.__setattr__(self, "additions", tuple(sorted(self.additions)))
        object.__setattr__(self, "deletions", tuple(sorted(self.deletions)))
        if set(self.additions) & set(self.deletions):
            raise ValueError("a membership cannot be both added and deleted")

    def to_json(self) -> dict:
        return {
            "context": self.context,
            "cost": self.cost,
            "feasible": self.feasible,
            "timed_out": self.timed_out,
            "additions": [{"individual": i, "class": c} for i, c in self.additions],
            "deletions": [{"individual": i, "class": c} for i, c in self.deletions],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SceneDiff":
        return cls(data["context"], data.get("cost"),
                   tuple((d["individual"], d["class"]) for d in data.get("additions", ())),
                   tuple((d["individual"], d["class"]) for d in data.get("deletions", ())),
                   data.get("feasible", True), data.get("timed_out", False))


def diffs_to_json(diffs: Iterable[SceneDiff]) -> str:
    return json.dumps([d.to_json() for d in diffs], indent=2) + "\n"


def fresh_names(scene: Scene, k: int) -> list[str]:
    names = [f"f_{n}" for n in range(1, k + 1)]
    clash = set(names) & set(scene.ids)
    if clash:
        raise SceneError(f"fresh individual names already used in the scene: {sorted(clash)}")
    return names


# -- repository construction ---------------------------------------------------------

def superclasses(ontology: Ontology) -> dict[str, set]:
    """Reflexive-transitive closure of the atomic inclusions."""
    up: dict[str, set] = {}
    for ax in normalize(ontology.strict):
        if ax.is_atomic_inclusion:
            up.setdefault(ax.lhs[0].name, set()).add(ax.rhs.name)
    out = {}
    for c in set(up) | {s for v in up.values() for s in v}:
        seen, stack = {c}, [c]
        while stack:
            for s in up.get(stack.pop(), ()):
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        out[c] = seen
    return out


def default_modifiable(scene: Scene, ontology: Ontology, diagnosis: Diagnosis) -> list[str]:
    """Diagnosis concepts plus scene classes that fall under a forbidden concept."""
    up = superclasses(ontology)
    forbidden = {r.concept for r in diagnosis.requirements if r.kind == NONE}
    out = set(diagnosis.concepts())
    for o in scene.objects:
        for c in o.concepts:
            if up.get(c, {c}) & forbidden:
                out.add(c)
    return sorted(out)


def check_inputs(scene: Scene, ontology: Ontology, diagnoses: Sequence[Diagnosis],
                 modifiable: Iterable[str] = ()) -> None:
    known = ontology.concept_names()
    for d in diagnoses:
        for c in sorted(d.concepts()):
            if c not in known:
                raise SceneError(f"diagnosis {d.name} refers to unknown concept {c!r}")
    for c in modifiable:
        if c not in known:
            raise SceneError(f"modifiable concept {c!r} is not in the ontology")
    reserved = re.compile(r"(ORIG|ADD|NOADD|DEL|NODEL)_|Named\Z")
    for c in known:
        if reserved.match(c):
            raise SceneError(f"concept name {c!r} is reserved")


def build_sckr(scene: Scene, ontology: Ontology, diagnoses: Sequence[Diagnosis],
               cfg: GenerationConfig | None = None, modifiable: Sequence[str] | None = None) -> SCKR:
    cfg = cfg or GenerationConfig()
    if modifiable is None:
        modifiable = cfg.modifiable
    if modifiable is None:
        modifiable = sorted({c for d in diagnoses for c in default_modifiable(scene, ontology, d)})
    modifiable = sorted(set(modifiable))
    check_inputs(scene, ontology, diagnoses, modifiable)
    mod = set(modifiable)

    exch_def, exch_strict, base_strict = [], [], []
    for c in modifiable:
        for kind in KINDS:
            exch_def.append(DefeasibleAxiom(REL, sub("Named", rhs=f"{kind}_{c}")))
        exch_strict += [sub(f"ORIG_{c}", f"NODEL_{c}", rhs=c), sub(f"ADD_{c}", rhs=c)]
        base_strict += [sub(f"ADD_{c}", f"NOADD_{c}", rhs=None), sub(f"DEL_{c}", f"NODEL_{c}", rhs=None)]
    base_strict += normalize(ontology.strict)
    facts = set(ontology.assertions)
    for o in scene.objects:
        facts.add(Assertion("Named", o.id))
        for c in o.concepts:
            facts.add(Assertion(f"ORIG_{c}" if c in mod else c, o.id))
    for f in fresh_names(scene, cfg.fresh_individuals):
        facts.add(Assertion("Named", f))

    contexts = [EXCH, BASE] + [d.context for d in diagnoses]
    if len(set(contexts)) != len(contexts):
        raise SceneError("diagnosis names must be distinct")
    edges = {(BASE, EXCH)} | {(d.context, BASE) for d in diagnoses}
    kbs = {
        EXCH: ContextKB(exch_strict, exch_def, ()),
        BASE: ContextKB(base_strict, normalize(ontology.defeasible), sorted(facts)),
    }
    return SCKR(ContextStructure(tuple(contexts), ((REL, frozenset(edges)),)), kbs)


@dataclass(frozen=True)
class Compiled:
    translation: Translation
    program: Program
    modifiable: tuple
    diagnoses: tuple


def compile_program(scene: Scene, ontology: Ontology, diagnoses: Sequence[Diagnosis],
                    cfg: GenerationConfig | None = None, modifiable: Sequence[str] | None = None) -> Compiled:
    """Translation, danger constraints and similarity weaks for one repository."""
    cfg = cfg or GenerationConfig()
    if modifiable is None:
        modifiable = cfg.modifiable
    if modifiable is None:
        modifiable = sorted({c for d in diagnoses for c in default_modifiable(scene, ontology, d)})
    modifiable = tuple(sorted(set(modifiable)))
    sckr = build_sckr(scene, ontology, diagnoses, cfg, modifiable)
    tr = translate(sckr, cfg.translation, modifiable)
    rules = [r for d in diagnoses for r in compile_diagnosis(d)]
    weaks = compile_similarity(cfg.costs, modifiable)
    return Compiled(tr, tr.program.extend(rules, weaks), modifiable, tuple(diagnoses))


def export_program(scene: Scene, ontology: Ontology, diagnoses: Sequence[Diagnosis],
                   cfg: GenerationConfig | None = None) -> str:
    return to_aspcore2(compile_program(scene, ontology, diagnoses, cfg).program)


# -- decoding --------------------------------------------------------------------------

_MOD = re.compile(r"(ADD|DEL)_(.+)\Z")


def modifications(atoms: Iterable, context: str | None = None) -> list[tuple]:
    """``(context, kind, individual, concept)`` for every ADD_C / DEL_C membership."""
    out = []
    for a in atoms:
        if a.predicate != "instd" or len(a.args) != 4 or a.args[3] != ENV:
            continue
        x, concept, ctx, _ = a.args
        if context is not None and ctx != context:
            continue
        m = _MOD.match(str(concept))
        if m:
            out.append((ctx, m.group(1), x, m.group(2)))
    return sorted(out, key=lambda t: tuple(map(str, t)))


def canonical_key(atoms) -> tuple:
    """Fewer modifications first, then the sorted modification list."""
    mods = [tuple(map(str, m)) for m in modifications(atoms)]
    return (len(mods), mods)


def diff_from_model(atoms, context: str, costs: CostConfig) -> SceneDiff:
    adds, dels = [], []
    for _, kind, x, c in modifications(atoms, context):
        (adds if kind == "ADD" else dels).append((x, c))
    return SceneDiff(context, len(adds) * costs.add + len(dels) * costs.delete, adds, dels)


# -- generation ------------------------------------------------------------------------

def _solve(compiled: Compiled, cfg: GenerationConfig, all_optima: bool):
    if cfg.solver == "external":
        models = run_external(compiled.program, cfg.solver_cmd, timeout=cfg.time_limit)
        models = sorted(models, key=lambda m: canonical_key(m.atoms))
        return models if all_optima else models[:1]
    prog = ground(compiled.program)
    if all_optima:
        return optimize(prog, all_optima=True, timeout=cfg.time_limit)
    return optimize(prog, all_optima=False, choose=canonical_key, timeout=cfg.time_limit)


def generate_one(scene: Scene, ontology: Ontology, diagnosis: Diagnosis,
                 cfg: GenerationConfig | None = None) -> list[SceneDiff]:
    """Diffs for one diagnosis: the canonical optimum, or every optimum with ``all_optima``."""
    cfg = cfg or GenerationConfig()
    compiled = compile_program(scene, ontology, [diagnosis], cfg)
    ctx = diagnosis.context
    try:
        models = _solve(compiled, cfg, cfg.all_optima)
    except SolveTimeout:
        return [SceneDiff(ctx, None, feasible=False, timed_out=True)]
    except TimeoutError:
        return [SceneDiff(ctx, None, feasible=False, timed_out=True)]
    if not models:
        return [SceneDiff(ctx, None, feasible=False)]
    if cfg.all_optima and compiled.translation.strategy == GENERAL:
        tr = compiled.translation
        decoded = [tr.decode_model(m.atoms) for m in models]
        keep = {id(d) for d in filter_preferred(tr.sckr, decoded)}
        models = [m for m, d in zip(models, decoded) if id(d) in keep]
    models = sorted(models, key=lambda m: canonical_key(m.atoms))
    diffs = list(dict.fromkeys(diff_from_model(m.atoms, ctx, cfg.costs) for m in models))
    return diffs


def _generate_task(args):
    return generate_one(*args)


def generate(scene: Scene, ontology: Ontology, diagnoses: Sequence[Diagnosis],
             cfg: GenerationConfig | None = None) -> list[SceneDiff]:
    cfg = cfg or GenerationConfig()
    check_inputs(scene, ontology, diagnoses, cfg.modifiable or ())
    fresh_names(scene, cfg.fresh_individuals)
    tasks = [(scene, ontology, d, cfg) for d in diagnoses]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_generate_task, tasks))
    else:
        results = [_generate_task(t) for t in tasks]
    out = [d for r in results for d in r]
    return sorted(out, key=lambda d: d.context)


def apply_diff(scene: Scene, diff: SceneDiff, fresh: Iterable[str] | None = None) -> Scene:
    """The scene after the diff; unknown individuals named ``f_<n>`` (or in ``fresh``) are created."""
    fresh = set(fresh) if fresh is not None else None
    objs = {o.id: list(o.concepts) for o in scene.objects}
    attrs = {o.id: o.attributes for o in scene.objects}
    order = list(scene.ids)
    for x, c in diff.deletions:
        if x not in objs or c not in objs[x]:
            raise SceneError(f"cannot delete {c}({x}): not an asserted membership")
        objs[x].remove(c)
    for x, c in diff.additions:
        if x not in objs:
            is_fresh = (x in fresh) if fresh is not None else bool(re.fullmatch(r"f_\d+", x))
            if not is_fresh:
                raise SceneError(f"cannot add {c}({x}): unknown individual")
            objs[x], attrs[x] = [], {}
            order.append(x)
        if c not in objs[x]:
            objs[x].append(c)
    return Scene(scene.scene_id, tuple(SceneObject(i, tuple(objs[i]), attrs[i]) for i in order))


def with_objects(scene: Scene, ids: Sequence[str]) -> Scene:
    keep = set(ids)
    return replace(scene, objects=tuple(o for o in scene.objects if o.id in keep))


__all__ = [
    "GenerationConfig", "SceneDiff", "build_sckr", "compile_program", "generate", "generate_one",
    "apply_diff", "diffs_to_json", "default_modifiable", "export_program", "modifications",
]
