"""Semirings, weighted formulas and algebraic measures over answer sets.

The scene cost is a product of one factor per modification atom,
``Pos(a) * Const(w) + Neg(a)``; over min-plus this adds ``w`` for every
modification that is made.  ``formula_to_weaks`` turns such a product into
weak constraints whose cost agrees with the formula on every interpretation.
"""
from __future__ import annotations

import json
import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from .asp import Atom, Program, WeakConstraint, is_stable, solve
from .asp.solver import BoundExceeded

INF = math.inf


@dataclass(frozen=True)
class Semiring:
    name: str
    plus: Callable[[Any, Any], Any]
    times: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    carrier: str
    contains: Callable[[Any], bool] = field(repr=False, default=lambda v: True)

    def sum(self, values: Iterable) -> Any:
        acc = self.zero
        for v in values:
            acc = self.plus(acc, v)
        return acc

    def product(self, values: Iterable) -> Any:
        acc = self.one
        for v in values:
            acc = self.times(acc, v)
        return acc


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


BOOLEAN = Semiring("boolean", lambda a, b: a or b, lambda a, b: a and b, False, True, "boolean",
                   lambda v: isinstance(v, bool))
MINPLUS = Semiring("min-plus", min, lambda a, b: a + b, INF, 0, "extended-natural",
                   lambda v: v == INF or (_is_int(v) and v >= 0))
NAT = Semiring("natural", lambda a, b: a + b, lambda a, b: a * b, 0, 1, "natural",
               lambda v: _is_int(v) and v >= 0)
INT = Semiring("integer", lambda a, b: a + b, lambda a, b: a * b, 0, 1, "integer", _is_int)

SEMIRINGS = {s.name: s for s in (BOOLEAN, MINPLUS, NAT, INT)}


# -- weighted formulas -----------------------------------------------------------

class Formula:
    def __add__(self, other: "Formula") -> "Sum":
        return Sum((self, other))

    def __mul__(self, other: "Formula") -> "Prod":
        return Prod((self, other))


@dataclass(frozen=True)
class Const(Formula):
    value: Any


@dataclass(frozen=True)
class Pos(Formula):
    atom: Atom


@dataclass(frozen=True)
class Neg(Formula):
    atom: Atom


@dataclass(frozen=True)
class Sum(Formula):
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class Prod(Formula):
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


def eval_weighted(formula: Formula, interpretation: Iterable[Atom], sr: Semiring):
    i = interpretation if isinstance(interpretation, (set, frozenset)) else set(interpretation)

    def ev(f):
        if isinstance(f, Const):
            if not sr.contains(f.value):
                raise ValueError(f"{f.value!r} is not in the carrier of {sr.name}")
            return f.value
        if isinstance(f, Pos):
            return sr.one if f.atom in i else sr.zero
        if isinstance(f, Neg):
            return sr.zero if f.atom in i else sr.one
        if isinstance(f, Sum):
            return sr.sum(ev(g) for g in f.items)
        if isinstance(f, Prod):
            return sr.product(ev(g) for g in f.items)
        raise TypeError(f"not a weighted formula: {f!r}")

    return ev(formula)


def formula_atoms(formula: Formula) -> set[Atom]:
    if isinstance(formula, (Pos, Neg)):
        return {formula.atom}
    if isinstance(formula, (Sum, Prod)):
        return set().union(*(formula_atoms(g) for g in formula.items)) if formula.items else set()
    return set()


def formula_to_json(formula: Formula):
    if isinstance(formula, Const):
        return {"const": "inf" if formula.value == INF else formula.value}
    if isinstance(formula, Pos):
        return {"pos": str(formula.atom)}
    if isinstance(formula, Neg):
        return {"neg": str(formula.atom)}
    key = "sum" if isinstance(formula, Sum) else "prod"
    return {key: [formula_to_json(g) for g in formula.items]}


def formula_from_json(data) -> Formula:
    """Inverse of ``formula_to_json``; atoms are written in program syntax."""
    from .asp import atom

    if not isinstance(data, dict) or len(data) != 1:
        raise ValueError(f"formula nodes are single-key objects, got {data!r}")
    (key, val), = data.items()
    if key == "const":
        return Const(INF if val in ("inf", "Infinity") else val)
    if key == "pos":
        return Pos(atom(val))
    if key == "neg":
        return Neg(atom(val))
    if key in ("sum", "prod"):
        items = tuple(formula_from_json(g) for g in val)
        return Sum(items) if key == "sum" else Prod(items)
    raise ValueError(f"unknown formula node {key!r}")


# -- measures --------------------------------------------------------------------

class NotAnAnswerSet(ValueError):
    pass


@dataclass(frozen=True)
class Measure:
    program: Program
    formula: Formula
    semiring: Semiring


def measure_weight(m: Measure, interpretation: Iterable[Atom], check: bool = True):
    i = frozenset(interpretation)
    if check:
        from .asp import ground

        if not is_stable(ground(m.program), i):
            raise NotAnAnswerSet("interpretation is not an answer set of the measure's program")
    return eval_weighted(m.formula, i, m.semiring)


def _answer_sets(m: Measure, max_models: int | None):
    models = solve(m.program) if max_models is None else solve(m.program, limit=max_models + 1)
    if max_models is not None and len(models) > max_models:
        raise BoundExceeded(f"more than {max_models} answer sets")
    return models


def atomic_query(m: Measure, a: Atom, max_models: int | None = None):
    models = _answer_sets(m, max_models)
    return m.semiring.sum(eval_weighted(m.formula, i, m.semiring) for i in models if a in i)


def overall_weight(m: Measure, max_models: int | None = None):
    models = _answer_sets(m, max_models)
    return m.semiring.sum(eval_weighted(m.formula, i, m.semiring) for i in models)


# -- scene cost ------------------------------------------------------------------

@dataclass(frozen=True)
class CostConfig:
    add: int = 1
    delete: int = 1
    disp: int = 2
    pdel: int = 2
    padd: int = 2
    pmod: int = 1
    allowed_superclasses: tuple = ("Vehicle", "Animal", "StreetSign")

    def __post_init__(self):
        object.__setattr__(self, "allowed_superclasses", tuple(self.allowed_superclasses))
        for name in ("add", "delete", "disp", "pdel", "padd", "pmod"):
            v = getattr(self, name)
            if not _is_int(v) or v < 0:
                raise ValueError(f"cost {name} must be a nonnegative integer, got {v!r}")
        if not (self.pdel == self.padd > self.pmod):
            warnings.warn("property costs usually satisfy pdel = padd > pmod", stacklevel=3)

    def to_json(self) -> dict:
        return {"add": self.add, "del": self.delete, "disp": self.disp, "pdel": self.pdel,
                "padd": self.padd, "pmod": self.pmod,
                "allowed_superclasses": list(self.allowed_superclasses)}


def load_costs(source: str | Path | Mapping | None = None) -> CostConfig:
    if source is None:
        return CostConfig()
    if not isinstance(source, Mapping):
        source = json.loads(Path(source).read_text(encoding="utf-8"))
    known = {"add", "del", "disp", "pdel", "padd", "pmod", "allowed_superclasses"}
    extra = set(source) - known
    if extra:
        raise ValueError(f"unknown cost keys: {', '.join(sorted(extra))}")
    kw = {("delete" if k == "del" else k): v for k, v in source.items()}
    return CostConfig(**kw)


KIND_TAGS = {
    "addition": "add",
    "deletion": "del",
    "displacement": "disp",
    "classVar": "classvar",
    "propertyVar": "propvar",
}


@dataclass(frozen=True)
class ModificationVocabulary:
    atoms: tuple
    distances: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))


def modification_vocabulary(concepts: Iterable[str], individuals: Iterable[str]) -> ModificationVocabulary:
    """addition/deletion atoms for every concept and individual."""
    concepts, individuals = sorted(concepts), sorted(individuals)
    atoms = [Atom(p, (c, i)) for p in ("addition", "deletion") for c in concepts for i in individuals]
    return ModificationVocabulary(tuple(atoms))


def _factor_weight(a: Atom, costs: CostConfig, distances: Mapping) -> int:
    p = a.predicate
    if p == "addition":
        return costs.add
    if p == "deletion":
        return costs.delete
    if p == "displacement":
        return costs.disp
    if p == "propertyVar":
        return costs.pmod
    if p == "classVar":
        _, c1, c2 = a.args
        d = distances.get((c1, c2))
        if d is None:
            d = distances.get((c2, c1))
        if d is None:
            raise ValueError(f"no class distance for {a}")
        return d
    raise ValueError(f"{a} is not a modification atom")


def build_cost_formula(costs: CostConfig, vocab: ModificationVocabulary) -> Formula:
    if not vocab.atoms:
        return Const(0)
    return Prod(tuple(Sum((Prod((Pos(a), Const(_factor_weight(a, costs, vocab.distances)))), Neg(a)))
                      for a in vocab.atoms))


class NotNormalForm(ValueError):
    pass


def _factor(f) -> tuple[Atom, int]:
    if isinstance(f, Sum) and len(f.items) == 2:
        left, right = f.items
        if isinstance(left, Neg):
            left, right = right, left
        if isinstance(right, Neg) and isinstance(left, Prod) and len(left.items) == 2:
            pos, w = left.items
            if isinstance(pos, Const):
                pos, w = w, pos
            if isinstance(pos, Pos) and isinstance(w, Const) and pos.atom == right.atom:
                if _is_int(w.value) and w.value >= 0:
                    return pos.atom, w.value
    raise NotNormalForm(f"not a cost factor: {f!r}")


def formula_to_weaks(formula: Formula) -> list[WeakConstraint]:
    if isinstance(formula, Const) and formula.value == 0:
        return []
    factors = formula.items if isinstance(formula, Prod) else (formula,)
    out, seen = [], set()
    for f in factors:
        a, w = _factor(f)
        if a in seen:
            raise NotNormalForm(f"atom {a} occurs in two factors")
        seen.add(a)
        tag = KIND_TAGS.get(a.predicate, a.predicate)
        out.append(WeakConstraint((a,), (), w, (tag,) + a.args))
    return out


# -- class variation distance ----------------------------------------------------

def _up_distances(edges: Mapping[str, set], start: str) -> dict[str, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for s in sorted(edges.get(c, ())):
            if s not in dist:
                dist[s] = dist[c] + 1
                queue.append(s)
    return dist


def _check_acyclic(edges: Mapping[str, set]) -> None:
    state: dict[str, int] = {}
    for root in edges:
        if root in state:
            continue
        stack = [(root, iter(sorted(edges.get(root, ()))))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                raise ValueError(f"subsumption cycle through {nxt}")
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(sorted(edges.get(nxt, ())))))


def lowest_common_superclass(subsumptions: Iterable[tuple[str, str]], c1: str, c2: str,
                             allowed: Iterable[str]) -> tuple[str, int] | None:
    """Allowed superclass minimizing the summed chain length, ties by name."""
    edges: dict[str, set] = {}
    for sub_, sup in subsumptions:
        edges.setdefault(sub_, set()).add(sup)
    _check_acyclic(edges)
    d1, d2 = _up_distances(edges, c1), _up_distances(edges, c2)
    best = None
    for cs in sorted(set(allowed)):
        if cs in d1 and cs in d2:
            cand = (d1[cs] + d2[cs], cs)
            if best is None or cand < best:
                best = cand
    return None if best is None else (best[1], best[0])


def class_distance(subsumptions: Iterable[tuple[str, str]], c1: str, c2: str,
                   allowed: Iterable[str]) -> int | None:
    if c1 == c2:
        return 0
    found = lowest_common_superclass(subsumptions, c1, c2, allowed)
    return None if found is None else found[1]


def atomic_edges(axioms: Iterable) -> set[tuple[str, str]]:
    """(sub, super) pairs of the atomic inclusions ``A ⊑ B`` among ``axioms``."""
    out = set()
    for ax in axioms:
        if getattr(ax, "is_atomic_inclusion", False):
            out.add((ax.lhs[0].name, ax.rhs.name))
    return out
