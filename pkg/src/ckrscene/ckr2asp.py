"""Compile simple CKRs into answer-set programs.

Every derived membership is an atom ``instd(X, Concept, Context, main)``.
Strict axioms become rules at each context below their owner; ⊥-axioms
become constraints.  Defeasible axioms are handled in one of two ways:

* ``general``: an application rule guarded by ``not ovr(id, X, c)`` and one
  ``ovr`` rule per clash partner, so an override is derived exactly when its
  clashing set holds;
* ``specialized``: complementary pairs of defaults (same body, disjoint
  heads) become the two either/or rules ``D :- body, not E`` and
  ``E :- body, not D``.  Anything else is rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .asp import Atom, Program, Rule, Var, WeakConstraint
from .kb import SCKR, Assertion, Atomic, Bottom, Eval, ParseError, Subsumption
from .measures import CostConfig
from .oracle import (
    CASInterpretation,
    ClashingAssumption,
    ContextModel,
    _compile,
    clash_partners,
    make_chi,
    mp_minimal,
)

ENV = "main"
GENERAL = "general"
SPECIALIZED = "specialized"
_X = Var("X")
_CTX = Var("Context")


class ShapeError(ValueError):
    """The repository does not have the shape a translation requires."""


def instd(x, concept, context) -> Atom:
    return Atom("instd", (x, concept, context, ENV))


@dataclass(frozen=True)
class DecodedModel:
    per_context: Mapping[str, frozenset]
    assumptions: frozenset = frozenset()
    atoms: frozenset = field(default=frozenset(), compare=False, repr=False)

    def as_cas(self, sckr: SCKR) -> CASInterpretation:
        per = {c: frozenset(self.per_context.get(c, ())) for c in sckr.contexts}
        return CASInterpretation(ContextModel(per), make_chi(sckr, self.assumptions))

    def key(self) -> tuple:
        return (tuple(sorted(a.key() for a in self.assumptions)),
                tuple(sorted((c, a.concept, a.individual) for c, s in self.per_context.items() for a in s)))


@dataclass(frozen=True)
class Translation:
    strategy: str
    program: Program
    sckr: SCKR
    overrides: Mapping[str, tuple] = field(default_factory=dict)  # ovr id -> (relation, axiom)

    def decode(self, a: Atom):
        """``(individual, concept, context)`` for instd atoms, else ``None``."""
        if a.predicate == "instd" and len(a.args) == 4 and a.args[3] == ENV:
            return (a.args[0], a.args[1], a.args[2])
        return None

    @property
    def decode_map(self) -> dict:
        sig = self.sckr.signature
        return {instd(e, c, ctx): (e, c, ctx)
                for e in sorted(sig.individuals) for c in sorted(sig.concepts) for ctx in self.sckr.contexts}

    def decode_model(self, atoms: Iterable[Atom]) -> DecodedModel:
        atoms = frozenset(atoms)
        per: dict[str, set] = {c: set() for c in self.sckr.contexts}
        chi = set()
        for a in atoms:
            d = self.decode(a)
            if d is not None:
                e, concept, ctx = d
                per.setdefault(ctx, set()).add(Assertion(concept, e))
            elif a.predicate == "ovr" and a.args[0] in self.overrides:
                rel, ax = self.overrides[a.args[0]]
                chi.add(ClashingAssumption(rel, a.args[2], a.args[1], ax))
        return DecodedModel({c: frozenset(s) for c, s in per.items()}, frozenset(chi), atoms)


def _ref_atom(ref, context):
    if isinstance(ref, Eval):
        return instd(_X, ref.concept, ref.context)
    return instd(_X, ref.name, context)


def _body(lhs, context) -> list[Atom]:
    return [_ref_atom(r, context) for r in lhs]


def _common(sckr: SCKR) -> tuple[list[Rule], dict]:
    """Facts and strict rules, plus the guarded applications per context."""
    comp = _compile(sckr)
    rules: list[Rule] = []
    guarded: dict[str, list] = {}
    for c in sckr.contexts:
        for a in sorted(comp.facts[c]):
            rules.append(Rule(instd(a.individual, a.concept, c)))
    for c in sckr.contexts:
        for ax, guards in comp.apps[c]:
            if guards is not None:
                guarded.setdefault(c, []).append((ax, guards))
                continue
            body = _body(ax.lhs, c)
            head = None if ax.rhs is Bottom else instd(_X, ax.rhs.name, c)
            rules.append(Rule(head, body))
    return rules, guarded


def _axiom_ids(sckr: SCKR) -> dict:
    keys = sorted({(d.relation, d.axiom) for _, d in sckr.defeasible_axioms()},
                  key=lambda k: (k[0], k[1].sort_key()))
    return {k: f"d{n}" for n, k in enumerate(keys)}


def translate_general(sckr: SCKR) -> Translation:
    rules, guarded = _common(sckr)
    ids = _axiom_ids(sckr)
    for c in sckr.contexts:
        for ax, guards in guarded.get(c, ()):
            partners = clash_partners(sckr, ax, c)
            if not partners:
                raise ShapeError(f"no clashing set can justify overriding {ax} at {c}")
            body = _body(ax.lhs, c)
            for g in sorted(guards):
                ovr = Atom("ovr", (ids[(g, ax)], _X, c))
                head = None if ax.rhs is Bottom else instd(_X, ax.rhs.name, c)
                rules.append(Rule(head, body, [ovr]))
                for rest in partners:
                    rules.append(Rule(ovr, body + _body(rest, c)))
    overrides = {i: k for k, i in ids.items()}
    return Translation(GENERAL, Program(_dedupe(rules)), sckr, overrides)


def _complement(sckr: SCKR, c: str, ax: Subsumption, guards, pool) -> Subsumption:
    if ax.rhs is Bottom:
        raise ShapeError(f"defeasible constraint {ax} has no either/or form")
    partners = clash_partners(sckr, ax, c)
    if len(partners) != 1 or len(partners[0]) != 1 or not isinstance(partners[0][0], Atomic):
        raise ShapeError(f"{ax} at {c} needs exactly one atomic disjointness partner")
    other = partners[0][0]
    for ax2, g2 in pool:
        if ax2.lhs == ax.lhs and ax2.rhs == other and g2 == guards:
            if clash_partners(sckr, ax2, c) == [(ax.rhs,)]:
                return ax2
    raise ShapeError(f"{ax} at {c} has no complementary default")


def translate_specialized(sckr: SCKR, modifiable: Sequence[str] | None = None) -> Translation:
    rules, guarded = _common(sckr)
    for c in sckr.contexts:
        pool = guarded.get(c, [])
        for ax, guards in pool:
            other = _complement(sckr, c, ax, guards, pool)
            rules.append(Rule(instd(_X, ax.rhs.name, c), _body(ax.lhs, c), [instd(_X, other.rhs.name, c)]))
    if modifiable:
        heads = {d.axiom.rhs for _, d in sckr.defeasible_axioms() if isinstance(d.axiom, Subsumption)}
        for concept in modifiable:
            for kind in ("ADD", "NOADD", "DEL", "NODEL"):
                if Atomic(f"{kind}_{concept}") not in heads:
                    raise ShapeError(f"modifiable concept {concept} lacks the {kind}_{concept} default")
    return Translation(SPECIALIZED, Program(_dedupe(rules)), sckr)


def translate(sckr: SCKR, strategy: str = SPECIALIZED, modifiable: Sequence[str] | None = None) -> Translation:
    if strategy == GENERAL:
        return translate_general(sckr)
    if strategy == SPECIALIZED:
        return translate_specialized(sckr, modifiable)
    raise ValueError(f"unknown translation {strategy!r}")


def _dedupe(rules):
    return list(dict.fromkeys(rules))


# -- diagnoses -----------------------------------------------------------------------

SOME, NONE = "some", "none"


@dataclass(frozen=True)
class Requirement:
    kind: str
    concept: str

    def __str__(self) -> str:
        return f"{self.kind} {self.concept}"


@dataclass(frozen=True)
class Diagnosis:
    name: str
    requirements: tuple

    def __post_init__(self):
        object.__setattr__(self, "requirements", tuple(self.requirements))
        if not self.requirements:
            raise ValueError(f"diagnosis {self.name} has no requirements")
        if not re.fullmatch(r"[a-z][a-z0-9_]*", self.name):
            raise ValueError(f"diagnosis names are lowercase identifiers, got {self.name!r}")
        for r in self.requirements:
            if r.kind not in (SOME, NONE):
                raise ValueError(f"unknown requirement kind {r.kind!r}")

    @property
    def context(self) -> str:
        return f"c_{self.name}"

    def concepts(self) -> set[str]:
        return {r.concept for r in self.requirements}


_DX_TOKEN = re.compile(r"\s+|#[^\n]*|%[^\n]*|(?P<tok>[A-Za-z_][A-Za-z0-9_]*|[{};])")


def parse_diagnoses(text: str) -> list[Diagnosis]:
    """``diagnosis NAME { some C; none D; }`` blocks."""
    toks: list[tuple[str, int]] = []
    pos, line = 0, 1
    while pos < len(text):
        m = _DX_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, 0)
        if m.group("tok"):
            toks.append((m.group("tok"), line))
        line += m.group(0).count("\n")
        pos = m.end()
    out, i = [], 0

    def need(pred, what):
        nonlocal i
        if i >= len(toks):
            raise ParseError(f"expected {what}, found end of input", line, 0)
        tok, ln = toks[i]
        if not pred(tok):
            raise ParseError(f"expected {what}, found {tok!r}", ln, 0)
        i += 1
        return tok

    names = set()
    while i < len(toks):
        need(lambda t: t == "diagnosis", "'diagnosis'")
        name = need(lambda t: t not in "{};", "a diagnosis name")
        ln = toks[i - 1][1]
        need(lambda t: t == "{", "'{'")
        reqs = []
        while i < len(toks) and toks[i][0] != "}":
            kind = need(lambda t: t in (SOME, NONE), "'some' or 'none'")
            concept = need(lambda t: t not in "{};", "a concept")
            need(lambda t: t == ";", "';'")
            reqs.append(Requirement(kind, concept))
        need(lambda t: t == "}", "'}'")
        if name in names:
            raise ParseError(f"duplicate diagnosis {name}", ln, 0)
        names.add(name)
        try:
            out.append(Diagnosis(name, reqs))
        except ValueError as exc:
            raise ParseError(str(exc), ln, 0) from None
    return out


def render_diagnoses(diagnoses: Iterable[Diagnosis]) -> str:
    blocks = []
    for d in diagnoses:
        body = " ".join(f"{r.kind} {r.concept};" for r in d.requirements)
        blocks.append(f"diagnosis {d.name} {{ {body} }}")
    return "\n".join(blocks) + "\n"


def compile_diagnosis(d: Diagnosis, context: str | None = None) -> list[Rule]:
    context = d.context if context is None else context
    out = []
    for k, req in enumerate(d.requirements, 1):
        found = Atom(f"found_{d.name}_{k}")
        out.append(Rule(found, [instd(_X, req.concept, context)]))
        if req.kind == SOME:
            out.append(Rule(None, [], [found]))
        else:
            out.append(Rule(None, [found]))
    return out


def compile_similarity(costs: CostConfig, modifiable: Iterable[str],
                       contexts: Iterable[str] | None = None) -> list[WeakConstraint]:
    """One weak per modifiable concept and kind (per context when contexts are given)."""
    ctxs = [_CTX] if contexts is None else list(contexts)
    out = []
    for concept in modifiable:
        for kind, w in (("ADD", costs.add), ("DEL", costs.delete)):
            name = f"{kind}_{concept}"
            for ctx in ctxs:
                out.append(WeakConstraint([instd(_X, name, ctx)], [], w, (_X, name, ctx)))
    return out


def compile_modification_atoms(modifiable: Iterable[str], contexts: Iterable[str] | None = None) -> list[Rule]:
    """``addition(C, X, Ctx)`` / ``deletion(C, X, Ctx)`` from the ADD_C / DEL_C memberships."""
    ctxs = [_CTX] if contexts is None else list(contexts)
    out = []
    for concept in modifiable:
        for pred, kind in (("addition", "ADD"), ("deletion", "DEL")):
            for ctx in ctxs:
                out.append(Rule(Atom(pred, (concept, _X, ctx)), [instd(_X, f"{kind}_{concept}", ctx)]))
    return out


def filter_preferred(sckr: SCKR, models: list) -> list:
    """Models whose override maps are not beaten under the multi-relational preference."""
    if all(not m.assumptions for m in models):
        return list(models)
    cas = {id(m): m.as_cas(sckr) for m in models}
    return mp_minimal(sckr, list(models), chi_of=lambda m: cas[id(m)])
