"""Brute-force reference semantics for simple contextual knowledge repositories.

Interpretations range over the named individuals only (the same set in every
context), so each candidate set of clashing assumptions has a unique least
model and justification reduces to membership of a clashing set in it.
Nothing here is clever: candidates are enumerated exhaustively.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .kb import SCKR, Assertion, Atomic, Bottom, Eval, Subsumption


class BoundExceeded(RuntimeError):
    pass


class NoClashingSet(ValueError):
    pass


class Preference(enum.Enum):
    FIRST = "first-preferred"
    SECOND = "second-preferred"
    NEITHER = "neither"


@dataclass(frozen=True)
class ClashingAssumption:
    """``<axiom, individual>`` overridden at ``context`` for ``relation``."""

    relation: str
    context: str
    individual: str
    axiom: Subsumption

    def __lt__(self, other):  # Subsumption has no ordering of its own
        return self.key() < other.key()

    def key(self) -> tuple:
        return (self.relation, self.context, self.individual, self.axiom.sort_key())

    def __str__(self) -> str:
        return f"<{self.axiom}, {self.individual}>@{self.context}[{self.relation}]"


@dataclass(frozen=True)
class ContextModel:
    per_context: Mapping[str, frozenset]
    inconsistent: frozenset = frozenset()

    def holds(self, concept: str, individual: str, context: str) -> bool:
        return Assertion(concept, individual) in self.per_context.get(context, ())

    def key(self) -> frozenset:
        return frozenset((c, a) for c, s in self.per_context.items() for a in s)


@dataclass(frozen=True)
class CASInterpretation:
    model: ContextModel
    chi: Mapping[str, Mapping[str, frozenset]]

    def assumptions(self) -> frozenset:
        return frozenset(a for per_ctx in self.chi.values() for s in per_ctx.values() for a in s)

    def chi_at(self, relation: str, context: str) -> frozenset:
        return self.chi.get(relation, {}).get(context, frozenset())

    def key(self) -> tuple:
        return (self.model.key(), self.assumptions())


def make_chi(sckr: SCKR, assumptions: Iterable[ClashingAssumption]) -> dict:
    chi = {r: {c: set() for c in sckr.contexts} for r in sckr.structure.relation_names}
    for a in assumptions:
        chi[a.relation][a.context].add(a)
    return {r: {c: frozenset(s) for c, s in m.items()} for r, m in chi.items()}


# -- applicability ------------------------------------------------------------

@dataclass(frozen=True)
class _Compiled:
    facts: Mapping[str, frozenset]
    # context -> ((axiom, guarding relations or None when unconditional), ...)
    apps: Mapping[str, tuple]
    # (relation, axiom) -> contexts where the axiom is applied under a guard
    guarded: Mapping[tuple, frozenset]


_CACHE: dict[int, tuple[SCKR, _Compiled]] = {}


def _compile(sckr: SCKR) -> _Compiled:
    hit = _CACHE.get(id(sckr))
    if hit is not None and hit[0] is sckr:
        return hit[1]
    st = sckr.structure
    facts: dict[str, set] = {c: set() for c in sckr.contexts}
    apps: dict[str, dict] = {c: {} for c in sckr.contexts}
    for c in sckr.contexts:
        kb = sckr.kbs[c]
        for c2 in st.down_all(c):
            facts[c2].update(kb.assertions)
            for ax in kb.strict:
                apps[c2][ax] = None
    strict_at: dict[tuple, set] = {}
    eligible_at: dict[tuple, set] = {}
    for c, d in sckr.defeasible_axioms():
        k = (d.relation, d.axiom)
        for c1 in st.down_except(c, d.relation):
            strict_at.setdefault(k, set()).add(c1)
            eligible_at.setdefault(k, set()).update(st.below(c1, d.relation))
    for k in strict_at:
        for c2 in strict_at[k]:
            apps[c2][k[1]] = None
    guarded = {}
    for k, ctxs in eligible_at.items():
        rel, ax = k
        g = {c2 for c2 in ctxs - strict_at[k] if apps[c2].get(ax, ()) is not None}
        for c2 in g:
            apps[c2][ax] = apps[c2].get(ax, frozenset()) | {rel}
        guarded[k] = frozenset(g)
    compiled = _Compiled({c: frozenset(f) for c, f in facts.items()},
                         {c: tuple(sorted(a.items(), key=lambda kv: kv[0].sort_key())) for c, a in apps.items()},
                         guarded)
    if len(_CACHE) > 256:
        _CACHE.clear()
    _CACHE[id(sckr)] = (sckr, compiled)
    return compiled


def eligible_assumptions(sckr: SCKR) -> list[ClashingAssumption]:
    comp = _compile(sckr)
    out = []
    for (rel, ax), ctxs in comp.guarded.items():
        for c in ctxs:
            for e in sckr.individuals:
                out.append(ClashingAssumption(rel, c, e, ax))
    return sorted(out)


def _body_holds(lhs: Iterable, e: str, c: str, model: Mapping[str, set]) -> bool:
    for r in lhs:
        if isinstance(r, Eval):
            if Assertion(r.concept, e) not in model.get(r.context, ()):
                return False
        elif Assertion(r.name, e) not in model[c]:
            return False
    return True


def least_model(sckr: SCKR, chi: Mapping | Iterable[ClashingAssumption] = ()) -> ContextModel:
    """Least fixpoint of strict, unguarded-defeasible and guarded-defeasible axioms."""
    comp = _compile(sckr)
    overridden = {(a.relation, a.axiom, a.individual, a.context) for a in _flatten_chi(chi)}
    model = {c: set(comp.facts[c]) for c in sckr.contexts}
    bottom: set[str] = set()
    individuals = sckr.individuals
    changed = True
    while changed:
        changed = False
        for c in sckr.contexts:
            for ax, guards in comp.apps[c]:
                for e in individuals:
                    if guards is not None and all((g, ax, e, c) in overridden for g in guards):
                        continue
                    if not _body_holds(ax.lhs, e, c, model):
                        continue
                    if ax.rhs is Bottom:
                        bottom.add(c)
                    else:
                        a = Assertion(ax.rhs.name, e)
                        if a not in model[c]:
                            model[c].add(a)
                            changed = True
    return ContextModel({c: frozenset(s) for c, s in model.items()}, frozenset(bottom))


def _flatten_chi(chi) -> list[ClashingAssumption]:
    if isinstance(chi, CASInterpretation):
        return list(chi.assumptions())
    if isinstance(chi, Mapping):
        return [a for per_ctx in chi.values() for s in per_ctx.values() for a in s]
    return list(chi)


def check_cas_model(sckr: SCKR, cas: CASInterpretation) -> bool:
    comp = _compile(sckr)
    eligible = set(eligible_assumptions(sckr))
    if any(a not in eligible for a in cas.assumptions()):
        return False
    if cas.model.inconsistent:
        return False
    model = {c: set(cas.model.per_context.get(c, ())) for c in sckr.contexts}
    overridden = {(a.relation, a.axiom, a.individual, a.context) for a in cas.assumptions()}
    for c in sckr.contexts:
        if not comp.facts[c] <= model[c]:
            return False
        for ax, guards in comp.apps[c]:
            for e in sckr.individuals:
                if guards is not None and all((g, ax, e, c) in overridden for g in guards):
                    continue
                if _body_holds(ax.lhs, e, c, model):
                    if ax.rhs is Bottom or Assertion(ax.rhs.name, e) not in model[c]:
                        return False
    return True


# -- clashing sets and justification ------------------------------------------

def disjointness_closure(axioms: Iterable[Subsumption]) -> list[Subsumption]:
    """Bottom axioms closed under atomic subsumption on their binary members."""
    axioms = list(axioms)
    supers: dict[str, set] = {}
    for ax in axioms:
        if ax.is_atomic_inclusion:
            supers.setdefault(ax.lhs[0].name, set()).add(ax.rhs.name)

    def up(c):
        seen, stack = {c}, [c]
        while stack:
            for s in supers.get(stack.pop(), ()):
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        return seen

    concepts = set(supers) | {s for v in supers.values() for s in v}
    out = {ax for ax in axioms if ax.rhs is Bottom}
    pairs = [tuple(r.name for r in ax.lhs) for ax in out
             if len(ax.lhs) == 2 and all(isinstance(r, Atomic) for r in ax.lhs)]
    for a, b in pairs:
        for x in concepts | {a, b}:
            ux = up(x)
            for y in concepts | {a, b}:
                if x != y and ((a in ux and b in up(y)) or (b in ux and a in up(y))):
                    out.add(Subsumption((Atomic(min(x, y)), Atomic(max(x, y))), Bottom))
    return sorted(out, key=Subsumption.sort_key)


def clashing_sets(axiom: Subsumption, e: str, disjointness: Iterable[Subsumption]) -> list[frozenset]:
    """All clashing sets derivable from the given bottom axioms, smallest first."""
    body = {Assertion(r.name, e) for r in axiom.lhs if isinstance(r, Atomic)}
    if axiom.rhs is Bottom:
        return [frozenset(body)]
    d = axiom.rhs
    out = set()
    for beta in disjointness:
        if beta.rhs is not Bottom or d not in beta.lhs or beta.has_eval:
            continue
        rest = list(beta.lhs)
        rest.remove(d)
        out.add(frozenset(body | {Assertion(r.name, e) for r in rest}))
    return sorted(out, key=lambda s: sorted((a.concept, a.individual) for a in s))


def clashing_set(axiom: Subsumption, e: str, disjointness: Iterable[Subsumption]) -> frozenset:
    options = clashing_sets(axiom, e, disjointness)
    if not options:
        raise NoClashingSet(f"no clashing set for <{axiom}, {e}>")
    return options[0]


def clash_partners(sckr: SCKR, axiom: Subsumption, context: str) -> list[tuple]:
    """Conjunct lists whose truth (together with the body) contradicts ``axiom`` at ``context``.

    For a bottom axiom that is the empty list (the body alone clashes); for an
    atomic right-hand side ``D`` it is the rest of every strict bottom axiom in
    force at ``context`` that mentions ``D``.
    """
    if axiom.rhs is Bottom:
        return [()]
    st = sckr.structure
    out = []
    for c, beta in sckr.strict_axioms():
        if beta.rhs is Bottom and axiom.rhs in beta.lhs and context in st.down_all(c):
            rest = list(beta.lhs)
            rest.remove(axiom.rhs)
            if tuple(rest) not in out:
                out.append(tuple(rest))
    return out


def _justified(sckr: SCKR, a: ClashingAssumption, model: Mapping[str, frozenset]) -> bool:
    if not _body_holds(a.axiom.lhs, a.individual, a.context, model):
        return False
    return any(_body_holds(rest, a.individual, a.context, model)
               for rest in clash_partners(sckr, a.axiom, a.context))


def is_justified(sckr: SCKR, cas: CASInterpretation) -> bool:
    return all(_justified(sckr, a, cas.model.per_context) for a in cas.assumptions())


# -- preference -----------------------------------------------------------------

def _origins(sckr: SCKR, relation: str, axiom: Subsumption, context: str) -> set[str]:
    """Contexts ``cb`` with ``owner >=_{-i} cb >_i context`` for some owner of ``D_i(axiom)``."""
    st = sckr.structure
    out = set()
    for c, d in sckr.defeasible_axioms():
        if d.relation == relation and d.axiom == axiom:
            out.update(cb for cb in st.down_except(c, relation) if st.is_below(context, cb, relation))
    return out


def _lp_prefers(sckr: SCKR, chi1: frozenset, chi2: frozenset, context: str, relation: str) -> bool:
    st = sckr.structure
    k1 = {(a.axiom, a.individual) for a in chi1}
    k2 = {(a.axiom, a.individual) for a in chi2}
    d2 = k2 - k1
    for ax1, _ in k1 - k2:
        o1 = _origins(sckr, relation, ax1, context)
        if not any(st.is_below(cb2, cb1, relation)
                   for ax2, _ in d2
                   for cb2 in _origins(sckr, relation, ax2, context)
                   for cb1 in o1):
            return False
    return True


def lp_compare(chi1: Iterable, chi2: Iterable, context: str, relation: str, sckr: SCKR) -> Preference:
    chi1, chi2 = frozenset(chi1), frozenset(chi2)
    p12 = _lp_prefers(sckr, chi1, chi2, context, relation)
    p21 = _lp_prefers(sckr, chi2, chi1, context, relation)
    if p12 and not p21:
        return Preference.FIRST
    if p21 and not p12:
        return Preference.SECOND
    return Preference.NEITHER


def _clause_i(sckr: SCKR, cas1, cas2, relation: str) -> bool:
    verdicts = [lp_compare(cas1.chi_at(relation, c), cas2.chi_at(relation, c), c, relation, sckr)
                for c in sckr.contexts]
    return Preference.FIRST in verdicts and Preference.SECOND not in verdicts


def mp_compare(cas1: CASInterpretation, cas2: CASInterpretation, sckr: SCKR) -> Preference:
    for rel in sckr.structure.relation_names:
        if _clause_i(sckr, cas1, cas2, rel):
            return Preference.FIRST
        if _clause_i(sckr, cas2, cas1, rel):
            return Preference.SECOND
    return Preference.NEITHER


def mp_minimal(sckr: SCKR, items: list, chi_of=lambda x: x) -> list:
    """Keep items whose CAS is not beaten by any other item's CAS."""
    keep = []
    for x in items:
        cx = chi_of(x)
        if not any(mp_compare(chi_of(y), cx, sckr) is Preference.FIRST for y in items if y is not x):
            keep.append(x)
    return keep


def enumerate_ckr_models(sckr: SCKR, max_assumptions: int = 20) -> list[CASInterpretation]:
    eligible = eligible_assumptions(sckr)
    if len(eligible) > max_assumptions:
        raise BoundExceeded(f"{len(eligible)} eligible clashing assumptions exceed the bound {max_assumptions}")
    justified = []
    for k in range(len(eligible) + 1):
        for subset in combinations(eligible, k):
            model = least_model(sckr, subset)
            if model.inconsistent:
                continue
            if all(_justified(sckr, a, model.per_context) for a in subset):
                justified.append(CASInterpretation(model, make_chi(sckr, subset)))
    models = mp_minimal(sckr, justified)
    return sorted(models, key=lambda m: (sorted(a.key() for a in m.assumptions()),
                                         sorted((c, a.concept, a.individual) for c, a in m.model.key())))
