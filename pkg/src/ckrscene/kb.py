"""Ontologies, contexts and scenes: the vocabulary shared by every other module.

The description-logic fragment is deliberately small: concept names,
conjunctive left-hand sides (optionally with ``eval`` lookups into another
context) and an atomic or bottom right-hand side.  Negated right-hand sides
are written as bottom axioms (``Dog & DangerousAnimal bottom``).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        loc = f"{line}:{column}: " if line else ""
        super().__init__(f"{loc}{message}")


class SceneError(ValueError):
    pass


# -- concepts and axioms ------------------------------------------------------

@dataclass(frozen=True, order=True)
class Atomic:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Eval:
    concept: str
    context: str

    def __str__(self) -> str:
        return f"eval({self.concept},{self.context})"


class _BottomType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Bottom"

    def __str__(self) -> str:
        return "bottom"

    def __reduce__(self):
        return (_BottomType, ())

    def __lt__(self, other):
        return not isinstance(other, _BottomType)


Bottom = _BottomType()
ConceptRef = Union[Atomic, Eval, _BottomType]


@dataclass(frozen=True)
class Subsumption:
    """``lhs[0] & ... & lhs[n] <= rhs`` with ``rhs`` atomic or bottom."""

    lhs: tuple
    rhs: ConceptRef

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        if not self.lhs:
            raise ValueError("subsumption needs a nonempty left-hand side")
        for ref in self.lhs:
            if not isinstance(ref, (Atomic, Eval)):
                raise ValueError(f"illegal left-hand conjunct {ref!r}")
        if not (self.rhs is Bottom or isinstance(self.rhs, Atomic)):
            raise ValueError(f"illegal right-hand side {self.rhs!r}")

    @property
    def has_eval(self) -> bool:
        return any(isinstance(r, Eval) for r in self.lhs)

    @property
    def is_atomic_inclusion(self) -> bool:
        return len(self.lhs) == 1 and isinstance(self.lhs[0], Atomic) and isinstance(self.rhs, Atomic)

    def concept_names(self) -> set[str]:
        names = {r.name if isinstance(r, Atomic) else r.concept for r in self.lhs}
        if isinstance(self.rhs, Atomic):
            names.add(self.rhs.name)
        return names

    def sort_key(self) -> tuple:
        return (tuple(str(r) for r in self.lhs), str(self.rhs))

    def __str__(self) -> str:
        return " & ".join(map(str, self.lhs)) + " <= " + ("⊥" if self.rhs is Bottom else str(self.rhs))


def sub(*lhs: str, rhs: str | None) -> Subsumption:
    """Shorthand used in tests and fixtures; ``rhs=None`` means bottom."""
    return Subsumption(tuple(Atomic(n) for n in lhs), Bottom if rhs is None else Atomic(rhs))


@dataclass(frozen=True)
class Or:
    """Top-level disjunction of conjunctions (or nested ``Or``) on a left-hand side."""

    alternatives: tuple


@dataclass(frozen=True)
class DisjunctiveSubsumption:
    lhs: Or
    rhs: ConceptRef


@dataclass(frozen=True)
class DefeasibleAxiom:
    relation: str
    axiom: Subsumption | DisjunctiveSubsumption

    def __str__(self) -> str:
        return f"D_{self.relation}({self.axiom})"


@dataclass(frozen=True, order=True)
class Assertion:
    concept: str
    individual: str

    def __str__(self) -> str:
        return f"{self.concept}({self.individual})"


# -- contexts -----------------------------------------------------------------

def _closure(edges: Iterable[tuple[str, str]]) -> set[tuple[str, str]]:
    succ: dict[str, set[str]] = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    closed = set()
    for start in list(succ):
        stack = list(succ[start])
        seen: set[str] = set()
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(succ.get(n, ()))
        closed.update((start, n) for n in seen)
    return closed


@dataclass(frozen=True)
class ContextStructure:
    """Contexts plus named relations given as ``(child, parent)`` edge sets.

    ``child`` is the more specific context.  Relations keep declaration order,
    which is the order used by model preference.
    """

    contexts: tuple
    relations: tuple  # ((name, frozenset of (child, parent)), ...)

    def __post_init__(self):
        object.__setattr__(self, "contexts", tuple(self.contexts))
        rels = self.relations.items() if isinstance(self.relations, Mapping) else self.relations
        object.__setattr__(self, "relations", tuple((n, frozenset(e)) for n, e in rels))
        object.__setattr__(self, "_cache", {})

    @property
    def relation_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    def edges(self, relation: str) -> frozenset:
        for n, e in self.relations:
            if n == relation:
                return e
        raise KeyError(relation)

    def strict(self, relation: str) -> frozenset:
        """Transitive closure of one relation: pairs ``(a, b)`` with ``a < b``."""
        key = ("strict", relation)
        if key not in self._cache:
            self._cache[key] = frozenset(_closure(self.edges(relation)))
        return self._cache[key]

    def _down(self, c: str, relations: Iterable[str]) -> frozenset:
        key = ("down", c, tuple(relations))
        if key not in self._cache:
            edges = [e for n, es in self.relations if n in key[2] for e in es]
            below = {a for a, b in _closure(edges) if b == c}
            self._cache[key] = frozenset(below | {c})
        return self._cache[key]

    def down_all(self, c: str) -> frozenset:
        """Contexts ``c'`` with ``c' <=_* c`` (reflexive, along any relation)."""
        return self._down(c, self.relation_names)

    def down_except(self, c: str, relation: str) -> frozenset:
        """Contexts ``c'`` with ``c' <=_{-relation} c``."""
        return self._down(c, [n for n in self.relation_names if n != relation])

    def below(self, c: str, relation: str) -> frozenset:
        """Contexts strictly below ``c`` along ``relation``."""
        return frozenset(a for a, b in self.strict(relation) if b == c)

    def is_below(self, a: str, b: str, relation: str) -> bool:
        return (a, b) in self.strict(relation)


@dataclass(frozen=True)
class ContextKB:
    strict: tuple = ()
    defeasible: tuple = ()
    assertions: tuple = ()

    def __post_init__(self):
        for f in ("strict", "defeasible", "assertions"):
            object.__setattr__(self, f, tuple(getattr(self, f)))


@dataclass(frozen=True)
class Signature:
    concepts: frozenset
    individuals: frozenset
    contexts: frozenset
    relations: frozenset


@dataclass(frozen=True)
class SCKR:
    structure: ContextStructure
    kbs: Mapping[str, ContextKB]
    signature: Signature = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        kbs = {c: self.kbs.get(c, ContextKB()) for c in self.structure.contexts}
        for c in self.kbs:
            if c not in kbs:
                kbs[c] = self.kbs[c]
        object.__setattr__(self, "kbs", kbs)
        if self.signature is None:
            object.__setattr__(self, "signature", infer_signature(self.structure, kbs))

    @property
    def contexts(self) -> tuple[str, ...]:
        return self.structure.contexts

    @property
    def individuals(self) -> list[str]:
        return sorted(self.signature.individuals)

    def strict_axioms(self):
        for c in self.contexts:
            for ax in self.kbs[c].strict:
                yield c, ax

    def defeasible_axioms(self):
        for c in self.contexts:
            for d in self.kbs[c].defeasible:
                yield c, d


def _axiom_names(ax) -> tuple[set[str], set[str]]:
    if isinstance(ax, DisjunctiveSubsumption):
        concepts, contexts = set(), set()
        for alt in _flatten_or(ax.lhs):
            c, x = _axiom_names(Subsumption(alt, ax.rhs))
            concepts |= c
            contexts |= x
        return concepts, contexts
    return ax.concept_names(), {r.context for r in ax.lhs if isinstance(r, Eval)}


def infer_signature(structure: ContextStructure, kbs: Mapping[str, ContextKB]) -> Signature:
    concepts: set[str] = set()
    individuals: set[str] = set()
    contexts = set(structure.contexts)
    for kb in kbs.values():
        for ax in list(kb.strict) + [d.axiom for d in kb.defeasible]:
            cs, xs = _axiom_names(ax)
            concepts |= cs
            contexts |= xs
        for a in kb.assertions:
            concepts.add(a.concept)
            individuals.add(a.individual)
    return Signature(frozenset(concepts), frozenset(individuals), frozenset(contexts),
                     frozenset(structure.relation_names))


# -- normalization, instantiation, validation ---------------------------------

def _flatten_or(node) -> list[tuple]:
    if isinstance(node, Or):
        out = []
        for alt in node.alternatives:
            out.extend(_flatten_or(alt))
        return out
    if isinstance(node, tuple):
        if any(isinstance(x, Or) for x in node):
            raise ValueError("disjunction is only allowed at the top level of a left-hand side")
        return [node]
    raise ValueError(f"unexpected left-hand node {node!r}")


def normalize(axioms: Iterable) -> list:
    """Split top-level left-hand disjunctions into one Horn axiom per disjunct.

    Defeasible wrappers are kept around each piece.
    """
    out: list = []
    for ax in axioms:
        if isinstance(ax, DefeasibleAxiom):
            out.extend(DefeasibleAxiom(ax.relation, a) for a in normalize([ax.axiom]))
        elif isinstance(ax, DisjunctiveSubsumption):
            if isinstance(ax.rhs, Or):
                raise ValueError("disjunction on a right-hand side")
            out.extend(Subsumption(alt, ax.rhs) for alt in _flatten_or(ax.lhs))
        elif isinstance(ax, Subsumption):
            out.append(ax)
        else:
            raise TypeError(f"cannot normalize {ax!r}")
    return out


@dataclass(frozen=True)
class GroundImplication:
    body: tuple  # of Assertion
    head: Assertion | _BottomType


def instantiate(axiom: Subsumption, individual: str) -> GroundImplication:
    if axiom.has_eval:
        raise ValueError("eval conjuncts can only be instantiated against a context model")
    body = tuple(Assertion(r.name, individual) for r in axiom.lhs)
    head = Bottom if axiom.rhs is Bottom else Assertion(axiom.rhs.name, individual)
    return GroundImplication(body, head)


def validate(sckr: SCKR) -> list[str]:
    """Return a list of problems; empty means the SCKR is well formed."""
    errors = []
    sig = sckr.signature
    pools = {"concept": sig.concepts, "individual": sig.individuals,
             "context": sig.contexts, "relation": sig.relations}
    kinds = list(pools)
    for i, a in enumerate(kinds):
        for b in kinds[i + 1:]:
            for name in sorted(pools[a] & pools[b]):
                errors.append(f"name {name!r} used both as {a} and {b}")
    declared = set(sckr.structure.contexts)
    for rel, edges in sckr.structure.relations:
        for child, parent in sorted(edges):
            for c in (child, parent):
                if c not in declared:
                    errors.append(f"relation {rel}: unknown context {c!r}")
        if any(a == b for a, b in sckr.structure.strict(rel)):
            errors.append(f"relation {rel} not a strict order")
    for c, kb in sckr.kbs.items():
        if c not in declared:
            errors.append(f"knowledge base for unknown context {c!r}")
        for ax in kb.strict:
            if isinstance(ax, DisjunctiveSubsumption):
                errors.append(f"{c}: axiom not normalized")
                continue
            errors.extend(_check_axiom(c, ax, sig, declared))
        for d in kb.defeasible:
            if d.relation not in sig.relations:
                errors.append(f"{c}: unknown relation {d.relation!r}")
            if isinstance(d.axiom, DisjunctiveSubsumption):
                errors.append(f"{c}: axiom not normalized")
                continue
            errors.extend(_check_axiom(c, d.axiom, sig, declared))
        for a in kb.assertions:
            if a.concept not in sig.concepts:
                errors.append(f"{c}: unknown concept {a.concept!r}")
            if a.individual not in sig.individuals:
                errors.append(f"{c}: unknown individual {a.individual!r}")
    return errors


def _check_axiom(c, ax: Subsumption, sig: Signature, declared) -> list[str]:
    errs = []
    for name in ax.concept_names():
        if name not in sig.concepts:
            errs.append(f"{c}: unknown concept {name!r}")
    for r in ax.lhs:
        if isinstance(r, Eval) and r.context not in declared:
            errs.append(f"{c}: eval refers to unknown context {r.context!r}")
    return errs


# -- text syntax ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[.&()|,\[\]{}<]))")


def _tokenize(line: str, lineno: int) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    while pos < len(line):
        if line[pos:].strip() == "":
            break
        m = _TOKEN.match(line, pos)
        if not m:
            col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {line[col - 1]!r}", lineno, col)
        kind = "name" if m.group("name") else "punct"
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return tokens


class _Line:
    def __init__(self, tokens, lineno, text):
        self.tokens, self.i, self.lineno, self.text = tokens, 0, lineno, text

    def peek(self, k: int = 0):
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else ("eol", "", len(self.text) + 1)

    def fail(self, msg):
        raise ParseError(msg, self.lineno, self.peek()[2])

    def take(self, value=None, kind=None):
        tok = self.peek()
        if tok[0] == "eol" or (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value else (kind or "token")
            self.fail(f"expected {want}, found {tok[1] or 'end of line'!r}")
        self.i += 1
        return tok[1]

    def at_end(self):
        return self.i >= len(self.tokens)


def _parse_atom(ln: _Line):
    name = ln.take(kind="name")
    if name == "eval" and ln.peek()[1] == "(":
        ln.take("(")
        concept = ln.take(kind="name")
        ln.take(",")
        ctx = ln.take(kind="name")
        ln.take(")")
        return Eval(concept, ctx)
    return Atomic(name)


def _parse_conj(ln: _Line) -> tuple:
    atoms = [_parse_atom(ln)]
    while ln.peek()[1] == "&":
        ln.take("&")
        atoms.append(_parse_atom(ln))
    return tuple(atoms)


def _parse_lhs(ln: _Line):
    """Parse a disjunction of groups; returns a conj tuple or an ``Or``."""
    alts = [_parse_group(ln)]
    while ln.peek()[1] == "|":
        ln.take("|")
        alts.append(_parse_group(ln))
    return alts[0] if len(alts) == 1 else Or(tuple(alts))


def _parse_group(ln: _Line):
    if ln.peek()[1] == "(":
        ln.take("(")
        inner = _parse_lhs(ln)
        ln.take(")")
        return inner
    return _parse_conj(ln)


def _parse_sub(ln: _Line):
    kw = ln.take(kind="name")
    if kw == "disjoint":
        a = ln.take(kind="name")
        b = ln.take(kind="name")
        return Subsumption((Atomic(a), Atomic(b)), Bottom)
    if kw != "sub":
        ln.i -= 1
        ln.fail(f"expected 'sub' or 'disjoint', found {kw!r}")
    lhs = _parse_lhs(ln)
    rhs_name = ln.take(kind="name")
    rhs = Bottom if rhs_name == "bottom" else Atomic(rhs_name)
    if isinstance(lhs, Or):
        return DisjunctiveSubsumption(lhs, rhs)
    for r in lhs:
        if isinstance(r, Eval) is False and r.name == "bottom":
            ln.fail("bottom cannot appear on a left-hand side")
    return Subsumption(lhs, rhs)


@dataclass
class Ontology:
    """Parsed ontology source: strict and defeasible axioms plus assertions."""

    strict: list = field(default_factory=list)
    defeasible: list = field(default_factory=list)
    assertions: list = field(default_factory=list)
    relations: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.strict, self.defeasible, self.assertions))

    def concept_names(self) -> set[str]:
        names: set[str] = set()
        for ax in normalize(self.strict) + [d.axiom for d in normalize(self.defeasible)]:
            names |= ax.concept_names()
        names |= {a.concept for a in self.assertions}
        return names


def _parse_statement(ln: _Line, relations: set[str], onto: Ontology):
    head = ln.peek()[1]
    if head == "relation":
        ln.take()
        name = ln.take(kind="name")
        relations.add(name)
        onto.relations.append(name)
    elif head == "inst":
        ln.take()
        ind = ln.take(kind="name")
        concept = ln.take(kind="name")
        onto.assertions.append(Assertion(concept, ind))
    elif head == "def":
        ln.take()
        ln.take("[")
        col = ln.peek()[2]
        rel = ln.take(kind="name")
        ln.take("]")
        if rel not in relations:
            raise ParseError(f"undeclared relation {rel!r}", ln.lineno, col)
        onto.defeasible.append(DefeasibleAxiom(rel, _parse_sub(ln)))
    elif head in ("sub", "disjoint"):
        onto.strict.append(_parse_sub(ln))
    else:
        ln.fail(f"unknown statement {head!r}")
    ln.take(".")
    if not ln.at_end():
        ln.fail("trailing input after statement")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def parse_ontology(text: str, relations: Iterable[str] = ("sim",)) -> Ontology:
    """Parse ontology source; ``relation NAME.`` statements extend ``relations``."""
    known = set(relations)
    onto = Ontology()
    for lineno, line in _lines(text):
        ln = _Line(_tokenize(line, lineno), lineno, line)
        _parse_statement(ln, known, onto)
    return onto


def parse_sckr(text: str) -> SCKR:
    """Parse a whole SCKR: ontology statements grouped in ``context NAME { ... }``
    blocks, plus ``relation R.`` declarations and ``order R CHILD PARENT.`` edges."""
    relations: list[str] = []
    edges: dict[str, set] = {}
    contexts: list[str] = []
    kbs: dict[str, Ontology] = {}
    current: str | None = None
    for lineno, line in _lines(text):
        ln = _Line(_tokenize(line, lineno), lineno, line)
        head = ln.peek()[1]
        if head == "context" and current is None:
            ln.take()
            name = ln.take(kind="name")
            ln.take("{")
            if not ln.at_end():
                ln.fail("statements start on the line after '{'")
            current = name
            if name not in kbs:
                contexts.append(name)
                kbs[name] = Ontology()
        elif head == "}":
            ln.take()
            if current is None:
                ln.fail("unbalanced '}'")
            current = None
        elif head == "order" and current is None:
            ln.take()
            col = ln.peek()[2]
            rel = ln.take(kind="name")
            if rel not in relations:
                raise ParseError(f"undeclared relation {rel!r}", lineno, col)
            child = ln.take(kind="name")
            parent = ln.take(kind="name")
            ln.take(".")
            edges[rel].add((child, parent))
        elif head == "relation" and current is None:
            ln.take()
            rel = ln.take(kind="name")
            ln.take(".")
            if rel not in relations:
                relations.append(rel)
                edges[rel] = set()
        elif current is not None:
            _parse_statement(ln, set(relations), kbs[current])
        else:
            ln.fail(f"statement {head!r} outside a context block")
    if current is not None:
        raise ParseError(f"context {current!r} is not closed")
    for rel in relations:
        for e in edges[rel]:
            for c in e:
                if c not in kbs:
                    contexts.append(c)
                    kbs[c] = Ontology()
    structure = ContextStructure(tuple(contexts), tuple((r, frozenset(edges[r])) for r in relations))
    return SCKR(structure, {c: ContextKB(normalize(o.strict), normalize(o.defeasible), o.assertions)
                            for c, o in kbs.items()})


def _render_lhs(node) -> str:
    if isinstance(node, Or):
        return " | ".join(f"({_render_lhs(a)})" if isinstance(a, Or) or len(a) > 1 else _render_lhs(a)
                          for a in node.alternatives)
    return " & ".join(map(str, node))


def render_axiom(ax) -> str:
    if isinstance(ax, DefeasibleAxiom):
        return f"def[{ax.relation}] " + render_axiom(ax.axiom)
    if isinstance(ax, Assertion):
        return f"inst {ax.individual} {ax.concept}."
    if isinstance(ax, DisjunctiveSubsumption):
        return f"sub {_render_lhs(ax.lhs)} {ax.rhs}."
    if ax.rhs is Bottom and len(ax.lhs) == 2 and all(isinstance(r, Atomic) for r in ax.lhs):
        return f"disjoint {ax.lhs[0]} {ax.lhs[1]}."
    return f"sub {_render_lhs(ax.lhs)} {ax.rhs}."


def render_ontology(onto: Ontology) -> str:
    lines = [f"relation {r}." for r in onto.relations]
    lines += [render_axiom(a) for a in list(onto.strict) + list(onto.defeasible) + list(onto.assertions)]
    return "\n".join(lines) + "\n"


def render_sckr(sckr: SCKR) -> str:
    lines = [f"relation {r}." for r in sckr.structure.relation_names]
    for c in sckr.contexts:
        kb = sckr.kbs[c]
        lines.append(f"context {c} {{")
        lines += ["  " + render_axiom(a) for a in list(kb.strict) + list(kb.defeasible) + list(kb.assertions)]
        lines.append("}")
    for rel, edges in sckr.structure.relations:
        lines += [f"order {rel} {a} {b}." for a, b in sorted(edges)]
    return "\n".join(lines) + "\n"


# -- scenes -------------------------------------------------------------------

@dataclass(frozen=True)
class SceneObject:
    id: str
    concepts: tuple = ()
    attributes: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Scene:
    scene_id: str
    objects: tuple

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        seen = set()
        for o in self.objects:
            if o.id in seen:
                raise SceneError(f"duplicate object id {o.id!r}")
            seen.add(o.id)

    def object(self, oid: str) -> SceneObject:
        for o in self.objects:
            if o.id == oid:
                return o
        raise KeyError(oid)

    @property
    def ids(self) -> list[str]:
        return [o.id for o in self.objects]

    def to_json(self) -> dict:
        return {"scene": self.scene_id,
                "objects": [{"id": o.id, "classes": list(o.concepts), "attributes": dict(o.attributes)}
                            for o in self.objects]}


def scene_from_json(data, concepts: Iterable[str] | None = None) -> Scene:
    if not isinstance(data, dict) or "objects" not in data:
        raise SceneError("scene must be an object with an 'objects' list")
    known = set(concepts) if concepts is not None else None
    objs = []
    for entry in data["objects"]:
        try:
            oid = str(entry["id"])
        except (KeyError, TypeError):
            raise SceneError(f"object without id: {entry!r}") from None
        classes = tuple(entry.get("classes", ()))
        if known is not None:
            for c in classes:
                if c not in known:
                    raise SceneError(f"object {oid}: unknown concept {c!r}")
        attrs = {str(k): str(v) for k, v in entry.get("attributes", {}).items()}
        objs.append(SceneObject(oid, classes, attrs))
    return Scene(str(data.get("scene", "scene")), objs)


def load_scene(path: str | Path, concepts: Iterable[str] | None = None) -> Scene:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SceneError(f"malformed scene JSON: {exc}") from exc
    return scene_from_json(data, concepts)


def scene_concepts(scene: Scene) -> set[str]:
    return {c for o in scene.objects for c in o.concepts}


__all__: Sequence[str] = [
    "Atomic", "Eval", "Bottom", "Subsumption", "DisjunctiveSubsumption", "Or", "DefeasibleAxiom",
    "Assertion", "ContextStructure", "ContextKB", "Signature", "SCKR", "Ontology", "Scene",
    "SceneObject", "ParseError", "SceneError", "parse_ontology", "parse_sckr", "normalize",
    "instantiate", "validate", "render_axiom", "render_ontology", "render_sckr", "load_scene",
    "scene_from_json", "sub",
]
