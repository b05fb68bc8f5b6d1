"""Rules, weak constraints and programs, plus an ASP-Core-2 style text form."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union


class AspSyntaxError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Var, str, int]

_SYMBOL = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, bool):
        raise TypeError("booleans are not terms")
    if isinstance(t, int):
        return str(t)
    if _SYMBOL.match(t):
        return t
    return '"' + t.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _term_key(t: Term) -> tuple:
    if isinstance(t, Var):
        return (2, t.name)
    if isinstance(t, int):
        return (0, t, "")
    return (1, 0, t)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)

    def variables(self) -> set[Var]:
        return {a for a in self.args if isinstance(a, Var)}

    def substitute(self, theta: dict) -> "Atom":
        return Atom(self.predicate, tuple(theta.get(a, a) if isinstance(a, Var) else a for a in self.args))

    def sort_key(self) -> tuple:
        return (self.predicate, len(self.args), tuple(_term_key(a) for a in self.args))

    def __lt__(self, other: "Atom") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(render_term(a) for a in self.args)})"


def atom(text: str) -> Atom:
    """Parse a single atom, e.g. ``atom('p(a,"B",1)')``."""
    toks = _Tokens(_lex(text))
    a = _parse_atom(toks)
    toks.expect_end()
    return a


@dataclass(frozen=True)
class Rule:
    """``head :- pos, not neg.``; ``head=None`` makes it a constraint."""

    head: Atom | None
    pos: tuple = ()
    neg: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(self.pos))
        object.__setattr__(self, "neg", tuple(self.neg))

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.pos and not self.neg

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    def atoms(self) -> Iterable[Atom]:
        if self.head is not None:
            yield self.head
        yield from self.pos
        yield from self.neg

    def unsafe_variables(self) -> set[Var]:
        bound = set().union(*(a.variables() for a in self.pos)) if self.pos else set()
        used = set().union(*(a.variables() for a in self.neg)) if self.neg else set()
        if self.head is not None:
            used |= self.head.variables()
        return used - bound

    def __str__(self) -> str:
        body = _render_body(self.pos, self.neg)
        if self.head is None:
            return f":- {body}."
        if not body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class WeakConstraint:
    pos: tuple
    neg: tuple = ()
    weight: int = 1
    terms: tuple = ()
    level: int = 0

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(self.pos))
        object.__setattr__(self, "neg", tuple(self.neg))
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.weight < 0:
            raise ValueError("weak constraint weights are nonnegative")

    def atoms(self) -> Iterable[Atom]:
        yield from self.pos
        yield from self.neg

    def unsafe_variables(self) -> set[Var]:
        bound = set().union(*(a.variables() for a in self.pos)) if self.pos else set()
        used = set().union(*(a.variables() for a in self.neg)) if self.neg else set()
        used |= {t for t in self.terms if isinstance(t, Var)}
        return used - bound

    def __str__(self) -> str:
        terms = "".join("," + render_term(t) for t in self.terms)
        return f":~ {_render_body(self.pos, self.neg)}. [{self.weight}@{self.level}{terms}]"


def _render_body(pos, neg) -> str:
    return ", ".join([str(a) for a in pos] + [f"not {a}" for a in neg])


@dataclass(frozen=True)
class Program:
    rules: tuple = ()
    weaks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "weaks", tuple(self.weaks))

    def __add__(self, other: "Program") -> "Program":
        return Program(self.rules + tuple(other.rules), self.weaks + tuple(other.weaks))

    def extend(self, rules: Iterable[Rule] = (), weaks: Iterable[WeakConstraint] = ()) -> "Program":
        return Program(self.rules + tuple(rules), self.weaks + tuple(weaks))

    def atoms(self) -> set[Atom]:
        out = {a for r in self.rules for a in r.atoms()}
        out |= {a for w in self.weaks for a in w.atoms()}
        return out

    def check_arities(self) -> None:
        seen: dict[str, int] = {}
        for a in self.atoms():
            if seen.setdefault(a.predicate, a.arity) != a.arity:
                raise AspSyntaxError(f"predicate {a.predicate} used with arities {seen[a.predicate]} and {a.arity}")


def fact(a: Atom) -> Rule:
    return Rule(a)


def to_aspcore2(program: Program) -> str:
    """One statement per line, rules in program order followed by weak constraints."""
    lines = [str(r) for r in program.rules] + [str(w) for w in program.weaks]
    return "\n".join(lines) + ("\n" if lines else "")


# -- parser ---------------------------------------------------------------------

_LEX = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<op>:-|:~|\.|,|\(|\)|\[|\]|@)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


def _lex(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        if not m:
            raise AspSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        out.append((kind, m.group(kind)))
    return out


class _Tokens:
    def __init__(self, toks):
        self.toks, self.i = toks, 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "")

    def next(self):
        tok = self.peek()
        if tok[0] == "eof":
            raise AspSyntaxError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            raise AspSyntaxError(f"expected {value!r}, found {tok[1]!r}")

    def expect_end(self):
        if self.peek()[0] != "eof":
            raise AspSyntaxError(f"unexpected {self.peek()[1]!r}")


def _parse_term(toks: _Tokens) -> Term:
    kind, val = toks.next()
    if kind == "int":
        return int(val)
    if kind == "string":
        return re.sub(r"\\(.)", r"\1", val[1:-1])
    if kind == "ident":
        if val[0].isupper() or val[0] == "_":
            return Var(val)
        return val
    raise AspSyntaxError(f"expected a term, found {val!r}")


def _parse_atom(toks: _Tokens) -> Atom:
    kind, name = toks.next()
    if kind != "ident" or not (name[0].islower()):
        raise AspSyntaxError(f"expected a predicate, found {name!r}")
    args = []
    if toks.peek()[1] == "(":
        toks.next()
        args.append(_parse_term(toks))
        while toks.peek()[1] == ",":
            toks.next()
            args.append(_parse_term(toks))
        toks.expect(")")
    return Atom(name, tuple(args))


def _parse_body(toks: _Tokens) -> tuple[list, list]:
    pos, neg = [], []
    while True:
        if toks.peek() == ("ident", "not"):
            toks.next()
            neg.append(_parse_atom(toks))
        else:
            pos.append(_parse_atom(toks))
        if toks.peek()[1] != ",":
            return pos, neg
        toks.next()


def parse_program(text: str) -> Program:
    toks = _Tokens(_lex(text))
    rules, weaks = [], []
    while toks.peek()[0] != "eof":
        if toks.peek()[1] == ":-":
            toks.next()
            pos, neg = _parse_body(toks)
            toks.expect(".")
            rules.append(Rule(None, pos, neg))
        elif toks.peek()[1] == ":~":
            toks.next()
            pos, neg = _parse_body(toks)
            toks.expect(".")
            toks.expect("[")
            weight = _parse_term(toks)
            level = 0
            if toks.peek()[1] == "@":
                toks.next()
                level = _parse_term(toks)
            terms = []
            while toks.peek()[1] == ",":
                toks.next()
                terms.append(_parse_term(toks))
            toks.expect("]")
            if not isinstance(weight, int) or not isinstance(level, int):
                raise AspSyntaxError("weight and level must be integers")
            weaks.append(WeakConstraint(pos, neg, weight, terms, level))
        else:
            head = _parse_atom(toks)
            pos, neg = [], []
            if toks.peek()[1] == ":-":
                toks.next()
                pos, neg = _parse_body(toks)
            toks.expect(".")
            rules.append(Rule(head, pos, neg))
    return Program(rules, weaks)


def parse_atoms(text: str) -> list[Atom]:
    """Parse a whitespace separated atom list as printed by answer set solvers."""
    toks = _Tokens(_lex(text))
    out = []
    while toks.peek()[0] != "eof":
        out.append(_parse_atom(toks))
    return out
