"""Bottom-up instantiation of safe programs.

The default grounder only instantiates rules against atoms that are
derivable when negation is ignored (semi-naive fixpoint), and drops negative
literals over atoms that can never become true.  ``naive=True`` substitutes
every variable by every constant of the program instead; it is the reference
behaviour used by the tests.
"""
from __future__ import annotations

from collections import defaultdict
from itertools import product
from typing import Iterable, Iterator

from .syntax import Atom, Program, Rule, Var, WeakConstraint


class UnsafeRuleError(ValueError):
    def __init__(self, rule, variables):
        names = ", ".join(sorted(v.name for v in variables))
        super().__init__(f"unsafe variables {names} in: {rule}")
        self.rule = rule


class _Index:
    def __init__(self, atoms: Iterable[Atom] = ()):
        self.by_pred: dict[tuple, list] = defaultdict(list)
        self.by_arg: dict[tuple, list] = defaultdict(list)
        for a in atoms:
            self.add(a)

    def add(self, a: Atom) -> None:
        key = (a.predicate, len(a.args))
        self.by_pred[key].append(a)
        for i, v in enumerate(a.args):
            self.by_arg[key + (i, v)].append(a)

    def candidates(self, pattern: Atom, theta: dict) -> list:
        key = (pattern.predicate, len(pattern.args))
        best = self.by_pred.get(key, ())
        for i, t in enumerate(pattern.args):
            if isinstance(t, Var):
                t = theta.get(t)
                if t is None:
                    continue
            bucket = self.by_arg.get(key + (i, t), ())
            if len(bucket) < len(best):
                best = bucket
                if not best:
                    break
        return best


def _unify(pattern: Atom, ground_atom: Atom, theta: dict) -> dict | None:
    new = None
    for p, g in zip(pattern.args, ground_atom.args):
        if isinstance(p, Var):
            bound = theta.get(p) if new is None else new.get(p)
            if bound is None:
                if new is None:
                    new = dict(theta)
                new[p] = g
            elif bound != g:
                return None
        elif p != g:
            return None
    return theta if new is None else new


def _match(body: list, index: _Index, theta: dict) -> Iterator[dict]:
    if not body:
        yield theta
        return
    # most constrained literal first
    best_i, best_c = 0, None
    for i, lit in enumerate(body):
        c = index.candidates(lit, theta)
        if best_c is None or len(c) < len(best_c):
            best_i, best_c = i, c
            if not c:
                return
    lit = body[best_i]
    rest = body[:best_i] + body[best_i + 1:]
    for g in list(best_c):
        t2 = _unify(lit, g, theta)
        if t2 is not None:
            yield from _match(rest, index, t2)


def check_safety(program: Program) -> None:
    for r in list(program.rules) + list(program.weaks):
        bad = r.unsafe_variables()
        if bad:
            raise UnsafeRuleError(r, bad)


def possible_atoms(program: Program) -> set[Atom]:
    """Atoms derivable from the program with all negative literals ignored."""
    possible: set[Atom] = set()
    index = _Index()
    delta = []
    for r in program.rules:
        if r.head is not None and not r.pos and r.head.is_ground and r.head not in possible:
            possible.add(r.head)
            index.add(r.head)
            delta.append(r.head)
    proper = [r for r in program.rules if r.head is not None and r.pos]
    while delta:
        dindex = _Index(delta)
        new = []
        for r in proper:
            body = list(r.pos)
            for k, lit in enumerate(body):
                for g in dindex.candidates(lit, {}):
                    theta = _unify(lit, g, {})
                    if theta is None:
                        continue
                    for t in _match(body[:k] + body[k + 1:], index, theta):
                        h = r.head.substitute(t)
                        if h not in possible:
                            possible.add(h)
                            new.append(h)
        for h in new:
            index.add(h)
        delta = new
    return possible


def _constants(program: Program) -> list:
    consts = set()
    for a in program.atoms():
        consts.update(t for t in a.args if not isinstance(t, Var))
    for w in program.weaks:
        consts.update(t for t in w.terms if not isinstance(t, Var))
    return sorted(consts, key=lambda c: (isinstance(c, str), c))


def _variables(r) -> list[Var]:
    vs = set()
    for a in r.atoms():
        vs |= a.variables()
    if isinstance(r, WeakConstraint):
        vs |= {t for t in r.terms if isinstance(t, Var)}
    return sorted(vs)


def _instance(r, theta: dict, possible: set | None):
    pos = tuple(a.substitute(theta) for a in r.pos)
    neg = tuple(a.substitute(theta) for a in r.neg)
    if possible is not None:
        kept = tuple(a for a in neg if a in possible)
        # keep one (always true) literal rather than print an empty body
        neg = kept if kept or pos else neg[:1]
    if isinstance(r, WeakConstraint):
        terms = tuple(theta.get(t, t) if isinstance(t, Var) else t for t in r.terms)
        return WeakConstraint(pos, neg, r.weight, terms, r.level)
    return Rule(None if r.head is None else r.head.substitute(theta), pos, neg)


def ground(program: Program, naive: bool = False) -> Program:
    check_safety(program)
    program.check_arities()
    rules: dict[Rule, None] = {}
    weaks: dict[WeakConstraint, None] = {}
    items = [(r, rules) for r in program.rules] + [(w, weaks) for w in program.weaks]
    if naive:
        universe = _constants(program)
        for r, sink in items:
            vs = _variables(r)
            for values in product(universe, repeat=len(vs)):
                sink[_instance(r, dict(zip(vs, values)), None)] = None
        return Program(tuple(rules), tuple(weaks))
    possible = possible_atoms(program)
    index = _Index(possible)
    for r, sink in items:
        for theta in _match(list(r.pos), index, {}):
            sink[_instance(r, theta, possible)] = None
    return Program(tuple(rules), tuple(weaks))
