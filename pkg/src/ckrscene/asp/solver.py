"""Stable models and weak-constraint optimization for ground programs.

Search runs over the Clark completion of the program (one auxiliary variable
per distinct rule body) with two watched literals and chronological
backtracking.  Programs without positive loops are tight, so every completion
model is stable; otherwise each complete assignment is re-checked against the
least model of its reduct.  For tight programs the residual problem after
top-level propagation is split into independent components which are
searched one after the other.
"""
from __future__ import annotations

import builtins
import time
from dataclasses import dataclass
from itertools import islice, product
from typing import Callable, Iterable

from .grounding import ground
from .syntax import Atom, Program, Rule, WeakConstraint

_enum = builtins.enumerate


class BoundExceeded(RuntimeError):
    pass


class SolveTimeout(TimeoutError):
    """Raised when a deadline passes; ``best`` holds the incumbent, if any."""

    def __init__(self, best=None):
        super().__init__("search deadline reached")
        self.best = best


@dataclass(frozen=True)
class CostedAnswerSet:
    atoms: frozenset
    cost: int

    def __iter__(self):
        return iter((self.atoms, self.cost))


def model_key(atoms: Iterable[Atom]) -> tuple:
    return tuple(sorted(a.sort_key() for a in atoms))


def _canonical(models):
    return sorted(models, key=model_key)


# -- reference semantics ---------------------------------------------------------

def reduct(program: Program, interpretation: Iterable[Atom]) -> Program:
    i = set(interpretation)
    rules = [Rule(r.head, r.pos) for r in program.rules if not any(a in i for a in r.neg)]
    return Program(rules)


def least_model(rules: Iterable[Rule]) -> set[Atom]:
    """Least model of the non-constraint rules, ignoring negative bodies."""
    rules = [r for r in rules if r.head is not None]
    waiting: dict[Atom, list[int]] = {}
    missing = []
    queue = []
    for k, r in _enum(rules):
        body = set(r.pos)
        missing.append(len(body))
        for a in body:
            waiting.setdefault(a, []).append(k)
        if not body:
            queue.append(r.head)
    model: set[Atom] = set()
    while queue:
        a = queue.pop()
        if a in model:
            continue
        model.add(a)
        for k in waiting.get(a, ()):
            missing[k] -= 1
            if missing[k] == 0:
                queue.append(rules[k].head)
    return model


def _body_true(pos, neg, i) -> bool:
    return all(a in i for a in pos) and not any(a in i for a in neg)


def is_stable(program: Program, interpretation: Iterable[Atom]) -> bool:
    i = set(interpretation)
    for r in program.rules:
        if r.head is None and _body_true(r.pos, r.neg, i):
            return False
    return least_model(reduct(program, i).rules) == i


def cost(interpretation: Iterable[Atom], weaks: Iterable[WeakConstraint]) -> int:
    """Per term tuple the largest triggered weight, summed over tuples."""
    i = set(interpretation)
    groups: dict[tuple, int] = {}
    for w in weaks:
        if _body_true(w.pos, w.neg, i):
            key = (w.level, w.terms)
            groups[key] = max(groups.get(key, 0), w.weight)
    return sum(groups.values())


def _ensure_ground(program: Program) -> Program:
    if all(a.is_ground for a in program.atoms()) and all(
        not any(hasattr(t, "name") for t in w.terms) for w in program.weaks
    ):
        return program
    return ground(program)


def enumerate_models(program: Program, max_atoms: int = 20) -> list[frozenset]:
    """Brute force: every subset of the head atoms that passes ``is_stable``."""
    program = _ensure_ground(program)
    heads = sorted({r.head for r in program.rules if r.head is not None})
    if len(heads) > max_atoms:
        raise BoundExceeded(f"{len(heads)} candidate atoms exceed the bound {max_atoms}")
    out = []
    for mask in range(1 << len(heads)):
        i = {a for k, a in _enum(heads) if mask >> k & 1}
        if is_stable(program, i):
            out.append(frozenset(i))
    return _canonical(out)


# -- compilation to clauses ------------------------------------------------------

class _Compiled:
    def __init__(self, program: Program):
        self.atoms: list[Atom] = [None]
        self.var: dict[Atom, int] = {}
        for a in sorted(program.atoms(), key=Atom.sort_key):
            self.var[a] = len(self.atoms)
            self.atoms.append(a)
        self.natoms = len(self.atoms) - 1
        self.nvars = self.natoms
        self.clauses: list[list[int]] = []
        self.units: list[int] = []
        self.empty = False
        self._bodies: dict[tuple, int] = {}
        self.rules = []
        support: dict[int, list[int]] = {}
        for r in program.rules:
            body = self._lits(r.pos, r.neg)
            if r.head is None:
                self._clause([-l for l in body])
                continue
            h = self.var[r.head]
            self.rules.append((h, [self.var[a] for a in r.pos], [self.var[a] for a in r.neg]))
            b = self._body(body)
            if b is None:
                self.units.append(h)
                support.setdefault(h, []).append(None)
                continue
            self._clause([-b, h])
            support.setdefault(h, []).append(b)
        for h in range(1, self.natoms + 1):
            lits = support.get(h, [])
            if None in lits:
                continue
            self._clause([-h] + lits)
        # atoms outside the negation-free closure can never be founded
        closure = least_model(Rule(r.head, r.pos) for r in program.rules if r.head is not None)
        for a, v in self.var.items():
            if a not in closure:
                self.units.append(-v)
        self.weaks = []  # (trigger literal, weight, group)
        groups: dict[tuple, int] = {}
        for w in program.weaks:
            g = groups.setdefault((w.level, w.terms), len(groups))
            t = self._body(self._lits(w.pos, w.neg))
            self.weaks.append((t, w.weight, g))
        self.ngroups = len(groups)
        self.tight = self._is_tight()

    def _lits(self, pos, neg) -> list[int]:
        return sorted({self.var[a] for a in pos} | {-self.var[a] for a in neg}, key=lambda l: (abs(l), l))

    def _body(self, lits: list[int]):
        """Literal equivalent to the conjunction; ``None`` for the empty body."""
        if not lits:
            return None
        if len(lits) == 1:
            return lits[0]
        key = tuple(lits)
        b = self._bodies.get(key)
        if b is None:
            self.nvars += 1
            b = self._bodies[key] = self.nvars
            for l in lits:
                self._clause([-b, l])
            self._clause([b] + [-l for l in lits])
        return b

    def _clause(self, lits: list[int]) -> None:
        s = set(lits)
        if any(-l in s for l in s):
            return
        if not s:
            self.empty = True
        elif len(s) == 1:
            self.units.append(next(iter(s)))
        else:
            self.clauses.append(sorted(s, key=abs))

    def _is_tight(self) -> bool:
        succ: dict[int, set[int]] = {}
        for h, pos, _ in self.rules:
            for p in pos:
                if p == h:
                    return False
                succ.setdefault(p, set()).add(h)
        # iterative Tarjan: any non-trivial SCC means a positive loop
        index, low, onstack, stack, counter = {}, {}, set(), [], [0]
        for root in list(succ):
            if root in index:
                continue
            work = [(root, iter(succ.get(root, ())))]
            index[root] = low[root] = counter[0]
            counter[0] += 1
            stack.append(root)
            onstack.add(root)
            while work:
                v, it = work[-1]
                advanced = False
                for w in it:
                    if w not in index:
                        index[w] = low[w] = counter[0]
                        counter[0] += 1
                        stack.append(w)
                        onstack.add(w)
                        work.append((w, iter(succ.get(w, ()))))
                        advanced = True
                        break
                    if w in onstack:
                        low[v] = min(low[v], index[w])
                if advanced:
                    continue
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    size = 0
                    while True:
                        w = stack.pop()
                        onstack.discard(w)
                        size += 1
                        if w == v:
                            break
                    if size > 1:
                        return False
        return True


def _ix(lit: int) -> int:
    return 2 * lit if lit > 0 else -2 * lit + 1


class _Search:
    def __init__(self, comp: _Compiled, deadline: float | None):
        self.c = comp
        self.deadline = deadline
        self.value = [0] * (comp.nvars + 1)
        self.trail: list[int] = []
        self.qhead = 0
        self.clauses = [list(cl) for cl in comp.clauses]
        self.watches: list[list[int]] = [[] for _ in range(2 * comp.nvars + 2)]
        for k, cl in _enum(self.clauses):
            self.watches[_ix(cl[0])].append(k)
            self.watches[_ix(cl[1])].append(k)
        # weak bookkeeping
        self.trig: dict[int, list[int]] = {}
        for j, (t, _, _) in _enum(comp.weaks):
            if t is not None:
                self.trig.setdefault(t, []).append(j)
        self.cur = [0] * comp.ngroups
        self.lb = 0
        for t, w, g in comp.weaks:
            if t is None and w > self.cur[g]:
                self.lb += w - self.cur[g]
                self.cur[g] = w
        self.undo: list[tuple] = []
        self.bound = None  # prune when lb reaches it
        self.strict = True  # lb >= bound prunes; otherwise lb > bound
        self.active_weaks: list[int] = []
        self.maxw = 0
        self.ticks = 0

    # assignment primitives
    def val(self, lit: int) -> int:
        v = self.value[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def assign(self, lit: int) -> bool:
        v = self.val(lit)
        if v:
            return v > 0
        self.value[abs(lit)] = 1 if lit > 0 else -1
        self.trail.append(lit)
        for j in self.trig.get(lit, ()):
            _, w, g = self.c.weaks[j]
            if w > self.cur[g]:
                self.undo.append((len(self.trail) - 1, g, self.cur[g], self.lb))
                self.lb += w - self.cur[g]
                self.cur[g] = w
        return True

    def undo_to(self, n: int) -> None:
        trail, value = self.trail, self.value
        while len(trail) > n:
            value[abs(trail.pop())] = 0
        while self.undo and self.undo[-1][0] >= n:
            _, g, old, lb = self.undo.pop()
            self.cur[g] = old
            self.lb = lb
        self.qhead = min(self.qhead, n)

    def propagate(self) -> bool:
        trail, clauses, watches, value = self.trail, self.clauses, self.watches, self.value
        while self.qhead < len(trail):
            false_lit = -trail[self.qhead]
            self.qhead += 1
            ws = watches[_ix(false_lit)]
            i = j = 0
            n = len(ws)
            while i < n:
                k = ws[i]
                i += 1
                cl = clauses[k]
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                first = cl[0]
                fv = value[first if first > 0 else -first]
                if (fv if first > 0 else -fv) > 0:
                    ws[j] = k
                    j += 1
                    continue
                for m in range(2, len(cl)):
                    l = cl[m]
                    lv = value[l if l > 0 else -l]
                    if (lv if l > 0 else -lv) >= 0:
                        cl[1], cl[m] = l, false_lit
                        watches[_ix(l)].append(k)
                        break
                else:
                    ws[j] = k
                    j += 1
                    if (fv if first > 0 else -fv) < 0:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return False
                    self.assign(first)
            del ws[j:]
        return True

    def over(self, lb: int) -> bool:
        if self.bound is None:
            return False
        return lb >= self.bound if self.strict else lb > self.bound

    def propagate_all(self) -> bool:
        while True:
            if not self.propagate():
                return False
            if self.bound is None:
                return True
            if self.over(self.lb):
                return False
            if not self.over(self.lb + self.maxw):
                return True
            forced = False
            for j in self.active_weaks:
                t, w, g = self.c.weaks[j]
                if self.val(t) == 0 and w > self.cur[g] and self.over(self.lb + w - self.cur[g]):
                    self.assign(-t)
                    forced = True
            if not forced:
                return True

    def tick(self) -> None:
        self.ticks += 1
        if self.deadline is not None and self.ticks & 255 == 0 and time.monotonic() > self.deadline:
            raise SolveTimeout()

    def stable(self) -> bool:
        c = self.c
        value = self.value
        waiting: dict[int, list[int]] = {}
        missing = []
        queue = []
        live = []
        for h, pos, neg in c.rules:
            if any(value[n] > 0 for n in neg):
                continue
            k = len(live)
            live.append(h)
            missing.append(len(pos))
            for p in pos:
                waiting.setdefault(p, []).append(k)
            if not pos:
                queue.append(h)
        seen = set()
        while queue:
            a = queue.pop()
            if a in seen:
                continue
            seen.add(a)
            for k in waiting.get(a, ()):
                missing[k] -= 1
                if missing[k] == 0:
                    queue.append(live[k])
        return all((value[v] > 0) == (v in seen) for v in range(1, c.natoms + 1))

    def models(self, order: list[int], check_stable: bool):
        """Yield once per model of the component spanned by ``order``.

        The caller reads the assignment while the generator is suspended.
        Backtracks fully to the entry trail length when exhausted.
        """
        base = len(self.trail)
        levels: list[list] = []  # [trail length, decision literal, flipped, order pointer]
        ptr = 0

        def backtrack() -> bool:
            nonlocal ptr
            while levels and levels[-1][2]:
                levels.pop()
            if not levels:
                self.undo_to(base)
                return False
            lvl = levels[-1]
            self.undo_to(lvl[0])
            lvl[2] = True
            ptr = lvl[3]
            self.assign(-lvl[1])
            return True

        while True:
            self.tick()
            while ptr < len(order) and self.value[abs(order[ptr])]:
                ptr += 1
            if ptr == len(order):
                if not check_stable or self.stable():
                    yield
                if not backtrack():
                    return
            else:
                lit = order[ptr]
                levels.append([len(self.trail), lit, False, ptr])
                self.assign(lit)
            while not self.propagate_all():
                if not backtrack():
                    return


class _Problem:
    """Top-level propagation and the split into independent components."""

    def __init__(self, program: Program, deadline: float | None, decompose: bool = True):
        self.c = _Compiled(_ensure_ground(program))
        self.s = _Search(self.c, deadline)
        self.sat = not self.c.empty and all(self.s.assign(u) for u in self.c.units) and self.s.propagate()
        self.components: list[list[int]] = []
        self._by_var = None
        if not self.sat:
            return
        c, s = self.c, self.s
        self.base_cost = s.lb
        free = [v for v in range(1, c.nvars + 1) if s.value[v] == 0]
        if not free and not c.tight:
            self.sat = s.stable()
        if not (decompose and c.tight):
            if free:
                self.components = [free]
            return
        parent = {v: v for v in free}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for cl in s.clauses:
            if any(s.val(l) > 0 for l in cl):
                continue
            open_ = [abs(l) for l in cl if s.val(l) == 0]
            for v in open_[1:]:
                union(open_[0], v)
        first_in_group: dict[int, int] = {}
        for t, _, g in c.weaks:
            if t is not None and s.val(t) == 0:
                v = abs(t)
                if g in first_in_group:
                    union(first_in_group[g], v)
                else:
                    first_in_group[g] = v
        groups: dict[int, list[int]] = {}
        for v in free:
            groups.setdefault(find(v), []).append(v)
        self.components = [groups[r] for r in sorted(groups)]

    def atoms_true(self, vars_: Iterable[int]) -> frozenset:
        c, value = self.c, self.s.value
        return frozenset(c.atoms[v] for v in vars_ if v <= c.natoms and value[v] > 0)

    def root_atoms(self) -> frozenset:
        return self.atoms_true(range(1, self.c.natoms + 1))

    def _weaks_of(self, comp) -> list[int]:
        if self._by_var is None:
            self._by_var = {}
            for j, (t, _, _) in _enum(self.c.weaks):
                if t is not None:
                    self._by_var.setdefault(abs(t), []).append(j)
        out = []
        for v in comp:
            out.extend(self._by_var.get(v, ()))
        return sorted(out)

    def order(self, comp: list[int], weak_first: bool) -> list[int]:
        """Decision literals: weak triggers first (made false), then atoms, then bodies."""
        c = self.c
        lits, seen = [], set()
        if weak_first:
            for j in sorted(self._weaks_of(comp), key=lambda j: -c.weaks[j][1]):
                t = c.weaks[j][0]
                if abs(t) not in seen:
                    seen.add(abs(t))
                    lits.append(-t)
        n = c.natoms
        for v in sorted(comp, key=lambda v: (v > n, v)):
            if v not in seen:
                lits.append(-v)
        return lits

    def check_stable(self) -> bool:
        return not self.c.tight

    def component_models(self, comp, limit=None) -> list[frozenset]:
        out = []
        if limit == 0:
            return out
        for _ in self.s.models(self.order(comp, False), self.check_stable()):
            out.append(self.atoms_true(comp))
            if limit is not None and len(out) >= limit:
                self.s.undo_to(self._entry)
                break
        return out

    def component_optima(self, comp, all_optima: bool) -> tuple[int, list[frozenset]]:
        s, c = self.s, self.c
        s.active_weaks = self._weaks_of(comp)
        s.maxw = max((c.weaks[j][1] for j in s.active_weaks), default=0)
        s.lb = 0
        s.bound = None
        s.strict = not all_optima
        best, found = None, []
        try:
            for _ in s.models(self.order(comp, True), self.check_stable()):
                lb = s.lb
                if best is None or lb < best:
                    best, found = lb, []
                found.append(self.atoms_true(comp))
                s.bound = best
        except SolveTimeout as exc:
            exc.best = (best, found)
            raise
        finally:
            s.bound = None
            s.active_weaks = []
            s.lb = 0
        return best, found


def _deadline(timeout: float | None, deadline: float | None) -> float | None:
    if timeout is not None:
        t = time.monotonic() + timeout
        return t if deadline is None else min(t, deadline)
    return deadline


def solve(program: Program, limit: int | None = None, timeout: float | None = None,
          deadline: float | None = None) -> list[frozenset]:
    """Stable models of ``program`` (all of them in canonical order unless ``limit``)."""
    p = _Problem(program, _deadline(timeout, deadline))
    if not p.sat:
        return []
    root = p.root_atoms()
    p._entry = len(p.s.trail)
    parts = []
    for comp in p.components:
        ms = p.component_models(comp, limit)
        if not ms:
            return []
        parts.append(ms)
    combos = product(*parts)
    if limit is not None:
        combos = islice(combos, limit)
    out = [root.union(*combo) for combo in combos]
    return out if limit is not None else _canonical(out)


def optimize(program: Program, all_optima: bool = True, timeout: float | None = None,
             deadline: float | None = None, choose: Callable[[frozenset], object] | None = None,
             max_results: int | None = None) -> list[CostedAnswerSet]:
    """Minimal-cost stable models.

    ``all_optima=True`` returns every optimum (canonical order).  Otherwise a
    single optimum is returned; with ``choose`` it is the one minimizing
    ``choose`` restricted to each independent component, which is the global
    minimum whenever the key is additive over disjoint atom sets.
    """
    p = _Problem(program, _deadline(timeout, deadline))
    if not p.sat:
        return []
    root = p.root_atoms()
    total = p.base_cost
    parts = []
    for comp in p.components:
        best, found = p.component_optima(comp, all_optima or choose is not None)
        if best is None:
            return []
        total += best
        if not all_optima:
            found = [min(found, key=choose)] if choose is not None else found[-1:]
        parts.append(found)
    combos = product(*parts)
    if max_results is not None:
        combos = islice(combos, max_results)
    out = [CostedAnswerSet(root.union(*combo), total) for combo in combos]
    return sorted(out, key=lambda m: model_key(m.atoms))


def stats(program: Program) -> dict:
    g = _ensure_ground(program)
    return {
        "ground_atoms": len(g.atoms()),
        "ground_rules": len(g.rules) + len(g.weaks),
    }


enumerate = enumerate_models
