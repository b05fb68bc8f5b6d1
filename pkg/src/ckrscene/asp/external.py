"""Adapter for answer-set solvers run as subprocesses.

The expected output is line based::

    Answer: 1
    p(a) q
    Optimization: 3
    OPTIMUM FOUND

Anything else (banners, timing lines) is ignored.
"""
from __future__ import annotations

import os
import shlex
import subprocess
import tempfile

from .solver import CostedAnswerSet, cost
from .syntax import AspSyntaxError, Program, parse_atoms, to_aspcore2

_STATUS = ("SATISFIABLE", "UNSATISFIABLE", "OPTIMUM FOUND", "UNKNOWN")


class ExternalSolverError(RuntimeError):
    pass


def parse_external_models(text: str, weaks=None) -> list[CostedAnswerSet]:
    """One entry per ``Answer:`` block, cost from ``Optimization:`` or recomputed."""
    lines = text.splitlines()
    out = []
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line.startswith("Answer:"):
            continue
        if i >= len(lines):
            raise ExternalSolverError("answer block without an atom line")
        atom_line = lines[i].strip()
        if atom_line.startswith(("Answer:", "Optimization:")) or atom_line in _STATUS:
            atom_line = ""
        else:
            i += 1
        try:
            atoms = frozenset(parse_atoms(atom_line))
        except AspSyntaxError as exc:
            raise ExternalSolverError(f"malformed answer line {atom_line!r}: {exc}") from None
        value = None
        if i < len(lines) and lines[i].strip().startswith("Optimization:"):
            fields = lines[i].split(":", 1)[1].split()
            i += 1
            try:
                value = sum(int(f) for f in fields)
            except ValueError:
                raise ExternalSolverError(f"malformed optimization line {lines[i - 1]!r}") from None
        if value is None:
            value = cost(atoms, weaks or ())
        out.append(CostedAnswerSet(atoms, value))
    return out


def run_external(program: Program, command: str, timeout: float | None = None,
                 optimal_only: bool = True) -> list[CostedAnswerSet]:
    """Write ``program`` to a temporary file and run ``command`` on it.

    ``command`` is a template in which ``{program}`` is replaced by the file
    path; without a placeholder the path is appended.  With ``optimal_only``
    only the cheapest reported answers are kept, since optimizing solvers
    print every improving model.
    """
    fd, path = tempfile.mkstemp(suffix=".lp", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(to_aspcore2(program))
        if "{program}" in command:
            argv = shlex.split(command.replace("{program}", shlex.quote(path)))
        else:
            argv = shlex.split(command) + [path]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except FileNotFoundError as exc:
            raise ExternalSolverError(f"solver not found: {argv[0]}") from exc
    finally:
        os.unlink(path)
    if not any(s in proc.stdout for s in _STATUS):
        raise ExternalSolverError(f"solver produced no status line (exit {proc.returncode}): {proc.stderr.strip()}")
    models = parse_external_models(proc.stdout, program.weaks)
    if optimal_only and models:
        best = min(m.cost for m in models)
        models = [m for m in models if m.cost == best]
    return models
