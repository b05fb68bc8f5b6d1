"""Scalability grid: solve time per (translation, objects, contexts) cell.

Only the search is timed; building, translating and grounding happen first.
"""
from __future__ import annotations

import csv
import io
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .asp import ground, optimize
from .asp.solver import SolveTimeout
from .ckr2asp import GENERAL, SPECIALIZED, Diagnosis
from .kb import Ontology, Scene
from .measures import CostConfig
from .scenegen import GenerationConfig, compile_program, with_objects

HEADER = ("translation", "objects", "contexts", "ground_atoms", "ground_rules", "solve_ms", "timed_out",
          "optimal_cost")
TRANSLATIONS = (GENERAL, SPECIALIZED)


@dataclass(frozen=True)
class BenchRow:
    translation: str
    objects: int
    contexts: int
    ground_atoms: int
    ground_rules: int
    solve_ms: float
    timed_out: bool
    optimal_cost: int | None

    def csv_fields(self) -> list:
        return [self.translation, self.objects, self.contexts, self.ground_atoms, self.ground_rules,
                f"{self.solve_ms:.3f}", str(self.timed_out).lower(),
                "" if self.optimal_cost is None else self.optimal_cost]


def subsample(scene: Scene, n: int, seed: int | None = None) -> Scene:
    ids = scene.ids
    if n > len(ids):
        raise ValueError(f"scene has {len(ids)} objects, {n} requested")
    if seed is None:
        chosen = ids[:n]
    else:
        chosen = random.Random(seed).sample(ids, n)
    return with_objects(scene, chosen)


def run_cell(scene: Scene, ontology: Ontology, diagnoses: Sequence[Diagnosis], translation: str,
             objects: int, contexts: int, time_limit: float, costs: CostConfig | None = None,
             seed: int | None = None) -> BenchRow:
    sub = subsample(scene, objects, seed)
    cfg = GenerationConfig(costs=costs or CostConfig(), translation=translation, time_limit=time_limit)
    compiled = compile_program(sub, ontology, list(diagnoses[:contexts]), cfg)
    g = ground(compiled.program)
    start = time.perf_counter()
    try:
        res = optimize(g, all_optima=False, timeout=time_limit)
        ms, timed_out = (time.perf_counter() - start) * 1000.0, False
        best = res[0].cost if res else None
    except SolveTimeout:
        ms, timed_out, best = time_limit * 1000.0, True, None
    return BenchRow(translation, objects, contexts, len(g.atoms()), len(g.rules) + len(g.weaks),
                    ms, timed_out, None if timed_out else best)


def _cell_task(args):
    return run_cell(*args)


def run_bench(scene: Scene, ontology: Ontology, diagnoses: Sequence[Diagnosis], max_objects: int,
              max_contexts: int, time_limit: float, costs: CostConfig | None = None,
              seed: int | None = None, workers: int = 1,
              cells: Callable[[str, int, int], bool] | None = None,
              progress: Callable[[BenchRow], None] | None = None) -> list[BenchRow]:
    """Every cell of the grid, or those accepted by ``cells(translation, objects, contexts)``."""
    if max_objects > len(scene.objects):
        raise ValueError(f"scene has only {len(scene.objects)} objects")
    if max_contexts > len(diagnoses):
        raise ValueError(f"only {len(diagnoses)} diagnoses available")
    tasks = [(scene, ontology, diagnoses, t, n, k, time_limit, costs, seed)
             for t in TRANSLATIONS
             for n in range(1, max_objects + 1)
             for k in range(1, max_contexts + 1)
             if cells is None or cells(t, n, k)]
    rows = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for row in pool.map(_cell_task, tasks):
                rows.append(row)
                if progress:
                    progress(row)
    else:
        for t in tasks:
            row = _cell_task(t)
            rows.append(row)
            if progress:
                progress(row)
    return rows


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def read_csv(text: str) -> list[BenchRow]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(BenchRow(rec["translation"], int(rec["objects"]), int(rec["contexts"]),
                             int(rec["ground_atoms"]), int(rec["ground_rules"]), float(rec["solve_ms"]),
                             rec["timed_out"] == "true",
                             int(rec["optimal_cost"]) if rec["optimal_cost"] else None))
    return rows

