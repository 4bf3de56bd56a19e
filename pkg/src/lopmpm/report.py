"""Flat-file outputs: per-generation trace CSV and benchmark reports."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional, TextIO

from .engine import RunTrace

TRACE_VERSION = "lopmpm-trace v1"
TRACE_COLUMNS = [
    "generation",
    "best_objective",
    "average_objective",
    "diversity",
    "stagnation",
    "selection_fallbacks",
    "restart",
    "elapsed_ms",
]
# Columns holding wall-clock measurements; excluded from determinism checks.
WALL_CLOCK_COLUMNS = {"elapsed_ms", "time_to_best"}


def derive_seed(base_seed: int, instance_name: str, run_index: int) -> int:
    """Stable 64-bit seed for one (instance, run) cell of a campaign."""
    blob = f"{base_seed}\x1f{instance_name}\x1f{run_index}".encode()
    return int.from_bytes(hashlib.blake2b(blob, digest_size=8).digest(), "little")


def write_trace(trace: RunTrace, fh: TextIO) -> None:
    fh.write(f"# {TRACE_VERSION}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for r in trace.records:
        writer.writerow([
            r.generation,
            r.best_objective,
            repr(r.average_objective),
            repr(r.diversity),
            r.stagnation,
            r.selection_fallbacks,
            int(r.restart),
            f"{r.elapsed_ms:.3f}",
        ])


def trace_to_string(trace: RunTrace) -> str:
    buf = io.StringIO()
    write_trace(trace, buf)
    return buf.getvalue()


def read_trace(fh: TextIO) -> List[Dict[str, str]]:
    first = fh.readline()
    if first.strip() != f"# {TRACE_VERSION}":
        raise ValueError(f"not a {TRACE_VERSION} file")
    return list(csv.DictReader(fh))


@dataclass
class RunRow:
    instance: str
    run: int
    seed: int
    n: int
    best_objective: int
    time_to_best: float
    generation_of_best: int
    generations: int
    restarts: int
    selection_fallbacks: int
    config_digest: str
    label: str = ""
    instance_digest: str = ""


@dataclass
class Aggregate:
    instance: str
    runs: int
    f_best: int
    f_avg: float
    label: str = ""


RUN_COLUMNS = list(RunRow.__dataclass_fields__)
AGG_COLUMNS = list(Aggregate.__dataclass_fields__)


def aggregate(rows: Iterable[RunRow]) -> List[Aggregate]:
    """Best and mean objective per (label, instance), in first-seen order."""
    groups: Dict[tuple, List[int]] = {}
    for row in rows:
        groups.setdefault((row.label, row.instance), []).append(row.best_objective)
    return [
        Aggregate(instance=inst, runs=len(vals), f_best=max(vals),
                  f_avg=sum(vals) / len(vals), label=label)
        for (label, inst), vals in groups.items()
    ]


def report_csv(rows: List[RunRow], aggregates: Optional[List[Aggregate]] = None) -> str:
    """One CSV with a ``record`` column: ``run`` rows first, then ``aggregate`` rows."""
    if aggregates is None:
        aggregates = aggregate(rows)
    columns = ["record"] + RUN_COLUMNS + [c for c in AGG_COLUMNS if c not in RUN_COLUMNS]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({"record": "run", **asdict(row)})
    for agg in aggregates:
        writer.writerow({"record": "aggregate", **asdict(agg)})
    return buf.getvalue()


def report_json(rows: List[RunRow], aggregates: Optional[List[Aggregate]] = None,
                **extra) -> str:
    if aggregates is None:
        aggregates = aggregate(rows)
    doc = dict(extra)
    doc["runs"] = [asdict(r) for r in rows]
    doc["aggregates"] = [asdict(a) for a in aggregates]
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
