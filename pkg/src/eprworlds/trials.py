"""Seeded end-to-end experiment runs: coin-flip angle choice, outcome
sampling, count tables, and Bell analysis.

Reproducibility contract: one root seed keys a counter-based Philox stream;
pair i consumes the fixed block of four draws at offsets 4i..4i+3 (coin A,
coin B, and up to two outcome draws), so results never depend on traversal
or shard order. Identical (model, mode, pairs, seed) give byte-identical
exports.

Randomness modes:

* internal      - each pair's outcome is drawn from the model's probability
                  table at that pair's relative angle.
* external_act  - each pair draws an actualization pointer and reads the
                  partition for its setting: arc partitions for the
                  classical model, diamond partitions for the transition
                  model, block grids for the grid model. Grid pointers can
                  miss; misses are recorded, never resampled (resampling
                  would smuggle angle-dependent selection back in). The
                  quantum model is rejected here: no partition reproduces
                  its statistics under external randomness.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .angles import PAIR_KEYS, setting_from_indices
from .bell import BellReport, bell_counts
from .geometry import (
    DISK_RADIUS,
    cross_section_arcs,
    diamond_partition,
    grid_partition,
    grid_spec_for_delta,
    locate_labels,
)
from .models import (
    MODEL_CLASSICAL,
    MODEL_GRID,
    MODEL_QUANTUM,
    MODEL_TRANSITION,
    canonical_model,
    prob_grid,
    table_for,
)

MODE_INTERNAL = "internal"
MODE_EXTERNAL = "external_act"
DEFAULT_PAIRS = 800

_CSV_HEADER = ["pair_index", "a", "b", "d", "A", "B", "miss"]


@dataclass(frozen=True)
class TrialRecord:
    pair_index: int
    a: int
    b: int
    d: int
    A: int | None
    B: int | None
    miss: bool = False


@dataclass(frozen=True)
class TrialLog:
    """Immutable record of one seeded run plus its folded count tables."""

    model: str
    mode: str
    pairs: int
    seed: int
    records: tuple[TrialRecord, ...]
    counts: dict[int, dict[str, int]]
    misses: dict[int, int]
    s: float | None = None
    grid_m_total: int | None = None


def _fold_counts(records) -> tuple[dict[int, dict[str, int]], dict[int, int]]:
    counts: dict[int, dict[str, int]] = {}
    misses: dict[int, int] = {}
    for rec in records:
        if rec.miss:
            misses[rec.d] = misses.get(rec.d, 0) + 1
            continue
        bin_ = counts.setdefault(rec.d, {key: 0 for key in PAIR_KEYS})
        bin_[f"{rec.A}{rec.B}"] += 1
    return counts, misses


def _pair_draws(seed: int, pairs: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=seed))
    return rng.random((pairs, 4))


def run_trials(model: str, mode: str = MODE_INTERNAL, pairs: int = DEFAULT_PAIRS,
               seed: int = 0, s: float = 0.05, grid_m_total: int = 40) -> TrialLog:
    """Simulate ``pairs`` photon pairs with per-pair coin-flip angle choice."""
    name = canonical_model(model)
    if pairs < 1:
        raise ValueError("pairs must be at least 1")
    if mode not in (MODE_INTERNAL, MODE_EXTERNAL):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == MODE_EXTERNAL and name == MODEL_QUANTUM:
        raise ValueError(
            "no partition realizes the quantum table under external "
            "randomness; run the quantum model in internal mode"
        )
    draws = _pair_draws(seed, pairs)
    coin_a = (draws[:, 0] >= 0.5).astype(np.int64)
    coin_b = (draws[:, 1] >= 0.5).astype(np.int64)
    a_idx = np.where(coin_a == 1, 3, 0)
    b_idx = np.where(coin_b == 1, 2, 0)
    d_all = np.abs(b_idx - a_idx)

    A = np.full(pairs, -1, dtype=np.int64)
    B = np.full(pairs, -1, dtype=np.int64)
    for d in range(4):
        mask = d_all == d
        if not np.any(mask):
            continue
        setting = _setting_for_d(d)
        if mode == MODE_INTERNAL:
            pair_idx = _sample_internal(name, setting, draws[mask, 2], grid_m_total)
        else:
            pair_idx = _sample_external(name, setting, draws[mask, 2],
                                        draws[mask, 3], s, grid_m_total)
        A[mask] = pair_idx // 2
        B[mask] = np.where(pair_idx >= 0, pair_idx % 2, -1)
    records = tuple(
        TrialRecord(
            pair_index=i,
            a=int(a_idx[i]),
            b=int(b_idx[i]),
            d=int(d_all[i]),
            A=int(A[i]) if A[i] >= 0 else None,
            B=int(B[i]) if B[i] >= 0 else None,
            miss=bool(A[i] < 0),
        )
        for i in range(pairs)
    )
    counts, misses = _fold_counts(records)
    return TrialLog(
        model=name, mode=mode, pairs=pairs, seed=seed,
        records=records, counts=counts, misses=misses,
        s=s if (mode == MODE_EXTERNAL and name == MODEL_TRANSITION) else None,
        grid_m_total=grid_m_total if name == MODEL_GRID else None,
    )


def _setting_for_d(d: int):
    return {
        0: setting_from_indices(0, 0),
        1: setting_from_indices(3, 2),
        2: setting_from_indices(0, 2),
        3: setting_from_indices(3, 0),
    }[d]


def _sample_internal(name: str, setting, u: np.ndarray, grid_m_total: int) -> np.ndarray:
    if name == MODEL_GRID:
        tbl = prob_grid(grid_spec_for_delta(grid_m_total, setting.delta))
    else:
        tbl = table_for(name, d=setting.d)
    cum = np.cumsum([tbl.per_pair[key] for key in PAIR_KEYS])
    cum[-1] = 1.0
    return np.searchsorted(cum, u, side="right").clip(0, 3)


def _sample_external(name: str, setting, u1: np.ndarray, u2: np.ndarray,
                     s: float, grid_m_total: int) -> np.ndarray:
    if name == MODEL_CLASSICAL:
        part = cross_section_arcs(setting)
        theta = u1 * 2.0 * math.pi
        xs, ys = np.cos(theta), np.sin(theta)
    else:
        if name == MODEL_TRANSITION:
            part = diamond_partition(setting, s)
        else:
            part = grid_partition(grid_spec_for_delta(grid_m_total, setting.delta))
        r = DISK_RADIUS * np.sqrt(u1)
        theta = u2 * 2.0 * math.pi
        xs, ys = r * np.cos(theta), r * np.sin(theta)
    return locate_labels(part, xs, ys)


@dataclass(frozen=True)
class AnalysisResult:
    report: BellReport
    freq: dict[int, dict[str, float]]
    misses: dict[int, int]


def analyze(log: TrialLog) -> AnalysisResult:
    """Bell verdict and per-angle frequency table of a finished run."""
    freq = {}
    for d, bin_ in sorted(log.counts.items()):
        total = sum(bin_.values())
        freq[d] = {key: bin_[key] / total for key in PAIR_KEYS} if total else {}
    report = bell_counts(log.counts)
    return AnalysisResult(report=report, freq=freq, misses=dict(log.misses))


def export_log(log: TrialLog, fmt: str) -> str:
    """Render a log as CSV rows or a JSON document; both round-trip."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for rec in log.records:
            writer.writerow([
                rec.pair_index, rec.a, rec.b, rec.d,
                "" if rec.A is None else rec.A,
                "" if rec.B is None else rec.B,
                int(rec.miss),
            ])
        return buf.getvalue()
    if fmt == "json":
        doc = log_to_json(log)
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    raise ValueError(f"unknown export format {fmt!r}; use 'csv' or 'json'")


def log_to_json(log: TrialLog) -> dict:
    doc: dict = {
        "schema": 1,
        "model": log.model,
        "mode": log.mode,
        "pairs": log.pairs,
        "seed": log.seed,
        "counts": {str(d): dict(v) for d, v in sorted(log.counts.items())},
        "misses": {str(d): n for d, n in sorted(log.misses.items())},
        "records": [
            [rec.pair_index, rec.a, rec.b, rec.d,
             -1 if rec.A is None else rec.A,
             -1 if rec.B is None else rec.B,
             int(rec.miss)]
            for rec in log.records
        ],
    }
    if log.s is not None:
        doc["s"] = log.s
    if log.grid_m_total is not None:
        doc["grid_m_total"] = log.grid_m_total
    return doc


def load_log(doc: str | dict) -> TrialLog:
    """Parse an exported JSON log, revalidating the folded counts."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    records = tuple(
        TrialRecord(
            pair_index=int(row[0]), a=int(row[1]), b=int(row[2]), d=int(row[3]),
            A=None if row[4] < 0 else int(row[4]),
            B=None if row[5] < 0 else int(row[5]),
            miss=bool(row[6]),
        )
        for row in doc["records"]
    )
    counts = {int(d): {k: int(n) for k, n in v.items()}
              for d, v in doc["counts"].items()}
    misses = {int(d): int(n) for d, n in doc["misses"].items()}
    folded_counts, folded_misses = _fold_counts(records)
    if folded_counts != counts or folded_misses != misses:
        raise ValueError("count tables do not match the folded records")
    return TrialLog(
        model=doc["model"], mode=doc["mode"], pairs=int(doc["pairs"]),
        seed=int(doc["seed"]), records=records, counts=counts, misses=misses,
        s=doc.get("s"), grid_m_total=doc.get("grid_m_total"),
    )
