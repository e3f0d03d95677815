"""Model-external randomness: actualization pointers and their statistics.

An ActPointer stands for the claim that one definite outcome gets picked:
an angle on the circumference (pencil twirl) or a point on the disk (pebble
toss). The randomness lives outside the model (callers supply a seeded
stream) and its statistics are chained to the arc/area measure: on arc and
diamond partitions the hit frequencies reproduce the classical
probabilities no matter how finely the wedges are subdivided. On grid
partitions a pointer committed before the axes are chosen can land where no
world exists at all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .angles import AngleSetting, OutcomePair, PAIR_KEYS
from .geometry import (
    DISK_RADIUS,
    KIND_ARCS,
    KIND_DIAMONDS,
    KIND_GRID,
    Partition,
    cross_section_arcs,
    diamond_partition,
    grid_partition,
    grid_spec_for_delta,
    locate_labels,
)

TWO_PI = 2.0 * math.pi

MODE_ANGLE = "angle"
MODE_POINT = "point"


@dataclass(frozen=True)
class ActPointer:
    """A committed actualization choice: an angle, or a disk point."""

    mode: str
    angle: float | None = None
    x: float | None = None
    y: float | None = None

    def __post_init__(self) -> None:
        if self.mode == MODE_ANGLE:
            if self.angle is None:
                raise ValueError("angle mode needs an angle")
        elif self.mode == MODE_POINT:
            if self.x is None or self.y is None:
                raise ValueError("point mode needs x and y")
            if self.x**2 + self.y**2 > DISK_RADIUS**2 * (1 + 1e-9):
                raise ValueError("point lies outside the disk")
        else:
            raise ValueError(f"unknown pointer mode {self.mode!r}")


def sample_act(mode: str, rng: np.random.Generator) -> ActPointer:
    """Draw one pointer from a caller-owned stream.

    Angle mode: uniform on [0, 2*pi). Point mode: uniform over the disk area
    via the sqrt-radius method: radius from the first draw, angle from the
    second.
    """
    if mode == MODE_ANGLE:
        return ActPointer(mode=MODE_ANGLE, angle=float(rng.random() * TWO_PI))
    if mode == MODE_POINT:
        r = DISK_RADIUS * math.sqrt(rng.random())
        theta = rng.random() * TWO_PI
        return ActPointer(mode=MODE_POINT, x=r * math.cos(theta), y=r * math.sin(theta))
    raise ValueError(f"unknown pointer mode {mode!r}")


def _required_mode(partition: Partition) -> str:
    return MODE_ANGLE if partition.kind == KIND_ARCS else MODE_POINT


def act_outcome(partition: Partition, act: ActPointer) -> OutcomePair | None:
    """Label of the region holding the pointer; None when it hits no world.

    Arc partitions take angle pointers, diamond and grid partitions take
    point pointers. Only grid partitions can miss; arcs and diamonds tile
    their domain.
    """
    need = _required_mode(partition)
    if act.mode != need:
        raise ValueError(
            f"{partition.kind} partitions need a {need}-mode pointer, "
            f"got {act.mode}"
        )
    if act.mode == MODE_ANGLE:
        xs = np.array([math.cos(act.angle)])
        ys = np.array([math.sin(act.angle)])
    else:
        xs = np.array([act.x])
        ys = np.array([act.y])
    idx = int(locate_labels(partition, xs, ys)[0])
    if idx < 0:
        return None
    key = PAIR_KEYS[idx]
    return OutcomePair(int(key[0]), int(key[1]))


@dataclass(frozen=True)
class ActStatistics:
    """Empirical hit distribution of repeated pointer tosses."""

    n_trials: int
    counts: dict[str, int]
    misses: int

    @property
    def miss_rate(self) -> float:
        return self.misses / self.n_trials

    def freq(self, key: str) -> float:
        return self.counts.get(key, 0) / self.n_trials

    def klass_freq(self, klass: str) -> float:
        return sum(
            n for key, n in self.counts.items()
            if (klass == "E") == (key in ("00", "11"))
        ) / self.n_trials


def _sample_points(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    r = DISK_RADIUS * np.sqrt(rng.random(n))
    theta = rng.random(n) * TWO_PI
    return r * np.cos(theta), r * np.sin(theta)


def act_statistics(partition: Partition, n_trials: int, seed: int = 0) -> ActStatistics:
    """Toss ``n_trials`` seeded pointers at a partition and tally labels."""
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    rng = np.random.default_rng(seed)
    if partition.kind == KIND_ARCS:
        theta = rng.random(n_trials) * TWO_PI
        xs, ys = np.cos(theta), np.sin(theta)
    else:
        xs, ys = _sample_points(n_trials, rng)
    idx = locate_labels(partition, xs, ys)
    counts = {}
    for i, key in enumerate(PAIR_KEYS):
        n = int(np.count_nonzero(idx == i))
        if n:
            counts[key] = n
    return ActStatistics(
        n_trials=n_trials, counts=counts, misses=int(np.count_nonzero(idx < 0))
    )


@dataclass(frozen=True)
class ActFailureReport:
    """Hit/miss record of pre-committed pointers against per-setting partitions."""

    kind: str
    n_pointers: int
    per_setting: tuple[dict, ...]
    misses: int
    trials: int

    @property
    def miss_fraction(self) -> float:
        return self.misses / self.trials


def act_failure_experiment(
    pointers: Sequence[ActPointer],
    settings: Sequence[AngleSetting],
    kind: str = KIND_GRID,
    grid_m_total: int = 40,
    s: float = 0.05,
) -> ActFailureReport:
    """Test whether pointers committed before any axis choice still land on
    a world for every setting.

    The pointers must be sampled before this call; the signature takes them
    as data so nothing about the settings can leak into the choice. Each
    setting builds its own partition of the requested kind; the report lists
    per-setting hits and misses and the overall miss fraction.
    """
    if not pointers:
        raise ValueError("need at least one pointer")
    if not settings:
        raise ValueError("need at least one setting")
    per_setting = []
    misses = 0
    if kind == KIND_ARCS:
        if any(p.mode != MODE_ANGLE for p in pointers):
            raise ValueError("arc experiments need angle-mode pointers")
        theta = np.array([p.angle for p in pointers])
        xs, ys = np.cos(theta), np.sin(theta)
    else:
        if any(p.mode != MODE_POINT for p in pointers):
            raise ValueError(f"{kind} experiments need point-mode pointers")
        xs = np.array([p.x for p in pointers])
        ys = np.array([p.y for p in pointers])
    for setting in settings:
        if kind == KIND_GRID:
            part = grid_partition(grid_spec_for_delta(grid_m_total, setting.delta))
        elif kind == KIND_DIAMONDS:
            part = diamond_partition(setting, s)
        elif kind == KIND_ARCS:
            part = cross_section_arcs(setting)
        else:
            raise ValueError(f"unknown partition kind {kind!r}")
        idx = locate_labels(part, xs, ys)
        n_miss = int(np.count_nonzero(idx < 0))
        misses += n_miss
        counts = {}
        for i, key in enumerate(PAIR_KEYS):
            n = int(np.count_nonzero(idx == i))
            if n:
                counts[key] = n
        per_setting.append({
            "d": setting.d,
            "delta": setting.delta,
            "hits": len(pointers) - n_miss,
            "misses": n_miss,
            "counts": counts,
        })
    return ActFailureReport(
        kind=kind,
        n_pointers=len(pointers),
        per_setting=tuple(per_setting),
        misses=misses,
        trials=len(pointers) * len(settings),
    )


def failure_report_to_json(report: ActFailureReport) -> dict:
    return {
        "schema": 1,
        "kind": report.kind,
        "n_pointers": report.n_pointers,
        "trials": report.trials,
        "misses": report.misses,
        "miss_fraction": report.miss_fraction,
        "per_setting": list(report.per_setting),
    }


def statistics_to_json(stats: ActStatistics) -> dict:
    return {
        "schema": 1,
        "n_trials": stats.n_trials,
        "counts": dict(stats.counts),
        "misses": stats.misses,
        "miss_rate": stats.miss_rate,
        "freq": {key: stats.freq(key) for key in stats.counts},
    }
