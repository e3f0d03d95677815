"""Sequential-measurement world counting and branch-tree probabilities.

A single photon pair splits one world into N(E) + N(U) successor worlds.
After i pairs, the number of worlds whose record holds exactly r E-outcomes
is Q(r) = C(i, r) * N(E)^r * N(U)^(i-r); the Q sum to (N(E)+N(U))^i. All of
this is exact big-integer arithmetic; fractions are reported as exact
rationals alongside doubles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

ENUMERATION_CAP = 10**7


def world_count(i: int, r: int, n_e: int, n_u: int) -> int:
    """Exact number of i-pair worlds recording r E-outcomes."""
    if i < 0:
        raise ValueError(f"i must be non-negative, got {i}")
    if not 0 <= r <= i:
        raise ValueError(f"r must lie in [0, {i}], got {r}")
    if n_e < 0 or n_u < 0:
        raise ValueError("per-run branch counts must be non-negative")
    return math.comb(i, r) * n_e**r * n_u ** (i - r)


def branch_total(i: int, n_e: int, n_u: int) -> int:
    return (n_e + n_u) ** i


def typicality_fraction(i: int, n_e: int, n_u: int,
                        window: Iterable[int]) -> Fraction:
    """Share of worlds whose E-count falls inside ``window`` (a set of r)."""
    rs = sorted(set(int(r) for r in window))
    if not rs:
        raise ValueError("window must contain at least one r value")
    if rs[0] < 0 or rs[-1] > i:
        raise ValueError(f"window values must lie in [0, {i}]")
    total = branch_total(i, n_e, n_u)
    if total == 0:
        raise ValueError("no worlds: typicality undefined")
    return Fraction(sum(world_count(i, r, n_e, n_u) for r in rs), total)


def most_common_r(i: int, n_e: int, n_u: int) -> int:
    """The E-count held by the largest family of worlds; ties break low."""
    if n_e + n_u < 1:
        raise ValueError("need at least one branch per run")
    best_r, best_q = 0, -1
    for r in range(i + 1):
        q = world_count(i, r, n_e, n_u)
        if q > best_q:
            best_r, best_q = r, q
    return best_r


def typical_window(i: int, n_e: int, n_u: int, size: int) -> tuple[int, ...]:
    """A contiguous window of ``size`` r-values around the most common r.

    Grows greedily from the peak toward the neighbor with the larger world
    count, breaking ties toward smaller r. This pins down the otherwise
    ambiguous "around the most common r" windows deterministically.
    """
    if size < 1:
        raise ValueError("window size must be at least 1")
    lo = hi = most_common_r(i, n_e, n_u)
    while hi - lo + 1 < min(size, i + 1):
        q_lo = world_count(i, lo - 1, n_e, n_u) if lo > 0 else -1
        q_hi = world_count(i, hi + 1, n_e, n_u) if hi < i else -1
        if q_lo >= q_hi:
            lo -= 1
        else:
            hi += 1
    return tuple(range(lo, hi + 1))


@dataclass(frozen=True)
class BranchDistribution:
    """World counts by E-occurrence, from enumeration or sampling."""

    i: int
    n_e: int
    n_u: int
    mode: str  # "enumeration" | "sampling"
    total: int
    q_by_r: dict[int, int]

    def fraction(self, r: int) -> Fraction:
        return Fraction(self.q_by_r.get(r, 0), self.total)

    def rows(self) -> list[tuple[int, int, float]]:
        return [
            (r, q, q / self.total)
            for r, q in sorted(self.q_by_r.items())
        ]


def simulate_sequences(i: int, n_e: int, n_u: int,
                       max_enumeration: int = ENUMERATION_CAP,
                       samples: int | None = None,
                       seed: int = 0) -> BranchDistribution:
    """Walk every i-step branch sequence and tally E-counts.

    Enumeration treats each run's branches as distinct letters (the first
    n_e are E) and visits all (n_e+n_u)^i sequences, independently of the
    closed-form count. Above ``max_enumeration`` worlds, pass ``samples`` to
    estimate the distribution from seeded random sequences instead.
    """
    if i < 0 or n_e < 0 or n_u < 0:
        raise ValueError("arguments must be non-negative")
    n = n_e + n_u
    total = n**i
    if total <= max_enumeration and samples is None:
        if total == 0:
            return BranchDistribution(i, n_e, n_u, "enumeration", 0, {})
        counts = np.zeros(total, dtype=np.uint16)
        for pos in range(i):
            digits = (np.arange(total, dtype=np.int64) // n**pos) % n
            counts += (digits < n_e).astype(np.uint16)
        q = np.bincount(counts, minlength=i + 1)
        return BranchDistribution(
            i, n_e, n_u, "enumeration", total,
            {r: int(q[r]) for r in range(i + 1) if q[r] > 0},
        )
    if samples is None:
        raise ValueError(
            f"{total} worlds exceed the enumeration cap {max_enumeration}; "
            "pass samples= to switch to sampling"
        )
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, n, size=(samples, i)) if i > 0 else np.zeros((samples, 0))
    rs = (draws < n_e).sum(axis=1)
    q = np.bincount(rs, minlength=i + 1)
    return BranchDistribution(
        i, n_e, n_u, "sampling", samples,
        {r: int(q[r]) for r in range(i + 1) if q[r] > 0},
    )


@dataclass(frozen=True)
class BranchNode:
    """A node of an outcome tree; leaves may carry an outcome label and
    siblings may carry positive widths for weighted external choice."""

    label: str | None = None
    children: tuple["BranchNode", ...] = ()
    width: float | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children


def _leaves(node: BranchNode) -> list[BranchNode]:
    if node.is_leaf:
        return [node]
    out: list[BranchNode] = []
    for child in node.children:
        out.extend(_leaves(child))
    return out


def tree_probabilities(tree: BranchNode,
                       predicate: Callable[[str | None], bool]) -> tuple[float, float]:
    """(external, internal) probability of landing on a matching leaf.

    External: walk root to leaf, choosing children by normalized sibling
    widths (uniform when absent); a fresh run of the whole tree each trial.
    Internal: matching leaves over total leaves, the view of someone who
    simply finds themselves in one of the leaf worlds.
    """
    leaves = _leaves(tree)
    if not leaves:
        raise ValueError("tree has no leaves")
    internal = sum(1 for leaf in leaves if predicate(leaf.label)) / len(leaves)

    external = 0.0

    def walk(node: BranchNode, weight: float) -> None:
        nonlocal external
        if node.is_leaf:
            if predicate(node.label):
                external += weight
            return
        widths = [1.0 if c.width is None else float(c.width) for c in node.children]
        if any(w <= 0 for w in widths):
            raise ValueError("sibling widths must be positive")
        total = sum(widths)
        for child, w in zip(node.children, widths):
            walk(child, weight * w / total)

    walk(tree, 1.0)
    return external, internal


def refined_branch_tree(n_refined: int = 3, refined_label: str = "11",
                        other_label: str = "10") -> BranchNode:
    """Two-level tree where one of two equally wide top branches later splits
    into ``n_refined`` same-label leaves. External probability to land on the
    refined label stays 1/2; the internal leaf share is n/(n+1)."""
    if n_refined < 1:
        raise ValueError("need at least one refined leaf")
    refined = BranchNode(children=tuple(
        BranchNode(label=refined_label) for _ in range(n_refined)
    ))
    return BranchNode(children=(refined, BranchNode(label=other_label)))


def distribution_to_json(dist: BranchDistribution) -> dict:
    return {
        "schema": 1,
        "i": dist.i,
        "n_e": dist.n_e,
        "n_u": dist.n_u,
        "mode": dist.mode,
        "total": dist.total,
        "rows": [
            {"r": r, "worlds": q, "fraction": f}
            for r, q, f in dist.rows()
        ],
    }
