"""Angle conventions shared by every model.

All experiment settings live on a discrete grid: Alice picks index a from
{0, 3}, Bob picks b from {0, 2}, and the axis angles are a*pi/8 and b*pi/8.
The discrete indices (a, b, d) are the canonical identity for table lookups;
the radian values are derived and never used for classification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

ANGLE_STEP = math.pi / 8
ALICE_INDICES = (0, 3)
BOB_INDICES = (0, 2)


@dataclass(frozen=True, order=True)
class OutcomePair:
    """Joint detector outcome: bit A at Alice's station, bit B at Bob's."""

    A: int
    B: int

    def __post_init__(self) -> None:
        if self.A not in (0, 1) or self.B not in (0, 1):
            raise ValueError(f"outcome bits must be 0 or 1, got ({self.A}, {self.B})")

    @property
    def klass(self) -> str:
        """'E' when both stations saw the same bit, 'U' otherwise."""
        return "E" if self.A == self.B else "U"

    @property
    def key(self) -> str:
        return f"{self.A}{self.B}"


PAIR_00 = OutcomePair(0, 0)
PAIR_01 = OutcomePair(0, 1)
PAIR_10 = OutcomePair(1, 0)
PAIR_11 = OutcomePair(1, 1)
PAIRS = (PAIR_00, PAIR_01, PAIR_10, PAIR_11)
PAIR_KEYS = tuple(p.key for p in PAIRS)
PAIR_BY_KEY = {p.key: p for p in PAIRS}
KLASSES = ("E", "U")


@dataclass(frozen=True)
class AngleSetting:
    """One joint choice of measurement axes.

    alpha/beta are radians; delta = beta - alpha; d = |b - a| indexes the
    relative angle d*pi/8.
    """

    a: int
    b: int
    alpha: float
    beta: float
    delta: float
    d: int


def setting_from_indices(a: int, b: int, strict: bool = True) -> AngleSetting:
    """Build the setting for Alice index ``a`` and Bob index ``b``.

    In strict mode only the experiment's allowed indices (a in {0,3},
    b in {0,2}) are accepted; free mode takes any integers, which is useful
    for sweeping relative angles.
    """
    if strict and (a not in ALICE_INDICES or b not in BOB_INDICES):
        raise ValueError(
            f"strict mode allows a in {ALICE_INDICES} and b in {BOB_INDICES}, "
            f"got (a={a}, b={b})"
        )
    return AngleSetting(
        a=a,
        b=b,
        alpha=a * ANGLE_STEP,
        beta=b * ANGLE_STEP,
        delta=(b - a) * ANGLE_STEP,
        d=abs(b - a),
    )


def choose_setting(coin_alice: int, coin_bob: int) -> AngleSetting:
    """Map two fair coin bits to a setting: 0 keeps the axis at index 0,
    1 moves Alice to 3 and Bob to 2. The module never owns randomness;
    callers supply the bits."""
    if coin_alice not in (0, 1) or coin_bob not in (0, 1):
        raise ValueError(f"coin bits must be 0 or 1, got ({coin_alice}, {coin_bob})")
    return setting_from_indices(3 if coin_alice else 0, 2 if coin_bob else 0)


def bell_angles(full: bool = False) -> tuple[int, ...]:
    """The relative-angle indices used by the inequality: d in {1,2,3}.

    ``full=True`` adds d=0, the parallel-axes case needed when testing a
    candidate model on every reachable setting.
    """
    return (0, 1, 2, 3) if full else (1, 2, 3)


def delta_for_d(d: int) -> float:
    return d * ANGLE_STEP
