"""Closed-form outcome probabilities for the model ladder.

Four models share one table shape:

* classical_C      - arc-length probability, E-class 2|delta|/pi (a straight
                     line in delta; saturates the Bell inequality exactly)
* quantum_P        - E-class sin^2(delta), the standard quantum value
* transition_Pstar - diamond-cell world counts fed through the internal
                     probability ratio; the wire spacing cancels
* grid             - exact rational world counts from a GridSpec; equals the
                     quantum value whenever tan(delta) = (M-m)/m

Class probabilities split evenly over their two outcome pairs: the source is
symmetric under swapping the pair inside a class.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .angles import AngleSetting, delta_for_d
from .geometry import GridSpec, diamond_counts_closed_form, grid_counts

MODEL_CLASSICAL = "classical_C"
MODEL_QUANTUM = "quantum_P"
MODEL_TRANSITION = "transition_Pstar"
MODEL_GRID = "grid"

ANALYTIC_MODELS = (MODEL_CLASSICAL, MODEL_QUANTUM, MODEL_TRANSITION)

_ALIASES = {
    "classical": MODEL_CLASSICAL,
    "classical_c": MODEL_CLASSICAL,
    "c": MODEL_CLASSICAL,
    "quantum": MODEL_QUANTUM,
    "quantum_p": MODEL_QUANTUM,
    "p": MODEL_QUANTUM,
    "transition": MODEL_TRANSITION,
    "transition_pstar": MODEL_TRANSITION,
    "pstar": MODEL_TRANSITION,
    "p*": MODEL_TRANSITION,
    "grid": MODEL_GRID,
}


def canonical_model(name: str) -> str:
    key = name.strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    raise ValueError(f"unknown model {name!r}; expected one of "
                     f"{sorted(set(_ALIASES.values()))}")


@dataclass(frozen=True)
class ProbabilityTable:
    """Per-class and per-pair outcome probabilities of one model at one angle."""

    model: str
    delta: float
    p: dict[str, float]
    per_pair: dict[str, float]
    exact_p_e: Fraction | None = None


def _table(model: str, delta: float, p_e: float,
           exact: Fraction | None = None) -> ProbabilityTable:
    p_u = 1.0 - p_e
    return ProbabilityTable(
        model=model,
        delta=delta,
        p={"E": p_e, "U": p_u},
        per_pair={"00": p_e / 2, "11": p_e / 2, "01": p_u / 2, "10": p_u / 2},
        exact_p_e=exact,
    )


def _check_half_range(delta: float) -> None:
    if abs(delta) > math.pi / 2 + 1e-12:
        raise ValueError(f"|delta| must not exceed pi/2, got {delta}")


def prob_classical(delta: float, d: int | None = None) -> ProbabilityTable:
    """Arc-length probability: p(E) = 2|delta|/pi.

    Passing the discrete index ``d`` evaluates the equivalent d/4, which is
    exact in binary floating point; use it wherever exact saturation matters.
    """
    if d is not None:
        if not 0 <= d <= 3:
            raise ValueError(f"d must lie in 0..3, got {d}")
        return _table(MODEL_CLASSICAL, delta_for_d(d), d / 4, exact=Fraction(d, 4))
    _check_half_range(delta)
    return _table(MODEL_CLASSICAL, delta, 2.0 * abs(delta) / math.pi)


def prob_quantum(delta: float) -> ProbabilityTable:
    """Standard quantum probability: p(E) = sin^2(delta)."""
    return _table(MODEL_QUANTUM, delta, math.sin(delta) ** 2)


def prob_internal(n_e: float, n_u: float) -> float:
    """Internal probability of finding oneself in an E-world: N(E)/(N(E)+N(U)).

    Undefined with no worlds at all; zero E-worlds simply give zero.
    """
    if n_e < 0 or n_u < 0:
        raise ValueError("world counts must be non-negative")
    total = n_e + n_u
    if total <= 0:
        raise ValueError("no worlds: internal probability undefined")
    return n_e / total


def prob_internal_exact(n_e: int, n_u: int) -> Fraction:
    if n_e < 0 or n_u < 0:
        raise ValueError("world counts must be non-negative")
    if n_e + n_u <= 0:
        raise ValueError("no worlds: internal probability undefined")
    return Fraction(n_e, n_e + n_u)


def prob_transition(delta: float) -> ProbabilityTable:
    """Diamond-cell world counts through the internal ratio; spacing cancels:

        p(E) = (2|d|/pi) sin|d| / [ (2|d|/pi) sin|d| + (1 - 2|d|/pi) cos d ]
    """
    _check_half_range(delta)
    n_e, n_u = diamond_counts_closed_form(delta, 1.0)
    return _table(MODEL_TRANSITION, delta, prob_internal(n_e, n_u))


def prob_grid(spec: GridSpec) -> ProbabilityTable:
    """Exact world-count probability of the block-grid model.

    p(E) = (M-m)^2 / ((M-m)^2 + m^2), which equals sin^2(delta) exactly at
    the realized tan(delta) = (M-m)/m.
    """
    counts = grid_counts(spec)
    n_e = counts["00"] + counts["11"]
    n_u = counts["01"] + counts["10"]
    exact = prob_internal_exact(n_e, n_u)
    return _table(MODEL_GRID, spec.delta, float(exact), exact=exact)


def single_pbs_probs(gamma: float) -> tuple[float, float]:
    """Channel probabilities of one beam splitter at incidence angle gamma:
    (cos^2, sin^2), summing to 1."""
    return math.cos(gamma) ** 2, math.sin(gamma) ** 2


def table_for(model: str, delta: float | None = None,
              d: int | None = None) -> ProbabilityTable:
    """Evaluate a named analytic model at a relative angle.

    Give either ``delta`` (radians) or the discrete index ``d``; with ``d``
    the classical model uses its exact d/4 form.
    """
    name = canonical_model(model)
    if name == MODEL_GRID:
        raise ValueError("the grid model needs a GridSpec; use prob_grid")
    if d is not None:
        if name == MODEL_CLASSICAL:
            return prob_classical(0.0, d=d)
        delta = delta_for_d(d)
    if delta is None:
        raise ValueError("either delta or d is required")
    if name == MODEL_CLASSICAL:
        return prob_classical(delta)
    if name == MODEL_QUANTUM:
        return prob_quantum(delta)
    return prob_transition(delta)


def curve_table(model: str, deltas) -> list[tuple[float, float, float]]:
    """Rows (delta, p_E, p_U) of one model over a sweep of relative angles."""
    rows = []
    for delta in deltas:
        tbl = table_for(model, delta=float(delta))
        rows.append((float(delta), tbl.p["E"], tbl.p["U"]))
    return rows


def setting_table(model: str, setting: AngleSetting) -> ProbabilityTable:
    return table_for(model, d=setting.d)
