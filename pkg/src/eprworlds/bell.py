"""Bell-inequality harness.

The inequality compared here is N1(U) <= N2(E) + N3(U) over the three
relative-angle indices d = 1, 2, 3. We report

    margin = t1 - (t2 + t3),   t1 = P_{d=1}(U), t2 = P_{d=2}(E), t3 = P_{d=3}(U)

so a positive margin is a violation. Analytic models get a fixed tolerance;
empirical count tables get a binomial-standard-error tolerance, evaluated on
within-d relative frequencies so unequal per-d totals cannot bias the
comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .angles import PAIR_KEYS, bell_angles
from .models import ANALYTIC_MODELS, canonical_model, table_for

VERDICT_SATISFIED = "satisfied"
VERDICT_SATURATED = "saturated"
VERDICT_VIOLATED = "violated"

ANALYTIC_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BellReport:
    """The three inequality terms, their margin, and the classification."""

    t1: float
    t2: float
    t3: float
    margin: float
    verdict: str
    tolerance: float
    model: str | None = None
    n_per_d: dict[int, int] | None = None
    term_se: tuple[float, float, float] | None = None
    margin_se: float | None = None

    @property
    def terms(self) -> tuple[float, float, float]:
        return (self.t1, self.t2, self.t3)


def _verdict(margin: float, tolerance: float) -> str:
    if abs(margin) <= tolerance:
        return VERDICT_SATURATED
    return VERDICT_VIOLATED if margin > tolerance else VERDICT_SATISFIED


def bell_terms(model: str, tolerance: float = ANALYTIC_TOLERANCE) -> BellReport:
    """Evaluate the inequality on an analytic model at the three test angles."""
    name = canonical_model(model)
    if name not in ANALYTIC_MODELS:
        raise ValueError(
            f"bell_terms needs an analytic model {ANALYTIC_MODELS}; "
            f"got {name!r} (grid models realize only quantized angles)"
        )
    d1, d2, d3 = bell_angles()
    t1 = table_for(name, d=d1).p["U"]
    t2 = table_for(name, d=d2).p["E"]
    t3 = table_for(name, d=d3).p["U"]
    margin = t1 - (t2 + t3)
    return BellReport(
        t1=t1, t2=t2, t3=t3, margin=margin,
        verdict=_verdict(margin, tolerance), tolerance=tolerance, model=name,
    )


def _klass_freq(cells: dict[str, int], klass: str) -> tuple[float, int]:
    total = 0
    hit = 0
    for key in PAIR_KEYS:
        n = int(cells.get(key, 0))
        if n < 0:
            raise ValueError(f"negative count for {key!r}")
        total += n
        if (klass == "E") == (key in ("00", "11")):
            hit += n
    if total == 0:
        raise ValueError("empty count bin")
    return hit / total, total


def bell_counts(counts: dict[int, dict[str, int]], k_sigma: float = 3.0) -> BellReport:
    """Evaluate the inequality on measured counts N_d(AB) for d = 1, 2, 3.

    The verdict tolerance is ``k_sigma`` times the margin's standard error
    (per-term binomial errors added in quadrature).
    """
    d1, d2, d3 = bell_angles()
    for d in (d1, d2, d3):
        if d not in counts:
            raise ValueError(f"missing count bin for d={d}")
    t1, n1 = _klass_freq(counts[d1], "U")
    t2, n2 = _klass_freq(counts[d2], "E")
    t3, n3 = _klass_freq(counts[d3], "U")
    ses = tuple(
        math.sqrt(t * (1.0 - t) / n) for t, n in ((t1, n1), (t2, n2), (t3, n3))
    )
    margin = t1 - (t2 + t3)
    margin_se = math.sqrt(sum(se * se for se in ses))
    tolerance = k_sigma * margin_se
    return BellReport(
        t1=t1, t2=t2, t3=t3, margin=margin,
        verdict=_verdict(margin, tolerance), tolerance=tolerance,
        n_per_d={d1: n1, d2: n2, d3: n3},
        term_se=ses, margin_se=margin_se,
    )


def bell_to_json(report: BellReport) -> dict:
    doc: dict = {
        "schema": 1,
        "terms": {"t1_U_d1": report.t1, "t2_E_d2": report.t2, "t3_U_d3": report.t3},
        "margin": report.margin,
        "verdict": report.verdict,
        "tolerance": report.tolerance,
    }
    if report.model is not None:
        doc["model"] = report.model
    if report.n_per_d is not None:
        doc["n_per_d"] = {str(d): n for d, n in report.n_per_d.items()}
    if report.term_se is not None:
        doc["term_se"] = list(report.term_se)
        doc["margin_se"] = report.margin_se
    return doc
