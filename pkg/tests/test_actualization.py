import math

import numpy as np
import pytest

from eprworlds.actualization import (
    ActPointer,
    act_failure_experiment,
    act_outcome,
    act_statistics,
    sample_act,
)
from eprworlds.angles import setting_from_indices
from eprworlds.geometry import (
    DISK_RADIUS,
    GridSpec,
    cross_section_arcs,
    diamond_partition,
    grid_partition,
)
from eprworlds.models import prob_transition

PI = math.pi
ALL_SETTINGS = [setting_from_indices(a, b)
                for a, b in ((0, 0), (3, 2), (0, 2), (3, 0))]


def test_pointer_validation():
    with pytest.raises(ValueError):
        ActPointer(mode="angle")
    with pytest.raises(ValueError):
        ActPointer(mode="point", x=1.0, y=1.0)  # far outside the disk
    with pytest.raises(ValueError):
        ActPointer(mode="warp", angle=0.0)
    ActPointer(mode="point", x=0.0, y=DISK_RADIUS)  # rim is fine


def test_sampling_is_deterministic_under_seeding():
    a = sample_act("angle", np.random.default_rng(4))
    b = sample_act("angle", np.random.default_rng(4))
    assert a == b
    p = sample_act("point", np.random.default_rng(4))
    q = sample_act("point", np.random.default_rng(4))
    assert p == q


def test_angle_sampling_uniform_quadrants():
    rng = np.random.default_rng(10)
    n = 100_000
    angles = np.array([sample_act("angle", rng).angle for _ in range(n)])
    assert angles.min() >= 0 and angles.max() < 2 * PI
    sigma = math.sqrt(0.25 * 0.75 / n)
    for q in range(4):
        freq = np.count_nonzero((angles >= q * PI / 2) & (angles < (q + 1) * PI / 2)) / n
        assert abs(freq - 0.25) < 3 * sigma


def test_point_sampling_uniform_over_area():
    rng = np.random.default_rng(11)
    n = 100_000
    pts = [sample_act("point", rng) for _ in range(n)]
    radii = np.array([math.hypot(p.x, p.y) for p in pts])
    assert radii.max() <= DISK_RADIUS * (1 + 1e-12)
    # uniform-disk moments: E[r] = 2R/3, Var[r] = R^2/18
    sigma_mean = DISK_RADIUS / math.sqrt(18 * n)
    assert abs(radii.mean() - 2 * DISK_RADIUS / 3) < 3 * sigma_mean


def test_act_outcome_on_parallel_arcs():
    part = cross_section_arcs(setting_from_indices(0, 0))
    # second quadrant is A=1, B=0 at parallel axes
    assert act_outcome(part, ActPointer(mode="angle", angle=2.0)).key == "10"
    assert act_outcome(part, ActPointer(mode="angle", angle=0.3)).key == "01"


def test_arcs_never_miss():
    part = cross_section_arcs(setting_from_indices(3, 2))
    rng = np.random.default_rng(0)
    for _ in range(500):
        assert act_outcome(part, sample_act("angle", rng)) is not None


def test_mode_kind_mismatch_rejected():
    arcs = cross_section_arcs(setting_from_indices(0, 0))
    diamonds = diamond_partition(setting_from_indices(3, 2), 0.1)
    with pytest.raises(ValueError):
        act_outcome(arcs, ActPointer(mode="point", x=0.0, y=0.0))
    with pytest.raises(ValueError):
        act_outcome(diamonds, ActPointer(mode="angle", angle=1.0))


def test_grid_center_misses():
    part = grid_partition(GridSpec(M=40, m=30))
    assert act_outcome(part, ActPointer(mode="point", x=0.0, y=0.0)) is None


def test_statistics_on_arcs_match_arc_measure():
    n = 100_000
    sigma = math.sqrt(0.25 * 0.75 / n)
    part = cross_section_arcs(setting_from_indices(3, 2))
    stats = act_statistics(part, n, seed=21)
    assert stats.misses == 0
    assert abs(stats.klass_freq("E") - 0.25) < 3 * sigma
    part = cross_section_arcs(setting_from_indices(0, 2))
    stats = act_statistics(part, n, seed=22)
    assert abs(stats.klass_freq("E") - 0.5) < 3 * math.sqrt(0.25 / n)


def test_statistics_on_diamonds_stay_classical():
    # the central demonstration: external tosses cannot see the cell counts
    n = 100_000
    part = diamond_partition(setting_from_indices(3, 2), 0.02)
    stats = act_statistics(part, n, seed=23)
    assert stats.misses == 0
    freq_e = stats.klass_freq("E")
    sigma = math.sqrt(0.25 * 0.75 / n)
    assert abs(freq_e - 0.25) < 3 * sigma
    p_star = prob_transition(-PI / 8).p["E"]
    assert abs(freq_e - p_star) > 5 * sigma


def test_statistics_on_small_grid_conditional_on_hit():
    # equal block areas at M=2, m=1: hits split evenly between classes
    part = grid_partition(GridSpec(M=2, m=1))
    stats = act_statistics(part, 100_000, seed=24)
    hits = stats.n_trials - stats.misses
    assert hits > 1000
    freq_e_given_hit = sum(
        n for key, n in stats.counts.items() if key in ("00", "11")) / hits
    assert abs(freq_e_given_hit - 0.5) < 3 * math.sqrt(0.25 / hits)


def test_failure_experiment_grid_vs_arcs():
    rng = np.random.default_rng(31)
    pebbles = [sample_act("point", rng) for _ in range(1000)]
    report = act_failure_experiment(pebbles, ALL_SETTINGS, kind="grid",
                                    grid_m_total=40)
    assert report.trials == 4000
    assert report.miss_fraction > 0
    twirls = [sample_act("angle", rng) for _ in range(1000)]
    report = act_failure_experiment(twirls, ALL_SETTINGS, kind="arcs")
    assert report.miss_fraction == 0.0


def test_failure_experiment_hit_set_depends_on_angle():
    # some pointers hit one angle's world layout and miss another's
    rng = np.random.default_rng(32)
    pebbles = [sample_act("point", rng) for _ in range(200)]
    parallel = grid_partition(GridSpec(M=8, m=8))   # delta = 0
    tilted = grid_partition(GridSpec(M=8, m=3))     # delta = atan(5/3)
    from eprworlds.geometry import locate_labels
    xs = np.array([p.x for p in pebbles])
    ys = np.array([p.y for p in pebbles])
    hit_p = locate_labels(parallel, xs, ys) >= 0
    hit_t = locate_labels(tilted, xs, ys) >= 0
    assert np.any(hit_p & ~hit_t) and np.any(hit_t & ~hit_p)


def test_degenerate_layouts_share_footprint_with_swapped_labels():
    # at delta = 0 and delta = pi/2 the worlds fill the same four
    # quadrant-bisector blocks; only the labels swap class
    rng = np.random.default_rng(34)
    pebbles = [sample_act("point", rng) for _ in range(200)]
    from eprworlds.geometry import locate_labels
    xs = np.array([p.x for p in pebbles])
    ys = np.array([p.y for p in pebbles])
    at_zero = locate_labels(grid_partition(GridSpec(M=8, m=8)), xs, ys)
    at_quarter = locate_labels(grid_partition(GridSpec(M=8, m=0)), xs, ys)
    assert np.array_equal(at_zero >= 0, at_quarter >= 0)
    hits = at_zero >= 0
    assert np.any(hits)
    # delta = 0 holds only unequal pairs, delta = pi/2 only equal pairs
    assert set(at_zero[hits].tolist()) <= {1, 2}
    assert set(at_quarter[hits].tolist()) <= {0, 3}


def test_failure_experiment_mode_checks():
    rng = np.random.default_rng(33)
    pebbles = [sample_act("point", rng) for _ in range(3)]
    with pytest.raises(ValueError):
        act_failure_experiment(pebbles, ALL_SETTINGS, kind="arcs")
    with pytest.raises(ValueError):
        act_failure_experiment([], ALL_SETTINGS)
    with pytest.raises(ValueError):
        act_failure_experiment(pebbles, [])
