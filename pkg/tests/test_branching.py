from fractions import Fraction

import pytest

from eprworlds.branching import (
    BranchNode,
    branch_total,
    most_common_r,
    refined_branch_tree,
    simulate_sequences,
    tree_probabilities,
    typical_window,
    typicality_fraction,
    world_count,
)


def test_world_count_examples():
    assert world_count(3, 1, 1, 2) == 12
    assert world_count(3, 3, 1, 2) == 1
    assert world_count(3, 0, 1, 2) == 8
    assert world_count(3, 2, 1, 2) == 6
    assert world_count(0, 0, 1, 2) == 1


def test_world_count_rejects_bad_r():
    with pytest.raises(ValueError):
        world_count(3, 4, 1, 2)
    with pytest.raises(ValueError):
        world_count(3, -1, 1, 2)


def test_world_count_sum_identity_exact():
    # arbitrary-precision identity, far beyond float range
    i, n_e, n_u = 50, 7, 13
    assert sum(world_count(i, r, n_e, n_u) for r in range(i + 1)) == (n_e + n_u) ** i
    assert branch_total(i, n_e, n_u) == 20**50


def test_enumeration_reproduces_small_example():
    dist = simulate_sequences(3, 1, 2)
    assert dist.mode == "enumeration"
    assert dist.total == 27
    assert dist.q_by_r == {0: 8, 1: 12, 2: 6, 3: 1}


def test_enumeration_more_examples():
    assert simulate_sequences(1, 1, 2).q_by_r == {0: 2, 1: 1}
    assert simulate_sequences(6, 1, 2).q_by_r[2] == 240
    assert simulate_sequences(0, 1, 2).q_by_r == {0: 1}


def test_enumeration_matches_closed_form_across_family():
    for n_e in range(0, 4):
        for n_u in range(0, 4):
            if n_e + n_u == 0:
                continue
            for i in range(0, 11):
                if (n_e + n_u) ** i > 200_000:
                    break
                dist = simulate_sequences(i, n_e, n_u)
                expected = {
                    r: world_count(i, r, n_e, n_u)
                    for r in range(i + 1)
                    if world_count(i, r, n_e, n_u) > 0
                }
                assert dist.q_by_r == expected, (i, n_e, n_u)


def test_enumeration_cap_and_sampling():
    with pytest.raises(ValueError):
        simulate_sequences(20, 1, 2, max_enumeration=1000)
    dist = simulate_sequences(20, 1, 2, max_enumeration=1000,
                              samples=5000, seed=9)
    assert dist.mode == "sampling"
    assert dist.total == 5000
    assert sum(dist.q_by_r.values()) == 5000
    # the sampled peak should sit near the exact most common r
    peak = max(dist.q_by_r, key=dist.q_by_r.get)
    assert abs(peak - most_common_r(20, 1, 2)) <= 2


def test_typicality_fraction_examples():
    assert typicality_fraction(3, 1, 2, {1}) == Fraction(12, 27)
    assert typicality_fraction(9, 1, 2, {2, 3, 4}) == Fraction(14016, 19683)
    assert typicality_fraction(3, 1, 2, {0, 1, 2, 3}) == 1


def test_typicality_fraction_validation():
    with pytest.raises(ValueError):
        typicality_fraction(3, 1, 2, set())
    with pytest.raises(ValueError):
        typicality_fraction(3, 1, 2, {4})


def test_typicality_grows_with_window():
    last = Fraction(0)
    r0 = most_common_r(12, 1, 2)
    for w in range(0, 6):
        window = set(range(max(0, r0 - w), min(12, r0 + w) + 1))
        frac = typicality_fraction(12, 1, 2, window)
        assert frac >= last
        last = frac


def test_most_common_r():
    assert most_common_r(3, 1, 2) == 1
    assert most_common_r(9, 1, 2) == 3
    assert most_common_r(4, 1, 1) == 2
    # independent check against full enumeration
    dist = simulate_sequences(9, 1, 2)
    assert most_common_r(9, 1, 2) == max(dist.q_by_r, key=dist.q_by_r.get)


def test_typical_window_growth():
    assert typical_window(3, 1, 2, 1) == (1,)
    assert typical_window(6, 1, 2, 2) == (1, 2)
    assert typical_window(9, 1, 2, 3) == (2, 3, 4)


def test_typical_window_fractions_match_reported_scale():
    # 44% at i=3, mid-50s at i=6, ~70% at i=9 for a 1E+2U run
    f3 = float(typicality_fraction(3, 1, 2, typical_window(3, 1, 2, 1)))
    f6 = float(typicality_fraction(6, 1, 2, typical_window(6, 1, 2, 2)))
    f9 = float(typicality_fraction(9, 1, 2, typical_window(9, 1, 2, 3)))
    assert f3 == pytest.approx(12 / 27)
    assert 0.54 <= f6 <= 0.60
    assert abs(f9 - 0.70) <= 0.02
    assert f3 < f6 < f9


def test_refined_tree_external_vs_internal():
    external, internal = tree_probabilities(
        refined_branch_tree(3), lambda label: label == "11")
    assert external == 0.5
    assert internal == 0.75


def test_single_leaf_tree():
    external, internal = tree_probabilities(
        BranchNode(label="x"), lambda label: label == "x")
    assert (external, internal) == (1.0, 1.0)


def test_uniform_balanced_tree_identity():
    # balanced binary depth 2: external equals internal for any leaf set
    leaves = [BranchNode(label=str(i)) for i in range(4)]
    tree = BranchNode(children=(
        BranchNode(children=(leaves[0], leaves[1])),
        BranchNode(children=(leaves[2], leaves[3])),
    ))
    external, internal = tree_probabilities(tree, lambda label: label == "2")
    assert external == internal == 0.25
    external, internal = tree_probabilities(tree, lambda label: label in ("0", "3"))
    assert external == internal == 0.5


def test_widths_weight_external_choice():
    tree = BranchNode(children=(
        BranchNode(label="a", width=3.0),
        BranchNode(label="b", width=1.0),
    ))
    external, internal = tree_probabilities(tree, lambda label: label == "a")
    assert external == pytest.approx(0.75)
    assert internal == 0.5


def test_non_positive_widths_rejected():
    tree = BranchNode(children=(
        BranchNode(label="a", width=0.0),
        BranchNode(label="b", width=1.0),
    ))
    with pytest.raises(ValueError):
        tree_probabilities(tree, lambda label: True)
