import math

import pytest

from eprworlds.angles import (
    OutcomePair,
    bell_angles,
    choose_setting,
    delta_for_d,
    setting_from_indices,
)


def test_outcome_pair_klass():
    assert OutcomePair(0, 0).klass == "E"
    assert OutcomePair(1, 1).klass == "E"
    assert OutcomePair(0, 1).klass == "U"
    assert OutcomePair(1, 0).klass == "U"


def test_outcome_pair_rejects_non_bits():
    with pytest.raises(ValueError):
        OutcomePair(2, 0)


def test_setting_parallel_axes():
    s = setting_from_indices(0, 0)
    assert s.delta == 0.0
    assert s.d == 0


def test_setting_3_2():
    s = setting_from_indices(3, 2)
    assert s.delta == pytest.approx(-math.pi / 8, abs=1e-15)
    assert s.d == 1


def test_setting_0_2():
    s = setting_from_indices(0, 2)
    assert s.delta == pytest.approx(math.pi / 4, abs=1e-15)
    assert s.d == 2


def test_strict_mode_rejects_unknown_indices():
    with pytest.raises(ValueError):
        setting_from_indices(1, 0)
    with pytest.raises(ValueError):
        setting_from_indices(0, 1)


def test_free_mode_accepts_any_integers():
    s = setting_from_indices(5, 1, strict=False)
    assert s.d == 4
    assert s.delta == pytest.approx(-4 * math.pi / 8)


def test_all_settings_total_and_d():
    for a in (0, 3):
        for b in (0, 2):
            s = setting_from_indices(a, b)
            assert s.d == abs(b - a)
            assert s.delta == pytest.approx(s.beta - s.alpha, abs=1e-15)
            assert abs(s.delta) <= math.pi / 2 + 1e-15
            assert s.d in (0, 1, 2, 3)


def test_coin_pairs_cover_every_d_once():
    # independent oracle: enumerate all four coin pairs
    ds = sorted(choose_setting(ca, cb).d for ca in (0, 1) for cb in (0, 1))
    assert ds == [0, 1, 2, 3]


def test_choose_setting_examples():
    assert choose_setting(0, 0).d == 0
    s = choose_setting(1, 0)
    assert (s.a, s.b, s.d) == (3, 0, 3)
    s = choose_setting(1, 1)
    assert (s.a, s.b, s.d) == (3, 2, 1)


def test_choose_setting_rejects_non_bits():
    with pytest.raises(ValueError):
        choose_setting(2, 0)


def test_bell_angles():
    assert bell_angles() == (1, 2, 3)
    assert bell_angles(full=True) == (0, 1, 2, 3)
    deltas = [delta_for_d(d) for d in bell_angles()]
    assert deltas == pytest.approx([math.pi / 8, math.pi / 4, 3 * math.pi / 8])
