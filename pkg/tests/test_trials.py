import json
import math

import pytest

from eprworlds.angles import choose_setting
from eprworlds.models import table_for
from eprworlds.trials import (
    analyze,
    export_log,
    load_log,
    run_trials,
)


def test_determinism_byte_identical_exports():
    a = run_trials("quantum_P", "internal", 800, seed=7)
    b = run_trials("quantum_P", "internal", 800, seed=7)
    assert export_log(a, "csv") == export_log(b, "csv")
    assert export_log(a, "json") == export_log(b, "json")
    c = run_trials("quantum_P", "internal", 800, seed=8)
    assert export_log(a, "csv") != export_log(c, "csv")


def test_records_consistent_with_coin_mapping():
    log = run_trials("classical_C", "internal", 500, seed=3)
    for rec in log.records:
        assert rec.a in (0, 3) and rec.b in (0, 2)
        assert rec.d == abs(rec.b - rec.a)
        setting = choose_setting(int(rec.a == 3), int(rec.b == 2))
        assert (setting.a, setting.b, setting.d) == (rec.a, rec.b, rec.d)
        assert not rec.miss
        assert rec.A in (0, 1) and rec.B in (0, 1)


def test_counts_fold_and_roundtrip():
    log = run_trials("transition_Pstar", "internal", 1200, seed=5)
    total = sum(sum(v.values()) for v in log.counts.values())
    assert total == 1200
    doc = export_log(log, "json")
    log2 = load_log(doc)
    assert export_log(log2, "json") == doc
    assert log2.counts == log.counts


def test_load_rejects_tampered_counts():
    log = run_trials("classical_C", "internal", 50, seed=1)
    doc = json.loads(export_log(log, "json"))
    first_d = next(iter(doc["counts"]))
    first_key = next(iter(doc["counts"][first_d]))
    doc["counts"][first_d][first_key] += 1
    with pytest.raises(ValueError):
        load_log(doc)


def test_unknown_format_rejected():
    log = run_trials("classical_C", "internal", 10, seed=1)
    with pytest.raises(ValueError):
        export_log(log, "xml")


def test_quantum_external_rejected():
    with pytest.raises(ValueError):
        run_trials("quantum_P", "external_act", 10, seed=0)


def test_internal_frequencies_converge_to_model():
    log = run_trials("quantum_P", "internal", 100_000, seed=17)
    for d, bin_ in log.counts.items():
        n = sum(bin_.values())
        tbl = table_for("quantum_P", d=d)
        for key, count in bin_.items():
            assert abs(count / n - tbl.per_pair[key]) < 0.01


def test_angle_indices_uniform_chi_square():
    log = run_trials("classical_C", "internal", 100_000, seed=19)
    per_d = {d: 0 for d in range(4)}
    for rec in log.records:
        per_d[rec.d] += 1
    expected = log.pairs / 4
    chi2 = sum((n - expected) ** 2 / expected for n in per_d.values())
    assert chi2 < 16.27  # chi^2_{3, 0.999}


def test_external_classical_matches_internal_statistics():
    n = 20_000
    internal = run_trials("classical_C", "internal", n, seed=23)
    external = run_trials("classical_C", "external_act", n, seed=29)
    assert not external.misses
    for d in internal.counts:
        n_int = sum(internal.counts[d].values())
        n_ext = sum(external.counts[d].values())
        tbl = table_for("classical_C", d=d)
        for key in internal.counts[d]:
            p = tbl.per_pair[key]
            if p == 0:
                assert internal.counts[d][key] == 0
                assert external.counts[d][key] == 0
                continue
            sigma = math.sqrt(p * (1 - p))
            f_int = internal.counts[d][key] / n_int
            f_ext = external.counts[d][key] / n_ext
            assert abs(f_int - p) < 3 * sigma / math.sqrt(n_int)
            assert abs(f_ext - p) < 3 * sigma / math.sqrt(n_ext)


def test_external_transition_is_chained_to_classical():
    # diamond partitions under external tosses reproduce the classical
    # table, not the transition model's own internal table
    log = run_trials("transition_Pstar", "external_act", 20_000, seed=31)
    d1 = log.counts[1]
    n = sum(d1.values())
    freq_e = (d1["00"] + d1["11"]) / n
    assert abs(freq_e - 0.25) < 3 * math.sqrt(0.25 * 0.75 / n)


def test_grid_external_records_misses():
    log = run_trials("grid", "external_act", 4000, seed=37)
    assert sum(log.misses.values()) > 0
    miss_rows = [rec for rec in log.records if rec.miss]
    assert miss_rows
    assert all(rec.A is None and rec.B is None for rec in miss_rows)
    csv_text = export_log(log, "csv")
    lines = csv_text.splitlines()
    assert lines[0] == "pair_index,a,b,d,A,B,miss"
    miss_line = next(l for l in lines[1:] if l.endswith(",1"))
    fields = miss_line.split(",")
    assert fields[4] == "" and fields[5] == ""
    # round-trips with misses intact
    log2 = load_log(export_log(log, "json"))
    assert log2.misses == log.misses


def test_analyze_delegates_to_bell_counts():
    log = run_trials("transition_Pstar", "internal", 20_000, seed=41)
    result = analyze(log)
    assert result.report.verdict == "violated"
    quantum = analyze(run_trials("quantum_P", "internal", 20_000, seed=41))
    assert result.report.margin > quantum.report.margin > 0
    for d, freqs in result.freq.items():
        assert sum(freqs.values()) == pytest.approx(1.0, abs=1e-9)


def test_analyze_classical_saturates_within_noise():
    result = analyze(run_trials("classical_C", "internal", 100_000, seed=43))
    assert result.report.verdict == "saturated"
    assert abs(result.report.margin) < 3 * result.report.margin_se


def test_analyze_requires_all_bell_bins():
    log = run_trials("classical_C", "internal", 2, seed=0)
    with pytest.raises(ValueError):
        analyze(log)


def test_pairs_validation():
    with pytest.raises(ValueError):
        run_trials("classical_C", "internal", 0, seed=0)
    with pytest.raises(ValueError):
        run_trials("classical_C", "sideways", 10, seed=0)
