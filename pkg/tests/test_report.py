import csv
import math

import pytest

from eprworlds.angles import setting_from_indices
from eprworlds.bell import bell_terms
from eprworlds.branching import simulate_sequences
from eprworlds.geometry import GridSpec, cross_section_arcs, diamond_partition, grid_partition
from eprworlds.report import (
    render_bell,
    render_branch,
    render_cross_section,
    render_curves,
)


def _read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_cross_section_svg_is_byte_reproducible(tmp_path):
    part = diamond_partition(setting_from_indices(3, 2), 0.05)
    p1 = tmp_path / "a.svg"
    p2 = tmp_path / "b.svg"
    render_cross_section(part, p1, csv_path=tmp_path / "a.csv")
    render_cross_section(part, p2, csv_path=tmp_path / "b.csv")
    assert p1.read_bytes() == p2.read_bytes()
    assert (tmp_path / "a.csv").read_text() == (tmp_path / "b.csv").read_text()


def test_cross_section_csv_twin_lists_every_region(tmp_path):
    part = cross_section_arcs(setting_from_indices(0, 2))
    render_cross_section(part, tmp_path / "arcs.svg", csv_path=tmp_path / "arcs.csv")
    rows = _read_csv(tmp_path / "arcs.csv")
    assert rows[0] == ["index", "label", "klass", "partial", "measure"]
    assert len(rows) - 1 == len(part.regions)


def test_grid_render(tmp_path):
    part = grid_partition(GridSpec(M=40, m=30))
    render_cross_section(part, tmp_path / "grid.svg", csv_path=tmp_path / "grid.csv")
    rows = _read_csv(tmp_path / "grid.csv")
    assert len(rows) - 1 == 4000


def test_curves_csv_and_intersections(tmp_path):
    render_curves(tmp_path / "curves.csv", svg_path=tmp_path / "curves.svg",
                  points=91)
    rows = _read_csv(tmp_path / "curves.csv")
    assert rows[0] == ["delta", "model", "pE", "pU"]
    assert len(rows) - 1 == 3 * 91
    by_delta = {}
    for delta, model, p_e, _ in rows[1:]:
        by_delta.setdefault(float(delta), {})[model] = float(p_e)
    for special in (0.0, math.pi / 4, math.pi / 2):
        at = by_delta[min(by_delta, key=lambda d: abs(d - special))]
        values = list(at.values())
        assert max(values) - min(values) < 1e-9


def test_curves_empty_model_list_writes_header_only(tmp_path):
    render_curves(tmp_path / "empty.csv", models=())
    rows = _read_csv(tmp_path / "empty.csv")
    assert rows == [["delta", "model", "pE", "pU"]]


def test_curves_svg_reproducible(tmp_path):
    render_curves(tmp_path / "c1.csv", svg_path=tmp_path / "c1.svg")
    render_curves(tmp_path / "c2.csv", svg_path=tmp_path / "c2.svg")
    assert (tmp_path / "c1.svg").read_bytes() == (tmp_path / "c2.svg").read_bytes()
    assert (tmp_path / "c1.csv").read_text() == (tmp_path / "c2.csv").read_text()


def test_bell_bars_csv(tmp_path):
    report = bell_terms("quantum_P")
    render_bell(report, tmp_path / "bell.svg", csv_path=tmp_path / "bell.csv")
    rows = _read_csv(tmp_path / "bell.csv")
    values = {row[0]: float(row[1]) for row in rows[1:]}
    assert values["P1(U)"] == pytest.approx(0.853553, abs=1e-5)
    assert values["P2(E)"] == pytest.approx(0.5, abs=1e-9)
    assert values["P3(U)"] == pytest.approx(0.146447, abs=1e-5)
    assert values["margin"] == pytest.approx(report.margin, abs=1e-9)


def test_branch_render(tmp_path):
    dist = simulate_sequences(3, 1, 2)
    render_branch(dist, tmp_path / "q.svg", csv_path=tmp_path / "q.csv")
    rows = _read_csv(tmp_path / "q.csv")
    assert rows[0] == ["r", "worlds", "fraction"]
    assert [int(r[1]) for r in rows[1:]] == [8, 12, 6, 1]
