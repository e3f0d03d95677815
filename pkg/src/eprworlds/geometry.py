"""Disk cross-section partitions: wedge arcs, diamond cells, block grids.

Everything lives on the disk of radius 1/(2*pi), whose circumference is 1 so
arc lengths read directly as probabilities. Region areas are reported
multiplied by 4*pi, the factor that makes the full disk measure 1.

Labeling convention (fixed, documented): Alice's 0-outcome quadrants start at
her axis angle alpha, i.e. A=0 on [alpha, alpha+pi/2) and the opposite
quadrant; Bob's 0-quadrants are offset a quarter turn from his axis so that
parallel axes (delta=0) give perfect anti-correlation, only (01) and (10).

Diamond cells: inside each wedge, Alice's wire family runs parallel to the
polarization of her outcome there (along her axis in 0-quadrants, orthogonal
in 1-quadrants), and likewise for Bob. The two families cross at angle
delta inside E-wedges and pi/2-delta inside U-wedges, so a complete cell has
normalized area s^2/sin|delta| or s^2/cos(delta) respectively. Wire spacing
is s in coordinates where the disk has unit area, i.e. s/(2*sqrt(pi)) raw.

Cells are assigned to a wedge by the midpoint rule: a cell counts for the
wedge containing its center. Cells clipped by the rim or a wedge boundary
are flagged ``partial``; they still count (dropping them biases narrow
wedges low by tens of percent at practical spacings, destroying convergence
to the closed-form counts).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from shapely.geometry import Polygon

from .angles import AngleSetting, OutcomePair, PAIR_KEYS

DISK_RADIUS = 1.0 / (2.0 * math.pi)
TWO_PI = 2.0 * math.pi
_TOL = 1e-12
_ARC_STEP = 0.01  # radians per chord when a rim arc is polygonized

KIND_ARCS = "arcs"
KIND_DIAMONDS = "diamonds"
KIND_GRID = "grid"


@dataclass(frozen=True)
class Region:
    """One labeled piece of a partition.

    Arc regions carry ``arc=(theta0, theta1)`` and their measure is the arc
    length on the unit circumference. Cell regions carry CCW ``vertices``
    and their measure is area*4*pi.
    """

    label: OutcomePair
    measure: float
    arc: tuple[float, float] | None = None
    vertices: tuple[tuple[float, float], ...] | None = None
    partial: bool = False


@dataclass(frozen=True)
class Wedge:
    """Half-open angular sector [start, end) with one outcome label."""

    start: float
    end: float
    label: OutcomePair

    @property
    def width(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class GridSpec:
    """Block-grid resolution: M directions per quadrant, m steps along the axis.

    For m > 0 the realized relative angle satisfies tan(delta) = (M - m)/m.
    """

    M: int
    m: int

    def __post_init__(self) -> None:
        if self.M <= 0:
            raise ValueError(f"M must be positive, got {self.M}")
        if not 0 <= self.m <= self.M:
            raise ValueError(f"m must lie in [0, M={self.M}], got {self.m}")

    @property
    def delta(self) -> float:
        return math.atan2(self.M - self.m, self.m)


@dataclass(frozen=True)
class Block:
    """A square block of unit cells in a grid partition, rotated to its axis."""

    label: OutcomePair
    center: tuple[float, float]
    angle: float
    side_cells: int
    cell_size: float

    @property
    def side(self) -> float:
        return self.side_cells * self.cell_size


@dataclass(frozen=True)
class Partition:
    """An immutable labeled partition of (part of) the disk cross-section."""

    kind: str
    delta: float
    regions: tuple[Region, ...]
    normalization: float
    setting: AngleSetting | None = None
    s: float | None = None
    grid: GridSpec | None = None
    wedges: tuple[Wedge, ...] = ()
    blocks: tuple[Block, ...] = ()
    counts: dict[str, int] | None = None
    warning: str | None = None

    def klass_measure(self, klass: str) -> float:
        return sum(r.measure for r in self.regions if r.label.klass == klass)

    def klass_counts(self) -> dict[str, int]:
        out = {"E": 0, "U": 0}
        for key, n in (self.counts or {}).items():
            out["E" if key in ("00", "11") else "U"] += n
        return out


def _angles_of(setting: AngleSetting | float) -> tuple[float, float, float]:
    """(alpha, beta, delta) for a discrete setting or a free relative angle."""
    if isinstance(setting, AngleSetting):
        return setting.alpha, setting.beta, setting.delta
    delta = float(setting)
    return 0.0, delta, delta


def _alice_bit(theta: float, alpha: float) -> int:
    rel = (theta - alpha) % TWO_PI
    return 0 if rel < math.pi / 2 or math.pi <= rel < 1.5 * math.pi else 1


def _bob_bit(theta: float, beta: float) -> int:
    rel = (theta - beta - math.pi / 2) % TWO_PI
    return 0 if rel < math.pi / 2 or math.pi <= rel < 1.5 * math.pi else 1


def wedge_layout(setting: AngleSetting | float) -> tuple[Wedge, ...]:
    """The up-to-8 labeled sectors cut by the two crossed wire wheels."""
    alpha, beta, delta = _angles_of(setting)
    if abs(delta) > math.pi / 2 + _TOL:
        raise ValueError(f"|delta| must not exceed pi/2, got {delta}")
    cuts: list[float] = []
    for k in range(4):
        cuts.append((alpha + k * math.pi / 2) % TWO_PI)
        cuts.append((beta + k * math.pi / 2) % TWO_PI)
    cuts.sort()
    merged: list[float] = []
    for c in cuts:
        if not merged or c - merged[-1] > 1e-9:
            merged.append(c)
    if merged and (TWO_PI + merged[0]) - merged[-1] <= 1e-9:
        merged.pop()
    wedges = []
    for i, start in enumerate(merged):
        end = merged[i + 1] if i + 1 < len(merged) else merged[0] + TWO_PI
        mid = 0.5 * (start + end)
        label = OutcomePair(_alice_bit(mid, alpha), _bob_bit(mid, beta))
        wedges.append(Wedge(start=start, end=end, label=label))
    return tuple(wedges)


def wedge_at(wedges: tuple[Wedge, ...], theta: float) -> Wedge:
    """The wedge whose half-open [start, end) interval contains ``theta``."""
    base = wedges[0].start
    t = (theta - base) % TWO_PI + base
    for w in wedges:
        if w.start <= t < w.end:
            return w
    return wedges[-1]  # t == base + 2*pi up to rounding


def cross_section_arcs(setting: AngleSetting | float) -> Partition:
    """Partition the unit circumference into labeled wedge arcs.

    Summed arc length per outcome class reproduces the classical
    probabilities 2|delta|/pi (E) and 1 - 2|delta|/pi (U).
    """
    _, _, delta = _angles_of(setting)
    wedges = wedge_layout(setting)
    regions = tuple(
        Region(label=w.label, measure=w.width / TWO_PI, arc=(w.start, w.end))
        for w in wedges
    )
    return Partition(
        kind=KIND_ARCS,
        delta=delta,
        regions=regions,
        normalization=sum(r.measure for r in regions),
        setting=setting if isinstance(setting, AngleSetting) else None,
        wedges=wedges,
    )


def diamond_counts_closed_form(delta: float, s: float) -> tuple[float, float]:
    """Idealized diamond-cell counts (area over cell size, no rim loss):

        N(E) = (1/s^2) * (2|delta|/pi) * sin|delta|
        N(U) = (1/s^2) * (1 - 2|delta|/pi) * cos(delta)
    """
    if abs(delta) > math.pi / 2 + _TOL:
        raise ValueError(f"|delta| must not exceed pi/2, got {delta}")
    if s <= 0:
        raise ValueError(f"spacing s must be positive, got {s}")
    ce = 2.0 * abs(delta) / math.pi
    n_e = ce * math.sin(abs(delta)) / s**2
    n_u = (1.0 - ce) * math.cos(delta) / s**2
    return n_e, n_u


def _family_direction(bit: int, axis: float) -> float:
    """Wire direction inside a station's quadrant: along the axis for outcome
    0 (vertical polarization), orthogonal for outcome 1."""
    return axis if bit == 0 else axis + math.pi / 2


def _wedge_lattice(wedge: Wedge, alpha: float, beta: float):
    """Cell centers/corners machinery for one wedge's wire lattice.

    Returns (f_a, f_b, sign-fixed normals) such that position(p, q) =
    p*f_a + q*f_b has lattice coordinates p = x.na, q = x.nb, both
    non-negative across the wedge.
    """
    u_a = _family_direction(wedge.label.A, alpha)
    u_b = _family_direction(wedge.label.B, beta)
    n_a = np.array([-math.sin(u_a), math.cos(u_a)])
    n_b = np.array([-math.sin(u_b), math.cos(u_b)])
    mid = 0.5 * (wedge.start + wedge.end)
    mid_v = np.array([math.cos(mid), math.sin(mid)])
    if float(mid_v @ n_a) < 0:
        n_a = -n_a
    if float(mid_v @ n_b) < 0:
        n_b = -n_b
    mat = np.array([n_a, n_b])
    det = float(np.linalg.det(mat))
    if abs(det) < 1e-9:
        return None  # degenerate family pair; wedge has no 2-D lattice
    inv = np.linalg.inv(mat)
    return inv[:, 0], inv[:, 1], n_a, n_b, abs(det)


def _centers_in_wedge(wedge: Wedge, f_a, f_b, h: float):
    """Lattice indices (j, k) of cells whose center lies in wedge & disk."""
    n_max = int(DISK_RADIUS / h) + 2
    idx = np.arange(n_max + 1)
    jj, kk = np.meshgrid(idx, idx, indexing="ij")
    pp = (jj + 0.5) * h
    qq = (kk + 0.5) * h
    xs = pp * f_a[0] + qq * f_b[0]
    ys = pp * f_a[1] + qq * f_b[1]
    inside_disk = xs**2 + ys**2 <= DISK_RADIUS**2
    ang = np.arctan2(ys, xs) % TWO_PI
    rel = (ang - wedge.start) % TWO_PI
    inside_wedge = rel < wedge.width
    sel = inside_disk & inside_wedge
    return jj[sel], kk[sel]


def diamond_counts(delta: float, s: float) -> dict[str, int]:
    """Midpoint-rule diamond cell counts per outcome key, without regions."""
    _validate_spacing(s)
    h = s / (2.0 * math.sqrt(math.pi))
    counts = {key: 0 for key in PAIR_KEYS}
    alpha, beta, _ = _angles_of(delta)
    for wedge in wedge_layout(delta):
        lat = _wedge_lattice(wedge, alpha, beta)
        if lat is None:
            continue
        f_a, f_b, _, _, _ = lat
        jj, _ = _centers_in_wedge(wedge, f_a, f_b, h)
        counts[wedge.label.key] += int(jj.size)
    return counts


def _validate_spacing(s: float) -> None:
    if not 0 < s <= 1:
        raise ValueError(f"spacing s must lie in (0, 1], got {s}")


def _sector_polygon(wedge: Wedge) -> Polygon:
    n = max(2, int(math.ceil(wedge.width / _ARC_STEP)))
    angs = np.linspace(wedge.start, wedge.end, n + 1)
    pts = [(0.0, 0.0)]
    pts += [(DISK_RADIUS * math.cos(t), DISK_RADIUS * math.sin(t)) for t in angs]
    return Polygon(pts)


def _ccw(vertices: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    area2 = 0.0
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:] + vertices[:1]):
        area2 += x0 * y1 - x1 * y0
    return tuple(vertices if area2 >= 0 else vertices[::-1])


def diamond_partition(setting: AngleSetting | float, s: float) -> Partition:
    """Dice every wedge with its two wire families at spacing ``s``.

    Complete cells are exact parallelograms; cells cut by the rim or by a
    wedge boundary are clipped (flagged ``partial``) but still assigned to
    the wedge holding their center, so counts follow the midpoint rule.
    """
    _validate_spacing(s)
    alpha, beta, delta = _angles_of(setting)
    h = s / (2.0 * math.sqrt(math.pi))
    wedges = wedge_layout(setting)
    regions: list[Region] = []
    counts = {key: 0 for key in PAIR_KEYS}
    for wedge in wedges:
        lat = _wedge_lattice(wedge, alpha, beta)
        if lat is None:
            continue
        f_a, f_b, n_a, n_b, det = lat
        jj, kk = _centers_in_wedge(wedge, f_a, f_b, h)
        counts[wedge.label.key] += int(jj.size)
        if jj.size == 0:
            continue
        # corner grid for the selected cells
        d_start = np.array([math.cos(wedge.start), math.sin(wedge.start)])
        d_end = np.array([math.cos(wedge.end), math.sin(wedge.end)])
        sector = None
        cell_measure = h * h / det * (4.0 * math.pi)
        for j, k in zip(jj.tolist(), kk.tolist()):
            corners = []
            ok = True
            for dj, dk in ((0, 0), (1, 0), (1, 1), (0, 1)):
                p = (j + dj) * h
                q = (k + dk) * h
                x = p * f_a[0] + q * f_b[0]
                y = p * f_a[1] + q * f_b[1]
                corners.append((x, y))
                if x * x + y * y > DISK_RADIUS**2 + _TOL:
                    ok = False
                cross_lo = d_start[0] * y - d_start[1] * x
                cross_hi = x * d_end[1] - y * d_end[0]
                if cross_lo < -_TOL or cross_hi < -_TOL:
                    ok = False
            if ok:
                regions.append(
                    Region(
                        label=wedge.label,
                        measure=cell_measure,
                        vertices=_ccw(corners),
                        partial=False,
                    )
                )
            else:
                if sector is None:
                    sector = _sector_polygon(wedge)
                clipped = Polygon(corners).intersection(sector)
                if clipped.is_empty or clipped.area <= 0:
                    continue
                if clipped.geom_type == "MultiPolygon":
                    clipped = max(clipped.geoms, key=lambda g: g.area)
                verts = [(float(x), float(y)) for x, y in clipped.exterior.coords[:-1]]
                regions.append(
                    Region(
                        label=wedge.label,
                        measure=clipped.area * 4.0 * math.pi,
                        vertices=_ccw(verts),
                        partial=True,
                    )
                )
    warning = None
    if not any(not r.partial for r in regions):
        warning = "no_complete_cell"
    return Partition(
        kind=KIND_DIAMONDS,
        delta=delta,
        regions=tuple(regions),
        normalization=sum(r.measure for r in regions),
        setting=setting if isinstance(setting, AngleSetting) else None,
        s=s,
        wedges=wedges,
        counts=counts,
        warning=warning,
    )


def grid_counts(spec: GridSpec) -> dict[str, int]:
    """Exact cell counts per outcome key: 2m^2 for each unequal pair,
    2(M-m)^2 for each equal pair."""
    e = 2 * (spec.M - spec.m) ** 2
    u = 2 * spec.m**2
    return {"00": e, "11": e, "01": u, "10": u}


_BLOCK_BISECTOR_OFFSET = {"00": 0.0, "01": math.pi / 4, "11": math.pi / 2, "10": 3 * math.pi / 4}


def grid_partition(spec: GridSpec) -> Partition:
    """Lay the grid model's worlds out as two square blocks per label.

    Counts are normative (2m^2 per U-label, 2(M-m)^2 per E-label); the block
    placement is a documented rendering choice: each label gets two opposite
    blocks centered at radius R/2 along the bisector of the wedge that label
    occupies at the realized angle, rotated to that bisector. With cell size
    R/(2M) neighboring blocks never touch and every block stays inside the
    disk. The union never covers the disk: the layout is deliberately not
    circularly symmetric.
    """
    delta = spec.delta
    cell = DISK_RADIUS / (2 * spec.M)
    rho = DISK_RADIUS / 2
    blocks: list[Block] = []
    counts = grid_counts(spec)
    for key in PAIR_KEYS:
        side_cells = (spec.M - spec.m) if key in ("00", "11") else spec.m
        if side_cells == 0:
            continue
        base = delta / 2 + _BLOCK_BISECTOR_OFFSET[key]
        for twin in (0.0, math.pi):
            phi = (base + twin) % TWO_PI
            label = OutcomePair(int(key[0]), int(key[1]))
            blocks.append(
                Block(
                    label=label,
                    center=(rho * math.cos(phi), rho * math.sin(phi)),
                    angle=phi,
                    side_cells=side_cells,
                    cell_size=cell,
                )
            )
    blocks.sort(key=lambda b: (b.label.key, b.angle))
    regions: list[Region] = []
    measure = cell * cell * 4.0 * math.pi
    for blk in blocks:
        c, sn = math.cos(blk.angle), math.sin(blk.angle)
        half = blk.side / 2
        for i in range(blk.side_cells):
            for j in range(blk.side_cells):
                corners = []
                for di, dj in ((0, 0), (1, 0), (1, 1), (0, 1)):
                    u = -half + (i + di) * cell
                    v = -half + (j + dj) * cell
                    corners.append(
                        (
                            blk.center[0] + u * c - v * sn,
                            blk.center[1] + u * sn + v * c,
                        )
                    )
                regions.append(
                    Region(label=blk.label, measure=measure, vertices=_ccw(corners))
                )
    return Partition(
        kind=KIND_GRID,
        delta=delta,
        regions=tuple(regions),
        normalization=sum(r.measure for r in regions),
        grid=spec,
        blocks=tuple(blocks),
        counts=counts,
    )


def grid_spec_for_delta(m_total: int, delta: float) -> GridSpec:
    """Closest grid resolution to a requested angle: m = round(M/(1+tan|delta|)).

    Exact only where tan(delta) is rational in the grid; d=1 and d=3 settings
    are approximated, which is inherent to the quantized-angle model.
    """
    delta = abs(delta)
    if delta >= math.pi / 2 - 1e-12:
        m = 0
    else:
        m = round(m_total / (1.0 + math.tan(delta)))
    return GridSpec(M=m_total, m=min(max(m, 0), m_total))


def locate_labels(partition: Partition, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorized point lookup: index into PAIR_KEYS per point, -1 for a miss.

    Arc and diamond partitions tile the disk (every point takes its wedge's
    label); only grid partitions can miss. Boundary points go to the first
    block in the deterministic block order.
    """
    if partition.kind in (KIND_ARCS, KIND_DIAMONDS):
        ang = np.arctan2(ys, xs) % TWO_PI
        return _wedge_label_indices(partition.wedges, ang)
    if partition.kind != KIND_GRID:
        raise ValueError(f"unknown partition kind {partition.kind!r}")
    out = np.full(xs.shape, -1, dtype=np.int64)
    key_index = {key: i for i, key in enumerate(PAIR_KEYS)}
    for blk in partition.blocks:
        c, sn = math.cos(blk.angle), math.sin(blk.angle)
        dx = xs - blk.center[0]
        dy = ys - blk.center[1]
        u = dx * c + dy * sn
        v = -dx * sn + dy * c
        half = blk.side / 2
        hit = (np.abs(u) <= half + _TOL) & (np.abs(v) <= half + _TOL) & (out == -1)
        out[hit] = key_index[blk.label.key]
    return out


def _wedge_label_indices(wedges: tuple[Wedge, ...], ang: np.ndarray) -> np.ndarray:
    key_index = {key: i for i, key in enumerate(PAIR_KEYS)}
    starts = np.array([w.start for w in wedges])
    labels = np.array([key_index[w.label.key] for w in wedges], dtype=np.int64)
    base = starts[0]
    rel = (ang - base) % TWO_PI + base
    idx = np.searchsorted(starts, rel, side="right") - 1
    idx = np.clip(idx, 0, len(wedges) - 1)
    return labels[idx]


def angle_label(partition: Partition, theta: float) -> OutcomePair:
    """Label of the wedge containing circumference angle ``theta``."""
    if partition.kind != KIND_ARCS:
        raise ValueError("angle lookup requires an arcs partition")
    return wedge_at(partition.wedges, theta).label


def partition_to_json(partition: Partition) -> dict:
    doc: dict = {
        "schema": 1,
        "kind": partition.kind,
        "delta": partition.delta,
        "normalization": partition.normalization,
        "disk_radius": DISK_RADIUS,
    }
    if partition.s is not None:
        doc["s"] = partition.s
    if partition.grid is not None:
        doc["grid"] = {"M": partition.grid.M, "m": partition.grid.m}
    if partition.counts is not None:
        doc["counts"] = dict(partition.counts)
    if partition.warning:
        doc["warning"] = partition.warning
    regions = []
    for r in partition.regions:
        item: dict = {
            "label": r.label.key,
            "klass": r.label.klass,
            "measure": r.measure,
            "partial": r.partial,
        }
        if r.arc is not None:
            item["arc"] = [r.arc[0], r.arc[1]]
        if r.vertices is not None:
            item["vertices"] = [[x, y] for x, y in r.vertices]
        regions.append(item)
    doc["regions"] = regions
    return doc
