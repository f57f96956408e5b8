"""Relative and closed trisection diagrams, kept combinatorial.

A diagram records curve ids for the three systems, their pairwise
intersection matrices and the handle slides that produced them.  ``I_ag``
is indexed with rows for gamma and columns for alpha.  Its entry in row j,
column i (for i < j) is the number of times gamma_j was slid over beta_i,
so the standard form is lower-triangular with unit diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .groups import AbelianGroup
from .lefschetz import (
    DISK,
    SPHERE,
    LefschetzFibration,
    boundary_openbook,
    make_cycle,
    puncture,
    section_fiber_neighborhood,
)
from .openbook import total_space_h1
from .surfaces import SurfaceSig, attach_tube, double, surface_from_euler

Matrix = tuple[tuple[int, ...], ...]


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def min_arcs(page: SurfaceSig) -> int:
    """Fewest properly embedded arcs cutting a connected bounded page into a disk."""
    return 1 - page.euler


@dataclass(frozen=True)
class Provenance:
    euler: int
    page: SurfaceSig | None = None
    boundary_h1: AbelianGroup | None = None
    log: tuple[str, ...] = ()


@dataclass(frozen=True)
class TrisectionDiagram:
    surface: SurfaceSig
    alpha: tuple[str, ...]
    beta: tuple[str, ...]
    gamma: tuple[str, ...]
    I_ab: Matrix
    I_bg: Matrix
    I_ag: Matrix
    slides: tuple[tuple[str, str, int], ...] = ()
    arcs: int = 0
    parallel: frozenset[int] = frozenset()
    signs: tuple[int, ...] = ()
    provenance: Provenance | None = None

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "slides", "signs"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for name in ("I_ab", "I_bg", "I_ag"):
            object.__setattr__(self, name, tuple(tuple(int(v) for v in r) for r in getattr(self, name)))
        object.__setattr__(self, "parallel", frozenset(self.parallel))

    @property
    def relative(self) -> bool:
        return not self.surface.closed

    @property
    def size(self) -> int:
        return len(self.alpha)

    @property
    def slide_count(self) -> int:
        return sum(k for _, _, k in self.slides)


# --- wrinkling -------------------------------------------------------------


def _boundary_invariant(lf: LefschetzFibration) -> AbelianGroup | None:
    try:
        return total_space_h1(boundary_openbook(lf))
    except ValueError:
        return None


def wrinkle_compile(lf: LefschetzFibration, arcs: int | None = None) -> TrisectionDiagram:
    """Wrinkle each vanishing cycle into a tube carrying one curve per system."""
    if lf.base != DISK or lf.fiber.closed:
        raise ValueError("wrinkling needs a fibration over the disk with bounded fiber")
    n = len(lf.cycles)
    m = lf.intersections
    if m is None:
        if n > 1:
            raise ValueError("intersection data between vanishing cycles is missing")
        m = ((0,),) * n
    ids = [str(i + 1) for i in range(n)]
    slides = []
    ag = [[int(i == j) for i in range(n)] for j in range(n)]
    for j in range(n):
        for i in range(j):
            if m[i][j]:
                slides.append((f"gamma{ids[j]}", f"beta{ids[i]}", m[i][j]))
                ag[j][i] = m[i][j]
    surface = attach_tube(lf.fiber, n)
    need = min_arcs(lf.fiber)
    arcs = need if arcs is None else arcs
    if arcs < need:
        raise ValueError(f"{arcs} arcs cannot cut the page into a disk, need {need}")
    prov = Provenance(
        surface.euler,
        lf.fiber,
        _boundary_invariant(lf),
        (f"wrinkle: {n} cycles on {lf.fiber}",),
    )
    return TrisectionDiagram(
        surface,
        tuple(f"alpha{i}" for i in ids),
        tuple(f"beta{i}" for i in ids),
        tuple(f"gamma{i}" for i in ids),
        _identity(n),
        _identity(n),
        tuple(map(tuple, ag)),
        tuple(slides),
        arcs,
        frozenset(),
        tuple(c.sign for c in lf.cycles),
        prov,
    )


# --- doubling and gluing -----------------------------------------------------


def _block(a: Matrix, b: Matrix, extra: int) -> Matrix:
    na, nb = len(a), len(b)
    n = na + nb + extra
    out = [[0] * n for _ in range(n)]
    for i in range(na):
        out[i][:na] = a[i]
    for i in range(nb):
        out[na + i][na : na + nb] = b[i]
    return tuple(map(tuple, out))


def _tag(ids: Sequence[str], suffix: str) -> tuple[str, ...]:
    return tuple(f"{x}{suffix}" for x in ids)


@dataclass(frozen=True)
class GlueSpec:
    """Boundary matching: ``boundary_map[i]`` is the component of ``v`` glued to component ``i`` of ``w``."""

    boundary_map: tuple[int, ...] | None = None


def _closed_from(w: TrisectionDiagram, v: TrisectionDiagram) -> SurfaceSig:
    orientable = w.surface.orientable and v.surface.orientable
    return surface_from_euler(orientable, w.surface.euler + v.surface.euler, 0)


def _join(w: TrisectionDiagram, v: TrisectionDiagram, surface: SurfaceSig, sw: str, sv: str, log: str):
    arcs = max(w.arcs, v.arcs)
    extra = tuple(f"arc{k + 1}" for k in range(arcs))
    nw, nv = w.size, v.size
    base = nw + nv
    par = frozenset(range(base, base + arcs)) | w.parallel | {nw + i for i in v.parallel}
    logs = ()
    for d in (w, v):
        if d.provenance:
            logs += d.provenance.log
    prov = Provenance(surface.euler, None, None, logs + (log,))
    slides = tuple((g + sw, b + sw, k) for g, b, k in w.slides) + tuple((g + sv, b + sv, k) for g, b, k in v.slides)
    return TrisectionDiagram(
        surface,
        _tag(w.alpha, sw) + _tag(v.alpha, sv) + _tag(extra, ".a"),
        _tag(w.beta, sw) + _tag(v.beta, sv) + _tag(extra, ".b"),
        _tag(w.gamma, sw) + _tag(v.gamma, sv) + _tag(extra, ".g"),
        _block(w.I_ab, v.I_ab, arcs),
        _block(w.I_bg, v.I_bg, arcs),
        _block(w.I_ag, v.I_ag, arcs),
        slides,
        0,
        par,
        w.signs + v.signs + (0,) * arcs,
        prov,
    )


def double_diagram(d: TrisectionDiagram, arcs: int | None = None) -> TrisectionDiagram:
    """Double a relative diagram along its boundary.

    Each cut arc closes up with its mirror into one curve per system; those
    curves are pairwise parallel across the three systems.
    """
    if not d.relative:
        raise ValueError("diagram is already closed")
    page = d.provenance.page if d.provenance else None
    need = min_arcs(page) if page is not None else None
    arcs = d.arcs if arcs is None else arcs
    if arcs < 1 or (need is not None and arcs < need):
        raise ValueError(f"{arcs} arcs do not cut each page system into disks")
    d = _with_arcs(d, arcs)
    return _join(d, d, double(d.surface), "", "'", f"double: {arcs} arcs")


def _with_arcs(d: TrisectionDiagram, arcs: int) -> TrisectionDiagram:
    if arcs == d.arcs:
        return d
    return TrisectionDiagram(**{**d.__dict__, "arcs": arcs})


def glue_diagrams(w: TrisectionDiagram, v: TrisectionDiagram, spec: GlueSpec | None = None) -> TrisectionDiagram:
    """Glue two relative diagrams whose boundary open books agree.

    Agreement is checked on invariants only: page signature and the boundary
    H1 when both sides know it.
    """
    if not (w.relative and v.relative):
        raise ValueError("both diagrams must be relative")
    if w.surface.boundary != v.surface.boundary:
        raise ValueError("boundary mismatch: different numbers of boundary components")
    spec = spec or GlueSpec()
    k = w.surface.boundary
    bmap = spec.boundary_map or tuple(range(k))
    if sorted(bmap) != list(range(k)):
        raise ValueError("boundary map must be a bijection of boundary components")
    pw = w.provenance.page if w.provenance else None
    pv = v.provenance.page if v.provenance else None
    if pw is not None and pv is not None and pw != pv:
        raise ValueError(f"boundary mismatch: pages {pw} and {pv}")
    hw = w.provenance.boundary_h1 if w.provenance else None
    hv = v.provenance.boundary_h1 if v.provenance else None
    if hw is not None and hv is not None and hw != hv:
        raise ValueError(f"boundary mismatch: open book H1 {hw} vs {hv}")
    return _join(w, v, _closed_from(w, v), ".w", ".v", "glue: invariant-checked")


def mirror(d: TrisectionDiagram) -> TrisectionDiagram:
    """Same combinatorics with the opposite orientation: signs flip."""
    return TrisectionDiagram(**{**d.__dict__, "signs": tuple(-s for s in d.signs)})


# --- validation ---------------------------------------------------------------


@dataclass
class DiagramReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(f"violation: {v}" for v in self.violations)


def validate_diagram(d: TrisectionDiagram) -> DiagramReport:
    rep = DiagramReport()
    n = len(d.alpha)
    if len(d.beta) != n or len(d.gamma) != n:
        rep.violations.append(f"systems have sizes {n}, {len(d.beta)}, {len(d.gamma)}")
        return rep
    for name in ("I_ab", "I_bg", "I_ag"):
        m = getattr(d, name)
        if len(m) != n or any(len(r) != n for r in m):
            rep.violations.append(f"{name} is not {n}x{n}")
            return rep
    core = [i for i in range(n) if i not in d.parallel]
    for name in ("I_ab", "I_bg"):
        m = getattr(d, name)
        for i in range(n):
            for j in range(n):
                want = int(i == j and i in core)
                if m[i][j] != want:
                    rep.violations.append(f"{name}({i + 1},{j + 1}) = {m[i][j]}, expected {want}")
    ag = d.I_ag
    for j in range(n):
        for i in range(n):
            v = ag[j][i]
            if i in d.parallel or j in d.parallel:
                if v:
                    rep.violations.append(f"I_ag({j + 1},{i + 1}) = {v} on a parallel curve")
            elif i == j and v != 1:
                rep.violations.append(f"I_ag({j + 1},{j + 1}) = {v}, expected 1")
            elif i > j and v:
                rep.violations.append(f"I_ag({j + 1},{i + 1}) = {v} above the diagonal")
    if d.provenance is not None and d.provenance.euler != d.surface.euler:
        rep.violations.append(f"euler characteristic {d.surface.euler} differs from provenance {d.provenance.euler}")
    if d.surface.closed:
        g = d.surface.genus
        want = g if d.surface.orientable else g / 2
        if n != want:
            rep.violations.append(f"closed genus {g} surface needs {want} curves per system, has {n}")
    elif d.provenance is not None and d.provenance.page is not None and d.arcs < min_arcs(d.provenance.page):
        rep.violations.append(f"{d.arcs} arcs do not cut the page into a disk")
    return rep


# --- closed pipeline ------------------------------------------------------------


@dataclass(frozen=True)
class PipelineResult:
    diagram: TrisectionDiagram
    w: TrisectionDiagram
    v: TrisectionDiagram
    report: DiagramReport


def complement_fibration(lf: LefschetzFibration) -> LefschetzFibration:
    """Fibration over the disk on the punctured fiber with the same ordered cycles."""
    page = puncture(lf.page)
    cycles = tuple(
        make_cycle(page, c.curve.id, c.curve.word, sign=c.sign, origin=c.origin, twist=c.twist)
        for c in lf.cycles
    )
    return LefschetzFibration(DISK, page, cycles, lf.intersections)


def closed_pipeline(lf: LefschetzFibration, section: int = 0) -> PipelineResult:
    if lf.base != SPHERE:
        raise ValueError("closed pipeline needs a fibration over the sphere")
    if not lf.sections:
        raise ValueError("fibration has no section")
    if not 0 <= section < len(lf.sections):
        raise ValueError(f"no section with index {section}")
    v_lf = section_fiber_neighborhood(lf.fiber, lf.sections[section])
    w_lf = complement_fibration(lf)
    v = wrinkle_compile(v_lf)
    w = wrinkle_compile(w_lf)
    d = glue_diagrams(w, v)
    return PipelineResult(d, w, v, validate_diagram(d))


# --- drawing ----------------------------------------------------------------------


def draw_svg(d: TrisectionDiagram) -> str:
    """Schematic band-and-tube layout: one column per curve index."""
    n = max(d.size, 1)
    w, h = 60 * n + 40, 200
    colors = {"alpha": "#c0392b", "beta": "#2471a3", "gamma": "#229954"}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="10" y="60" width="{w - 20}" height="80" rx="30" fill="none" stroke="black"/>',
        f'<text x="12" y="20" font-size="12">{d.surface}</text>',
    ]
    for k in range(d.size):
        x = 40 + 60 * k
        dash = ' stroke-dasharray="4 3"' if k in d.parallel else ""
        parts.append(f'<ellipse cx="{x}" cy="100" rx="14" ry="30" fill="none" stroke="black"{dash}/>')
        for off, (name, col) in zip((-8, 0, 8), colors.items()):
            parts.append(f'<line x1="{x + off}" y1="70" x2="{x + off}" y2="130" stroke="{col}"{dash}/>')
        parts.append(f'<text x="{x - 6}" y="160" font-size="10">{k + 1}</text>')
    for g, b, mult in d.slides:
        parts.append(f"<!-- slide {g} over {b} x{mult} -->")
    parts.append("</svg>")
    return "\n".join(parts)
