"""Lefschetz fibrations over the disk and the sphere.

Vanishing cycles are stored as curves on an explicit page presentation, so
that the induced open book, homology and curve classes are all computed
from the same data.  Sign tokens are per-cycle bookkeeping relative to a
local orientation of each twist annulus.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .groups import AbelianGroup, FPGroup, Word, abelianize
from .openbook import (
    MappingClassAction,
    OpenBook,
    _crosscap_partner,
    boundary_twist,
    catalog_twist,
    compose_monodromy,
)
from .surfaces import (
    TWO_SIDED,
    CurveClass,
    CurveOnPage,
    PagePresentation,
    SurfaceSig,
    classify_curve,
    free_rewrite,
    page_add_crosscap,
    page_split_boundary,
    page_torus_sum,
    standard_page,
)

DISK = "disk"
SPHERE = "sphere"
BASES = (DISK, SPHERE)
ORIGINS = ("link-component", "crossing-fix", "framing-fix", "catalog")


@dataclass(frozen=True)
class LinkComponent:
    id: str
    word: Word
    framing: int


@dataclass(frozen=True)
class Crossing:
    over: tuple[str, int]
    under: tuple[str, int]
    id: str = ""


@dataclass(frozen=True)
class FramedLinkDiagram:
    """Framed link projected onto the disk with ``p`` twisted bands."""

    p: int
    components: tuple[LinkComponent, ...] = ()
    crossings: tuple[Crossing, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if self.p < 1:
            raise ValueError("p must be at least 1: orientable handlebodies are out of scope")
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise ValueError("component ids must be distinct")
        for x in self.crossings:
            for cid, strand in (x.over, x.under):
                if cid not in ids:
                    raise ValueError(f"crossing {x.id or '?'} references unknown component {cid!r}")
                if strand < 0:
                    raise ValueError(f"crossing {x.id or '?'} has a negative strand index")
            if x.over == x.under:
                raise ValueError(f"crossing {x.id or '?'} references the same strand twice")

    def component(self, cid: str) -> LinkComponent:
        return next(c for c in self.components if c.id == cid)


@dataclass(frozen=True)
class VanishingCycle:
    curve: CurveOnPage
    sign: int = 1
    origin: str = "catalog"
    framing: int | None = None
    twist: str | None = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("cycle sign must be +1 or -1")
        if self.origin not in ORIGINS:
            raise ValueError(f"unknown cycle origin {self.origin!r}")

    @property
    def cls(self) -> CurveClass:
        return self.curve.cls


@dataclass(frozen=True)
class LefschetzFibration:
    base: str
    page: PagePresentation
    cycles: tuple[VanishingCycle, ...] = ()
    intersections: tuple[tuple[int, ...], ...] | None = None
    sections: tuple[int, ...] = ()
    actions: Mapping[int, MappingClassAction] = field(default_factory=dict)
    claim: str | None = None
    verified: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        object.__setattr__(self, "sections", tuple(self.sections))
        n = len(self.cycles)
        if self.base not in BASES:
            raise ValueError(f"base must be one of {BASES}")
        if self.fiber.orientable:
            raise ValueError("fibers are nonorientable")
        if self.base == SPHERE and not self.fiber.closed:
            raise ValueError("a sphere base needs a closed fiber")
        m = self.intersections
        if m is not None:
            # None means the data was not supplied
            m = tuple(tuple(int(v) for v in row) for row in m)
            if len(m) != n or any(len(r) != n for r in m):
                raise ValueError("intersection matrix must be square of size #cycles")
            for i in range(n):
                for j in range(n):
                    if m[i][j] < 0 or m[i][j] != m[j][i]:
                        raise ValueError("intersection matrix must be symmetric and nonnegative")
            object.__setattr__(self, "intersections", m)
        if any(s not in (1, -1) for s in self.sections):
            raise ValueError("section squares must be +1 or -1")
        if any(not 0 <= i < n for i in self.actions):
            raise ValueError("actions refer to missing cycles")
        object.__setattr__(self, "actions", dict(self.actions))

    @property
    def fiber(self) -> SurfaceSig:
        return self.page.sig


def make_cycle(page: PagePresentation, cid: str, word: Word | str, **kw) -> VanishingCycle:
    """A two-sided vanishing cycle with its class computed on ``page``."""
    w = Word.parse(word) if isinstance(word, str) else word
    curve = CurveOnPage(cid, w, TWO_SIDED)
    curve = replace(curve, cls=classify_curve(page, curve))
    return VanishingCycle(curve, **kw)


# --- Harer's trick ---------------------------------------------------------


def framing_fixes(f: int) -> int:
    return min(abs(f - 1), abs(f + 1))


FRAMING_BANDS = ("boundary-split", "crosscap")


def harer_compile(d: FramedLinkDiagram, framing_band: str = "boundary-split") -> LefschetzFibration:
    """Compile a framed link on the p-band disk into a fibration over the disk.

    Each crossing is removed by a torus sum carrying two new twists; each
    component is then brought to page framing +1 or -1 by one band per full
    twist.  ``framing_band="crosscap"`` uses half-twisted bands (a new
    crosscap each) in place of boundary-splitting ones.
    """
    if framing_band not in FRAMING_BANDS:
        raise ValueError(f"framing_band must be one of {FRAMING_BANDS}")
    page = standard_page(SurfaceSig.nonorientable(d.p, 1))
    gens = set(page.group.generators)
    words = {}
    for c in d.components:
        if not c.word.generators() <= gens:
            raise ValueError(f"component {c.id} uses letters outside the page")
        if page.orientation_character(c.word):
            raise ValueError(f"component {c.id} is one-sided on the page")
        words[c.id] = c.word

    pending: list[tuple[str, Word, dict]] = []
    pairs: list[tuple[int, int]] = []
    for k, x in enumerate(d.crossings):
        page, u, v = page_torus_sum(page)
        xid = x.id or f"x{k + 1}"
        pairs.append((len(pending), len(pending) + 1))
        pending.append((f"{xid}.u", Word.gen(u), dict(origin="crossing-fix", twist=f"handle-a:{u},{v}")))
        pending.append((f"{xid}.v", Word.gen(v), dict(origin="crossing-fix", twist=f"handle-b:{u},{v}")))
        words[x.over[0]] = words[x.over[0]] * Word.gen(u)
        words[x.under[0]] = words[x.under[0]] * Word.gen(v)

    targets = {}
    for c in d.components:
        target = 1 if c.framing >= 0 else -1
        targets[c.id] = target
        step = 1 if c.framing > target else -1
        for k in range(framing_fixes(c.framing)):
            if framing_band == "crosscap":
                page, m = page_add_crosscap(page)
                x = _crosscap_partner(page, m)
                core, twist = Word.gen(m) * Word.gen(x), f"pair:{m},{x}"
            else:
                page, e = page_split_boundary(page)
                core, twist = Word.gen(e), f"boundary:{page.sig.boundary - 1}"
            pending.append((f"{c.id}.fix{k + 1}", core, dict(origin="framing-fix", twist=twist, sign=step)))
            words[c.id] = words[c.id] * core.inverse()

    for c in d.components:
        t = targets[c.id]
        pending.append((c.id, words[c.id], dict(origin="link-component", sign=t, framing=t)))

    cycles = tuple(make_cycle(page, cid, w, **kw) for cid, w, kw in pending)
    n = len(cycles)
    m = [[0] * n for _ in range(n)]
    for i, j in pairs:
        m[i][j] = m[j][i] = 1
    return LefschetzFibration(DISK, page, cycles, tuple(map(tuple, m)))


# --- invariants ------------------------------------------------------------


def cycle_action(lf: LefschetzFibration, i: int) -> MappingClassAction:
    if i in lf.actions:
        return lf.actions[i]
    c = lf.cycles[i]
    if c.twist is not None:
        return catalog_twist(lf.page, c.twist, c.sign)
    kind = c.cls.kind
    if kind in (CurveClass.NULLHOMOTOPIC, CurveClass.BOUNDS_MOBIUS):
        return catalog_twist(lf.page, f"trivial:{c.curve.id}", c.sign)
    if kind == CurveClass.BOUNDARY_PARALLEL:
        return boundary_twist(lf.page, c.cls.boundary, c.sign)
    raise ValueError(f"cycle {c.curve.id} ({c.cls}) has no catalog or supplied action")


def boundary_openbook(lf: LefschetzFibration) -> OpenBook:
    if lf.base != DISK or lf.fiber.closed:
        raise ValueError("only fibrations over the disk with bounded fiber induce open books")
    acts = [cycle_action(lf, i) for i in range(len(lf.cycles))]
    return OpenBook(lf.page, compose_monodromy(acts, lf.page))


def lf_euler_char(lf: LefschetzFibration) -> int:
    base = 2 if lf.base == SPHERE else 1
    return lf.fiber.euler * base + len(lf.cycles)


def fiber_sum(a: LefschetzFibration, b: LefschetzFibration) -> LefschetzFibration:
    """Fiber sum of two fibrations over the sphere; cycles of ``a`` then ``b``.

    Cross intersections between the two cycle lists are recorded as 0 and
    sections are dropped.
    """
    if a.base != SPHERE or b.base != SPHERE:
        raise ValueError("fiber sums need sphere bases")
    if a.fiber != b.fiber or (a.cycles and b.cycles and a.page != b.page):
        raise ValueError("fiber mismatch")
    page = a.page if a.cycles or not b.cycles else b.page
    na, nb = len(a.cycles), len(b.cycles)
    m = None
    if a.intersections is not None and b.intersections is not None:
        m = [list(r) + [0] * nb for r in a.intersections] + [[0] * na + list(r) for r in b.intersections]
        m = tuple(map(tuple, m))
    actions = dict(a.actions)
    actions.update({na + i: act for i, act in b.actions.items()})
    return LefschetzFibration(SPHERE, page, a.cycles + b.cycles, m, (), actions)


@dataclass
class MinimalityReport:
    relatively_minimal: bool
    verdict: str
    flags: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        return "\n".join([self.verdict] + self.flags)


def relative_minimality(lf: LefschetzFibration) -> MinimalityReport:
    if lf.fiber == SurfaceSig.nonorientable(1, 0):
        if lf.cycles:
            return MinimalityReport(False, "rejected: a closed RP^2 fiber has no legal vanishing cycle")
        return MinimalityReport(True, "bundle, relatively minimal")
    flags = []
    for c in lf.cycles:
        if c.cls.kind == CurveClass.NULLHOMOTOPIC:
            flags.append(f"{c.curve.id}: nullhomotopic, not relatively minimal")
        elif c.cls.kind == CurveClass.BOUNDS_MOBIUS:
            flags.append(f"{c.curve.id}: bounds a Mobius band, reducible")
    kind = "bundle" if not lf.cycles else "fibration"
    nullish = any("nullhomotopic" in f for f in flags)
    if not flags:
        return MinimalityReport(True, f"{kind}, relatively minimal")
    verdict = "not relatively minimal" if nullish else "relatively minimal, reducible"
    return MinimalityReport(not nullish, verdict, flags)


def reduce_trivial_cycles(lf: LefschetzFibration) -> tuple[LefschetzFibration, list[str]]:
    """Blow down nullhomotopic cycles and surger out Mobius-bounding ones."""
    keep, log = [], []
    for i, c in enumerate(lf.cycles):
        if c.cls.kind == CurveClass.NULLHOMOTOPIC:
            log.append(f"blow-down {c.curve.id}: e -= 1")
        elif c.cls.kind == CurveClass.BOUNDS_MOBIUS:
            log.append(f"mobius-surgery {c.curve.id}: replace D2~RP2 by D3~S1, e -= 1")
        else:
            keep.append(i)
    if not log:
        return lf, log
    m = None
    if lf.intersections is not None:
        m = tuple(tuple(lf.intersections[i][j] for j in keep) for i in keep)
    actions = {keep.index(i): a for i, a in lf.actions.items() if i in keep}
    out = replace(lf, cycles=tuple(lf.cycles[i] for i in keep), intersections=m, actions=actions)
    return out, log


def lf_h1_over_sphere(lf: LefschetzFibration, classes: Sequence[Sequence[int]] | None = None) -> AbelianGroup:
    """H1 of the closed fiber modulo the vanishing-cycle classes.

    ``classes`` are integer vectors over the page generators; by default they
    are read off the cycle words.
    """
    if lf.base != SPHERE or not lf.fiber.closed:
        raise ValueError("needs a sphere base and closed fiber")
    gens = lf.page.group.generators
    if classes is None:
        classes = [[c.curve.word.exponent_sum(g) for g in gens] for c in lf.cycles]
    if len(classes) != len(lf.cycles) or any(len(v) != len(gens) for v in classes):
        raise ValueError("need one class vector per cycle over the fiber generators")
    rels = list(lf.page.group.relators)
    for v in classes:
        w = Word()
        for g, k in zip(gens, v):
            w = w * Word.gen(g, k)
        rels.append(w)
    return abelianize(FPGroup(gens, tuple(r for r in rels if r)))


# --- pencils and sections --------------------------------------------------


def _rewritten(page: PagePresentation, act: MappingClassAction):
    basis, subst = free_rewrite(page)
    imgs = tuple(act.apply(Word.gen(g)).substitute(subst) for g in basis)
    trs = tuple(act.transports[j].substitute(subst) for j in sorted(act.transports))
    return imgs, trs


def actions_equal(page: PagePresentation, a: MappingClassAction, b: MappingClassAction) -> bool:
    return _rewritten(page, a) == _rewritten(page, b)


def zero_intersections(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(0 for _ in range(n)) for _ in range(n))


def puncture(page: PagePresentation) -> PagePresentation:
    """Remove a disk from a closed page; its last relator becomes the boundary word."""
    if not page.sig.closed:
        raise ValueError("page already has boundary")
    if not page.group.relators:
        raise ValueError("closed page presentation has no relator to open up")
    sig = SurfaceSig(page.sig.orientable, page.sig.genus, 1)
    *rels, last = page.group.relators
    return PagePresentation(sig, FPGroup(page.group.generators, tuple(rels)), (last,), 0, page.reversing)


def cap_boundaries(page: PagePresentation) -> PagePresentation:
    sig = SurfaceSig(page.sig.orientable, page.sig.genus, 0)
    rels = page.group.relators + tuple(w for w in page.boundary_words if w)
    return PagePresentation(sig, FPGroup(page.group.generators, rels), (), 0, page.reversing)


def pencil_to_fibration(
    page: PagePresentation,
    word: Sequence[VanishingCycle],
    section_square: int = -1,
) -> LefschetzFibration:
    """Turn a boundary-multitwist factorization into a fibration over the sphere.

    The claim is that ``word`` composes to the product of all boundary twists.
    It is checked when every cycle carries a catalog twist and marked
    unverified otherwise.
    """
    if any(not isinstance(c, VanishingCycle) for c in word):
        raise TypeError("the twist word must be a list of vanishing cycles")
    if page.sig == SurfaceSig.nonorientable(2, 1):
        raise ValueError("the one-holed Klein bottle has no boundary factorization: t_d is not a power of t_alpha")
    k = page.sig.boundary
    if k == 0 and word:
        raise ValueError("a closed page needs the empty word")
    verified = None
    if k and all(c.twist is not None for c in word):
        got = compose_monodromy([catalog_twist(page, c.twist, c.sign) for c in word], page)
        want = compose_monodromy([boundary_twist(page, j, 1) for j in range(k)], page)
        if not actions_equal(page, got, want):
            raise ValueError("twist word does not compose to the boundary multitwist")
        verified = True
    closed = cap_boundaries(page) if k else page
    cycles = tuple(
        replace(c, curve=replace(c.curve, cls=classify_curve(closed, replace(c.curve, cls=CurveClass(CurveClass.UNKNOWN)))))
        for c in word
    )
    return LefschetzFibration(SPHERE, closed, cycles, None, tuple([section_square] * k), {}, "boundary-twist", verified)


def section_fiber_neighborhood(fiber: SurfaceSig, square: int = 1) -> LefschetzFibration:
    """Neighborhood of a section of square ``square`` together with a fiber.

    One singular fiber carries a nullhomotopic cycle and a boundary-parallel
    one.
    """
    if not fiber.closed:
        raise ValueError("the fiber must be closed")
    if fiber.orientable:
        raise ValueError("the fiber must be nonorientable")
    if square not in (1, -1):
        raise ValueError("square must be +1 or -1")
    page = standard_page(SurfaceSig.nonorientable(fiber.genus, 1))
    cycles = (
        make_cycle(page, "null", Word(), sign=square),
        make_cycle(page, "collar", page.base_word, sign=square),
    )
    return LefschetzFibration(DISK, page, cycles, ((0, 0), (0, 0)), (square,))


# --- catalog fibrations ----------------------------------------------------


def klein_page() -> PagePresentation:
    return standard_page(SurfaceSig.nonorientable(2, 0))


def klein_fibration(n: int) -> LefschetzFibration:
    """X(n): Klein-bottle fibration over the sphere with monodromy t_alpha^(2n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    page = klein_page()
    cycles = tuple(make_cycle(page, f"alpha{i + 1}", "a1 a2", twist="pair:1") for i in range(2 * n))
    zeros = tuple(tuple(0 for _ in cycles) for _ in cycles)
    return LefschetzFibration(SPHERE, page, cycles, zeros)


def genus3_chain_page() -> PagePresentation:
    """Nonorientable genus 3 with one hole: a torus handle ``x, y`` and a crosscap ``m``."""
    sig = SurfaceSig.nonorientable(3, 1)
    return PagePresentation(sig, FPGroup(("x", "y", "m"), ()), (Word.parse("x y x^-1 y^-1 m^2"),), 0, {"m"})


def chain_factorization() -> list[VanishingCycle]:
    """t_d = (t_a t_b t_c)^4 t_e^-1 with the chain a, b, c and e capped by a crosscap."""
    page = genus3_chain_page()
    curves = [("a", "x", "handle-a:x,y"), ("b", "y", "handle-b:x,y"), ("c", "x m^2", None)]
    word = []
    for r in range(4):
        for cid, w, tw in curves:
            word.append(make_cycle(page, f"{cid}{r + 1}", w, twist=tw))
    word.append(make_cycle(page, "e", "m^2", sign=-1))
    return word


def chain_intersections(word: Sequence[VanishingCycle]) -> tuple[tuple[int, ...], ...]:
    names = [c.curve.id.rstrip("0123456789") for c in word]
    adj = {frozenset("ab"), frozenset("bc")}
    return tuple(tuple(1 if frozenset((x, y)) in adj else 0 for y in names) for x in names)


def genus3_section_fibration() -> LefschetzFibration:
    word = chain_factorization()
    lf = pencil_to_fibration(genus3_chain_page(), word)
    return replace(lf, intersections=chain_intersections(word))
