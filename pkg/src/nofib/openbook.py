"""Abstract open books with Dehn-twist monodromy and their total spaces.

A monodromy is stored by its action on the based fundamental group of the
page (basepoint on the base boundary) together with one transport word per
other boundary component: for an arc ``s`` from the base boundary to
boundary ``j`` the transport is the loop ``phi(s) s^-1``.  The total space
then has

    pi1(M) = < page | page relators, phi(g) g^-1, transports >.

Handedness tokens ``R``/``L`` refer to a local orientation of the twist
annulus; they carry no global meaning on a nonorientable page.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .groups import (
    AbelianGroup,
    FPGroup,
    Word,
    abelianize,
    cyclically_equal,
    determinant,
    recognize,
    tietze_simplify,
)
from .surfaces import (
    PagePresentation,
    SurfaceSig,
    free_rewrite,
    standard_page,
    surface_from_euler,
    page_add_crosscap,
    page_split_boundary,
    page_torus_sum,
)

HANDS = {"R": 1, "L": -1}


def hand_sign(hand: str | int) -> int:
    if isinstance(hand, int):
        if hand not in (1, -1):
            raise ValueError("handedness must be +1 or -1")
        return hand
    try:
        return HANDS[hand]
    except KeyError:
        raise ValueError(f"handedness must be R or L, got {hand!r}") from None


def hand_token(sign: int) -> str:
    return "R" if sign == 1 else "L"


@dataclass(frozen=True)
class MappingClassAction:
    page: PagePresentation
    images: dict[str, Word]
    transports: dict[int, Word] = field(default_factory=dict)
    twist_word: tuple[tuple[str, str], ...] = ()
    in_twist_subgroup: bool = True

    def __post_init__(self):
        imgs = {g: self.images.get(g, Word.gen(g)) for g in self.page.group.generators}
        extra = set(self.images) - set(imgs)
        if extra:
            raise ValueError(f"images given for unknown generators {sorted(extra)}")
        others = [j for j in range(self.page.sig.boundary) if j != self.page.base_boundary]
        bad = set(self.transports) - set(others)
        if bad:
            raise ValueError(f"transports only apply to non-base boundaries, got {sorted(bad)}")
        trs = {j: self.transports.get(j, Word()) for j in others}
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "transports", trs)
        object.__setattr__(self, "twist_word", tuple(self.twist_word))

    def apply(self, w: Word) -> Word:
        return w.substitute(self.images)

    def then(self, other: "MappingClassAction") -> "MappingClassAction":
        """``self`` followed by ``other``."""
        if other.page != self.page:
            raise ValueError("actions live on different pages")
        images = {g: other.apply(w) for g, w in self.images.items()}
        transports = {j: other.apply(t) * other.transports[j] for j, t in self.transports.items()}
        return MappingClassAction(
            self.page,
            images,
            transports,
            self.twist_word + other.twist_word,
            self.in_twist_subgroup and other.in_twist_subgroup,
        )


def identity_action(page: PagePresentation) -> MappingClassAction:
    return MappingClassAction(page, {})


def compose_monodromy(
    twists: Sequence[MappingClassAction], page: PagePresentation | None = None
) -> MappingClassAction:
    """Compose in list order (first element acts first)."""
    if not twists:
        if page is None:
            raise ValueError("an empty composition needs the page")
        return identity_action(page)
    if page is not None and twists[0].page != page:
        raise ValueError("actions live on a different page")
    out = twists[0]
    for t in twists[1:]:
        out = out.then(t)
    return out


# --- catalog twists ------------------------------------------------------


def boundary_twist(page: PagePresentation, j: int, hand: str | int = "R") -> MappingClassAction:
    """Twist about the curve parallel to boundary ``j``."""
    h = hand_sign(hand)
    if not 0 <= j < page.sig.boundary:
        raise ValueError(f"page has no boundary component {j}")
    cid = (f"boundary:{j}", hand_token(h))
    if j == page.base_boundary:
        w0 = page.base_word ** h
        images = {g: w0 * Word.gen(g) * w0.inverse() for g in page.group.generators}
        others = {k: w0 for k in range(page.sig.boundary) if k != j}
        return MappingClassAction(page, images, others, (cid,))
    return MappingClassAction(page, {}, {j: page.boundary_words[j] ** -h}, (cid,))


def _pair_images(x: str, y: str, h: int) -> dict[str, Word]:
    # twist about the two-sided curve x*y inside the subsurface bounded by x^2 y^2
    if h == 1:
        return {x: Word.parse(f"{x} {y}^-1 {x}^-1"), y: Word.parse(f"{x} {y}^2")}
    return {x: Word.parse(f"{x}^2 {y}"), y: Word.parse(f"{y}^-1 {x}^-1 {y}")}


def pair_twist(page: PagePresentation, x: str, y: str, hand: str | int = "R") -> MappingClassAction:
    """Twist about the curve ``x y`` through two adjacent crosscaps ``x``, ``y``."""
    h = hand_sign(hand)
    if x not in page.reversing or y not in page.reversing:
        raise ValueError("pair twists need two orientation-reversing generators")
    local = _pair_images(x, y, h)
    cid = (f"pair:{x},{y}", hand_token(h))
    if page.sig.boundary == 0:
        return MappingClassAction(page, local, {}, (cid,))
    basis, subst = free_rewrite(page, prefer=_base_prefer(page, {x, y}))
    if x not in basis or y not in basis:
        raise ValueError(f"{x} and {y} must survive in the free basis of the page")
    images = {g: subst.get(g, Word.gen(g)).substitute(local) for g in page.group.generators}
    return MappingClassAction(page, images, {}, (cid,))


def handle_twist(page: PagePresentation, u: str, v: str, which: str, hand: str | int = "R") -> MappingClassAction:
    """Twist about ``u`` (``which='a'``) or ``v`` (``which='b'``) in a torus handle."""
    h = hand_sign(hand)
    if which == "a":
        images = {v: Word.gen(v) * Word.gen(u, h)}
    elif which == "b":
        images = {u: Word.gen(u) * Word.gen(v, -h)}
    else:
        raise ValueError("which must be 'a' or 'b'")
    return MappingClassAction(page, images, {}, ((f"handle-{which}:{u},{v}", hand_token(h)),))


def _base_prefer(page: PagePresentation, avoid: set[str]) -> str | None:
    """A base-boundary generator that a relator can solve for.

    Eliminating it first writes the base boundary through the crosscaps it
    encloses, which is the basis the local twist formulas assume.
    """
    w = page.base_word
    for g, _ in w.letters:
        if g in avoid or w.count(g) != 1:
            continue
        if any(r.count(g) == 1 for r in page.group.relators):
            return g
    return None


def catalog_twist(page: PagePresentation, curve_id: str, hand: str | int = "R") -> MappingClassAction:
    """Build a catalog twist from its id.

    Ids: ``boundary:J``, ``pair:I`` (crosscaps ``aI``, ``aI+1`` of a standard
    page), ``pair:X,Y``, ``handle-a:U,V``, ``handle-b:U,V`` and ``trivial:ID``
    (a curve bounding a disk or a Mobius band, whose twist is isotopic to the
    identity).
    """
    kind, _, arg = curve_id.partition(":")
    if kind == "trivial":
        return MappingClassAction(page, {}, {}, ((curve_id, hand_token(hand_sign(hand))),))
    if kind == "boundary":
        return boundary_twist(page, int(arg), hand)
    if kind == "pair":
        if "," in arg:
            x, y = arg.split(",")
        else:
            i = int(arg)
            x, y = f"a{i}", f"a{i + 1}"
        return pair_twist(page, x, y, hand)
    if kind in ("handle-a", "handle-b"):
        u, v = arg.split(",")
        return handle_twist(page, u, v, kind[-1], hand)
    raise ValueError(f"unknown catalog curve id {curve_id!r}")


def action_from_twists(page: PagePresentation, twists: Sequence[tuple[str, str]]) -> MappingClassAction:
    return compose_monodromy([catalog_twist(page, c, h) for c, h in twists], page)


# --- validation ------------------------------------------------------------


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        if self.ok:
            return "valid" + "".join(f"\nnote: {n}" for n in self.notes)
        return "invalid\n" + "\n".join(f"failure: {f}" for f in self.failures)


def validate_action(page: PagePresentation, action: MappingClassAction) -> ValidationReport:
    rep = ValidationReport()
    if action.page != page:
        rep.failures.append("action is defined on a different page")
        return rep
    if page.sig.boundary == 0:
        rep.notes.append("closed page: free-group checks skipped")
        return rep
    basis, subst = free_rewrite(page)

    def rw(w: Word) -> Word:
        return w.substitute(subst)

    img = {g: rw(action.apply(Word.gen(g))) for g in basis}
    mat = [[img[g].exponent_sum(h) for h in basis] for g in basis]
    det = determinant(mat)
    if abs(det) != 1:
        rep.failures.append(f"abelianized action has determinant {det}")
    for r in page.group.relators:
        if rw(action.apply(r)).cyclic_reduce():
            rep.failures.append(f"relator {r} is not preserved")
    bws = [rw(b) for b in page.boundary_words]
    for i, b in enumerate(page.boundary_words):
        im = rw(action.apply(b))
        if not any(cyclically_equal(im, c) or cyclically_equal(im, c.inverse()) for c in bws):
            rep.failures.append(f"boundary word {i} maps to {im}, not a boundary conjugate")
    return rep


# --- open books ------------------------------------------------------------


@dataclass(frozen=True)
class OpenBook:
    page: PagePresentation
    monodromy: MappingClassAction

    def __post_init__(self):
        if self.page.sig.boundary < 1:
            raise ValueError("an open book page needs nonempty boundary")
        if self.monodromy.page != self.page:
            raise ValueError("monodromy is defined on a different page")

    @classmethod
    def from_twists(cls, page: PagePresentation, twists: Sequence[tuple[str, str]]) -> "OpenBook":
        return cls(page, action_from_twists(page, twists))


def total_space_presentation(ob: OpenBook) -> FPGroup:
    rep = validate_action(ob.page, ob.monodromy)
    if not rep.ok:
        raise ValueError("monodromy failed validation: " + "; ".join(rep.failures))
    g = ob.page.group
    rels = list(g.relators)
    rels += [ob.monodromy.apply(Word.gen(x)) * Word.gen(x, -1) for x in g.generators]
    rels += [ob.monodromy.transports[j] for j in sorted(ob.monodromy.transports)]
    return FPGroup(g.generators, tuple(r for r in rels if r))


def total_space_pi1(ob: OpenBook, budget: int = 10_000) -> FPGroup:
    return tietze_simplify(total_space_presentation(ob), budget)


def total_space_h1(ob: OpenBook, budget: int = 10_000) -> AbelianGroup:
    return abelianize(total_space_pi1(ob, budget))


def recognize_total_space(ob: OpenBook, bound: int = 8, budget: int = 10_000) -> str:
    return recognize(total_space_pi1(ob, budget), bound, budget)


def s1xrp2_openbook(hand1: str = "R", hand2: str = "L") -> OpenBook:
    """Page RP^2 with two holes, monodromy the two boundary twists."""
    page = standard_page(SurfaceSig.nonorientable(1, 2))
    return OpenBook.from_twists(page, [("boundary:0", hand1), ("boundary:1", hand2)])


def trivial_openbook(sig: SurfaceSig) -> OpenBook:
    page = standard_page(sig)
    return OpenBook(page, identity_action(page))


def hopf_band_openbook(hand: str = "R") -> OpenBook:
    page = standard_page(SurfaceSig.orientable_surface(0, 2))
    return OpenBook.from_twists(page, [("boundary:0", hand)])


def _is_hopf_band(ob: OpenBook) -> bool:
    p = ob.page
    return (
        p.sig == SurfaceSig(True, 0, 2)
        and len(ob.monodromy.twist_word) == 1
        and ob.monodromy.twist_word[0][0].startswith("boundary:")
    )


# --- plumbing and stabilization -------------------------------------------


def extend_action(action: MappingClassAction, page: PagePresentation) -> MappingClassAction:
    """Carry an action to a page obtained by attaching bands away from its support."""
    return MappingClassAction(
        page,
        dict(action.images),
        {j: t for j, t in action.transports.items()},
        action.twist_word,
        action.in_twist_subgroup,
    )


@dataclass(frozen=True)
class PlumbingSpec:
    """Plumbing rectangle: one boundary arc on each page.

    ``boundary`` is the boundary count of the summed page; only the
    construction in which boundary counts add is modeled.
    """

    arc_a: int | None = None
    arc_b: int | None = None
    boundary: int | None = None


def _rename(page: PagePresentation, taken: set[str]) -> dict[str, str]:
    gens = page.group.generators
    if not set(gens) & taken:
        return {g: g for g in gens}
    k = 1
    while any(f"{g}_{k}" in taken for g in gens):
        k += 1
    return {g: f"{g}_{k}" for g in gens}


def _rename_word(w: Word, m: dict[str, str]) -> Word:
    return Word(tuple((m[g], s) for g, s in w.letters))


def _rename_twist_id(cid: str, m: dict[str, str], shift: int) -> str:
    kind, _, arg = cid.partition(":")
    if kind == "boundary":
        return f"boundary:{int(arg) + shift}"
    if kind == "trivial":
        return cid
    if kind == "pair" and "," not in arg:
        arg = f"a{arg},a{int(arg) + 1}"
    return f"{kind}:" + ",".join(m.get(x, x) for x in arg.split(","))


def murasugi_sum(a: OpenBook, b: OpenBook, spec: PlumbingSpec | None = None) -> OpenBook:
    """Plumb ``b`` onto ``a``; the summed monodromy is ``a``'s then ``b``'s.

    The page group is the free product of the two page groups (the plumbing
    square is a disk), with ``b``'s generators renamed apart.
    """
    spec = spec or PlumbingSpec()
    if _is_hopf_band(b):
        return hopf_stabilize(a, "boundary-split", b.monodromy.twist_word[0][1])
    pa, pb = a.page, b.page
    ka, kb = pa.sig.boundary, pb.sig.boundary
    arc_a = pa.base_boundary if spec.arc_a is None else spec.arc_a
    arc_b = pb.base_boundary if spec.arc_b is None else spec.arc_b
    if not (0 <= arc_a < ka and 0 <= arc_b < kb):
        raise ValueError("plumbing arcs must name boundary components of the pages")
    k = ka + kb if spec.boundary is None else spec.boundary
    if k != ka + kb:
        raise ValueError("only the plumbing in which boundary counts add is supported")
    chi = pa.sig.euler + pb.sig.euler - 1
    orientable = pa.sig.orientable and pb.sig.orientable
    try:
        sig = surface_from_euler(orientable, chi, k)
    except ValueError as exc:
        raise ValueError(f"incompatible plumbing: {exc}") from None

    m = _rename(pb, set(pa.group.generators))
    gens = pa.group.generators + tuple(m[g] for g in pb.group.generators)
    rels = pa.group.relators + tuple(_rename_word(r, m) for r in pb.group.relators)
    bws = pa.boundary_words + tuple(_rename_word(w, m) for w in pb.boundary_words)
    page = PagePresentation(
        sig, FPGroup(gens, rels), bws, pa.base_boundary, pa.reversing | {m[g] for g in pb.reversing}
    )

    ma = a.monodromy
    act_a = MappingClassAction(page, dict(ma.images), dict(ma.transports), ma.twist_word, ma.in_twist_subgroup)
    mb = b.monodromy
    act_b = MappingClassAction(
        page,
        {m[g]: _rename_word(w, m) for g, w in mb.images.items()},
        {ka + j: _rename_word(t, m) for j, t in mb.transports.items()},
        tuple((_rename_twist_id(c, m, ka), h) for c, h in mb.twist_word),
        mb.in_twist_subgroup,
    )
    return OpenBook(page, act_a.then(act_b))


def iterated_sum(ob: OpenBook, n: int) -> OpenBook:
    if n < 1:
        raise ValueError("need at least one copy")
    out = ob
    for _ in range(n - 1):
        out = murasugi_sum(out, ob)
    return out


def _crosscap_partner(page: PagePresentation, m: str) -> str:
    _, subst = free_rewrite(page, prefer=_base_prefer(page, {m}))
    b0 = page.base_word.substitute(subst)
    lt = b0.letters
    if len(lt) < 4 or lt[0] != (m, 1) or lt[1] != (m, 1):
        raise ValueError("crosscap band is not adjacent to the base boundary")
    x, s = lt[2]
    if s != 1 or len(lt) < 4 or lt[3] != (x, 1) or x not in page.reversing:
        raise ValueError("crosscap stabilization needs a crosscap adjacent to the base boundary")
    rest = Word(lt[4:])
    if {m, x} & rest.generators():
        raise ValueError("crosscap stabilization needs a crosscap adjacent to the base boundary")
    return x


def hopf_stabilize(ob: OpenBook, band: str = "boundary-split", handedness: str = "R") -> OpenBook:
    """Stabilize the page by a band and add twists about the new curves.

    ``band`` is ``boundary-split`` (untwisted band, one new boundary),
    ``crosscap`` (half-twisted band, one new crosscap) or ``torus`` (two
    interleaved bands, two new twists).
    """
    if band == "boundary-split":
        page, _ = page_split_boundary(ob.page)
        new = [boundary_twist(page, page.sig.boundary - 1, handedness)]
    elif band == "crosscap":
        page, m = page_add_crosscap(ob.page)
        x = _crosscap_partner(page, m)
        new = [pair_twist(page, m, x, handedness)]
    elif band == "torus":
        page, u, v = page_torus_sum(ob.page)
        new = [handle_twist(page, u, v, "a", handedness), handle_twist(page, u, v, "b", handedness)]
    else:
        raise ValueError(f"unknown band type {band!r}")
    mono = compose_monodromy([extend_action(ob.monodromy, page)] + new)
    return OpenBook(page, mono)


# --- binding bound and the Klein bottle mapping class group ----------------


def binding_bound_certificate(n: int) -> tuple[int, int]:
    """Smallest ``k`` with ``2 - 2k <= -2n - 2(n-1)`` and the right-hand side."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    rhs = -2 * n - 2 * (n - 1)
    k = 1
    while 2 - 2 * k > rhs:
        k += 1
    return k, rhs


def binding_lower_bound_genus_one(n: int) -> int:
    """Fewest binding components of a genus-one open book on the n-fold sum of S^1 x RP^2."""
    return binding_bound_certificate(n)[0]


KLEIN_LETTERS = {"t": (1, 0), "t_alpha": (1, 0), "Y": (0, 1)}


def klein_mcg_reduce(word: Sequence[str]) -> tuple[int, int]:
    """Reduce a word in ``t_alpha`` and ``Y`` in Z/2 x Z/2."""
    t = y = 0
    for tok in word:
        try:
            dt, dy = KLEIN_LETTERS[tok]
        except KeyError:
            raise ValueError(f"unknown Klein mapping class letter {tok!r}") from None
        t ^= dt
        y ^= dy
    return t, y


def klein_mcg_elements() -> list[tuple[int, int]]:
    """Closure of the generators under multiplication."""
    elems = {(0, 0)}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for g in ("t", "Y"):
                w2 = w + (g,)
                e = klein_mcg_reduce(w2)
                if e not in elems:
                    elems.add(e)
                    nxt.append(w2)
        frontier = nxt
    return sorted(elems)
