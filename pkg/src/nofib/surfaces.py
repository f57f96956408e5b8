"""Compact surfaces, page presentations and the stabilization arithmetic.

Genus of a nonorientable surface counts crosscaps, so the Klein bottle has
genus 2.  Pages carry a presentation of their fundamental group with the
basepoint on ``boundary_words[base_boundary]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .groups import FPGroup, Word, cyclically_equal, smith_normal_form, IntMatrix, tietze_eliminations

ONE_SIDED = "one-sided"
TWO_SIDED = "two-sided"


@dataclass(frozen=True, order=True)
class SurfaceSig:
    orientable: bool
    genus: int
    boundary: int

    def __post_init__(self):
        if self.genus < 0 or self.boundary < 0:
            raise ValueError("genus and boundary count must be nonnegative")
        if not self.orientable and self.genus < 1:
            raise ValueError("a nonorientable surface has at least one crosscap")

    @classmethod
    def nonorientable(cls, genus: int, boundary: int = 0) -> "SurfaceSig":
        return cls(False, genus, boundary)

    @classmethod
    def orientable_surface(cls, genus: int, boundary: int = 0) -> "SurfaceSig":
        return cls(True, genus, boundary)

    @property
    def euler(self) -> int:
        return euler_char(self)

    @property
    def closed(self) -> bool:
        return self.boundary == 0

    def __str__(self) -> str:
        kind = "orientable" if self.orientable else "nonorientable"
        return f"{kind} genus={self.genus} boundary={self.boundary}"


def euler_char(s: SurfaceSig) -> int:
    if s.orientable:
        return 2 - 2 * s.genus - s.boundary
    return 2 - s.genus - s.boundary


def connect_sum_torus(s: SurfaceSig) -> SurfaceSig:
    # on a nonorientable surface a torus summand is worth two crosscaps
    return replace(s, genus=s.genus + (1 if s.orientable else 2))


def add_crosscap(s: SurfaceSig) -> SurfaceSig:
    g = 2 * s.genus if s.orientable else s.genus
    return SurfaceSig(False, g + 1, s.boundary)


def split_boundary_band(s: SurfaceSig) -> SurfaceSig:
    if s.boundary < 1:
        raise ValueError("boundary-splitting band needs a boundary component")
    return replace(s, boundary=s.boundary + 1)


def attach_tube(s: SurfaceSig, count: int = 1) -> SurfaceSig:
    """Attach ``count`` tubes; on a nonorientable surface each adds two crosscaps."""
    if count < 0:
        raise ValueError("tube count must be nonnegative")
    return replace(s, genus=s.genus + count * (1 if s.orientable else 2))


def double(s: SurfaceSig) -> SurfaceSig:
    if s.boundary == 0:
        raise ValueError("cannot double a closed surface")
    chi = 2 * euler_char(s)
    if s.orientable:
        return SurfaceSig(True, (2 - chi) // 2, 0)
    return SurfaceSig(False, 2 - chi, 0)


def surface_from_euler(orientable: bool, euler: int, boundary: int) -> SurfaceSig:
    """The surface with the given Euler characteristic and boundary count."""
    if orientable:
        g2 = 2 - euler - boundary
        if g2 % 2:
            raise ValueError("no orientable surface with these invariants")
        return SurfaceSig(True, g2 // 2, boundary)
    return SurfaceSig(False, 2 - euler - boundary, boundary)


# --- curve classes ---------------------------------------------------------


@dataclass(frozen=True)
class CurveClass:
    kind: str
    boundary: int | None = None

    NULLHOMOTOPIC = "nullhomotopic"
    BOUNDS_MOBIUS = "bounds-mobius"
    BOUNDARY_PARALLEL = "boundary-parallel"
    GENERIC = "generic-two-sided"
    ONE_SIDED = "one-sided"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        if self.kind == self.BOUNDARY_PARALLEL:
            return f"{self.kind}({self.boundary})"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "CurveClass":
        if text.startswith(cls.BOUNDARY_PARALLEL + "("):
            return cls(cls.BOUNDARY_PARALLEL, int(text[len(cls.BOUNDARY_PARALLEL) + 1 : -1]))
        if text not in KINDS:
            raise ValueError(f"unknown curve class {text!r}")
        return cls(text)

    @property
    def trivial_twist(self) -> bool:
        """Twists about these curves are isotopic to the identity."""
        return self.kind in (self.NULLHOMOTOPIC, self.BOUNDS_MOBIUS)


KINDS = (
    CurveClass.NULLHOMOTOPIC,
    CurveClass.BOUNDS_MOBIUS,
    CurveClass.BOUNDARY_PARALLEL,
    CurveClass.GENERIC,
    CurveClass.ONE_SIDED,
    CurveClass.UNKNOWN,
)

UNKNOWN = CurveClass(CurveClass.UNKNOWN)


@dataclass(frozen=True)
class CurveOnPage:
    id: str
    word: Word
    sided: str = TWO_SIDED
    cls: CurveClass = UNKNOWN

    def __post_init__(self):
        if self.sided not in (ONE_SIDED, TWO_SIDED):
            raise ValueError(f"sidedness must be one of {ONE_SIDED!r}, {TWO_SIDED!r}")
        if self.sided == ONE_SIDED and self.cls.kind not in (CurveClass.ONE_SIDED, CurveClass.UNKNOWN):
            raise ValueError("one-sided curves carry class one-sided")
        if self.sided == ONE_SIDED and self.cls == UNKNOWN:
            object.__setattr__(self, "cls", CurveClass(CurveClass.ONE_SIDED))


# --- page presentations ----------------------------------------------------


@dataclass(frozen=True)
class PagePresentation:
    """A surface with a presentation of its fundamental group.

    ``reversing`` lists the orientation-reversing generators; a word is
    one-sided exactly when it uses them an odd number of times.
    """

    sig: SurfaceSig
    group: FPGroup
    boundary_words: tuple[Word, ...]
    base_boundary: int = 0
    reversing: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "boundary_words", tuple(self.boundary_words))
        object.__setattr__(self, "reversing", frozenset(self.reversing))
        if len(self.boundary_words) != self.sig.boundary:
            raise ValueError("need one boundary word per boundary component")
        if self.sig.boundary and not 0 <= self.base_boundary < self.sig.boundary:
            raise ValueError("base boundary index out of range")
        gens = set(self.group.generators)
        for w in self.boundary_words:
            if not w.generators() <= gens:
                raise ValueError(f"boundary word {w} uses unknown generators")
        if not self.reversing <= gens:
            raise ValueError("reversing generators must belong to the group")
        if self.sig.orientable and self.reversing:
            raise ValueError("an orientable page has no orientation-reversing generators")

    @property
    def base_word(self) -> Word:
        return self.boundary_words[self.base_boundary]

    def orientation_character(self, w: Word) -> int:
        return sum(1 for g, _ in w.letters if g in self.reversing) % 2

    def fresh_name(self, stem: str) -> str:
        taken = set(self.group.generators)
        k = 1
        while f"{stem}{k}" in taken:
            k += 1
        return f"{stem}{k}"


def standard_page(sig: SurfaceSig) -> PagePresentation:
    """The standard presentation: product of squares (or commutators) = c1...ck.

    >>> str(standard_page(SurfaceSig.nonorientable(1, 2)).group)
    '< a c1 c2 | a^2 c2^-1 c1^-1 >'
    """
    gens: list[str] = []
    rel = Word()
    if sig.orientable:
        for i in range(1, sig.genus + 1):
            x, y = f"x{i}", f"y{i}"
            gens += [x, y]
            rel = rel * Word.parse(f"{x} {y} {x}^-1 {y}^-1")
        reversing: frozenset[str] = frozenset()
    else:
        names = ["a"] if sig.genus == 1 else [f"a{i}" for i in range(1, sig.genus + 1)]
        gens += names
        for a in names:
            rel = rel * Word.gen(a, 2)
        reversing = frozenset(names)
    cs = [f"c{j}" for j in range(1, sig.boundary + 1)]
    gens += cs
    for c in reversed(cs):
        rel = rel * Word.gen(c, -1)
    rels = (rel,) if rel else ()
    return PagePresentation(sig, FPGroup(tuple(gens), rels), tuple(Word.gen(c) for c in cs), 0, reversing)


def is_standard(page: PagePresentation) -> bool:
    return page == standard_page(page.sig)


def free_rewrite(page: PagePresentation, prefer: str | None = None) -> tuple[tuple[str, ...], dict[str, Word]]:
    """Free basis of a bounded page and the substitution onto it.

    ``prefer`` names a generator to eliminate first, when some relator
    contains it exactly once.
    """
    if page.sig.boundary == 0:
        raise ValueError("closed surfaces do not have free fundamental groups")
    g = page.group
    subst: dict[str, Word] = {}
    if prefer is not None:
        for r in g.relators:
            if r.count(prefer) == 1:
                k = next(i for i, (h, _) in enumerate(r.letters) if h == prefer)
                rot = Word(r.letters[k:] + r.letters[:k])
                rest = Word(rot.letters[1:])
                subst[prefer] = rest.inverse() if rot.letters[0][1] == 1 else rest
                g = FPGroup(
                    tuple(h for h in g.generators if h != prefer),
                    tuple(x.substitute(subst) for x in g.relators if x != r),
                )
                break
    simple, more, _ = tietze_eliminations(g)
    if simple.relators:
        raise ValueError("page group did not simplify to a free group")
    subst = {h: w.substitute(more) for h, w in subst.items()}
    subst.update(more)
    return simple.generators, subst


# --- homology helpers ------------------------------------------------------


def _abelian_vector(w: Word, gens: tuple[str, ...]) -> list[int]:
    return [w.exponent_sum(g) for g in gens]


def in_integer_span(rows: list[list[int]], vec: list[int]) -> bool:
    """Whether ``vec`` is an integer combination of ``rows``."""
    if not any(vec):
        return True
    if not rows:
        return False
    m = IntMatrix.from_rows(rows, cols=len(vec))
    d, u, v = smith_normal_form(m)
    # x m = vec  <=>  (x u^-1) d = vec v
    wv = [sum(vec[k] * v.entries[k][j] for k in range(len(vec))) for j in range(len(vec))]
    diag = d.diagonal()
    for j, x in enumerate(wv):
        dj = diag[j] if j < len(diag) else 0
        if dj == 0:
            if x:
                return False
        elif x % dj:
            return False
    return True


def in_mod2_span(rows: list[list[int]], vec: list[int]) -> bool:
    basis: list[list[int]] = []
    for r in rows:
        r = [x % 2 for x in r]
        for b in basis:
            p = next(i for i, x in enumerate(b) if x)
            if r[p]:
                r = [(x + y) % 2 for x, y in zip(r, b)]
        if any(r):
            basis.append(r)
    v = [x % 2 for x in vec]
    for b in basis:
        p = next(i for i, x in enumerate(b) if x)
        if v[p]:
            v = [(x + y) % 2 for x, y in zip(v, b)]
    return not any(v)


# --- classification --------------------------------------------------------

CATALOG_SIGS = {
    SurfaceSig(False, 1, 0),
    SurfaceSig(False, 1, 1),
    SurfaceSig(False, 1, 2),
    SurfaceSig(False, 2, 0),
    SurfaceSig(False, 2, 1),
}


def _is_square_of_one_sided(page: PagePresentation, w: Word) -> bool:
    w = w.cyclic_reduce()
    n = len(w)
    if n == 0 or n % 2:
        return False
    for r in w.rotations():
        half = Word(r.letters[: n // 2])
        if Word(r.letters[n // 2 :]) == half and page.orientation_character(half) == 1:
            return True
    return False


def classify_curve(page: PagePresentation, curve: CurveOnPage) -> CurveClass:
    """Classify a simple closed curve given by its word on the page.

    Definite answers come from free reduction, boundary conjugacy, or the
    exact rules for the small catalog surfaces; anything else is ``unknown``.
    """
    w = curve.word
    extra = w.generators() - set(page.group.generators)
    if extra:
        raise ValueError(f"curve {curve.id} uses unknown generators {sorted(extra)}")
    odd = page.orientation_character(w) == 1
    if curve.sided == ONE_SIDED and not odd:
        raise ValueError(f"curve {curve.id} is declared one-sided but its word is orientation-preserving")
    if odd:
        if curve.sided == TWO_SIDED:
            raise ValueError(f"curve {curve.id} is declared two-sided but its word is orientation-reversing")
        return CurveClass(CurveClass.ONE_SIDED)

    catalog = page.sig in CATALOG_SIGS
    if page.sig.boundary:
        basis, subst = free_rewrite(page)
        rw = w.substitute(subst).cyclic_reduce()
        if not rw:
            return CurveClass(CurveClass.NULLHOMOTOPIC)
        for i, b in enumerate(page.boundary_words):
            rb = b.substitute(subst)
            if cyclically_equal(rw, rb) or cyclically_equal(rw, rb.inverse()):
                return CurveClass(CurveClass.BOUNDARY_PARALLEL, i)
        if not catalog:
            return UNKNOWN
        if _is_square_of_one_sided(page, rw):
            return CurveClass(CurveClass.BOUNDS_MOBIUS)
        bclasses = [_abelian_vector(b.substitute(subst), basis) for b in page.boundary_words]
        if not in_mod2_span(bclasses, _abelian_vector(rw, basis)):
            return CurveClass(CurveClass.GENERIC)
        return UNKNOWN

    if not catalog:
        return UNKNOWN
    gens = page.group.generators
    rows = [_abelian_vector(r, gens) for r in page.group.relators]
    vec = _abelian_vector(w, gens)
    if page.sig.genus == 1:
        # every two-sided simple closed curve in RP^2 bounds a disk
        return CurveClass(CurveClass.NULLHOMOTOPIC)
    if in_integer_span(rows, vec):
        return CurveClass(CurveClass.NULLHOMOTOPIC)
    if not in_mod2_span(rows, vec):
        return CurveClass(CurveClass.GENERIC)
    for g in sorted(page.reversing):
        e = [2 * (h == g) for h in gens]
        for sgn in (1, -1):
            if in_integer_span(rows, [x - sgn * y for x, y in zip(vec, e)]):
                return CurveClass(CurveClass.BOUNDS_MOBIUS)
    return UNKNOWN


def classified(page: PagePresentation, curve: CurveOnPage) -> CurveOnPage:
    return replace(curve, cls=classify_curve(page, curve))


# --- page-level stabilizations --------------------------------------------


def page_split_boundary(page: PagePresentation, name: str | None = None) -> tuple[PagePresentation, str]:
    """Attach an untwisted band with both feet on the base boundary.

    The new generator loops once around the new boundary component, which is
    appended last; the base boundary word loses that loop.
    """
    e = name or page.fresh_name("e")
    sig = split_boundary_band(page.sig)
    bw = list(page.boundary_words)
    bw[page.base_boundary] = bw[page.base_boundary] * Word.gen(e, -1)
    bw.append(Word.gen(e))
    group = FPGroup(page.group.generators + (e,), page.group.relators)
    return PagePresentation(sig, group, tuple(bw), page.base_boundary, page.reversing), e


def page_add_crosscap(page: PagePresentation, name: str | None = None) -> tuple[PagePresentation, str]:
    """Attach a half-twisted band with both feet on the base boundary."""
    if page.sig.orientable:
        raise ValueError("crosscap bands are only supported on nonorientable pages")
    m = name or page.fresh_name("m")
    sig = add_crosscap(page.sig)
    bw = list(page.boundary_words)
    bw[page.base_boundary] = Word.gen(m, 2) * bw[page.base_boundary]
    group = FPGroup(page.group.generators + (m,), page.group.relators)
    return PagePresentation(sig, group, tuple(bw), page.base_boundary, page.reversing | {m}), m


def page_torus_sum(page: PagePresentation) -> tuple[PagePresentation, str, str]:
    """Attach a one-holed torus next to the base boundary (two interleaved bands)."""
    u = page.fresh_name("u")
    v = u.replace("u", "v", 1)
    if v in page.group.generators:
        raise ValueError(f"generator name {v} already in use")
    sig = connect_sum_torus(page.sig)
    bw = list(page.boundary_words)
    bw[page.base_boundary] = bw[page.base_boundary] * Word.parse(f"{u} {v} {u}^-1 {v}^-1")
    group = FPGroup(page.group.generators + (u, v), page.group.relators)
    return PagePresentation(sig, group, tuple(bw), page.base_boundary, page.reversing), u, v
