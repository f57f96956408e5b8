"""Finitely presented groups, Smith normal form and abelianization.

Words are tuples of ``(generator, sign)`` letters kept freely reduced.  All
integer arithmetic uses Python ints, so nothing overflows.

>>> g = FPGroup.parse(["a", "c1"], ["a^2 c1^-2", "a c1 a^-1 c1^-1"])
>>> abelianize(g)
AbelianGroup(rank=1, torsion=(2,))
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Letter = tuple[str, int]

_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_.']*)(?:\^(-?\d+))?$")


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in named generators."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        for g, s in self.letters:
            if s not in (1, -1):
                raise ValueError(f"letter exponent must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"a^2 c1^-1"``; ``"1"`` and ``""`` are the empty word."""
        letters: list[Letter] = []
        for tok in text.split():
            if tok == "1":
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"malformed word token {tok!r}")
            n = int(m.group(2)) if m.group(2) is not None else 1
            s = 1 if n > 0 else -1
            letters.extend([(m.group(1), s)] * abs(n))
        return cls(tuple(letters))

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        s = 1 if power > 0 else -1
        return cls(((name, s),) * abs(power))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, g: str) -> int:
        return sum(s for h, s in self.letters if h == g)

    def count(self, g: str) -> int:
        return sum(1 for h, _ in self.letters if h == g)

    def substitute(self, images: dict[str, "Word"]) -> "Word":
        out: list[Letter] = []
        for g, s in self.letters:
            if g in images:
                w = images[g] if s == 1 else images[g].inverse()
                out.extend(w.letters)
            else:
                out.append((g, s))
        return Word(tuple(out))

    def cyclic_reduce(self) -> "Word":
        lt = self.letters
        i, j = 0, len(lt)
        while j - i >= 2 and lt[i][0] == lt[j - 1][0] and lt[i][1] == -lt[j - 1][1]:
            i += 1
            j -= 1
        return Word(lt[i:j])

    def rotations(self) -> list["Word"]:
        lt = self.letters
        return [Word(lt[k:] + lt[:k]) for k in range(max(len(lt), 1))]

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, grp in itertools.groupby(self.letters):
            n = len(list(grp)) * g[1]
            parts.append(g[0] if n == 1 else f"{g[0]}^{n}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


def cyclically_equal(u: Word, v: Word) -> bool:
    """Whether two words are conjugate in the free group."""
    u, v = u.cyclic_reduce(), v.cyclic_reduce()
    if len(u) != len(v):
        return False
    return any(r == v for r in u.rotations())


def canonical_relator(r: Word, order: Sequence[str]) -> Word:
    """Least rotation of ``r`` or its inverse under the generator order."""
    r = r.cyclic_reduce()
    if not r:
        return r
    rank = {g: i for i, g in enumerate(order)}

    def key(w: Word):
        return tuple((rank.get(g, len(rank)), g, 0 if s == 1 else 1) for g, s in w.letters)

    cands = r.rotations() + r.inverse().rotations()
    return min(cands, key=key)


@dataclass(frozen=True)
class FPGroup:
    generators: tuple[str, ...] = ()
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        rels = tuple(r.cyclic_reduce() for r in self.relators)
        known = set(gens)
        for r in rels:
            extra = r.generators() - known
            if extra:
                raise ValueError(f"relator {r} uses unknown generators {sorted(extra)}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    @classmethod
    def parse(cls, generators: Iterable[str], relators: Iterable[str]) -> "FPGroup":
        return cls(tuple(generators), tuple(Word.parse(r) for r in relators))

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len([r for r in self.relators if r])

    def relation_matrix(self) -> "IntMatrix":
        rows = [[r.exponent_sum(g) for g in self.generators] for r in self.relators]
        return IntMatrix.from_rows(rows, cols=len(self.generators))

    def __str__(self) -> str:
        parts = ["<", *self.generators, "|", ", ".join(str(r) for r in self.relators), ">"]
        return " ".join(p for p in parts if p)


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix dimensions do not match entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = [
            [sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(out, cols=other.cols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(d, u, v)`` with ``u @ m @ v == d`` and ``u``, ``v`` unimodular.

    The pivot is the nonzero entry of least absolute value in the remaining
    block, ties broken by lowest ``(row, col)``.
    """
    nr, nc = m.rows, m.cols
    a = m.tolist()
    u = IntMatrix.identity(nr).tolist()
    v = IntMatrix.identity(nc).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        while True:
            piv = None
            for i in range(t, nr):
                for j in range(t, nc):
                    x = a[i][j]
                    if x and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < nr and t < nc and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    d = IntMatrix.from_rows(a, cols=nc)
    return d, IntMatrix.from_rows(u, cols=nr), IntMatrix.from_rows(v, cols=nc)


@dataclass(frozen=True)
class AbelianGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        if any(x < 2 for x in t):
            raise ValueError("torsion coefficients must be >= 2")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    def __str__(self) -> str:
        return f"rank={self.rank} torsion=[{','.join(str(d) for d in self.torsion)}]"


def abelianize(g: FPGroup) -> AbelianGroup:
    """Cokernel of the exponent-sum relation matrix."""
    m = g.relation_matrix()
    d, _, _ = smith_normal_form(m)
    diag = [x for x in d.diagonal() if x]
    return AbelianGroup(len(g.generators) - len(diag), tuple(x for x in diag if x > 1))


def _eliminate_once(gens: list[str], rels: list[Word]):
    """Find the Tietze elimination to apply next, or ``None``.

    Shortest relator first; inside it the highest-index generator occurring
    exactly once is solved for, so earlier generators survive.
    """
    order = sorted(range(len(rels)), key=lambda i: (len(rels[i]), i))
    rank = {g: i for i, g in enumerate(gens)}
    for i in order:
        r = rels[i]
        once = [g for g in r.generators() if r.count(g) == 1]
        if not once:
            continue
        g = max(once, key=lambda h: rank[h])
        k = next(idx for idx, (h, _) in enumerate(r.letters) if h == g)
        rot = Word(r.letters[k:] + r.letters[:k])
        s = rot.letters[0][1]
        rest = Word(rot.letters[1:])
        # g^s * rest = 1
        value = rest.inverse() if s == 1 else rest
        return i, g, value
    return None


def tietze_eliminations(g: FPGroup, budget: int = 10_000) -> tuple[FPGroup, dict[str, Word], int]:
    """Simplify ``g`` and also return the substitution for eliminated generators.

    The substitution expresses every removed generator as a word in the
    surviving ones.  The third value is the number of moves spent.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    gens = list(g.generators)
    rels = [r.cyclic_reduce() for r in g.relators]
    subst: dict[str, Word] = {}
    moves = 0
    while moves < budget:
        seen: set[Word] = set()
        cleaned = []
        changed = False
        for r in rels:
            c = canonical_relator(r, gens)
            if not c or c in seen:
                changed = True
                continue
            seen.add(c)
            cleaned.append(c)
        rels = cleaned
        if changed:
            moves += 1
            continue
        step = _eliminate_once(gens, rels)
        if step is None:
            break
        i, gen, value = step
        sub = {gen: value}
        rels = [r.substitute(sub).cyclic_reduce() for j, r in enumerate(rels) if j != i]
        subst = {h: w.substitute(sub) for h, w in subst.items()}
        subst[gen] = value
        gens.remove(gen)
        moves += 1
    rels = [canonical_relator(r, gens) for r in rels]
    return FPGroup(tuple(gens), tuple(r for r in rels if r)), subst, moves


def tietze_simplify(g: FPGroup, budget: int = 10_000) -> FPGroup:
    """Bounded Tietze simplification; the result presents an isomorphic group.

    >>> tietze_simplify(FPGroup.parse(["x", "y"], ["x y^-1"]))
    FPGroup(generators=('x',), relators=())
    """
    return tietze_eliminations(g, budget)[0]


# --- finite target groups for homomorphism counting -------------------------


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as a Cayley table over elements ``0..n-1`` (0 is the identity)."""

    name: str
    table: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.table)

    @classmethod
    def from_elements(cls, name: str, elements: list, mul) -> "FiniteGroup":
        index = {e: i for i, e in enumerate(elements)}
        table = tuple(tuple(index[mul(x, y)] for y in elements) for x in elements)
        if any(table[0][j] != j for j in range(len(elements))):
            raise ValueError("first element must be the identity")
        return cls(name, table)

    def inverses(self) -> list[int]:
        return [row.index(0) for row in self.table]


def _cyclic_product(name: str, mods: tuple[int, ...]) -> FiniteGroup:
    elements = list(itertools.product(*[range(m) for m in mods]))
    return FiniteGroup.from_elements(
        name, elements, lambda x, y: tuple((a + b) % m for a, b, m in zip(x, y, mods))
    )


def _metacyclic(name: str, n: int, square_shift: int) -> FiniteGroup:
    # elements r^i s^e; s r s^-1 = r^-1 and s^2 = r^square_shift
    elements = [(i, e) for e in (0, 1) for i in range(n)]

    def mul(x, y):
        (i, e), (j, f) = x, y
        if e == 0:
            return ((i + j) % n, f)
        if f == 0:
            return ((i - j) % n, 1)
        return ((i - j + square_shift) % n, 0)

    return FiniteGroup.from_elements(name, elements, mul)


def _permutation_group(name: str, gens: list[tuple[int, ...]]) -> FiniteGroup:
    ident = tuple(range(len(gens[0])))
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = tuple(x[s[k]] for k in range(len(s)))
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    return FiniteGroup.from_elements(name, elements, lambda x, y: tuple(x[y[k]] for k in range(len(y))))


def _sl23() -> FiniteGroup:
    mats = [
        (a, b, c, d)
        for a, b, c, d in itertools.product(range(3), repeat=4)
        if (a * d - b * c) % 3 == 1
    ]
    mats.sort(key=lambda m: m != (1, 0, 0, 1))

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % 3, (a * f + b * h) % 3, (c * e + d * g) % 3, (c * f + d * h) % 3)

    return FiniteGroup.from_elements("SL(2,3)", mats, mul)


def _invariant_factor_lists(n: int) -> list[tuple[int, ...]]:
    """All divisibility chains d1 | d2 | ... with product n, each d >= 2."""
    out = []

    def rec(rest: int, acc: tuple[int, ...]):
        if rest == 1:
            out.append(acc)
            return
        for d in range(2, rest + 1):
            if rest % d or (acc and d % acc[-1]):
                continue
            # every later factor is a multiple of d
            if rest == d or (rest // d) % d == 0:
                rec(rest // d, acc + (d,))

    rec(n, ())
    return out


def target_groups(bound: int) -> list[FiniteGroup]:
    """Finite groups used as homomorphism targets, all of order <= ``bound``.

    Every abelian group of order <= bound is included, together with the
    dihedral and dicyclic families, A4, S4 and SL(2,3) where they fit.
    """
    if bound > 24:
        raise ValueError("homomorphism target bound must be <= 24")
    groups: list[FiniteGroup] = [FiniteGroup("1", ((0,),))]
    for n in range(2, bound + 1):
        for chain in _invariant_factor_lists(n):
            groups.append(_cyclic_product("x".join(f"Z/{d}" for d in chain), chain))
    for n in range(3, bound // 2 + 1):
        groups.append(_metacyclic(f"D{2 * n}", n, 0))
    for m in range(2, bound // 4 + 1):
        groups.append(_metacyclic(f"Dic{4 * m}", 2 * m, m))
    if bound >= 12:
        groups.append(_permutation_group("A4", [(1, 2, 0, 3), (1, 0, 3, 2)]))
    if bound >= 24:
        groups.append(_permutation_group("S4", [(1, 2, 3, 0), (1, 0, 2, 3)]))
        groups.append(_sl23())
    return groups


def count_homomorphisms(g: FPGroup, h: FiniteGroup) -> int:
    """Count homomorphisms ``g -> h`` by backtracking over generator images."""
    gens = list(g.generators)
    pos = {x: i for i, x in enumerate(gens)}
    inv = h.inverses()
    table = h.table
    rels = [[(pos[x], s) for x, s in r.letters] for r in g.relators if r]
    # check each relator as soon as its last generator is assigned
    ready: list[list[list[tuple[int, int]]]] = [[] for _ in gens]
    for r in rels:
        ready[max(i for i, _ in r)].append(r)
    img = [0] * len(gens)

    def ok(r) -> bool:
        x = 0
        for i, s in r:
            y = img[i] if s == 1 else inv[img[i]]
            x = table[x][y]
        return x == 0

    def rec(k: int) -> int:
        if k == len(gens):
            return 1
        total = 0
        for e in range(h.order):
            img[k] = e
            if all(ok(r) for r in ready[k]):
                total += rec(k + 1)
        return total

    return rec(0)


CATALOG: dict[str, tuple[AbelianGroup, FPGroup]] = {
    "trivial": (AbelianGroup(0), FPGroup()),
    "Z": (AbelianGroup(1), FPGroup.parse(["t"], [])),
    "Z/2": (AbelianGroup(0, (2,)), FPGroup.parse(["t"], ["t^2"])),
    "Z+Z/2": (AbelianGroup(1, (2,)), FPGroup.parse(["t", "u"], ["u^2", "t u t^-1 u^-1"])),
    "Z^2": (AbelianGroup(2), FPGroup.parse(["t", "u"], ["t u t^-1 u^-1"])),
    "F2": (AbelianGroup(2), FPGroup.parse(["t", "u"], [])),
}

MAX_RECOGNIZE_GENERATORS = 12


def recognize(g: FPGroup, hom_target_order_bound: int = 8, budget: int = 10_000) -> str:
    """Match ``g`` against a small catalog, or return ``"inconclusive"``.

    A tag is returned only when the abelianization agrees and the number of
    homomorphisms into every target group of order <= the bound agrees with
    the catalog group.  This is a consistency check, not an isomorphism proof.
    """
    if hom_target_order_bound > 24:
        raise ValueError("hom_target_order_bound must be <= 24")
    s = tietze_simplify(g, budget)
    if len(s.generators) > MAX_RECOGNIZE_GENERATORS:
        raise ValueError(
            f"{len(s.generators)} generators after simplification exceeds {MAX_RECOGNIZE_GENERATORS}"
        )
    ab = abelianize(s)
    candidates = [tag for tag, (cab, _) in CATALOG.items() if cab == ab]
    if not candidates:
        return "inconclusive"
    targets = target_groups(hom_target_order_bound)
    for tag in candidates:
        model = CATALOG[tag][1]
        if all(count_homomorphisms(s, h) == count_homomorphisms(model, h) for h in targets):
            return tag
    return "inconclusive"
