"""Line-oriented document format.

A document starts with the header ``nofib 1``.  Blocks start in column one
with ``KIND NAME`` and ``key=value`` fields; their indented sub-lines carry
the block contents.  Words follow `` : `` at the end of a sub-line.  Lines
whose first non-blank character is ``#`` are comments.

Block kinds: ``surface``, ``page``, ``openbook``, ``linkdiagram``,
``lefschetz`` and ``trisection``.  Canonical emission separates blocks by
one blank line; parsing canonical text and emitting it again is
byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Any, Iterator

from .groups import AbelianGroup, FPGroup, Word
from .lefschetz import (
    BASES,
    Crossing,
    FramedLinkDiagram,
    LefschetzFibration,
    LinkComponent,
    make_cycle,
)
from .openbook import MappingClassAction, OpenBook, action_from_twists, hand_sign
from .surfaces import PagePresentation, SurfaceSig, is_standard, standard_page
from .trisect import Provenance, TrisectionDiagram

VERSION = 1
KINDS = ("surface", "page", "openbook", "linkdiagram", "lefschetz", "trisection")
_NAME = re.compile(r"^[A-Za-z0-9_.:+-]+$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Block:
    kind: str
    name: str
    value: Any
    line: int = 0


@dataclass
class Document:
    blocks: list[Block] = field(default_factory=list)

    def get(self, name: str) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    def of_kind(self, *kinds: str) -> list[Block]:
        return [b for b in self.blocks if b.kind in kinds]

    def names(self) -> set[str]:
        return {b.name for b in self.blocks}

    def add(self, kind: str, name: str, value: Any) -> str:
        if not _NAME.match(name):
            raise ValueError(f"bad block name {name!r}")
        if name in self.names():
            raise ValueError(f"duplicate block name {name!r}")
        self.blocks.append(Block(kind, name, value))
        return name

    def page_name(self, page: PagePresentation, hint: str) -> str:
        """Name of a page block for ``page``, adding one if needed."""
        for b in self.of_kind("page"):
            if b.value == page:
                return b.name
        name = hint
        k = 2
        while name in self.names():
            name = f"{hint}{k}"
            k += 1
        return self.add("page", name, page)


# --- lexical helpers ----------------------------------------------------------


@dataclass
class _Line:
    no: int
    text: str

    @property
    def indented(self) -> bool:
        return self.text[:1] in (" ", "\t")

    def tokens(self) -> list[tuple[str, int]]:
        head = self.text.split(" : ", 1)[0]
        return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", head)]

    def tail(self) -> tuple[str, int] | None:
        i = self.text.find(" : ")
        if i < 0:
            return None
        return self.text[i + 3 :].strip(), i + 4


def _fields(tokens: list[tuple[str, int]], line: int, allowed: set[str]) -> dict[str, tuple[str, int]]:
    out = {}
    for tok, col in tokens:
        key, eq, val = tok.partition("=")
        if not eq:
            raise ParseError(f"expected key=value, got {tok!r}", line, col)
        if key not in allowed:
            raise ParseError(f"unknown field {key!r}", line, col)
        if key in out:
            raise ParseError(f"repeated field {key!r}", line, col)
        out[key] = (val, col)
    return out


def _int(val: tuple[str, int], line: int) -> int:
    try:
        return int(val[0])
    except ValueError:
        raise ParseError(f"expected an integer, got {val[0]!r}", line, val[1]) from None


def _req(f: dict, key: str, line: int) -> tuple[str, int]:
    if key not in f:
        raise ParseError(f"missing field {key}=", line, 1)
    return f[key]


def _word(ln: _Line) -> Word:
    t = ln.tail()
    if t is None:
        raise ParseError("expected ' : WORD'", ln.no, len(ln.text) + 1)
    try:
        return Word.parse(t[0])
    except ValueError as exc:
        raise ParseError(str(exc), ln.no, t[1]) from None


def _orientation(tok: tuple[str, int], line: int) -> bool:
    if tok[0] not in ("orientable", "nonorientable"):
        raise ParseError(f"expected orientable or nonorientable, got {tok[0]!r}", line, tok[1])
    return tok[0] == "orientable"


def _sig_from(tokens, line) -> tuple[bool, list]:
    if not tokens:
        raise ParseError("missing orientation", line, 1)
    orientable = _orientation(tokens[0], line)
    return orientable, tokens[1:]


def _orient_word(orientable: bool) -> str:
    return "orientable" if orientable else "nonorientable"


def _sig_text(s: SurfaceSig) -> str:
    return f"{_orient_word(s.orientable)}/{s.genus}/{s.boundary}"


def _sig_parse(val: tuple[str, int], line: int) -> SurfaceSig:
    parts = val[0].split("/")
    if len(parts) != 3 or parts[0] not in ("orientable", "nonorientable"):
        raise ParseError(f"bad surface {val[0]!r}", line, val[1])
    try:
        return SurfaceSig(parts[0] == "orientable", int(parts[1]), int(parts[2]))
    except ValueError:
        raise ParseError(f"bad surface {val[0]!r}", line, val[1]) from None


def _h1_text(a: AbelianGroup) -> str:
    return f"{a.rank}/" + ",".join(map(str, a.torsion))


def _h1_parse(val: tuple[str, int], line: int) -> AbelianGroup:
    try:
        r, t = val[0].split("/")
        return AbelianGroup(int(r), tuple(int(x) for x in t.split(",") if x))
    except ValueError:
        raise ParseError(f"bad group {val[0]!r}", line, val[1]) from None


# --- parsing ------------------------------------------------------------------------


def _chunks(lines: list[_Line]) -> Iterator[tuple[_Line, list[_Line]]]:
    head, body = None, []
    for ln in lines:
        if ln.indented:
            if head is None:
                raise ParseError("indented line outside a block", ln.no, 1)
            body.append(ln)
        else:
            if head is not None:
                yield head, body
            head, body = ln, []
    if head is not None:
        yield head, body


def parse(text: str) -> Document:
    raw = text.split("\n")
    lines = []
    for i, t in enumerate(raw, 1):
        t = t.rstrip("\r")
        s = t.strip()
        if not s or s.startswith("#"):
            continue
        lines.append(_Line(i, t))
    if not lines:
        raise ParseError("missing version header", 1, 1)
    first = lines[0]
    toks = first.tokens()
    if first.indented or toks[0][0] != "nofib":
        raise ParseError("missing version header", first.no, 1)
    if len(toks) != 2 or toks[1][0] != str(VERSION):
        col = toks[1][1] if len(toks) > 1 else len(first.text) + 1
        raise ParseError(f"unsupported version {' '.join(t for t, _ in toks[1:]) or '(none)'}", first.no, col)
    doc = Document()
    for head, body in _chunks(lines[1:]):
        toks = head.tokens()
        kind, kcol = toks[0]
        if kind not in KINDS:
            raise ParseError(f"unknown block type {kind!r}", head.no, kcol)
        if len(toks) < 2:
            raise ParseError(f"{kind} block needs a name", head.no, len(head.text) + 1)
        name, ncol = toks[1]
        if not _NAME.match(name):
            raise ParseError(f"bad block name {name!r}", head.no, ncol)
        if name in doc.names():
            raise ParseError(f"duplicate block name {name!r}", head.no, ncol)
        try:
            value = _PARSERS[kind](doc, head, toks[2:], body)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), head.no, 1) from None
        doc.blocks.append(Block(kind, name, value, head.no))
    return doc


def _ref(doc: Document, val: tuple[str, int], line: int, kind: str):
    try:
        b = doc.get(val[0])
    except KeyError:
        raise ParseError(f"dangling reference to {val[0]!r}", line, val[1]) from None
    if b.kind != kind:
        raise ParseError(f"{val[0]!r} is a {b.kind}, expected a {kind}", line, val[1])
    return b.value


def _sub(body: list[_Line]) -> Iterator[tuple[_Line, str, list[tuple[str, int]]]]:
    for ln in body:
        toks = ln.tokens()
        if not toks:
            raise ParseError("empty sub-line", ln.no, 1)
        yield ln, toks[0][0], toks[1:]


def _parse_surface(doc, head, toks, body):
    orientable, rest = _sig_from(toks, head.no)
    f = _fields(rest, head.no, {"genus", "boundary"})
    if body:
        raise ParseError("surface blocks have no sub-lines", body[0].no, 1)
    return SurfaceSig(orientable, _int(_req(f, "genus", head.no), head.no), _int(_req(f, "boundary", head.no), head.no))


def _parse_page(doc, head, toks, body):
    orientable, rest = _sig_from(toks, head.no)
    f = _fields(rest, head.no, {"genus", "boundary", "base"})
    sig = SurfaceSig(orientable, _int(_req(f, "genus", head.no), head.no), _int(_req(f, "boundary", head.no), head.no))
    base = _int(f["base"], head.no) if "base" in f else 0
    gens, rev, rels, bws = [], set(), [], []
    for ln, key, args in _sub(body):
        if key == "gen":
            if not args or len(args) > 2 or (len(args) == 2 and args[1][0] != "reversing"):
                raise ParseError("expected 'gen NAME [reversing]'", ln.no, 1)
            gens.append(args[0][0])
            if len(args) == 2:
                rev.add(args[0][0])
        elif key == "relator":
            rels.append(_word(ln))
        elif key == "boundary":
            bws.append(_word(ln))
        else:
            raise ParseError(f"unknown page line {key!r}", ln.no, 1 + len(ln.text) - len(ln.text.lstrip()))
    if not gens:
        if rels or bws:
            raise ParseError("relators and boundary words need explicit generators", head.no, 1)
        return replace(standard_page(sig), base_boundary=base)
    return PagePresentation(sig, FPGroup(tuple(gens), tuple(rels)), tuple(bws), base, frozenset(rev))


def _parse_openbook(doc, head, toks, body):
    f = _fields(toks, head.no, {"page"})
    page = _ref(doc, _req(f, "page", head.no), head.no, "page")
    twists, images, transports = [], {}, {}
    for ln, key, args in _sub(body):
        if key == "twist":
            if len(args) != 2:
                raise ParseError("expected 'twist ID R|L'", ln.no, 1)
            try:
                hand_sign(args[1][0])
            except ValueError as exc:
                raise ParseError(str(exc), ln.no, args[1][1]) from None
            twists.append((args[0][0], args[1][0]))
        elif key == "image":
            if len(args) != 1:
                raise ParseError("expected 'image GEN : WORD'", ln.no, 1)
            images[args[0][0]] = _word(ln)
        elif key == "transport":
            if len(args) != 1:
                raise ParseError("expected 'transport J : WORD'", ln.no, 1)
            transports[_int(args[0], ln.no)] = _word(ln)
        else:
            raise ParseError(f"unknown openbook line {key!r}", ln.no, 1)
    if images or transports:
        act = MappingClassAction(page, images, transports, tuple(twists))
    else:
        act = action_from_twists(page, twists)
    return OpenBook(page, act)


def _parse_linkdiagram(doc, head, toks, body):
    f = _fields(toks, head.no, {"p"})
    p = _int(_req(f, "p", head.no), head.no)
    comps, xs = [], []
    for ln, key, args in _sub(body):
        if key == "component":
            if not args:
                raise ParseError("component needs an id", ln.no, 1)
            g = _fields(args[1:], ln.no, {"framing"})
            comps.append(LinkComponent(args[0][0], _word(ln), _int(_req(g, "framing", ln.no), ln.no)))
        elif key == "crossing":
            if len(args) != 3:
                raise ParseError("expected 'crossing ID COMP:STRAND COMP:STRAND'", ln.no, 1)
            ends = []
            for tok, col in args[1:]:
                c, sep, s = tok.rpartition(":")
                try:
                    ends.append((c, int(s)))
                except ValueError:
                    raise ParseError(f"bad strand reference {tok!r}", ln.no, col) from None
                if not sep:
                    raise ParseError(f"bad strand reference {tok!r}", ln.no, col)
            xs.append(Crossing(ends[0], ends[1], args[0][0]))
        else:
            raise ParseError(f"unknown linkdiagram line {key!r}", ln.no, 1)
    return FramedLinkDiagram(p, tuple(comps), tuple(xs))


_VERIFIED = {"yes": True, "unverified": None}


def _parse_lefschetz(doc, head, toks, body):
    f = _fields(toks, head.no, {"base", "page", "claim", "verified"})
    base = _req(f, "base", head.no)
    if base[0] not in BASES:
        raise ParseError(f"base must be one of {', '.join(BASES)}", head.no, base[1])
    page = _ref(doc, _req(f, "page", head.no), head.no, "page")
    claim = f["claim"][0] if "claim" in f else None
    verified = None
    if "verified" in f:
        if f["verified"][0] not in _VERIFIED:
            raise ParseError("verified must be yes or unverified", head.no, f["verified"][1])
        verified = _VERIFIED[f["verified"][0]]
    cycles, rows, sections = [], [], []
    for ln, key, args in _sub(body):
        if key == "cycle":
            if not args:
                raise ParseError("cycle needs an id", ln.no, 1)
            g = _fields(args[1:], ln.no, {"sign", "origin", "framing", "twist"})
            kw = dict(sign=_int(_req(g, "sign", ln.no), ln.no), origin=_req(g, "origin", ln.no)[0])
            if "framing" in g:
                kw["framing"] = _int(g["framing"], ln.no)
            if "twist" in g:
                kw["twist"] = g["twist"][0]
            try:
                cycles.append(make_cycle(page, args[0][0], _word(ln), **kw))
            except ValueError as exc:
                raise ParseError(str(exc), ln.no, 1) from None
        elif key == "row":
            rows.append(tuple(_int(a, ln.no) for a in args))
        elif key == "section":
            if len(args) != 1:
                raise ParseError("expected 'section SQUARE'", ln.no, 1)
            sections.append(_int(args[0], ln.no))
        else:
            raise ParseError(f"unknown lefschetz line {key!r}", ln.no, 1)
    return LefschetzFibration(base[0], page, tuple(cycles), tuple(rows) if rows else None, tuple(sections), {}, claim, verified)


def _parse_trisection(doc, head, toks, body):
    orientable, rest = _sig_from(toks, head.no)
    f = _fields(rest, head.no, {"genus", "boundary", "arcs", "euler", "page", "boundary-h1"})
    sig = SurfaceSig(orientable, _int(_req(f, "genus", head.no), head.no), _int(_req(f, "boundary", head.no), head.no))
    arcs = _int(f["arcs"], head.no) if "arcs" in f else 0
    systems = {"alpha": (), "beta": (), "gamma": ()}
    mats = {"ab": [], "bg": [], "ag": []}
    parallel, signs, slides, log = frozenset(), (), [], []
    for ln, key, args in _sub(body):
        if key in systems:
            systems[key] = tuple(a for a, _ in args)
        elif key in mats:
            mats[key].append(tuple(_int(a, ln.no) for a in args))
        elif key == "parallel":
            parallel = frozenset(_int(a, ln.no) for a in args)
        elif key == "signs":
            signs = tuple(_int(a, ln.no) for a in args)
        elif key == "slide":
            if len(args) != 3:
                raise ParseError("expected 'slide GAMMA BETA COUNT'", ln.no, 1)
            slides.append((args[0][0], args[1][0], _int(args[2], ln.no)))
        elif key == "log":
            t = ln.tail()
            log.append(t[0] if t else "")
        else:
            raise ParseError(f"unknown trisection line {key!r}", ln.no, 1)
    prov = None
    if "euler" in f:
        prov = Provenance(
            _int(f["euler"], head.no),
            _sig_parse(f["page"], head.no) if "page" in f else None,
            _h1_parse(f["boundary-h1"], head.no) if "boundary-h1" in f else None,
            tuple(log),
        )
    return TrisectionDiagram(
        sig,
        systems["alpha"],
        systems["beta"],
        systems["gamma"],
        tuple(mats["ab"]),
        tuple(mats["bg"]),
        tuple(mats["ag"]),
        tuple(slides),
        arcs,
        parallel,
        signs,
        prov,
    )


_PARSERS = {
    "surface": _parse_surface,
    "page": _parse_page,
    "openbook": _parse_openbook,
    "linkdiagram": _parse_linkdiagram,
    "lefschetz": _parse_lefschetz,
    "trisection": _parse_trisection,
}


# --- emission -------------------------------------------------------------------------


def _sig_fields(s: SurfaceSig) -> str:
    return f"{_orient_word(s.orientable)} genus={s.genus} boundary={s.boundary}"


def _emit_surface(doc, name, s: SurfaceSig) -> list[str]:
    return [f"surface {name} {_sig_fields(s)}"]


def _emit_page(doc, name, p: PagePresentation) -> list[str]:
    head = f"page {name} {_sig_fields(p.sig)}"
    if is_standard(p):
        return [head]
    if p.sig.boundary:
        head += f" base={p.base_boundary}"
    out = [head]
    for g in p.group.generators:
        out.append(f"  gen {g}" + (" reversing" if g in p.reversing else ""))
    out += [f"  relator : {r}" for r in p.group.relators]
    out += [f"  boundary : {w}" for w in p.boundary_words]
    return out


def _emit_openbook(doc, name, ob: OpenBook) -> list[str]:
    pname = doc.page_name(ob.page, f"{name}.page")
    out = [f"openbook {name} page={pname}"]
    m = ob.monodromy
    out += [f"  twist {c} {h}" for c, h in m.twist_word]
    try:
        rebuilt = action_from_twists(ob.page, m.twist_word)
    except ValueError:
        rebuilt = None
    if rebuilt is None or rebuilt.images != m.images or rebuilt.transports != m.transports:
        for g in ob.page.group.generators:
            if m.images[g] != Word.gen(g):
                out.append(f"  image {g} : {m.images[g]}")
        for j in sorted(m.transports):
            if m.transports[j]:
                out.append(f"  transport {j} : {m.transports[j]}")
    return out


def _emit_linkdiagram(doc, name, d: FramedLinkDiagram) -> list[str]:
    out = [f"linkdiagram {name} p={d.p}"]
    out += [f"  component {c.id} framing={c.framing} : {c.word}" for c in d.components]
    for k, x in enumerate(d.crossings):
        xid = x.id or f"x{k + 1}"
        out.append(f"  crossing {xid} {x.over[0]}:{x.over[1]} {x.under[0]}:{x.under[1]}")
    return out


def _emit_lefschetz(doc, name, lf: LefschetzFibration) -> list[str]:
    pname = doc.page_name(lf.page, f"{name}.page")
    head = f"lefschetz {name} base={lf.base} page={pname}"
    if lf.claim:
        head += f" claim={lf.claim}"
        head += " verified=" + ("yes" if lf.verified else "unverified")
    out = [head]
    for c in lf.cycles:
        s = f"  cycle {c.curve.id} sign={c.sign} origin={c.origin}"
        if c.framing is not None:
            s += f" framing={c.framing}"
        if c.twist is not None:
            s += f" twist={c.twist}"
        out.append(f"{s} : {c.curve.word}")
    if lf.intersections is not None and lf.cycles:
        out += ["  row " + " ".join(map(str, r)) for r in lf.intersections]
    out += [f"  section {s}" for s in lf.sections]
    return out


def _emit_trisection(doc, name, d: TrisectionDiagram) -> list[str]:
    head = f"trisection {name} {_sig_fields(d.surface)} arcs={d.arcs}"
    p = d.provenance
    if p is not None:
        head += f" euler={p.euler}"
        if p.page is not None:
            head += f" page={_sig_text(p.page)}"
        if p.boundary_h1 is not None:
            head += f" boundary-h1={_h1_text(p.boundary_h1)}"
    out = [head]
    for key in ("alpha", "beta", "gamma"):
        out.append(("  " + key + " " + " ".join(getattr(d, key))).rstrip())
    for key, m in (("ab", d.I_ab), ("bg", d.I_bg), ("ag", d.I_ag)):
        out += [f"  {key} " + " ".join(map(str, r)) for r in m]
    if d.parallel:
        out.append("  parallel " + " ".join(map(str, sorted(d.parallel))))
    if d.signs:
        out.append("  signs " + " ".join(map(str, d.signs)))
    out += [f"  slide {g} {b} {k}" for g, b, k in d.slides]
    if p is not None:
        out += [f"  log : {t}" for t in p.log]
    return out


_EMITTERS = {
    "surface": _emit_surface,
    "page": _emit_page,
    "openbook": _emit_openbook,
    "linkdiagram": _emit_linkdiagram,
    "lefschetz": _emit_lefschetz,
    "trisection": _emit_trisection,
}


def _ordered(doc: Document) -> list[Block]:
    first = ("surface", "page")
    return [b for b in doc.blocks if b.kind in first] + [b for b in doc.blocks if b.kind not in first]


def emit(doc: Document) -> str:
    """Canonical text.  Referenced pages missing from ``doc`` are added first."""
    # emitters can add page blocks, so resolve references before output
    for b in list(doc.blocks):
        _EMITTERS[b.kind](doc, b.name, b.value)
    order = _ordered(doc)
    chunks = ["\n".join(_EMITTERS[b.kind](doc, b.name, b.value)) for b in order]
    return f"nofib {VERSION}\n\n" + "\n\n".join(chunks) + "\n"


def _sig_tree(s: SurfaceSig) -> dict:
    return {"orientable": s.orientable, "genus": s.genus, "boundary": s.boundary, "euler": s.euler}


def _h1_tree(a: AbelianGroup) -> dict:
    return {"rank": a.rank, "torsion": list(a.torsion)}


def _tree(doc: Document, b: Block) -> dict:
    v = b.value
    if b.kind == "surface":
        body = _sig_tree(v)
    elif b.kind == "page":
        body = {
            "surface": _sig_tree(v.sig),
            "generators": list(v.group.generators),
            "reversing": sorted(v.reversing),
            "relators": [str(r) for r in v.group.relators],
            "boundary_words": [str(w) for w in v.boundary_words],
            "base_boundary": v.base_boundary,
        }
    elif b.kind == "openbook":
        m = v.monodromy
        body = {
            "page": doc.page_name(v.page, f"{b.name}.page"),
            "twists": [list(t) for t in m.twist_word],
            "images": {g: str(w) for g, w in m.images.items()},
            "transports": {str(j): str(t) for j, t in m.transports.items()},
        }
    elif b.kind == "linkdiagram":
        body = {
            "p": v.p,
            "components": [{"id": c.id, "framing": c.framing, "word": str(c.word)} for c in v.components],
            "crossings": [{"id": x.id, "over": list(x.over), "under": list(x.under)} for x in v.crossings],
        }
    elif b.kind == "lefschetz":
        body = {
            "base": v.base,
            "page": doc.page_name(v.page, f"{b.name}.page"),
            "claim": v.claim,
            "verified": v.verified,
            "cycles": [
                {
                    "id": c.curve.id,
                    "word": str(c.curve.word),
                    "class": str(c.cls),
                    "sign": c.sign,
                    "origin": c.origin,
                    "framing": c.framing,
                    "twist": c.twist,
                }
                for c in v.cycles
            ],
            "intersections": None if v.intersections is None else [list(r) for r in v.intersections],
            "sections": list(v.sections),
        }
    else:
        p = v.provenance
        body = {
            "surface": _sig_tree(v.surface),
            "arcs": v.arcs,
            "alpha": list(v.alpha),
            "beta": list(v.beta),
            "gamma": list(v.gamma),
            "I_ab": [list(r) for r in v.I_ab],
            "I_bg": [list(r) for r in v.I_bg],
            "I_ag": [list(r) for r in v.I_ag],
            "parallel": sorted(v.parallel),
            "signs": list(v.signs),
            "slides": [list(s) for s in v.slides],
            "provenance": None
            if p is None
            else {
                "euler": p.euler,
                "page": None if p.page is None else _sig_tree(p.page),
                "boundary_h1": None if p.boundary_h1 is None else _h1_tree(p.boundary_h1),
                "log": list(p.log),
            },
        }
    return {"kind": b.kind, "name": b.name, **body}


def to_structured(doc: Document) -> dict:
    """JSON-ready tree ``{"version": 1, "blocks": [...]}``; see the README for the schema."""
    # naming pages can add blocks, so resolve every reference first
    for b in list(doc.blocks):
        _tree(doc, b)
    return {"version": VERSION, "blocks": [_tree(doc, b) for b in _ordered(doc)]}
