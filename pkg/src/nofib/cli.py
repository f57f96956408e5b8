"""Command-line front end.

    nofib [--format=text|structured] [--budget=N] GROUP COMMAND ARGS...

Exit status is 0 on success, 1 when a validation fails and 2 for parse or
usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .groups import AbelianGroup, recognize
from .lefschetz import (
    DISK,
    SPHERE,
    LefschetzFibration,
    boundary_openbook,
    fiber_sum,
    harer_compile,
    lf_euler_char,
    lf_h1_over_sphere,
    reduce_trivial_cycles,
    relative_minimality,
)
from .openbook import (
    OpenBook,
    binding_lower_bound_genus_one,
    hopf_stabilize,
    murasugi_sum,
    total_space_h1,
    total_space_pi1,
)
from .textformat import Document, ParseError, emit, parse, to_structured
from .trisect import (
    TrisectionDiagram,
    closed_pipeline,
    double_diagram,
    draw_svg,
    glue_diagrams,
    validate_diagram,
    wrinkle_compile,
)

COMMANDS = {
    "ob": ("pi1", "h1", "plumb", "stabilize", "binding-bound"),
    "lf": ("compile", "boundary", "euler", "h1", "fibersum", "reduce", "minimal"),
    "tri": ("wrinkle", "double", "glue", "check", "pipeline"),
}


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    pass


@dataclass
class Result:
    text: str
    data: Any
    status: int = 0


def fixture_root() -> Path:
    env = os.environ.get("NOFIB_FIXTURES")
    if env:
        return Path(env)
    return Path(str(resources.files("nofib") / "fixtures"))


def resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    q = fixture_root() / path
    if q.exists():
        return q
    raise UsageError(f"no such file: {path}")


def load(path: str) -> Document:
    return parse(resolve(path).read_text(encoding="utf-8"))


def _pick(doc: Document, kinds: tuple[str, ...], name: str | None):
    if name is not None:
        try:
            b = doc.get(name)
        except KeyError:
            raise UsageError(f"no block named {name!r}") from None
        if b.kind not in kinds:
            raise UsageError(f"block {name!r} is a {b.kind}, expected one of {', '.join(kinds)}")
        return b
    for kind in kinds:
        found = doc.of_kind(kind)
        if len(found) == 1:
            return found[0]
        if len(found) > 1:
            raise UsageError(f"several {kind} blocks; name one of {', '.join(b.name for b in found)}")
    raise UsageError(f"missing block argument: the document has no {' or '.join(kinds)} block")


def _as_lefschetz(doc, name) -> tuple[str, LefschetzFibration]:
    b = _pick(doc, ("lefschetz", "linkdiagram"), name)
    if b.kind == "linkdiagram":
        return f"{b.name}.lf", harer_compile(b.value)
    return b.name, b.value


def _as_openbook(doc, name) -> tuple[str, OpenBook]:
    b = _pick(doc, ("openbook", "lefschetz", "linkdiagram"), name)
    if b.kind == "openbook":
        return b.name, b.value
    lname, lf = _as_lefschetz(doc, b.name)
    return f"{lname}.ob", boundary_openbook(lf)


def _as_diagram(doc, name) -> tuple[str, TrisectionDiagram]:
    b = _pick(doc, ("trisection", "lefschetz", "linkdiagram"), name)
    if b.kind == "trisection":
        return b.name, b.value
    lname, lf = _as_lefschetz(doc, b.name)
    return f"{lname}.tri", wrinkle_compile(lf)


def _h1(a: AbelianGroup) -> Result:
    return Result(str(a), {"rank": a.rank, "torsion": list(a.torsion)})


def _doc_result(kind: str, name: str, value, log: list[str] | None = None) -> Result:
    doc = Document()
    doc.add(kind, name, value)
    text = emit(doc)
    data = to_structured(doc)
    if log:
        text += "".join(f"# {line}\n" for line in log)
        data["log"] = list(log)
    return Result(text.rstrip("\n"), data)


def _report(ok: bool, text: str) -> Result:
    return Result(text, {"ok": ok, "messages": text.splitlines()}, 0 if ok else 1)


def _int_arg(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise UsageError(f"expected an integer, got {s!r}") from None


def _file_args(args: list[str], lo: int, hi: int) -> list[str]:
    if not lo <= len(args) <= hi:
        raise UsageError(f"expected between {lo} and {hi} arguments, got {len(args)}")
    return args + [None] * (hi - len(args))


def run(group: str, command: str, args: list[str], opts: argparse.Namespace) -> Result:
    if command not in COMMANDS.get(group, ()):
        raise UsageError(f"unknown command {group} {command}")
    budget = opts.budget
    if (group, command) == ("ob", "binding-bound"):
        if len(args) != 1:
            raise UsageError("expected one integer argument")
        n = _int_arg(args[0])
        k = binding_lower_bound_genus_one(n)
        return Result(str(k), {"n": n, "binding_lower_bound": k})

    if group == "ob":
        if command == "plumb":
            path, a, b = _file_args(args, 1, 3)
            doc = load(path)
            na, oa = _as_openbook(doc, a)
            ob = oa
            if b is not None:
                ob = murasugi_sum(oa, _as_openbook(doc, b)[1])
            for _ in range(opts.copies - 1):
                ob = murasugi_sum(ob, oa)
            return _doc_result("openbook", f"{na}.sum", ob)
        path, name = _file_args(args, 1, 2)
        bname, ob = _as_openbook(load(path), name)
        if command == "pi1":
            g = total_space_pi1(ob, budget)
            tag = recognize(g, budget=budget)
            return Result(f"{g}\nrecognized={tag}", {
                "generators": list(g.generators),
                "relators": [str(r) for r in g.relators],
                "recognized": tag,
            })
        if command == "h1":
            return _h1(total_space_h1(ob, budget))
        return _doc_result("openbook", f"{bname}.stab", hopf_stabilize(ob, opts.band, opts.hand))

    if group == "lf":
        if command == "fibersum":
            path, a, b = _file_args(args, 1, 3)
            doc = load(path)
            na, la = _as_lefschetz(doc, a)
            lf = la
            if b is not None:
                lf = fiber_sum(la, _as_lefschetz(doc, b)[1])
            for _ in range(opts.copies - 1):
                lf = fiber_sum(lf, la)
            return _doc_result("lefschetz", f"{na}.sum", lf)
        path, name = _file_args(args, 1, 2)
        lname, lf = _as_lefschetz(load(path), name)
        if command == "compile":
            return _doc_result("lefschetz", lname, lf)
        if command == "boundary":
            return _doc_result("openbook", f"{lname}.ob", boundary_openbook(lf))
        if command == "euler":
            e = lf_euler_char(lf)
            return Result(f"euler={e}", {"euler": e})
        if command == "h1":
            if lf.base != SPHERE:
                raise ValidationFailure("lf h1 needs a fibration over the sphere")
            return _h1(lf_h1_over_sphere(lf))
        if command == "reduce":
            out, log = reduce_trivial_cycles(lf)
            return _doc_result("lefschetz", f"{lname}.reduced", out, log)
        rep = relative_minimality(lf)
        return _report(rep.relatively_minimal, str(rep))

    if command == "glue":
        path, a, b = _file_args(args, 3, 3)
        doc = load(path)
        (na, w), (_, v) = _as_diagram(doc, a), _as_diagram(doc, b)
        d = glue_diagrams(w, v)
        return _finish_diagram(f"{na}.glued", d, opts)
    path, name = _file_args(args, 1, 2)
    doc = load(path)
    if command == "pipeline":
        lname, lf = _as_lefschetz(doc, name)
        res = closed_pipeline(lf, opts.section)
        out = _finish_diagram(f"{lname}.closed", res.diagram, opts)
        if not res.report.ok:
            out.text += "\n" + str(res.report)
            out.status = 1
        return out
    if command == "wrinkle":
        lname, lf = _as_lefschetz(doc, name)
        if lf.base != DISK:
            raise ValidationFailure("wrinkling needs a fibration over the disk")
        return _finish_diagram(f"{lname}.tri", wrinkle_compile(lf, opts.arcs), opts)
    dname, d = _as_diagram(doc, name)
    if command == "double":
        return _finish_diagram(f"{dname}.double", double_diagram(d, opts.arcs), opts)
    rep = validate_diagram(d)
    return _report(rep.ok, str(rep))


def _finish_diagram(name: str, d: TrisectionDiagram, opts) -> Result:
    if opts.svg:
        Path(opts.svg).write_text(draw_svg(d), encoding="utf-8")
    return _doc_result("trisection", name, d)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nofib", description="Open books, Lefschetz fibrations and trisections on nonorientable manifolds.")
    ap.add_argument("group", choices=sorted(COMMANDS))
    ap.add_argument("command")
    ap.add_argument("args", nargs="*", help="input file (or fixture name) and block names")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    ap.add_argument("--budget", type=int, default=10_000, help="Tietze move budget")
    ap.add_argument("--seed", type=int, default=None, help="accepted for scripted runs; output never depends on it")
    ap.add_argument("--band", choices=("boundary-split", "crosscap", "torus"), default="boundary-split")
    ap.add_argument("--hand", choices=("R", "L"), default="R")
    ap.add_argument("--copies", type=int, default=1, help="plumb or fiber-sum the first block this many times")
    ap.add_argument("--arcs", type=int, default=None, help="cut-arc count for wrinkle and double")
    ap.add_argument("--section", type=int, default=0, help="section index for the closed pipeline")
    ap.add_argument("--svg", default=None, help="write a schematic drawing of the output diagram")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        opts = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        res = run(opts.group, opts.command, list(opts.args), opts)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationFailure, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if opts.format == "structured":
        payload = {"command": f"{opts.group} {opts.command}", "status": res.status, "result": res.data}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(res.text)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
