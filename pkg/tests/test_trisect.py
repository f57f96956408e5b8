import xml.etree.ElementTree as ET
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nofib.lefschetz import (
    DISK,
    SPHERE,
    FramedLinkDiagram,
    LefschetzFibration,
    LinkComponent,
    genus3_section_fibration,
    harer_compile,
    klein_fibration,
    make_cycle,
    section_fiber_neighborhood,
)
from nofib.groups import Word
from nofib.surfaces import SurfaceSig, standard_page
from nofib.trisect import (
    GlueSpec,
    closed_pipeline,
    double_diagram,
    draw_svg,
    glue_diagrams,
    min_arcs,
    mirror,
    validate_diagram,
    wrinkle_compile,
)

N = SurfaceSig.nonorientable


def compiled(framing, p=1):
    return harer_compile(FramedLinkDiagram(p, [LinkComponent("K", Word.parse("a^2"), framing)]))


def random_disk_fibration(genus, words, matrix):
    page = standard_page(N(genus, 1))
    cycles = [make_cycle(page, f"c{i}", w) for i, w in enumerate(words)]
    return LefschetzFibration(DISK, page, cycles, matrix)


@st.composite
def cycle_data(draw, genus=4):
    n = draw(st.integers(0, 6))
    letters = [f"a{i + 1}" for i in range(genus)]
    words = []
    for _ in range(n):
        i, j = draw(st.lists(st.sampled_from(letters), min_size=2, max_size=2, unique=True))
        words.append(f"{i} {j}")
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = draw(st.integers(0, 2))
    return words, tuple(map(tuple, m))


# --- wrinkling ----------------------------------------------------------------


def test_wrinkling_the_twisted_disk_bundle():
    d = wrinkle_compile(compiled(1))
    assert d.surface == N(3, 1)
    assert d.size == 1
    assert validate_diagram(d).ok


def test_wrinkling_the_section_neighborhood():
    d = wrinkle_compile(section_fiber_neighborhood(N(3, 0), -1))
    assert d.surface == N(7, 1)
    assert d.size == 2
    assert validate_diagram(d).ok


def test_slides_follow_intersections():
    lf = random_disk_fibration(4, ["a1 a2", "a2 a3", "a3 a4"], ((0, 1, 2), (1, 0, 1), (2, 1, 0)))
    d = wrinkle_compile(lf)
    assert d.slides == (("gamma2", "beta1", 1), ("gamma3", "beta1", 2), ("gamma3", "beta2", 1))
    assert d.I_ag == ((1, 0, 0), (1, 1, 0), (2, 1, 1))
    assert d.slide_count == 4


def test_wrinkling_preconditions():
    with pytest.raises(ValueError):
        wrinkle_compile(klein_fibration(1))
    lf = random_disk_fibration(4, ["a1 a2", "a2 a3"], None)
    with pytest.raises(ValueError, match="intersection"):
        wrinkle_compile(lf)
    with pytest.raises(ValueError):
        wrinkle_compile(compiled(0), arcs=1)


@settings(max_examples=100, deadline=None)
@given(cycle_data())
def test_wrinkle_invariants(data):
    words, m = data
    lf = random_disk_fibration(4, words, m)
    d = wrinkle_compile(lf)
    n = len(words)
    assert d.surface == N(4 + 2 * n, 1)
    assert d.slide_count == sum(m[i][j] for i in range(n) for j in range(i + 1, n))
    assert len(d.alpha) == len(d.beta) == len(d.gamma) == n
    assert validate_diagram(d).ok


def test_hand_edited_diagram_is_caught():
    d = wrinkle_compile(random_disk_fibration(4, ["a1 a2", "a2 a3"], ((0, 1), (1, 0))))
    bad = replace(d, I_bg=((1, 1), (0, 1)))
    rep = validate_diagram(bad)
    assert not rep.ok
    assert rep.violations == ["I_bg(1,2) = 1, expected 0"]


def test_validation_catches_more():
    d = wrinkle_compile(random_disk_fibration(4, ["a1 a2", "a2 a3"], ((0, 1), (1, 0))))
    assert not validate_diagram(replace(d, gamma=d.gamma[:1])).ok
    assert not validate_diagram(replace(d, I_ag=((1, 1), (0, 1)))).ok
    assert not validate_diagram(replace(d, surface=N(9, 1))).ok
    assert not validate_diagram(replace(d, arcs=0)).ok


# --- doubling and gluing ----------------------------------------------------------


def test_doubling_the_product_bundle_diagram():
    d = wrinkle_compile(compiled(0))
    assert d.surface == N(5, 2) and d.arcs == min_arcs(N(1, 2)) == 2
    closed = double_diagram(d)
    assert closed.surface == N(12, 0)
    assert closed.size == 2 * d.size + d.arcs == 6
    assert validate_diagram(closed).ok


def test_doubling_a_genus_three_diagram():
    closed = double_diagram(wrinkle_compile(compiled(1)))
    assert closed.surface == N(6, 0)
    assert validate_diagram(closed).ok
    with pytest.raises(ValueError):
        double_diagram(closed)


def test_doubling_needs_arcs():
    with pytest.raises(ValueError):
        double_diagram(wrinkle_compile(compiled(1)), arcs=0)


@settings(max_examples=50, deadline=None)
@given(cycle_data())
def test_doubling_doubles_euler(data):
    d = wrinkle_compile(random_disk_fibration(4, *data))
    closed = double_diagram(d)
    assert closed.surface.euler == 2 * d.surface.euler
    assert validate_diagram(closed).ok


@settings(max_examples=50, deadline=None)
@given(cycle_data(), cycle_data())
def test_gluing_adds_euler(a, b):
    w = wrinkle_compile(random_disk_fibration(4, *a))
    v = wrinkle_compile(random_disk_fibration(4, *b))
    g = glue_diagrams(w, v)
    assert g.surface.euler == w.surface.euler + v.surface.euler
    assert g.size == w.size + v.size + w.arcs
    assert validate_diagram(g).ok


def test_gluing_with_the_mirror_is_doubling():
    d = wrinkle_compile(compiled(0))
    g, dd = glue_diagrams(d, mirror(d)), double_diagram(d)
    assert g.surface == dd.surface and g.size == dd.size
    assert g.slide_count == dd.slide_count


def test_gluing_checks_boundaries():
    a = wrinkle_compile(compiled(1))
    b = wrinkle_compile(section_fiber_neighborhood(N(3, 0)))
    with pytest.raises(ValueError, match="boundary mismatch"):
        glue_diagrams(a, b)
    with pytest.raises(ValueError):
        glue_diagrams(double_diagram(a), a)
    with pytest.raises(ValueError):
        glue_diagrams(a, a, GlueSpec(boundary_map=(1,)))


# --- the closed pipeline -------------------------------------------------------------


def test_pipeline_on_the_genus_three_fibration():
    res = closed_pipeline(genus3_section_fibration())
    assert res.v.surface == N(7, 1)
    assert res.w.surface == N(29, 1)
    assert res.diagram.surface == N(36, 0)
    assert res.diagram.size == 18
    assert res.report.ok
    assert "glue: invariant-checked" in res.diagram.provenance.log


def test_pipeline_needs_a_section():
    with pytest.raises(ValueError, match="section"):
        closed_pipeline(klein_fibration(2))


def test_pipeline_on_a_bundle_with_section():
    page = standard_page(N(3, 0))
    res = closed_pipeline(LefschetzFibration(SPHERE, page, (), (), (1,)))
    assert res.v.size == 2 and res.w.size == 0
    assert res.diagram.surface.euler == res.v.surface.euler + res.w.surface.euler
    assert res.report.ok


@settings(max_examples=40, deadline=None)
@given(cycle_data(), st.sampled_from([1, -1]))
def test_pipeline_outputs_validate(data, square):
    words, m = data
    page = standard_page(N(4, 0))
    cycles = [make_cycle(page, f"c{i}", w) for i, w in enumerate(words)]
    lf = LefschetzFibration(SPHERE, page, cycles, m, (square,))
    res = closed_pipeline(lf)
    assert res.report.ok, str(res.report)
    assert res.diagram.surface.genus == 2 * res.diagram.size


def test_svg_drawing_is_well_formed():
    svg = draw_svg(closed_pipeline(genus3_section_fibration()).diagram)
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert svg.count("<ellipse") == 18
