import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nofib.groups import Word, abelianize
from nofib.surfaces import (
    ONE_SIDED,
    TWO_SIDED,
    CurveClass,
    CurveOnPage,
    PagePresentation,
    SurfaceSig,
    add_crosscap,
    attach_tube,
    classify_curve,
    connect_sum_torus,
    double,
    euler_char,
    free_rewrite,
    page_add_crosscap,
    page_split_boundary,
    page_torus_sum,
    split_boundary_band,
    standard_page,
    surface_from_euler,
)

N = SurfaceSig.nonorientable
O = SurfaceSig.orientable_surface

sigs = st.one_of(
    st.builds(N, st.integers(1, 6), st.integers(0, 4)),
    st.builds(O, st.integers(0, 4), st.integers(0, 4)),
)
bounded = sigs.filter(lambda s: s.boundary > 0)


def test_signature_validation():
    with pytest.raises(ValueError):
        N(0, 1)
    with pytest.raises(ValueError):
        O(-1, 0)
    assert str(N(1, 2)) == "nonorientable genus=1 boundary=2"


@pytest.mark.parametrize("sig,chi", [(N(2, 0), 0), (N(1, 1), 0), (N(1, 2), -1), (O(0, 0), 2), (O(1, 1), -1)])
def test_euler_char(sig, chi):
    assert euler_char(sig) == chi == sig.euler


def test_stabilization_examples():
    assert connect_sum_torus(N(1, 1)) == N(3, 1)
    assert connect_sum_torus(O(0, 0)) == O(1, 0)
    assert add_crosscap(O(0, 1)) == N(1, 1)
    assert add_crosscap(N(1, 1)) == N(2, 1)
    assert add_crosscap(O(1, 1)) == N(3, 1)
    assert split_boundary_band(N(1, 1)) == N(1, 2)
    assert split_boundary_band(O(0, 2)) == O(0, 3)
    assert attach_tube(N(3, 1), 2) == N(7, 1)
    assert attach_tube(N(3, 1), 13) == N(29, 1)
    assert attach_tube(N(1, 1)) == N(3, 1)
    with pytest.raises(ValueError):
        split_boundary_band(N(2, 0))


def test_repeated_splits_give_mobius_band_with_holes():
    s = N(1, 2)
    n = 5
    for _ in range(2 * (n - 1)):
        s = split_boundary_band(s)
    assert s == N(1, 2 * n)
    assert s.euler == 1 - 2 * n


def test_torus_sums_accumulate():
    s = N(2, 1)
    for _ in range(4):
        s = connect_sum_torus(s)
    assert s == N(10, 1)


@pytest.mark.parametrize("k", range(1, 7))
def test_double_of_holed_projective_plane(k):
    assert double(N(1, k)) == N(2 * k, 0)


def test_double_examples():
    assert double(O(0, 1)) == O(0, 0)
    assert double(N(5, 2)) == N(12, 0)
    with pytest.raises(ValueError):
        double(N(1, 0))


@given(bounded)
def test_double_doubles_euler(s):
    d = double(s)
    assert d.closed and d.euler == 2 * s.euler
    assert d.orientable == s.orientable


@given(sigs, st.lists(st.sampled_from(["torus", "crosscap", "split", "tube"]), max_size=6))
def test_euler_changes_by_documented_amounts(s, ops):
    delta = {"torus": -2, "crosscap": -1, "split": -1, "tube": -2}
    fns = {"torus": connect_sum_torus, "crosscap": add_crosscap, "split": split_boundary_band, "tube": attach_tube}
    if s.boundary == 0:
        ops = [o for o in ops if o != "split"]
    chi = s.euler
    for o in ops:
        s = fns[o](s)
        chi += delta[o]
        assert s.euler == chi


@given(sigs)
def test_surface_from_euler_inverts(s):
    assert surface_from_euler(s.orientable, s.euler, s.boundary) == s


@given(bounded)
def test_standard_page_rank_consistency(s):
    p = standard_page(s)
    assert p.group.deficiency == 1 - s.euler
    basis, _ = free_rewrite(p)
    assert len(basis) == 1 - s.euler
    assert abelianize(p.group).rank == 1 - s.euler


def test_redundant_presentation_deficiency():
    p = standard_page(N(1, 2))
    assert str(p.group) == "< a c1 c2 | a^2 c2^-1 c1^-1 >"
    assert p.group.deficiency == 2


def test_page_validation():
    p = standard_page(N(1, 2))
    with pytest.raises(ValueError):
        PagePresentation(p.sig, p.group, p.boundary_words[:1])
    with pytest.raises(ValueError):
        PagePresentation(p.sig, p.group, p.boundary_words, base_boundary=2)


# --- curve classes ---------------------------------------------------------


def cls(page, word, sided=TWO_SIDED):
    return classify_curve(page, CurveOnPage("c", Word.parse(word), sided))


def test_classify_on_projective_plane():
    rp2 = standard_page(N(1, 0))
    assert cls(rp2, "a", ONE_SIDED).kind == CurveClass.ONE_SIDED
    assert cls(rp2, "1").kind == CurveClass.NULLHOMOTOPIC


def test_sidedness_must_match_word():
    rp2 = standard_page(N(1, 0))
    with pytest.raises(ValueError):
        cls(rp2, "a", TWO_SIDED)
    with pytest.raises(ValueError):
        cls(rp2, "b")


def test_classify_on_klein_bottle():
    k = standard_page(N(2, 0))
    assert cls(k, "a1 a2").kind == CurveClass.GENERIC
    assert cls(k, "a1^2").kind == CurveClass.BOUNDS_MOBIUS
    assert cls(k, "a2^2").kind == CurveClass.BOUNDS_MOBIUS
    assert cls(k, "1").kind == CurveClass.NULLHOMOTOPIC


def test_generic_class_on_klein_bottle_is_unique():
    # every two-sided word classified generic lies in the mod 2 class of a1 a2
    k = standard_page(N(2, 0))
    letters = [("a1", 1), ("a1", -1), ("a2", 1), ("a2", -1)]
    for n in range(1, 5):
        for ls in itertools.product(letters, repeat=n):
            w = Word(ls)
            if k.orientation_character(w):
                continue
            c = classify_curve(k, CurveOnPage("w", w))
            if c.kind == CurveClass.GENERIC:
                assert (w.exponent_sum("a1") % 2, w.exponent_sum("a2") % 2) == (1, 1)


def test_classify_on_holed_pages():
    p = standard_page(N(1, 2))
    assert str(cls(p, "c1")) == "boundary-parallel(0)"
    assert str(cls(p, "c2^-1")) == "boundary-parallel(1)"
    assert cls(p, "a a").kind == CurveClass.BOUNDS_MOBIUS
    m = standard_page(N(1, 1))
    assert str(cls(m, "a a")) == "boundary-parallel(0)"
    k1 = standard_page(N(2, 1))
    assert cls(k1, "a1 a2").kind == CurveClass.GENERIC
    assert str(cls(k1, "c1")) == "boundary-parallel(0)"


def test_conjugates_of_boundary_words_are_boundary_parallel():
    p = standard_page(N(1, 2))
    assert str(cls(p, "a c2 a^-1")) == "boundary-parallel(1)"


def test_non_catalog_pages_never_guess():
    p = standard_page(N(4, 1))
    assert cls(p, "a1 a2").kind == CurveClass.UNKNOWN
    assert cls(p, "1").kind == CurveClass.NULLHOMOTOPIC
    assert str(cls(p, "c1")) == "boundary-parallel(0)"


def test_curve_class_text_roundtrip():
    for text in ["nullhomotopic", "bounds-mobius", "boundary-parallel(3)", "generic-two-sided", "unknown"]:
        assert str(CurveClass.parse(text)) == text
    with pytest.raises(ValueError):
        CurveClass.parse("wobbly")


def test_one_sided_curves_carry_one_sided_class():
    c = CurveOnPage("x", Word.parse("a"), ONE_SIDED)
    assert c.cls.kind == CurveClass.ONE_SIDED
    with pytest.raises(ValueError):
        CurveOnPage("x", Word.parse("a"), ONE_SIDED, CurveClass(CurveClass.GENERIC))


# --- page stabilizations ---------------------------------------------------------


def test_page_split_boundary():
    p, e = page_split_boundary(standard_page(N(1, 1)))
    assert p.sig == N(1, 2)
    assert str(p.base_word) == f"c1 {e}^-1"
    assert p.boundary_words[-1] == Word.gen(e)


def test_page_add_crosscap():
    p, m = page_add_crosscap(standard_page(N(1, 1)))
    assert p.sig == N(2, 1)
    assert m in p.reversing
    with pytest.raises(ValueError):
        page_add_crosscap(standard_page(O(0, 2)))


def test_page_torus_sum():
    p, u, v = page_torus_sum(standard_page(N(1, 1)))
    assert p.sig == N(3, 1)
    assert len(free_rewrite(p)[0]) == 1 - p.sig.euler


@given(st.lists(st.sampled_from(["split", "crosscap", "torus"]), max_size=4))
def test_stabilized_pages_stay_free_of_the_right_rank(ops):
    p = standard_page(N(1, 1))
    for o in ops:
        if o == "split":
            p, _ = page_split_boundary(p)
        elif o == "crosscap":
            p, _ = page_add_crosscap(p)
        else:
            p, _, _ = page_torus_sum(p)
    basis, _ = free_rewrite(p)
    assert len(basis) == 1 - p.sig.euler
    assert all(w.generators() <= set(p.group.generators) for w in p.boundary_words)
