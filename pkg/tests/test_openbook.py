import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from nofib.groups import AbelianGroup, Word
from nofib.openbook import (
    MappingClassAction,
    OpenBook,
    PlumbingSpec,
    binding_bound_certificate,
    binding_lower_bound_genus_one,
    boundary_twist,
    catalog_twist,
    compose_monodromy,
    hopf_band_openbook,
    hopf_stabilize,
    identity_action,
    iterated_sum,
    klein_mcg_elements,
    klein_mcg_reduce,
    murasugi_sum,
    pair_twist,
    recognize_total_space,
    s1xrp2_openbook,
    total_space_h1,
    total_space_pi1,
    trivial_openbook,
    validate_action,
)
from nofib.surfaces import SurfaceSig, free_rewrite, standard_page

from oracles import abelian_invariants

N = SurfaceSig.nonorientable
S1xRP2_H1 = AbelianGroup(1, (2,))


# --- the genus-one open book -----------------------------------------------------


def test_monodromy_images_on_the_holed_projective_plane():
    m = s1xrp2_openbook("R", "R").monodromy
    assert str(m.images["a"]) == "c1 a c1^-1"
    assert str(m.transports[1]) == "c1 c2^-1"
    assert str(s1xrp2_openbook("R", "L").monodromy.transports[1]) == "c1 c2"


@pytest.mark.parametrize("h1", "RL")
@pytest.mark.parametrize("h2", "RL")
def test_total_space_is_independent_of_handedness(h1, h2):
    ob = s1xrp2_openbook(h1, h2)
    assert validate_action(ob.page, ob.monodromy).ok
    assert total_space_h1(ob) == S1xRP2_H1
    assert recognize_total_space(ob) == "Z+Z/2"


def test_simplified_presentation():
    g = total_space_pi1(s1xrp2_openbook("R", "R"))
    assert str(g) == "< a c1 | a^2 c1^-2, a c1 a^-1 c1^-1 >"


def test_trivial_open_books():
    assert total_space_h1(trivial_openbook(N(1, 1))) == AbelianGroup(1)
    # identity monodromy on a page with free group of rank r gives #_r S^2~S^1
    assert total_space_h1(trivial_openbook(N(2, 1))) == AbelianGroup(2)
    assert total_space_h1(hopf_band_openbook()) == AbelianGroup(0)


# --- actions ------------------------------------------------------------------


def test_invalid_action_is_reported():
    page = standard_page(N(1, 1))
    rep = validate_action(page, MappingClassAction(page, {"a": Word.parse("a^2")}))
    assert not rep.ok
    assert any("determinant 2" in f for f in rep.failures)
    with pytest.raises(ValueError):
        total_space_pi1(OpenBook(page, MappingClassAction(page, {"a": Word.parse("a^2")})))


def test_action_rejects_foreign_data():
    page = standard_page(N(1, 2))
    with pytest.raises(ValueError):
        MappingClassAction(page, {"z": Word.gen("a")})
    with pytest.raises(ValueError):
        MappingClassAction(page, {}, {0: Word.gen("a")})


def test_compose_order_is_first_applied_first():
    page = standard_page(N(2, 1))
    t1 = pair_twist(page, "a1", "a2", "R")
    t2 = boundary_twist(page, 0, "R")
    both = compose_monodromy([t1, t2])
    for g in page.group.generators:
        assert both.images[g] == t2.apply(t1.apply(Word.gen(g)))
    assert both.twist_word == t1.twist_word + t2.twist_word


def test_compose_empty_needs_page():
    with pytest.raises(ValueError):
        compose_monodromy([])
    page = standard_page(N(1, 1))
    assert compose_monodromy([], page) == identity_action(page)


def test_transport_cocycle():
    page = standard_page(N(1, 3))
    t = [boundary_twist(page, j, h) for j, h in [(0, "R"), (1, "L"), (2, "R"), (0, "L")]]
    c = compose_monodromy(t)
    acc = t[0]
    for x in t[1:]:
        acc = MappingClassAction(
            page,
            {g: x.apply(w) for g, w in acc.images.items()},
            {j: x.apply(w) * x.transports[j] for j, w in acc.transports.items()},
        )
    assert c.images == acc.images and c.transports == acc.transports


def _free_images(page, act):
    basis, subst = free_rewrite(page)
    return {g: act.apply(Word.gen(g)).substitute(subst) for g in basis}


def test_pair_twist_inverse():
    page = standard_page(N(2, 1))
    both = compose_monodromy([pair_twist(page, "a1", "a2", "R"), pair_twist(page, "a1", "a2", "L")])
    assert _free_images(page, both) == _free_images(page, identity_action(page))


@pytest.mark.parametrize("hand", "RL")
def test_pair_twist_fixes_its_curve_and_the_enclosing_boundary(hand):
    page = standard_page(N(2, 0))
    t = pair_twist(page, "a1", "a2", hand)
    assert t.apply(Word.parse("a1 a2")) == Word.parse("a1 a2")
    assert t.apply(Word.parse("a1^2 a2^2")) == Word.parse("a1^2 a2^2")


@pytest.mark.parametrize("cid", ["boundary:0", "boundary:1", "pair:1", "pair:a1,a2"])
@pytest.mark.parametrize("hand", "RL")
def test_catalog_twists_are_valid(cid, hand):
    page = standard_page(N(2, 2))
    assert validate_action(page, catalog_twist(page, cid, hand)).ok


def test_pair_twist_needs_page_generators():
    with pytest.raises(ValueError):
        catalog_twist(standard_page(N(2, 2)), "pair:q,r")


def test_unknown_catalog_id():
    with pytest.raises(ValueError):
        catalog_twist(standard_page(N(1, 1)), "spiral:3")


# --- plumbing and stabilization -------------------------------------------------


def test_plumbing_two_copies():
    ob = murasugi_sum(s1xrp2_openbook(), s1xrp2_openbook())
    assert ob.page.sig == N(1, 4)
    assert len(ob.monodromy.twist_word) == 4
    assert validate_action(ob.page, ob.monodromy).ok


@pytest.mark.parametrize("n", range(1, 7))
def test_iterated_sums(n):
    ob = iterated_sum(s1xrp2_openbook(), n)
    assert ob.page.sig == N(1, 2 * n)
    assert ob.page.sig.euler == 1 - 2 * n
    assert len(ob.monodromy.twist_word) == 2 * n
    assert all(c.startswith("boundary:") for c, _ in ob.monodromy.twist_word)
    # oracle: H1 of a connected sum is the direct sum of the pieces
    assert total_space_h1(ob) == AbelianGroup(n, (2,) * n)


def test_plumbing_renames_generators_apart():
    ob = murasugi_sum(s1xrp2_openbook(), s1xrp2_openbook())
    gens = ob.page.group.generators
    assert len(set(gens)) == len(gens) == 6
    assert "a_1" in gens


def test_plumbing_descriptor_checks():
    a = s1xrp2_openbook()
    with pytest.raises(ValueError):
        murasugi_sum(a, a, PlumbingSpec(boundary=3))
    with pytest.raises(ValueError):
        murasugi_sum(a, a, PlumbingSpec(arc_a=5))
    assert murasugi_sum(a, a, PlumbingSpec(arc_a=1, arc_b=0)).page.sig == N(1, 4)


def test_plumbing_the_hopf_band_is_stabilization():
    ob = trivial_openbook(N(1, 1))
    s = murasugi_sum(ob, hopf_band_openbook())
    assert s.page.sig.euler == ob.page.sig.euler - 1
    assert total_space_h1(s) == total_space_h1(ob)
    assert s.page == hopf_stabilize(ob, "boundary-split").page


@pytest.mark.parametrize("band,sig,new", [("boundary-split", N(1, 2), 1), ("crosscap", N(2, 1), 1), ("torus", N(3, 1), 2)])
def test_stabilizing_the_mobius_band(band, sig, new):
    ob = trivial_openbook(N(1, 1))
    s = hopf_stabilize(ob, band, "R")
    assert s.page.sig == sig
    assert len(s.monodromy.twist_word) == new
    assert validate_action(s.page, s.monodromy).ok
    assert total_space_h1(s) == AbelianGroup(1)


def test_crosscap_band_needs_a_nonorientable_page():
    with pytest.raises(ValueError):
        hopf_stabilize(hopf_band_openbook(), "crosscap")
    with pytest.raises(ValueError):
        hopf_stabilize(trivial_openbook(N(1, 1)), "ribbon")


@st.composite
def catalog_openbooks(draw):
    g = draw(st.integers(1, 3))
    b = draw(st.integers(1, 3))
    page = standard_page(N(g, b))
    ids = [f"boundary:{j}" for j in range(b)]
    if g >= 2:
        ids.append("pair:1")
    twists = draw(st.lists(st.tuples(st.sampled_from(ids), st.sampled_from("RL")), max_size=4))
    return OpenBook.from_twists(page, twists)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(catalog_openbooks(), st.sampled_from(["boundary-split", "crosscap", "torus"]), st.sampled_from("RL"))
def test_hopf_stabilization_preserves_h1(ob, band, hand):
    s = hopf_stabilize(ob, band, hand)
    assert validate_action(s.page, s.monodromy).ok
    assert s.page.sig.euler == ob.page.sig.euler - (2 if band == "torus" else 1)
    assert total_space_h1(s) == total_space_h1(ob)


@settings(max_examples=30, deadline=None)
@given(catalog_openbooks(), catalog_openbooks())
def test_plumbing_euler_arithmetic(a, b):
    s = murasugi_sum(a, b)
    assert s.page.sig.euler == a.page.sig.euler + b.page.sig.euler - 1
    assert s.monodromy.in_twist_subgroup


def _direct_sum(*gs):
    # oracle: invariant factors of the block-diagonal relation matrix
    rows, n = [], 0
    for g in gs:
        n += g.rank + len(g.torsion)
    k = 0
    for g in gs:
        for t in g.torsion:
            row = [0] * n
            row[k] = t
            rows.append(row)
            k += 1
        k += g.rank
    rank, torsion = abelian_invariants(n, rows)
    return AbelianGroup(rank, tuple(torsion))


@settings(max_examples=30, deadline=None)
@given(catalog_openbooks(), catalog_openbooks())
def test_plumbing_h1_is_a_direct_sum(a, b):
    # with boundary counts adding, the total space is the connected sum
    assert total_space_h1(murasugi_sum(a, b)) == _direct_sum(total_space_h1(a), total_space_h1(b))


# --- binding bound and the Klein bottle ---------------------------------------------


@pytest.mark.parametrize("n", range(1, 11))
def test_binding_bound(n):
    assert binding_lower_bound_genus_one(n) == 2 * n
    k, rhs = binding_bound_certificate(n)
    assert 2 - 2 * k <= rhs < 2 - 2 * (k - 1)


def test_binding_bound_rejects_nonpositive():
    with pytest.raises(ValueError):
        binding_lower_bound_genus_one(0)


def test_binding_bound_is_attained():
    assert iterated_sum(s1xrp2_openbook(), 5).page.sig.boundary == 10 == binding_lower_bound_genus_one(5)


def test_klein_mapping_class_group():
    assert klein_mcg_reduce(["t", "t"]) == (0, 0)
    assert klein_mcg_reduce(["t_alpha", "Y", "t_alpha"]) == (0, 1)
    assert klein_mcg_elements() == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(ValueError):
        klein_mcg_reduce(["q"])
