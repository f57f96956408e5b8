# open books on S^1 x RP^2 and its connected sums

from nofib.openbook import *
from nofib.surfaces import SurfaceSig

ob = s1xrp2_openbook("R", "L")   # page: Mobius band with one hole
print(ob.page.sig)                # nonorientable genus=1 boundary=2
print(ob.monodromy.twist_word)    # one twist per boundary component
print(total_space_pi1(ob))        # simplified presentation
print(total_space_h1(ob))         # rank=1 torsion=[2]
print(recognize_total_space(ob))  # Z+Z/2

# handedness does not show up in the invariants
for h1 in "RL":
    for h2 in "RL":
        print(h1, h2, total_space_h1(s1xrp2_openbook(h1, h2)))

# plumbing n copies; the page keeps genus one
for n in range(1, 5):
    s = iterated_sum(s1xrp2_openbook(), n)
    print(n, s.page.sig.boundary, binding_lower_bound_genus_one(n), total_space_h1(s))

# stabilizing never changes H1
m = trivial_openbook(SurfaceSig.nonorientable(1, 1))
for band in ("boundary-split", "crosscap", "torus"):
    st = hopf_stabilize(m, band)
    print(band, st.page.sig, total_space_h1(st))

klein_mcg_elements()               # [(0, 0), (0, 1), (1, 0), (1, 1)]
print(klein_mcg_reduce(["t_alpha", "t_alpha"]))  # (0, 0)
