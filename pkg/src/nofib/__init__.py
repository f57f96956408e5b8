"""Exact invariants of open books, Lefschetz fibrations and trisections on nonorientable manifolds."""

from .groups import AbelianGroup, FPGroup, Word, abelianize, recognize, smith_normal_form, tietze_simplify
from .lefschetz import (
    FramedLinkDiagram,
    LefschetzFibration,
    LinkComponent,
    Crossing,
    VanishingCycle,
    boundary_openbook,
    fiber_sum,
    harer_compile,
    klein_fibration,
    lf_euler_char,
    lf_h1_over_sphere,
    pencil_to_fibration,
    reduce_trivial_cycles,
    relative_minimality,
    section_fiber_neighborhood,
)
from .openbook import (
    MappingClassAction,
    OpenBook,
    binding_lower_bound_genus_one,
    compose_monodromy,
    hopf_stabilize,
    klein_mcg_reduce,
    murasugi_sum,
    s1xrp2_openbook,
    total_space_h1,
    total_space_pi1,
    validate_action,
)
from .surfaces import CurveClass, CurveOnPage, PagePresentation, SurfaceSig, classify_curve, standard_page
from .trisect import (
    TrisectionDiagram,
    closed_pipeline,
    double_diagram,
    glue_diagrams,
    validate_diagram,
    wrinkle_compile,
)

__version__ = "0.1.0"
