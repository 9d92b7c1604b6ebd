"""gogkit: graphs of graphs, Stallings folding and finite covers of 2-complexes."""

from ._util import ValidationError, VerificationError
from .complexes import (
    Covering,
    FiniteQuotientHom,
    PresentationData,
    TwoComplex,
    abelianization,
    complex_isomorphic,
    cover_complex,
    presentation_complex,
    smith_diagonal,
    validate_hom,
)
from .constructions import (
    VerificationReport,
    artin_presentation,
    double_cover_gog,
    rewritten_presentation,
    theta_family,
    verify_paper_report,
    zn_hom,
)
from .gog import (
    CleanlinessReport,
    GraphOfGraphs,
    classify_cleanliness,
    cover_gog,
    gog_isomorphic,
    normalize_gog,
    pi1_presentation,
    total_space,
)
from .graphs import (
    GraphMorphism,
    SerreGraph,
    graph_euler_and_rank,
    graph_isomorphic,
    is_combinatorial_embedding,
    is_topological_embedding,
    rose,
    smooth_bivalent,
    subdivide_domain,
    theta_graph,
)
from .io import export_dot
from .stallings import (
    INFINITE,
    NotAFreeBasis,
    StallingsGraph,
    is_pi1_injective,
    membership,
    pi1_image,
    subgroup_coordinates,
    subgroup_graph,
    subgroup_index,
)
from .whitehead import Verdict, is_free_factor
from .words import Word, reduce, substitute

__version__ = "0.1.0"
