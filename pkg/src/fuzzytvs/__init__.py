"""Fuzzy topological vector spaces on sampled finite-dimensional domains."""
from .algebra import (
    AlphaCut,
    add,
    alpha_cut,
    evaluate,
    height,
    image,
    join,
    meet,
    preimage,
    product,
    scalar_mul,
    translate,
)
from .domain import AffineMap, Domain
from .fuzzyset import (
    FuzzySet,
    ball,
    box,
    constant,
    from_function,
    grid_sample,
    halfspace,
    indicator,
    interval,
    singleton,
    triangular,
    zero,
)
from .properties import (
    absorbs,
    is_absorbing,
    is_balanced,
    is_convex,
    is_lsc,
    vanishing_dilation_check,
)
from .reals import (
    CrispNorm,
    FelbinNorm,
    FuzzyReal,
    StarNorm,
    crisp_norm,
    euclidean_felbin_norm,
    felbin_axioms_check,
    star_norm_on_K,
    validate_fuzzy_real,
)
from .report import CheckReport
from .topology import (
    BaseNeighborhood,
    KatsarasNorm,
    alpha_sphere,
    base_equivalence_check,
    base_neighborhood,
    hausdorff_check,
    is_bounded,
    is_linearly_open,
    is_neighborhood_of,
    katsaras_axioms_check,
    katsaras_from_felbin,
    topology_axioms_check,
)
from .weak import (
    DecomposeResult,
    DualPairScenario,
    LinearFunctional,
    WeakNeighborhood,
    adjoint,
    decompose_or_witness,
    hausdorff_witness,
    net_converges_weakly,
    product_topology_check,
    weak_base_neighborhood,
    weak_eval,
    weak_seminorm,
    weak_seminorm_check,
    weakly_bounded_check,
    weakly_continuous_check,
    weakly_lsc_check,
)

__version__ = "0.1.0"
