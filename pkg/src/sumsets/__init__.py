"""Exact-arithmetic engine for sumsets of dilates and linear-transform sums.

Point sets over Q^d with exact sumset/dilate/linear-image primitives,
inequality checkers returning slack certificates, parallel-line structure
decompositions, named extremal families, and an exhaustive minimum-sumset
search oracle with a compiled hot kernel.
"""

from .bounds import (
    BoundReport,
    HypothesisViolation,
    InequalityViolation,
    KConstant,
    check_dilate_main,
    check_doubling_chain,
    check_grid_bound,
    check_gs,
    check_lin_product,
    check_lines_bound,
    check_onedim_dilate,
    check_ruzsa_dim,
    check_ruzsa_sum_diff,
    check_ruzsa_triangle,
    check_transform_main,
    check_trivial_lower,
    probe_bukh_conjecture,
    run_batch,
)
from .core import (
    DegenerateDilation,
    DimensionMismatch,
    EmptyOperand,
    LinearMap,
    PointSet,
    Scalar,
    affine_dim,
    apply_map,
    as_scalar,
    difference_set,
    dilate,
    dilate_sum,
    has_no_real_eigenvalue,
    point,
    sumset,
    transform_sum,
)
from .generators import (
    RNG_NAME,
    ImproperProgression,
    ProperProgression,
    SplitMix64,
    gen_an,
    gen_ap,
    gen_bn,
    gen_cn,
    gen_proper_progression,
    gen_random_box,
)
from .io import ParseError, dumps_points, loads_points, read_points, write_points
from .kernels import HAVE_COMPILED
from .search import (
    BudgetExceeded,
    DilateSumObjective,
    InfeasibleSpec,
    MultiMapObjective,
    ProfileRow,
    SearchResult,
    SearchSpec,
    TransformObjective,
    canonicalize,
    minimize,
    slack_profile,
)
from .structure import (
    Direction,
    Fiber,
    GridProfile,
    LineDecomposition,
    best_direction,
    decomposition_to_text,
    fibers_along,
    grid_profile,
    grid_profile_to_text,
    sqrt_cutoff_decompose,
    verify_decomposition,
)

__version__ = "0.1.0"
