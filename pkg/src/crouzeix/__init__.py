"""Local minimizers of the Crouzeix ratio ||p||_{W(A)} / ||p(A)||_2.

Polynomial/matrix parametrization, field-of-values boundaries, the ratio
and its gradient, nonsmooth BFGS, a stationarity certificate and a
random-restart experiment harness.
"""

from .bfgs import OptimizerOptions, RunTrace, minimize, weak_wolfe_linesearch
from .fov import (
    AttainmentSet,
    BoundaryApproximant,
    BoundaryPoint,
    build_boundary,
    local_maximizers,
    sup_abs_poly,
    z_eps_set,
)
from .harness import (
    RunRecord,
    SweepConfig,
    SweepResult,
    classify,
    detect_plateaus,
    heavy_tail_sample,
    random_init,
    run_single,
    run_sweep,
)
from .polymat import (
    CrabbDisk,
    FieldMode,
    IceCreamCone,
    Layout,
    Polynomial,
    StructuredMatrixPoint,
    assemble_reference,
    crabb_matrix,
    eval_poly,
    eval_poly_matrix,
)
from .ratio import RatioEvaluation, crouzeix_ratio, evaluate_point, grad_ratio
from .stationarity import StationarityReport, min_norm_point, stationarity_report

__version__ = "0.1.0"
