"""Tight frames of anisotropic curvelets with cartoon-image benchmarks."""

from .analysis import (
    HypercubeFamily,
    WedgeEnergyTable,
    apriori_bound_check,
    copy_of_lp_check,
    hypercube_family,
    radial_slice_energy,
    straight_edge_image,
    wedge_energy_table,
)
from .approx import (
    ErrorCurve,
    RateReport,
    count_above,
    nterm_error_curve,
    per_scale_weak_norms,
    rate_fit,
    threshold_top_n,
    weak_lp_norm,
)
from .cartoon import (
    CartoonSpec,
    SmoothField,
    StarDomain,
    binary_disk,
    boundary_points,
    holder_seminorm,
    random_cartoon,
    random_star_domain,
    rasterize,
)
from .frame import (
    CalderonError,
    Frame,
    FrameGeometry,
    FrameParams,
    WedgeIndex,
    WindowTables,
    angular_window,
    build_frame,
    build_geometry,
    build_windows,
    radial_window,
    smooth_step,
)
from .transform import (
    CoefficientSet,
    analyze,
    atom,
    coarse_atom_direct,
    forward_spectrum,
    synthesize,
    wedge_extract,
    wedge_to_coeffs,
)

__version__ = "0.1.0"
