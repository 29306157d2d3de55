"""Degrees of freedom of 1D active imaging arrays under the Born model.

Monostatic and multistatic apertures observing a 1D scene segment:
discretized operators and their singular-value spectra, space-bandwidth
products, k-space coverage, Fresnel-zone formulas with effective-aperture
equivalence, and PSF resolution against the reciprocal-bandwidth benchmark.
"""

import os as _os

# APERTURE_DOF_THREADS caps BLAS/OpenMP parallelism; must be exported to the
# thread-pool env vars before numpy first loads, hence before any submodule.
_threads = _os.environ.get("APERTURE_DOF_THREADS")
if _threads:
    for _var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        _os.environ.setdefault(_var, _threads)
del _os

from .fresnel import (
    ApertureFunction,
    FresnelEquivalenceReport,
    effective_aperture,
    fresnel_dof,
    fresnel_equivalence_check,
    fresnel_kernel,
    sbp_g3_fresnel,
)
from .geometry import (
    Aperture,
    SceneSegment,
    WaveContext,
    path_length,
    viewing_angles,
)
from .kspace import (
    KVector,
    SpectralSet,
    bandwidth,
    mono_spectrum,
    multi_spectrum,
    project_onto_line,
    project_points_onto_line,
    scene_projection_angle,
)
from .operator import (
    MONOSTATIC,
    MULTISTATIC,
    ArrayLayout,
    DiscreteOperator,
    SvdSpectrum,
    build_operator,
    dof_knee,
    left_vectors,
    sigma_bar,
    sigma_bar_sq,
    svd,
)
from .recon import (
    ImageProfile,
    ResolutionCurve,
    UnresolvableProfileError,
    beamwidth_3db,
    psf,
    reconstruct_mf,
    reconstruct_pinv,
    resolution_sweep,
)
from .sbp import (
    SbpResult,
    compute_sbp,
    sbp_closed_form_g1,
    sbp_closed_form_g2,
    sbp_numeric,
    theta_heu,
    theta_max,
)

__version__ = "0.1.0"

__all__ = [
    "Aperture",
    "ApertureFunction",
    "ArrayLayout",
    "DiscreteOperator",
    "FresnelEquivalenceReport",
    "ImageProfile",
    "KVector",
    "MONOSTATIC",
    "MULTISTATIC",
    "ResolutionCurve",
    "SbpResult",
    "SceneSegment",
    "SpectralSet",
    "SvdSpectrum",
    "UnresolvableProfileError",
    "WaveContext",
    "bandwidth",
    "beamwidth_3db",
    "build_operator",
    "compute_sbp",
    "dof_knee",
    "effective_aperture",
    "fresnel_dof",
    "fresnel_equivalence_check",
    "fresnel_kernel",
    "left_vectors",
    "mono_spectrum",
    "multi_spectrum",
    "path_length",
    "project_onto_line",
    "project_points_onto_line",
    "psf",
    "reconstruct_mf",
    "reconstruct_pinv",
    "resolution_sweep",
    "sbp_closed_form_g1",
    "sbp_closed_form_g2",
    "sbp_g3_fresnel",
    "sbp_numeric",
    "scene_projection_angle",
    "sigma_bar",
    "sigma_bar_sq",
    "svd",
    "theta_heu",
    "theta_max",
    "viewing_angles",
]
