"""Scale-space significance analysis for circular data.

Kernel density and circular-covariate local linear regression with
bootstrap-t confidence bands for their derivatives, assembled into a
colored (angle x smoothing level) significance map with peak and trough
detection.
"""

from ._backend import BACKEND
from .density import CircularSample, density_deriv, density_deriv_sd, density_estimate
from .inference import (
    BootstrapConfig,
    CellState,
    ConfidenceBand,
    bootstrap_t_band,
    classify,
    substream,
)
from .kernels import bessel_i0_scaled, vm_kernel, vm_kernel_deriv, wrap
from .regression import CircLinearSample, LocalFit, deriv_weights, loclin_fit
from .render import RenderSpec, render_svg
from .simgen import (
    MixtureSpec,
    RegressionModel,
    mixture_density,
    regression_scenario,
    sample_mixture,
    sample_regression,
    scenario,
    scenario_names,
)
from .sizer import (
    RingFeatures,
    SizerMap,
    SmoothingGrid,
    build_map,
    default_nu_grid,
    detect_all_features,
    detect_features,
    ess,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BootstrapConfig",
    "CellState",
    "CircLinearSample",
    "CircularSample",
    "ConfidenceBand",
    "LocalFit",
    "MixtureSpec",
    "RegressionModel",
    "RenderSpec",
    "RingFeatures",
    "SizerMap",
    "SmoothingGrid",
    "bessel_i0_scaled",
    "bootstrap_t_band",
    "build_map",
    "classify",
    "default_nu_grid",
    "density_deriv",
    "density_deriv_sd",
    "density_estimate",
    "deriv_weights",
    "detect_all_features",
    "detect_features",
    "ess",
    "loclin_fit",
    "mixture_density",
    "regression_scenario",
    "render_svg",
    "sample_mixture",
    "sample_regression",
    "scenario",
    "scenario_names",
    "substream",
    "vm_kernel",
    "vm_kernel_deriv",
    "wrap",
]
