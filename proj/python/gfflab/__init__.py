"""Random-walk local time and DGFF laboratory on wired lattice domains."""

from ._gfflab import (
    ContinuumDomain,
    GreenOperator,
    LocalTimeProfile,
    MuMeasure,
    PotentialKernel,
    ScaleParams,
    WiredDomain,
    avoided_first_moment,
    avoided_set,
    c0,
    conformal_radius,
    continuum_green_disc,
    cover_time,
    discretize,
    exp_moment,
    g,
    green_via_kernel,
    kac_moment,
    ks_two_sample,
    run_experiment,
    sample_field,
    sample_local_time,
    scale_params,
    square_domain,
    validate,
)

__all__ = [
    "ContinuumDomain",
    "GreenOperator",
    "LocalTimeProfile",
    "MuMeasure",
    "PotentialKernel",
    "ScaleParams",
    "WiredDomain",
    "avoided_first_moment",
    "avoided_set",
    "c0",
    "conformal_radius",
    "continuum_green_disc",
    "cover_time",
    "discretize",
    "exp_moment",
    "g",
    "green_via_kernel",
    "kac_moment",
    "ks_two_sample",
    "run_experiment",
    "sample_field",
    "sample_local_time",
    "scale_params",
    "square_domain",
    "validate",
]

__version__ = "0.1.0"
