"""Bregman proximal gradient solvers for relatively smooth optimization.

The heavy lifting lives in the compiled extension ``bregman_opt._core``;
this package re-exports its surface:

- kernels: ``divergence``, ``kernel_value``, ``kernel_gradient``,
  ``hessian_quadratic_form``, ``local_ts_gain``, ``gain_bound``
- theta sequences: ``theta_explicit``, ``theta_next_root``,
  ``theta_next_gain_equality``, ``theta_next_gain_explicit``
- instances: ``gen_doptimal``, ``gen_poisson``, ``gen_relentropy``,
  ``dopt_from_libsvm``, ``load_libsvm``, ``load_instance``, ``Instance``
- solvers: ``solve`` (algorithms ``bpg``, ``bpg-ls``, ``abpg``, ``abpg-e``,
  ``abpg-g``, ``abda``; append ``-rs`` for the restarted variants)
- post-processing: ``geo_mean_gain``, ``fit_rate_slope``
"""

from ._core import (  # noqa: F401
    AdaptationError,
    ConfigError,
    DegenerateStepError,
    DomainError,
    Instance,
    ParseError,
    UnboundedSubproblemError,
    __version__,
    divergence,
    dopt_from_libsvm,
    fit_rate_slope,
    gain_bound,
    gen_doptimal,
    gen_poisson,
    gen_relentropy,
    geo_mean_gain,
    hessian_quadratic_form,
    kernel_gradient,
    kernel_value,
    load_instance,
    load_libsvm,
    local_ts_gain,
    solve,
    theta_explicit,
    theta_next_gain_equality,
    theta_next_gain_explicit,
    theta_next_root,
)

__all__ = [
    "AdaptationError",
    "ConfigError",
    "DegenerateStepError",
    "DomainError",
    "Instance",
    "ParseError",
    "UnboundedSubproblemError",
    "__version__",
    "divergence",
    "dopt_from_libsvm",
    "fit_rate_slope",
    "gain_bound",
    "gen_doptimal",
    "gen_poisson",
    "gen_relentropy",
    "geo_mean_gain",
    "hessian_quadratic_form",
    "kernel_gradient",
    "kernel_value",
    "load_instance",
    "load_libsvm",
    "local_ts_gain",
    "solve",
    "theta_explicit",
    "theta_next_gain_equality",
    "theta_next_gain_explicit",
    "theta_next_root",
]
