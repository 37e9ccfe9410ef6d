"""Time-to-space correlation maps of type-I PDC biphotons."""

from ._core import (
    Config,
    ConfigError,
    DomainError,
    IoError,
    compare,
    correlation_map,
    dispersion,
    gauss_map,
    gaussian_params,
    passbands,
    phi_map,
    run,
    sigma_tau,
)

__all__ = [
    "Config",
    "ConfigError",
    "DomainError",
    "IoError",
    "compare",
    "correlation_map",
    "dispersion",
    "gauss_map",
    "gaussian_params",
    "passbands",
    "phi_map",
    "run",
    "sigma_tau",
]
