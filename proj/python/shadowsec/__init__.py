# SPDX-License-Identifier: Apache-2.0
"""Secrecy metrics for dual-hop multicast relaying over kappa-mu shadowed fading."""

from ._core import (
    INF,
    BudgetExceededError,
    ConfigError,
    DomainError,
    ExpansionStrategy,
    FadingParams,
    MetricResult,
    NetworkConfig,
    NumericalError,
    SeriesConfig,
    ShapeIntegralityError,
    bestrelay_cdf,
    db_to_linear,
    esmc,
    hop_ccdf,
    hop_pdf,
    pnsmc,
    preset,
    run_sweep,
    sample_hop,
    sopm,
)

__all__ = [
    "INF",
    "BudgetExceededError",
    "ConfigError",
    "DomainError",
    "ExpansionStrategy",
    "FadingParams",
    "MetricResult",
    "NetworkConfig",
    "NumericalError",
    "SeriesConfig",
    "ShapeIntegralityError",
    "bestrelay_cdf",
    "db_to_linear",
    "esmc",
    "hop_ccdf",
    "hop_pdf",
    "pnsmc",
    "preset",
    "run_sweep",
    "sample_hop",
    "sopm",
]

__version__ = "0.1.0"
