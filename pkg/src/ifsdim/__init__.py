"""Hausdorff dimension, conformal measures and convergence diagnostics for
contracting map systems on the line."""

from . import cli, config, dimension, measures, pressure, symbolic, systems, transfer

__version__ = "0.1.0"

__all__ = [
    "cli",
    "config",
    "dimension",
    "measures",
    "pressure",
    "symbolic",
    "systems",
    "transfer",
    "__version__",
]
