"""Coherent frequency diverse array (C-FDA) radar simulation with PA, MIMO and FDA-MIMO baselines."""

__version__ = "0.1.0"

from .scene import C, PointEmitter, Scenario  # noqa: E402
from .steering import Architecture, Snapshot, SteeringModel  # noqa: E402

__all__ = ["C", "PointEmitter", "Scenario", "Architecture", "Snapshot", "SteeringModel", "__version__"]
