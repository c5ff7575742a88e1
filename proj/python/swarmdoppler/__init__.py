"""Drone-swarm micro-Doppler second-order statistics, simulator and estimators."""

from ._core import *  # noqa: F401,F403
from ._core import ConfigError, DomainError, NumericError, ResourceError, ValidationError  # noqa: F401

__version__ = "0.1.0"
