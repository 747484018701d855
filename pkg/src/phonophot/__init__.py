"""Harmonic lattices, a discrete electromagnetic cell net, oscillator
quantization, and photon-core kinematics, with oracle-checked scenario runs."""

from .cellnet import CellNetField, CellNetSpec
from .config import ScenarioConfig, parse_config
from .errors import (
    ConfigError,
    IncommensurateError,
    NumericFailure,
    ShapeError,
    SpecError,
    StabilityError,
    SymmetryError,
    ZeroModeError,
)
from .kinematics import PhotonCore, hop_schedule, lifetime_report
from .lattice import Lattice, LatticeSpec, LatticeState, build_lattice
from .modes import QuantizationConstants, decompose, reconstruct
from .report import RunReport, emit
from .runner import run

__version__ = "0.1.0"

__all__ = [
    "CellNetField",
    "CellNetSpec",
    "ConfigError",
    "IncommensurateError",
    "Lattice",
    "LatticeSpec",
    "LatticeState",
    "NumericFailure",
    "PhotonCore",
    "QuantizationConstants",
    "RunReport",
    "ScenarioConfig",
    "ShapeError",
    "SpecError",
    "StabilityError",
    "SymmetryError",
    "ZeroModeError",
    "build_lattice",
    "decompose",
    "emit",
    "hop_schedule",
    "lifetime_report",
    "parse_config",
    "reconstruct",
    "run",
]
