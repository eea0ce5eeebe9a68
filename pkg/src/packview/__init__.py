"""
packview: expanding, interfering and reflecting Gaussian matter-wave packets.

Modules
-------
core      parameter, grid and field types; quadrature norm
analytic  closed-form packets, two-packet interference, image constructions
spectral  infinite-well eigenbasis, autocorrelation, time scales
oracle    numerical Schroedinger propagators used as ground truth
analysis  fringe spacing / visibility and revival detection
cli       scenario runner (``packview run|validate|timescales``)
"""

from .core import (
    PacketParams,
    PhysConsts,
    SpatialGrid,
    WaveField,
    WaveField2D,
    natural_units,
    norm,
)
from .errors import (
    ConfigError,
    DegenerateSuperposition,
    DomainError,
    InsufficientBasis,
    InvalidField,
    NoFringes,
    TimeDomainError,
    UnstableRun,
)

__version__ = "0.1.0"
