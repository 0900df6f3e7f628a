"""Exact Markov chains for rational maps on the Berkovich projective line over Puiseux series."""

from .augment import AugmentationResult, AugmentConfig, stabilize
from .berkovich import (
    INFINITY,
    UP,
    Direction,
    OpenDisk,
    TypeIIPoint,
    TypeIPoint,
    down,
    gauss_point,
    join,
)
from .cycles import AttractingCycle, ClosedDisk, find_attracting_cycles, orbit_with_preperiodicity
from .dynamics import (
    BerkMap,
    TangentMap,
    count_preimages_in_simple_domain,
    disk_count,
    image_disk,
    image_of_point,
    local_degree,
    tangent_image,
)
from .errors import (
    BerkChainError,
    ExtensionRequired,
    HeightBudgetExceeded,
    Inconclusive,
    NotStable,
    NoVerdict,
    OracleRefused,
    ParseError,
    TotallyInvariantVertex,
)
from .expr import parse_ground, parse_rational_function
from .markov import (
    StationaryResult,
    TransitionMatrix,
    brute_force_pullback,
    build_matrix,
    multiplicity,
    power,
    stationary,
)
from .numberfield import QQF, NumberField
from .partition import (
    BoundaryClass,
    DomainClass,
    StabilityReport,
    StateSpace,
    check_stability,
    classify_boundary,
    classify_domain,
    enumerate_states,
)
from .problem import ProblemSpec, parse_spec, serialize
from .puiseux import puiseux_roots
from .series import GroundElement, newton_polygon
from .vertexset import DiskState, InnerState, VertexSet, VertexState, locate

__version__ = "0.1.0"
