"""Driver-node counts for networked linear systems with heterogeneous
individual dynamics: graph ensembles, mixed state-matrix assembly,
finite-field generic rank, and exact-controllability driver counts."""

from .control import (
    DriverResult,
    nd_ect_numeric,
    nd_ect_symmetric,
    nd_et,
    nd_oracle,
    nd_sct_matching,
)
from .dynamics import (
    Assignment,
    StateMatrix,
    UnitType,
    assemble,
    assign_types,
    delta,
    densities_on_simplex,
    make_unit_type,
)
from .netgen import GraphSpec, Topology, degree_stats, generate_er, generate_sf
from .rank import generic_rank, rank_exact, rank_ff, rank_fp

__all__ = [
    "Assignment",
    "DriverResult",
    "GraphSpec",
    "StateMatrix",
    "Topology",
    "UnitType",
    "assemble",
    "assign_types",
    "degree_stats",
    "delta",
    "densities_on_simplex",
    "generate_er",
    "generate_sf",
    "generic_rank",
    "make_unit_type",
    "nd_ect_numeric",
    "nd_ect_symmetric",
    "nd_et",
    "nd_oracle",
    "nd_sct_matching",
    "rank_exact",
    "rank_ff",
    "rank_fp",
]

__version__ = "0.1.0"
