"""Heterogeneous distributed storage toolkit.

Models (n, k) storage systems with per-node capacities and surviving-set
repair, computes the exact file-size bound and optimality parameters over
the rationals, constructs verified codes over GF(q) from qualifying
graphs, and certifies reconstruction, repair, and bound achievement by
exhaustive desk-scale checking.
"""

from .bound import (BoundReport, OptimalityReport, beta_min_saturating,
                    beta_min_search, check_optimality, cut_value,
                    fundamental_bound, min_total_storage, oracle_bound)
from .construct import Code, GraphSpec, construct_code, derive_dss, validate_graph
from .errors import (ConstructionFailedError, ConstructionImpossibleError,
                     HetrcError, InfeasibleError, UnsupportedParameterError,
                     ValidationError)
from .field import (Field, rank, solve_in_span, span_contains)
from .model import (DssSpec, enumerate_full_sequences, enumerate_prefixes,
                    full_sequence_count, prefix_count, validate_dss)
from .sim import SimEvent, SimTrace, run_simulation
from .verify import (BoundAchievementVerdict, HelperDownload, LocalVerdict,
                     ReconstructionVerdict, RepairPlan, RepairabilityVerdict,
                     VerificationReport, execute_plan, find_repair_plan,
                     verify_bound_achievement, verify_code, verify_local,
                     verify_reconstruction, verify_repairability)

__version__ = "0.1.0"

__all__ = [
    "BoundAchievementVerdict", "BoundReport", "Code",
    "ConstructionFailedError", "ConstructionImpossibleError", "DssSpec",
    "Field", "GraphSpec", "HelperDownload", "HetrcError", "InfeasibleError",
    "LocalVerdict", "OptimalityReport", "ReconstructionVerdict", "RepairPlan",
    "RepairabilityVerdict", "SimEvent", "SimTrace",
    "UnsupportedParameterError", "ValidationError", "VerificationReport",
    "beta_min_saturating", "beta_min_search", "check_optimality",
    "construct_code", "cut_value", "derive_dss", "enumerate_full_sequences",
    "enumerate_prefixes", "execute_plan", "find_repair_plan",
    "full_sequence_count", "fundamental_bound", "min_total_storage",
    "oracle_bound", "prefix_count", "rank", "run_simulation",
    "solve_in_span", "span_contains", "validate_dss", "validate_graph",
    "verify_bound_achievement", "verify_code", "verify_local",
    "verify_reconstruction", "verify_repairability",
]
