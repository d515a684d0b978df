"""Combinatorics of multiscale differentials on level graphs: validation,
semistable modification, level-by-level contraction analysis and the global
residue condition, in exact rational arithmetic."""

from .contract import (
    ContractionResult,
    Obstruction,
    SingularityRecord,
    TwistData,
    check_contractibility,
    contract,
    test_configuration,
    twist_multiplicities,
    twisted_degree,
    twisted_degrees,
)
from .errors import LevelContractError
from .levelgraph import (
    Edge,
    LevelGraph,
    Marking,
    ValidationReport,
    Vertex,
    arithmetic_genus,
    components_above,
    signature,
    validate,
)
from .modify import (
    ModificationMode,
    ModificationReport,
    clear_denominators,
    expand_marked_zeros,
    semistable_modification,
    subdivide_long_edges,
)
from .residues import (
    ComplexRational,
    LinearSystem,
    ResidueAssignment,
    ResidueReport,
    check_grc,
    check_residue_theorem,
    check_residues,
    residue_solution_space,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexRational",
    "ContractionResult",
    "Edge",
    "LevelContractError",
    "LevelGraph",
    "LinearSystem",
    "Marking",
    "ModificationMode",
    "ModificationReport",
    "Obstruction",
    "ResidueAssignment",
    "ResidueReport",
    "SingularityRecord",
    "TwistData",
    "ValidationReport",
    "Vertex",
    "arithmetic_genus",
    "check_contractibility",
    "check_grc",
    "check_residue_theorem",
    "check_residues",
    "clear_denominators",
    "components_above",
    "contract",
    "expand_marked_zeros",
    "residue_solution_space",
    "semistable_modification",
    "signature",
    "subdivide_long_edges",
    "test_configuration",
    "twist_multiplicities",
    "twisted_degree",
    "twisted_degrees",
    "validate",
]
