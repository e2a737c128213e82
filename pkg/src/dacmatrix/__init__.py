"""dacmatrix: fill discretionary access matrices from precedents by attribute analogy."""

from .engine import (
    AccessMatrix,
    CellDiff,
    ExplicitCell,
    ImplicitCell,
    UndefinedCell,
    allowed_rights,
    diff_matrices,
    explain_cell,
    influencers,
    interpolate,
    partial_interpolate,
    select_dominant,
    sequential_interpolate,
    summarize,
)
from .interpolator import AccessMatrixInterpolator
from .model import (
    AttributeFamily,
    AttributeSchema,
    Decision,
    EntityProfile,
    EquivalenceClass,
    PolicyUniverse,
    canonicalize_entities,
    coinciding_attributes,
    compare_keys,
    validate_schema,
)
from .policyfile import (
    PolicyDocument,
    PolicyError,
    PolicySettings,
    build_log,
    export_audit,
    parse_matrix,
    parse_policy,
    serialize_matrix,
    serialize_policy,
)
from .precedents import CollisionRecord, Outcome, Precedent, PrecedentLog

__version__ = "0.1.0"

__all__ = [
    "AccessMatrix",
    "AccessMatrixInterpolator",
    "AttributeFamily",
    "AttributeSchema",
    "CellDiff",
    "CollisionRecord",
    "Decision",
    "EntityProfile",
    "EquivalenceClass",
    "ExplicitCell",
    "ImplicitCell",
    "Outcome",
    "PolicyDocument",
    "PolicyError",
    "PolicySettings",
    "PolicyUniverse",
    "Precedent",
    "PrecedentLog",
    "UndefinedCell",
    "allowed_rights",
    "build_log",
    "canonicalize_entities",
    "coinciding_attributes",
    "compare_keys",
    "diff_matrices",
    "explain_cell",
    "export_audit",
    "influencers",
    "interpolate",
    "parse_matrix",
    "parse_policy",
    "partial_interpolate",
    "select_dominant",
    "sequential_interpolate",
    "serialize_matrix",
    "serialize_policy",
    "summarize",
    "validate_schema",
]
