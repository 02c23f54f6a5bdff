"""Dynamic top-k queries over uncertain x-tuple relations."""

from .index import AuditError, Node, TopKIndex, TopKResult, merge_node
from .model import (
    MAX_ALTERNATIVES,
    DuplicateId,
    InvalidScore,
    ProbabilityOutOfRange,
    TooManyAlternatives,
    UncertainTuple,
    UnknownId,
    ValidationError,
    XRelation,
    XTuple,
    XTupleOverflow,
    score_position,
    validate_insert,
)
from .rankmath import (
    DEFAULT_ALPHA,
    CorrelationPresent,
    DomainError,
    LeafCoefficients,
    coefficients,
    hat_p,
    leaf_coefficients,
    rank_score,
    rank_score_dp,
    rank_scores,
)

__version__ = "0.1.0"
