"""Positive granular association rule mining on many-to-many
entity-relationship systems."""
from .core import (
    AttributeSchema,
    BinaryRelation,
    DescriptorError,
    GranularError,
    Granule,
    GranuleDescriptor,
    InformationSystem,
    Kind,
    Mmer,
    SchemaError,
    Thresholds,
    UndefinedRatioError,
    block_of,
    granule,
    inverse_neighborhood,
    is_positive,
    lower_approx_inverse,
    neighborhood,
    support,
)
from .granules import GranuleLevel, MiningMode, enumerate_granules, extend_level, seed_granules
from .miner import Rule, RuleMeasures, evaluate_rule, mine, source_confidence

__version__ = "0.1.0"
