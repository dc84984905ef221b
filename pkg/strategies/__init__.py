"""
Strategies Package.

This package contains the observation aggregation strategies used by the cohort
analysis, following the Strategy design pattern.
"""
from .aggregation_strategy import AggregationStrategy, BaseAggregationStrategy
from .per_subject_aggregation import PerSubjectAggregation
from .per_repetition_aggregation import PerRepetitionAggregation

__all__ = [
    'AggregationStrategy',
    'BaseAggregationStrategy',
    'PerSubjectAggregation',
    'PerRepetitionAggregation',
]
