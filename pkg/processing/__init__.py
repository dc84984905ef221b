"""
Processing Package.

This package contains the numerical pipeline stages: reconstruction,
segmentation, kinematics, statistics and synthetic data generation.
"""
from .reconstruction import GapPolicy, back_project, project, reconstruct_trajectory
from .segmentation import split_repetitions, rest_window
from .kinematics import (
    mouth_properties,
    property_series,
    rest_factors,
    normalize,
    differentiate,
    second_derivative,
    smooth,
    ccc,
    motion_features,
    extract_features,
)
from .statistics import (
    NConvention,
    smd,
    pooled_sd,
    smd_from_summary,
    classify_smd,
    cohort_analysis,
    filter_smd_rows,
    dimensionality_agreement,
)

__all__ = [
    'GapPolicy', 'back_project', 'project', 'reconstruct_trajectory',
    'split_repetitions', 'rest_window',
    'mouth_properties', 'property_series', 'rest_factors', 'normalize',
    'differentiate', 'second_derivative', 'smooth', 'ccc',
    'motion_features', 'extract_features',
    'NConvention', 'smd', 'pooled_sd', 'smd_from_summary', 'classify_smd',
    'cohort_analysis', 'filter_smd_rows', 'dimensionality_agreement',
]
