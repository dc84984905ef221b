"""
Models Package.

This package contains the domain models shared by every pipeline stage.
"""
from .base_model import BaseModel
from .landmark_model import LandmarkFrame, CameraIntrinsics, WorldPoint
from .trajectory_model import Group, Task, Dimensionality, Trajectory, validate_trajectory
from .annotation_model import RepetitionAnnotation, validate_annotations
from .feature_model import (
    FEATURE_NAMES,
    PROPERTY_NAMES,
    MouthLandmarks,
    MouthProperties,
    PropertySeries,
    NormalizationFactors,
    FeatureVector,
    FeatureRow,
)
from .smd_model import Magnitude, SmdRow, AgreementRow
from .manifest_model import ManifestEntry, CohortManifest
from .archetype_model import MotionArchetype, GroundTruth, SynthParams

__all__ = [
    'BaseModel',
    'LandmarkFrame', 'CameraIntrinsics', 'WorldPoint',
    'Group', 'Task', 'Dimensionality', 'Trajectory', 'validate_trajectory',
    'RepetitionAnnotation', 'validate_annotations',
    'FEATURE_NAMES', 'PROPERTY_NAMES', 'MouthLandmarks', 'MouthProperties',
    'PropertySeries', 'NormalizationFactors', 'FeatureVector', 'FeatureRow',
    'Magnitude', 'SmdRow', 'AgreementRow',
    'ManifestEntry', 'CohortManifest',
    'MotionArchetype', 'GroundTruth', 'SynthParams',
]
