#!/usr/bin/env python3
"""
Unit tests for the domain models.

Covers trajectory invariants, camera intrinsics, repetition annotations,
feature vectors, effect-size classes and the cohort manifest.
"""
import unittest
import os
import sys
import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

# Add project root to path so we can import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from helpers import make_trajectory, mouth_points
from models.annotation_model import RepetitionAnnotation, validate_annotations
from models.feature_model import FEATURE_NAMES, FeatureVector, MouthLandmarks
from models.landmark_model import CameraIntrinsics, LandmarkFrame
from models.manifest_model import CohortManifest, ManifestEntry
from models.smd_model import Magnitude, SmdRow
from models.trajectory_model import Dimensionality, Group, Task, Trajectory, validate_trajectory
from utils.exceptions import DataValidationError, MissingDepthError, MissingRestError


class TestTrajectoryValidation(unittest.TestCase):
    """Test cases for validate_trajectory."""

    def setUp(self):
        """Set up test environment before each test case."""
        logging.disable(logging.CRITICAL)
        self.frame = mouth_points(24.0, 60.0)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_valid_trajectory(self):
        """Test that a well-formed recording has no violations."""
        t = make_trajectory(np.stack([self.frame] * 3))
        self.assertEqual(validate_trajectory(t), [])
        self.assertAlmostEqual(t.duration, 2 / 30)
        self.assertEqual(t.points_array().shape, (3, 68, 2))

    def test_non_monotonic_timestamp(self):
        """Test that a repeated timestamp is reported with its frame index."""
        t = make_trajectory(np.stack([self.frame] * 3), timestamps=[0.0, 0.0, 0.1])
        violations = validate_trajectory(t)
        self.assertEqual(violations, ["non-monotonic timestamp @1"])

    def test_wrong_landmark_count(self):
        """Test that a frame with 67 landmarks is reported."""
        frames = (
            LandmarkFrame.build(0.0, self.frame),
            LandmarkFrame.build(1 / 30, self.frame[:67]),
        )
        t = Trajectory(
            subject_id="S01", group=Group.HC, task=Task.BBP, dimensionality=Dimensionality.D2,
            frames=frames, nominal_fps=30.0,
        )
        violations = validate_trajectory(t)
        self.assertEqual(len(violations), 1)
        self.assertIn("landmark count 67", violations[0])
        self.assertIn("@1", violations[0])

    def test_frame_rate_bounds(self):
        """Test that frame rates outside [10, 120] are rejected."""
        t = make_trajectory(np.stack([self.frame] * 3), fps=5.0)
        self.assertTrue(any("nominal_fps" in v for v in validate_trajectory(t)))

    def test_negative_depth(self):
        """Test that negative depth readings are reported while zero is allowed."""
        depth = np.full((2, 68), 0.4)
        depth[0, 3] = 0.0
        depth[1, 5] = -0.1
        t = make_trajectory(np.stack([self.frame] * 2), depth=depth)
        self.assertEqual(validate_trajectory(t), ["invalid depth value @1"])

    def test_points_outside_image(self):
        """Test the pixel bounds check, which skips invalid landmarks."""
        points = np.stack([self.frame] * 2)
        points[1, 0] = (700.0, 10.0)
        t = make_trajectory(points).model_copy(update={"resolution": (640, 480)})
        self.assertEqual(validate_trajectory(t), ["landmark outside 640x480 image @1"])

        valid = np.ones((2, 68), dtype=bool)
        valid[1, 0] = False
        t = make_trajectory(points, valid=valid).model_copy(update={"resolution": (640, 480)})
        self.assertEqual(validate_trajectory(t), [])

    def test_depth_array_requires_depth(self):
        """Test that asking for depth of a plain 2D recording fails."""
        t = make_trajectory(np.stack([self.frame] * 3))
        self.assertFalse(t.has_depth)
        with self.assertRaises(MissingDepthError) as context:
            t.depth_array()
        self.assertIn("3D requested but no depth", str(context.exception))


class TestCameraIntrinsics(unittest.TestCase):
    """Test cases for CameraIntrinsics validation."""

    def test_valid_intrinsics(self):
        """Test that VGA intrinsics are accepted."""
        k = CameraIntrinsics(fx=600, fy=600, cx=320, cy=240, width=640, height=480)
        self.assertEqual(k.fx, 600.0)

    def test_invalid_intrinsics(self):
        """Test zero focal length and a principal point outside the sensor."""
        with self.assertRaises(ValidationError):
            CameraIntrinsics(fx=0, fy=600, cx=320, cy=240, width=640, height=480)
        with self.assertRaises(ValidationError):
            CameraIntrinsics(fx=600, fy=600, cx=0, cy=240, width=640, height=480)
        with self.assertRaises(ValidationError):
            CameraIntrinsics(fx=600, fy=600, cx=320, cy=480, width=640, height=480)


class TestAnnotations(unittest.TestCase):
    """Test cases for repetition annotations."""

    def setUp(self):
        """Set up test environment before each test case."""
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_sorted_by_start(self):
        """Test that annotations come back ordered by start time."""
        annotations = [
            RepetitionAnnotation(task=Task.BBP, repetition_index=2, start=3.0, end=4.0),
            RepetitionAnnotation(task=Task.BBP, repetition_index=1, start=1.0, end=2.0),
        ]
        ordered = validate_annotations(annotations)
        self.assertEqual([a.repetition_index for a in ordered], [1, 2])

    def test_overlap_rejected(self):
        """Test that overlapping and touching windows are rejected."""
        overlapping = [
            RepetitionAnnotation(task=Task.BBP, repetition_index=1, start=0.0, end=2.0),
            RepetitionAnnotation(task=Task.BBP, repetition_index=2, start=1.5, end=3.0),
        ]
        with self.assertRaises(DataValidationError):
            validate_annotations(overlapping)

        touching = [
            RepetitionAnnotation(task=Task.PA, repetition_index=1, start=0.0, end=1.0),
            RepetitionAnnotation(task=Task.PA, repetition_index=2, start=1.0, end=2.0),
        ]
        with self.assertRaises(DataValidationError):
            validate_annotations(touching)

    def test_tasks_are_independent(self):
        """Test that windows of different tasks may overlap."""
        annotations = [
            RepetitionAnnotation(task=Task.BBP, repetition_index=1, start=0.0, end=2.0),
            RepetitionAnnotation(task=Task.PA, repetition_index=1, start=1.0, end=3.0),
        ]
        self.assertEqual(len(validate_annotations(annotations)), 2)

    def test_empty_interval_rejected(self):
        """Test that start must precede end."""
        with self.assertRaises(ValidationError):
            RepetitionAnnotation(task=Task.BBP, repetition_index=1, start=2.0, end=2.0)
        with self.assertRaises(ValidationError):
            RepetitionAnnotation(task=Task.BBP, repetition_index=0, start=1.0, end=2.0)


class TestFeatureModels(unittest.TestCase):
    """Test cases for FeatureVector and MouthLandmarks."""

    def setUp(self):
        """Set up test environment before each test case."""
        self.values = {name: 0.0 for name in FEATURE_NAMES}
        self.values.update(delta_TB=1.0, max_vel_TB=3.0, min_vel_TB=-3.0, ccc_Area=0.9, mean_Area=1.1)

    def test_feature_order(self):
        """Test that features are reported in table column order."""
        vector = FeatureVector(**self.values)
        self.assertEqual(list(vector.as_dict()), list(FEATURE_NAMES))
        self.assertEqual(vector.as_array().shape, (13,))

    def test_feature_invariants(self):
        """Test negative ranges, inverted extremes and out-of-range concordance."""
        for update in ({"delta_TB": -0.1}, {"max_vel_TB": -4.0}, {"ccc_Area": 1.5}):
            with self.subTest(update=update):
                with self.assertRaises(ValidationError):
                    FeatureVector(**{**self.values, **update})

    def test_mouth_landmarks(self):
        """Test the default indices and that indices must be distinct."""
        self.assertEqual(MouthLandmarks().indices, (51, 57, 48, 54))
        with self.assertRaises(ValidationError):
            MouthLandmarks(top=51, bottom=51, left=48, right=54)
        with self.assertRaises(ValidationError):
            MouthLandmarks(top=68, bottom=57, left=48, right=54)


class TestMagnitude(unittest.TestCase):
    """Test cases for effect-size classification."""

    def test_breakpoints(self):
        """Test that breakpoints belong to the upper class."""
        self.assertIs(Magnitude.from_smd(0.49), Magnitude.SMALL)
        self.assertIs(Magnitude.from_smd(0.5), Magnitude.MEDIUM)
        self.assertIs(Magnitude.from_smd(0.79), Magnitude.MEDIUM)
        self.assertIs(Magnitude.from_smd(0.8), Magnitude.LARGE)
        self.assertIs(Magnitude.from_smd(-0.9), Magnitude.LARGE)
        self.assertIs(Magnitude.from_smd(-0.5), Magnitude.MEDIUM)

    def test_non_finite(self):
        """Test that NaN cannot be classified."""
        with self.assertRaises(DataValidationError):
            Magnitude.from_smd(float("nan"))

    def test_smd_row_consistency(self):
        """Test that an SmdRow's magnitude must match its SMD."""
        fields = dict(
            task=Task.BBP, feature="delta_TB", dimensionality=Dimensionality.D2,
            hc_mean=1.2, hc_sd=0.4, hc_n=12, pd_mean=0.9, pd_sd=0.3, pd_n=8, smd=0.82,
        )
        self.assertIs(SmdRow(**fields, magnitude=Magnitude.LARGE).magnitude, Magnitude.LARGE)
        with self.assertRaises(ValidationError):
            SmdRow(**fields, magnitude=Magnitude.SMALL)


class TestCohortManifest(unittest.TestCase):
    """Test cases for the cohort manifest."""

    def setUp(self):
        """Set up test environment before each test case."""
        logging.disable(logging.CRITICAL)
        self.rest = ManifestEntry(subject_id="HC01", group=Group.HC, task=Task.REST, landmark_file="HC01/REST.jsonl")
        self.bbp = ManifestEntry(
            subject_id="HC01", group=Group.HC, task=Task.BBP, landmark_file="HC01/BBP.jsonl",
            annotation_file="HC01/BBP_annotations.csv", rest_file="HC01/REST.jsonl",
        )

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_resolution(self):
        """Test that relative paths resolve against the manifest root."""
        manifest = CohortManifest(entries=(self.rest, self.bbp), root=Path("/data/cohort"))
        self.assertEqual(manifest.resolve(self.bbp.landmark_file), Path("/data/cohort/HC01/BBP.jsonl"))
        self.assertEqual(manifest.resolve(Path("/abs/file.jsonl")), Path("/abs/file.jsonl"))
        self.assertEqual(manifest.task_entries(), [self.bbp])
        self.assertEqual(manifest.subjects(), {"HC01": Group.HC})

    def test_duplicate_entries(self):
        """Test that a subject cannot list the same task twice."""
        with self.assertRaises(ValidationError):
            CohortManifest(entries=(self.rest, self.bbp, self.bbp))

    def test_conflicting_groups(self):
        """Test that a subject belongs to a single group."""
        other = self.bbp.model_copy(update={"group": Group.PD, "task": Task.PA})
        with self.assertRaises(ValidationError):
            CohortManifest(entries=(self.rest, self.bbp, other))

    def test_missing_rest(self):
        """Test that the missing REST error names the subject."""
        manifest = CohortManifest(entries=(self.bbp.model_copy(update={"rest_file": None}),))
        with self.assertRaises(MissingRestError) as context:
            manifest.validate_rest_references()
        self.assertEqual(context.exception.subject_id, "HC01")
        self.assertIn("HC01", str(context.exception))


if __name__ == '__main__':
    unittest.main()
