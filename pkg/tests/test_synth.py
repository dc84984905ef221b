#!/usr/bin/env python3
"""
Unit tests for synthetic trajectories, closed-form features and cohort generation.
"""
import unittest
import os
import sys
import json
import logging
import tempfile
from pathlib import Path

import numpy as np

# Add project root to path so we can import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from helpers import INTRINSICS
from models.archetype_model import MotionArchetype, SynthParams
from models.feature_model import FEATURE_NAMES
from models.landmark_model import CameraIntrinsics
from models.trajectory_model import Dimensionality, Task
from processing.kinematics import extract_features, motion_features, normalize, property_series, rest_factors
from processing.reconstruction import reconstruct_trajectory
from processing.segmentation import rest_window, split_repetitions
from processing.synth import face_template, gen_cohort, gen_cohort_records, gen_recording, gen_trajectory
from utils.exceptions import DataValidationError
from utils.record_io import parse_annotations, parse_manifest


def _features(archetype, intrinsics=None, duration=2.0):
    """Features of one whole-cycle recording normalized by a 5 s REST recording."""
    recording, truth = gen_trajectory(archetype, Task.BBP, duration, intrinsics=intrinsics)
    rest, _ = gen_trajectory(archetype, Task.REST, 5.0, intrinsics=intrinsics)
    if intrinsics is not None:
        recording = reconstruct_trajectory(recording, intrinsics)
        rest = reconstruct_trajectory(rest, intrinsics)
    factors = rest_factors(rest_window(rest))
    return extract_features(recording, factors), truth


def _small_params(**overrides) -> SynthParams:
    values = dict(n_hc=2, n_pd=2, reps_per_task=2, tasks=(Task.BBP,), rest_duration=5.0, cycles_per_repetition=1)
    values.update(overrides)
    return SynthParams(**values)


class TestGroundTruth(unittest.TestCase):
    """Test cases comparing extracted features with their closed form."""

    def setUp(self):
        """Set up test environment before each test case."""
        logging.disable(logging.CRITICAL)
        self.archetype = MotionArchetype(tb_amplitude=0.5, wm_amplitude=0.2, rate=1.0)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_features_match_closed_form(self):
        """Test that jitter-free motion reproduces the expected features."""
        features, truth = _features(self.archetype)

        for name in ("delta_TB", "delta_WM", "mean_Area", "delta_Area"):
            self.assertAlmostEqual(getattr(features, name), getattr(truth, name), delta=0.01 * abs(getattr(truth, name)))
        for name in ("max_vel_TB", "min_vel_TB", "max_vel_WM", "min_vel_WM"):
            self.assertAlmostEqual(getattr(features, name), getattr(truth, name), delta=0.02 * abs(getattr(truth, name)))
        for name in ("max_acc_TB", "min_acc_TB", "max_acc_WM", "min_acc_WM"):
            self.assertAlmostEqual(getattr(features, name), getattr(truth, name), delta=0.05 * abs(getattr(truth, name)))
        self.assertAlmostEqual(features.ccc_Area, truth.ccc_Area, delta=0.01)

    def test_closed_form_values(self):
        """Test the closed form for half-amplitude opening at 1 Hz."""
        _, truth = _features(self.archetype)
        self.assertAlmostEqual(truth.delta_TB, 1.0)
        self.assertAlmostEqual(truth.max_vel_TB, np.pi)
        self.assertAlmostEqual(truth.min_acc_TB, -2 * np.pi ** 2)
        self.assertAlmostEqual(truth.mean_Area, 1.05)
        self.assertAlmostEqual(truth.delta_Area, 1.8 - 0.4)

    def test_symmetric_motion_is_concordant(self):
        """Test that equal commissure motion yields CCC 1."""
        features, truth = _features(self.archetype)
        self.assertAlmostEqual(features.ccc_Area, 1.0, places=9)
        self.assertAlmostEqual(truth.ccc_Area, 1.0)

    def test_asymmetric_motion_lowers_concordance(self):
        """Test that a lagging left commissure reduces CCC."""
        features, truth = _features(self.archetype.model_copy(update={"asymmetry": 0.3}))
        self.assertLess(features.ccc_Area, 1.0)
        self.assertAlmostEqual(features.ccc_Area, truth.ccc_Area, delta=0.01)

    def test_still_mouth(self):
        """Test that zero amplitude yields zero motion features."""
        still = MotionArchetype(tb_amplitude=0.0, wm_amplitude=0.0)
        recording, truth = gen_trajectory(still, Task.BBP, 2.0)
        rest, _ = gen_trajectory(still, Task.REST, 5.0)
        series = normalize(property_series(recording), rest_factors(rest_window(rest)))

        features = motion_features(series)
        for name in FEATURE_NAMES:
            if name in ("mean_Area", "ccc_Area"):
                continue
            self.assertAlmostEqual(features[name], 0.0, places=9)
        self.assertAlmostEqual(features["mean_Area"], 1.0)
        self.assertIsNone(truth.ccc_Area)

    def test_amplitude_monotonicity(self):
        """Test that larger openings give larger delta_TB and peak velocity."""
        values = [
            _features(self.archetype.model_copy(update={"tb_amplitude": a}))[0]
            for a in (0.2, 0.4, 0.6)
        ]
        self.assertLess(values[0].delta_TB, values[1].delta_TB)
        self.assertLess(values[1].delta_TB, values[2].delta_TB)
        self.assertLess(values[0].max_vel_TB, values[2].max_vel_TB)

    def test_planar_face_3d_matches_2d(self):
        """Test that a fronto-parallel face gives the same normalized features in 2D and 3D."""
        k = CameraIntrinsics(**INTRINSICS)
        flat, _ = _features(self.archetype)
        world, _ = _features(self.archetype, intrinsics=k)
        np.testing.assert_allclose(world.as_array(), flat.as_array(), rtol=1e-6, atol=1e-9)


class TestGenerators(unittest.TestCase):
    """Test cases for gen_trajectory and gen_recording."""

    def setUp(self):
        """Set up test environment before each test case."""
        logging.disable(logging.CRITICAL)
        self.archetype = MotionArchetype()

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_face_template(self):
        """Test that the static face has 68 points and an empty mouth."""
        template = face_template()
        self.assertEqual(template.shape, (68, 2))
        self.assertTrue(np.all(template[48:] == 0))

    def test_trajectory_shape(self):
        """Test frame count and depth emission."""
        trajectory, _ = gen_trajectory(self.archetype, Task.BBP, 2.0)
        self.assertEqual(len(trajectory), 61)
        self.assertIs(trajectory.dimensionality, Dimensionality.D2)
        self.assertFalse(trajectory.has_depth)

        with_depth, _ = gen_trajectory(self.archetype, Task.BBP, 2.0, intrinsics=CameraIntrinsics(**INTRINSICS))
        self.assertTrue(with_depth.has_depth)

    def test_too_short(self):
        """Test that fewer than five frames are refused."""
        with self.assertRaises(DataValidationError):
            gen_trajectory(self.archetype, Task.BBP, 0.1)

    def test_rest_is_still(self):
        """Test that REST keeps every landmark in place."""
        rest, _ = gen_trajectory(self.archetype, Task.REST, 5.0)
        points = rest.points_array()
        np.testing.assert_array_equal(points, np.repeat(points[:1], len(rest), axis=0))

    def test_jitter_is_seeded(self):
        """Test that jitter depends only on the archetype seed."""
        noisy = self.archetype.model_copy(update={"jitter_sd": 0.5, "seed": 3})
        a, _ = gen_trajectory(noisy, Task.BBP, 2.0)
        b, _ = gen_trajectory(noisy, Task.BBP, 2.0)
        c, _ = gen_trajectory(noisy.model_copy(update={"seed": 4}), Task.BBP, 2.0)
        np.testing.assert_array_equal(a.points_array(), b.points_array())
        self.assertFalse(np.array_equal(a.points_array(), c.points_array()))

    def test_recording_annotations(self):
        """Test that repetitions are separated by pauses and annotated."""
        trajectory, annotations = gen_recording(self.archetype, Task.PA, reps=3)

        self.assertEqual([a.repetition_index for a in annotations], [1, 2, 3])
        self.assertEqual([(a.start, a.end) for a in annotations], [(0.5, 2.5), (3.0, 5.0), (5.5, 7.5)])
        self.assertEqual(len(trajectory), 241)
        repetitions = split_repetitions(trajectory, annotations)
        self.assertEqual([len(r) for r in repetitions], [61, 61, 61])

    def test_recording_rejects_rest(self):
        """Test that REST is generated with gen_trajectory only."""
        with self.assertRaises(DataValidationError):
            gen_recording(self.archetype, Task.REST, reps=1)
        with self.assertRaises(DataValidationError):
            gen_recording(self.archetype, Task.BBP, reps=0)


class TestCohort(unittest.TestCase):
    """Test cases for gen_cohort_records and gen_cohort."""

    def setUp(self):
        """Set up test environment before each test case."""
        logging.disable(logging.CRITICAL)
        self.temp_dir = tempfile.TemporaryDirectory()
        self.root = Path(self.temp_dir.name)

    def tearDown(self):
        self.temp_dir.cleanup()
        logging.disable(logging.NOTSET)

    def test_records_are_deterministic(self):
        """Test that one seed gives one cohort."""
        params = _small_params()
        a = gen_cohort_records(params, 42)
        b = gen_cohort_records(params, 42)
        c = gen_cohort_records(params, 43)

        self.assertEqual([s.subject_id for s in a], ["HC01", "HC02", "PD01", "PD02"])
        for x, y in zip(a, b):
            self.assertEqual(x.archetype, y.archetype)
            np.testing.assert_array_equal(x.recordings[0].trajectory.points_array(), y.recordings[0].trajectory.points_array())
        self.assertNotEqual(a[0].archetype, c[0].archetype)

    def test_default_cohort_layout(self):
        """Test that the default cohort has 20 subjects with five repetitions per task."""
        params = SynthParams(rest_duration=5.0, intrinsics=None)
        subjects = gen_cohort_records(params, 1)
        self.assertEqual(len(subjects), 20)
        self.assertEqual(sum(s.group.value == "PD" for s in subjects), 8)
        for subject in subjects:
            self.assertEqual([r.task for r in subject.recordings], [Task.BBP, Task.PA, Task.BIGSMILE])
            self.assertTrue(all(len(r.annotations) == 5 for r in subject.recordings))

    def test_written_cohort(self):
        """Test the on-disk layout and that the manifest reparses."""
        manifest_path = gen_cohort(_small_params(), 42, self.root / "cohort")
        manifest = parse_manifest(manifest_path)

        self.assertEqual(sorted(manifest.subjects()), ["HC01", "HC02", "PD01", "PD02"])
        self.assertEqual(len(manifest.task_entries()), 4)
        self.assertTrue((self.root / "cohort" / "intrinsics.json").exists())

        entry = manifest.task_entries()[0]
        annotations = parse_annotations(manifest.resolve(entry.annotation_file))
        self.assertEqual(len(annotations), 2)
        self.assertTrue(manifest.resolve(entry.rest_file).exists())

        document = json.loads(manifest_path.read_text())
        self.assertFalse(any(os.path.isabs(e["landmark_file"]) for e in document["entries"]))

    def test_written_cohort_is_byte_identical(self):
        """Test that the same seed writes the same bytes."""
        params = _small_params()
        gen_cohort(params, 42, self.root / "a")
        gen_cohort(params, 42, self.root / "b")

        files_a = sorted(p.relative_to(self.root / "a") for p in (self.root / "a").rglob("*") if p.is_file())
        files_b = sorted(p.relative_to(self.root / "b") for p in (self.root / "b").rglob("*") if p.is_file())
        self.assertEqual(files_a, files_b)
        for relative in files_a:
            self.assertEqual((self.root / "a" / relative).read_bytes(), (self.root / "b" / relative).read_bytes())

    def test_params_validation(self):
        """Test that rates above 5 Hz are rejected."""
        with self.assertRaises(ValueError):
            MotionArchetype(rate=10.0)


if __name__ == '__main__':
    unittest.main()
