#!/usr/bin/env python3
"""
Unit tests for the batch extraction engine.
"""
import unittest
import os
import sys
import logging
import tempfile
from pathlib import Path

import numpy as np

# Add project root to path so we can import modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.archetype_model import SynthParams
from models.trajectory_model import Dimensionality, Task, Trajectory
from processing.synth import gen_cohort, gen_cohort_records
from utils.exceptions import EXIT_DATA, EXIT_IO, EXIT_OK, MissingDepthError, MissingRestError
from utils.observer import ProgressLogObserver
from utils.pipeline_engine import ExtractionEngine, ExtractionSettings, extract_recording_features, rest_references
from utils.record_io import parse_manifest

BOTH = (Dimensionality.D3, Dimensionality.D2)


def _params(**overrides) -> SynthParams:
    values = dict(n_hc=2, n_pd=2, reps_per_task=2, tasks=(Task.BBP, Task.PA), rest_duration=5.0,
                  cycles_per_repetition=1)
    values.update(overrides)
    return SynthParams(**values)


def _drop_depth(t: Trajectory, landmark: int) -> Trajectory:
    depth = t.depth_array().copy()
    depth[:, landmark] = 0.0
    return Trajectory.from_arrays(
        subject_id=t.subject_id, group=t.group, task=t.task, dimensionality=t.dimensionality,
        timestamps=t.timestamps(), points=t.points_array(), nominal_fps=t.nominal_fps,
        depth=depth, resolution=t.resolution,
    )


class TestExtractRecordingFeatures(unittest.TestCase):
    """Test cases for extract_recording_features."""

    def setUp(self):
        """Set up test environment before each test case."""
        logging.disable(logging.CRITICAL)
        self.params = _params()
        self.subject = gen_cohort_records(self.params, 5)[0]

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_rows_per_repetition(self):
        """Test one row per repetition and dimensionality, 3D first."""
        recording = self.subject.recordings[0]
        rows = extract_recording_features(
            recording.trajectory, recording.annotations, self.subject.rest,
            ExtractionSettings(dimensionalities=BOTH), self.params.intrinsics,
        )
        self.assertEqual([(r.dimensionality, r.repetition) for r in rows], [
            (Dimensionality.D3, 1), (Dimensionality.D3, 2), (Dimensionality.D2, 1), (Dimensionality.D2, 2),
        ])
        self.assertTrue(all(r.subject_id == "HC01" and r.task is Task.BBP for r in rows))
        # a planar face at fixed distance normalizes identically in 2D and 3D
        self.assertAlmostEqual(rows[0].features.delta_TB, rows[2].features.delta_TB, places=3)

    def test_3d_needs_intrinsics(self):
        """Test that 3D without intrinsics is refused."""
        recording = self.subject.recordings[0]
        with self.assertRaises(MissingDepthError):
            extract_recording_features(
                recording.trajectory, recording.annotations, self.subject.rest,
                ExtractionSettings(dimensionalities=(Dimensionality.D3,)), None,
            )

    def test_jaw_without_depth(self):
        """Test that missing depth outside the mouth does not block 3D features."""
        recording = self.subject.recordings[0]
        settings = ExtractionSettings(dimensionalities=BOTH)
        rows = extract_recording_features(
            _drop_depth(recording.trajectory, 0), recording.annotations, _drop_depth(self.subject.rest, 0),
            settings, self.params.intrinsics,
        )
        self.assertEqual(len(rows), 4)
        self.assertAlmostEqual(rows[0].features.delta_TB, rows[2].features.delta_TB, places=3)

    def test_precomputed_rest(self):
        """Test that REST factors can be computed once and reused."""
        recording = self.subject.recordings[0]
        settings = ExtractionSettings(dimensionalities=BOTH)
        references = rest_references(self.subject.rest, settings, self.params.intrinsics)
        self.assertEqual(set(references), set(BOTH))
        direct = extract_recording_features(
            recording.trajectory, recording.annotations, self.subject.rest, settings, self.params.intrinsics,
        )
        cached = extract_recording_features(
            recording.trajectory, recording.annotations, references, settings, self.params.intrinsics,
        )
        self.assertEqual(direct, cached)


class TestExtractionEngine(unittest.TestCase):
    """Test cases for ExtractionEngine."""

    def setUp(self):
        """Set up test environment before each test case."""
        logging.disable(logging.CRITICAL)
        self.temp_dir = tempfile.TemporaryDirectory()
        self.root = Path(self.temp_dir.name)
        self.manifest_path = gen_cohort(_params(), 11, self.root)

    def tearDown(self):
        self.temp_dir.cleanup()
        logging.disable(logging.NOTSET)

    def test_run(self):
        """Test a clean run over every task recording."""
        engine = ExtractionEngine(ExtractionSettings(dimensionalities=BOTH))
        observer = ProgressLogObserver()
        engine.attach(observer)
        result = engine.run(parse_manifest(self.manifest_path))

        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(len(result.rows), 4 * 2 * 2 * 2)
        self.assertEqual(observer.get_event_count("entry_started"), 8)
        self.assertEqual(observer.get_event_count("entry_completed"), 8)
        self.assertEqual(observer.get_event_count("entry_failed"), 0)

    def test_rest_parsed_once_per_subject(self):
        """Test that each subject's REST recording is loaded once per run."""
        logging.disable(logging.NOTSET)
        engine = ExtractionEngine(ExtractionSettings(dimensionalities=BOTH), jobs=3)
        with self.assertLogs("utils.pipeline_engine", level="DEBUG") as logs:
            result = engine.run(parse_manifest(self.manifest_path))
        self.assertEqual(result.exit_code, EXIT_OK)
        cached = [line for line in logs.output if "Cached REST factors" in line]
        self.assertEqual(len(cached), 4)

    def test_parallel_keeps_order(self):
        """Test that worker threads do not change the row order."""
        manifest = parse_manifest(self.manifest_path)
        sequential = ExtractionEngine(jobs=1).run(manifest)
        parallel = ExtractionEngine(jobs=4).run(manifest)

        key = [(r.subject_id, r.task, r.repetition) for r in sequential.rows]
        self.assertEqual(key, [(r.subject_id, r.task, r.repetition) for r in parallel.rows])
        np.testing.assert_array_equal(
            np.stack([r.features.as_array() for r in sequential.rows]),
            np.stack([r.features.as_array() for r in parallel.rows]),
        )

    def test_failures_are_collected(self):
        """Test that broken recordings fail alone and set the exit code."""
        (self.root / "HC02" / "BBP.jsonl").write_text("not json\n")
        engine = ExtractionEngine()
        observer = ProgressLogObserver()
        engine.attach(observer)
        result = engine.run(parse_manifest(self.manifest_path))

        self.assertEqual(result.exit_code, EXIT_DATA)
        self.assertEqual([(f.subject_id, f.task) for f in result.failures], [("HC02", Task.BBP)])
        self.assertEqual(len(result.rows), 7 * 2)
        self.assertEqual(observer.get_event_count("entry_failed"), 1)
        self.assertEqual(observer.failures[0]["subject_id"], "HC02")

    def test_missing_task_file_is_io_failure(self):
        """Test that a missing landmark file gives the I/O exit code."""
        (self.root / "PD01" / "PA.jsonl").unlink()
        (self.root / "HC02" / "BBP.jsonl").write_text("not json\n")
        result = ExtractionEngine().run(parse_manifest(self.manifest_path))
        self.assertEqual(len(result.failures), 2)
        self.assertEqual(result.exit_code, EXIT_IO)

    def test_missing_rest_aborts(self):
        """Test that a missing REST recording names the subject."""
        (self.root / "PD02" / "REST.jsonl").unlink()
        with self.assertRaises(MissingRestError) as context:
            ExtractionEngine().run(parse_manifest(self.manifest_path))
        self.assertEqual(context.exception.subject_id, "PD02")
        self.assertIn("PD02", str(context.exception))

    def test_3d_without_intrinsics_aborts(self):
        """Test that a cohort without depth cannot be processed in 3D."""
        manifest_path = gen_cohort(_params(intrinsics=None), 11, self.root / "flat")
        engine = ExtractionEngine(ExtractionSettings(dimensionalities=(Dimensionality.D3,)))
        with self.assertRaises(MissingDepthError):
            engine.run(parse_manifest(manifest_path))

        result = ExtractionEngine().run(parse_manifest(manifest_path))
        self.assertEqual(result.exit_code, EXIT_OK)


if __name__ == '__main__':
    unittest.main()
