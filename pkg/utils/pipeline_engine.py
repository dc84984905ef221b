"""
Pipeline Engine Module.

This module implements the extraction engine that turns a cohort manifest into
a feature table: load, optionally reconstruct, segment, normalize by REST and
extract features for every task recording. Entries are processed
independently; results keep manifest order whatever the worker count.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import Field

from models.annotation_model import RepetitionAnnotation
from models.base_model import BaseModel
from models.feature_model import FeatureRow, MouthLandmarks, NormalizationFactors
from models.landmark_model import CameraIntrinsics
from models.manifest_model import CohortManifest, ManifestEntry
from models.trajectory_model import Dimensionality, Task, Trajectory
from processing.kinematics import extract_features, rest_factors
from processing.reconstruction import GapPolicy, reconstruct_trajectory
from processing.segmentation import rest_window, split_repetitions
from utils.config import DEFAULT_JOBS, DEFAULT_SECOND_DERIVATIVE, REST_WINDOW_SECONDS
from utils.exceptions import EXIT_DATA, EXIT_IO, EXIT_OK, MissingDepthError, MissingRestError, OrofacialError
from utils.landmark_io import parse_landmark_stream
from utils.observer import Subject
from utils.record_io import parse_annotations, parse_intrinsics

logger = logging.getLogger(__name__)


class ExtractionSettings(BaseModel):
    """Options shared by every entry of an extraction run."""

    dimensionalities: Tuple[Dimensionality, ...] = (Dimensionality.D2,)
    smooth: bool = False
    accel_method: str = DEFAULT_SECOND_DERIVATIVE
    gap_policy: GapPolicy = Field(default_factory=GapPolicy)
    landmarks: MouthLandmarks = Field(default_factory=MouthLandmarks)
    rest_duration: float = Field(REST_WINDOW_SECONDS, gt=0)

    @property
    def needs_depth(self) -> bool:
        return Dimensionality.D3 in self.dimensionalities


class EntryFailure(BaseModel):
    """Why one manifest entry produced no features."""

    subject_id: str
    task: Task
    error: str
    exit_code: int


class ExtractionResult(BaseModel):
    rows: Tuple[FeatureRow, ...] = ()
    failures: Tuple[EntryFailure, ...] = ()

    @property
    def exit_code(self) -> int:
        """0 when every entry succeeded; 3 if any failure was an I/O error, else 2."""
        if not self.failures:
            return EXIT_OK
        if any(failure.exit_code == EXIT_IO for failure in self.failures):
            return EXIT_IO
        return EXIT_DATA


def _reconstruct(trajectory: Trajectory, intrinsics: Optional[CameraIntrinsics], settings: ExtractionSettings) -> Trajectory:
    if intrinsics is None:
        raise MissingDepthError(
            f"3D requested but no depth intrinsics for {trajectory.subject_id}/{trajectory.task.value}"
        )
    return reconstruct_trajectory(trajectory, intrinsics, settings.gap_policy, settings.landmarks.indices)


def rest_references(
    rest: Trajectory,
    settings: ExtractionSettings = ExtractionSettings(),
    intrinsics: Optional[CameraIntrinsics] = None,
) -> Dict[Dimensionality, NormalizationFactors]:
    """
    REST normalization factors of one subject for every requested dimensionality.

    Raises:
        MissingDepthError: If 3D is requested without intrinsics or depth
    """
    references: Dict[Dimensionality, NormalizationFactors] = {}
    for dimensionality in settings.dimensionalities:
        trajectory = _reconstruct(rest, intrinsics, settings) if dimensionality is Dimensionality.D3 else rest
        references[dimensionality] = rest_factors(
            rest_window(trajectory, settings.rest_duration), settings.landmarks
        )
    return references


def extract_recording_features(
    recording: Trajectory,
    annotations: Sequence[RepetitionAnnotation],
    rest: Union[Trajectory, Mapping[Dimensionality, NormalizationFactors]],
    settings: ExtractionSettings = ExtractionSettings(),
    intrinsics: Optional[CameraIntrinsics] = None,
) -> List[FeatureRow]:
    """
    Extract feature rows for one task recording in every requested dimensionality.

    Args:
        recording: 2D task recording (with depth when 3D is requested)
        annotations: Repetition annotations of the recording
        rest: The subject's 2D REST recording, or factors from `rest_references`
        settings: Extraction options
        intrinsics: Camera intrinsics, required for 3D

    Returns:
        One row per repetition and dimensionality, 3D rows first

    Raises:
        MissingDepthError: If 3D is requested without intrinsics or depth
    """
    if isinstance(rest, Trajectory):
        rest = rest_references(rest, settings, intrinsics)

    rows: List[FeatureRow] = []
    for dimensionality in sorted(settings.dimensionalities, key=lambda d: d is Dimensionality.D2):
        if dimensionality is Dimensionality.D3:
            task_trajectory = _reconstruct(recording, intrinsics, settings)
        else:
            task_trajectory = recording

        for repetition in split_repetitions(task_trajectory, annotations):
            features = extract_features(
                repetition, rest[dimensionality], settings.smooth, settings.accel_method, settings.landmarks
            )
            rows.append(FeatureRow(
                subject_id=recording.subject_id,
                group=recording.group,
                task=recording.task,
                dimensionality=dimensionality,
                repetition=repetition.repetition,
                features=features,
            ))
    return rows


class ExtractionEngine(Subject):
    """
    Batch extraction over a cohort manifest.

    Publishes `entry_started`, `entry_completed` and `entry_failed` events to
    attached observers. Per-entry data errors are collected; manifest-level
    problems (missing REST, 3D without depth) abort the run.
    """

    def __init__(self, settings: ExtractionSettings = ExtractionSettings(), jobs: int = DEFAULT_JOBS):
        """
        Initialize the engine.

        Args:
            settings: Extraction options
            jobs: Worker threads; 1 processes entries sequentially
        """
        super().__init__()
        self._settings = settings
        self._jobs = max(1, int(jobs))
        self._rest_cache: Dict[Tuple[str, Optional[str]], Dict[Dimensionality, NormalizationFactors]] = {}
        self._rest_locks: Dict[Tuple[str, Optional[str]], threading.Lock] = {}
        self._cache_lock = threading.Lock()
        logger.info(
            f"Initialized ExtractionEngine ({', '.join(d.value for d in settings.dimensionalities)}, "
            f"{self._jobs} jobs)"
        )

    def check_manifest(self, manifest: CohortManifest) -> None:
        """
        Reject manifests that cannot be processed at all.

        Raises:
            MissingRestError: If a subject's REST recording is absent
            MissingDepthError: If 3D is requested for an entry without intrinsics
        """
        manifest.validate_rest_references()
        for entry in manifest.task_entries():
            rest_path = manifest.resolve(entry.rest_file)
            if not rest_path.exists():
                logger.error(f"REST recording for {entry.subject_id} not found: {rest_path}")
                raise MissingRestError(
                    entry.subject_id,
                    f"REST recording for subject '{entry.subject_id}' not found: {rest_path}",
                )
            if self._settings.needs_depth and not entry.has_depth_inputs:
                msg = f"3D requested but no depth intrinsics for {entry.subject_id}/{entry.task.value}"
                logger.error(msg)
                raise MissingDepthError(msg)

    def _rest(self, manifest: CohortManifest, entry: ManifestEntry, intrinsics: Optional[CameraIntrinsics]):
        """REST factors of the entry's subject, parsed and reconstructed once per run."""
        rest_path = manifest.resolve(entry.rest_file)
        key = (str(rest_path), None if intrinsics is None else str(manifest.resolve(entry.intrinsics_file)))
        with self._cache_lock:
            lock = self._rest_locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._rest_cache:
                rest = parse_landmark_stream(rest_path, entry.subject_id, entry.group, Task.REST)
                self._rest_cache[key] = rest_references(rest, self._settings, intrinsics)
                logger.debug(f"Cached REST factors for {entry.subject_id}")
            return self._rest_cache[key]

    def _load(self, manifest: CohortManifest, entry: ManifestEntry):
        recording = parse_landmark_stream(
            manifest.resolve(entry.landmark_file), entry.subject_id, entry.group, entry.task
        )
        annotations = parse_annotations(manifest.resolve(entry.annotation_file))
        intrinsics = None
        if entry.intrinsics_file is not None and self._settings.needs_depth:
            intrinsics = parse_intrinsics(manifest.resolve(entry.intrinsics_file))
        return recording, annotations, self._rest(manifest, entry, intrinsics), intrinsics

    def _process_entry(self, manifest: CohortManifest, entry: ManifestEntry) -> Tuple[List[FeatureRow], Optional[EntryFailure]]:
        event: Dict[str, Any] = {"subject_id": entry.subject_id, "task": entry.task.value}
        self.notify("entry_started", event)
        try:
            recording, annotations, rest, intrinsics = self._load(manifest, entry)
            rows = extract_recording_features(recording, annotations, rest, self._settings, intrinsics)
        except OrofacialError as e:
            failure = EntryFailure(
                subject_id=entry.subject_id, task=entry.task, error=str(e), exit_code=e.exit_code
            )
            self.notify("entry_failed", {**event, "error": str(e), "exit_code": e.exit_code})
            return [], failure
        self.notify("entry_completed", {**event, "rows": len(rows)})
        return rows, None

    def run(self, manifest: CohortManifest) -> ExtractionResult:
        """
        Extract features for every task entry of a manifest.

        Args:
            manifest: The cohort manifest

        Returns:
            Feature rows in manifest order plus a failure per entry that could not be processed
        """
        self.check_manifest(manifest)
        self._rest_cache.clear()
        entries = manifest.task_entries()
        logger.info(f"Extracting features for {len(entries)} recordings")

        if self._jobs == 1:
            outcomes = [self._process_entry(manifest, entry) for entry in entries]
        else:
            with ThreadPoolExecutor(max_workers=self._jobs) as executor:
                outcomes = list(executor.map(lambda entry: self._process_entry(manifest, entry), entries))

        rows = [row for entry_rows, _ in outcomes for row in entry_rows]
        failures = [failure for _, failure in outcomes if failure is not None]
        if failures:
            logger.warning(f"{len(failures)}/{len(entries)} recordings failed")
        logger.info(f"Extracted {len(rows)} feature rows")
        return ExtractionResult(rows=tuple(rows), failures=tuple(failures))
