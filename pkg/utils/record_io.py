"""
Record I/O Module.

This module reads and writes the small record files of a cohort: camera
intrinsics, repetition annotations and the cohort manifest. It also provides
the source/sink helpers shared by the other file-format modules.
"""
import io
import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterator, List, Sequence, Union

import pandas as pd
from pydantic import ValidationError

from models.annotation_model import RepetitionAnnotation, validate_annotations
from models.landmark_model import CameraIntrinsics
from models.manifest_model import CohortManifest
from utils.exceptions import DataValidationError, MissingFileError, ParseError, SchemaError, StorageError

logger = logging.getLogger(__name__)

Source = Union[str, Path, bytes, IO]
Sink = Union[str, Path, IO]

ANNOTATION_COLUMNS = ["task", "repetition_index", "start", "end"]


def read_source_bytes(source: Source) -> bytes:
    """
    Read raw bytes from a path, a bytes object or an open file.

    Raises:
        MissingFileError: If a path does not exist
        StorageError: On any other read failure
    """
    if isinstance(source, bytes):
        return source
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            logger.error(f"File not found: {path}")
            raise MissingFileError(path)
        try:
            return path.read_bytes()
        except OSError as e:
            logger.error(f"Cannot read {path}: {e}")
            raise StorageError(f"Cannot read {path}: {e}")
    try:
        data = source.read()
    except OSError as e:
        raise StorageError(f"Cannot read input stream: {e}")
    return data.encode("utf-8") if isinstance(data, str) else data


def read_source_text(source: Source) -> str:
    raw = read_source_bytes(source)
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"input is not valid UTF-8: {e}")


@contextmanager
def open_sink(sink: Sink) -> Iterator[IO]:
    """
    Yield a text stream for a path or pass an open stream through.

    Raises:
        StorageError: If the path cannot be opened or written
    """
    if not isinstance(sink, (str, Path)):
        yield sink
        return
    path = Path(sink)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            yield handle
    except OSError as e:
        logger.error(f"Cannot write {path}: {e}")
        raise StorageError(f"Cannot write {path}: {e}")


def _load_json(source: Source) -> object:
    text = read_source_text(source)
    try:
        return json.loads(text)
    except (ValueError, RecursionError) as e:
        raise ParseError(f"invalid JSON: {e}")


def parse_intrinsics(source: Source) -> CameraIntrinsics:
    """
    Parse a single-record intrinsics file: {"fx", "fy", "cx", "cy", "width", "height"}.

    Raises:
        DataValidationError: If a value violates the intrinsics invariants
    """
    record = _load_json(source)
    if not isinstance(record, dict):
        raise SchemaError("intrinsics must be a JSON object")
    try:
        return CameraIntrinsics(**record)
    except (ValidationError, TypeError) as e:
        logger.error(f"Invalid intrinsics: {e}")
        raise DataValidationError(f"Invalid intrinsics: {e}")


def write_intrinsics(k: CameraIntrinsics, sink: Sink) -> None:
    with open_sink(sink) as handle:
        handle.write(json.dumps(k.to_record(), sort_keys=True, indent=2) + "\n")


def parse_annotations(source: Source) -> List[RepetitionAnnotation]:
    """
    Parse a repetition annotation table with columns task, repetition_index, start, end.

    Returns:
        Annotations ordered by task then start time; an empty file yields []

    Raises:
        SchemaError: If a required column is missing
        DataValidationError: On invalid or overlapping repetitions
    """
    text = read_source_text(source)
    if not text.strip():
        return []
    try:
        frame = pd.read_csv(io.StringIO(text), dtype={"task": str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise ParseError(f"invalid annotation table: {e}")

    missing = [c for c in ANNOTATION_COLUMNS if c not in frame.columns]
    if missing:
        raise SchemaError(f"annotation table lacks columns: {', '.join(missing)}")

    annotations = []
    for position, record in enumerate(frame[ANNOTATION_COLUMNS].to_dict("records")):
        try:
            annotations.append(RepetitionAnnotation(**record))
        except ValidationError as e:
            # header is line 1
            raise DataValidationError(f"line {position + 2}: invalid annotation: {e}")
    return validate_annotations(annotations)


def write_annotations(annotations: Sequence[RepetitionAnnotation], sink: Sink) -> None:
    frame = pd.DataFrame(
        [[a.task.value, a.repetition_index, a.start, a.end] for a in annotations],
        columns=ANNOTATION_COLUMNS,
    )
    with open_sink(sink) as handle:
        frame.to_csv(handle, index=False, lineterminator="\n")


def parse_manifest(path: Union[str, Path]) -> CohortManifest:
    """
    Parse a manifest file {"entries": [...]}.

    Relative paths inside the manifest resolve against its directory.

    Raises:
        MissingFileError: If the manifest does not exist
        DataValidationError: If an entry is malformed or the cohort is inconsistent
        MissingRestError: If a task entry has no REST recording
    """
    path = Path(path)
    document = _load_json(path)
    if isinstance(document, list):
        document = {"entries": document}
    if not isinstance(document, dict) or "entries" not in document:
        raise SchemaError(f"manifest {path} must be an object with an 'entries' list")
    try:
        manifest = CohortManifest(entries=document["entries"], root=path.parent)
    except (ValidationError, TypeError) as e:
        logger.error(f"Invalid manifest {path}: {e}")
        raise DataValidationError(f"Invalid manifest {path}: {e}")

    manifest.validate_rest_references()
    logger.info(f"Loaded manifest {path}: {len(manifest.entries)} entries, {len(manifest.subjects())} subjects")
    return manifest


def write_manifest(manifest: CohortManifest, sink: Sink) -> None:
    entries = []
    for entry in manifest.entries:
        record = entry.to_record()
        for key, value in record.items():
            if isinstance(value, Path):
                record[key] = value.as_posix()
        entries.append(record)
    with open_sink(sink) as handle:
        handle.write(json.dumps({"entries": entries}, indent=2, sort_keys=True) + "\n")
