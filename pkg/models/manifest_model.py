"""
Manifest Model Module.

This module defines the cohort manifest that ties subjects, groups and tasks to
their recording files.
"""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import model_validator

from utils.exceptions import MissingRestError
from .base_model import BaseModel
from .trajectory_model import Group, Task

logger = logging.getLogger(__name__)


class ManifestEntry(BaseModel):
    """One recording of one subject performing one task."""

    subject_id: str
    group: Group
    task: Task
    landmark_file: Path
    annotation_file: Optional[Path] = None
    intrinsics_file: Optional[Path] = None
    rest_file: Optional[Path] = None

    @property
    def has_depth_inputs(self) -> bool:
        return self.intrinsics_file is not None


class CohortManifest(BaseModel):
    """
    All recordings of a cohort.

    Relative file paths are resolved against `root`, normally the directory
    holding the manifest file.
    """

    entries: Tuple[ManifestEntry, ...]
    root: Optional[Path] = None

    @model_validator(mode='after')
    def validate_entries(self):
        seen = set()
        groups: Dict[str, Group] = {}
        for entry in self.entries:
            key = (entry.subject_id, entry.task)
            if key in seen:
                msg = f"duplicate entry for subject '{entry.subject_id}' task {entry.task.value}"
                logger.error(f"Manifest validation failed: {msg}")
                raise ValueError(msg)
            seen.add(key)
            known = groups.setdefault(entry.subject_id, entry.group)
            if known is not entry.group:
                msg = f"subject '{entry.subject_id}' listed in both {known.value} and {entry.group.value}"
                logger.error(f"Manifest validation failed: {msg}")
                raise ValueError(msg)
            if entry.task is not Task.REST and entry.annotation_file is None:
                msg = f"subject '{entry.subject_id}' task {entry.task.value} has no annotation_file"
                logger.error(f"Manifest validation failed: {msg}")
                raise ValueError(msg)
        return self

    def validate_rest_references(self) -> None:
        """
        Check that every task recording points at a REST recording.

        Raises:
            MissingRestError: Naming the first subject without one
        """
        for entry in self.task_entries():
            if entry.rest_file is None:
                logger.error(f"Subject '{entry.subject_id}' has no REST recording")
                raise MissingRestError(entry.subject_id)

    def task_entries(self) -> List[ManifestEntry]:
        """Entries that carry repetitions (everything except REST)."""
        return [entry for entry in self.entries if entry.task is not Task.REST]

    def subjects(self) -> Dict[str, Group]:
        """Subject id to group, in manifest order."""
        result: Dict[str, Group] = {}
        for entry in self.entries:
            result.setdefault(entry.subject_id, entry.group)
        return result

    def resolve(self, path: Path) -> Path:
        """Resolve a manifest path against the manifest root."""
        path = Path(path)
        if path.is_absolute() or self.root is None:
            return path
        return self.root / path
