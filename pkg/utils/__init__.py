"""
Utils Package.

This package contains configuration, errors, file formats and the pipeline
orchestration used by the command-line front end.
"""
from .exceptions import OrofacialError, UsageError, DataError, StorageError
from .observer import Observer, Subject, ProgressLogObserver

__all__ = [
    'OrofacialError',
    'UsageError',
    'DataError',
    'StorageError',
    'Observer',
    'Subject',
    'ProgressLogObserver',
]
