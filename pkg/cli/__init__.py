"""
CLI Package.

This package contains the batch command-line front end.
"""
from .commands import cli, OrofacialGroup
from .components import show_result, show_info, show_error, show_failure_summary

__all__ = [
    'cli',
    'OrofacialGroup',
    'show_result',
    'show_info',
    'show_error',
    'show_failure_summary',
]
