"""
Orofacial Kinematics Toolkit.

Main entry point for the batch command-line interface.
"""
import logging
import logging.config
from typing import Any, Dict

from cli import cli
from utils.config import APP_TITLE, APP_VERSION, LOG_FILE, LOG_LEVEL


def logging_config(level: str = LOG_LEVEL, log_file: str = LOG_FILE) -> Dict[str, Any]:
    """
    Build the dictConfig for the toolkit.

    Console output goes to stderr; stdout carries feature tables and reports.
    """
    handlers: Dict[str, Dict[str, Any]] = {
        "stderr": {
            "class": "logging.StreamHandler",
            "formatter": "standard",
            "stream": "ext://sys.stderr",
        }
    }
    if log_file:
        handlers["file"] = {
            "class": "logging.FileHandler",
            "formatter": "standard",
            "filename": log_file,
            "mode": "a",
        }

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {"format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s"},
        },
        "handlers": handlers,
        "root": {"handlers": list(handlers), "level": level},
    }


def setup_logging() -> None:
    """Configure logging for the application."""
    logging.config.dictConfig(logging_config())
    logging.getLogger(__name__).debug(f"{APP_TITLE} {APP_VERSION}: logging at {LOG_LEVEL}")


def main():
    """Main application entry point."""
    setup_logging()
    cli.main(prog_name="orofacial")


if __name__ == "__main__":
    main()
