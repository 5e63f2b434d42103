"""Logging configuration for the application."""
import sys

from loguru import logger

from .settings import settings


def configure_logging():
    """Configure application logging. Reports own stdout, so logs go to stderr."""
    # Remove default handler
    logger.remove()

    # Console logging
    logger.add(
        sys.stderr,
        level=settings.LOG_LEVEL,
        format=settings.LOG_FORMAT,
        colorize=True,
        backtrace=True,
        diagnose=settings.DEBUG,
    )

    # File logging
    if settings.LOG_FILE is not None:
        settings.LOG_FILE.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            settings.LOG_FILE,
            rotation="10 MB",
            retention="30 days",
            level=settings.LOG_LEVEL,
            format=settings.LOG_FORMAT,
            backtrace=True,
            diagnose=settings.DEBUG,
            enqueue=True,  # For thread safety across parallel runs
        )
        logger.debug(f"Logging configured. Log file: {settings.LOG_FILE}")
    return logger


# Configure logging when module is imported
logger = configure_logging()
