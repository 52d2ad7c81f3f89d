"""
Logging setup
"""
import logging

from app.core.config import settings


def configure_logging(level: str | None = None) -> None:
    """Configure root logging once for CLI and HTTP entry points"""
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    # Request lines drown out sweep summaries
    logging.getLogger("uvicorn.access").setLevel(logging.WARNING)
