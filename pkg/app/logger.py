import logging
import os
from logging.handlers import RotatingFileHandler

from app.utils.settings import settings

# Create logger
logger = logging.getLogger("lattice_gate")
logger.setLevel(settings.log_level.upper())
logger.propagate = False

# Format for logs
formatter = logging.Formatter(
    "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)

# Console handler, stderr keeps stdout free for JSON output
console_handler = logging.StreamHandler()
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

# File handler with rotation, only when a log file is configured
if settings.log_file:
    log_folder = os.path.dirname(settings.log_file)
    if log_folder:
        os.makedirs(log_folder, exist_ok=True)
    file_handler = RotatingFileHandler(
        settings.log_file, maxBytes=1000000, backupCount=5
    )
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)


def get_logger(name: str) -> logging.Logger:
    """Child logger of the package logger, e.g. ``get_logger(__name__)``."""
    return logger.getChild(name.rsplit(".", 1)[-1])
