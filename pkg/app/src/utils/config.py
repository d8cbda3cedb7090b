import logging
import os

from dotenv import load_dotenv

load_dotenv(os.path.join(os.path.dirname(__file__), "../../../.env"), override=False)

# ---------------------------------- Config ---------------------------------- #

LOG_LEVEL = os.getenv("SOERGEL_LOG_LEVEL", "WARNING")
MAX_WORKERS = int(os.getenv("SOERGEL_MAX_WORKERS", 4))
DEFAULT_MAX_DEGREE = int(os.getenv("SOERGEL_MAX_DEGREE", 12))
CHECK_EVERY_STEP = os.getenv("SOERGEL_CHECK_EVERY_STEP", "1") not in ("0", "false", "False")
SHOW_PROGRESS = os.getenv("SOERGEL_PROGRESS", "0") in ("1", "true", "True")

logging.basicConfig(format="%(levelname)s:\t%(name)s: %(message)s")


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(f"soergel.{name}")
    logger.setLevel(LOG_LEVEL)
    return logger
