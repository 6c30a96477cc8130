"""Runtime settings for the workbench, read from the environment (and a local .env file)."""
import logging
import os

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
SCHEMA_VERSION = "1.0"


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default
    if value < 1:
        logger.warning(f"Ignoring {name}={raw!r}: must be positive, using {default}")
        return default
    return value


MEMO_CAP = _int_setting("NCFILT_MEMO_CAP", 2 ** 20)
DEFAULT_BOUND = _int_setting("NCFILT_DEFAULT_BOUND", 6)
ORDER_CAP = _int_setting("NCFILT_ORDER_CAP", 256)
GROUP_CAP = _int_setting("NCFILT_GROUP_CAP", 64)
MAX_WORD_LENGTH = _int_setting("NCFILT_MAX_WORD_LENGTH", 64)
LOG_LEVEL = os.getenv("NCFILT_LOG_LEVEL", "INFO").upper()


def configure_logging(verbose: bool = False) -> None:
    """Configure root logging once for command-line use; logs go to stderr."""
    level = logging.DEBUG if verbose else getattr(logging, LOG_LEVEL, logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT)
