"""
TreeMine Command-Line Entry Point
Closed and maximal embedded unordered tree pattern mining
"""
from dotenv import load_dotenv
import os
import sys
import logging
from pathlib import Path

# Load environment variables FIRST before any other imports
load_dotenv()

# Configure logging BEFORE importing other modules
log_dir = Path(os.getenv("TREEMINE_LOG_DIR", "logs"))
log_dir.mkdir(parents=True, exist_ok=True)
log_level = getattr(logging, os.getenv("TREEMINE_LOG_LEVEL", "INFO").upper(), logging.INFO)

from logging.handlers import RotatingFileHandler


file_handler = RotatingFileHandler(
    log_dir / "treemine.log",
    maxBytes=5 * 1024 * 1024,  # 5 MB
    backupCount=3,
    encoding='utf-8'
)
file_handler.setLevel(log_level)
formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
file_handler.setFormatter(formatter)

# stdout carries pattern output, so the console handler writes to stderr
console_handler = logging.StreamHandler(sys.stderr)
console_handler.setLevel(log_level)
console_handler.setFormatter(formatter)

root_logger = logging.getLogger()
root_logger.setLevel(log_level)
root_logger.addHandler(file_handler)
root_logger.addHandler(console_handler)


logger = logging.getLogger(__name__)

# Reduce verbosity for chatty modules
logging.getLogger('mining.embedding_matcher').setLevel(logging.WARNING)
logging.getLogger('mining.occurrence_engine').setLevel(logging.WARNING)

from cli.commands import run


def main() -> int:
    logger.debug("[STARTUP] treemine " + " ".join(sys.argv[1:]))
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
