import logging
import sys
from pathlib import Path

from dotenv import load_dotenv

# --- Module Imports ---
src_path = Path(__file__).parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from cli import main  # noqa: E402
from utils import setup_logging  # noqa: E402


if __name__ == "__main__":
    # Load .env before the config layer reads HAMDEF_* variables
    load_dotenv()
    setup_logging(level=logging.WARNING)
    sys.exit(main())
