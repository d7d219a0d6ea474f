import logging
import re
from pathlib import Path
from typing import List

logger = logging.getLogger("HamDef.FileManager")


class FileManager:
    """
    Manages the output directory for reports, SVG frames and CSV tables.

    File names are deterministic (no timestamps) so that reruns with the same
    configuration overwrite byte-identical files.
    """
    def __init__(self, base_dir: str = "output"):
        """
        Initializes the FileManager instance.

        Args:
            base_dir: Output directory (default: "output"). Created if missing.
        """
        self.base_dir = Path(base_dir).resolve()
        self.written: List[Path] = []
        self._init_directories()
        logger.debug(f"FileManager initialized: base_dir='{self.base_dir}'")

    def _init_directories(self):
        """Creates the output directory."""
        try:
            self.base_dir.mkdir(parents=True, exist_ok=True)
            logger.debug(f"Ensured directory exists: {self.base_dir}")
        except Exception as e:
            logger.exception(f"Critical error initializing output directory: {e}")
            raise RuntimeError(f"Could not create output directory {self.base_dir}") from e

    def _sanitize_filename_part(self, part: str) -> str:
        """Removes or replaces characters unsafe for filenames."""
        # Remove path separators and control characters
        sanitized = re.sub(r'[\\/*?:"<>|\x00-\x1F]', '_', part)
        # Replace multiple underscores/spaces with a single underscore
        sanitized = re.sub(r'[\s_]+', '_', sanitized)
        # Limit length to avoid issues on some filesystems
        return sanitized[:100] or "output"

    def get_output_path(self, stem: str, suffix: str) -> Path:
        """
        Deterministic output file path.

        Args:
            stem: Descriptive file name without extension (e.g. "fig4_frame01").
            suffix: The file extension (e.g. ".svg", "csv").

        Returns:
            Path inside the output directory.
        """
        safe_stem = self._sanitize_filename_part(stem)
        safe_suffix = suffix if suffix.startswith('.') else f".{suffix}"
        safe_suffix = "".join(c if c.isalnum() or c == '.' else '_' for c in safe_suffix)
        path = self.base_dir / f"{safe_stem}{safe_suffix}"
        logger.debug(f"Generated output path: {path}")
        return path

    def write_text(self, stem: str, suffix: str, text: str) -> Path:
        """Writes text (UTF-8, '\\n' line endings) and records the file for cleanup."""
        path = self.get_output_path(stem, suffix)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        if path not in self.written:
            self.written.append(path)
        logger.info(f"Wrote {path}")
        return path

    def cleanup(self):
        """Removes the files written by this instance."""
        for path in self.written:
            try:
                if path.is_file():
                    path.unlink()
                    logger.debug(f"Deleted output file: {path}")
            except Exception as e:
                logger.warning(f"Could not delete output file {path}: {e}")
        self.written.clear()
