"""
Results Writer Module for the Trilinear Hawking Simulator

Writes observable tables as CSV with a fixed number of significant digits and
a ``<name>.meta.json`` sidecar describing how the data was produced.
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from . import CSV_SCHEMA_VERSION, __version__

# Configure logging
logger = logging.getLogger(__name__)


def metadata_path(csv_path: Union[str, Path]) -> Path:
    """Sidecar path: results/run.csv -> results/run.meta.json."""
    csv_path = Path(csv_path)
    return csv_path.with_name(f"{csv_path.stem}.meta.json")


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    return str(value)


class ResultsWriter:
    """
    Saves result tables and their metadata sidecars.
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the results writer.

        Args:
            config: Output settings (float_digits, write_metadata)
        """
        self.config = config or {}
        self.float_digits = int(self.config.get("float_digits", 12))
        self.write_metadata = bool(self.config.get("write_metadata", True))

        logger.debug(f"ResultsWriter initialized with {self.float_digits} significant digits")

    @property
    def float_format(self) -> str:
        return f"%.{self.float_digits}g"

    def save_csv(self, df: pd.DataFrame, file_path: Union[str, Path]) -> bool:
        """
        Save a table as CSV with a header row, empty fields for missing values.

        Args:
            df: Result table
            file_path: Output file path

        Returns:
            True if successful, False otherwise
        """
        try:
            logger.info(f"Saving {len(df)} rows to CSV: {file_path}")
            Path(file_path).parent.mkdir(parents=True, exist_ok=True)
            df.to_csv(
                file_path,
                index=False,
                float_format=self.float_format,
                na_rep="",
                lineterminator="\n",
                encoding="utf-8",
            )
            return True
        except OSError as e:
            logger.error(f"Error saving to CSV: {e}")
            return False

    def save_metadata(self, csv_path: Union[str, Path], metadata: Dict[str, Any]) -> bool:
        """
        Save the JSON sidecar of a CSV file.

        Args:
            csv_path: Path of the CSV the sidecar describes
            metadata: Run-specific fields (resolved config, metrics, ...)

        Returns:
            True if successful, False otherwise
        """
        sidecar = metadata_path(csv_path)
        payload = {
            "data_file": Path(csv_path).name,
            "library_version": __version__,
            "csv_schema_version": CSV_SCHEMA_VERSION,
            "generated_at": datetime.now().isoformat(),
            **metadata,
        }

        try:
            sidecar.parent.mkdir(parents=True, exist_ok=True)
            with open(sidecar, "w", encoding="utf-8") as f:
                json.dump(payload, f, indent=2, sort_keys=True, default=_json_default)
            logger.info(f"Successfully saved metadata to {sidecar}")
            return True
        except (OSError, TypeError) as e:
            logger.error(f"Error saving metadata: {e}")
            return False

    def write(
        self, df: pd.DataFrame, csv_path: Union[str, Path], metadata: Optional[Dict[str, Any]] = None
    ) -> bool:
        """
        Save a table and, when enabled, its sidecar.

        Returns:
            True if every file was written
        """
        saved = self.save_csv(df, csv_path)
        if saved and self.write_metadata:
            saved = self.save_metadata(csv_path, metadata or {})
        return saved
