"""
Run Metrics Module for the Trilinear Hawking Simulator

Tracks stage timings, conservation drift, recorded errors and process memory
for one run, and produces the summary embedded in result sidecars.
"""

import functools
import json
import logging
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import psutil

# Configure logging
logger = logging.getLogger(__name__)

DRIFT_QUANTITIES = ("norm", "manley_rowe", "signal_idler", "interaction")


class RunMetricsCollector:
    """
    Collects timing, conservation and memory metrics for a simulator run.
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the metrics collector.

        Args:
            config: Configuration dictionary
        """
        self.config = config or {}
        self.metrics_file = self.config.get("metrics_file", "logs/metrics.json")

        self.session_metrics: Dict[str, Any] = {
            "session_id": f"session_{datetime.now().strftime('%Y%m%d_%H%M%S')}",
            "start_time": None,
            "end_time": None,
            "total_runtime_seconds": 0.0,
            "stages": {},
            "conservation_drift": {name: 0.0 for name in DRIFT_QUANTITIES},
            "errors": [],
            "peak_memory_mb": 0.0,
        }

        logger.debug("RunMetricsCollector initialized")

    def start_session(self) -> str:
        """
        Start a new metrics session.

        Returns:
            Session ID
        """
        self.session_metrics["start_time"] = time.time()
        self.session_metrics["start_timestamp"] = datetime.now().isoformat()
        self.sample_memory()
        logger.info(f"Started metrics session: {self.session_metrics['session_id']}")
        return self.session_metrics["session_id"]

    def end_session(self) -> None:
        """End the current metrics session."""
        if self.session_metrics["start_time"]:
            self.session_metrics["end_time"] = time.time()
            self.session_metrics["end_timestamp"] = datetime.now().isoformat()
            self.session_metrics["total_runtime_seconds"] = round(
                self.session_metrics["end_time"] - self.session_metrics["start_time"], 3
            )
        self.sample_memory()
        logger.info(f"Ended metrics session: {self.session_metrics['session_id']}")

    def record_stage_time(self, stage_name: str, start_time: float, end_time: float) -> None:
        """
        Record timing for a run stage.

        Args:
            stage_name: Name of the stage
            start_time: Stage start time (from time.time())
            end_time: Stage end time (from time.time())
        """
        duration = round(end_time - start_time, 3)
        self.session_metrics["stages"][stage_name] = {"duration_seconds": duration}
        logger.info(f"Recorded stage '{stage_name}': {duration}s")

    def record_drift(self, drifts: Dict[str, float]) -> None:
        """
        Keep the running maximum of each conservation drift.

        Args:
            drifts: Mapping from quantity name to absolute drift
        """
        current = self.session_metrics["conservation_drift"]
        for name, value in drifts.items():
            current[name] = max(current.get(name, 0.0), float(value))

    def record_error(self, error_type: str, error_message: str, stage: Optional[str] = None) -> None:
        """
        Record an error raised during a run.

        Args:
            error_type: Exception class name
            error_message: Error message
            stage: Stage in which the error occurred
        """
        self.session_metrics["errors"].append(
            {
                "timestamp": datetime.now().isoformat(),
                "error_type": error_type,
                "error_message": error_message,
                "stage": stage,
            }
        )
        logger.warning(f"Recorded error: {error_type} in {stage}: {error_message}")

    def sample_memory(self) -> float:
        """Update and return the peak resident memory of this process in MB."""
        rss_mb = psutil.Process().memory_info().rss / 1024 / 1024
        peak = max(self.session_metrics["peak_memory_mb"], round(rss_mb, 1))
        self.session_metrics["peak_memory_mb"] = peak
        return peak

    @property
    def max_drift(self) -> float:
        return max(self.session_metrics["conservation_drift"].values(), default=0.0)

    def generate_metrics_summary(self) -> Dict[str, Any]:
        """
        Generate the metrics summary.

        Returns:
            Summary dictionary
        """
        errors = self.session_metrics["errors"]
        return {
            "session_info": {
                "session_id": self.session_metrics["session_id"],
                "start_time": self.session_metrics.get("start_timestamp"),
                "end_time": self.session_metrics.get("end_timestamp"),
                "total_runtime_seconds": self.session_metrics["total_runtime_seconds"],
            },
            "stage_performance": dict(self.session_metrics["stages"]),
            "conservation_drift": dict(self.session_metrics["conservation_drift"]),
            "max_conservation_drift": self.max_drift,
            "peak_memory_mb": self.session_metrics["peak_memory_mb"],
            "error_summary": {"total_errors": len(errors), "error_details": list(errors)},
        }

    def save_metrics(self, file_path: Optional[str] = None) -> bool:
        """
        Save the metrics summary as JSON.

        Args:
            file_path: Optional custom file path

        Returns:
            True if successful, False otherwise
        """
        file_path = file_path or self.metrics_file

        try:
            Path(file_path).parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, "w", encoding="utf-8") as f:
                json.dump(self.generate_metrics_summary(), f, indent=2, default=str)
            logger.info(f"Metrics saved to {file_path}")
            return True
        except OSError as e:
            logger.error(f"Error saving metrics: {e}")
            return False


def track_performance(func):
    """
    Decorator logging the wall time of a function call.

    Args:
        func: Function to track

    Returns:
        Wrapped function
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.time()

        try:
            result = func(*args, **kwargs)
            logger.info(f"Function '{func.__name__}' completed in {time.time() - start_time:.2f}s")
            return result
        except Exception as e:
            logger.error(
                f"Function '{func.__name__}' failed after {time.time() - start_time:.2f}s: {e}"
            )
            raise

    return wrapper
