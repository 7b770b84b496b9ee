#!/usr/bin/env python3
"""
Main Orchestrator for the Trilinear Hawking Simulator

Entry point for running declarative scenarios and the canned figure
scenarios. It parses command-line arguments, loads environment settings and
the figure configuration, configures logging and maps failures to exit codes.

Usage:
    python main.py run --solver full --n-a0 9 --tau-max 3 --out results/full.csv
    python main.py run --config scenarios/full_coherent.txt --tau-max 1
    python main.py figure fig4 --out-dir results/
    python main.py --help
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from src import __version__
from src.config_manager import SimulationConfigManager, create_config_manager
from src.errors import ConfigError, SimulationError, exit_code_for
from src.figures import FIGURES, FigureRunner
from src.observables import ObservableCalculator
from src.results_writer import ResultsWriter
from src.run_metrics import RunMetricsCollector
from src.scenario import ScenarioConfig, parse_config

# Configure global logger
logger = logging.getLogger(__name__)


class SimulationOrchestrator:
    """
    Coordinates scenario execution: solver dispatch, observable assembly,
    result writing and run metrics.
    """

    def __init__(
        self,
        config_manager: Optional[SimulationConfigManager] = None,
        figure_settings: Optional[Dict[str, Any]] = None,
        metrics_file: Optional[str] = None,
    ):
        """
        Initialize the orchestrator.

        Args:
            config_manager: Environment settings (created from config/ if None)
            figure_settings: The "figures" block of config.json
            metrics_file: Where the run metrics summary is saved (default: logs/metrics.json)
        """
        self.config_manager = config_manager or create_config_manager()
        self.figure_settings = figure_settings or {}
        self.metrics = RunMetricsCollector({"metrics_file": metrics_file} if metrics_file else None)

        self.calculator = ObservableCalculator(
            tail_tol=self.config_manager.get("numerics.tail_tol"),
            norm_tol=self.config_manager.get("numerics.norm_tol"),
            margin_tol=self.config_manager.get("numerics.margin_tol"),
        )
        self.writer = ResultsWriter(self.config_manager.get("output", {}))

        logger.info("SimulationOrchestrator initialized")

    @staticmethod
    def load_figure_settings(settings_file: str) -> Dict[str, Any]:
        """
        Load the "figures" block from a JSON settings file.

        Args:
            settings_file: Path to config.json

        Returns:
            Figure settings, empty if the file is missing
        """
        path = Path(settings_file)
        if not path.exists():
            logger.info(f"No figure settings at {path}, using built-in defaults")
            return {}
        with open(path, "r", encoding="utf-8") as f:
            settings = json.load(f).get("figures", {})
        logger.info(f"Figure settings loaded from {path}")
        return settings

    def scenario_defaults(self) -> Dict[str, Any]:
        """Scenario values supplied by the environment settings."""
        return {
            "d_tau": self.config_manager.get("numerics.default_d_tau"),
            "workers": self.config_manager.get("numerics.workers"),
            "integrator": self.config_manager.get("numerics.integrator"),
        }

    def run_scenario(self, config: ScenarioConfig) -> Dict[str, Any]:
        """
        Run one scenario and write its CSV and sidecar.

        Args:
            config: Resolved scenario

        Returns:
            Dictionary with the SolverOutput, written files and metrics

        Raises:
            SimulationError: On any solver failure
        """
        logger.info("=" * 60)
        logger.info(f"STARTING SCENARIO: solver={config.solver}, pump={config.pump}, n_a0={config.n_a0}")
        logger.info("=" * 60)
        self.metrics.start_session()

        stage_start = time.time()
        try:
            output = self.calculator.compute(config)
        except SimulationError as e:
            self.metrics.record_error(type(e).__name__, str(e), "compute")
            self.metrics.end_session()
            self.metrics.save_metrics()
            raise
        self.metrics.record_stage_time("compute", stage_start, time.time())
        self.metrics.record_drift(output.drift)

        stage_start = time.time()
        self.metrics.end_session()
        metadata = {
            "resolved_config": config.to_dict(),
            "wall_time_seconds": self.metrics.session_metrics["total_runtime_seconds"],
            "validity_horizon": output.validity_horizon,
            "max_conservation_drift": max(output.drift.values(), default=None),
            "metrics": self.metrics.generate_metrics_summary(),
        }
        if not self.writer.write(output.frame, config.out_path, metadata):
            raise OSError(f"Could not write results to {config.out_path}")
        self.metrics.record_stage_time("write", stage_start, time.time())
        self.metrics.save_metrics()

        logger.info(f"Scenario completed: {len(output)} rows written to {config.out_path}")
        return {
            "output": output,
            "output_files": [config.out_path],
            "metrics": self.metrics.generate_metrics_summary(),
        }

    def run_figure(self, name: str, out_dir: str, workers: Optional[int] = None) -> List[Path]:
        """
        Run a canned figure scenario.

        Args:
            name: fig2 .. fig6
            out_dir: Output directory
            workers: Sector threads (default from the environment settings)

        Returns:
            Paths of the CSV files written
        """
        settings = dict(self.figure_settings)
        settings["workers"] = workers or self.config_manager.get("numerics.workers", 1)
        runner = FigureRunner(settings, self.writer, self.calculator)

        self.metrics.start_session()
        stage_start = time.time()
        written = runner.run(name, out_dir)
        self.metrics.record_stage_time(name, stage_start, time.time())
        self.metrics.end_session()
        self.metrics.save_metrics()
        return written


def setup_logging(log_level: str = "INFO", log_file: str = "logs/simulation.log"):
    """
    Set up logging to a file and stdout.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Path to log file
    """
    Path(log_file).parent.mkdir(parents=True, exist_ok=True)

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.FileHandler(log_file), logging.StreamHandler(sys.stdout)],
    )

    logger.info(f"Logging configured: level={log_level}, file={log_file}")


def create_argument_parser() -> argparse.ArgumentParser:
    """
    Create and configure the command-line argument parser.

    Returns:
        Configured ArgumentParser instance
    """
    parser = argparse.ArgumentParser(
        description="Trilinear Hawking Simulator - pump depletion, thermality and information flow",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s run --solver parametric --n-a0 9 --tau-max 1 --out results/parametric.csv
  %(prog)s run --config scenarios/full_coherent.txt --workers 4
  %(prog)s figure fig2 --out-dir results/
        """,
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level (default: from environment settings, else INFO)",
    )
    parser.add_argument("--log-file", help="Path to log file (default: logs/simulation.log)")
    parser.add_argument("--config-dir", default="config", help="Environment YAML directory")
    parser.add_argument("--settings", default="config.json", help="Figure settings JSON file")
    parser.add_argument(
        "--version", action="version", version=f"Trilinear Hawking Simulator v{__version__}"
    )

    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run a scenario")
    run.add_argument("--config", "-c", dest="scenario_file", help="Scenario key=value file")
    run.add_argument("--solver", choices=["parametric", "semiclassical", "shorttime", "full"])
    run.add_argument("--pump", choices=["coherent", "fock"])
    run.add_argument("--n-a0", dest="n_a0", type=float, help="Initial mean pump occupation")
    run.add_argument("--tau-max", dest="tau_max", type=float, help="Last time of the grid")
    run.add_argument("--d-tau", dest="d_tau", type=float, help="Grid spacing")
    run.add_argument("--cutoff", help="Sector cutoff S_max or 'auto'")
    run.add_argument("--tol", type=float, help="Propagation tolerance")
    run.add_argument("--outputs", help="Comma-separated observable columns (default: all)")
    run.add_argument("--out", "-o", dest="out_path", help="Output CSV path")
    run.add_argument("--workers", type=int, help="Sector threads")
    run.add_argument("--integrator", choices=["eigen", "adaptive"])
    run.add_argument("--omega-b", dest="omega_b", type=float, help="Signal frequency")

    figure = subparsers.add_parser("figure", help="Run a canned figure scenario")
    figure.add_argument("name", choices=FIGURES)
    figure.add_argument("--out-dir", help="Output directory (default: output.output_directory)")
    figure.add_argument("--workers", type=int, help="Sector threads")

    return parser


SCENARIO_FLAGS = (
    "solver",
    "pump",
    "n_a0",
    "tau_max",
    "d_tau",
    "cutoff",
    "tol",
    "outputs",
    "out_path",
    "workers",
    "integrator",
    "omega_b",
)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the Trilinear Hawking Simulator.

    Returns:
        Exit code: 0 success, 2 usage error, 3 numerical failure
    """
    load_dotenv()
    parser = create_argument_parser()
    args = parser.parse_args(argv)

    try:
        config_manager = create_config_manager(config_dir=args.config_dir)
        log_file = args.log_file or config_manager.get("logging.log_file", "logs/simulation.log")
        setup_logging(args.log_level or config_manager.get("logging.log_level", "INFO"), log_file)
        errors = config_manager.validate_config()
        if errors:
            section = next(iter(errors))
            raise ConfigError(section, "; ".join(errors[section]))
        logger.info(f"Configuration summary: {config_manager.get_summary()}")
        # Resolved settings and run metrics sit next to the log file
        config_manager.save_config(Path(log_file).with_name("settings.yaml"))

        orchestrator = SimulationOrchestrator(
            config_manager,
            SimulationOrchestrator.load_figure_settings(args.settings),
            metrics_file=str(Path(log_file).with_name("metrics.json")),
        )

        if args.command == "run":
            overrides = {key: getattr(args, key) for key in SCENARIO_FLAGS}
            config = parse_config(args.scenario_file, overrides, orchestrator.scenario_defaults())
            results = orchestrator.run_scenario(config)
            output_files = results["output_files"]
        else:
            out_dir = args.out_dir or config_manager.get("output.output_directory", "results")
            output_files = orchestrator.run_figure(args.name, out_dir, args.workers)

        print("\n" + "=" * 60)
        print("EXECUTION SUMMARY")
        print("=" * 60)
        print(f"Runtime: {orchestrator.metrics.session_metrics['total_runtime_seconds']} seconds")
        print(f"Max conservation drift: {orchestrator.metrics.max_drift:.3e}")
        print("Output files:")
        for file_path in output_files:
            print(f"  - {file_path}")
        print("=" * 60)
        return exit_code_for(None)

    except KeyboardInterrupt:
        logger.info("Process interrupted by user")
        return 130
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"\nInvalid configuration ({e.field}): {e}", file=sys.stderr)
        return exit_code_for(e)
    except Exception as e:
        logger.error(f"Run failed: {type(e).__name__}: {e}")
        print(f"\nRun failed: {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
