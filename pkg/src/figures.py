"""
Canned Figure Scenarios for the Trilinear Hawking Simulator

Each figure runs a fixed set of scenarios and emits long-format or wide CSV
tables ready for any plotting tool:

- fig2: pump and signal occupations from all four solvers, with the exact
  relative pump number variance that the semiclassical closure neglects
- fig3: short-time pump and signal spectra with thermal overlays
- fig4: short-time fidelity, information and effective-dimension crossings
- fig5: the fig4 quantities from the exact solver
- fig6: mutual informations of all four solvers and pump squeezing
"""

import copy
import logging
import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from .errors import DomainError
from .fock_core import coherent_weights, mode_occupations, reduced_signal
from .full_solver import evolve_state, evolve_state_at
from .observables import ObservableCalculator, pump_weights
from .quantum_info import (
    ThermalReference,
    composite_dimension,
    dimension_crossing_occupation,
    effective_dimension,
    information,
)
from .results_writer import ResultsWriter
from .run_metrics import track_performance
from .scenario import SOLVERS, ScenarioConfig
from .semiclassical_solver import factorization_diagnostic
from .shorttime_solver import rho_pump, rho_signal

# Configure logging
logger = logging.getLogger(__name__)

FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6")

DEFAULT_FIGURE_SETTINGS: Dict[str, Any] = {
    "nbar_sweep": [1.0, 3.0, 6.0, 9.0],
    "workers": 1,
    "fig2": {"n_a0": 9.0, "tau_max": 3.0, "d_tau": 0.01},
    "fig3": {"n_a0": 9.0, "snapshots": [0.1, 0.3, 0.5, 1.0, 2.0]},
    "fig4": {"tau_max": 8.0, "d_tau": 0.02, "asymptote_tau": 50.0},
    "fig5": {"tau_max": 3.0, "d_tau": 0.01},
    "fig6": {"n_a0": 9.0, "tau_max": 3.0, "d_tau": 0.01},
}

FIDELITY_COLUMNS = ["tau", "nbar", "Nb", "F_b", "I_b", "d_eff_a", "d_eff_bc"]
CROSSING_COLUMNS = [
    "nbar",
    "tau_cross",
    "Nb_cross",
    "Nb_cross_closed_form",
    "I_b_cross",
    "I_b_asymptote",
]


def crossing_time(
    difference: Callable[[float], float],
    tau_grid: Sequence[float],
    values: Sequence[float],
    xtol: float = 1e-12,
) -> Optional[float]:
    """
    First time where a sampled difference goes from positive to nonpositive.

    The sign change is bracketed on the grid and refined with brentq on the
    continuous function.

    Args:
        difference: Continuous function of tau
        tau_grid: Sample times
        values: difference sampled on tau_grid
        xtol: Root tolerance

    Returns:
        Crossing time, or None if the samples never change sign
    """
    values = np.asarray(values, dtype=float)
    for index in range(1, values.size):
        if values[index - 1] > 0 and values[index] <= 0:
            if values[index] == 0:
                return float(tau_grid[index])
            return float(
                brentq(difference, float(tau_grid[index - 1]), float(tau_grid[index]), xtol=xtol)
            )
    return None


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    result = copy.deepcopy(base)
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _merge(result[key], value)
        else:
            result[key] = value
    return result


class FigureRunner:
    """
    Runs the canned figure scenarios and writes their tables.
    """

    def __init__(
        self,
        settings: Optional[Dict[str, Any]] = None,
        writer: Optional[ResultsWriter] = None,
        calculator: Optional[ObservableCalculator] = None,
    ):
        """
        Initialize the figure runner.

        Args:
            settings: Overrides of DEFAULT_FIGURE_SETTINGS (the "figures" block of config.json)
            writer: Results writer
            calculator: Observable calculator
        """
        self.settings = _merge(DEFAULT_FIGURE_SETTINGS, settings or {})
        self.writer = writer or ResultsWriter()
        self.calculator = calculator or ObservableCalculator()
        self._builders: Dict[str, Callable[[], Dict[str, pd.DataFrame]]] = {
            "fig2": self.occupations,
            "fig3": self.spectra,
            "fig4": lambda: self.fidelity_information("shorttime", "fig4"),
            "fig5": lambda: self.fidelity_information("full", "fig5"),
            "fig6": self.mutual_information_squeezing,
        }
        logger.info("FigureRunner initialized")

    @property
    def nbar_sweep(self) -> List[float]:
        return [float(nbar) for nbar in self.settings["nbar_sweep"]]

    def _scenario(self, solver: str, n_a0: float, tau_max: float, d_tau: float) -> ScenarioConfig:
        return ScenarioConfig(
            solver=solver,
            n_a0=float(n_a0),
            tau_max=float(tau_max),
            d_tau=float(d_tau),
            workers=int(self.settings.get("workers", 1)),
        )

    @track_performance
    def build(self, name: str) -> Dict[str, pd.DataFrame]:
        """
        Compute the tables of a figure without writing them.

        Args:
            name: fig2 .. fig6

        Returns:
            Mapping from file name to table
        """
        if name not in self._builders:
            raise DomainError(f"Unknown figure '{name}', expected one of {', '.join(FIGURES)}")
        logger.info(f"Building {name}")
        return self._builders[name]()

    def run(self, name: str, out_dir: Union[str, Path]) -> List[Path]:
        """
        Compute a figure and write every table with its sidecar.

        Args:
            name: fig2 .. fig6
            out_dir: Output directory

        Returns:
            Paths of the CSV files written
        """
        written = []
        for file_name, frame in self.build(name).items():
            path = Path(out_dir) / file_name
            metadata = {
                "figure": name,
                "settings": self.settings.get(name, {}),
                "nbar_sweep": self.nbar_sweep,
            }
            if not self.writer.write(frame, path, metadata):
                raise OSError(f"Could not write {path}")
            written.append(path)
        logger.info(f"{name}: wrote {len(written)} tables to {out_dir}")
        return written

    def occupations(self) -> Dict[str, pd.DataFrame]:
        """Na and Nb of all four solvers on one grid, coherent pump, and the exact Na_rel_variance."""
        params = self.settings["fig2"]
        frames = []
        for solver in SOLVERS:
            config = self._scenario(solver, params["n_a0"], params["tau_max"], params["d_tau"])
            frame = self.calculator.compute(config).frame[["tau", "Na", "Nb"]].copy()
            frame.insert(1, "series", solver)
            frames.append(frame)

        config = self._scenario("full", params["n_a0"], params["tau_max"], params["d_tau"])
        trajectory = evolve_state(
            pump_weights(config, self.calculator.tail_tol),
            config.tau_grid(),
            config.tol,
            config.integrator,
            config.workers,
        )
        factorization = pd.DataFrame(
            {
                "tau": trajectory.tau_grid,
                "Na_rel_variance": factorization_diagnostic(trajectory.states()),
            }
        )
        return {
            "fig2_occupations.csv": pd.concat(frames, ignore_index=True),
            "fig2_factorization.csv": factorization,
        }

    def spectra(self) -> Dict[str, pd.DataFrame]:
        """Short-time pump and signal spectra with the thermal spectrum of equal mean."""
        params = self.settings["fig3"]
        weights = coherent_weights(float(params["n_a0"]))
        P_s = np.abs(weights) ** 2
        rows = []
        for tau in params["snapshots"]:
            tau = float(tau)
            signal = rho_signal(P_s, tau)
            pump = np.real(np.diag(rho_pump(weights, tau).elements))
            thermal = ThermalReference(signal.mean).probs
            for series, probs in (("pump", pump), ("signal", signal.probs), ("thermal", thermal)):
                rows.extend(
                    {"tau": tau, "series": series, "n": n, "value": float(p)}
                    for n, p in enumerate(probs)
                )
        return {"fig3_spectra.csv": pd.DataFrame(rows, columns=["tau", "series", "n", "value"])}

    def _signal_occupation_at(self, solver: str, weights: np.ndarray) -> Callable[[float], float]:
        if solver == "shorttime":
            P_s = np.abs(weights) ** 2
            return lambda tau: rho_signal(P_s, tau).mean
        return lambda tau: mode_occupations(evolve_state_at(weights, tau))[1]

    def _information_at(self, solver: str, weights: np.ndarray, tau: float) -> float:
        if solver == "shorttime":
            signal = rho_signal(np.abs(weights) ** 2, tau)
        else:
            signal = reduced_signal(evolve_state_at(weights, tau))
        return information(signal)

    def fidelity_information(self, solver: str, name: str) -> Dict[str, pd.DataFrame]:
        """
        Fidelity, information and dimension crossing for each nbar of the sweep.

        Args:
            solver: shorttime or full
            name: Figure name, used for file names and settings

        Returns:
            Time series and crossing tables
        """
        params = self.settings[name]
        series_frames = []
        crossings = []

        for nbar in self.nbar_sweep:
            config = self._scenario(solver, nbar, params["tau_max"], params["d_tau"])
            frame = self.calculator.compute(config).frame
            frame = frame.assign(nbar=nbar)[FIDELITY_COLUMNS]
            series_frames.append(frame)

            weights = pump_weights(config, self.calculator.tail_tol)
            total = float(np.dot(np.arange(weights.size), np.abs(weights) ** 2))
            nb_at = self._signal_occupation_at(solver, weights)

            def difference(tau: float) -> float:
                nb = nb_at(tau)
                return effective_dimension(max(total - nb, 0.0)) - composite_dimension(nb)

            values = frame["d_eff_a"].to_numpy() - frame["d_eff_bc"].to_numpy()
            tau_cross = crossing_time(difference, frame["tau"].to_numpy(), values)

            row = {column: math.nan for column in CROSSING_COLUMNS}
            row["nbar"] = nbar
            row["Nb_cross_closed_form"] = dimension_crossing_occupation(total)
            if tau_cross is None:
                logger.warning(f"{name}: no dimension crossing for nbar={nbar} before tau={params['tau_max']}")
            else:
                row["tau_cross"] = tau_cross
                row["Nb_cross"] = nb_at(tau_cross)
                row["I_b_cross"] = self._information_at(solver, weights, tau_cross)
            if "asymptote_tau" in params:
                row["I_b_asymptote"] = self._information_at(
                    solver, weights, float(params["asymptote_tau"])
                )
            crossings.append(row)

        return {
            f"{name}_fidelity_information.csv": pd.concat(series_frames, ignore_index=True),
            f"{name}_crossings.csv": pd.DataFrame(crossings, columns=CROSSING_COLUMNS),
        }

    def mutual_information_squeezing(self) -> Dict[str, pd.DataFrame]:
        """Mutual informations of all four solvers and exact pump squeezing over the sweep."""
        params = self.settings["fig6"]
        info_frames = []
        for solver in SOLVERS:
            config = self._scenario(solver, params["n_a0"], params["tau_max"], params["d_tau"])
            frame = self.calculator.compute(config).frame[["tau", "I_a_bc", "I_b_c"]].copy()
            frame.insert(1, "series", solver)
            info_frames.append(frame)

        squeeze_frames = []
        for nbar in self.nbar_sweep:
            config = self._scenario("full", nbar, params["tau_max"], params["d_tau"])
            frame = self.calculator.compute(config).frame
            squeeze_frames.append(frame.assign(nbar=nbar)[["tau", "nbar", "q_plus", "q_minus"]])

        return {
            "fig6_mutual_information.csv": pd.concat(info_frames, ignore_index=True),
            "fig6_squeezing.csv": pd.concat(squeeze_frames, ignore_index=True),
        }
