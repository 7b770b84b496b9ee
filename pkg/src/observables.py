"""
Observables Module for the Trilinear Hawking Simulator

Dispatches a resolved scenario to its solver and assembles the observable
time series (one row per grid point) together with the conservation checks
of the sector-resolved solvers.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from .fock_core import (
    NORM_TOL,
    TAIL_TOL,
    TrimodalState,
    coherent_weights,
    fock_weights,
    interaction_expectation,
    mode_occupations,
    reduced_pump,
    reduced_signal,
    state_norm,
)
from .full_solver import evolve_state
from .parametric_solver import occupation, temperature
from .quantum_info import (
    MARGIN_TOL,
    ThermalReference,
    composite_dimension,
    effective_dimension,
    effective_temperature,
    fidelity,
    information,
    mutual_information_a_bc,
    mutual_information_b_c,
    squeezing,
    thermal_entropy,
    von_neumann_entropy,
)
from .run_metrics import track_performance
from .scenario import OBSERVABLE_COLUMNS, ScenarioConfig
from .semiclassical_solver import pump_occupation, signal_occupation
from .shorttime_solver import VACUUM_BARGMANN_INDEX, shorttime_state, validity_horizon

# Configure logging
logger = logging.getLogger(__name__)


@dataclass
class SolverOutput:
    """
    Observable table of one scenario.

    Attributes:
        solver: Solver that produced the rows
        frame: One row per grid point, columns in OBSERVABLE_COLUMNS order
        drift: Largest conservation drift per quantity (sector solvers only)
        validity_horizon: Short-time validity horizon, when applicable
    """

    solver: str
    frame: pd.DataFrame
    drift: Dict[str, float] = field(default_factory=dict)
    validity_horizon: Optional[float] = None

    def __len__(self) -> int:
        return len(self.frame)

    def column(self, name: str) -> np.ndarray:
        return self.frame[name].to_numpy(dtype=float)


def pump_weights(config: ScenarioConfig, tail_tol: float = TAIL_TOL) -> np.ndarray:
    """Pump sector weights for the scenario's pump state and cutoff."""
    if config.pump == "fock":
        return fock_weights(int(config.n_a0), config.cutoff)
    return coherent_weights(config.n_a0, config.cutoff, tail_tol)


def conservation_drift(state: TrimodalState, total_quanta: float) -> Dict[str, float]:
    """
    Deviations of the conserved quantities from their initial values.

    Args:
        state: Tri-mode state
        total_quanta: Initial <N_a> + <N_b>, i.e. sum_s s |a_s|^2

    Returns:
        Absolute drift of norm, N_a + N_b, N_b - N_c and <H_int>
    """
    na, nb, nc = mode_occupations(state)
    return {
        "norm": abs(state_norm(state) - 1.0),
        "manley_rowe": abs(na + nb - total_quanta),
        "signal_idler": abs(nb - nc),
        "interaction": abs(interaction_expectation(state)),
    }


def _empty_row(tau: float) -> Dict[str, float]:
    row = {name: math.nan for name in OBSERVABLE_COLUMNS}
    row["tau"] = float(tau)
    return row


def _classical_pump_row(tau: float, na: float, nb: float, T: float) -> Dict[str, float]:
    # Signal is exactly thermal: F_b = 1, I_b = 0, S_a = 0 for a c-number pump.
    # The semiclassical Na dips below zero past its quarter period; d_eff_a is clamped there.
    s_b = thermal_entropy(nb)
    row = _empty_row(tau)
    row.update(
        {
            "Na": na,
            "Nb": nb,
            "Nc": nb,
            "S_b": s_b,
            "F_b": 1.0,
            "I_b": 0.0,
            "I_b_c": mutual_information_b_c(s_b, 0.0),
            "d_eff_a": effective_dimension(max(na, 0.0)),
            "d_eff_bc": composite_dimension(nb),
            "T_eff": T,
        }
    )
    return row


def _state_row(
    tau: float, state: TrimodalState, omega_b: float, margin_tol: float
) -> Dict[str, float]:
    na, nb, nc = mode_occupations(state)
    rho_a = reduced_pump(state)
    rho_b = reduced_signal(state)
    s_a = von_neumann_entropy(rho_a)
    s_b = von_neumann_entropy(rho_b)
    q_plus, q_minus = squeezing(rho_a, margin_tol)

    row = _empty_row(tau)
    row.update(
        {
            "Na": na,
            "Nb": nb,
            "Nc": nc,
            "S_a": s_a,
            "S_b": s_b,
            "F_b": fidelity(rho_b, ThermalReference(nb)),
            "I_b": information(rho_b, nb),
            "I_a_bc": mutual_information_a_bc(s_a),
            "I_b_c": mutual_information_b_c(s_b, s_a),
            "q_plus": q_plus,
            "q_minus": q_minus,
            "d_eff_a": effective_dimension(na),
            "d_eff_bc": composite_dimension(nb),
            "T_eff": effective_temperature(nb, omega_b),
        }
    )
    return row


class ObservableCalculator:
    """
    Runs a scenario's solver and collects its observables.
    """

    def __init__(
        self,
        tail_tol: float = TAIL_TOL,
        norm_tol: float = NORM_TOL,
        margin_tol: float = MARGIN_TOL,
    ):
        """
        Initialize the calculator.

        Args:
            tail_tol: Pump truncation tolerance
            norm_tol: Conservation tolerance; larger drift is logged
            margin_tol: Cutoff margin required by the squeezing diagnostic
        """
        self.tail_tol = tail_tol
        self.norm_tol = norm_tol
        self.margin_tol = margin_tol
        self._dispatch: Dict[str, Callable[[ScenarioConfig], SolverOutput]] = {
            "parametric": self._run_parametric,
            "semiclassical": self._run_semiclassical,
            "shorttime": self._run_shorttime,
            "full": self._run_full,
        }

    @track_performance
    def compute(self, config: ScenarioConfig) -> SolverOutput:
        """
        Evaluate every observable of the scenario on its time grid.

        Args:
            config: Resolved scenario

        Returns:
            SolverOutput restricted to the scenario's selected columns
        """
        logger.info(f"Computing {config.solver} observables on {config.tau_grid().size} grid points")
        output = self._dispatch[config.solver](config)
        output.frame = output.frame[list(config.columns())]
        return output

    def _frame(self, rows: List[Dict[str, float]]) -> pd.DataFrame:
        return pd.DataFrame(rows, columns=list(OBSERVABLE_COLUMNS))

    def _run_parametric(self, config: ScenarioConfig) -> SolverOutput:
        grid = config.tau_grid()
        A = config.amplitude
        nb = occupation(A, grid)
        rows = [
            _classical_pump_row(tau, config.n_a0, float(n), temperature(A, float(tau), config.omega_b))
            for tau, n in zip(grid, nb)
        ]
        return SolverOutput("parametric", self._frame(rows))

    def _run_semiclassical(self, config: ScenarioConfig) -> SolverOutput:
        grid = config.tau_grid()
        na = pump_occupation(config.n_a0, grid)
        nb = signal_occupation(config.n_a0, grid)
        rows = [
            _classical_pump_row(
                tau, float(a), float(b), effective_temperature(float(b), config.omega_b)
            )
            for tau, a, b in zip(grid, na, nb)
        ]
        return SolverOutput("semiclassical", self._frame(rows))

    def _run_shorttime(self, config: ScenarioConfig) -> SolverOutput:
        grid = config.tau_grid()
        weights = pump_weights(config, self.tail_tol)
        horizon = validity_horizon(VACUUM_BARGMANN_INDEX, config.n_a0)
        states = [shorttime_state(weights, float(tau)) for tau in grid]

        output = self._sector_output("shorttime", grid, weights, states, config.omega_b)
        output.frame["within_validity"] = (grid <= horizon).astype(float)
        output.validity_horizon = horizon
        if grid[-1] > horizon:
            logger.warning(
                f"Short-time solver evaluated up to tau={grid[-1]:.4g}, "
                f"past its validity horizon {horizon:.4g}"
            )
        return output

    def _run_full(self, config: ScenarioConfig) -> SolverOutput:
        grid = config.tau_grid()
        weights = pump_weights(config, self.tail_tol)
        trajectory = evolve_state(
            weights, grid, config.tol, config.integrator, config.workers
        )
        return self._sector_output("full", grid, weights, trajectory.states(), config.omega_b)

    def _sector_output(self, solver, grid, weights, states, omega_b: float) -> SolverOutput:
        total_quanta = float(np.dot(np.arange(weights.size), np.abs(weights) ** 2))
        drift = {"norm": 0.0, "manley_rowe": 0.0, "signal_idler": 0.0, "interaction": 0.0}
        rows = []
        for tau, state in zip(grid, states):
            for name, value in conservation_drift(state, total_quanta).items():
                drift[name] = max(drift[name], value)
            rows.append(_state_row(float(tau), state, omega_b, self.margin_tol))

        worst = max(drift.values())
        if worst > self.norm_tol:
            logger.warning(f"{solver} conservation drift {worst:.3e} exceeds {self.norm_tol:.0e}: {drift}")
        else:
            logger.debug(f"{solver} conservation drift {drift}")
        return SolverOutput(solver, self._frame(rows), drift)


def compute_observables(config: ScenarioConfig) -> SolverOutput:
    """Convenience function: observables of a scenario with default tolerances."""
    return ObservableCalculator().compute(config)
