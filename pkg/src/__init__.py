"""
Trilinear Hawking Simulator

Pump/signal/idler dynamics of the trilinear boson Hamiltonian under the
parametric, semiclassical, short-time and exact approximations, with
thermality, information, entanglement and squeezing diagnostics.
"""

__version__ = "1.0.0"

# Bumped whenever the column layout of scenario CSV files changes.
CSV_SCHEMA_VERSION = "1"
