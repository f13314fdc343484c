"""Cavity Born-Oppenheimer Hartree-Fock for molecules and dilute ensembles."""

from ._core import (
    Molecule,
    boys_function,
    convert_units,
    dilute_ensemble,
    lambda_from_field,
    mode_volume,
    optimize_qc,
    parse_xyz,
    rhf,
    run_scan,
    solve_at_q,
)

__all__ = [
    "Molecule",
    "boys_function",
    "convert_units",
    "dilute_ensemble",
    "lambda_from_field",
    "mode_volume",
    "optimize_qc",
    "parse_xyz",
    "rhf",
    "run_scan",
    "solve_at_q",
]
