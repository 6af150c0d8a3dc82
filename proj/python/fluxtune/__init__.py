"""Simulator for a flux-tunable two-SQUID artificial atom coupled to a
superconducting resonator: spectra, tunable couplings, constant-splitting
flux schedules and a decoherence budget."""

from ._core import (
    AtomForm,
    AtomSolver,
    BasisSpec,
    CouplingSet,
    DerivedScales,
    DeviceParams,
    Engine,
    FluxPoint,
    NoiseEnv,
    ValidationReport,
    Variant,
    __version__,
    budget,
    derive_scales,
    min_fprime,
    perturbative_couplings,
    perturbative_splitting,
    run_json,
    solve_fprime,
    validate_params,
)

__all__ = [
    "AtomForm",
    "AtomSolver",
    "BasisSpec",
    "CouplingSet",
    "DerivedScales",
    "DeviceParams",
    "Engine",
    "FluxPoint",
    "NoiseEnv",
    "ValidationReport",
    "Variant",
    "__version__",
    "budget",
    "derive_scales",
    "min_fprime",
    "perturbative_couplings",
    "perturbative_splitting",
    "run_json",
    "solve_fprime",
    "validate_params",
]
