"""Closed-form dynamics of the non-degenerate parametric amplifier."""

from ._core import (
    Coefficients,
    DerivedScalars,
    ModelParams,
    ParityError,
    RegimeError,
    coherent_revival_params,
    coherent_revival_prob,
    coherent_transition_prob,
    cross_correlation_fock,
    derived_scalars,
    figure,
    figure_names,
    fock11_prob,
    fock_amplitude,
    fock_revival_times,
    mandel_q_fock,
    oracle_check,
    poisson_prob,
    quadrature_variance,
    run_scenario,
    snr_rho_extrema,
    snr_rho_fock,
    solve_analytic,
    solve_ode,
    uncertainty_product,
    vacuum_prob,
)

__all__ = [name for name in dir() if not name.startswith("_")]
