"""Suprema, chaining bounds and contraction checks for canonical processes."""

from ._canonproc import (
    __version__,
    Error,
    ParameterError,
    ValidationError,
    ParseError,
    CapacityError,
    FiniteSet,
    generate_set,
    parse_set,
    format_set,
    bernoulli_norm_proxy,
    bernoulli_norm_exact,
    gaussian_norm_exact,
    gaussian_moment_constant,
    mc_norm,
    brute_force_bernoulli_sup,
    mc_sup,
    chain_bound,
    exhaustive_gamma,
    verify_theorem2,
    check_condition,
    fit_min_c,
    decompose,
    weak_moment_constant,
    strong_moment_ratio,
    run_cli,
)

__all__ = [name for name in dir() if not name.startswith("_")]
