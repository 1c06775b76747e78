"""Growth-rate optimal portfolios under prospect-theory preferences.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._core import (  # noqa: F401
    Envelope,
    NumericalError,
    PhiCurve,
    UnsupportedConfiguration,
    UtilityParams,
    Weighting,
    build_phi,
    choquet_expectation,
    feasibility_check,
    global_envelope_points,
    run_study,
    solve,
    u,
    v,
    v_prime,
    v_prime_inverse_lower,
    v_prime_inverse_upper,
    wealth_map,
)

__all__ = [
    "Envelope",
    "NumericalError",
    "PhiCurve",
    "UnsupportedConfiguration",
    "UtilityParams",
    "Weighting",
    "build_phi",
    "choquet_expectation",
    "feasibility_check",
    "global_envelope_points",
    "run_study",
    "solve",
    "u",
    "v",
    "v_prime",
    "v_prime_inverse_lower",
    "v_prime_inverse_upper",
    "wealth_map",
]
