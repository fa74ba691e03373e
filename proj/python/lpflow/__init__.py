"""Littlewood-Paley norms, inequality suites and Euler experiments on the periodic box.

Fields are NumPy arrays of physical samples on the uniform grid of
[0, 2*pi)^d: shape (n,)*d for scalars and (d,) + (n,)*d for vector fields.
"""

from ._lpflow import (
    ArgumentError,
    DegenerateInputError,
    FormatError,
    LpflowError,
    StabilityError,
    bona_smith,
    boundedness,
    broadband_data,
    cli,
    continuity,
    decompose,
    iterate,
    lipschitz,
    norm,
    p_le,
    run_suite,
    solve,
    suite_names,
    taylor_green,
)

__all__ = [
    "ArgumentError",
    "DegenerateInputError",
    "FormatError",
    "LpflowError",
    "StabilityError",
    "bona_smith",
    "boundedness",
    "broadband_data",
    "cli",
    "continuity",
    "decompose",
    "iterate",
    "lipschitz",
    "norm",
    "p_le",
    "run_suite",
    "solve",
    "suite_names",
    "taylor_green",
]
