"""Sudler sine products at the golden rotation.

Thin bindings over the C++ core; every function takes an optional ``ctx``
(a :class:`GoldenCtx`) and otherwise uses a shared default context.
"""

from ._core import (
    DomainError,
    Error,
    GoldenCtx,
    PrecisionError,
    birkhoff_sum,
    cli,
    cotangent_sum,
    decompose,
    default_precision_bits,
    fib,
    fibonacci_product,
    identity_suite,
    limit_square_correction,
    power_law_scan,
    profile,
    rational_sudler_product,
    shifted_product,
    sudler_product,
    zeckendorf,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "Error",
    "GoldenCtx",
    "PrecisionError",
    "birkhoff_sum",
    "cli",
    "cotangent_sum",
    "decompose",
    "default_precision_bits",
    "fib",
    "fibonacci_product",
    "identity_suite",
    "limit_square_correction",
    "power_law_scan",
    "profile",
    "rational_sudler_product",
    "shifted_product",
    "sudler_product",
    "zeckendorf",
]
