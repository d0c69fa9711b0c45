"""Continued logarithms of rational numbers, with exact step-count checks."""

from .audit import AuditReport, audit_trace, potential, theorem5_bound
from .bounds import (
    BoundReport,
    mersenne_expansion,
    tightness_check,
    verify_L_bound,
    verify_mersenne,
    verify_T_bound,
)
from .clog import (
    Expansion,
    StepRecord,
    StepTrace,
    evaluate,
    expand,
    measure_L,
    measure_T,
    step,
    trace,
)
from .ratcore import (
    PreconditionError,
    RationalPair,
    floor_log2_ratio,
    pow2_multiple_exponent,
    reduce_pow2,
)

__version__ = "0.1.0"
