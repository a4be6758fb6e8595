"""Boundary-twisted Maslov-type index computations.

Thin wrapper over the compiled _mpx extension; see the command line tool
for the full JSON/CSV interface.
"""

from _mpx import (  # noqa: F401
    MpxError,
    PClass,
    bott_sum_check,
    certify_json,
    classify,
    galerkin_index,
    index,
    is_symplectic,
    rotation2,
    standard_J,
)

__all__ = [
    "MpxError",
    "PClass",
    "bott_sum_check",
    "certify_json",
    "classify",
    "galerkin_index",
    "index",
    "is_symplectic",
    "rotation2",
    "standard_J",
]
