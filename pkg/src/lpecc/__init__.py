"""Low-power error-correcting cooling codes: verification, bounds, designs, constructions
and exact search at small parameters."""

from __future__ import annotations

from .bounds import BoundEntry, BoundReport, bounds_summary, exact_e_eq_w_minus_1, johnson_ub
from .constructions import (
    extract_bibd,
    lpecc_from_frame3,
    lpecc_from_frame4,
    lpecc_from_packing,
    qary_from_cwc,
)
from .core import (
    CPECC,
    LPECC,
    Codeset,
    LpeccCode,
    LpeccParams,
    QaryCodeword,
    VerificationReport,
    check_w_minus_2_structure,
    hamming_distance,
    load_code,
    save_code,
    tau,
    verify_code,
)
from .designs import (
    ConstantWeightCode,
    Frame,
    Packing,
    affine_plane,
    brute_max_cwc,
    brute_max_packing,
    planar_difference_set,
    search_frame,
)
from .errors import LpeccError
from .solver import enumerate_minimal_codesets, exact_lpecc, solve

__version__ = "0.1.0"

__all__ = [
    "BoundEntry", "BoundReport", "CPECC", "Codeset", "ConstantWeightCode", "Frame", "LPECC",
    "LpeccCode", "LpeccError", "LpeccParams", "Packing", "QaryCodeword", "VerificationReport",
    "affine_plane", "bounds_summary", "brute_max_cwc", "brute_max_packing",
    "check_w_minus_2_structure", "enumerate_minimal_codesets", "exact_e_eq_w_minus_1",
    "exact_lpecc", "extract_bibd", "hamming_distance", "johnson_ub", "load_code",
    "lpecc_from_frame3", "lpecc_from_frame4", "lpecc_from_packing", "planar_difference_set",
    "qary_from_cwc", "save_code", "search_frame", "solve", "tau", "verify_code",
]
