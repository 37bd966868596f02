"""Exact, desk-scale verification of a surface with p_g = q = 2 and K^2 = 7
built as a quotient of C4 x C4 by a group of order 18."""

from .exact import CycNum, ExactMatrix, Fp, ZETA, matrix_rank
from .pipeline import PipelineConfig, run_pipeline
from .polynomials import Form, build_curve_forms, parse_form, resultant_binary
from .report import VerificationReport, render_report

__version__ = "0.1.0"

__all__ = [
    "CycNum",
    "ExactMatrix",
    "Form",
    "Fp",
    "PipelineConfig",
    "VerificationReport",
    "ZETA",
    "build_curve_forms",
    "matrix_rank",
    "parse_form",
    "render_report",
    "resultant_binary",
    "run_pipeline",
]
