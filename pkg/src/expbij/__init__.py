"""Exact analyzer for families of exponential / generalized polynomial maps.

Given two full-rank rational matrices W (coefficients) and Wt (exponents)
sharing the column count n, the package decides whether the parametrized map

    F_c(x) = W (c o exp(Wt^T x)),   c > 0 componentwise,

is injective / bijective for every positive parameter vector c, whether those
verdicts survive small perturbations of W or Wt, and what that means for
mass-action reaction networks. Every verdict is exact (rational arithmetic)
and failures carry substitution-checkable certificates.
"""

__version__ = "0.1.0"

from .analyzer import AnalysisReport, Caps, ExponentialMapSpec, analyze  # noqa: E402
from .crn import deficiency_zero_gmak, parse_network, robust_deficiency_zero_gmak  # noqa: E402
from .linalg import RationalMatrix, SubspaceBasis  # noqa: E402
from .report import build_report, canonical_json, verify_certificate  # noqa: E402
from .signs import SignVector  # noqa: E402

__all__ = [
    "AnalysisReport",
    "Caps",
    "ExponentialMapSpec",
    "RationalMatrix",
    "SignVector",
    "SubspaceBasis",
    "analyze",
    "build_report",
    "canonical_json",
    "deficiency_zero_gmak",
    "parse_network",
    "robust_deficiency_zero_gmak",
    "verify_certificate",
]
