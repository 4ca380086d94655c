"""Gaussian maximal functions: Mehler kernel, Ornstein-Uhlenbeck semigroup,
non-tangential and Hardy-Littlewood maximal operators, and sampled checks
of the estimates that relate them."""

__version__ = "0.1.0"

from .functions import TestFunction, default_corpus, parse_function  # noqa: E402
from .geometry import BallSpec, ConeSpec, Variant  # noqa: E402
from .maximal import MaximalResult, SearchParams, hl_maximal, nt_maximal  # noqa: E402
from .semigroup import Method, SemigroupEval, ou_apply  # noqa: E402
from .verify import (LemmaId, LemmaReport, ProofConstants, RatioReport,  # noqa: E402
                     proof_constant, ratio_scan, verify_lemma)

__all__ = [
    "__version__", "TestFunction", "default_corpus", "parse_function", "BallSpec", "ConeSpec",
    "Variant", "MaximalResult", "SearchParams", "hl_maximal", "nt_maximal", "Method",
    "SemigroupEval", "ou_apply", "LemmaId", "LemmaReport", "ProofConstants", "RatioReport",
    "proof_constant", "ratio_scan", "verify_lemma",
]
