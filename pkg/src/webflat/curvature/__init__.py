"""Numeric curvature of dual webs and flatness verdicts."""

from .checks import ExpansionResult, PreconditionError, curvature_expansion_check, homothety_scaling_check, kappa_ab
from .evaluate import CurvatureSample, curvature_at
from .flatness import (
    FLAT,
    INCONCLUSIVE,
    NONFLAT,
    FlatnessConfig,
    FlatnessVerdict,
    Probe,
    flatness_test,
)
from .kernels import web_curvature
from .slopes import EtaForm, SlopeFan, SlopeSignal, eta_for_triple, numeric_web, slopes_at

__all__ = [
    "CurvatureSample",
    "EtaForm",
    "ExpansionResult",
    "FLAT",
    "FlatnessConfig",
    "FlatnessVerdict",
    "INCONCLUSIVE",
    "NONFLAT",
    "PreconditionError",
    "Probe",
    "SlopeFan",
    "SlopeSignal",
    "curvature_at",
    "curvature_expansion_check",
    "eta_for_triple",
    "flatness_test",
    "homothety_scaling_check",
    "kappa_ab",
    "numeric_web",
    "slopes_at",
    "web_curvature",
]
