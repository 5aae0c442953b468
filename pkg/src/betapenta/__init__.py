"""Numerical lab for Faddeev's quantum dilogarithm and five-term (pentagon) identities."""

from .errors import (AutomorphicityViolation, BetaPentaError, ConfigError, DistributionalInput,
                     DivergentParameter, DomainError, InvalidHomomorphism, NonConvergent,
                     NotIntegrable, OutsideStrip, PoleHit)
from .qdilog import EvalMethod, HbarContext, make_context, phi_eval, psi_eval
from .report import PointRecord, VerificationReport

__version__ = "0.1.0"

__all__ = [
    "AutomorphicityViolation", "BetaPentaError", "ConfigError", "DistributionalInput",
    "DivergentParameter", "DomainError", "EvalMethod", "HbarContext", "InvalidHomomorphism",
    "NonConvergent", "NotIntegrable", "OutsideStrip", "PoleHit", "PointRecord",
    "VerificationReport", "make_context", "phi_eval", "psi_eval",
]
