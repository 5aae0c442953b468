"""Exception hierarchy shared by all modules."""


class BetaPentaError(Exception):
    """Base class for every error raised by this package."""


class NonConvergent(BetaPentaError):
    """Quadrature or series did not reach the requested tolerance."""


class DomainError(BetaPentaError):
    """An integrand raised or returned a non-finite value inside its window."""


class OutsideStrip(BetaPentaError):
    """Evaluation point lies outside the declared convergence strip."""


class PoleHit(BetaPentaError):
    """Evaluation point sits on (or numerically at) a pole."""


class DivergentParameter(BetaPentaError):
    """A series/product parameter is outside its region of convergence."""


class DistributionalInput(BetaPentaError):
    """A tuple without a function-valued Fourier transform was supplied."""


class NotIntegrable(BetaPentaError):
    """A family declared distributional was handed to an integral transform."""


class InvalidHomomorphism(BetaPentaError):
    """Automorphicity data violate the bilinear condition h_b(c) h_c(b) = 1."""


class AutomorphicityViolation(BetaPentaError):
    """A family does not satisfy the requested quasi-periodicity law."""


class ConfigError(BetaPentaError):
    """Invalid command line or config file input."""
