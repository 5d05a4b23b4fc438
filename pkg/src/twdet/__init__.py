"""Tracy-Widom distributions from Fredholm determinants of the operator
with kernel Ai(x + y + s) on the half line, with an independent
Painleve II route, numerical checks of the operator identities that relate
them, and Monte Carlo samplers (GOE, half-flat TASEP) for the limit laws.
"""

from .distributions import f1, f1_forrester, f1_painleve, f2, f4, f4_painleve, f_sa_direct
from .errors import (
    DomainError,
    InstabilityError,
    NumericalDegeneracyError,
    NumericalError,
    ParameterError,
    TwdetError,
    WindowTooSmallError,
)
from .specfun import airy_ai, airy_ai_prime, airy_tail_integral

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "InstabilityError",
    "NumericalDegeneracyError",
    "NumericalError",
    "ParameterError",
    "TwdetError",
    "WindowTooSmallError",
    "airy_ai",
    "airy_ai_prime",
    "airy_tail_integral",
    "f1",
    "f1_forrester",
    "f1_painleve",
    "f2",
    "f4",
    "f4_painleve",
    "f_sa_direct",
]
