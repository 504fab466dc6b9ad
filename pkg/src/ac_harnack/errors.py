"""Exception types shared across the package.

The CLI maps these onto its exit codes: ConfigError -> 2, ConfinementError
and FloorError -> 3, I/O failures -> 4.
"""


class ACHarnackError(Exception):
    """Base class for all package errors."""


class AdmissibilityError(ACHarnackError, ValueError):
    """Parameters (alpha, beta, n, k, d) violate an admissibility constraint."""


class CFLViolationError(ACHarnackError, ValueError):
    """Explicit time step exceeds the stability bound."""


class ConfinementError(ACHarnackError, RuntimeError):
    """A field left the safe band [eps_floor, 1 - eps_floor] during a run."""


class FloorError(ACHarnackError, ValueError):
    """A field value sits below the positivity floor required for log()."""


class ConfigError(ACHarnackError, ValueError):
    """Run configuration is malformed or inconsistent."""
