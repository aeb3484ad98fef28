"""Exception types and the global work cap."""

import os

DEFAULT_WORK_CAP = 10**9
WORK_CAP_ENV = "ADDCOMB_WORK_CAP"


class AddcombError(Exception):
    """Base class for all package errors."""


class ValidationError(AddcombError, ValueError):
    """Malformed input: bad spec, mismatched groups, wrong arity."""


class CapacityError(AddcombError):
    """A computation would exceed a configured size or work cap."""


class PreconditionError(AddcombError):
    """A mathematical hypothesis required by an operation does not hold."""


class UndefinedError(AddcombError):
    """The requested quantity is undefined for this input (e.g. empty variety)."""


class ResolutionError(AddcombError):
    """A finite scan failed to exhibit a witness at the configured resolution."""


class DecompositionError(AddcombError):
    """Numerical irrep decomposition could not separate eigenvalue clusters."""


def work_cap() -> int:
    """Elementary-operation budget per call; overridable via ``ADDCOMB_WORK_CAP``."""
    raw = os.environ.get(WORK_CAP_ENV)
    if raw:
        return int(float(raw))
    return DEFAULT_WORK_CAP


def check_work(work: int, what: str, hint: str = "") -> None:
    cap = work_cap()
    if work > cap:
        msg = f"{what}: estimated work {work:.3g} exceeds cap {cap:.3g}"
        if hint:
            msg += f"; {hint}"
        raise CapacityError(msg)
