"""
Error Types
Exception hierarchy shared by the services and the command line
"""

from typing import Any, Dict, List, Optional


class SecantScopeError(Exception):
    """Base class for every failure the tool reports"""

    error_code = 'INTERNAL_ERROR'
    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ContractViolation(SecantScopeError, ValueError):
    """Input violates an operation's precondition"""

    error_code = 'CONTRACT_VIOLATION'
    exit_code = 2


class FieldMismatchError(ContractViolation):
    """Rational and complex values were mixed"""

    error_code = 'FIELD_MISMATCH'


class ZeroFormError(ContractViolation):
    """An operation that needs a nonzero form received the zero form"""

    error_code = 'ZERO_FORM'


class SingularMatrixError(ContractViolation):
    error_code = 'SINGULAR_MATRIX'


class SolverFailure(SecantScopeError):
    """A numerical procedure ran out of budget or could not finish"""

    error_code = 'SOLVER_FAILURE'
    exit_code = 3


class PathFailureBudgetExceeded(SolverFailure):
    error_code = 'PATH_FAILURE_BUDGET'


class RootFindingError(SolverFailure):
    error_code = 'ROOT_FINDING'


class ConstructionBudgetExceeded(SolverFailure):
    """Random construction never passed its checks"""

    error_code = 'CONSTRUCTION_BUDGET'

    def __init__(self, message: str, seed_trail: List[Any]):
        super().__init__(message, {'seed_trail': list(seed_trail)})
        self.seed_trail = list(seed_trail)


class NonFiniteSolutionSet(SolverFailure):
    """
    Solution set looks positive dimensional

    Carries whatever witnesses were found so callers can still use them.
    """

    error_code = 'NON_FINITE_SUSPECT'

    def __init__(self, message: str, witnesses: Optional[List[Any]] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.witnesses = list(witnesses or [])


class AmbiguousVerdict(SecantScopeError):
    """A numerical threshold test landed too close to its cutoff"""

    error_code = 'AMBIGUOUS_VERDICT'
    exit_code = 4
