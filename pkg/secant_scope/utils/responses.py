"""
Response Utilities
Standardized report envelopes and deterministic JSON output
"""

import hashlib
import json
import logging
from typing import Any, Dict, Iterable, List, Optional, Union

from .. import __version__
from ..config import Config
from ..schemas.reports import TOLERANCE_OVERRIDES
from .errors import SecantScopeError

logger = logging.getLogger(__name__)


def canonical_json(document: Any, indent: Optional[int] = 2) -> str:
    """Sorted keys, fixed separators, trailing newline"""
    separators = (',', ': ') if indent else (',', ':')
    text = json.dumps(document, sort_keys=True, indent=indent, separators=separators, allow_nan=False)
    return text + '\n' if indent else text


def input_hash(documents: Iterable[dict]) -> str:
    """SHA-256 of the canonical compact JSON of the input documents"""

    digest = hashlib.sha256()
    for document in documents:
        digest.update(canonical_json(document, indent=None).encode('utf-8'))
    return digest.hexdigest()


def tolerance_snapshot(config_class=Config) -> Dict[str, float]:
    return {name: getattr(config_class, attr) for name, attr in sorted(TOLERANCE_OVERRIDES.items())}


def success_response(
    message: str,
    data: Optional[Any] = None,
    command: Optional[str] = None,
    seed: Optional[int] = None,
    config_class=Config,
    digest: Optional[str] = None,
    assumptions: Optional[List[str]] = None
) -> Dict[str, Any]:
    """
    Create standardized success report

    Args:
        message: Success message
        data: Report payload
        command: Command that produced the report
        seed: Seed of the run
        config_class: Configuration whose tolerances are recorded
        digest: Hash of the input documents
        assumptions: Hypotheses the result relies on without checking them

    Returns:
        Report dictionary
    """

    report = {
        'success': True,
        'message': message,
        'version': __version__,
        'command': command,
        'seed': seed,
        'input_hash': digest,
        'tolerances': tolerance_snapshot(config_class),
        'assumptions': list(assumptions or []),
    }

    if data is not None:
        report['data'] = data

    logger.info(f"Success report: {message}")

    return report


def error_response(
    message: str,
    details: Optional[Union[str, Dict, List]] = None,
    error_code: Optional[str] = None,
    command: Optional[str] = None
) -> Dict[str, Any]:
    """
    Create standardized error report

    Args:
        message: Error message naming the failing contract
        details: Error details
        error_code: Error family code
        command: Command that failed

    Returns:
        Report dictionary
    """

    report = {
        'success': False,
        'version': __version__,
        'command': command,
        'error': {
            'message': message,
        }
    }

    if details is not None:
        report['error']['details'] = details

    if error_code:
        report['error']['code'] = error_code

    logger.warning(f"Error report: {message} ({error_code})")

    return report


def exception_response(error: SecantScopeError, command: Optional[str] = None) -> Dict[str, Any]:
    details = _jsonable(error.details) if error.details else None
    return error_response(error.message, details, error.error_code, command)


def validation_error_response(
    validation_errors: Union[Dict, List, str],
    message: str = "Validation failed",
    command: Optional[str] = None
) -> Dict[str, Any]:
    """
    Create report for input validation errors

    Args:
        validation_errors: Validation error details
        message: Error message

    Returns:
        Report dictionary
    """

    return error_response(
        message=message,
        details=validation_errors,
        error_code='VALIDATION_ERROR',
        command=command
    )


def _jsonable(value):
    """Best-effort plain-data copy of exception details"""
    try:
        json.dumps(value, allow_nan=False)
        return value
    except (TypeError, ValueError):
        if isinstance(value, dict):
            return {str(k): _jsonable(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [_jsonable(v) for v in value]
        return repr(value)
