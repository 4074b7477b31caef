"""
Validation Utilities
Run configuration, curve file and parameter validation for the commands
"""

import json
import logging
from typing import Any, Dict, Optional, Tuple, Union

from marshmallow import ValidationError

from ..config import Config, config
from ..schemas.curves import load_curve
from ..schemas.reports import TOLERANCE_OVERRIDES, RunConfigSchema
from ..services.ci_curves import CICurve
from ..services.rational_curves import RationalCurveMap
from .errors import ContractViolation

logger = logging.getLogger(__name__)


def validate_run_config(raw: Dict[str, Any]) -> Dict[str, Any]:
    """
    Validate command parameters using the run configuration schema

    Args:
        raw: parameters collected from the command line

    Returns:
        Validated parameter dictionary

    Raises:
        ValidationError: If validation fails
    """

    try:
        validated = RunConfigSchema().load(raw)
        logger.debug(f"Run configuration validated for {validated['command']}")
        return validated
    except ValidationError as e:
        logger.warning(f"Validation failed: {e.messages}")
        raise


def config_with_overrides(profile: str = 'default', tolerances: Optional[Dict[str, float]] = None):
    """
    Configuration class of a profile with tolerance overrides applied

    Overrides become class attributes of a subclass, so every options object
    built with from_config sees them.
    """

    base = config.get(profile, Config)
    if not tolerances:
        return base
    attrs = {TOLERANCE_OVERRIDES[name]: float(value) for name, value in tolerances.items()}
    logger.debug(f"Tolerance overrides on {base.__name__}: {attrs}")
    return type(f'{base.__name__}WithOverrides', (base,), attrs)


def read_curve_file(path: str, kind: Optional[str] = None) -> Tuple[Union[RationalCurveMap, CICurve], dict]:
    """
    Load and validate a curve file

    Returns:
        Tuple of (curve, parsed document)

    Raises:
        ValidationError: unreadable file, invalid JSON or an invalid curve
    """

    try:
        with open(path, 'r', encoding='utf-8') as handle:
            document = json.load(handle)
    except OSError as e:
        raise ValidationError(f'Cannot read curve file {path}: {e.strerror}', 'input')
    except json.JSONDecodeError as e:
        raise ValidationError(f'Curve file {path} is not valid JSON: {e.msg}', 'input')
    # construct reports carry the curve under data.curve
    if isinstance(document, dict) and 'kind' not in document and isinstance(document.get('data'), dict):
        document = document['data'].get('curve', document)
    curve = load_curve(document, kind)
    logger.info(f"Loaded {document['kind']} curve from {path}")
    return curve, document


def validate_secant_length(curve: Union[RationalCurveMap, CICurve], k: int):
    """
    Raises:
        ContractViolation: k < 3 or k above the curve degree
    """

    if k < 3:
        raise ContractViolation(f"k must be at least 3, got {k}")
    if k > curve.degree:
        raise ContractViolation("k exceeds curve degree", {'k': k, 'degree': curve.degree})


def require_parameters(params: Dict[str, Any], *names: str):
    missing = [name for name in names if params.get(name) is None]
    if missing:
        raise ValidationError(f"Missing required parameters: {', '.join(missing)}", missing[0])
