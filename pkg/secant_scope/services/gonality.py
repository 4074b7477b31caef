"""
Gonality Service
Gonality and Clifford index from the secant order, and the numeric hypothesis checker
"""

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from ..config import Config
from ..utils.errors import ContractViolation
from .ci_curves import CICurve, ci_classical_genus, line_intersection_length, secant_order_ci
from .lines import SecantRecord
from .rational_curves import RationalCurveMap, intersection_divisor_with_line, secant_order
from .secant_search import SecantSearchOptions

logger = logging.getLogger(__name__)

GON_MINUS_2 = 'gon-2'
GON_MINUS_3 = 'gon-3'

STATUS_VERIFIED = 'verified'
STATUS_WITH_ASSUMPTIONS = 'verified-with-assumptions'
STATUS_OUT_OF_REGIME = 'out-of-regime'

ASSUMPTION_SURFACE = 'a surface of degree f through C satisfies the Picard condition (not checked)'
ASSUMPTION_COHOMOLOGY = 'h1(I_C(1)) = h1(I_C(alpha)) = 0 (condition a, not checked)'
ASSUMPTION_BIELLIPTIC = 'C is not bielliptic (not checked)'
ASSUMPTION_HIGH_TWIST = 'numeric conditions taken from the high-twist argument (s = 2, t >> 0)'
ASSUMPTION_PARTIAL_SEARCH = 'witness-mode search: longer secants may have been missed, l is a lower bound'

Curve = Union[RationalCurveMap, CICurve]


# ---------------------------------------------------------------------------
# Formula layer
# ---------------------------------------------------------------------------

def gonality_from_secants(dC: int, l: int) -> int:
    """
    Gonality of a curve whose gonality is computed by multisecants

    Raises:
        ContractViolation: l < 2 or dC <= l
    """

    if l < 2 or dC <= l:
        raise ContractViolation(f"need l >= 2 and dC > l, got dC={dC}, l={l}")
    return dC - l


def clifford_trichotomy(dC: int, l: int) -> Tuple[int, str]:
    """
    Clifford index and which of the two cases holds

    A curve without 4-secant lines (l = 3) has Clifford index dC - 6 =
    gonality - 3, computed by the hyperplane bundle; otherwise it is
    gonality - 2.

    Returns:
        Tuple of (clifford index, 'gon-3' or 'gon-2')

    Raises:
        ContractViolation: l < 3 or dC < l + 4
    """

    if l < 3:
        raise ContractViolation(f"the trichotomy needs l >= 3, got {l}")
    if dC < l + 4:
        raise ContractViolation(f"need dC >= l + 4, got dC={dC}, l={l}")
    gonality = gonality_from_secants(dC, l)
    if l == 3:
        return dC - 6, GON_MINUS_3
    return gonality - 2, GON_MINUS_2


def genus_subcanonical(alpha: int, dC: int) -> int:
    """
    Genus of a curve with canonical bundle O_C(alpha): (alpha * dC + 2) / 2

    Raises:
        ContractViolation: alpha * dC is odd
    """

    if (alpha * dC) % 2:
        raise ContractViolation(f"alpha * dC must be even, got alpha={alpha}, dC={dC}")
    return (alpha * dC + 2) // 2


def cm_degree_bound(clifford: int) -> int:
    """Upper bound floor(3 (clifford + 2) / 2) on the degree of a divisor computing the Clifford index"""

    if clifford < 0:
        raise ContractViolation(f"clifford index must be non-negative, got {clifford}")
    return 3 * (clifford + 2) // 2


# ---------------------------------------------------------------------------
# Hypothesis checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HypothesisReport:
    """Numeric conditions for one surface degree f"""

    mode: str
    alpha: int
    f: int
    p: int
    dC: int
    d_max: int
    cond_a_status: str
    cond_b: bool
    cond_c: bool
    witness_s: Optional[int]
    cond_d: bool
    lower_bound: int

    @property
    def overall(self) -> bool:
        return self.cond_b and self.cond_c and self.cond_d

    def failed_conditions(self) -> List[str]:
        return [name for name, ok in (('b', self.cond_b), ('c', self.cond_c), ('d', self.cond_d)) if not ok]

    def to_dict(self) -> dict:
        out = asdict(self)
        out['overall'] = self.overall
        return out


@dataclass
class HypothesisSearch:
    """Per-f reports of one search and the first passing one"""

    mode: str
    alpha: int
    dC: int
    reports: List[HypothesisReport] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return any(r.overall for r in self.reports)

    @property
    def passing(self) -> Optional[HypothesisReport]:
        return next((r for r in self.reports if r.overall), None)

    def to_dict(self) -> dict:
        passing = self.passing
        return {
            'mode': self.mode,
            'alpha': self.alpha,
            'dC': self.dC,
            'overall': self.overall,
            'passing': passing.to_dict() if passing else None,
            'reports': [r.to_dict() for r in self.reports],
        }


def _shifts(mode: str, alpha: int, p: int) -> Tuple[int, int, int]:
    """(slack in condition c, slack in condition d, twist used for the lower bound)"""
    if mode == 'gonality':
        return p + 4, p + 2, p
    return alpha + 3, alpha + 1, alpha - 1


def check_theorem_hypotheses(alpha: int, dC: int, mode: str = 'gonality', p: Optional[int] = None,
                             f_range: Optional[Sequence[int]] = None, d_max: Optional[int] = None,
                             config_class=Config) -> HypothesisSearch:
    """
    Search surface degrees f and integers s satisfying the numeric conditions

    Conditions per f:
        b) f < alpha + 4
        c) some integer s >= 1 with c0 - f > s + d_max / (s f)
        d) dC <= 2 (d0 - f) f
    where (c0, d0) = (p + 4, p + 2) in 'gonality' mode (p <= alpha, default
    alpha) and (alpha + 3, alpha + 1) in 'clifford' mode. s runs over
    [1, f (c0 - f)]. Condition a) is cohomological and always assumed.

    Args:
        alpha: canonical twist
        dC: curve degree
        mode: 'gonality' or 'clifford'
        p: twist for 'gonality' mode
        f_range: surface degrees to try, default 1 .. alpha + 3
        d_max: degree of the divisor in condition c), default dC - 3

    Returns:
        HypothesisSearch with one report per f

    Raises:
        ContractViolation: unknown mode, p > alpha, or an empty search range
    """

    if mode not in config_class.HYPOTHESIS_MODES:
        raise ContractViolation(f"unknown mode {mode!r}; expected one of {config_class.HYPOTHESIS_MODES}")
    p = alpha if p is None else p
    if p > alpha:
        raise ContractViolation(f"the twist p must not exceed alpha, got p={p}, alpha={alpha}")
    d_max = dC - 3 if d_max is None else d_max
    f_values = list(range(1, alpha + 4) if f_range is None else f_range)
    if not f_values or any(f < 1 for f in f_values):
        raise ContractViolation(f"empty or invalid surface degree range {f_values}")
    c0, d0, bound_twist = _shifts(mode, alpha, p)
    search = HypothesisSearch(mode, alpha, dC)
    for f in f_values:
        witness = None
        for s in range(1, f * (c0 - f) + 1):
            if c0 - f > s + Fraction(d_max, s * f):
                witness = s
                break
        report = HypothesisReport(
            mode=mode, alpha=alpha, f=f, p=p if mode == 'gonality' else alpha - 1, dC=dC, d_max=d_max,
            cond_a_status='assumed', cond_b=f < alpha + 4, cond_c=witness is not None, witness_s=witness,
            cond_d=dC <= 2 * (d0 - f) * f, lower_bound=(bound_twist - f + 3) * f,
        )
        logger.debug(f"f={f}: b={report.cond_b} c={report.cond_c} (s={witness}) d={report.cond_d}")
        search.reports.append(report)
    logger.info(f"Hypothesis search alpha={alpha}, dC={dC}, mode={mode}: "
                f"{'pass' if search.overall else 'fail'} over f in {f_values[0]}..{f_values[-1]}")
    return search


def check_ci_hypotheses(a: int, b: int, mode: str = 'gonality', p: Optional[int] = None,
                        d_max: Optional[int] = None, config_class=Config) -> HypothesisSearch:
    """
    Hypothesis search for a complete intersection of type (a, b)

    alpha = a + b - 4, dC = ab, and f runs over the degrees above a that
    satisfy condition b).

    Raises:
        ContractViolation: unless 1 <= a <= b, or no surface degree is admissible
    """

    if not 1 <= a <= b:
        raise ContractViolation(f"need 1 <= a <= b, got a={a}, b={b}")
    alpha = a + b - 4
    f_values = list(range(a + 1, alpha + 4))
    if not f_values:
        raise ContractViolation(f"no admissible surface degree for CI({a},{b})")
    return check_theorem_hypotheses(alpha, a * b, mode, p, f_values, d_max, config_class)


def check_null_correlation_hypotheses(t: int, mode: str = 'gonality', p: Optional[int] = None,
                                      d_max: Optional[int] = None, config_class=Config) -> HypothesisSearch:
    """
    Hypothesis search for the zero locus of a section of N(t)

    N is a null-correlation bundle (c1 = 0, c2 = 1), so dC = t^2 + 1 and
    alpha = 2t - 4. The least surface through C has degree t + 1, and f runs
    over the degrees above it that satisfy condition b).

    Raises:
        ContractViolation: no admissible surface degree (t < 3)
    """

    alpha = 2 * t - 4
    f_values = list(range(t + 2, alpha + 4))
    if not f_values:
        raise ContractViolation(f"no admissible surface degree for N({t})")
    return check_theorem_hypotheses(alpha, t * t + 1, mode, p, f_values, d_max, config_class)


# ---------------------------------------------------------------------------
# Analysis
# ---------------------------------------------------------------------------

@dataclass
class GonalityReport:
    kind: str
    dC: int
    l: int
    genus: Optional[int]
    gonality: Optional[int]
    clifford: Optional[int]
    clifford_case: Optional[str]
    pencil_degree_bound: Optional[int]
    status: str
    theorem_layer: bool
    assumptions: List[str] = field(default_factory=list)
    witnesses: List[SecantRecord] = field(default_factory=list)
    hypotheses: Optional[HypothesisSearch] = None
    complete: bool = True


def _witness_length(curve: Curve, record: SecantRecord) -> int:
    if isinstance(curve, CICurve):
        return line_intersection_length(curve, record.line)
    return intersection_divisor_with_line(curve, record.line).degree


def analyze_curve(curve: Curve, opts: Optional[SecantSearchOptions] = None, non_bielliptic: bool = False,
                  config_class=Config) -> GonalityReport:
    """
    Secant order, gonality and Clifford index of a curve

    Rational curves only get their secant structure: they are not
    subcanonical with a positive twist, so the theorem layer is off and the
    report is out of regime. Complete intersections with a < 4 are likewise
    out of regime. For the rest gonality and Clifford index follow from the
    secant order; every hypothesis that cannot be checked here is listed.

    Raises:
        ContractViolation: a maximal witness does not re-verify at length l
    """

    opts = opts or SecantSearchOptions.from_config(config_class)
    complete = opts.lists_every_line
    partial_notes = [] if complete else [ASSUMPTION_PARTIAL_SEARCH]
    if isinstance(curve, RationalCurveMap):
        l, witnesses = secant_order(curve, opts)
        report = GonalityReport('rational', curve.degree, l, 0, None, None, None, None,
                                STATUS_OUT_OF_REGIME, False, witnesses=witnesses, complete=complete,
                                assumptions=['rational curves are not subcanonical with alpha >= 4'] + partial_notes)
        logger.info(f"Rational degree-{curve.degree} curve: l={l}, theorem layer disabled")
        return report

    l, witnesses = secant_order_ci(curve, opts)
    for record in witnesses:
        if record.length < 3:
            continue
        length = _witness_length(curve, record)
        if length != l:
            raise ContractViolation(f"maximal witness re-verifies at length {length}, expected {l}")

    genus = genus_subcanonical(curve.alpha, curve.degree)
    if genus != ci_classical_genus(curve.a, curve.b):
        raise ContractViolation(f"subcanonical genus {genus} disagrees with the CI genus")
    if curve.a < 4:
        logger.warning(f"CI({curve.a},{curve.b}): a < 4, theorem layer out of regime")
        return GonalityReport('ci', curve.degree, l, genus, None, None, None, None, STATUS_OUT_OF_REGIME,
                              False, witnesses=witnesses, complete=complete,
                              assumptions=['a < 4: structural results not claimed'] + partial_notes)

    gonality = gonality_from_secants(curve.degree, l)
    clifford, case = clifford_trichotomy(curve.degree, l)
    hypotheses = check_ci_hypotheses(curve.a, curve.b, config_class=config_class)
    assumptions = [ASSUMPTION_SURFACE, ASSUMPTION_COHOMOLOGY]
    if not non_bielliptic:
        assumptions.append(ASSUMPTION_BIELLIPTIC)
    if not hypotheses.overall:
        assumptions.append(ASSUMPTION_HIGH_TWIST)
    if curve.smoothness != 'verified':
        assumptions.append(f'smoothness {curve.smoothness}')
    assumptions.extend(curve.notes)
    assumptions.extend(partial_notes)
    status = STATUS_VERIFIED if hypotheses.overall and complete else STATUS_WITH_ASSUMPTIONS
    logger.info(f"CI({curve.a},{curve.b}): l={l}, gonality {gonality}, clifford {clifford} ({case}), {status}")
    return GonalityReport('ci', curve.degree, l, genus, gonality, clifford, case, cm_degree_bound(clifford),
                          status, True, assumptions, witnesses, hypotheses, complete)
