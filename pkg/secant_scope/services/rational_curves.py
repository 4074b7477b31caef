"""
Rational Curves Service
Rational space curves as 4-dimensional linear systems of binary forms: embedding checks,
alignment, k-secant enumeration, secant order and planted-secant constructions
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..utils.errors import (
    AmbiguousVerdict,
    ConstructionBudgetExceeded,
    ContractViolation,
    NonFiniteSolutionSet,
    SolverFailure,
    ZeroFormError,
)
from .binary_forms import (
    BinaryForm,
    DivisorP1,
    Field,
    PointP1,
    _require_same_field,
    common_divisor,
    eval_form,
    form_from_divisor,
    gcd_degree,
    gcd_form,
    mobius_transform,
    random_form,
    random_unitary,
)
from .lines import LineP3, SecantRecord, complement, sort_records
from .linalg import exact_rank, numeric_rank
from .psolve import PolySystem, Polynomial, SolveOptions, multistart_newton, solve_square_system
from .secant_search import (
    CHART_VARS,
    Candidate,
    SecantFamily,
    SecantSearchOptions,
    gaussian,
    monic_from_roots,
    quadrisecant_count,
    chart_system,
    search_candidates,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RationalCurveMap:
    """
    Map P1 -> P3 given by four binary forms of a common degree

    Linear independence and base-point freeness are not enforced here;
    validate_embedding reports them.
    """

    degree: int
    forms: Tuple[BinaryForm, ...]
    field: Field = Field.COMPLEX

    def __post_init__(self):
        if self.degree < 3:
            raise ContractViolation(f"curve degree must be at least 3, got {self.degree}")
        if len(self.forms) != 4:
            raise ContractViolation(f"a curve in P3 needs 4 forms, got {len(self.forms)}")
        for f in self.forms:
            if f.degree != self.degree:
                raise ContractViolation(f"form of degree {f.degree} in a degree-{self.degree} curve")
        if _require_same_field(*self.forms) is not self.field:
            raise ContractViolation(f"forms are {self.forms[0].field.value}, curve tagged {self.field.value}")
        if all(f.is_zero for f in self.forms):
            raise ZeroFormError("all four forms are zero")

    @classmethod
    def from_forms(cls, forms: Sequence[BinaryForm]) -> 'RationalCurveMap':
        forms = tuple(forms)
        if not forms:
            raise ContractViolation("no forms given")
        return cls(forms[0].degree, forms, _require_same_field(*forms))

    @property
    def is_exact(self) -> bool:
        return self.field is Field.RATIONAL

    def to_complex(self) -> 'RationalCurveMap':
        if not self.is_exact:
            return self
        return RationalCurveMap(self.degree, tuple(f.to_complex() for f in self.forms), Field.COMPLEX)

    def coefficient_rows(self) -> List[list]:
        return [list(f.coeffs) for f in self.forms]

    def array(self) -> np.ndarray:
        return np.array([f.array() for f in self.forms])

    def rank(self) -> int:
        if self.is_exact:
            return exact_rank(self.coefficient_rows())
        return numeric_rank(self.array()).rank

    def evaluate(self, p: PointP1) -> Tuple:
        if self.is_exact and p.field is not Field.RATIONAL:
            return self.to_complex().evaluate(p)
        if not self.is_exact:
            p = p.to_complex()
        return tuple(eval_form(f, p) for f in self.forms)

    def pullback(self, linear_form: Sequence) -> BinaryForm:
        """The binary form A o f for a linear form A on P3"""

        curve = self
        if infer_complex(linear_form):
            curve = self.to_complex()
        result = BinaryForm.zero(curve.degree, curve.field)
        for coeff, f in zip(linear_form, curve.forms):
            if coeff != 0:
                result = result + f.scale(coeff)
        return result

    def mobius(self, matrix) -> 'RationalCurveMap':
        forms = tuple(mobius_transform(f, matrix) for f in self.forms)
        return RationalCurveMap(self.degree, forms, forms[0].field)


def infer_complex(values: Sequence) -> bool:
    return any(isinstance(v, complex) for v in values)


# ---------------------------------------------------------------------------
# Embedding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingVerdict:
    """Outcome of validate_embedding; status is valid, invalid or inconclusive"""

    status: str
    reasons: Tuple[str, ...] = ()
    base_points: DivisorP1 = field(default_factory=DivisorP1)
    double_points: Tuple[Tuple[PointP1, PointP1], ...] = ()
    non_immersive_points: Tuple[PointP1, ...] = ()

    @property
    def valid(self) -> bool:
        return self.status == 'valid'

    def to_dict(self) -> dict:
        return {
            'status': self.status,
            'reasons': list(self.reasons),
            'base_points': [[str(p.s), str(p.t)] for p in self.base_points.support],
            'double_points': [[[str(p.s), str(p.t)], [str(q.s), str(q.t)]] for p, q in self.double_points],
            'non_immersive_points': [[str(p.s), str(p.t)] for p in self.non_immersive_points],
        }


def _divided_difference(u: np.ndarray, v: np.ndarray) -> Polynomial:
    """
    (U(p)V(q) - V(p)U(q)) / (p - q) for polynomials with coefficients lowest power first
    """

    out = Polynomial(2)
    n = len(u)
    for a in range(n):
        for b in range(a):
            coeff = complex(u[a] * v[b] - v[a] * u[b])
            if coeff == 0:
                continue
            # p^a q^b - p^b q^a = (pq)^b (p - q) sum_r p^r q^(a-b-1-r)
            for r in range(a - b):
                out = out + Polynomial(2, {(b + r, a - 1 - r): coeff})
    return out


def _double_point_system(curve: RationalCurveMap, rotation: np.ndarray) -> List[Polynomial]:
    rotated = curve.to_complex().mobius(rotation)
    # dehomogenize at t = 1: coefficient of p^r is the t-power d - r entry
    rows = [f.array()[::-1] for f in rotated.forms]
    rows = [r / max(np.abs(r).max(), 1e-300) for r in rows]
    polys = []
    for i in range(4):
        for j in range(i + 1, 4):
            h = _divided_difference(rows[i], rows[j])
            if not h.is_zero:
                polys.append(h)
    return polys


def _double_points(curve: RationalCurveMap, opts: SolveOptions, rng: np.random.Generator
                   ) -> Tuple[List[Tuple[PointP1, PointP1]], List[PointP1]]:
    rotation = random_unitary(rng, 2)
    polys = _double_point_system(curve, rotation)
    if not polys:
        raise NonFiniteSolutionSet("all points of the curve coincide")
    full = PolySystem.from_polynomials(polys, 2)
    squared = []
    for _ in range(2):
        weights = gaussian(rng, len(polys))
        combo = Polynomial(2)
        for w, h in zip(weights, polys):
            combo = combo + h * complex(w)
        squared.append(combo)
    solutions, _ = solve_square_system(PolySystem.from_polynomials(squared, 2), opts)

    def to_point(z: complex) -> PointP1:
        s, t = rotation @ np.array([z, 1.0])
        return PointP1(complex(s), complex(t))

    pairs: List[Tuple[PointP1, PointP1]] = []
    diagonal: List[PointP1] = []
    if len(solutions):
        residual = full.relative_residual(solutions)
        for (p, q), res in zip(solutions, residual):
            if res > 1e-7:
                continue
            if abs(p - q) <= 1e-6 * max(1.0, abs(p)):
                diagonal.append(to_point(p))
                continue
            a, b = sorted([to_point(p), to_point(q)], key=lambda x: x.sort_key())
            if not any(a.same_as(x, 1e-6) and b.same_as(y, 1e-6) for x, y in pairs):
                pairs.append((a, b))
    return pairs, diagonal


def _jacobian_minors(curve: RationalCurveMap) -> List[BinaryForm]:
    ds = [f.derivative_s() for f in curve.forms]
    dt = [f.derivative_t() for f in curve.forms]
    return [ds[i] * dt[j] - ds[j] * dt[i] for i in range(4) for j in range(i + 1, 4)]


def _non_immersive_points(curve: RationalCurveMap, rng: np.random.Generator,
                          samples: int) -> List[PointP1]:
    minors = _jacobian_minors(curve)
    if all(m.is_zero for m in minors):
        raise NonFiniteSolutionSet("the differential vanishes identically")
    bad = list(common_divisor(minors).support)
    lifted = curve.to_complex()
    for z in gaussian(rng, samples):
        p = PointP1(complex(z), 1)
        jac = np.array([[eval_form(f.derivative_s(), p), eval_form(f.derivative_t(), p)]
                        for f in lifted.forms])
        if numeric_rank(jac.T, what='parametrization differential').rank < 2:
            bad.append(p)
    return bad


def validate_embedding(curve: RationalCurveMap, seed: int = 0, config_class=Config) -> EmbeddingVerdict:
    """
    Decide whether the forms define an embedding of P1

    Checks linear independence, base points (exact gcd or matched roots),
    injectivity (off-diagonal solutions of the divided double-point system)
    and immersion (common roots of the 2x2 minors of the differential plus
    random samples).

    Args:
        curve: the parametrization
        seed: seed for the random changes of coordinates
        config_class: tolerances and budgets

    Returns:
        EmbeddingVerdict
    """

    rng = np.random.default_rng([seed, 313])
    opts = SolveOptions.from_config(config_class, seed=seed)
    reasons: List[str] = []
    if curve.rank() < 4:
        reasons.append('degenerate')
    base = common_divisor(curve.forms)
    if base.degree:
        reasons.append('base_point')
        logger.info(f"Curve has {base.degree} base point(s)")
        return EmbeddingVerdict('invalid', tuple(reasons), base)

    pairs: List[Tuple[PointP1, PointP1]] = []
    bad: List[PointP1] = []
    try:
        pairs, _ = _double_points(curve, opts, rng)
        bad = _non_immersive_points(curve, rng, config_class.IMMERSION_SAMPLE_POINTS)
    except NonFiniteSolutionSet as e:
        reasons.append('non_injective')
        logger.info(f"Double-point locus is not finite: {e.message}")
    except (AmbiguousVerdict, SolverFailure) as e:
        logger.warning(f"Embedding check inconclusive: {e.message}")
        return EmbeddingVerdict('inconclusive', tuple(reasons) + (f'inconclusive: {e.message}',), base)
    if pairs:
        reasons.append('non_injective')
    if bad:
        reasons.append('non_immersive')
    status = 'invalid' if reasons else 'valid'
    return EmbeddingVerdict(status, tuple(reasons), base, tuple(pairs), tuple(bad))


# ---------------------------------------------------------------------------
# Alignment
# ---------------------------------------------------------------------------

def _evaluation_rank(curve: RationalCurveMap, pts: Sequence[PointP1]) -> int:
    exact = curve.is_exact and all(p.field is Field.RATIONAL for p in pts)
    if exact:
        return exact_rank([list(curve.evaluate(p)) for p in pts])
    lifted = curve.to_complex()
    rows = []
    for p in pts:
        row = np.array(lifted.evaluate(p.to_complex()), dtype=complex)
        rows.append(row / max(np.linalg.norm(row), 1e-300))
    return numeric_rank(rows, strict=True, what='evaluation matrix').rank


def _pencil_dimension(curve: RationalCurveMap, pts: Sequence[PointP1]) -> int:
    """Dimension of the subspace of the linear system vanishing on all points"""

    d, k = curve.degree, len(pts)
    if k > d:
        return 0
    exact = curve.is_exact and all(p.field is Field.RATIONAL for p in pts)
    m = form_from_divisor(DivisorP1.from_points(pts))
    multiples = [m * BinaryForm.monomial(d - k, i, m.field) for i in range(d - k + 1)]
    if exact:
        rows = [list(f.coeffs) for f in curve.forms] + [list(g.coeffs) for g in multiples]
        return 4 + len(multiples) - exact_rank(rows)
    rows = [f.array() / f.norm() for f in curve.to_complex().forms if not f.is_zero]
    rows += [g.to_complex().array() / g.norm() for g in multiples]
    rank = numeric_rank(rows, strict=True, what='pencil intersection').rank
    return 4 + len(multiples) - rank


def is_aligned(curve: RationalCurveMap, pts: Sequence[PointP1]) -> bool:
    """
    True when the images of the points lie on one line

    Computed as rank <= 2 of the evaluation matrix and, independently, as the
    dimension of the forms of the linear system divisible by the points'
    form; the two must agree.

    Raises:
        ContractViolation: fewer than 2 points or repeated points
        AmbiguousVerdict: a numerical rank is ambiguous or the criteria disagree
    """

    pts = list(pts)
    if len(pts) < 2:
        raise ContractViolation("alignment needs at least 2 points")
    for i, p in enumerate(pts):
        if any(p.same_as(q) for q in pts[:i]):
            raise ContractViolation("alignment points must be distinct")
    by_rank = _evaluation_rank(curve, pts) <= 2
    by_pencil = _pencil_dimension(curve, pts) >= 2
    if by_rank != by_pencil:
        raise AmbiguousVerdict(
            "alignment criteria disagree",
            {'evaluation_rank_test': by_rank, 'pencil_test': by_pencil},
        )
    return by_rank


# ---------------------------------------------------------------------------
# Lines and secants
# ---------------------------------------------------------------------------

def intersection_divisor_with_line(curve: RationalCurveMap, line: LineP3) -> DivisorP1:
    """
    Preimage of C cap L as a divisor on P1

    Raises:
        ContractViolation: both dual-frame pullbacks vanish identically
    """

    if line.field is Field.COMPLEX or not curve.is_exact:
        curve, line = curve.to_complex(), line.to_complex()
    a, b = (curve.pullback(row) for row in line.dual_frame)
    if a.is_zero and b.is_zero:
        raise ContractViolation("the curve lies inside the line")
    if not curve.is_exact:
        a = a if a.is_zero else a.scale(1 / a.norm())
        b = b if b.is_zero else b.scale(1 / b.norm())
    return common_divisor([a, b])


def _record(curve: RationalCurveMap, line: LineP3, k: int, residual: float) -> SecantRecord:
    divisor = intersection_divisor_with_line(curve, line)
    lifted, lline = curve.to_complex(), line.to_complex()
    a, b = (lifted.pullback(row) for row in lline.dual_frame)
    if not a.is_zero and not b.is_zero and divisor.degree:
        try:
            by_gcd = gcd_degree(a.scale(1 / a.norm()), b.scale(1 / b.norm()))
            if by_gcd != divisor.degree:
                logger.warning(f"Divisor degree {divisor.degree} differs from gcd degree {by_gcd}")
        except AmbiguousVerdict:
            logger.warning("Gcd degree of a candidate secant is ambiguous; keeping the root count")
    return SecantRecord(line, divisor, divisor.degree, divisor.degree == k, residual=residual)


def verified_records(curve: RationalCurveMap, candidates: Sequence[Candidate], k: int,
                     tolerance: float) -> List[SecantRecord]:
    records: List[SecantRecord] = []
    for cand in sorted(candidates, key=lambda c: c.residual):
        if cand.residual > tolerance:
            continue
        if any(cand.line.same_line(r.line) for r in records):
            continue
        record = _record(curve, cand.line, k, cand.residual)
        if record.length >= k:
            records.append(record)
    return sort_records(records)


class RationalSecantFamily(SecantFamily):
    """Pencils of the linear system whose generators share a monic factor"""

    def __init__(self, curve: RationalCurveMap, rng: np.random.Generator):
        self.degree = curve.degree
        self.rotation = random_unitary(rng, 2)
        rotated = curve.to_complex().mobius(self.rotation).array()
        self.target = (rotated / np.abs(rotated).max()).ravel()

    def _rows(self, params: np.ndarray) -> List[List[complex]]:
        return [[complex(v) for v in row] for row in np.reshape(params, (4, self.degree + 1))]

    def forms(self, params, pivots, n_vars):
        rows = self._rows(params)
        i, j = pivots
        q1, q2 = complement(pivots)
        a, b, c, e = (Polynomial.variable(n_vars, v) for v in range(4))
        g1 = [a * rows[q1][r] + b * rows[q2][r] + rows[i][r] for r in range(self.degree + 1)]
        g2 = [c * rows[q1][r] + e * rows[q2][r] + rows[j][r] for r in range(self.degree + 1)]
        return g1, g2

    def plant(self, pivots, k, rng):
        d = self.degree
        i, j = pivots
        q1, q2 = complement(pivots)
        rows = gaussian(rng, 4, d + 1)
        a0, b0, c0, e0 = gaussian(rng, 4)
        m0 = monic_from_roots(gaussian(rng, k))
        u, v = gaussian(rng, d - k + 1), gaussian(rng, d - k + 1)
        rows[i] = np.convolve(m0, u) - a0 * rows[q1] - b0 * rows[q2]
        rows[j] = np.convolve(m0, v) - c0 * rows[q1] - e0 * rows[q2]
        return rows.ravel(), np.concatenate([[a0, b0, c0, e0], m0[1:]])

    def _dual_rows(self, pivots, values) -> np.ndarray:
        i, j = pivots
        q1, q2 = complement(pivots)
        rows = np.zeros((2, 4), dtype=complex)
        rows[0, i], rows[0, q1], rows[0, q2] = 1, values[0], values[1]
        rows[1, j], rows[1, q1], rows[1, q2] = 1, values[2], values[3]
        return rows

    def line(self, pivots, values):
        a, b = self._dual_rows(pivots, values)
        return LineP3.from_dual_frame(a, b, Field.COMPLEX)

    def convert(self, values, source, dest):
        rows = self._dual_rows(source, values)
        block = rows[:, list(dest)]
        if abs(np.linalg.det(block)) <= 1e-8 * np.linalg.norm(rows) ** 2:
            return None
        reduced = np.linalg.solve(block, rows)
        q1, q2 = complement(dest)
        chart = [reduced[0, q1], reduced[0, q2], reduced[1, q1], reduced[1, q2]]
        return np.concatenate([chart, values[4:]])

    def count_hint(self, k):
        return classical_quadrisecant_count(self.degree) if k == 4 and self.degree >= 5 else None


def classical_quadrisecant_count(d: int) -> int:
    """(d-2)(d-3)^2(d-4)/12, the number of 4-secants of a general rational curve of degree d"""
    return quadrisecant_count(d, 0)


def find_k_secants(curve: RationalCurveMap, k: int,
                   opts: Optional[SecantSearchOptions] = None) -> List[SecantRecord]:
    """
    All lines meeting the curve in a scheme of length at least k

    Pencils of the linear system whose two generators are divisible by a
    common monic degree-k form are solved per chart; every candidate is
    verified against the curve by its intersection divisor. For k > 4 the
    4-secant set is filtered by length.

    Args:
        curve: a valid rational curve
        k: minimum intersection length, 3 <= k <= d
        opts: search options

    Returns:
        SecantRecords sorted by length then Plücker coordinates

    Raises:
        ContractViolation: k < 3 or k > d
        NonFiniteSolutionSet: k = 3 and trisecants exist (they come in families);
            the found witnesses ride along on the exception
    """

    opts = opts or SecantSearchOptions()
    d = curve.degree
    if k < 3:
        raise ContractViolation(f"k must be at least 3, got {k}")
    if k > d:
        raise ContractViolation("k exceeds curve degree", {'k': k, 'degree': d})
    if k == d:
        return []
    family = RationalSecantFamily(curve, np.random.default_rng([opts.seed, 101]))
    if k == 3:
        candidates, diag = search_candidates(family, 3, opts, 'witness', sliced=True)
        records = verified_records(curve, candidates, 3, opts.residual_tolerance)
        if records:
            raise NonFiniteSolutionSet(
                "trisecant lines form a positive-dimensional family",
                witnesses=records, details=diag.to_dict(),
            )
        return []
    candidates, _ = search_candidates(family, 4, opts, opts.resolved_mode('exhaustive'))
    records = verified_records(curve, candidates, k, opts.residual_tolerance)
    logger.info(f"Degree-{d} curve: {len(records)} lines of length >= {k}")
    return records


def quadrisecant_oracle(curve: RationalCurveMap, opts: Optional[SecantSearchOptions] = None,
                        n_starts: Optional[int] = None) -> List[SecantRecord]:
    """
    4-secant lines by damped Newton from random starts in every chart

    No path tracking and no monodromy are involved, so agreement with
    find_k_secants(curve, 4) is an independent check of the count.
    """

    opts = opts or SecantSearchOptions()
    if curve.degree < 5:
        raise ContractViolation(f"4-secant lines need degree at least 5, got {curve.degree}")
    family = RationalSecantFamily(curve, np.random.default_rng([opts.seed, 101]))
    candidates = []
    for pivots in opts.charts:
        system = chart_system(family, family.target, pivots, 4)
        points, _ = multistart_newton(system, opts.solve, n_starts)
        if not len(points):
            continue
        for x, residual in zip(points, system.relative_residual(points)):
            try:
                line = family.line(pivots, x[:CHART_VARS])
            except ContractViolation:
                continue
            candidates.append(Candidate(line, pivots, float(residual)))
    records = verified_records(curve, candidates, 4, opts.residual_tolerance)
    logger.info(f"Multistart oracle: {len(records)} 4-secant lines of the degree-{curve.degree} curve")
    return records


def secant_order(curve: RationalCurveMap, opts: Optional[SecantSearchOptions] = None
                 ) -> Tuple[int, List[SecantRecord]]:
    """
    Largest length of a subscheme of the curve contained in a line

    Returns:
        Tuple of (order, witnesses of that length marked maximal)
    """

    opts = opts or SecantSearchOptions()
    d = curve.degree
    trisecants: List[SecantRecord] = []
    if d > 3:
        try:
            trisecants = find_k_secants(curve, 3, opts)
        except NonFiniteSolutionSet as e:
            trisecants = [w for w in e.witnesses if isinstance(w, SecantRecord)]
    if not trisecants:
        return 2, []
    order, witnesses = 3, trisecants
    if d > 4:
        longer = find_k_secants(curve, 4, opts)
        if longer:
            order = max(r.length for r in longer)
            witnesses = [r for r in longer if r.length == order]
    logger.info(f"Secant order of the degree-{d} curve: {order}")
    return order, [r.marked_maximal() for r in witnesses]


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def _random_divisor(k: int, rng: np.random.Generator, bound: int = 9) -> DivisorP1:
    values = rng.choice(np.arange(-bound, bound + 1), size=k, replace=False)
    return DivisorP1.from_points(PointP1(int(v), 1, Field.RATIONAL) for v in values)


def _coprime_pair(degree: int, rng: np.random.Generator) -> Tuple[BinaryForm, BinaryForm]:
    if degree == 1:
        return BinaryForm(1, (1, 0), Field.RATIONAL), BinaryForm(1, (0, 1), Field.RATIONAL)
    while True:
        u = random_form(degree, rng, Field.RATIONAL)
        v = random_form(degree, rng, Field.RATIONAL)
        if not u.is_zero and not v.is_zero and gcd_form(u, v).degree == 0:
            return u, v


def construct_with_k_secant(d: int, k: int, seed: int = 0, config_class=Config
                            ) -> Tuple[RationalCurveMap, SecantRecord]:
    """
    Random embedded rational curve with a planted k-secant line

    Two basis forms are m*u and m*v for the form m of a random degree-k
    divisor, so the pencil they span, the line x0 = x1 = 0, has that divisor
    in its base locus. For k = d - 1 the cofactors are s and t.

    Args:
        d: curve degree, at least 4
        k: planted length, 3 <= k <= d - 1
        seed: base seed; attempt n uses the seed sequence [seed, n]
        config_class: retry budget and tolerances

    Returns:
        Tuple of (curve with rational coefficients, planted SecantRecord)

    Raises:
        ContractViolation: parameters out of range
        ConstructionBudgetExceeded: no attempt passed validate_embedding
    """

    if d < 4 or not 3 <= k <= d - 1:
        raise ContractViolation(f"need d >= 4 and 3 <= k <= d - 1, got d={d}, k={k}")
    trail = []
    for attempt in range(config_class.CONSTRUCTION_RETRY_BUDGET):
        trail.append([seed, attempt])
        rng = np.random.default_rng([seed, attempt])
        divisor = _random_divisor(k, rng)
        m = form_from_divisor(divisor)
        u, v = _coprime_pair(d - k, rng)
        others = [random_form(d, rng, Field.RATIONAL) for _ in range(2)]
        curve = RationalCurveMap(d, (m * u, m * v, *others), Field.RATIONAL)
        verdict = validate_embedding(curve, seed=seed + attempt, config_class=config_class)
        if not verdict.valid:
            logger.debug(f"Attempt {attempt} rejected: {', '.join(verdict.reasons)}")
            continue
        line = LineP3.from_dual_frame((1, 0, 0, 0), (0, 1, 0, 0), Field.RATIONAL)
        met = intersection_divisor_with_line(curve, line)
        record = SecantRecord(line, met, met.degree, met.degree == k)
        logger.info(f"Constructed degree-{d} curve with planted {k}-secant after {attempt + 1} attempt(s)")
        return curve, record
    raise ConstructionBudgetExceeded(
        f"no valid degree-{d} curve with a planted {k}-secant within {len(trail)} attempts", trail,
    )


def random_rational_curve(d: int, seed: int = 0, config_class=Config) -> RationalCurveMap:
    """
    Random embedded rational curve of degree d with integer coefficients

    Raises:
        ContractViolation: d < 3
        ConstructionBudgetExceeded: no attempt passed validate_embedding
    """

    if d < 3:
        raise ContractViolation(f"curve degree must be at least 3, got {d}")
    trail = []
    for attempt in range(config_class.CONSTRUCTION_RETRY_BUDGET):
        trail.append([seed, attempt])
        rng = np.random.default_rng([seed, attempt, 17])
        forms = tuple(random_form(d, rng, Field.RATIONAL) for _ in range(4))
        curve = RationalCurveMap(d, forms, Field.RATIONAL)
        if validate_embedding(curve, seed=seed + attempt, config_class=config_class).valid:
            return curve
    raise ConstructionBudgetExceeded(f"no valid random degree-{d} curve within {len(trail)} attempts", trail)
