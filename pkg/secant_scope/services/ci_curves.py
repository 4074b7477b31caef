"""
Complete Intersection Service
Curves cut out by two surfaces in P3: restriction to lines, secant search,
lines on surfaces, smoothness screening and planted-secant constructions
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..utils.errors import ConstructionBudgetExceeded, ContractViolation, NonFiniteSolutionSet
from .binary_forms import (
    BinaryForm,
    DivisorP1,
    Field,
    Scalar,
    coerce_scalar,
    common_divisor,
    gcd_degree,
    infer_field,
    random_unitary,
    remainder_by_monic,
    roots_of_form,
)
from .lines import (
    CHART_PIVOTS,
    LineP3,
    SecantRecord,
    complement,
    dedup_lines,
    random_rational_line,
    reparametrize_roots,
    sort_records,
)
from .linalg import numeric_rank
from .psolve import PolySystem, Polynomial, SolveOptions, multistart_newton, solve_square_system
from .secant_search import (
    Candidate,
    SecantFamily,
    SecantSearchOptions,
    gaussian,
    monic_from_roots,
    quadrisecant_count,
    search_candidates,
)

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int, int, int]

SMOOTHNESS_STATES = ('verified', 'verified-at-samples', 'unknown')


@lru_cache(maxsize=None)
def monomials(degree: int) -> Tuple[Exponent, ...]:
    """Exponent vectors of degree-n monomials in x0..x3, x0-heaviest first"""

    out = []
    for e0 in range(degree, -1, -1):
        for e1 in range(degree - e0, -1, -1):
            for e2 in range(degree - e0 - e1, -1, -1):
                out.append((e0, e1, e2, degree - e0 - e1 - e2))
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(degree: int) -> Dict[Exponent, int]:
    return {e: i for i, e in enumerate(monomials(degree))}


def forms_dimension(degree: int) -> int:
    """h0 of degree-n forms on P3"""
    return comb(degree + 3, 3) if degree >= 0 else 0


@dataclass(frozen=True)
class SurfacePoly:
    """Nonzero homogeneous polynomial in x0..x3 stored as sorted (exponent, coefficient) terms"""

    degree: int
    terms: Tuple[Tuple[Exponent, Scalar], ...]
    field: Field = Field.COMPLEX

    def __post_init__(self):
        if self.degree < 1:
            raise ContractViolation(f"surface degree must be positive, got {self.degree}")
        merged: Dict[Exponent, Scalar] = {}
        for exp, coeff in self.terms:
            exp = tuple(int(v) for v in exp)
            if len(exp) != 4 or min(exp) < 0:
                raise ContractViolation(f"invalid exponent vector {exp}")
            if sum(exp) != self.degree:
                raise ContractViolation(f"term {exp} is not of degree {self.degree}")
            merged[exp] = merged.get(exp, 0) + coerce_scalar(coeff, self.field)
        terms = tuple(sorted(((e, c) for e, c in merged.items() if c != 0), reverse=True))
        if not terms:
            raise ContractViolation("the zero polynomial is not a surface")
        object.__setattr__(self, 'terms', terms)

    @classmethod
    def from_terms(cls, terms: Sequence, field: Optional[Field] = None) -> 'SurfacePoly':
        terms = [(tuple(e), c) for e, c in terms]
        if not terms:
            raise ContractViolation("the zero polynomial is not a surface")
        field = field or infer_field([c for _, c in terms])
        return cls(sum(terms[0][0]), tuple(terms), field)

    @classmethod
    def from_vector(cls, degree: int, vector: Sequence, field: Field = Field.COMPLEX) -> 'SurfacePoly':
        return cls(degree, tuple(zip(monomials(degree), vector)), field)

    @classmethod
    def random(cls, degree: int, rng: np.random.Generator, field: Field = Field.RATIONAL,
               bound: int = 9) -> 'SurfacePoly':
        n = forms_dimension(degree)
        if field is Field.RATIONAL:
            values = [int(v) for v in rng.integers(-bound, bound + 1, size=n)]
            if not any(values):
                values[0] = 1
            return cls.from_vector(degree, values, Field.RATIONAL)
        return cls.from_vector(degree, list(gaussian(rng, n)), Field.COMPLEX)

    @property
    def is_exact(self) -> bool:
        return self.field is Field.RATIONAL

    def to_complex(self) -> 'SurfacePoly':
        if not self.is_exact:
            return self
        return SurfacePoly(self.degree, tuple((e, complex(c)) for e, c in self.terms), Field.COMPLEX)

    def vector(self) -> np.ndarray:
        index = _monomial_index(self.degree)
        out = np.zeros(len(index), dtype=complex)
        for e, c in self.terms:
            out[index[e]] = complex(c)
        return out

    def __add__(self, other: 'SurfacePoly') -> 'SurfacePoly':
        if other.degree != self.degree:
            raise ContractViolation(f"cannot add surfaces of degrees {self.degree} and {other.degree}")
        field = Field.RATIONAL if self.is_exact and other.is_exact else Field.COMPLEX
        a, b = (self, other) if field is Field.RATIONAL else (self.to_complex(), other.to_complex())
        return SurfacePoly(self.degree, a.terms + b.terms, field)

    def __mul__(self, other: 'SurfacePoly') -> 'SurfacePoly':
        field = Field.RATIONAL if self.is_exact and other.is_exact else Field.COMPLEX
        a, b = (self, other) if field is Field.RATIONAL else (self.to_complex(), other.to_complex())
        out: Dict[Exponent, Scalar] = {}
        for e1, c1 in a.terms:
            for e2, c2 in b.terms:
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SurfacePoly(self.degree + other.degree, tuple(out.items()), field)

    def to_polynomial(self) -> Polynomial:
        return Polynomial(4, {e: complex(c) for e, c in self.terms})

    def evaluate(self, x: Sequence) -> complex:
        return self.to_polynomial().evaluate([complex(v) for v in x])

    def gradient(self, x: Sequence) -> np.ndarray:
        x = [complex(v) for v in x]
        grad = np.zeros(4, dtype=complex)
        for e, c in self.terms:
            for v in range(4):
                if e[v]:
                    term = complex(c) * e[v]
                    for w in range(4):
                        power = e[w] - (w == v)
                        if power:
                            term *= x[w] ** power
                    grad[v] += term
        return grad

    def transform(self, matrix) -> 'SurfacePoly':
        """The polynomial y -> F(M y)"""

        m = np.asarray(matrix, dtype=complex)
        images = [Polynomial(4, {tuple(int(i == j) for i in range(4)): complex(m[r, j]) for j in range(4)})
                  for r in range(4)]
        powers = [[Polynomial.constant(4, 1)] for _ in range(4)]
        for r in range(4):
            for _ in range(self.degree):
                powers[r].append(powers[r][-1] * images[r])
        total = Polynomial(4)
        for e, c in self.terms:
            term = Polynomial.constant(4, complex(c))
            for r in range(4):
                if e[r]:
                    term = term * powers[r][e[r]]
            total = total + term
        return SurfacePoly(self.degree, tuple(total.terms.items()), Field.COMPLEX)

    def normalized(self) -> 'SurfacePoly':
        vec = self.vector()
        return SurfacePoly.from_vector(self.degree, list(vec / np.abs(vec).max()), Field.COMPLEX)

    def to_terms_json(self) -> List[list]:
        return [[list(e), c] for e, c in self.terms]


def _require_surface_pair(fa: SurfacePoly, fb: SurfacePoly):
    if fa.degree > fb.degree:
        raise ContractViolation(f"expected deg Fa <= deg Fb, got {fa.degree} > {fb.degree}")


@dataclass(frozen=True)
class CICurve:
    """Complete intersection of two surfaces, deg fa <= deg fb"""

    fa: SurfacePoly
    fb: SurfacePoly
    smoothness: str = 'unknown'
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        _require_surface_pair(self.fa, self.fb)
        if self.smoothness not in SMOOTHNESS_STATES:
            raise ContractViolation(f"unknown smoothness status {self.smoothness!r}")

    @property
    def a(self) -> int:
        return self.fa.degree

    @property
    def b(self) -> int:
        return self.fb.degree

    @property
    def degree(self) -> int:
        return self.a * self.b

    @property
    def alpha(self) -> int:
        """Twist of the canonical bundle: omega_C = O_C(a + b - 4)"""
        return self.a + self.b - 4

    @property
    def genus(self) -> int:
        return ci_classical_genus(self.a, self.b)

    @property
    def is_exact(self) -> bool:
        return self.fa.is_exact and self.fb.is_exact

    def with_smoothness(self, status: str) -> 'CICurve':
        return replace(self, smoothness=status)

    def transform(self, matrix) -> 'CICurve':
        return CICurve(self.fa.transform(matrix), self.fb.transform(matrix), self.smoothness, self.notes)


def ci_classical_genus(a: int, b: int) -> int:
    """ab(a + b - 4)/2 + 1"""
    return a * b * (a + b - 4) // 2 + 1


def hilbert_dim_ci(a: int, b: int) -> int:
    """
    Dimension of the family of complete intersections of type (a, b)

    Raises:
        ContractViolation: unless 1 <= a <= b
    """

    if not 1 <= a <= b:
        raise ContractViolation(f"need 1 <= a <= b, got a={a}, b={b}")
    if a == b:
        return 2 * forms_dimension(a) - 4
    return forms_dimension(a) + forms_dimension(b) - forms_dimension(b - a) - 2


# ---------------------------------------------------------------------------
# Restriction to lines
# ---------------------------------------------------------------------------

def restrict_to_line(surface: SurfacePoly, line: LineP3) -> BinaryForm:
    """
    F(s P + t Q) for the frame (P, Q) of the line

    Exact when both the surface and the line are rational.
    """

    exact = surface.is_exact and line.field is Field.RATIONAL
    p, q = line.frame if exact else line.to_complex().frame
    return _restrict_frame(surface if exact else surface.to_complex(), p, q)


def _restrict_frame(surface: SurfacePoly, p: Sequence, q: Sequence) -> BinaryForm:
    exact = surface.is_exact
    field = Field.RATIONAL if exact else Field.COMPLEX
    linear = [BinaryForm(1, (p[r], q[r]), field) for r in range(4)]
    powers = [[BinaryForm(0, (1,), field)] for _ in range(4)]
    for r in range(4):
        for _ in range(surface.degree):
            powers[r].append(powers[r][-1] * linear[r])
    result = BinaryForm.zero(surface.degree, field)
    for e, c in surface.terms:
        term = BinaryForm(0, (c,), field)
        for r in range(4):
            if e[r]:
                term = term * powers[r][e[r]]
        result = result + term
    return result


def _restriction_residual(surface: SurfacePoly, line: LineP3) -> float:
    """Size of F restricted to L relative to the same restriction taken with absolute values"""

    frame = line.to_complex().frame
    values = _restrict_frame(surface.to_complex(), *frame).array()
    p, q = (np.abs(np.array(row, dtype=complex)) for row in frame)
    magnitude = SurfacePoly(surface.degree, tuple((e, abs(complex(c))) for e, c in surface.terms), Field.COMPLEX)
    scale = _restrict_frame(magnitude, p, q).array()
    return float(np.max(np.abs(values)) / max(np.max(np.abs(scale)), 1e-300))


def _restrictions(curve: CICurve, line: LineP3,
                  tolerance: float = Config.RESIDUAL_TOLERANCE) -> Tuple[BinaryForm, BinaryForm]:
    """Both restricted forms, floating ones below tolerance replaced by the zero form"""

    forms = []
    for surface in (curve.fa, curve.fb):
        form = restrict_to_line(surface, line)
        if not form.is_exact and not form.is_zero and _restriction_residual(surface, line) <= tolerance:
            form = BinaryForm.zero(form.degree, Field.COMPLEX)
        forms.append(form)
    return forms[0], forms[1]


def intersection_divisor_ci(curve: CICurve, line: LineP3) -> DivisorP1:
    """
    Preimage of C cap L on the line's parameter P1

    Raises:
        ContractViolation: the line lies on both surfaces
    """

    fa, fb = _restrictions(curve, line)
    if fa.is_zero and fb.is_zero:
        raise ContractViolation("the line lies on both surfaces")
    if fa.is_zero:
        return roots_of_form(fb)
    if fb.is_zero:
        return roots_of_form(fa)
    if not fa.is_exact:
        fa, fb = fa.scale(1 / fa.norm()), fb.scale(1 / fb.norm())
    return common_divisor([fa, fb])


def line_intersection_length(curve: CICurve, line: LineP3) -> int:
    """
    Length of C cap L

    A line on one surface meets C in the zeros of the other restriction.

    Raises:
        ContractViolation: the line lies on both surfaces
        AmbiguousVerdict: a floating gcd degree is ambiguous
    """

    fa, fb = _restrictions(curve, line)
    if fa.is_zero and fb.is_zero:
        raise ContractViolation("the line lies on both surfaces")
    if fa.is_zero:
        return fb.degree
    if fb.is_zero:
        return fa.degree
    if not fa.is_exact:
        fa, fb = fa.scale(1 / fa.norm()), fb.scale(1 / fb.norm())
    return gcd_degree(fa, fb)


def _ci_record(curve: CICurve, line: LineP3, k: int, residual: float) -> Optional[SecantRecord]:
    try:
        divisor = intersection_divisor_ci(curve, line)
    except ContractViolation:
        return None
    return SecantRecord(line, divisor, divisor.degree, divisor.degree == k, residual=residual)


# ---------------------------------------------------------------------------
# Chart restrictions
# ---------------------------------------------------------------------------

def _poly_form_product(a: List, b: List) -> List:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


@lru_cache(maxsize=None)
def _chart_restrictions(degree: int, pivots: Tuple[int, int], n_vars: int
                        ) -> Tuple[Tuple[Dict[Exponent, complex], ...], ...]:
    """
    Restrictions of every degree-n monomial to the chart line

    The chart line is s P + t Q with P = e_i + u1 e_q1 + u2 e_q2 and
    Q = e_j + u3 e_q1 + u4 e_q2, u the first four variables. Entry [mu][r]
    holds the coefficient of s^(n-r) t^r as a term dictionary.
    """

    i, j = pivots
    q1, q2 = complement(pivots)
    u = [Polynomial.variable(n_vars, v) for v in range(4)]
    one = Polynomial.constant(n_vars, 1)
    zero = Polynomial(n_vars)
    linear = {i: [one, zero], j: [zero, one], q1: [u[0], u[2]], q2: [u[1], u[3]]}
    powers = {r: [[one]] for r in range(4)}
    for r in range(4):
        for _ in range(degree):
            powers[r].append(_poly_form_product(powers[r][-1], linear[r]))
    table = []
    for e in monomials(degree):
        form = [one]
        for r in range(4):
            if e[r]:
                form = _poly_form_product(form, powers[r][e[r]])
        table.append(tuple(dict(c.terms) if isinstance(c, Polynomial) else {} for c in form))
    return tuple(table)


def _combine(table, coeffs: np.ndarray, n_vars: int) -> List[Polynomial]:
    width = len(table[0])
    acc: List[Dict[Exponent, complex]] = [{} for _ in range(width)]
    for row, c in zip(table, coeffs):
        c = complex(c)
        if c == 0:
            continue
        for r, terms in enumerate(row):
            slot = acc[r]
            for e, v in terms.items():
                slot[e] = slot.get(e, 0) + c * v
    return [Polynomial(n_vars, slot) for slot in acc]


def _restrict_numeric(degree: int, pivots: Tuple[int, int], u: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    point = [complex(v) for v in u]
    return np.array([p.evaluate(point) for p in _combine(_chart_restrictions(degree, pivots, 4), coeffs, 4)])


def _chart_frame(pivots: Tuple[int, int], u: np.ndarray) -> np.ndarray:
    i, j = pivots
    q1, q2 = complement(pivots)
    frame = np.zeros((2, 4), dtype=complex)
    frame[0, i], frame[0, q1], frame[0, q2] = 1, u[0], u[1]
    frame[1, j], frame[1, q1], frame[1, q2] = 1, u[2], u[3]
    return frame


class CISecantFamily(SecantFamily):
    """Lines of P3 on which the two restricted surface forms share a monic factor"""

    def __init__(self, curve: CICurve, rng: np.random.Generator):
        self.a, self.b = curve.a, curve.b
        self.genus = curve.genus
        self.matrix = random_unitary(rng, 4)
        moved = curve.transform(self.matrix)
        va, vb = moved.fa.vector(), moved.fb.vector()
        self.split = len(va)
        self.target = np.concatenate([va / np.abs(va).max(), vb / np.abs(vb).max()])

    def forms(self, params, pivots, n_vars):
        va, vb = params[:self.split], params[self.split:]
        g1 = _combine(_chart_restrictions(self.a, pivots, n_vars), va, n_vars)
        g2 = _combine(_chart_restrictions(self.b, pivots, n_vars), vb, n_vars)
        return g1, g2

    def plant(self, pivots, k, rng):
        i, j = pivots
        u0 = gaussian(rng, 4)
        m0 = monic_from_roots(gaussian(rng, k))
        vectors = []
        for degree in (self.a, self.b):
            coeffs = gaussian(rng, forms_dimension(degree))
            restricted = _restrict_numeric(degree, pivots, u0, coeffs)
            remainder = remainder_by_monic(list(restricted), list(m0))
            index = _monomial_index(degree)
            # x_i^(k-1-n) x_j^(degree-k+1+n) restricts to s^(k-1-n) t^(degree-k+1+n)
            for n, value in enumerate(remainder):
                exp = [0, 0, 0, 0]
                exp[i], exp[j] = k - 1 - n, degree - k + 1 + n
                coeffs[index[tuple(exp)]] -= value
            vectors.append(coeffs)
        return np.concatenate(vectors), np.concatenate([u0, m0[1:]])

    def line(self, pivots, values):
        return LineP3.from_chart(pivots, values).transform(self.matrix)

    def convert(self, values, source, dest):
        frame = _chart_frame(source, values[:4])
        block = frame[:, list(dest)]
        if abs(np.linalg.det(block)) <= 1e-8 * np.linalg.norm(frame) ** 2:
            return None
        reduced = np.linalg.solve(block, frame)
        q1, q2 = complement(dest)
        chart = [reduced[0, q1], reduced[0, q2], reduced[1, q1], reduced[1, q2]]
        # (s, t) frame = (s', t') reduced with (s', t') = (s, t) block
        moved = reparametrize_roots(np.roots(np.concatenate([[1], values[4:]])), block)
        if moved is None:
            return None
        return np.concatenate([chart, monic_from_roots(moved)[1:]])

    def count_hint(self, k):
        return quadrisecant_count(self.a * self.b, self.genus) if k == 4 else None


# ---------------------------------------------------------------------------
# Lines on a surface
# ---------------------------------------------------------------------------

def lines_on_surface(surface: SurfacePoly, seed: int = 0, opts: Optional[SolveOptions] = None,
                     charts: Sequence[Tuple[int, int]] = CHART_PIVOTS) -> List[LineP3]:
    """
    Every line contained in a surface

    Per chart the coefficients of F restricted to the chart line are set to
    zero: squared up by random combinations when there are more than four,
    padded with random linear slices when there are fewer (planes and
    quadrics, whose lines come in families).

    Returns:
        Lines, deduplicated and sorted by Plücker coordinates

    Raises:
        NonFiniteSolutionSet: the surface carries families of lines; witness lines attached
    """

    opts = opts or SolveOptions(seed=seed)
    rng = np.random.default_rng([seed, 211])
    matrix = random_unitary(rng, 4)
    moved = surface.to_complex().transform(matrix).normalized()
    n_coeffs = surface.degree + 1
    sliced = n_coeffs < 4
    found: List[LineP3] = []
    for pivots in charts:
        coefficients = _combine(_chart_restrictions(surface.degree, pivots, 4), moved.vector(), 4)
        coefficients = [c for c in coefficients if not c.is_zero]
        if not coefficients:
            raise NonFiniteSolutionSet("every line of the chart lies on the surface")
        full = PolySystem.from_polynomials(coefficients, 4)
        if len(coefficients) > 4:
            equations = []
            for _ in range(4):
                weights = gaussian(rng, len(coefficients))
                combo = Polynomial(4)
                for w, c in zip(weights, coefficients):
                    combo = combo + c * complex(w)
                equations.append(combo)
        else:
            equations = list(coefficients)
            while len(equations) < 4:
                weights = gaussian(rng, 5)
                slice_eq = Polynomial.constant(4, complex(weights[4]))
                for v in range(4):
                    slice_eq = slice_eq + Polynomial.variable(4, v) * complex(weights[v])
                equations.append(slice_eq)
        solutions, _ = solve_square_system(PolySystem.from_polynomials(equations, 4), opts)
        if len(solutions):
            keep = full.relative_residual(solutions) <= 1e-8
            found.extend(LineP3.from_chart(pivots, x).transform(matrix) for x in solutions[keep])
        logger.debug(f"Chart {pivots}: {len(found)} lines so far")
    lines = sorted(dedup_lines(found), key=lambda line: line.sort_key())
    if sliced and lines:
        raise NonFiniteSolutionSet(
            f"a degree-{surface.degree} surface carries families of lines", witnesses=lines,
        )
    logger.info(f"Degree-{surface.degree} surface: {len(lines)} lines")
    return lines


# ---------------------------------------------------------------------------
# Secants
# ---------------------------------------------------------------------------

def _surface_line_records(curve: CICurve, lines: Sequence[LineP3], k: int) -> List[SecantRecord]:
    records = []
    for line in lines:
        record = _ci_record(curve, line, k, _restriction_residual(curve.fa, line))
        if record is not None and record.length >= k:
            records.append(record)
    return sort_records(records)


def find_k_secants_ci(curve: CICurve, k: int, opts: Optional[SecantSearchOptions] = None
                      ) -> List[SecantRecord]:
    """
    Lines meeting the complete intersection in length at least k

    Lines off Fa meet C in at most a points, so for k > a the answer is the
    set of lines on Fa. For 4 <= k <= a the 4-secant divisibility system is
    completed by monodromy, with Cayley's count as the stopping hint, solved
    over the charts of G(1,3) and filtered by length; k = 3 runs a sliced
    witness search. Only an explicit witness mode returns a partial set.

    Raises:
        ContractViolation: k < 3
        NonFiniteSolutionSet: trisecants (k = 3) or lines on a quadric Fa; witnesses attached
    """

    opts = opts or SecantSearchOptions()
    if k < 3:
        raise ContractViolation(f"k must be at least 3, got {k}")
    a, b = curve.a, curve.b
    if k > b:
        return []
    if k > a:
        try:
            lines = lines_on_surface(curve.fa, opts.seed, opts.solve, opts.charts)
        except NonFiniteSolutionSet as e:
            raise NonFiniteSolutionSet(e.message, witnesses=_surface_line_records(curve, e.witnesses, k))
        return _surface_line_records(curve, lines, k)
    family = CISecantFamily(curve, np.random.default_rng([opts.seed, 103]))
    if k == 3:
        candidates, diag = search_candidates(family, 3, opts, 'witness', sliced=True)
        records = _verified(curve, candidates, 3, opts.residual_tolerance)
        if records:
            raise NonFiniteSolutionSet(
                "trisecant lines form a positive-dimensional family", witnesses=records, details=diag.to_dict(),
            )
        return []
    mode = opts.resolved_mode('exhaustive')
    candidates, diag = search_candidates(family, 4, opts, mode)
    if not diag.complete:
        logger.warning(f"CI({a},{b}): witness search, the {k}-secant set may be partial")
    records = _verified(curve, candidates, k, opts.residual_tolerance)
    logger.info(f"CI({a},{b}): {len(records)} lines of length >= {k} ({mode})")
    return records


def _verified(curve: CICurve, candidates: Sequence[Candidate], k: int, tolerance: float
              ) -> List[SecantRecord]:
    records: List[SecantRecord] = []
    for cand in sorted(candidates, key=lambda c: c.residual):
        if cand.residual > tolerance or any(cand.line.same_line(r.line) for r in records):
            continue
        record = _ci_record(curve, cand.line, k, cand.residual)
        if record is not None and record.length >= k:
            records.append(record)
    return sort_records(records)


def secant_order_ci(curve: CICurve, opts: Optional[SecantSearchOptions] = None
                    ) -> Tuple[int, List[SecantRecord]]:
    """
    Secant order of a complete intersection

    Lines on Fa are b-secants; every other line meets C in at most a points.

    Returns:
        Tuple of (order, witnesses marked maximal)
    """

    opts = opts or SecantSearchOptions()
    a, b = curve.a, curve.b
    if a < b:
        try:
            surface_lines = lines_on_surface(curve.fa, opts.seed, opts.solve, opts.charts)
        except NonFiniteSolutionSet as e:
            surface_lines = list(e.witnesses)
        if surface_lines:
            witnesses = _surface_line_records(curve, surface_lines, b)
            return b, [r.marked_maximal() for r in witnesses]
    if a >= 4:
        longer = find_k_secants_ci(curve, 4, opts)
        if longer:
            order = max(r.length for r in longer)
            return order, [r.marked_maximal() for r in longer if r.length == order]
    if a >= 3:
        try:
            find_k_secants_ci(curve, 3, opts)
        except NonFiniteSolutionSet as e:
            if e.witnesses:
                return 3, [r.marked_maximal() for r in e.witnesses]
    return 2, []


# ---------------------------------------------------------------------------
# Smoothness
# ---------------------------------------------------------------------------

def _rank_deficient(curve: CICurve, x: np.ndarray) -> bool:
    rows = np.array([curve.fa.gradient(x), curve.fb.gradient(x)])
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms == 0):
        return True
    return numeric_rank(rows / norms[:, None], cutoff=1e-6).rank < 2


def _affine_chart(surface: SurfacePoly, chart: int) -> Polynomial:
    """F with x_chart = 1, in the three remaining coordinates"""

    terms = {}
    for e, c in surface.terms:
        key = tuple(v for r, v in enumerate(e) if r != chart)
        terms[key] = terms.get(key, 0) + complex(c)
    return Polynomial(3, terms)


def _affine_chart_derivative(surface: SurfacePoly, chart: int, v: int) -> Polynomial:
    """Partial derivative in x_v, then restricted to x_chart = 1"""

    terms = {}
    for e, c in surface.terms:
        if not e[v]:
            continue
        d = list(e)
        d[v] -= 1
        key = tuple(x for r, x in enumerate(d) if r != chart)
        terms[key] = terms.get(key, 0) + complex(c) * e[v]
    return Polynomial(3, terms)


def _lift_affine(point: np.ndarray, chart: int) -> np.ndarray:
    return np.insert(np.asarray(point, dtype=complex), chart, 1.0)


def _minor_combination(fa: SurfacePoly, fb: SurfacePoly, chart: int, rng: np.random.Generator) -> Polynomial:
    grads_a = [_affine_chart_derivative(fa, chart, v) for v in range(4)]
    grads_b = [_affine_chart_derivative(fb, chart, v) for v in range(4)]
    combo = Polynomial(3)
    for v in range(4):
        for w in range(v + 1, 4):
            minor = grads_a[v] * grads_b[w] - grads_a[w] * grads_b[v]
            combo = combo + minor * complex(gaussian(rng, 1)[0])
    return combo


def smoothness_screen(curve: CICurve, seed: int = 0, config_class=Config) -> Tuple[bool, str]:
    """
    Screen a complete intersection for singular points

    Up to the configured degree cap the system {Fa, Fb, random combination of
    the 2x2 minors of the gradients} is solved in each affine chart x_r = 1,
    singular endpoints included, and every curve point found is checked for a
    rank-deficient gradient pair. Above the cap only curve points sampled from
    random plane sections by multistart Newton are checked.

    Returns:
        Tuple of (passed, status): status 'verified' or 'verified-at-samples'
    """

    rng = np.random.default_rng([seed, 419])
    opts = SolveOptions.from_config(config_class, seed=seed)
    moved = curve.transform(random_unitary(rng, 4))
    moved = CICurve(moved.fa.normalized(), moved.fb.normalized())
    if curve.a + curve.b <= config_class.SMOOTHNESS_DEGREE_CAP:
        for chart in range(4):
            pa, pb = _affine_chart(moved.fa, chart), _affine_chart(moved.fb, chart)
            combo = _minor_combination(moved.fa, moved.fb, chart, rng)
            points, _ = solve_square_system(PolySystem.from_polynomials([pa, pb, combo], 3), opts,
                                            include_singular=True)
            on_curve = PolySystem.from_polynomials([pa, pb], 3)
            for x in points:
                if on_curve.relative_residual(x[None, :])[0] > 1e-6:
                    continue
                if _rank_deficient(moved, _lift_affine(x, chart)):
                    logger.info(f"CI({curve.a},{curve.b}) has a singular point in chart {chart}")
                    return False, 'verified'
        return True, 'verified'

    per_plane = max(config_class.SMOOTHNESS_SAMPLE_POINTS // 10, 1)
    pa, pb = _affine_chart(moved.fa, 0), _affine_chart(moved.fb, 0)
    checked = 0
    for _ in range(10):
        weights = gaussian(rng, 4)
        plane = Polynomial.constant(3, complex(weights[0]))
        for v in range(3):
            plane = plane + Polynomial.variable(3, v) * complex(weights[v + 1])
        points, _ = multistart_newton(PolySystem.from_polynomials([pa, pb, plane], 3), opts, n_starts=per_plane)
        for x in points:
            checked += 1
            if _rank_deficient(moved, _lift_affine(x, 0)):
                logger.info(f"CI({curve.a},{curve.b}) singular at a sampled point")
                return False, 'verified-at-samples'
    logger.debug(f"Sampled smoothness screen checked {checked} points")
    return True, 'verified-at-samples'


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def surfaces_coprime(fa: SurfacePoly, fb: SurfacePoly, rng: np.random.Generator, trials: int = 3) -> bool:
    """A common factor would show up in every restriction to a line"""

    exact = fa.is_exact and fb.is_exact
    for _ in range(trials):
        line = random_rational_line(rng)
        ra, rb = restrict_to_line(fa, line), restrict_to_line(fb, line)
        if ra.is_zero or rb.is_zero:
            continue
        if not exact:
            ra, rb = ra.scale(1 / ra.norm()), rb.scale(1 / rb.norm())
        if gcd_degree(ra, rb) == 0:
            return True
    return False


def random_smooth_ci(a: int, b: int, seed: int = 0, config_class=Config) -> CICurve:
    """
    Random integer complete intersection that passes the smoothness screen

    Raises:
        ContractViolation: unless 2 <= a <= b
        ConstructionBudgetExceeded: every attempt failed a check
    """

    if not 2 <= a <= b:
        raise ContractViolation(f"need 2 <= a <= b, got a={a}, b={b}")
    trail = []
    for attempt in range(config_class.CONSTRUCTION_RETRY_BUDGET):
        trail.append([seed, attempt])
        rng = np.random.default_rng([seed, attempt])
        fa = SurfacePoly.random(a, rng)
        fb = SurfacePoly.random(b, rng)
        if not surfaces_coprime(fa, fb, rng):
            continue
        passed, status = smoothness_screen(CICurve(fa, fb), seed=seed + attempt, config_class=config_class)
        if passed:
            logger.info(f"Random CI({a},{b}) accepted after {attempt + 1} attempt(s), smoothness {status}")
            return CICurve(fa, fb, status)
    raise ConstructionBudgetExceeded(f"no smooth CI({a},{b}) within {len(trail)} attempts", trail)


def construct_ci_with_secant_line(a: int, b: int, seed: int = 0, config_class=Config
                                  ) -> Tuple[CICurve, LineP3]:
    """
    Complete intersection with a planted b-secant line

    Fa = l1 G1 + l2 G2 lies in the ideal of the line {l1 = l2 = 0}; Fb is
    random. The line then meets C in the b zeros of Fb on it.

    Raises:
        ContractViolation: unless 4 <= a <= b
        ConstructionBudgetExceeded: every attempt failed a check
    """

    if not 4 <= a <= b:
        raise ContractViolation(f"need 4 <= a <= b, got a={a}, b={b}")
    notes: Tuple[str, ...] = ()
    if a == b:
        logger.warning(f"CI({a},{b}): equal degrees, the planted line need not be the only long secant")
        notes = ('equal-degree construction: genericity of Fa is not checked',)
    trail = []
    for attempt in range(config_class.CONSTRUCTION_RETRY_BUDGET):
        trail.append([seed, attempt])
        rng = np.random.default_rng([seed, attempt])
        l1, l2 = (SurfacePoly.random(1, rng, bound=5) for _ in range(2))
        try:
            line = LineP3.from_dual_frame(exact_vector(l1), exact_vector(l2), Field.RATIONAL)
        except ContractViolation:
            continue
        fa = l1 * SurfacePoly.random(a - 1, rng) + l2 * SurfacePoly.random(a - 1, rng)
        fb = SurfacePoly.random(b, rng)
        if not surfaces_coprime(fa, fb, rng):
            continue
        curve = CICurve(fa, fb, notes=notes)
        if line_intersection_length(curve, line) != b:
            continue
        passed, status = smoothness_screen(curve, seed=seed + attempt, config_class=config_class)
        if passed:
            logger.info(f"Constructed CI({a},{b}) with planted {b}-secant after {attempt + 1} attempt(s)")
            return curve.with_smoothness(status), line
    raise ConstructionBudgetExceeded(f"no smooth CI({a},{b}) with a planted line within {len(trail)} attempts",
                                     trail)


def exact_vector(surface: SurfacePoly) -> List[Fraction]:
    index = _monomial_index(surface.degree)
    out = [Fraction(0)] * len(index)
    for e, c in surface.terms:
        out[index[e]] = Fraction(c)
    return out
