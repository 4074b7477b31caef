"""
Binary Forms Service
Exact and floating homogeneous polynomials in (s, t), divisors on P1, gcd degrees and roots
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import Config
from ..utils.errors import (
    AmbiguousVerdict,
    ContractViolation,
    FieldMismatchError,
    RootFindingError,
    SingularMatrixError,
    ZeroFormError,
)
from .linalg import exact_det

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, complex]


class Field(str, Enum):
    """Coefficient field tag carried by every container"""

    RATIONAL = 'rational'
    COMPLEX = 'complex'


def coerce_scalar(value, field: Field) -> Scalar:
    """
    Convert a value into the given field

    Args:
        value: int, Fraction, "p/q" string (rational) or any number (complex)
        field: target field

    Returns:
        Fraction or complex

    Raises:
        FieldMismatchError: a non-rational value was given for the rational field
    """

    if field is Field.RATIONAL:
        if isinstance(value, bool):
            raise FieldMismatchError(f"boolean is not a rational scalar: {value!r}")
        if isinstance(value, (Rational, str)):
            try:
                return Fraction(value)
            except (ValueError, ZeroDivisionError) as e:
                raise ContractViolation(f"invalid rational scalar {value!r}: {e}")
        raise FieldMismatchError(f"value {value!r} is not an exact rational")
    if isinstance(value, Number):
        return complex(value)
    raise FieldMismatchError(f"value {value!r} is not a number")


def infer_field(values: Iterable) -> Field:
    return Field.RATIONAL if all(isinstance(v, Rational) and not isinstance(v, bool)
                                 for v in values) else Field.COMPLEX


def _require_same_field(*items) -> Field:
    fields = {item.field for item in items}
    if len(fields) > 1:
        raise FieldMismatchError(f"mixed fields: {sorted(f.value for f in fields)}")
    return fields.pop()


# ---------------------------------------------------------------------------
# Points and divisors on P1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointP1:
    """
    Point [s:t] of the projective line stored in canonical form

    Floating points scale the coordinate of largest magnitude to 1, exact
    points scale the first nonzero coordinate to 1.
    """

    s: Scalar
    t: Scalar
    field: Field = Field.COMPLEX

    def __post_init__(self):
        s = coerce_scalar(self.s, self.field)
        t = coerce_scalar(self.t, self.field)
        if s == 0 and t == 0:
            raise ContractViolation("[0:0] is not a point of P1")
        if self.field is Field.RATIONAL:
            if s != 0:
                s, t = Fraction(1), t / s
            else:
                t = Fraction(1)
        elif abs(s) >= abs(t):
            s, t = 1 + 0j, t / s
        else:
            s, t = s / t, 1 + 0j
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 't', t)

    @classmethod
    def finite(cls, x, field: Optional[Field] = None) -> 'PointP1':
        """The point [x:1]"""
        field = field or infer_field([x])
        return cls(x, 1, field)

    def to_complex(self) -> 'PointP1':
        return PointP1(complex(self.s), complex(self.t), Field.COMPLEX)

    def coords(self) -> Tuple[complex, complex]:
        return complex(self.s), complex(self.t)

    def chordal_distance(self, other: 'PointP1') -> float:
        """Chordal metric on P1; invariant under the choice of representative"""
        a, b = self.coords()
        c, d = other.coords()
        num = abs(a * d - b * c)
        den = math.hypot(abs(a), abs(b)) * math.hypot(abs(c), abs(d))
        return num / den

    def same_as(self, other: 'PointP1', tol: float = Config.POINT_DEDUP_TOLERANCE) -> bool:
        if self.field is Field.RATIONAL and other.field is Field.RATIONAL:
            return self.s == other.s and self.t == other.t
        return self.chordal_distance(other) <= tol

    def sort_key(self) -> Tuple[float, ...]:
        s, t = self.coords()
        return (round(s.real, 9), round(s.imag, 9), round(t.real, 9), round(t.imag, 9))


@dataclass(frozen=True)
class DivisorP1:
    """Effective divisor: points with positive multiplicities, support deduplicated"""

    points: Tuple[Tuple[PointP1, int], ...] = ()

    def __post_init__(self):
        merged: List[List] = []
        for point, mult in self.points:
            if int(mult) <= 0:
                raise ContractViolation(f"multiplicity must be positive, got {mult}")
            for entry in merged:
                if entry[0].same_as(point):
                    entry[1] += int(mult)
                    break
            else:
                merged.append([point, int(mult)])
        merged.sort(key=lambda entry: entry[0].sort_key())
        object.__setattr__(self, 'points', tuple((p, m) for p, m in merged))

    @classmethod
    def from_points(cls, points: Iterable[PointP1]) -> 'DivisorP1':
        return cls(tuple((p, 1) for p in points))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.points)

    @property
    def support(self) -> List[PointP1]:
        return [p for p, _ in self.points]

    @property
    def is_reduced(self) -> bool:
        return all(m == 1 for _, m in self.points)

    def multiplicity_of(self, point: PointP1, tol: float = Config.COMMON_ROOT_TOLERANCE) -> int:
        for p, m in self.points:
            if p.field is Field.RATIONAL and point.field is Field.RATIONAL:
                if p.same_as(point):
                    return m
            elif p.chordal_distance(point) <= tol:
                return m
        return 0

    def contains(self, other: 'DivisorP1', tol: float = Config.COMMON_ROOT_TOLERANCE) -> bool:
        """True when other <= self as divisors"""
        return all(self.multiplicity_of(p, tol) >= m for p, m in other.points)


# ---------------------------------------------------------------------------
# Binary forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryForm:
    """
    Homogeneous polynomial sum_i coeffs[i] * s^(d-i) * t^i

    Leading zeros are the multiplicity of [1:0], trailing zeros that of [0:1].
    """

    degree: int
    coeffs: Tuple[Scalar, ...]
    field: Field = Field.COMPLEX

    def __post_init__(self):
        if self.degree < 0:
            raise ContractViolation(f"degree must be non-negative, got {self.degree}")
        if len(self.coeffs) != self.degree + 1:
            raise ContractViolation(
                f"a degree-{self.degree} form needs {self.degree + 1} coefficients, got {len(self.coeffs)}"
            )
        object.__setattr__(self, 'coeffs', tuple(coerce_scalar(c, self.field) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, field: Optional[Field] = None) -> 'BinaryForm':
        coeffs = list(coeffs)
        return cls(len(coeffs) - 1, tuple(coeffs), field or infer_field(coeffs))

    @classmethod
    def zero(cls, degree: int, field: Field = Field.RATIONAL) -> 'BinaryForm':
        return cls(degree, (0,) * (degree + 1), field)

    @classmethod
    def monomial(cls, degree: int, t_power: int, field: Field = Field.RATIONAL) -> 'BinaryForm':
        """s^(degree - t_power) t^t_power"""
        return cls(degree, tuple(int(i == t_power) for i in range(degree + 1)), field)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_exact(self) -> bool:
        return self.field is Field.RATIONAL

    def require_nonzero(self, what: str = 'form'):
        if self.is_zero:
            raise ZeroFormError(f"{what} is the zero form")

    def array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def to_complex(self) -> 'BinaryForm':
        if self.field is Field.COMPLEX:
            return self
        return BinaryForm(self.degree, tuple(complex(c) for c in self.coeffs), Field.COMPLEX)

    def norm(self) -> float:
        return float(np.linalg.norm(self.array()))

    def normalized(self) -> 'BinaryForm':
        """Leading nonzero coefficient scaled to 1"""
        self.require_nonzero()
        lead = next(c for c in self.coeffs if c != 0)
        return self.scale(1 / lead)

    def scale(self, c) -> 'BinaryForm':
        c = coerce_scalar(c, self.field)
        return BinaryForm(self.degree, tuple(c * v for v in self.coeffs), self.field)

    def __add__(self, other: 'BinaryForm') -> 'BinaryForm':
        field = _require_same_field(self, other)
        if self.degree != other.degree:
            raise ContractViolation(f"cannot add forms of degrees {self.degree} and {other.degree}")
        return BinaryForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), field)

    def __neg__(self) -> 'BinaryForm':
        return BinaryForm(self.degree, tuple(-c for c in self.coeffs), self.field)

    def __sub__(self, other: 'BinaryForm') -> 'BinaryForm':
        return self + (-other)

    def __mul__(self, other) -> 'BinaryForm':
        if not isinstance(other, BinaryForm):
            return self.scale(other)
        field = _require_same_field(self, other)
        out = [coerce_scalar(0, field)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(self.degree + other.degree, tuple(out), field)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> 'BinaryForm':
        result = BinaryForm(0, (1,), self.field)
        for _ in range(n):
            result = result * self
        return result

    def derivative_s(self) -> 'BinaryForm':
        d = self.degree
        if d == 0:
            return BinaryForm.zero(0, self.field)
        return BinaryForm(d - 1, tuple((d - i) * self.coeffs[i] for i in range(d)), self.field)

    def derivative_t(self) -> 'BinaryForm':
        d = self.degree
        if d == 0:
            return BinaryForm.zero(0, self.field)
        return BinaryForm(d - 1, tuple(i * self.coeffs[i] for i in range(1, d + 1)), self.field)

    def leading_zeros(self) -> int:
        """Multiplicity of [1:0] as a root"""
        return next((i for i, c in enumerate(self.coeffs) if c != 0), self.degree + 1)

    def trailing_zeros(self) -> int:
        """Multiplicity of [0:1] as a root"""
        return next((i for i, c in enumerate(reversed(self.coeffs)) if c != 0), self.degree + 1)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> Tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a: float) -> Tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_product(a: float, b: float) -> Tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def _complex_two_sum(a: complex, b: complex) -> Tuple[complex, complex]:
    re, e_re = _two_sum(a.real, b.real)
    im, e_im = _two_sum(a.imag, b.imag)
    return complex(re, im), complex(e_re, e_im)


def _complex_two_product(a: complex, b: complex) -> Tuple[complex, complex]:
    p1, e1 = _two_product(a.real, b.real)
    p2, e2 = _two_product(a.imag, b.imag)
    p3, e3 = _two_product(a.real, b.imag)
    p4, e4 = _two_product(a.imag, b.real)
    re, e5 = _two_sum(p1, -p2)
    im, e6 = _two_sum(p3, p4)
    return complex(re, im), complex(e1 - e2 + e5, e3 + e4 + e6)


def compensated_horner(coeffs_high_first: Sequence[complex], y: complex) -> complex:
    """Horner evaluation with error-free transformations (twice the working precision)"""

    r = complex(coeffs_high_first[0])
    err = 0j
    for a in coeffs_high_first[1:]:
        p, pe = _complex_two_product(r, y)
        r, se = _complex_two_sum(p, complex(a))
        err = err * y + (pe + se)
    return r + err


def eval_form(f: BinaryForm, p: PointP1) -> Scalar:
    """
    Evaluate a form at a point of P1

    Floating evaluation dehomogenizes by the larger coordinate and runs a
    compensated Horner scheme on the ratio.

    Raises:
        FieldMismatchError: form and point live in different fields
    """

    _require_same_field(f, p)
    if f.is_exact:
        s, t = p.s, p.t
        acc = Fraction(0)
        for i, c in enumerate(f.coeffs):
            acc += c * s ** (f.degree - i) * t ** i
        return acc
    s, t = p.coords()
    d = f.degree
    if abs(s) >= abs(t):
        value = compensated_horner(list(reversed(f.coeffs)), t / s)
        return value * s ** d
    value = compensated_horner(list(f.coeffs), s / t)
    return value * t ** d


def evaluation_scale(f: BinaryForm, p: PointP1) -> float:
    """sum |c_i| |s|^(d-i) |t|^i, the natural size of f(p)"""

    s, t = (abs(v) for v in p.coords())
    d = f.degree
    return float(sum(abs(complex(c)) * s ** (d - i) * t ** i for i, c in enumerate(f.coeffs)))


# ---------------------------------------------------------------------------
# Division, gcd and subresultants
# ---------------------------------------------------------------------------

def remainder_by_monic(coeffs: Sequence, monic: Sequence) -> list:
    """
    Remainder of a coefficient sequence by a monic divisor

    Both sequences are highest power first and monic[0] must be 1. Works over
    any ring whose elements support + - * (numbers, polynomials), which lets
    "monic divides g" be written as equations in the divisor's coefficients.

    Args:
        coeffs: dividend g_0..g_n
        monic: divisor 1, m_1..m_k

    Returns:
        The last k coefficients after reduction (all of g when n < k)
    """

    k = len(monic) - 1
    g = list(coeffs)
    for i in range(len(g) - k):
        c = g[i]
        for j in range(1, k + 1):
            g[i + j] = g[i + j] - c * monic[j]
    return g[max(len(g) - k, 0):]


def _strip(poly: List[Fraction]) -> List[Fraction]:
    i = 0
    while i < len(poly) and poly[i] == 0:
        i += 1
    return poly[i:]


def _poly_rem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a.pop(0)
        a = _strip(a)
    return a


def _poly_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _poly_rem(a, b)
    if not a:
        return a
    return [c / a[0] for c in a]


def _dehomogenize(f: BinaryForm) -> Tuple[List[Fraction], int]:
    """f(x, 1) highest power first, plus the multiplicity of [1:0]"""
    lead = f.leading_zeros()
    return list(f.coeffs[lead:]), lead


def gcd_form(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """
    Exact gcd of two rational forms, normalized to leading coefficient 1

    Raises:
        ZeroFormError: either form is zero
        FieldMismatchError: forms are not both rational
    """

    f.require_nonzero('first form')
    g.require_nonzero('second form')
    if _require_same_field(f, g) is not Field.RATIONAL:
        raise FieldMismatchError("exact gcd needs rational forms")
    pf, lf = _dehomogenize(f)
    pg, lg = _dehomogenize(g)
    h = _poly_gcd(pf, pg)
    at_infinity = min(lf, lg)
    coeffs = [Fraction(0)] * at_infinity + h
    form = BinaryForm(len(coeffs) - 1, tuple(coeffs), Field.RATIONAL)
    return form.normalized()


def sylvester_block(a: Sequence, b: Sequence, j: int) -> List[list]:
    """Leading square block of the j-th Sylvester submatrix of two coefficient lists"""

    m, n = len(a) - 1, len(b) - 1
    width = m + n - j
    size = m + n - 2 * j
    rows = []
    for r in range(n - j):
        rows.append([0] * r + list(a) + [0] * (width - r - m - 1))
    for r in range(m - j):
        rows.append([0] * r + list(b) + [0] * (width - r - n - 1))
    return [row[:size] for row in rows]


def principal_subresultants(f: BinaryForm, g: BinaryForm) -> List[Scalar]:
    """
    Principal subresultant coefficients sres_0..sres_{min(m,n)-1}

    sres_0 is the resultant. Computed exactly for rational forms and with
    floating determinants otherwise.

    Raises:
        ZeroFormError: either form is zero
        ContractViolation: a form of degree 0
    """

    f.require_nonzero('first form')
    g.require_nonzero('second form')
    field = _require_same_field(f, g)
    if f.degree < 1 or g.degree < 1:
        raise ContractViolation("subresultants need forms of degree at least 1")
    values: List[Scalar] = []
    for j in range(min(f.degree, g.degree)):
        block = sylvester_block(f.coeffs, g.coeffs, j)
        if field is Field.RATIONAL:
            values.append(exact_det(block))
        else:
            values.append(complex(np.linalg.det(np.array(block, dtype=complex))))
    return values


def _exact_subresultant_degree(f: BinaryForm, g: BinaryForm) -> int:
    """gcd degree from the subresultant vanishing pattern after a shift making both leads nonzero"""

    for c in range(f.degree + g.degree + 2):
        shift = ((1, 0), (c, 1))
        fs, gs = mobius_transform(f, shift), mobius_transform(g, shift)
        if fs.coeffs[0] != 0 and gs.coeffs[0] != 0:
            break
    sres = principal_subresultants(fs, gs)
    return next((j for j, v in enumerate(sres) if v != 0), min(f.degree, g.degree))


def _best_rotation(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Real rotation making both leading coefficients as large as possible"""

    best, best_score = np.eye(2), -1.0
    da, db = len(a) - 1, len(b) - 1
    for theta in np.linspace(0.0, np.pi, 13)[:-1]:
        col = (math.cos(theta), math.sin(theta))
        va = abs(sum(c * col[0] ** (da - i) * col[1] ** i for i, c in enumerate(a)))
        vb = abs(sum(c * col[0] ** (db - i) * col[1] ** i for i, c in enumerate(b)))
        score = min(va, vb)
        if score > best_score:
            best_score = score
            best = np.array([[col[0], -col[1]], [col[1], col[0]]])
    return best


def _numeric_subresultant_degree(f: BinaryForm, g: BinaryForm, threshold: float, band: float) -> int:
    rot = _best_rotation(f.array(), g.array())
    fr, gr = mobius_transform(f, rot), mobius_transform(g, rot)
    nf, ng = fr.norm(), gr.norm()
    m, n = f.degree, g.degree
    sres = principal_subresultants(fr, gr)
    for j, value in enumerate(sres):
        # sres_j is homogeneous of degree n-j in f and m-j in g
        tau = threshold * nf ** (n - j) * ng ** (m - j)
        size = abs(value)
        if size >= band * tau:
            logger.debug(f"gcd degree {j}: |sres_{j}| = {size:.3g} against threshold {tau:.3g}")
            return j
        if size >= tau:
            raise AmbiguousVerdict(
                f"subresultant sres_{j} = {size:.3g} falls in the ambiguity band",
                {'index': j, 'value': size, 'threshold': tau},
            )
    return min(m, n)


def gcd_degree(f: BinaryForm, g: BinaryForm, method: str = 'auto',
               threshold: float = Config.SUBRESULTANT_ZERO_THRESHOLD,
               band: float = Config.SUBRESULTANT_AMBIGUITY_BAND) -> int:
    """
    Degree of gcd(f, g)

    Args:
        f: first form
        g: second form
        method: 'auto' (Euclid for rational forms, subresultants for complex),
            'euclid' or 'subresultant'
        threshold: zero threshold for normalized floating subresultants
        band: width of the ambiguity band above the threshold

    Returns:
        The gcd degree

    Raises:
        ZeroFormError: either form is zero
        AmbiguousVerdict: a floating subresultant lands in the ambiguity band
    """

    f.require_nonzero('first form')
    g.require_nonzero('second form')
    field = _require_same_field(f, g)
    if method == 'auto':
        method = 'euclid' if field is Field.RATIONAL else 'subresultant'
    if method == 'euclid':
        if field is not Field.RATIONAL:
            raise FieldMismatchError("the Euclidean path needs rational forms")
        return gcd_form(f, g).degree
    if method != 'subresultant':
        raise ContractViolation(f"unknown gcd method {method!r}")
    if min(f.degree, g.degree) == 0:
        return 0
    if field is Field.RATIONAL:
        return _exact_subresultant_degree(f, g)
    return _numeric_subresultant_degree(f, g, threshold, band)


# ---------------------------------------------------------------------------
# Roots and divisors
# ---------------------------------------------------------------------------

def _aberth(coeffs: np.ndarray, offset: float, max_iter: int) -> Tuple[np.ndarray, bool]:
    n = len(coeffs) - 1
    if n == 1:
        return np.array([-coeffs[1] / coeffs[0]]), True
    dcoeffs = np.polyder(coeffs)
    abs_coeffs = np.abs(coeffs)
    radius = (abs(coeffs[-1]) / abs(coeffs[0])) ** (1.0 / n)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + offset))
    for _ in range(max_iter):
        p = np.polyval(coeffs, z)
        dp = np.polyval(dcoeffs, z)
        with np.errstate(all='ignore'):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = 1e-7 * radius * np.exp(1j * offset)
        z = z - w
        scale = np.polyval(abs_coeffs, np.abs(z))
        backward = np.abs(np.polyval(coeffs, z)) <= 4 * np.finfo(float).eps * n * scale
        small_step = np.abs(w) <= 1e-14 * (1 + np.abs(z))
        if np.all(backward | small_step):
            return z, True
    return z, False


def _cluster(z: np.ndarray, radius: float) -> List[List[int]]:
    """Single-link clusters of finite roots under the chordal metric"""

    points = [PointP1(complex(v), 1) for v in z]
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i].chordal_distance(points[j]) <= radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _polish_cluster(coeffs: np.ndarray, z0: complex, mult: int) -> complex:
    deriv = coeffs
    for _ in range(mult - 1):
        deriv = np.polyder(deriv)
    dd = np.polyder(deriv)
    z = z0
    for _ in range(3):
        d = np.polyval(dd, z)
        if d == 0:
            break
        step = np.polyval(deriv, z) / d
        if not np.isfinite(step) or abs(step) > 1e-3 * (1 + abs(z)):
            break
        z = z - step
    return complex(z)


def roots_of_form(f: BinaryForm, cluster_radius: float = Config.ROOT_CLUSTER_RADIUS,
                  retries: int = Config.ROOT_RETRY_BUDGET,
                  max_iter: int = Config.ROOT_MAX_ITERATIONS) -> DivisorP1:
    """
    Divisor of a nonzero form

    Rational forms are lifted to complex. Roots at [1:0] and [0:1] come from
    vanishing leading and trailing coefficients; the rest are found by Aberth
    iteration on whichever dehomogenization has the larger leading coefficient,
    then clustered into multiplicities and polished.

    Raises:
        ZeroFormError: f is zero
        RootFindingError: no convergence within the retry budget
    """

    f.require_nonzero()
    c = f.array()
    tiny = 1e-14 * np.linalg.norm(c)
    exact = f.is_exact
    lead = f.leading_zeros() if exact else int(np.argmax(np.abs(c) > tiny))
    trail = f.trailing_zeros() if exact else int(np.argmax(np.abs(c[::-1]) > tiny))
    core = c[lead:len(c) - trail]
    entries: List[Tuple[PointP1, int]] = []
    if lead:
        entries.append((PointP1(1, 0), lead))
    if trail:
        entries.append((PointP1(0, 1), trail))
    if len(core) > 1:
        # x = s/t when the s-heavy end dominates, y = t/s otherwise
        use_x = abs(core[0]) >= abs(core[-1])
        poly = core if use_x else core[::-1]
        poly = poly / poly[0]
        for attempt in range(retries):
            z, ok = _aberth(poly, 0.4 + 0.9 * attempt, max_iter)
            if ok:
                break
            logger.debug(f"Aberth retry {attempt + 1} for degree {len(poly) - 1}")
        else:
            raise RootFindingError(f"root finder did not converge for a degree-{f.degree} form")
        for group in _cluster(z, cluster_radius):
            mult = len(group)
            center = _polish_cluster(poly, complex(np.mean(z[group])), mult)
            point = PointP1(center, 1) if use_x else PointP1(1, center)
            entries.append((point, mult))
    divisor = DivisorP1(tuple(entries))
    if divisor.degree != f.degree:
        raise RootFindingError(f"root clusters merged across [1:0]/[0:1] for degree {f.degree}")
    return divisor


def form_from_divisor(divisor: DivisorP1) -> BinaryForm:
    """
    The form whose divisor is exactly the given one, leading nonzero coefficient 1

    Raises:
        ContractViolation: empty divisor
    """

    if divisor.degree == 0:
        raise ContractViolation("form_from_divisor needs a nonempty divisor")
    fields = {p.field for p in divisor.support}
    field = Field.RATIONAL if fields == {Field.RATIONAL} else Field.COMPLEX
    result = BinaryForm(0, (1,), field)
    for point, mult in divisor.points:
        if field is Field.COMPLEX:
            point = point.to_complex()
        # t_p s - s_p t vanishes at [s_p : t_p]
        linear = BinaryForm(1, (point.t, -point.s), field)
        result = result * (linear ** mult)
    return result.normalized()


def mobius_transform(f: BinaryForm, matrix) -> BinaryForm:
    """
    Substitute (s, t) -> (a s + b t, c s + d t) for matrix [[a, b], [c, d]]

    Raises:
        SingularMatrixError: det = 0
        FieldMismatchError: rational form with a non-rational matrix
    """

    (a, b), (c, d) = matrix
    entries = [a, b, c, d]
    field = f.field
    if field is Field.RATIONAL and infer_field(entries) is not Field.RATIONAL:
        raise FieldMismatchError("rational form needs a rational substitution; lift the form first")
    a, b, c, d = (coerce_scalar(v, field) for v in entries)
    det = a * d - b * c
    if det == 0 or (field is Field.COMPLEX and abs(det) < 1e-300):
        raise SingularMatrixError("substitution matrix is singular")
    first = BinaryForm(1, (a, b), field)
    second = BinaryForm(1, (c, d), field)
    result = BinaryForm.zero(f.degree, field)
    for i, coeff in enumerate(f.coeffs):
        if coeff == 0:
            continue
        result = result + (first ** (f.degree - i)) * (second ** i) * coeff
    return result


def common_divisor(forms: Sequence[BinaryForm], tol: float = Config.COMMON_ROOT_TOLERANCE) -> DivisorP1:
    """
    Largest divisor shared by all nonzero forms in the list

    Exact gcd when every form is rational; otherwise root clusters of the first
    nonzero form are matched against the roots of the others and the minimum
    multiplicity is kept.

    Raises:
        ZeroFormError: all forms are zero
    """

    nonzero = [f for f in forms if not f.is_zero]
    if not nonzero:
        raise ZeroFormError("all forms are zero")
    if all(f.is_exact for f in nonzero):
        g = nonzero[0]
        for f in nonzero[1:]:
            g = gcd_form(g, f)
            if g.degree == 0:
                return DivisorP1()
        if g.degree == 0:
            return DivisorP1()
        return roots_of_form(g)
    divisors = [roots_of_form(f.to_complex()) for f in nonzero]
    entries = []
    for point, mult in divisors[0].points:
        shared = min([mult] + [d.multiplicity_of(point, tol) for d in divisors[1:]])
        if shared > 0:
            entries.append((point, shared))
    return DivisorP1(tuple(entries))


def random_form(degree: int, rng: np.random.Generator, field: Field = Field.COMPLEX,
                bound: int = 9) -> BinaryForm:
    """Random form: integer coefficients in [-bound, bound] or complex Gaussian"""

    if field is Field.RATIONAL:
        coeffs = [int(v) for v in rng.integers(-bound, bound + 1, size=degree + 1)]
        if all(c == 0 for c in coeffs):
            coeffs[0] = 1
        return BinaryForm(degree, tuple(coeffs), Field.RATIONAL)
    values = (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) / math.sqrt(2)
    return BinaryForm(degree, tuple(complex(v) for v in values), Field.COMPLEX)


def random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    """Haar-random unitary matrix (well-conditioned random change of coordinates)"""

    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
