"""
Lines in P3
Plücker coordinates, frames, dual frames, Grassmannian charts and secant records
"""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..utils.errors import ContractViolation
from .binary_forms import DivisorP1, Field, Scalar, coerce_scalar, infer_field
from .linalg import exact_nullspace, numeric_nullspace

logger = logging.getLogger(__name__)

PLUCKER_PAIRS = tuple(combinations(range(4), 2))  # (01, 02, 03, 12, 13, 23)
CHART_PIVOTS = PLUCKER_PAIRS


def complement(pivots: Tuple[int, int]) -> Tuple[int, int]:
    rest = [c for c in range(4) if c not in pivots]
    return rest[0], rest[1]


def _canonical(vector: Sequence[Scalar], field: Field) -> Tuple[Scalar, ...]:
    if field is Field.RATIONAL:
        lead = next(v for v in vector if v != 0)
        return tuple(Fraction(v) / lead for v in vector)
    arr = np.array([complex(v) for v in vector])
    lead = arr[int(np.argmax(np.abs(arr)))]
    return tuple(complex(v) for v in arr / lead)


@dataclass(frozen=True)
class LineP3:
    """
    Line of P3 with a spanning frame, a cutting dual frame and Plücker coordinates

    Plücker coordinates are p_ij = P_i Q_j - P_j Q_i for i < j, scaled so the
    first nonzero entry (exact) or the largest entry (floating) is 1.
    """

    frame: Tuple[Tuple[Scalar, ...], Tuple[Scalar, ...]]
    dual_frame: Tuple[Tuple[Scalar, ...], Tuple[Scalar, ...]]
    plucker: Tuple[Scalar, ...]
    field: Field = Field.COMPLEX

    @classmethod
    def from_frame(cls, p: Sequence, q: Sequence, field: Optional[Field] = None) -> 'LineP3':
        """
        Line through two points

        Raises:
            ContractViolation: the points coincide projectively
        """

        field = field or infer_field(list(p) + list(q))
        p = tuple(coerce_scalar(v, field) for v in p)
        q = tuple(coerce_scalar(v, field) for v in q)
        pl = [p[i] * q[j] - p[j] * q[i] for i, j in PLUCKER_PAIRS]
        if field is Field.RATIONAL:
            degenerate = all(v == 0 for v in pl)
            dual = exact_nullspace([list(p), list(q)])
        else:
            size = np.linalg.norm(p) * np.linalg.norm(q)
            degenerate = size == 0 or np.linalg.norm(pl) <= 1e-12 * size
            dual = [] if degenerate else [tuple(row) for row in numeric_nullspace([p, q], rank=2)]
        if degenerate:
            raise ContractViolation("frame points do not span a line")
        return cls((p, q), (tuple(dual[0]), tuple(dual[1])), _canonical(pl, field), field)

    @classmethod
    def from_dual_frame(cls, a: Sequence, b: Sequence, field: Optional[Field] = None) -> 'LineP3':
        """
        Line cut out by two linear forms

        Raises:
            ContractViolation: the forms are dependent
        """

        field = field or infer_field(list(a) + list(b))
        a = tuple(coerce_scalar(v, field) for v in a)
        b = tuple(coerce_scalar(v, field) for v in b)
        if field is Field.RATIONAL:
            frame = exact_nullspace([list(a), list(b)])
            if len(frame) != 2:
                raise ContractViolation("dual frame forms are dependent")
        else:
            sv = np.linalg.svd(np.array([a, b], dtype=complex), compute_uv=False)
            if sv[1] <= 1e-12 * sv[0]:
                raise ContractViolation("dual frame forms are dependent")
            frame = numeric_nullspace([a, b], rank=2)
        line = cls.from_frame(frame[0], frame[1], field)
        return replace(line, dual_frame=(a, b))

    @classmethod
    def from_chart(cls, pivots: Tuple[int, int], u: Sequence[complex]) -> 'LineP3':
        """Line with frame rows e_i + u1 e_q1 + u2 e_q2 and e_j + u3 e_q1 + u4 e_q2"""

        i, j = pivots
        q1, q2 = complement(pivots)
        p = [0j] * 4
        q = [0j] * 4
        p[i], p[q1], p[q2] = 1, u[0], u[1]
        q[j], q[q1], q[q2] = 1, u[2], u[3]
        return cls.from_frame(p, q, Field.COMPLEX)

    def to_complex(self) -> 'LineP3':
        if self.field is Field.COMPLEX:
            return self
        frame = tuple(tuple(complex(v) for v in row) for row in self.frame)
        dual = tuple(tuple(complex(v) for v in row) for row in self.dual_frame)
        return LineP3(frame, dual, tuple(complex(v) for v in self.plucker), Field.COMPLEX)

    def plucker_relation(self) -> complex:
        p01, p02, p03, p12, p13, p23 = (complex(v) for v in self.plucker)
        return p01 * p23 - p02 * p13 + p03 * p12

    def plucker_array(self) -> np.ndarray:
        return np.array([complex(v) for v in self.plucker])

    def distance(self, other: 'LineP3') -> float:
        """Sine of the angle between Plücker vectors; 0 for the same line"""
        a, b = self.plucker_array(), other.plucker_array()
        cos = abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))
        return math.sqrt(max(0.0, 1.0 - min(1.0, cos) ** 2))

    def same_line(self, other: 'LineP3', tol: float = 1e-7) -> bool:
        if self.field is Field.RATIONAL and other.field is Field.RATIONAL:
            return self.plucker == other.plucker
        return self.distance(other) <= tol

    def point_at(self, s, t) -> Tuple[Scalar, ...]:
        p, q = self.frame
        return tuple(s * a + t * b for a, b in zip(p, q))

    def contains_point(self, x: Sequence, tol: float = 1e-9) -> bool:
        values = [sum(complex(c) * complex(v) for c, v in zip(row, x)) for row in self.dual_frame]
        scale = max(np.linalg.norm([complex(v) for v in x]), 1e-300)
        return all(abs(v) <= tol * scale * np.linalg.norm([complex(c) for c in row])
                   for v, row in zip(values, self.dual_frame))

    def transform(self, matrix) -> 'LineP3':
        """Image of the line under x -> M x"""
        m = np.asarray(matrix, dtype=complex)
        p, q = (np.array([complex(v) for v in row]) for row in self.frame)
        return LineP3.from_frame(m @ p, m @ q, Field.COMPLEX)

    def best_chart(self) -> Tuple[int, int]:
        """Pivot pair of the largest Plücker coordinate"""
        mags = [abs(complex(v)) for v in self.plucker]
        return PLUCKER_PAIRS[int(np.argmax(mags))]

    def chart_coordinates(self, pivots: Tuple[int, int]) -> Optional[np.ndarray]:
        """(u1, u2, u3, u4) of the row-reduced frame, or None outside the chart"""

        frame = np.array([[complex(v) for v in row] for row in self.frame])
        block = frame[:, list(pivots)]
        if abs(np.linalg.det(block)) <= 1e-10 * np.linalg.norm(frame) ** 2:
            return None
        reduced = np.linalg.solve(block, frame)
        q1, q2 = complement(pivots)
        return np.array([reduced[0, q1], reduced[0, q2], reduced[1, q1], reduced[1, q2]])

    def sort_key(self) -> Tuple[float, ...]:
        return tuple(v for z in self.plucker_array() for v in (round(z.real, 8), round(z.imag, 8)))


def dedup_lines(lines: Sequence[LineP3], tol: float = 1e-7) -> List[LineP3]:
    kept: List[LineP3] = []
    for line in lines:
        if not any(line.same_line(other, tol) for other in kept):
            kept.append(line)
    return kept


@dataclass(frozen=True)
class SecantRecord:
    """A line meeting a curve in a scheme of the recorded length"""

    line: LineP3
    divisor: DivisorP1
    length: int
    proper: bool
    maximal: bool = False
    residual: float = 0.0

    @property
    def reduced(self) -> bool:
        return self.divisor.is_reduced

    def marked_maximal(self, flag: bool = True) -> 'SecantRecord':
        return replace(self, maximal=flag)

    def verified(self, k: int, tolerance: float = Config.RESIDUAL_TOLERANCE) -> bool:
        return self.length >= k and self.residual <= tolerance


def sort_records(records: Sequence[SecantRecord]) -> List[SecantRecord]:
    return sorted(records, key=lambda r: (-r.length, r.line.sort_key()))


def random_rational_line(rng: np.random.Generator, bound: int = 5) -> LineP3:
    """Line through two random integer points"""

    while True:
        p = [int(v) for v in rng.integers(-bound, bound + 1, size=4)]
        q = [int(v) for v in rng.integers(-bound, bound + 1, size=4)]
        try:
            return LineP3.from_frame(p, q, Field.RATIONAL)
        except ContractViolation:
            continue


def reparametrize_roots(roots: np.ndarray, block: np.ndarray) -> Optional[np.ndarray]:
    """
    Roots x = s/t moved to the parameter (s', t') = (s, t) block

    Returns None when a root is sent to infinity.
    """

    denominators = roots * block[0, 1] + block[1, 1]
    if np.any(np.abs(denominators) <= 1e-10 * (1 + np.abs(roots))):
        return None
    return (roots * block[0, 0] + block[1, 0]) / denominators
