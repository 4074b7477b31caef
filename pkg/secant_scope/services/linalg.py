"""
Linear Algebra Helpers
Exact row echelon over Fractions and singular-value rank decisions
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..utils.errors import AmbiguousVerdict

logger = logging.getLogger(__name__)


def row_echelon(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Reduce a rational matrix to row echelon form

    Args:
        rows: matrix rows, any values accepted by Fraction

    Returns:
        Tuple of (echelon rows, pivot column indices)
    """

    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots: List[int] = []
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp = m[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            if fr == 0:
                continue
            frp = fr / fp
            for c in range(piv_c, n_cols):
                m[r][c] -= m[piv_r][c] * frp
        pivots.append(piv_c)
        piv_r += 1
    return m, pivots


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_echelon(rows)[1])


def exact_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a square rational matrix by elimination"""

    m = [[Fraction(v) for v in row] for row in rows]
    n = len(m)
    if n == 0:
        return Fraction(1)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        fp = m[c][c]
        det *= fp
        for r in range(c + 1, n):
            fr = m[r][c]
            if fr == 0:
                continue
            frp = fr / fp
            for k in range(c, n):
                m[r][k] -= m[c][k] * frp
    return det


def exact_nullspace(rows: Sequence[Sequence[Fraction]], n_cols: Optional[int] = None) -> List[List[Fraction]]:
    """
    Basis of the right kernel of a rational matrix

    Args:
        rows: matrix rows
        n_cols: column count, needed only when rows is empty

    Returns:
        List of kernel vectors, one per free column
    """

    if not rows:
        width = n_cols or 0
        return [[Fraction(int(i == j)) for j in range(width)] for i in range(width)]
    echelon, pivots = row_echelon(rows)
    width = len(echelon[0])
    # back-substitute to reduced form
    for r in range(len(pivots) - 1, -1, -1):
        pc = pivots[r]
        lead = echelon[r][pc]
        echelon[r] = [v / lead for v in echelon[r]]
        for above in range(r):
            factor = echelon[above][pc]
            if factor != 0:
                echelon[above] = [a - factor * b for a, b in zip(echelon[above], echelon[r])]
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -echelon[r][fc]
        basis.append(vec)
    return basis


@dataclass(frozen=True)
class RankDecision:
    """Numerical rank with the singular values it was read from"""

    rank: int
    gap: float
    singular_values: Tuple[float, ...]

    @property
    def clear(self) -> bool:
        return self.gap > Config.RANK_GAP


def numeric_rank(matrix, cutoff: float = Config.RANK_CUTOFF, gap: float = Config.RANK_GAP,
                 strict: bool = False, what: str = 'matrix') -> RankDecision:
    """
    Decide the rank of a floating matrix from its singular values

    The gap is the ratio between the smallest singular value kept and the
    largest one dropped; infinite when nothing is dropped.

    Args:
        matrix: 2-D array-like
        cutoff: relative singular-value cutoff
        gap: minimum separation for a clear decision
        strict: raise AmbiguousVerdict when the decision is not clear
        what: label used in messages

    Returns:
        RankDecision

    Raises:
        AmbiguousVerdict: strict and the gap is below the threshold
    """

    a = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if a.size == 0:
        return RankDecision(0, float('inf'), ())
    sv = np.linalg.svd(a, compute_uv=False)
    top = sv[0] if sv.size else 0.0
    if top == 0.0:
        return RankDecision(0, float('inf'), tuple(float(v) for v in sv))
    rank = int(np.sum(sv > cutoff * top))
    if rank == len(sv):
        sep = float('inf')
    elif rank == 0:
        sep = 0.0
    else:
        sep = float(sv[rank - 1] / sv[rank]) if sv[rank] > 0 else float('inf')
    decision = RankDecision(rank, sep, tuple(float(v) for v in sv))
    if strict and not sep > gap:
        logger.warning(f"Ambiguous rank for {what}: rank {rank}, gap {sep:.3g}")
        raise AmbiguousVerdict(
            f"rank of {what} is numerically ambiguous (gap {sep:.3g} below {gap:g})",
            {'rank': rank, 'gap': sep},
        )
    return decision


def numeric_nullspace(matrix, rank: Optional[int] = None) -> np.ndarray:
    """Orthonormal basis (as rows) of the right kernel of a floating matrix"""

    a = np.atleast_2d(np.asarray(matrix, dtype=complex))
    _, sv, vh = np.linalg.svd(a)
    if rank is None:
        rank = numeric_rank(a).rank
    return vh[rank:].conj()
