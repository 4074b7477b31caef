"""
Polynomial System Solver
Batched homotopy continuation, Newton polishing, multistart Newton and monodromy completion
"""

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..utils.errors import ContractViolation, NonFiniteSolutionSet, PathFailureBudgetExceeded

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Term = Tuple[Exponent, complex]


# ---------------------------------------------------------------------------
# Sparse polynomial algebra
# ---------------------------------------------------------------------------

class Polynomial:
    """Sparse polynomial in n_vars variables, stored as {exponent tuple: coefficient}"""

    __slots__ = ('n_vars', 'terms')

    def __init__(self, n_vars: int, terms: Optional[Dict[Exponent, complex]] = None):
        self.n_vars = n_vars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, n_vars: int, value) -> 'Polynomial':
        return cls(n_vars, {(0,) * n_vars: value})

    @classmethod
    def variable(cls, n_vars: int, index: int) -> 'Polynomial':
        exp = tuple(int(i == index) for i in range(n_vars))
        return cls(n_vars, {exp: 1})

    def _lift(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial):
            if other.n_vars != self.n_vars:
                raise ContractViolation("polynomials in different variable counts")
            return other
        return Polynomial.constant(self.n_vars, other)

    def __add__(self, other) -> 'Polynomial':
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.n_vars, out)

    __radd__ = __add__

    def __neg__(self) -> 'Polynomial':
        return Polynomial(self.n_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> 'Polynomial':
        return self + (-self._lift(other))

    def __rsub__(self, other) -> 'Polynomial':
        return self._lift(other) - self

    def __mul__(self, other) -> 'Polynomial':
        if not isinstance(other, Polynomial):
            if other == 0:
                return Polynomial(self.n_vars)
            return Polynomial(self.n_vars, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        out: Dict[Exponent, complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.n_vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> 'Polynomial':
        result = Polynomial.constant(self.n_vars, 1)
        for _ in range(n):
            result = result * self
        return result

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, x: Sequence[complex]) -> complex:
        total = 0j
        for e, c in self.terms.items():
            term = complex(c)
            for xi, k in zip(x, e):
                if k:
                    term *= xi ** k
            total += term
        return total

    def to_terms(self) -> Tuple[Term, ...]:
        return tuple(sorted((e, complex(c)) for e, c in self.terms.items()))

    def __repr__(self) -> str:
        return f"Polynomial(n_vars={self.n_vars}, terms={len(self.terms)})"


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Compiled:
    exps: np.ndarray        # (T, n)
    coef_matrix: np.ndarray  # (T, P): coefficient of term t in polynomial p
    abs_matrix: np.ndarray
    max_power: int


def _compile(polys: Sequence[Tuple[Term, ...]], n_vars: int) -> _Compiled:
    exps, rows = [], []
    for p_index, terms in enumerate(polys):
        for exp, coef in terms:
            exps.append(exp)
            rows.append((p_index, coef))
    n_terms = len(exps)
    exps_arr = np.array(exps, dtype=int).reshape(n_terms, n_vars)
    matrix = np.zeros((n_terms, len(polys)), dtype=complex)
    for t_index, (p_index, coef) in enumerate(rows):
        matrix[t_index, p_index] = coef
    max_power = int(exps_arr.max()) if n_terms else 0
    return _Compiled(exps_arr, matrix, np.abs(matrix), max_power)


def _monomials(x: np.ndarray, exps: np.ndarray, max_power: int) -> np.ndarray:
    """Batched monomial values, shape (batch, terms)"""

    batch = x.shape[0]
    out = np.ones((batch, exps.shape[0]), dtype=complex)
    powers = np.arange(max_power + 1)
    for v in range(exps.shape[1]):
        column = exps[:, v]
        if not column.any():
            continue
        table = x[:, v:v + 1] ** powers
        out *= table[:, column]
    return out


@dataclass(frozen=True)
class PolySystem:
    """
    Polynomials over a shared variable list, each a tuple of (exponent, coefficient) terms

    Square systems are what the solver accepts; non-square systems are still
    valid for evaluation, Jacobians and polishing.
    """

    n_vars: int
    polys: Tuple[Tuple[Term, ...], ...]

    def __post_init__(self):
        for terms in self.polys:
            for exp, _ in terms:
                if len(exp) != self.n_vars:
                    raise ContractViolation(
                        f"exponent vector {exp} does not match {self.n_vars} variables"
                    )

    @classmethod
    def from_polynomials(cls, polys: Iterable[Polynomial], n_vars: Optional[int] = None) -> 'PolySystem':
        polys = list(polys)
        if n_vars is None:
            n_vars = polys[0].n_vars if polys else 0
        return cls(n_vars, tuple(p.to_terms() for p in polys))

    @property
    def n_polys(self) -> int:
        return len(self.polys)

    @property
    def is_square(self) -> bool:
        return self.n_polys == self.n_vars

    @property
    def degrees(self) -> List[int]:
        return [max((sum(e) for e, c in terms if c != 0), default=-1) for terms in self.polys]

    @cached_property
    def _compiled(self) -> _Compiled:
        return _compile(self.polys, self.n_vars)

    @cached_property
    def _derivatives(self) -> List[_Compiled]:
        out = []
        for v in range(self.n_vars):
            polys = []
            for terms in self.polys:
                d_terms = []
                for exp, coef in terms:
                    if exp[v] > 0:
                        d_exp = tuple(k - 1 if i == v else k for i, k in enumerate(exp))
                        d_terms.append((d_exp, coef * exp[v]))
                polys.append(tuple(d_terms))
            out.append(_compile(polys, self.n_vars))
        return out

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Values at a batch of points, shape (batch, n_polys)"""
        x = np.atleast_2d(x)
        c = self._compiled
        return _monomials(x, c.exps, c.max_power) @ c.coef_matrix

    def magnitude(self, x: np.ndarray) -> np.ndarray:
        """Sum of absolute term values, the natural scale of each residual"""
        x = np.atleast_2d(x)
        c = self._compiled
        return np.abs(_monomials(x, c.exps, c.max_power)) @ c.abs_matrix

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """Jacobians at a batch of points, shape (batch, n_polys, n_vars)"""
        x = np.atleast_2d(x)
        jac = np.zeros((x.shape[0], self.n_polys, self.n_vars), dtype=complex)
        for v, c in enumerate(self._derivatives):
            if c.exps.shape[0]:
                jac[:, :, v] = _monomials(x, c.exps, c.max_power) @ c.coef_matrix
        return jac

    def relative_residual(self, x: np.ndarray) -> np.ndarray:
        """max_i |F_i(x)| / max(1, magnitude_i(x)) per point"""
        values = np.abs(self.evaluate(x))
        scale = np.maximum(self.magnitude(x), 1.0)
        if values.shape[1] == 0:
            return np.zeros(values.shape[0])
        return np.max(values / scale, axis=1)


def bezout_bound(system: PolySystem) -> int:
    """
    Product of total degrees, zero when some equation is a nonzero constant

    Raises:
        ContractViolation: a zero polynomial or a non-square system
    """

    if not system.is_square:
        raise ContractViolation(f"non-square system: {system.n_polys} equations in {system.n_vars} unknowns")
    degrees = system.degrees
    if any(d < 0 for d in degrees):
        raise ContractViolation("system contains a zero polynomial")
    return int(np.prod(degrees)) if degrees else 1


# ---------------------------------------------------------------------------
# Options and results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveOptions:
    """Tolerances and budgets for the solver kernel"""

    seed: int = 0
    newton_residual: float = Config.NEWTON_RESIDUAL
    newton_max_iterations: int = Config.NEWTON_MAX_ITERATIONS
    dedup_tolerance: float = Config.SOLUTION_DEDUP_TOLERANCE
    initial_step: float = Config.TRACKER_INITIAL_STEP
    min_step: float = Config.TRACKER_MIN_STEP
    max_step: float = Config.TRACKER_MAX_STEP
    max_steps: int = Config.TRACKER_MAX_STEPS
    corrector_iterations: int = Config.TRACKER_CORRECTOR_ITERATIONS
    corrector_tolerance: float = Config.TRACKER_CORRECTOR_TOLERANCE
    divergence_norm: float = Config.DIVERGENCE_NORM
    path_failure_cap: float = Config.PATH_FAILURE_CAP
    gamma_retries: int = Config.GAMMA_RETRIES
    non_finite_ratio: float = Config.NON_FINITE_RATIO
    singular_condition: float = Config.SINGULAR_CONDITION
    multistart_starts: int = Config.MULTISTART_STARTS
    multistart_max_iterations: int = Config.MULTISTART_MAX_ITERATIONS
    multistart_batch: int = Config.MULTISTART_BATCH
    rescue: bool = True

    @classmethod
    def from_config(cls, config_class=Config, **overrides) -> 'SolveOptions':
        base = cls(
            newton_residual=config_class.NEWTON_RESIDUAL,
            newton_max_iterations=config_class.NEWTON_MAX_ITERATIONS,
            dedup_tolerance=config_class.SOLUTION_DEDUP_TOLERANCE,
            initial_step=config_class.TRACKER_INITIAL_STEP,
            min_step=config_class.TRACKER_MIN_STEP,
            max_step=config_class.TRACKER_MAX_STEP,
            max_steps=config_class.TRACKER_MAX_STEPS,
            corrector_iterations=config_class.TRACKER_CORRECTOR_ITERATIONS,
            corrector_tolerance=config_class.TRACKER_CORRECTOR_TOLERANCE,
            divergence_norm=config_class.DIVERGENCE_NORM,
            path_failure_cap=config_class.PATH_FAILURE_CAP,
            gamma_retries=config_class.GAMMA_RETRIES,
            non_finite_ratio=config_class.NON_FINITE_RATIO,
            singular_condition=config_class.SINGULAR_CONDITION,
            multistart_starts=config_class.MULTISTART_STARTS,
            multistart_max_iterations=config_class.MULTISTART_MAX_ITERATIONS,
            multistart_batch=config_class.MULTISTART_BATCH,
        )
        return replace(base, **overrides)

    def with_seed(self, seed: int) -> 'SolveOptions':
        return replace(self, seed=int(seed))


@dataclass
class SolveDiagnostics:
    """Bookkeeping of one solve, embedded into reports"""

    paths_tracked: int = 0
    path_failures: int = 0
    bezout_bound: int = 0
    max_residual: float = 0.0
    seed: int = 0
    singular_endpoints: int = 0
    diverged: int = 0
    gamma_attempts: int = 0
    method: str = 'homotopy'
    non_finite_suspect: bool = False

    def to_dict(self) -> Dict:
        return {
            'paths_tracked': self.paths_tracked,
            'path_failures': self.path_failures,
            'bezout_bound': self.bezout_bound,
            'max_residual': self.max_residual,
            'seed': self.seed,
            'singular_endpoints': self.singular_endpoints,
            'diverged': self.diverged,
            'gamma_attempts': self.gamma_attempts,
            'method': self.method,
            'non_finite_suspect': self.non_finite_suspect,
        }


FINITE, SINGULAR, DIVERGED, FAILED = 'finite', 'singular', 'diverged', 'failed'


@dataclass
class PathResult:
    """Endpoints of a batch of tracked paths with their classification"""

    points: np.ndarray
    status: List[str]
    residuals: np.ndarray

    def finite_points(self) -> np.ndarray:
        keep = [i for i, s in enumerate(self.status) if s == FINITE]
        return self.points[keep]

    def count(self, status: str) -> int:
        return sum(1 for s in self.status if s == status)


# ---------------------------------------------------------------------------
# Linear algebra on batches
# ---------------------------------------------------------------------------

def _solve_batch(matrices: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(matrices, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(rhs)
        for i in range(matrices.shape[0]):
            out[i] = np.linalg.lstsq(matrices[i], rhs[i], rcond=None)[0]
        return out


def _lstsq_batch(matrices: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares steps for a batch of (possibly non-square) systems"""
    pinv = np.linalg.pinv(matrices)
    return np.einsum('bij,bj->bi', pinv, rhs)


def _relative_norm(delta: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.linalg.norm(delta, axis=1) / (1.0 + np.linalg.norm(x, axis=1))


# ---------------------------------------------------------------------------
# Newton
# ---------------------------------------------------------------------------

def newton_polish(system: PolySystem, points: np.ndarray, opts: SolveOptions = SolveOptions()
                  ) -> Tuple[np.ndarray, np.ndarray]:
    """
    Newton iterations until the relative residual drops below tolerance

    Non-square systems take minimum-norm (Gauss-Newton) steps.

    Returns:
        Tuple of (polished points, relative residuals)
    """

    x = np.array(np.atleast_2d(points), dtype=complex)
    if x.shape[0] == 0:
        return x, np.zeros(0)
    square = system.is_square
    for _ in range(opts.newton_max_iterations):
        res = system.relative_residual(x)
        active = res > opts.newton_residual * 1e-2
        if not active.any():
            break
        xa = x[active]
        values = system.evaluate(xa)
        jac = system.jacobian(xa)
        with np.errstate(all='ignore'):
            delta = _solve_batch(jac, -values) if square else _lstsq_batch(jac, -values)
        candidate = xa + delta
        ok = np.isfinite(candidate).all(axis=1)
        improved = ok & (system.relative_residual(np.where(ok[:, None], candidate, xa)) <= res[active] * 1.5)
        idx = np.flatnonzero(active)
        x[idx[improved]] = candidate[improved]
        if not improved.any():
            break
    return x, system.relative_residual(x)


gauss_newton_polish = newton_polish


def _is_singular(system: PolySystem, x: np.ndarray, threshold: float) -> np.ndarray:
    if x.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    jac = system.jacobian(x)
    # row scaling so that badly scaled equations do not look singular
    scale = np.linalg.norm(jac, axis=2, keepdims=True)
    scale[scale == 0] = 1.0
    sv = np.linalg.svd(jac / scale, compute_uv=False)
    return sv[:, -1] <= threshold * sv[:, 0]


def dedup_solutions(points: np.ndarray, tol: float = Config.SOLUTION_DEDUP_TOLERANCE) -> np.ndarray:
    """Drop points within tol relative distance of an earlier point"""

    kept: List[np.ndarray] = []
    for p in np.atleast_2d(points):
        if not kept:
            kept.append(p)
            continue
        ref = np.array(kept)
        dist = np.linalg.norm(ref - p, axis=1) / np.maximum(
            1.0, np.maximum(np.linalg.norm(ref, axis=1), np.linalg.norm(p)))
        if dist.min() > tol:
            kept.append(p)
    n = points.shape[1] if np.ndim(points) == 2 else 0
    return np.array(kept, dtype=complex).reshape(len(kept), n)


def canonical_sort(points: np.ndarray) -> np.ndarray:
    if len(points) == 0:
        return points
    keys = [tuple(v for z in p for v in (round(z.real, 8), round(z.imag, 8))) for p in points]
    order = sorted(range(len(points)), key=lambda i: keys[i])
    return points[order]


def merge_solutions(known: np.ndarray, new: np.ndarray, tol: float) -> Tuple[np.ndarray, int]:
    """Union of two solution sets; returns the union and how many were new"""

    before = len(known)
    if before == 0:
        merged = dedup_solutions(new, tol) if len(new) else new
        return merged, len(merged)
    if len(new) == 0:
        return known, 0
    merged = dedup_solutions(np.vstack([known, new]), tol)
    return merged, len(merged) - before


# ---------------------------------------------------------------------------
# Path tracking
# ---------------------------------------------------------------------------

def random_gamma(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def _homotopy(start: PolySystem, target: PolySystem, gamma: complex, x: np.ndarray, s: np.ndarray,
              need_ds: bool = True):
    g_val = start.evaluate(x)
    f_val = target.evaluate(x)
    a = (gamma * (1.0 - s))[:, None]
    b = s[:, None]
    value = a * g_val + b * f_val
    jac = a[:, :, None] * start.jacobian(x) + b[:, :, None] * target.jacobian(x)
    ds = (f_val - gamma * g_val) if need_ds else None
    return value, jac, ds


def homogenize(system: PolySystem, degrees: Sequence[int]) -> PolySystem:
    """Prepend a homogenizing variable x0, raising equation i to total degree degrees[i]"""

    polys = []
    for terms, d in zip(system.polys, degrees):
        polys.append(tuple(((d - sum(e),) + tuple(e), c) for e, c in terms))
    return PolySystem(system.n_vars + 1, tuple(polys))


def _projective_pair(start: PolySystem, target: PolySystem, patch: np.ndarray
                     ) -> Tuple[PolySystem, PolySystem]:
    degrees = [max(a, b, 0) for a, b in zip(start.degrees, target.degrees)]
    n = start.n_vars + 1
    patch_terms = tuple((tuple(int(i == j) for i in range(n)), complex(patch[j])) for j in range(n))
    patch_eq = patch_terms + (((0,) * n, -1 + 0j),)
    hs = homogenize(start, degrees)
    ht = homogenize(target, degrees)
    return PolySystem(n, hs.polys + (patch_eq,)), PolySystem(n, ht.polys + (patch_eq,))


def _track_core(start: PolySystem, target: PolySystem, gamma: complex, x: np.ndarray,
                opts: SolveOptions) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Euler predictor, Newton corrector, adaptive step; returns (x, s, state)"""

    n_paths = x.shape[0]
    s = np.zeros(n_paths)
    h = np.full(n_paths, opts.initial_step)
    streak = np.zeros(n_paths, dtype=int)
    state = np.zeros(n_paths, dtype=int)  # 0 active, 1 reached, 2 diverged, 3 failed
    steps = 0
    while (state == 0).any() and steps < opts.max_steps:
        steps += 1
        act = np.flatnonzero(state == 0)
        xa, sa = x[act], s[act]
        ha = np.minimum(h[act], 1.0 - sa)
        with np.errstate(all='ignore'):
            _, jac, ds = _homotopy(start, target, gamma, xa, sa)
            xp = xa + ha[:, None] * _solve_batch(jac, -ds)
            sp = sa + ha
            first = last = None
            for _ in range(opts.corrector_iterations):
                value, jac, _ = _homotopy(start, target, gamma, xp, sp, need_ds=False)
                delta = _solve_batch(jac, -value)
                xp = xp + delta
                last = _relative_norm(delta, xp)
                if first is None:
                    first = last
        converged = np.isfinite(xp).all(axis=1) & np.isfinite(last)
        converged &= (last <= opts.corrector_tolerance) & (first <= 0.1)
        accept = act[converged]
        reject = act[~converged]
        x[accept] = xp[converged]
        s[accept] = sp[converged]
        streak[accept] += 1
        grow = accept[streak[accept] >= 3]
        h[grow] = np.minimum(2.0 * h[grow], opts.max_step)
        streak[grow] = 0
        h[reject] *= 0.5
        streak[reject] = 0
        state[reject[h[reject] < opts.min_step]] = 3
        state[accept[np.linalg.norm(x[accept], axis=1) > opts.divergence_norm]] = 2
        done = accept[(s[accept] >= 1.0 - 1e-14) & (state[accept] == 0)]
        s[done] = 1.0
        state[done] = 1
    state[state == 0] = 3
    return x, s, state


def track_paths(start: PolySystem, target: PolySystem, points: np.ndarray, gamma: complex,
                opts: SolveOptions = SolveOptions()) -> PathResult:
    """
    Track solutions of start to target along gamma (1-s) start + s target

    Tracking runs on a random affine patch of projective space, so paths
    heading to infinity end at points with vanishing homogenizing coordinate
    instead of blowing up.

    Args:
        start: square system solved by points
        target: square system of the same shape
        points: start solutions, shape (paths, n_vars)
        gamma: complex twist of unit modulus
        opts: solver options

    Returns:
        PathResult with endpoints polished on the target and classified as
        finite, singular, diverged or failed
    """

    if start.n_vars != target.n_vars or start.n_polys != target.n_polys:
        raise ContractViolation("start and target systems have different shapes")
    x = np.array(np.atleast_2d(points), dtype=complex)
    if x.shape[0] == 0:
        return PathResult(x.reshape(0, start.n_vars), [], np.zeros(0))
    patch_rng = np.random.default_rng([opts.seed, int(1e9 * (np.angle(gamma) % (2 * np.pi)))])
    patch = (patch_rng.standard_normal(start.n_vars + 1)
             + 1j * patch_rng.standard_normal(start.n_vars + 1)) / math.sqrt(2)
    h_start, h_target = _projective_pair(start, target, patch)
    lifted = np.hstack([np.ones((x.shape[0], 1), dtype=complex), x])
    lifted /= (lifted @ patch)[:, None]
    x_hat, s, state = _track_core(h_start, h_target, gamma, lifted, opts)
    x0 = x_hat[:, 0]
    with np.errstate(all='ignore'):
        at_infinity = ~np.isfinite(x_hat).all(axis=1) | (
            np.abs(x0) <= 1e-10 * np.linalg.norm(x_hat, axis=1))
        affine = x_hat[:, 1:] / x0[:, None]
    state[at_infinity] = 2
    return _classify_endpoints(target, affine, s, state, opts)


def _classify_endpoints(target: PolySystem, x: np.ndarray, s: np.ndarray, state: np.ndarray,
                        opts: SolveOptions) -> PathResult:
    status = [DIVERGED if st == 2 else FAILED for st in state]
    residuals = np.full(x.shape[0], np.inf)
    # reached the end, or stalled very close to it
    candidates = np.flatnonzero((state == 1) | ((state == 3) & (s > 1.0 - 1e-6)))
    if candidates.size:
        polished, res = newton_polish(target, x[candidates], opts)
        x[candidates] = polished
        residuals[candidates] = res
        finite = np.isfinite(polished).all(axis=1)
        big = ~finite | (np.linalg.norm(np.where(finite[:, None], polished, 0), axis=1) > opts.divergence_norm)
        singular = np.zeros(len(candidates), dtype=bool)
        if (~big).any():
            singular[~big] = _is_singular(target, polished[~big], opts.singular_condition)
        for k, idx in enumerate(candidates):
            if big[k]:
                status[idx] = DIVERGED
            elif res[k] <= opts.newton_residual and not singular[k]:
                status[idx] = FINITE
            elif res[k] <= 1e-6 and singular[k]:
                status[idx] = SINGULAR
            else:
                status[idx] = FAILED
    return PathResult(x, status, residuals)


# ---------------------------------------------------------------------------
# Total-degree homotopy
# ---------------------------------------------------------------------------

def _total_degree_start(system: PolySystem, rng: np.random.Generator) -> Tuple[PolySystem, np.ndarray]:
    n = system.n_vars
    degrees = system.degrees
    constants = np.exp(2j * np.pi * rng.random(n))
    polys = []
    for i, d in enumerate(degrees):
        polys.append((
            (tuple(d if j == i else 0 for j in range(n)), 1 + 0j),
            ((0,) * n, complex(-constants[i])),
        ))
    start = PolySystem(n, tuple(polys))
    roots = [constants[i] ** (1.0 / d) * np.exp(2j * np.pi * np.arange(d) / d) for i, d in enumerate(degrees)]
    grids = np.meshgrid(*roots, indexing='ij')
    points = np.stack([g.ravel() for g in grids], axis=1)
    return start, points


def solve_square_system(system: PolySystem, opts: SolveOptions = SolveOptions(),
                        include_singular: bool = False) -> Tuple[np.ndarray, SolveDiagnostics]:
    """
    Isolated solutions of a square system by total-degree homotopy

    Args:
        system: square polynomial system
        opts: tolerances, budgets and seed
        include_singular: also return rank-deficient endpoints instead of
            treating many of them as a non-finite suspect

    Returns:
        Tuple of (solutions as rows, canonically sorted; diagnostics)

    Raises:
        ContractViolation: non-square input or a zero polynomial
        NonFiniteSolutionSet: too many paths end on rank-deficient points
        PathFailureBudgetExceeded: failures stay above the cap and rescue is off
    """

    bound = bezout_bound(system)
    if bound == 0:
        logger.info("System has a nonzero constant equation and no solutions")
        return np.zeros((0, system.n_vars), dtype=complex), SolveDiagnostics(seed=opts.seed)
    rng = np.random.default_rng(opts.seed)
    best: Optional[Tuple[np.ndarray, PathResult]] = None
    diag = SolveDiagnostics(bezout_bound=bound, seed=opts.seed)
    for attempt in range(opts.gamma_retries + 1):
        start, points = _total_degree_start(system, rng)
        gamma = random_gamma(rng)
        result = track_paths(start, system, points, gamma, opts)
        diag.gamma_attempts = attempt + 1
        failures = result.count(FAILED)
        logger.debug(f"Total-degree attempt {attempt + 1}: {bound} paths, {failures} failed, "
                     f"{result.count(FINITE)} finite")
        if best is None or failures < best[1].count(FAILED):
            best = (points, result)
        if failures <= opts.path_failure_cap * bound:
            break
    _, result = best
    diag.paths_tracked = bound
    diag.path_failures = result.count(FAILED)
    diag.singular_endpoints = result.count(SINGULAR)
    diag.diverged = result.count(DIVERGED)
    if not include_singular and diag.singular_endpoints > opts.non_finite_ratio * bound:
        diag.non_finite_suspect = True
        raise NonFiniteSolutionSet(
            f"{diag.singular_endpoints} of {bound} paths end on rank-deficient points",
            witnesses=[p for p, st in zip(result.points, result.status) if st == SINGULAR],
            details=diag.to_dict(),
        )
    keep = (FINITE, SINGULAR) if include_singular else (FINITE,)
    endpoints = result.points[[i for i, st in enumerate(result.status) if st in keep]]
    solutions = dedup_solutions(endpoints, opts.dedup_tolerance)
    if diag.path_failures > opts.path_failure_cap * bound:
        if not opts.rescue:
            raise PathFailureBudgetExceeded(
                f"{diag.path_failures} of {bound} paths failed after {diag.gamma_attempts} gamma draws",
                diag.to_dict(),
            )
        logger.warning(f"Path failures {diag.path_failures}/{bound}; running multistart rescue")
        rescued, _ = multistart_newton(system, opts)
        solutions, _ = merge_solutions(solutions, rescued, opts.dedup_tolerance)
        diag.method = 'homotopy+multistart'
    solutions = canonical_sort(solutions)
    diag.max_residual = float(system.relative_residual(solutions).max()) if len(solutions) else 0.0
    logger.info(f"Solved {system.n_vars}-variable system: {len(solutions)} solutions, Bezout {bound}")
    return solutions, diag


# ---------------------------------------------------------------------------
# Multistart Newton
# ---------------------------------------------------------------------------

def multistart_newton(system: PolySystem, opts: SolveOptions = SolveOptions(),
                      n_starts: Optional[int] = None) -> Tuple[np.ndarray, SolveDiagnostics]:
    """
    Damped Newton from complex Gaussian starts, deduplicated

    Returns:
        Tuple of (nonsingular solutions, diagnostics)
    """

    n_starts = n_starts or opts.multistart_starts
    rng = np.random.default_rng([opts.seed, 7919])
    n = system.n_vars
    found = np.zeros((0, n), dtype=complex)
    remaining = n_starts
    while remaining > 0:
        batch = min(remaining, opts.multistart_batch)
        remaining -= batch
        x = (rng.standard_normal((batch, n)) + 1j * rng.standard_normal((batch, n))) / math.sqrt(2)
        x *= rng.exponential(1.0, size=(batch, 1)) + 0.25
        res = np.linalg.norm(system.evaluate(x), axis=1)
        for _ in range(opts.multistart_max_iterations):
            with np.errstate(all='ignore'):
                delta = _solve_batch(system.jacobian(x), -system.evaluate(x))
                lam = np.ones(batch)
                improved = np.zeros(batch, dtype=bool)
                trial = x
                for _ in range(8):
                    candidate = x + lam[:, None] * delta
                    cres = np.linalg.norm(system.evaluate(candidate), axis=1)
                    better = np.isfinite(cres) & (cres < res) & ~improved
                    trial = np.where(better[:, None], candidate, trial)
                    res = np.where(better, cres, res)
                    improved |= better
                    lam = np.where(improved, lam, lam * 0.5)
                    if improved.all():
                        break
            x = trial
            if not improved.any():
                break
        rel = system.relative_residual(x)
        good = np.isfinite(x).all(axis=1) & (rel < 1e-6)
        if good.any():
            polished, pres = newton_polish(system, x[good], opts)
            ok = pres <= opts.newton_residual
            ok &= ~_is_singular(system, polished, opts.singular_condition)
            found, _ = merge_solutions(found, polished[ok], opts.dedup_tolerance)
    found = canonical_sort(found)
    diag = SolveDiagnostics(paths_tracked=n_starts, seed=opts.seed, method='multistart')
    diag.max_residual = float(system.relative_residual(found).max()) if len(found) else 0.0
    return found, diag


# ---------------------------------------------------------------------------
# Monodromy completion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonodromyOptions:
    max_loops: int = Config.MONODROMY_MAX_LOOPS
    stall_loops: int = Config.MONODROMY_STALL_LOOPS
    target_count: Optional[int] = None


@dataclass
class MonodromyDiagnostics:
    loops: int = 0
    solutions: int = 0
    stalled: bool = False
    lost_paths: int = 0
    history: List[int] = field(default_factory=list)


def monodromy_solve(system_at: Callable[[np.ndarray], PolySystem], base_params: np.ndarray,
                    seeds: np.ndarray, rng: np.random.Generator,
                    opts: SolveOptions = SolveOptions(),
                    mono: MonodromyOptions = MonodromyOptions()) -> Tuple[np.ndarray, MonodromyDiagnostics]:
    """
    Grow the solution set of a parameterised family at base_params

    Each loop tracks the known solutions to a random parameter value and back
    along a different gamma; new endpoints are merged. Stops after
    stall_loops loops without growth or once target_count is reached.

    Args:
        system_at: builds the system for a parameter vector (linear in it)
        base_params: parameters of the base system
        seeds: known solutions of the base system
        rng: random generator for loop parameters and gammas
        opts: solver options
        mono: loop budgets

    Returns:
        Tuple of (solutions at base_params, diagnostics)
    """

    base_system = system_at(base_params)
    known, _ = newton_polish(base_system, seeds, opts)
    known = dedup_solutions(known, opts.dedup_tolerance)
    diag = MonodromyDiagnostics(solutions=len(known), history=[len(known)])
    stall = 0
    scale = np.linalg.norm(base_params) / math.sqrt(max(base_params.size, 1))
    while diag.loops < mono.max_loops and stall < mono.stall_loops:
        if mono.target_count is not None and len(known) >= mono.target_count:
            break
        diag.loops += 1
        shape = base_params.shape
        mid = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
        mid_system = system_at(mid)
        out = track_paths(base_system, mid_system, known, random_gamma(rng), opts)
        there = out.finite_points()
        back = track_paths(mid_system, base_system, there, random_gamma(rng), opts)
        diag.lost_paths += (len(known) - len(there)) + (len(there) - back.count(FINITE))
        known, added = merge_solutions(known, back.finite_points(), opts.dedup_tolerance)
        stall = 0 if added else stall + 1
        diag.history.append(len(known))
        logger.debug(f"Monodromy loop {diag.loops}: {len(known)} solutions (+{added})")
    diag.solutions = len(known)
    diag.stalled = stall >= mono.stall_loops
    return known, diag
