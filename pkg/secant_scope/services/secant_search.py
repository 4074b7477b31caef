"""
Secant Search
Monic-divisor systems over Grassmannian charts, solved by parameter homotopy from planted members
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..utils.errors import ContractViolation, NonFiniteSolutionSet, PathFailureBudgetExceeded
from .binary_forms import remainder_by_monic
from .lines import CHART_PIVOTS, LineP3
from .psolve import (
    FAILED,
    FINITE,
    SINGULAR,
    MonodromyOptions,
    PathResult,
    PolySystem,
    Polynomial,
    SolveOptions,
    monodromy_solve,
    newton_polish,
    random_gamma,
    track_paths,
)

logger = logging.getLogger(__name__)

SEARCH_MODES = ('auto', 'exhaustive', 'witness')
CHART_VARS = 4


def quadrisecant_count(degree: int, genus: int = 0) -> int:
    """Cayley's number of 4-secant lines of a general space curve of given degree and genus"""

    d, g = degree, genus
    total = Fraction((d - 2) * (d - 3) ** 2 * (d - 4), 12) - Fraction(g * (d * d - 7 * d + 13 - g), 2)
    return max(int(total), 0)


@dataclass(frozen=True)
class SecantSearchOptions:
    """
    Options for a k-secant search

    mode 'exhaustive' completes the solution set of a planted member by
    monodromy and tracks all of it to the curve; 'witness' tracks one planted
    start per chart, which proves existence only and leaves the line set
    partial; 'auto' is exhaustive.
    """

    seed: int = 0
    mode: str = 'auto'
    charts: Tuple[Tuple[int, int], ...] = CHART_PIVOTS
    use_count_hint: bool = True
    solve: SolveOptions = field(default_factory=SolveOptions)
    monodromy: MonodromyOptions = field(default_factory=MonodromyOptions)
    residual_tolerance: float = Config.RESIDUAL_TOLERANCE

    def __post_init__(self):
        if self.mode not in SEARCH_MODES:
            raise ContractViolation(f"unknown search mode {self.mode!r}; expected one of {SEARCH_MODES}")
        if not self.charts:
            raise ContractViolation("a secant search needs at least one chart")
        for pivots in self.charts:
            if pivots not in CHART_PIVOTS:
                raise ContractViolation(f"invalid chart pivots {pivots!r}")

    @classmethod
    def from_config(cls, config_class=Config, **overrides) -> 'SecantSearchOptions':
        seed = int(overrides.get('seed', 0))
        values = {
            'solve': SolveOptions.from_config(config_class, seed=seed),
            'monodromy': MonodromyOptions(config_class.MONODROMY_MAX_LOOPS, config_class.MONODROMY_STALL_LOOPS),
            'residual_tolerance': config_class.RESIDUAL_TOLERANCE,
        }
        values.update(overrides)
        return cls(**values)

    def resolved_mode(self, default: str) -> str:
        return default if self.mode == 'auto' else self.mode

    @property
    def lists_every_line(self) -> bool:
        """Witness searches stop at one path per chart"""
        return self.resolved_mode('exhaustive') == 'exhaustive'


@dataclass
class SearchDiagnostics:
    k: int
    mode: str
    sliced: bool = False
    base_solutions: int = 0
    monodromy_loops: int = 0
    monodromy_stalled: bool = False
    paths_tracked: int = 0
    path_failures: int = 0
    singular_endpoints: int = 0
    candidates: int = 0
    complete: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Candidate:
    """A line produced by a chart solve, before verification against the curve"""

    line: LineP3
    chart: Tuple[int, int]
    residual: float


class SecantFamily(ABC):
    """
    Lines of P3 carrying a pair of binary forms, parameterised linearly

    A line is a k-secant candidate when both forms are divisible by a common
    monic form of degree k. Chart values are the 4 line-chart entries followed
    by the k non-leading coefficients of the monic divisor.
    """

    target: np.ndarray

    @abstractmethod
    def forms(self, params: np.ndarray, pivots: Tuple[int, int], n_vars: int
              ) -> Tuple[List[Polynomial], List[Polynomial]]:
        """The two forms over a chart, coefficients polynomial in the chart variables"""

    @abstractmethod
    def plant(self, pivots: Tuple[int, int], k: int, rng: np.random.Generator
              ) -> Tuple[np.ndarray, np.ndarray]:
        """A random family member together with one of its chart solutions"""

    @abstractmethod
    def line(self, pivots: Tuple[int, int], values: np.ndarray) -> LineP3:
        """Line of a chart solution, in the curve's own coordinates"""

    @abstractmethod
    def convert(self, values: np.ndarray, source: Tuple[int, int], dest: Tuple[int, int]
                ) -> Optional[np.ndarray]:
        """Chart solution rewritten in another chart, None when the line is outside it"""

    def count_hint(self, k: int) -> Optional[int]:
        return None


def chart_system(family: SecantFamily, params: np.ndarray, pivots: Tuple[int, int], k: int,
                 slice_row: Optional[Tuple[np.ndarray, complex]] = None) -> PolySystem:
    """
    Divisibility equations of one chart

    Args:
        family: the parameterised family
        params: family parameters
        pivots: chart pivots
        k: degree of the common monic divisor
        slice_row: optional linear equation (coefficients, value) appended to the system

    Returns:
        2k equations (plus the slice) in 4 + k variables
    """

    n_vars = CHART_VARS + k
    g1, g2 = family.forms(params, pivots, n_vars)
    monic = [1] + [Polynomial.variable(n_vars, CHART_VARS + j) for j in range(k)]
    equations = remainder_by_monic(g1, monic) + remainder_by_monic(g2, monic)
    if slice_row is not None:
        coeffs, value = slice_row
        linear = Polynomial.constant(n_vars, -complex(value))
        for v in range(n_vars):
            linear = linear + Polynomial.variable(n_vars, v) * complex(coeffs[v])
        equations.append(linear)
    return PolySystem.from_polynomials(equations, n_vars)


def _track_with_retries(start: PolySystem, target: PolySystem, starts: np.ndarray,
                        rng: np.random.Generator, opts: SolveOptions) -> PathResult:
    result = track_paths(start, target, starts, random_gamma(rng), opts)
    for attempt in range(opts.gamma_retries):
        failed = [i for i, st in enumerate(result.status) if st == FAILED]
        if not failed:
            break
        logger.debug(f"Retracking {len(failed)} failed paths, gamma draw {attempt + 2}")
        retry = track_paths(start, target, starts[failed], random_gamma(rng), opts)
        for slot, idx in enumerate(failed):
            if retry.status[slot] != FAILED:
                result.points[idx] = retry.points[slot]
                result.status[idx] = retry.status[slot]
                result.residuals[idx] = retry.residuals[slot]
    return result


def _collect(family: SecantFamily, pivots: Tuple[int, int], result: PathResult,
             diag: SearchDiagnostics) -> List[Candidate]:
    diag.paths_tracked += len(result.status)
    diag.path_failures += result.count(FAILED)
    diag.singular_endpoints += result.count(SINGULAR)
    out = []
    for point, status, residual in zip(result.points, result.status, result.residuals):
        if status != FINITE:
            continue
        try:
            line = family.line(pivots, point[:CHART_VARS])
        except ContractViolation:
            continue
        out.append(Candidate(line, pivots, float(residual)))
    return out


def _witness_starts(family: SecantFamily, k: int, opts: SecantSearchOptions, sliced: bool,
                    rng: np.random.Generator, diag: SearchDiagnostics) -> List[Candidate]:
    candidates: List[Candidate] = []
    for pivots in opts.charts:
        params0, x0 = family.plant(pivots, k, rng)
        slice_row = None
        if sliced:
            coeffs = (rng.standard_normal(x0.size) + 1j * rng.standard_normal(x0.size)) / math.sqrt(2)
            slice_row = (coeffs, complex(coeffs @ x0))
        start = chart_system(family, params0, pivots, k, slice_row)
        target = chart_system(family, family.target, pivots, k, slice_row)
        polished, _ = newton_polish(start, x0[None, :], opts.solve)
        result = _track_with_retries(start, target, polished, rng, opts.solve)
        found = _collect(family, pivots, result, diag)
        logger.debug(f"Chart {pivots}: witness path ended {result.status[0]}")
        candidates.extend(found)
    return candidates


def _exhaustive(family: SecantFamily, k: int, opts: SecantSearchOptions,
                rng: np.random.Generator, diag: SearchDiagnostics) -> List[Candidate]:
    base = opts.charts[0]
    params0, x0 = family.plant(base, k, rng)

    def base_system(params: np.ndarray) -> PolySystem:
        return chart_system(family, params, base, k)

    mono = opts.monodromy
    hint = family.count_hint(k) if opts.use_count_hint else None
    if hint is not None:
        mono = MonodromyOptions(mono.max_loops, mono.stall_loops, hint)
    base_solutions, mdiag = monodromy_solve(base_system, params0, x0[None, :], rng, opts.solve, mono)
    diag.base_solutions = len(base_solutions)
    diag.monodromy_loops = mdiag.loops
    diag.monodromy_stalled = mdiag.stalled
    logger.info(f"Monodromy: {len(base_solutions)} base solutions after {mdiag.loops} loops")

    candidates: List[Candidate] = []
    for pivots in opts.charts:
        starts = [family.convert(x, base, pivots) for x in base_solutions]
        starts = [x for x in starts if x is not None]
        if not starts:
            continue
        start = chart_system(family, params0, pivots, k)
        target = chart_system(family, family.target, pivots, k)
        points, _ = newton_polish(start, np.array(starts), opts.solve)
        result = _track_with_retries(start, target, points, rng, opts.solve)
        found = _collect(family, pivots, result, diag)
        logger.debug(f"Chart {pivots}: {len(starts)} paths, {len(found)} finite endpoints")
        candidates.extend(found)
    return candidates


def search_candidates(family: SecantFamily, k: int, opts: SecantSearchOptions, mode: str,
                      sliced: bool = False) -> Tuple[List[Candidate], SearchDiagnostics]:
    """
    Candidate lines whose two forms share a monic divisor of degree k

    Args:
        family: parameterised family with the curve as target
        k: divisor degree
        opts: search options
        mode: 'exhaustive' or 'witness'
        sliced: add one random linear equation per chart (positive-dimensional searches)

    Returns:
        Tuple of (candidates from every chart, undeduplicated; diagnostics)

    Raises:
        PathFailureBudgetExceeded: too many paths failed after gamma retries
        NonFiniteSolutionSet: too many paths ended on rank-deficient points
    """

    rng = np.random.default_rng([opts.seed, k, int(sliced)])
    diag = SearchDiagnostics(k=k, mode=mode, sliced=sliced, complete=not sliced and mode == 'exhaustive')
    if sliced or mode == 'witness':
        candidates = _witness_starts(family, k, opts, sliced, rng, diag)
    else:
        candidates = _exhaustive(family, k, opts, rng, diag)
    diag.candidates = len(candidates)
    if diag.paths_tracked and diag.singular_endpoints > opts.solve.non_finite_ratio * diag.paths_tracked:
        raise NonFiniteSolutionSet(
            f"{diag.singular_endpoints} of {diag.paths_tracked} secant paths end on rank-deficient points",
            witnesses=candidates, details=diag.to_dict(),
        )
    if diag.paths_tracked and diag.path_failures > opts.solve.path_failure_cap * diag.paths_tracked:
        raise PathFailureBudgetExceeded(
            f"{diag.path_failures} of {diag.paths_tracked} secant paths failed", diag.to_dict(),
        )
    logger.info(f"{mode} {k}-secant search: {len(candidates)} candidates from {diag.paths_tracked} paths")
    return candidates, diag


def monic_from_roots(roots: Sequence[complex]) -> np.ndarray:
    """Monic coefficients 1, m_1..m_k of prod (x - r)"""
    return np.poly(np.asarray(roots, dtype=complex)).astype(complex)


def gaussian(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
