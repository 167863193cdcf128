"""Phase-based analysis of meromorphic functions.

Everything here reads the phase of f along curves: chromatic numbers
(winding of the phase), zero and pole localisation by quadtree subdivision,
colour saddles, the essential-singularity probe and periodicity tests.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from django.conf import settings
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel, Field, computed_field

from .exceptions import (
    DerivativeUnavailable,
    NonHolomorphicError,
    PhasePlotError,
    RefinementExhausted,
    SingularOnCircle,
    SingularOnPath,
    SingularPoint,
    TooFewValidSamples,
)
from .expr import (
    ONE,
    Z,
    BinOp,
    Call,
    Const,
    ExprAst,
    complex_literal,
    differentiate,
    evaluate,
    evaluate_array,
    multiply,
    polynomial,
    power,
)
from .geometry import PathPolyline, Rect
from .values import finite_mask, regular_mask

logger = logging.getLogger(__name__)

MAX_REFINEMENT_DEPTH = 20
RESAMPLE_SHIFT = 1e-4
RESAMPLE_ORDER_SLACK = 0.5
TOP_LEVEL_SAMPLES = 64
BOX_SAMPLES = 16
MIN_DEPTH = 3
MAX_NUDGES = 5
NUDGE_FRACTION = 1e-3
NUDGE_STEPS = ((1, 0), (1, 1), (2, 1), (2, 2), (3, 2))
SADDLE_THRESHOLD = 1e-9
PROBE_SAMPLES = 256
# keeps the first probe sample off the symmetry axes of typical test functions
PROBE_START_ANGLE = 0.1234
PERIOD_GRID = 16
PERIOD_TOLERANCE = 1e-8
MIN_PERIOD_SAMPLES = 32
STRIPED_GRID = 8
STRIPED_TOLERANCE = 1e-8


class ChromaticResult(BaseModel):
    winding: int
    samples_used: int
    max_phase_step: float


class SingularityKind(str, Enum):
    ZERO = 'zero'
    POLE = 'pole'
    SADDLE = 'saddle'


class SingularityEntry(BaseModel):
    location: complex
    kind: SingularityKind
    order: int = Field(gt=0)
    box_radius: float

    @property
    def rays(self) -> Optional[int]:
        """Isochromatic rays meeting at a colour saddle of order k: 2k + 2."""
        if self.kind is SingularityKind.SADDLE:
            return 2 * self.order + 2
        return None


class SingularityReport(BaseModel):
    entries: List[SingularityEntry] = []
    mixed_boxes: List[Rect] = []

    @computed_field
    @property
    def net_count(self) -> int:
        return sum(
            e.order if e.kind is SingularityKind.ZERO else -e.order
            for e in self.entries if e.kind is not SingularityKind.SADDLE
        )

    def of_kind(self, kind: SingularityKind) -> List[SingularityEntry]:
        return [e for e in self.entries if e.kind is kind]


class PeriodResult(BaseModel):
    periodic: bool
    period: complex
    alpha: Optional[float] = None


class PeriodicityKind(str, Enum):
    STRIPED = 'striped'
    SIMPLY_PERIODIC_PHASE = 'simply-periodic-phase'
    DOUBLY_PERIODIC = 'doubly-periodic'
    APERIODIC = 'aperiodic'


class PeriodicityClass(BaseModel):
    kind: PeriodicityKind
    a: Optional[complex] = None
    b: Optional[complex] = None
    periods: Tuple[complex, ...] = ()
    alphas: Tuple[float, ...] = ()


def require_holomorphic(ast: ExprAst) -> None:
    if not ast.holomorphic:
        raise NonHolomorphicError(f"'{ast}' uses conj, re, im or abs and is not meromorphic")


# -- phase sampling -----------------------------------------------------------

def _resample(ast: ExprAst, t: np.ndarray, index: int, point_of: Callable):
    """Move a singular sample a little along the path when f is regular and
    phase-continuous around it (a removable 0/0, say). Returns the new
    parameter or None for a genuine zero or pole."""
    gaps = np.diff(t)
    spacing = float(np.min(gaps[max(index - 1, 0):index + 1]))
    delta = RESAMPLE_SHIFT * spacing
    side = -1.0 if index == len(t) - 1 else 1.0
    offsets = np.array([side * delta, 2 * side * delta, -side * delta, -2 * side * delta])
    if index in (0, len(t) - 1):
        offsets = offsets[:2]
    values = evaluate_array(ast, point_of(t[index] + offsets))
    if not regular_mask(values).all():
        return None
    moduli = np.abs(values)
    # |f| scales by 2^order between the two shifts on each side
    if np.abs(np.log2(moduli[1::2] / moduli[0::2])).max() > RESAMPLE_ORDER_SLACK:
        return None
    if len(values) == 4:
        jump = np.angle(values[0] * np.conj(values[2]))
        if abs(jump) >= np.pi / 2:
            return None
    return float(t[index] + offsets[0])


def sample_phase(ast: ExprAst, t: np.ndarray, point_of: Callable,
                 on_singular: Callable) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Refine the parameters t until every principal phase increment is below
    pi/2. Returns (t, points, increments).

    Singular samples are shifted along the path once if f is removable
    there; zeros and poles on the path raise ``on_singular``.
    """
    t = np.array(t, dtype=float)
    points = point_of(t)
    values = evaluate_array(ast, points)
    for depth in range(MAX_REFINEMENT_DEPTH + 1):
        for index in np.flatnonzero(~regular_mask(values)):
            shifted = _resample(ast, t, index, point_of)
            if shifted is None:
                raise on_singular(complex(points[index]))
            logger.debug(f"sample {points[index]:.12g} is removable, shifted along the path")
            t[index] = shifted
            points[index] = point_of(np.array([shifted]))[0]
            values[index] = evaluate_array(ast, points[index:index + 1])[0]
        phases = values / np.abs(values)
        steps = np.angle(phases[1:] * np.conj(phases[:-1]))
        coarse = np.abs(steps) >= np.pi / 2
        if not coarse.any():
            return t, points, steps
        if depth == MAX_REFINEMENT_DEPTH:
            break
        idx = np.flatnonzero(coarse)
        middle = (t[idx] + t[idx + 1]) / 2
        middle_points = point_of(middle)
        t = np.insert(t, idx + 1, middle)
        points = np.insert(points, idx + 1, middle_points)
        values = np.insert(values, idx + 1, evaluate_array(ast, middle_points))
    raise RefinementExhausted(
        f"phase increments stayed above pi/2 after {MAX_REFINEMENT_DEPTH} refinements",
        depth=MAX_REFINEMENT_DEPTH,
    )


def polyline_parametrisation(path: PathPolyline) -> Tuple[np.ndarray, Callable]:
    vertices = path.as_array()
    if path.closed:
        vertices = np.append(vertices, vertices[0])
    last = len(vertices) - 2

    def point_of(t):
        k = np.minimum(np.floor(t).astype(int), last)
        return vertices[k] + (t - k) * (vertices[k + 1] - vertices[k])

    return np.arange(len(vertices), dtype=float), point_of


def singular_on_path(point: complex) -> SingularOnPath:
    return SingularOnPath(f"f is zero or singular on the path at {point:.12g}", point)


def chromatic_number(ast: ExprAst, path: PathPolyline) -> ChromaticResult:
    if not path.closed:
        raise ValueError('chromatic numbers are defined for closed paths')
    t, _, steps = sample_phase(ast, *polyline_parametrisation(path), singular_on_path)
    return ChromaticResult(
        winding=int(round(float(np.sum(steps)) / (2 * np.pi))),
        samples_used=len(t) - 1,
        max_phase_step=float(np.max(np.abs(steps))),
    )


def count_zeros_poles(ast: ExprAst, rect: Rect) -> int:
    require_holomorphic(ast)
    result = chromatic_number(ast, rect.boundary(TOP_LEVEL_SAMPLES))
    logger.info(f"chromatic number of the boundary of {rect}: {result.winding} "
                f"({result.samples_used} samples)")
    return result.winding


def winding_on_circle(ast: ExprAst, center: complex, radius: float,
                      samples: int = PROBE_SAMPLES) -> int:
    path = PathPolyline.circle(center, radius, samples, start_angle=PROBE_START_ANGLE)
    return chromatic_number(ast, path).winding


# -- quadtree localisation ----------------------------------------------------

def _box_winding(ast: ExprAst, box: Rect, per_side: int = BOX_SAMPLES) -> int:
    return chromatic_number(ast, box.boundary(per_side)).winding


def _nudges(box: Rect):
    delta = NUDGE_FRACTION * box.side
    yield 0j
    for kx, ky in NUDGE_STEPS:
        yield complex(kx * delta, ky * delta)


def _root_winding(ast: ExprAst, rect: Rect) -> Tuple[Rect, int]:
    for shift in _nudges(rect):
        box = rect.translated(shift)
        try:
            return box, _box_winding(ast, box, TOP_LEVEL_SAMPLES)
        except (SingularOnPath, RefinementExhausted) as exc:
            logger.debug(f"boundary of {box} is singular ({exc.message}), nudging")
    raise RefinementExhausted(
        f"every nudge of {rect} hits a singularity on its boundary", depth=MAX_NUDGES)


def _split(ast: ExprAst, box: Rect) -> List[Tuple[Rect, int]]:
    """Children of box with their windings; cut lines shift off singularities."""
    center = box.center
    for shift in _nudges(box):
        children = box.split(center.real + shift.real, center.imag + shift.imag)
        try:
            return [(child, _box_winding(ast, child)) for child in children]
        except (SingularOnPath, RefinementExhausted) as exc:
            logger.debug(f"splitting {box} at {center + shift:.6g} failed ({exc.message})")
    raise RefinementExhausted(
        f"every nudged split of {box} hits a singularity", depth=MAX_NUDGES)


def _newton_polish(ast: ExprAst, derivative: Optional[ExprAst], entry_box: Rect,
                   winding: int) -> complex:
    """Multiplicity-aware Newton: z - k f/f' at zeros, z + k f/f' at poles."""
    z = entry_box.center
    if derivative is None:
        return z
    k = float(winding)
    for _ in range(50):
        f = evaluate_array(ast, [z])[0]
        fp = evaluate_array(derivative, [z])[0]
        if not (np.isfinite(f) and np.isfinite(fp)) or fp == 0 or f == 0:
            break
        step = k * f / fp
        z = z - step
        if abs(z - entry_box.center) > 2 * entry_box.radius:
            return entry_box.center
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return complex(z)


def _derivative_or_none(ast: ExprAst) -> Optional[ExprAst]:
    try:
        return differentiate(ast)
    except (DerivativeUnavailable, NonHolomorphicError):
        return None


def localize_singularities(ast: ExprAst, rect: Rect, min_box: float = 1e-3,
                           threads: Optional[int] = None) -> SingularityReport:
    require_holomorphic(ast)
    threads = threads or settings.PHASEPLOT_THREADS
    root, winding = _root_winding(ast, rect)
    frontier = [(root, winding)]
    leaves = []
    depth = 0
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        while frontier:
            to_split = []
            for box, w in frontier:
                if box.side < min_box:
                    if w != 0:
                        leaves.append((box, w))
                elif w != 0 or depth < MIN_DEPTH:
                    to_split.append(box)
            frontier = [child for children in pool.map(partial(_split, ast), to_split)
                        for child in children]
            depth += 1
        leaf_boxes = [box for box, _ in leaves]
        signs = list(pool.map(partial(_child_signs, ast), leaf_boxes))
    mixed = [box for box, sign in zip(leaf_boxes, signs) if sign == {1, -1}]
    for box in mixed:
        logger.warning(f"box {box} holds both zeros and poles at the minimum size")

    derivative = _derivative_or_none(ast)
    entries = []
    for box, w in leaves:
        entries.append(SingularityEntry(
            location=_newton_polish(ast, derivative, box, w),
            kind=SingularityKind.ZERO if w > 0 else SingularityKind.POLE,
            order=abs(w),
            box_radius=box.radius,
        ))
    entries.sort(key=lambda e: (round(e.location.real, 9), round(e.location.imag, 9)))
    report = SingularityReport(entries=entries, mixed_boxes=mixed)
    logger.info(f"localised {len(entries)} singularities in {rect} after {depth} levels, "
                f"net count {report.net_count}")
    return report


def _child_signs(ast: ExprAst, box: Rect) -> set:
    try:
        return {int(np.sign(w)) for _, w in _split(ast, box) if w != 0}
    except RefinementExhausted:
        return set()


def log_derivative_density(ast: ExprAst, z: complex) -> float:
    """|f'(z)/f(z)|, the density of isochromatic lines at z."""
    require_holomorphic(ast)
    value = evaluate(ast, z)
    if not value.is_finite or value.value == 0:
        raise SingularPoint(f"f has no phase at {z} ({value})", point=z)
    slope = evaluate(differentiate(ast), z)
    return abs(slope) / abs(value.value)


def find_saddles(ast: ExprAst, rect: Rect, min_box: float = 1e-3,
                 threads: Optional[int] = None) -> SingularityReport:
    """Zeros of f' where f itself is nonzero; order k gives 2k + 2 rays."""
    require_holomorphic(ast)
    derivative = differentiate(ast)
    critical = localize_singularities(derivative, rect, min_box, threads)
    entries = []
    for entry in critical.of_kind(SingularityKind.ZERO):
        value = evaluate(ast, entry.location)
        if not value.is_finite or abs(value.value) < SADDLE_THRESHOLD:
            continue
        box = Rect.around(entry.location, max(entry.box_radius, min_box))
        try:
            if _box_winding(ast, box) != 0:
                continue
        except (SingularOnPath, RefinementExhausted):
            continue
        entries.append(entry.model_copy(update={'kind': SingularityKind.SADDLE}))
    logger.info(f"found {len(entries)} colour saddle(s) in {rect}")
    return SingularityReport(entries=entries, mixed_boxes=critical.mixed_boxes)


def report_text(report: SingularityReport) -> str:
    lines = [
        f"{e.kind.value} {e.location.real:.12g} {e.location.imag:.12g} {e.order} "
        f"{e.box_radius:.12g}"
        for e in report.entries
    ]
    lines.append(str(report.net_count))
    return '\n'.join(lines) + '\n'


# -- essential singularities --------------------------------------------------

def essential_probe(ast: ExprAst, z0: complex, color_phase: complex,
                    radii: Sequence[float]) -> List[Tuple[float, int]]:
    """Number of times the phase of f passes color_phase on circles around z0."""
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(a <= b for a, b in zip(radii, radii[1:])):
        raise ValueError('probe radii must be positive and strictly descending')
    color_phase = complex(color_phase)
    reference = np.angle(color_phase)
    counts = []
    for radius in radii:
        def point_of(t, radius=radius):
            return z0 + radius * np.exp(1j * (PROBE_START_ANGLE + 2 * np.pi * t))

        def on_singular(point, radius=radius):
            return SingularOnCircle(
                f"f is zero or singular on |z - {z0}| = {radius} at {point:.12g}", point=point)

        t = np.linspace(0.0, 1.0, PROBE_SAMPLES + 1)
        _, points, steps = sample_phase(ast, t, point_of, on_singular)
        start = np.angle(evaluate_array(ast, points[:1])[0]) - reference
        lift = start + np.concatenate([[0.0], np.cumsum(steps)])
        sheets = np.floor(lift / (2 * np.pi))
        crossings = int(np.sum(np.abs(np.diff(sheets))))
        logger.debug(f"probe radius {radius}: {len(points)} samples, {crossings} crossings")
        counts.append((radius, crossings))
    return counts


# -- periodicity --------------------------------------------------------------

def _probe_grid(rect: Rect, n: int) -> np.ndarray:
    xs = rect.xmin + (np.arange(n) + 0.5) * rect.width / n
    ys = rect.ymin + (np.arange(n) + 0.5) * rect.height / n
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def phase_period_test(ast: ExprAst, p: complex, probe_rect: Rect) -> PeriodResult:
    p = complex(p)
    if p == 0:
        raise ValueError('period candidates must be nonzero')
    z = _probe_grid(probe_rect, PERIOD_GRID)
    here, there = evaluate_array(ast, z), evaluate_array(ast, z + p)
    usable = regular_mask(here) & regular_mask(there)
    if usable.sum() < MIN_PERIOD_SAMPLES:
        raise TooFewValidSamples(
            f"only {int(usable.sum())} usable probe points for period {p}", valid=int(usable.sum()))
    ratio = there[usable] / here[usable]
    mean = complex(np.mean(ratio))
    positive = mean.real > 0 and abs(mean.imag) <= PERIOD_TOLERANCE * abs(mean)
    constant = bool(np.all(np.abs(ratio - mean) <= PERIOD_TOLERANCE * abs(mean)))
    if positive and constant:
        return PeriodResult(periodic=True, period=p, alpha=math.log(mean.real))
    return PeriodResult(periodic=False, period=p)


def period_exponent_integral(ast: ExprAst, p: complex, z0: complex = 0j,
                             panels: int = 16) -> complex:
    """Integral of f'/f from z0 to z0 + p by composite Gauss-Legendre."""
    require_holomorphic(ast)
    derivative = differentiate(ast)
    nodes, weights = leggauss(16)
    total = 0j
    for k in range(panels):
        a = z0 + p * k / panels
        half = p / (2 * panels)
        z = a + half * (nodes + 1)
        quotient = evaluate_array(derivative, z) / evaluate_array(ast, z)
        if not np.all(finite_mask(quotient)):
            raise SingularOnPath(f"f'/f is singular on the segment from {z0} to {z0 + p}", z0)
        total += half * np.sum(weights * quotient)
    return complex(total)


def periodic_factor(ast: ExprAst, p: complex, alpha: float) -> ExprAst:
    """g(z) = f(z) exp(-alpha z / p), periodic when f has phase period p."""
    rate = -alpha / complex(p)
    if rate == 0:
        return ast
    return ExprAst(BinOp('*', ast.root, Call('exp', (multiply(complex_literal(rate), Z),))))


def _striped(ast: ExprAst, probe_rect: Rect) -> Optional[PeriodicityClass]:
    try:
        first = differentiate(ast)
        second = differentiate(first)
    except DerivativeUnavailable:
        return None
    z = _probe_grid(probe_rect, STRIPED_GRID)
    f, fp, fpp = (evaluate_array(e, z) for e in (ast, first, second))
    usable = regular_mask(f) & finite_mask(fp) & finite_mask(fpp)
    if usable.sum() < MIN_PERIOD_SAMPLES:
        return None
    f, fp, fpp, z = f[usable], fp[usable], fpp[usable], z[usable]
    curvature = np.abs(f * fpp - fp * fp) / np.abs(f) ** 2
    if np.max(curvature) > STRIPED_TOLERANCE:
        return None
    a = complex(np.mean(fp / f))
    b = complex(np.log(f[0]) - a * z[0])
    return PeriodicityClass(kind=PeriodicityKind.STRIPED, a=a, b=b)


def classify_periodicity(ast: ExprAst, candidate_periods: Sequence[complex],
                         probe_rect: Rect) -> PeriodicityClass:
    require_holomorphic(ast)
    striped = _striped(ast, probe_rect)
    if striped is not None:
        return striped
    passing = [
        result for result in (phase_period_test(ast, p, probe_rect) for p in candidate_periods)
        if result.periodic
    ]
    for i, first in enumerate(passing):
        for second in passing[i + 1:]:
            if abs((second.period / first.period).imag) > 1e-9:
                alphas = (first.alpha, second.alpha)
                if any(abs(alpha) > PERIOD_TOLERANCE for alpha in alphas):
                    raise PhasePlotError(
                        f"doubly periodic phase with nonzero exponents {alphas}", alphas=alphas)
                return PeriodicityClass(
                    kind=PeriodicityKind.DOUBLY_PERIODIC,
                    periods=(first.period, second.period),
                    alphas=alphas,
                )
    if passing:
        return PeriodicityClass(
            kind=PeriodicityKind.SIMPLY_PERIODIC_PHASE,
            periods=(passing[0].period,),
            alphas=(passing[0].alpha,),
        )
    return PeriodicityClass(kind=PeriodicityKind.APERIODIC)


# -- example families -----------------------------------------------------------

def partial_sum(series: Union[str, Sequence[complex]], n: int) -> ExprAst:
    """Degree-n Taylor polynomial of the geometric series or of given coefficients."""
    if n < 1:
        raise ValueError(f"partial sums need degree n >= 1, got {n}")
    if isinstance(series, str):
        if series != 'geometric':
            raise ValueError(f"unknown series '{series}'")
        coefficients = [1] * (n + 1)
    else:
        coefficients = list(series)[:n + 1]
    return ExprAst(polynomial(coefficients))


def wilmshurst(n: int) -> ExprAst:
    """Im(e^{-i pi/4} z^n) + i Im(e^{i pi/4} (z - 1)^n), a harmonic polynomial
    with n^2 zeros."""
    left = multiply(complex_literal(np.exp(-1j * np.pi / 4)), power(Z, Const(n)))
    right = multiply(complex_literal(np.exp(1j * np.pi / 4)), power(BinOp('-', Z, ONE), Const(n)))
    return ExprAst(BinOp(
        '+', Call('im', (left,)), BinOp('*', Const(1j), Call('im', (right,))),
    ))


def wilmshurst_zero_lines(n: int) -> List[complex]:
    """Zeros of wilmshurst(n) as intersections of the zero lines of its real
    part (through 0) and imaginary part (through 1)."""
    h = wilmshurst(n)
    zeros = []
    for k in range(n):
        alpha = (np.pi / 4 + k * np.pi) / n
        for j in range(n):
            beta = (-np.pi / 4 + j * np.pi) / n
            matrix = np.array([[np.cos(alpha), -np.cos(beta)], [np.sin(alpha), -np.sin(beta)]])
            t, _ = np.linalg.solve(matrix, [1.0, 0.0])
            zero = complex(t * np.exp(1j * alpha))
            residual = abs(evaluate(h, zero))
            if residual > 1e-9:
                raise PhasePlotError(f"zero line intersection {zero} has |h| = {residual:.3g}")
            zeros.append(zero)
    zeros.sort(key=lambda w: (round(w.real, 9), round(w.imag, 9)))
    return zeros
