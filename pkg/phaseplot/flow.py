"""Phase flow.

The plane system dz/dt = g(z) = f conj(f') / (|f|^2 + |f'|^2) moves points
along the isochromatic lines of f, away from zeros and towards poles.
Its orbits, fixed points and invariant manifolds describe how phase is
carried from the zeros to the boundary; for finite Blaschke products the
basins of the zeros under the reversed flow give a combinatorial picture
of the whole phase plot (the structure sequence).
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from functools import cached_property, partial
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial
from django.conf import settings
from pydantic import BaseModel, ConfigDict, field_validator

from .analysis import (
    SingularityEntry,
    SingularityKind,
    SingularityReport,
    find_saddles,
    localize_singularities,
    polyline_parametrisation,
    require_holomorphic,
    sample_phase,
    singular_on_path,
)
from .color import ColorScheme
from .exceptions import BoundViolation, SeedClassificationError, SingularPoint, StagnationError
from .expr import ExprAst, blaschke, differentiate, evaluate, evaluate_array, print_expr
from .geometry import Disk, Frame, PathPolyline, Rect
from .render import Image, render_values
from .values import UNDEFINED, finite_mask, regular_mask

logger = logging.getLogger(__name__)

ORBIT_TOLERANCE = 1e-9
MIN_STEP = 1e-6
MAX_STEP = 0.05
CAPTURE_RADIUS = 1e-6
MAX_ORBIT_STEPS = 1_000_000
REPROJECT_EVERY = 100
STAGNATION_SPEED = 1e-12
FORCED_STEP_LIMIT = 1000
SEED_RADIUS = 1e-4
TAYLOR_RADIUS = 1e-2
TAYLOR_SAMPLES = 64
LABEL_STEP = 0.05
LABEL_CAPTURE = 1e-3
LABEL_MAX_STEPS = 4000
ARC_START_RADIUS = 0.999
BOUNDARY_SNAP = 1e-5
SEPARATION_TOLERANCE = 1e-6
CRITICAL_MERGE = 1e-5
MEASURE_SAMPLES_PER_BIN = 64
TWO_PI = 2 * math.pi

Domain = Union[Rect, Disk]


class Direction(str, Enum):
    FORWARD = 'forward'
    REVERSED = 'reversed'

    @property
    def sign(self) -> float:
        return 1.0 if self is Direction.FORWARD else -1.0


class Termination(str, Enum):
    REACHED_ZERO = 'reached-zero'
    REACHED_POLE = 'reached-pole'
    REACHED_SADDLE = 'reached-saddle'
    EXITED_DOMAIN = 'exited-domain'
    STEP_LIMIT = 'step-limit'


_REACHED = {
    SingularityKind.ZERO: Termination.REACHED_ZERO,
    SingularityKind.POLE: Termination.REACHED_POLE,
    SingularityKind.SADDLE: Termination.REACHED_SADDLE,
}


class FlowVector(BaseModel):
    value: complex


class Orbit(BaseModel):
    points: List[complex]
    termination: Termination
    # index into the fixed points of the flow that produced the orbit
    target: Optional[int] = None

    @property
    def start(self) -> complex:
        return self.points[0]

    @property
    def end(self) -> complex:
        return self.points[-1]


def _field(f: np.ndarray, fp: np.ndarray) -> np.ndarray:
    """g from samples of f and f'; zero wherever the quotient degenerates."""
    with np.errstate(all='ignore'):
        scale = np.maximum(np.abs(f), np.abs(fp))
        u, v = f / scale, fp / scale
        g = u * np.conj(v) / (np.abs(u) ** 2 + np.abs(v) ** 2)
    return np.where(finite_mask(g), g, 0j)


def _rk4(velocity, z: np.ndarray, h: float) -> np.ndarray:
    k1 = velocity(z)
    k2 = velocity(z + h / 2 * k1)
    k3 = velocity(z + h / 2 * k2)
    k4 = velocity(z + h * k3)
    return z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _domain_rect(domain: Domain) -> Rect:
    return domain.bounding_rect if isinstance(domain, Disk) else domain


class PhaseFlow:
    """f and f' of a meromorphic function plus the fixed points its orbits
    may run into."""

    def __init__(self, ast: ExprAst, fixed_points: Sequence[SingularityEntry] = ()):
        require_holomorphic(ast)
        self.ast = ast
        self.derivative = differentiate(ast)
        self.fixed_points = list(fixed_points)
        self._locations = np.array([e.location for e in self.fixed_points], dtype=complex)

    @classmethod
    def over(cls, ast: ExprAst, rect: Rect, threads: Optional[int] = None) -> 'PhaseFlow':
        return cls(ast, classify_fixed_points(ast, rect, threads).entries)

    def of_kind(self, kind: SingularityKind) -> List[int]:
        return [i for i, e in enumerate(self.fixed_points) if e.kind is kind]

    def values(self, z) -> Tuple[np.ndarray, np.ndarray]:
        """f and f' at the points z (flattened)."""
        z = np.asarray(z, dtype=complex).ravel()
        return evaluate_array(self.ast, z), evaluate_array(self.derivative, z)

    def velocity(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return _field(*self.values(z)).reshape(z.shape)

    def captured(self, z: complex, radius: float = CAPTURE_RADIUS) -> Optional[int]:
        if not self._locations.size:
            return None
        distance = np.abs(self._locations - z)
        nearest = int(np.argmin(distance))
        return nearest if distance[nearest] <= radius else None

    def reproject(self, z: np.ndarray, reference: complex) -> np.ndarray:
        """Step along i f/f' to restore the phase of f to reference."""
        f, fp = self.values(z)
        if not (regular_mask(f).all() and regular_mask(fp).all()):
            return z
        delta = np.angle(reference * np.conj(f / np.abs(f)))
        return z + 1j * delta * f / fp

    def label_points(self, z, targets: Optional[Sequence[complex]] = None,
                     step: float = LABEL_STEP, max_steps: int = LABEL_MAX_STEPS) -> np.ndarray:
        """Index of the target each point reaches under the reversed flow, -1 if none.

        Targets default to the zeros among the fixed points. Every point moves
        with the same fixed RK4 step until it is within the capture radius.
        """
        z = np.array(z, dtype=complex)
        shape = z.shape
        z = z.ravel()
        if targets is None:
            targets = [self.fixed_points[i].location for i in self.of_kind(SingularityKind.ZERO)]
        targets = np.asarray(targets, dtype=complex)
        labels = np.full(z.size, -1, dtype=int)
        if not targets.size:
            return labels.reshape(shape)
        capture = LABEL_CAPTURE
        if targets.size > 1:
            gaps = np.abs(targets[:, None] - targets[None, :])
            capture = min(capture, gaps[~np.eye(targets.size, dtype=bool)].min() / 3)
        active = np.arange(z.size)
        for _ in range(max_steps):
            if not active.size:
                break
            distance = np.abs(z[active, None] - targets[None, :])
            nearest = distance.argmin(axis=1)
            hit = distance[np.arange(active.size), nearest] <= capture
            labels[active[hit]] = nearest[hit]
            active = active[~hit]
            z[active] = _rk4(self.velocity, z[active], -step)
        return labels.reshape(shape)


def flow_field(ast: ExprAst, z: complex) -> FlowVector:
    require_holomorphic(ast)
    g = _field(evaluate_array(ast, [z]), evaluate_array(differentiate(ast), [z]))
    return FlowVector(value=complex(g[0]))


def classify_fixed_points(ast: ExprAst, rect: Rect,
                          threads: Optional[int] = None) -> SingularityReport:
    """Zeros (repelling), poles (attracting) and colour saddles in one report."""
    require_holomorphic(ast)
    zeros_poles = localize_singularities(ast, rect, threads=threads)
    saddles = find_saddles(ast, rect, threads=threads)
    entries = sorted(
        zeros_poles.entries + saddles.entries,
        key=lambda e: (round(e.location.real, 9), round(e.location.imag, 9)),
    )
    return SingularityReport(
        entries=entries, mixed_boxes=zeros_poles.mixed_boxes + saddles.mixed_boxes)


def _boundary_crossing(domain: Domain, inside: complex, outside: complex) -> complex:
    for _ in range(60):
        middle = (inside + outside) / 2
        if bool(domain.contains(middle)):
            inside = middle
        else:
            outside = middle
    return complex(inside)


def integrate_orbit(flow: Union[PhaseFlow, ExprAst], start: complex,
                    direction: Union[Direction, str] = Direction.FORWARD,
                    domain: Optional[Domain] = None,
                    max_steps: int = MAX_ORBIT_STEPS) -> Orbit:
    """Follow the (reversed) phase flow from start with adaptive RK4.

    Steps are controlled by step doubling, and the phase of f is pulled back
    to its starting value every REPROJECT_EVERY steps.
    """
    domain = domain or Disk()
    if isinstance(flow, ExprAst):
        flow = PhaseFlow.over(flow, _domain_rect(domain))
    direction = Direction(direction)
    start = complex(start)
    z = np.array([start])
    if abs(flow.velocity(z)[0]) <= STAGNATION_SPEED:
        raise SingularPoint(f"{start} is a fixed point of the phase flow", point=start)
    reference = evaluate(flow.ast, start).phase
    sign = direction.sign
    h = MAX_STEP
    forced = 0
    points = [start]
    for count in range(1, max_steps + 1):
        while True:
            full = _rk4(flow.velocity, z, sign * h)
            half = _rk4(flow.velocity, _rk4(flow.velocity, z, sign * h / 2), sign * h / 2)
            error = abs(half[0] - full[0])
            if error <= ORBIT_TOLERANCE or h <= MIN_STEP:
                break
            h = max(MIN_STEP, h * max(0.2, 0.9 * (ORBIT_TOLERANCE / error) ** 0.2))
        forced = forced + 1 if error > ORBIT_TOLERANCE else 0
        if forced >= FORCED_STEP_LIMIT:
            raise StagnationError(
                f"step size collapsed at {z[0]:.12g} on the orbit from {start}", point=complex(z[0]))
        grow = 2.0 if error == 0 else min(2.0, 0.9 * (ORBIT_TOLERANCE / error) ** 0.2)
        h = min(MAX_STEP, max(MIN_STEP, h * grow))
        candidate = half
        if count % REPROJECT_EVERY == 0 and reference is not None:
            candidate = flow.reproject(candidate, reference)
        if not bool(domain.contains(candidate[0])):
            points.append(_boundary_crossing(domain, complex(z[0]), complex(candidate[0])))
            return Orbit(points=points, termination=Termination.EXITED_DOMAIN)
        z = candidate
        points.append(complex(z[0]))
        hit = flow.captured(points[-1])
        if hit is not None:
            return Orbit(points=points, termination=_REACHED[flow.fixed_points[hit].kind],
                         target=hit)
        if abs(flow.velocity(z)[0]) <= STAGNATION_SPEED:
            raise StagnationError(
                f"phase flow from {start} stalls at {points[-1]:.12g}, "
                f"away from every known fixed point", point=points[-1])
    logger.warning(f"orbit from {start} hit the limit of {max_steps} steps")
    return Orbit(points=points, termination=Termination.STEP_LIMIT)


# -- invariant manifolds --------------------------------------------------------

def taylor_coefficient(ast: ExprAst, center: complex, order: int,
                       radius: float = TAYLOR_RADIUS, samples: int = TAYLOR_SAMPLES) -> complex:
    """Coefficient of (z - center)^order, from the FFT of f on a small circle."""
    theta = TWO_PI * np.arange(samples) / samples
    values = evaluate_array(ast, center + radius * np.exp(1j * theta))
    if not finite_mask(values).all():
        raise SingularPoint(f"f is singular within {radius} of {center}", point=center)
    return complex(np.fft.fft(values)[order] / samples / radius ** order)


def unstable_manifolds(flow: Union[PhaseFlow, ExprAst],
                       saddle: Union[SingularityEntry, Tuple[complex, int]],
                       domain: Optional[Domain] = None,
                       threads: Optional[int] = None) -> List[Orbit]:
    """The alpha + 1 rays leaving a saddle of order alpha, traced forward."""
    domain = domain or Disk()
    if isinstance(flow, ExprAst):
        flow = PhaseFlow.over(flow, _domain_rect(domain), threads)
    if isinstance(saddle, SingularityEntry):
        location, alpha = saddle.location, saddle.order
    else:
        location, alpha = complex(saddle[0]), int(saddle[1])
    value = evaluate(flow.ast, location)
    if value.phase is None:
        raise SeedClassificationError(f"f has no phase at {location}, not a colour saddle")
    rays = alpha + 1
    c = taylor_coefficient(flow.ast, location, rays)
    # |f| grows fastest where c (z - a)^(alpha + 1) points along f(a)
    base = (np.angle(value.value) - np.angle(c)) / rays
    angles = base + np.pi * np.arange(2 * rays) / rays
    seeds = location + SEED_RADIUS * np.exp(1j * angles)
    rising = np.abs(evaluate_array(flow.ast, seeds)) > abs(value.value)
    expected = np.arange(2 * rays) % 2 == 0
    if not np.array_equal(rising, expected):
        raise SeedClassificationError(
            f"|f| does not alternate {2 * rays} times around the saddle {location}")
    threads = threads or settings.PHASEPLOT_THREADS
    trace = partial(integrate_orbit, flow, direction=Direction.FORWARD, domain=domain)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        orbits = list(pool.map(trace, seeds[expected]))
    logger.debug(f"saddle {location} of order {alpha}: rays end "
                 f"{[o.termination.value for o in orbits]}")
    return orbits


# -- basins of finite Blaschke products -------------------------------------------

class BlaschkeSpec(BaseModel):
    zeros: List[Tuple[complex, int]]
    c: complex = 1

    @field_validator('zeros')
    @classmethod
    def check_zeros(cls, zeros):
        if not zeros:
            raise ValueError('a Blaschke product needs at least one zero')
        return zeros

    @cached_property
    def ast(self) -> ExprAst:
        return blaschke(self.zeros, self.c)

    @property
    def degree(self) -> int:
        return sum(beta for _, beta in self.zeros)

    def distinct_zeros(self) -> List[Tuple[complex, int]]:
        merged = {}
        for location, beta in self.zeros:
            merged[complex(location)] = merged.get(complex(location), 0) + beta
        return list(merged.items())

    def critical_points(self) -> List[Tuple[complex, int]]:
        """Zeros of f' inside the disk that are not zeros of f, with orders.

        f'/f = sum beta (1 - |a|^2) / ((z - a)(1 - conj(a) z)), so they are the
        roots inside the disk of the numerator over the common denominator.
        """
        zeros = self.distinct_zeros()
        factors = [Polynomial([-a, 1]) * Polynomial([1, -np.conj(a)]) for a, _ in zeros]
        numerator = Polynomial([0j])
        for k, (a, beta) in enumerate(zeros):
            term = Polynomial([beta * (1 - abs(a) ** 2) + 0j])
            for j, factor in enumerate(factors):
                if j != k:
                    term = term * factor
            numerator = numerator + term
        if numerator.degree() < 1:
            return []
        clusters: List[List[complex]] = []
        for root in numerator.roots():
            if abs(root) >= 1:
                continue
            for cluster in clusters:
                if abs(root - np.mean(cluster)) <= CRITICAL_MERGE:
                    cluster.append(complex(root))
                    break
            else:
                clusters.append([complex(root)])
        return [(complex(np.mean(cluster)), len(cluster)) for cluster in clusters]


class BlaschkeFlow(PhaseFlow):
    """Phase flow of a finite Blaschke product with f and f'/f in closed form."""

    def __init__(self, spec: BlaschkeSpec, fixed_points: Sequence[SingularityEntry] = ()):
        super().__init__(spec.ast, fixed_points)
        zeros = spec.distinct_zeros()
        self._zeros = np.array([a for a, _ in zeros], dtype=complex)
        self._weights = np.array([beta * (1 - abs(a) ** 2) for a, beta in zeros])
        self._orders = np.array([beta for _, beta in zeros], dtype=float)
        self._c = complex(spec.c)

    def log_derivative(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(-1, 1)
        a = self._zeros
        with np.errstate(all='ignore'):
            return (self._weights / ((z - a) * (1 - np.conj(a) * z))).sum(axis=1)

    def values(self, z) -> Tuple[np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex).ravel()
        a = self._zeros
        with np.errstate(all='ignore'):
            factors = ((z[:, None] - a) / (1 - np.conj(a) * z[:, None])) ** self._orders
            f = self._c * factors.prod(axis=1)
            fp = f * self.log_derivative(z)
        # f'/f has poles at the zeros
        bad = ~finite_mask(fp)
        if bad.any():
            fp[bad] = evaluate_array(self.derivative, z[bad])
        return f, fp

    def velocity(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        big_l = self.log_derivative(z)
        with np.errstate(all='ignore'):
            g = np.conj(big_l) / (1 + np.abs(big_l) ** 2)
        return np.where(finite_mask(g), g, 0j).reshape(z.shape)


class Arc(BaseModel):
    """Counterclockwise arc of the unit circle, angles in radians."""

    start: float
    end: float
    owner: int

    @property
    def span(self) -> float:
        span = (self.end - self.start) % TWO_PI
        return span or TWO_PI

    @property
    def midpoint(self) -> float:
        return (self.start + self.span / 2) % TWO_PI


class BasinDecomposition(BaseModel):

    model_config = ConfigDict(arbitrary_types_allowed=True)

    zeros: List[Tuple[complex, int]]
    saddles: List[Tuple[complex, int]]
    unstable_manifolds: List[Orbit]
    separating_points: List[float]
    arcs: List[Arc]
    frame: Optional[Frame] = None
    basin_label: Optional[np.ndarray] = None

    @property
    def m(self) -> int:
        return len(self.zeros)

    @property
    def k(self) -> int:
        return len(self.saddles)

    @property
    def s(self) -> int:
        return len(self.arcs)


class StructureSequence(BaseModel):
    seq: Tuple[int, ...]

    def __str__(self):
        return ' '.join(str(i) for i in self.seq)


def _merge_angles(angles: Sequence[float]) -> List[float]:
    merged = []
    for angle in sorted(a % TWO_PI for a in angles):
        if merged and angle - merged[-1] <= SEPARATION_TOLERANCE:
            continue
        merged.append(angle)
    if len(merged) > 1 and merged[0] + TWO_PI - merged[-1] <= SEPARATION_TOLERANCE:
        merged.pop()
    return merged


def _arcs(flow: PhaseFlow, separating: List[float]) -> List[Arc]:
    """Arcs between consecutive separating points, the arc over angle 0 first.

    The owner of an arc is the zero that the reversed flow carries its
    midpoint (just inside the circle) to; all midpoints move together.
    """
    if len(separating) < 2:
        start = separating[0] if separating else 0.0
        bounds = [(start, start)]
    else:
        bounds = [(separating[-1], separating[0])]
        bounds += list(zip(separating[:-1], separating[1:]))
    arcs = [Arc(start=start, end=end, owner=0) for start, end in bounds]
    starts = ARC_START_RADIUS * np.exp(1j * np.array([arc.midpoint for arc in arcs]))
    owners = flow.label_points(starts)
    for point, owner in zip(starts, owners):
        if owner < 0:
            raise BoundViolation(f"reversed orbit from {point:.12g} reaches no zero")
    return [arc.model_copy(update={'owner': int(owner)}) for arc, owner in zip(arcs, owners)]


def _label_grid(flow: PhaseFlow, frame: Frame, threads: int) -> np.ndarray:
    z = frame.grid()
    labels = np.full(z.shape, -1, dtype=int)
    inside = np.abs(z) < 1
    rows = [r for r in range(frame.yres) if inside[r].any()]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = pool.map(lambda r: flow.label_points(z[r][inside[r]]), rows)
        for row, row_labels in zip(rows, results):
            labels[row][inside[row]] = row_labels
    unresolved = int(np.sum(inside & (labels < 0)))
    if unresolved:
        logger.warning(f"{unresolved} pixel(s) inside the disk reached no zero")
    return labels


def basin_decomposition(spec: BlaschkeSpec, resolution: Optional[Frame] = None,
                        threads: Optional[int] = None) -> BasinDecomposition:
    """Basins of the zeros of a finite Blaschke product under the reversed flow."""
    threads = threads or settings.PHASEPLOT_THREADS
    # building the product checks that every zero lies in the disk
    logger.debug(f"basin decomposition of {print_expr(spec.ast)}, degree {spec.degree}")
    zeros = spec.distinct_zeros()
    m = len(zeros)

    saddles = [
        SingularityEntry(location=location, kind=SingularityKind.SADDLE, order=alpha, box_radius=0.0)
        for location, alpha in spec.critical_points()
    ]
    k = len(saddles)
    alpha_sum = sum(e.order for e in saddles)
    if alpha_sum != m - 1:
        raise BoundViolation(
            f"saddle orders inside the disk sum to {alpha_sum}, expected {m - 1}",
            alpha_sum=alpha_sum, m=m)

    fixed = [
        SingularityEntry(location=location, kind=SingularityKind.ZERO, order=beta, box_radius=0.0)
        for location, beta in zeros
    ] + saddles
    flow = BlaschkeFlow(spec, fixed)
    disk = Disk()
    manifolds = [
        orbit for saddle in saddles for orbit in unstable_manifolds(flow, saddle, disk, threads)
    ]
    endpoints = []
    for orbit in manifolds:
        if orbit.termination is Termination.EXITED_DOMAIN and abs(abs(orbit.end) - 1) <= BOUNDARY_SNAP:
            endpoints.append(math.atan2(orbit.end.imag, orbit.end.real))
        else:
            logger.debug(f"unstable ray from {orbit.start:.6g} ends with {orbit.termination.value}")
    separating = _merge_angles(endpoints)
    arcs = _arcs(flow, separating)

    s = len(arcs)
    upper = max(m, m + k - 1)
    if not m <= s <= upper:
        raise BoundViolation(f"{s} boundary arcs outside [{m}, {upper}] for {m} zeros and {k} saddles")
    labels = _label_grid(flow, resolution, threads) if resolution is not None else None
    logger.info(f"basin decomposition: {m} zeros, {k} saddles, {s} arcs")
    return BasinDecomposition(
        zeros=zeros,
        saddles=[(e.location, e.order) for e in saddles],
        unstable_manifolds=manifolds,
        separating_points=separating,
        arcs=arcs,
        frame=resolution,
        basin_label=labels,
    )


def structure_sequence(decomp: BasinDecomposition) -> StructureSequence:
    """Owners of the arcs counterclockwise, zeros renumbered by first
    appearance, then the lexicographically smallest rotation."""
    numbering = {}
    seq = [numbering.setdefault(arc.owner, len(numbering) + 1) for arc in decomp.arcs]
    rotations = [tuple(seq[i:] + seq[:i]) for i in range(len(seq))]
    return StructureSequence(seq=min(rotations))


def decomposition_text(decomp: BasinDecomposition) -> str:
    lines = ['ZEROS']
    lines += [f"{z.real:.12g} {z.imag:.12g} {beta}" for z, beta in decomp.zeros]
    lines.append('SADDLES')
    lines += [f"{a.real:.12g} {a.imag:.12g} {alpha}" for a, alpha in decomp.saddles]
    lines.append('SEPARATING_POINTS')
    lines += [f"{angle / TWO_PI:.12g}" for angle in decomp.separating_points]
    lines.append('SEQUENCE')
    lines.append(str(structure_sequence(decomp)))
    return '\n'.join(lines) + '\n'


def basin_image(decomp: BasinDecomposition) -> Image:
    """Basins coloured by zero index spread around the colour circle."""
    if decomp.basin_label is None:
        raise ValueError('the decomposition was computed without a label grid')
    labels = decomp.basin_label
    values = np.where(labels >= 0, np.exp(2j * np.pi * labels / decomp.m), UNDEFINED)
    return render_values(values, ColorScheme())


# -- boundary measure --------------------------------------------------------------

def boundary_phase_measure(ast: ExprAst, curve: PathPolyline, bins: int) -> np.ndarray:
    """Share of the phase winding carried by each of `bins` equal-parameter
    pieces of a closed curve; the weights add up to the chromatic number."""
    require_holomorphic(ast)
    if not curve.closed:
        raise ValueError('the phase measure lives on closed curves')
    if bins < 1:
        raise ValueError(f"need at least one bin, got {bins}")
    _, point_of = polyline_parametrisation(curve)
    grid = np.linspace(0.0, float(len(curve.vertices)), bins * MEASURE_SAMPLES_PER_BIN + 1)
    edges = grid[::MEASURE_SAMPLES_PER_BIN]
    t, _, steps = sample_phase(ast, grid, point_of, singular_on_path)
    owner = np.clip(np.searchsorted(edges, t[:-1], side='right') - 1, 0, bins - 1)
    weights = np.bincount(owner, weights=steps, minlength=bins) / TWO_PI
    logger.debug(f"phase measure over {bins} bins sums to {weights.sum():.12g}")
    return weights
