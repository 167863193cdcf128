"""Boundary value problems for phase plots on the unit disk.

A continuous colouring B of the unit circle is the boundary phase of a
function analytic in the disk (and continuous up to the circle) exactly
when its chromatic number vanishes, and that phase is then unique. The
construction lifts B to a real argument phi, extends phi harmonically and
adds its conjugate: f = exp(i(Phi + i Psi)).
"""
import logging
from pathlib import Path
from typing import Optional, Sequence, TextIO, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, field_validator

from .analysis import singular_on_path
from .color import ColorScheme
from .exceptions import (
    ChromaticMismatch,
    DiscontinuousColoring,
    JobConfigError,
    LocationOnBoundary,
    NonzeroChromaticNumber,
)
from .expr import ExprAst, blaschke, divide, evaluate_array
from .geometry import Frame
from .render import Image, render_values
from .values import UNDEFINED, regular_mask

logger = logging.getLogger(__name__)

MIN_SAMPLES = 64
UNIMODULAR_TOLERANCE = 1e-12

Singularities = Sequence[Tuple[complex, int]]


class BoundaryColoring(BaseModel):
    """Samples B(exp(2 pi i k / N)), k = 0..N-1, of a colouring of the circle."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    samples: np.ndarray

    @field_validator('samples', mode='before')
    @classmethod
    def check_samples(cls, samples):
        samples = np.asarray(samples, dtype=complex).ravel()
        n = samples.size
        if n < MIN_SAMPLES or n & (n - 1):
            raise ValueError(f"the number of samples must be a power of two >= {MIN_SAMPLES}, got {n}")
        deviation = np.max(np.abs(np.abs(samples) - 1))
        if not deviation <= UNIMODULAR_TOLERANCE:
            raise ValueError(f"samples must be unimodular, off by {deviation:.3g}")
        return samples

    @property
    def size(self) -> int:
        return self.samples.size

    def points(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.size) / self.size)

    def increments(self) -> np.ndarray:
        """Principal phase steps from each sample to the next, cyclically."""
        return np.angle(np.roll(self.samples, -1) * np.conj(self.samples))


class DiskColoring(BaseModel):
    """Phase of the analytic extension over a frame, plus the extension itself.

    ``coefficients`` are the power-series coefficients of h = Phi + i Psi;
    ``factor`` is the Blaschke-type factor of prescribed zeros and poles.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    coefficients: np.ndarray
    factor: Optional[ExprAst] = None
    frame: Frame
    phase_grid: np.ndarray

    def series(self, z) -> np.ndarray:
        return P.polyval(np.asarray(z, dtype=complex), self.coefficients)

    def harmonic_argument(self, z) -> np.ndarray:
        return self.series(z).real

    def conjugate(self, z) -> np.ndarray:
        return self.series(z).imag

    def analytic(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        f = np.exp(1j * self.series(z))
        if self.factor is not None:
            f = f * evaluate_array(self.factor, z).reshape(z.shape)
        return f

    def phase(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        phase = np.exp(1j * self.harmonic_argument(z))
        if self.factor is not None:
            w = evaluate_array(self.factor, z).reshape(z.shape)
            with np.errstate(all='ignore'):
                phase = np.where(regular_mask(w), phase * w / np.abs(w), UNDEFINED)
        return phase

    def image(self, scheme: Optional[ColorScheme] = None) -> Image:
        return render_values(self.phase_grid, scheme or ColorScheme())


def chrom_of_coloring(coloring: BoundaryColoring) -> int:
    steps = coloring.increments()
    worst = int(np.argmax(np.abs(steps)))
    if abs(steps[worst]) >= np.pi / 2:
        raise DiscontinuousColoring(
            f"phase jumps by {abs(steps[worst]):.6g} between samples {worst} and "
            f"{(worst + 1) % coloring.size}", sample=worst)
    return int(round(float(np.sum(steps)) / (2 * np.pi)))


def _series_coefficients(phi: np.ndarray) -> np.ndarray:
    """Coefficients of the analytic h with Re h = phi on the circle, Im h(0) = 0."""
    n = phi.size
    c = np.fft.fft(phi) / n
    coefficients = np.zeros(n // 2 + 1, dtype=complex)
    coefficients[0] = c[0].real
    coefficients[1:n // 2] = 2 * c[1:n // 2]
    coefficients[n // 2] = c[n // 2].real
    return coefficients


def _phase_on_grid(coloring: DiskColoring) -> np.ndarray:
    z = coloring.frame.grid()
    inside = np.abs(z) <= 1
    phase = np.full(z.shape, UNDEFINED)
    phase[inside] = coloring.phase(z[inside])
    return phase


def extend_analytic(coloring: BoundaryColoring, grid: Frame) -> DiskColoring:
    """The unique analytic phase inside the disk with boundary colouring B."""
    chrom = chrom_of_coloring(coloring)
    if chrom != 0:
        raise NonzeroChromaticNumber(
            f"nonzero chromatic number {chrom}: no analytic extension without singularities",
            chrom=chrom)
    return _extension(coloring, grid)


def _extension(coloring: BoundaryColoring, grid: Frame,
               factor: Optional[ExprAst] = None) -> DiskColoring:
    steps = coloring.increments()
    # lift anchored at the principal argument of sample 0
    phi = np.angle(coloring.samples[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    extension = DiskColoring(
        coefficients=_series_coefficients(phi),
        factor=factor,
        frame=grid,
        phase_grid=np.empty((0, 0), dtype=complex),
    )
    extension.phase_grid = _phase_on_grid(extension)
    logger.info(f"extended a colouring of {coloring.size} samples over {grid.xres}x{grid.yres} points")
    return extension


def singular_factor(zeros: Singularities, poles: Singularities) -> ExprAst:
    """prod of Blaschke factors of the zeros over those of the poles."""
    for location, order in list(zeros) + list(poles):
        if abs(complex(location)) >= 1:
            raise LocationOnBoundary(
                f"prescribed location {complex(location)} is not inside the unit disk",
                location=complex(location))
    numerator = blaschke(zeros)
    if not poles:
        return numerator
    return ExprAst(divide(numerator.root, blaschke(poles).root))


def extend_with_singularities(coloring: BoundaryColoring, zeros: Singularities,
                              poles: Singularities, grid: Frame) -> DiskColoring:
    """Meromorphic phase with the prescribed zeros and poles and boundary colouring B."""
    chrom = chrom_of_coloring(coloring)
    balance = sum(n for _, n in zeros) - sum(p for _, p in poles)
    if chrom != balance:
        raise ChromaticMismatch(
            f"chromatic number {chrom} of the colouring differs from the prescribed "
            f"zero-pole balance {balance}", chrom=chrom, balance=balance)
    factor = singular_factor(zeros, poles)
    w = evaluate_array(factor, coloring.points())
    reduced = BoundaryColoring(samples=coloring.samples * np.conj(w / np.abs(w)))
    return _extension(reduced, grid, factor)


def sample_coloring(ast: ExprAst, n: int) -> BoundaryColoring:
    """Boundary phase of an expression at n equispaced points of the unit circle."""
    points = np.exp(2j * np.pi * np.arange(n) / n)
    values = evaluate_array(ast, points)
    singular = ~regular_mask(values)
    if singular.any():
        raise singular_on_path(complex(points[np.flatnonzero(singular)[0]]))
    return BoundaryColoring(samples=values / np.abs(values))


def write_coloring(coloring: BoundaryColoring, sink: TextIO) -> None:
    sink.write(f"{coloring.size}\n")
    for w in coloring.samples:
        sink.write(f"{w.real:.17g} {w.imag:.17g}\n")


def read_coloring(source: Union[str, Path, TextIO]) -> BoundaryColoring:
    if isinstance(source, (str, Path)):
        with open(source) as handle:
            return read_coloring(handle)
    lines = [line.split() for line in source.read().splitlines() if line.strip()]
    try:
        n = int(lines[0][0])
        rows = lines[1:]
        if len(rows) != n or any(len(row) != 2 for row in rows):
            raise JobConfigError(f"expected {n} lines of 're im' after the sample count")
        samples = np.array([complex(float(re), float(im)) for re, im in rows])
        return BoundaryColoring(samples=samples)
    except (IndexError, ValueError) as exc:
        raise JobConfigError(f"malformed boundary colouring: {exc}") from exc
