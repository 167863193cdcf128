"""Plane geometry for phase plots: rectangles, pixel frames, the unit disk
and closed or open polylines used as integration paths."""
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Rect(BaseModel):
    """Closed axis-parallel rectangle in the complex plane."""

    model_config = ConfigDict(frozen=True)

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @model_validator(mode='after')
    def check_bounds(self) -> 'Rect':
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError('rectangle bounds must satisfy xmin < xmax and ymin < ymax')
        return self

    @classmethod
    def around(cls, center: complex, half_width: float, half_height: float = None) -> 'Rect':
        half_height = half_width if half_height is None else half_height
        return cls(
            xmin=center.real - half_width, xmax=center.real + half_width,
            ymin=center.imag - half_height, ymax=center.imag + half_height,
        )

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def side(self) -> float:
        return max(self.width, self.height)

    @property
    def center(self) -> complex:
        return complex((self.xmin + self.xmax) / 2, (self.ymin + self.ymax) / 2)

    @property
    def radius(self) -> float:
        """Half the diagonal."""
        return math.hypot(self.width, self.height) / 2

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        return self.xmin, self.xmax, self.ymin, self.ymax

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return (
            (z.real >= self.xmin) & (z.real <= self.xmax)
            & (z.imag >= self.ymin) & (z.imag <= self.ymax)
        )

    def translated(self, shift: complex) -> 'Rect':
        return Rect(
            xmin=self.xmin + shift.real, xmax=self.xmax + shift.real,
            ymin=self.ymin + shift.imag, ymax=self.ymax + shift.imag,
        )

    def split(self, x_cut: float = None, y_cut: float = None) -> Tuple['Rect', ...]:
        """Four children in (lower-left, lower-right, upper-left, upper-right) order."""
        cx = (self.xmin + self.xmax) / 2 if x_cut is None else x_cut
        cy = (self.ymin + self.ymax) / 2 if y_cut is None else y_cut
        return (
            Rect(xmin=self.xmin, xmax=cx, ymin=self.ymin, ymax=cy),
            Rect(xmin=cx, xmax=self.xmax, ymin=self.ymin, ymax=cy),
            Rect(xmin=self.xmin, xmax=cx, ymin=cy, ymax=self.ymax),
            Rect(xmin=cx, xmax=self.xmax, ymin=cy, ymax=self.ymax),
        )

    def boundary(self, per_side: int = 64) -> 'PathPolyline':
        """Counterclockwise boundary starting at the lower-left corner."""
        t = np.arange(per_side) / per_side
        corners = [
            complex(self.xmin, self.ymin), complex(self.xmax, self.ymin),
            complex(self.xmax, self.ymax), complex(self.xmin, self.ymax),
        ]
        vertices = []
        for k in range(4):
            a, b = corners[k], corners[(k + 1) % 4]
            vertices.extend(a + (b - a) * t)
        return PathPolyline(vertices=tuple(complex(v) for v in vertices), closed=True)

    def __str__(self):
        return f"[{self.xmin:.12g}, {self.xmax:.12g}] x [{self.ymin:.12g}, {self.ymax:.12g}]"


class Frame(Rect):
    """Sampling window: bounds plus pixel resolution, row 0 at the top."""

    xres: int = Field(gt=0)
    yres: int = Field(gt=0)

    @property
    def rect(self) -> Rect:
        return Rect(xmin=self.xmin, xmax=self.xmax, ymin=self.ymin, ymax=self.ymax)

    def point(self, col: int, row: int) -> complex:
        x = self.xmin + (col + 0.5) * (self.xmax - self.xmin) / self.xres
        y = self.ymax - (row + 0.5) * (self.ymax - self.ymin) / self.yres
        return complex(x, y)

    def columns(self, oversample: int = 1) -> np.ndarray:
        n = self.xres * oversample
        return self.xmin + (np.arange(n) + 0.5) * (self.xmax - self.xmin) / n

    def rows(self, oversample: int = 1) -> np.ndarray:
        n = self.yres * oversample
        return self.ymax - (np.arange(n) + 0.5) * (self.ymax - self.ymin) / n

    def grid(self, oversample: int = 1) -> np.ndarray:
        """Complex sample points with shape (yres, xres), times oversample."""
        return self.columns(oversample)[None, :] + 1j * self.rows(oversample)[:, None]


class Disk(BaseModel):

    model_config = ConfigDict(frozen=True)

    center: complex = 0j
    radius: float = Field(default=1.0, gt=0)

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z, dtype=complex) - self.center) <= self.radius

    @property
    def bounding_rect(self) -> Rect:
        return Rect.around(self.center, self.radius)


class PathPolyline(BaseModel):
    """Ordered vertices; a closed path returns from the last vertex to the first."""

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[complex, ...]
    closed: bool = True

    @field_validator('vertices')
    @classmethod
    def check_vertices(cls, vertices):
        for a, b in zip(vertices, vertices[1:]):
            if a == b:
                raise ValueError(f'consecutive vertices must be distinct (repeated {a})')
        return vertices

    @model_validator(mode='after')
    def check_closed(self) -> 'PathPolyline':
        if self.closed and len(self.vertices) < 3:
            raise ValueError('a closed path needs at least three vertices')
        if not self.closed and len(self.vertices) < 2:
            raise ValueError('a path needs at least two vertices')
        return self

    @classmethod
    def circle(cls, center: complex = 0j, radius: float = 1.0, samples: int = 64,
               start_angle: float = 0.0) -> 'PathPolyline':
        angles = start_angle + 2 * np.pi * np.arange(samples) / samples
        points = center + radius * np.exp(1j * angles)
        return cls(vertices=tuple(complex(p) for p in points), closed=True)

    def as_array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=complex)

    def reversed(self) -> 'PathPolyline':
        return PathPolyline(vertices=tuple(reversed(self.vertices)), closed=self.closed)

    def segments(self) -> Tuple[np.ndarray, np.ndarray]:
        """Start and end point arrays of every edge."""
        points = self.as_array()
        if self.closed:
            return points, np.roll(points, -1)
        return points[:-1], points[1:]

    @property
    def length(self) -> float:
        starts, ends = self.segments()
        return float(np.sum(np.abs(ends - starts)))
