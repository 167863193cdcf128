"""Colour schemes for phase plots.

Hue always encodes the phase of w (arg 0 is red, increasing
counterclockwise); the schemes differ in how they modulate brightness.
"""
import logging
import math
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from matplotlib.colors import hsv_to_rgb
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .analysis import find_saddles
from .exceptions import JobConfigError
from .expr import evaluate
from .values import ExtendedComplex, infinite_mask, regular_mask

logger = logging.getLogger(__name__)

GRAY = (128, 128, 128)
WHITE = (255, 255, 255)
JUMP_HALF_WIDTH = math.pi / 60
JUMP_DARKENING = 0.65

Rgb = Tuple[int, int, int]


class SchemeKind(str, Enum):
    PLAIN = 'plain'
    SAWTOOTH = 'sawtooth'
    GRID = 'grid'
    DOMAIN = 'domain'
    JUMP = 'jump'


class ColorScheme(BaseModel):

    model_config = ConfigDict(frozen=True)

    kind: SchemeKind = SchemeKind.PLAIN
    jump_phases: Tuple[complex, ...] = ()
    base: SchemeKind = SchemeKind.PLAIN
    gray_depth: float = Field(default=0.5, gt=0, le=1)
    modulus_base: float = Field(default=math.e, gt=1)
    phase_sectors: int = Field(default=12, ge=1)

    @field_validator('jump_phases')
    @classmethod
    def normalise_phases(cls, phases):
        normalised = []
        for phase in phases:
            if phase == 0 or not np.isfinite(abs(phase)):
                raise ValueError('jump phases must be nonzero and finite')
            normalised.append(phase / abs(phase))
        return tuple(normalised)

    @model_validator(mode='after')
    def check_jump(self) -> 'ColorScheme':
        if self.kind is SchemeKind.JUMP and not self.jump_phases:
            raise ValueError('jump schemes need at least one jump phase')
        if self.base is SchemeKind.JUMP:
            raise ValueError('the base of a jump scheme cannot itself be a jump scheme')
        return self


def sawtooth(x: np.ndarray) -> np.ndarray:
    return x - np.floor(x)


def hue_of(w: np.ndarray) -> np.ndarray:
    return np.mod(np.angle(w) / (2 * np.pi), 1.0)


def _pure(w: np.ndarray) -> np.ndarray:
    hue = hue_of(w)
    ones = np.ones_like(hue)
    return hsv_to_rgb(np.stack([hue, ones, ones], axis=-1))


def _gray_factor(scheme: ColorScheme, x: np.ndarray) -> np.ndarray:
    return (1 - scheme.gray_depth) + scheme.gray_depth * sawtooth(x)


def _base_colors(kind: SchemeKind, scheme: ColorScheme, w: np.ndarray) -> np.ndarray:
    """Float RGB in [0, 1] for regular (finite, nonzero) values."""
    rgb = _pure(w)
    if kind is SchemeKind.PLAIN:
        return rgb
    modulus = np.abs(w)
    if kind is SchemeKind.SAWTOOTH:
        factor = _gray_factor(scheme, np.log(modulus) / math.log(scheme.modulus_base))
        return rgb * factor[..., None]
    if kind is SchemeKind.GRID:
        factor = _gray_factor(scheme, np.log(modulus) / math.log(scheme.modulus_base))
        factor = factor * _gray_factor(scheme, scheme.phase_sectors * hue_of(w))
        return rgb * factor[..., None]
    # domain colouring: lightness 0 at zeros, 1/2 on |w| = 1, 1 at poles
    lightness = (2 / np.pi) * np.arctan(modulus)
    dark = lightness <= 0.5
    lightness = lightness[..., None]
    return np.where(
        dark[..., None],
        2 * lightness * rgb,
        rgb + (2 * lightness - 1) * (1 - rgb),
    )


def colorize(scheme: ColorScheme, w) -> np.ndarray:
    """Colour an array of extended values; returns uint8 of shape w.shape + (3,)."""
    w = np.asarray(w, dtype=complex)
    regular = regular_mask(w)
    infinite = infinite_mask(w)
    kind = scheme.base if scheme.kind is SchemeKind.JUMP else scheme.kind
    out = np.empty(w.shape + (3,), dtype=np.uint8)
    out[...] = GRAY
    out[infinite] = WHITE
    if kind is SchemeKind.DOMAIN:
        out[w == 0] = (0, 0, 0)
    values = w[regular]
    with np.errstate(all='ignore'):
        rgb = _base_colors(kind, scheme, values)
        if scheme.kind is SchemeKind.JUMP:
            phases = np.asarray(scheme.jump_phases, dtype=complex)
            distance = np.abs(np.angle(values[:, None] * np.conj(phases)[None, :]))
            near = np.any(distance <= JUMP_HALF_WIDTH, axis=1)
            rgb[near] *= JUMP_DARKENING
    out[regular] = np.clip(np.round(255 * rgb), 0, 255).astype(np.uint8)
    return out


def _raw(w: Union[ExtendedComplex, complex]) -> complex:
    if isinstance(w, ExtendedComplex):
        return w.to_raw()
    return complex(w)


def scheme_apply(scheme: ColorScheme, w: Union[ExtendedComplex, complex]) -> Rgb:
    r, g, b = colorize(scheme, np.array([_raw(w)]))[0]
    return int(r), int(g), int(b)


def phase_to_color(w: Union[ExtendedComplex, complex]) -> Rgb:
    return scheme_apply(ColorScheme(), w)


def parse_scheme(name: str, **params) -> ColorScheme:
    """Scheme from its command-line name: plain, sawtooth, grid, domain or
    jump:<turns,...>[:<base>]."""
    name = name.strip()
    try:
        if name.startswith('jump:'):
            parts = name.split(':')
            if len(parts) > 3 or not parts[1]:
                raise JobConfigError(f"malformed jump scheme '{name}'")
            turns = [float(t) for t in parts[1].split(',')]
            base = SchemeKind(parts[2]) if len(parts) == 3 else SchemeKind.PLAIN
            phases = tuple(complex(np.exp(2j * np.pi * t)) for t in turns)
            return ColorScheme(kind=SchemeKind.JUMP, jump_phases=phases, base=base, **params)
        return ColorScheme(kind=SchemeKind(name), **params)
    except ValidationError as exc:
        raise JobConfigError(f"invalid colour scheme '{name}': {exc.errors()[0]['msg']}") from exc
    except ValueError as exc:
        raise JobConfigError(f"unknown colour scheme '{name}'") from exc


def saddle_jump_scheme(ast, rect, base: Optional[ColorScheme] = None) -> ColorScheme:
    """Jump scheme whose jumps sit at the phases of f at its colour saddles."""
    base = base or ColorScheme()
    report = find_saddles(ast, rect)
    phases = []
    for entry in report.entries:
        phase = evaluate(ast, entry.location).phase
        if phase is not None:
            phases.append(phase)
    if not phases:
        logger.info("no colour saddles in the window, keeping the base scheme")
        return base
    logger.info(f"highlighting {len(phases)} colour saddle(s)")
    return base.model_copy(update={
        'kind': SchemeKind.JUMP,
        'base': base.kind if base.kind is not SchemeKind.JUMP else base.base,
        'jump_phases': tuple(phases),
    })
