"""Extended complex values: finite numbers, the unsigned infinity of the
Riemann sphere, and undefined results.

Array code encodes infinity as ``complex(inf, 0)`` and undefined values as
``complex(nan, nan)``; :func:`settle` normalises raw numpy output into that
encoding.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

INFINITY = complex(np.inf, 0.0)
UNDEFINED = complex(np.nan, np.nan)


class Tag(str, Enum):
    FINITE = 'finite'
    INFINITY = 'infinity'
    UNDEFINED = 'undefined'


@dataclass(frozen=True)
class ExtendedComplex:

    tag: Tag
    value: Optional[complex] = None

    @classmethod
    def finite(cls, value: complex) -> 'ExtendedComplex':
        return cls(Tag.FINITE, complex(value))

    @classmethod
    def infinity(cls) -> 'ExtendedComplex':
        return cls(Tag.INFINITY)

    @classmethod
    def undefined(cls) -> 'ExtendedComplex':
        return cls(Tag.UNDEFINED)

    @classmethod
    def from_raw(cls, w: complex) -> 'ExtendedComplex':
        w = complex(w)
        if np.isnan(w.real) and np.isnan(w.imag):
            return cls.undefined()
        if np.isinf(w.real) or np.isinf(w.imag):
            return cls.infinity()
        if np.isnan(w.real) or np.isnan(w.imag):
            return cls.undefined()
        return cls.finite(w)

    def to_raw(self) -> complex:
        if self.tag is Tag.FINITE:
            return self.value
        if self.tag is Tag.INFINITY:
            return INFINITY
        return UNDEFINED

    @property
    def is_finite(self) -> bool:
        return self.tag is Tag.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.tag is Tag.INFINITY

    @property
    def is_undefined(self) -> bool:
        return self.tag is Tag.UNDEFINED

    @property
    def phase(self) -> Optional[complex]:
        """Unimodular phase, or None where the phase is undefined."""
        if not self.is_finite or self.value == 0:
            return None
        return self.value / abs(self.value)

    def __abs__(self) -> float:
        if self.tag is Tag.FINITE:
            return abs(self.value)
        if self.tag is Tag.INFINITY:
            return float('inf')
        return float('nan')

    def __str__(self):
        if self.tag is Tag.FINITE:
            return f"{self.value.real:.12g} {self.value.imag:.12g}"
        return self.tag.value


def settle(w) -> np.ndarray:
    """Map raw floating results into the extended encoding."""
    w = np.array(w, dtype=complex, copy=True, ndmin=1)
    infinite = np.isinf(w.real) | np.isinf(w.imag)
    broken = ~infinite & ~(np.isfinite(w.real) & np.isfinite(w.imag))
    w[infinite] = INFINITY
    w[broken] = UNDEFINED
    return w


def finite_mask(w: np.ndarray) -> np.ndarray:
    return np.isfinite(w.real) & np.isfinite(w.imag)


def infinite_mask(w: np.ndarray) -> np.ndarray:
    return np.isinf(w.real)


def undefined_mask(w: np.ndarray) -> np.ndarray:
    return np.isnan(w.real)


def regular_mask(w: np.ndarray) -> np.ndarray:
    """Points where the phase is defined: finite and nonzero."""
    return finite_mask(w) & (w != 0)
