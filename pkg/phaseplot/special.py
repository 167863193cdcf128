"""Gamma, Riemann zeta and Weierstrass elliptic functions on numpy arrays.

All functions take complex arrays and return arrays in the extended
encoding of :mod:`phaseplot.values`.
"""
import logging
import math
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import bernoulli, factorial

from .values import INFINITY, UNDEFINED, finite_mask, settle

logger = logging.getLogger(__name__)

LANCZOS_G = 7
LANCZOS_COEFFICIENTS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
HALF_LOG_TWO_PI = 0.5 * math.log(2 * math.pi)

EULER_MACLAURIN_TERMS = 12
_BERNOULLI = bernoulli(2 * EULER_MACLAURIN_TERMS)
EULER_MACLAURIN_COEFFICIENTS = np.array([
    _BERNOULLI[2 * k] / factorial(2 * k, exact=False)
    for k in range(1, EULER_MACLAURIN_TERMS + 1)
])

DEFAULT_SHELLS = 40
LATTICE_POINT_RADIUS = 1e-9
STEP_FIRST = 1e-6
STEP_SECOND = 1e-4

# Work-array bound for lattice sums: points per chunk times lattice points.
_LATTICE_CHUNK_ELEMENTS = 2_000_000


class LatticeSpec(BaseModel):
    """Period lattice of an elliptic function, truncated at ``shells``."""

    model_config = ConfigDict(frozen=True)

    omega1: complex
    omega2: complex
    shells: int = Field(default=DEFAULT_SHELLS, ge=10)

    @model_validator(mode='after')
    def check_nondegenerate(self) -> 'LatticeSpec':
        if self.omega1 == 0 or abs((self.omega2 / self.omega1).imag) < 1e-12:
            raise ValueError('lattice periods must be linearly independent over the reals')
        return self


def _as_array(z) -> np.ndarray:
    return np.atleast_1d(np.asarray(z, dtype=complex))


def _log_gamma_right(z: np.ndarray) -> np.ndarray:
    """Lanczos log-gamma, accurate for Re z >= 0.5 (branch of log irrelevant to exp)."""
    z = z - 1
    series = np.full(z.shape, LANCZOS_COEFFICIENTS[0], dtype=complex)
    for k, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + k)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (z + 0.5) * np.log(t) - t + np.log(series)


def _is_nonpositive_integer(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def gamma(z) -> np.ndarray:
    z = _as_array(z)
    out = np.full(z.shape, UNDEFINED, dtype=complex)
    ok = finite_mask(z)
    poles = ok & _is_nonpositive_integer(z)
    right = ok & ~poles & (z.real >= 0.5)
    left = ok & ~poles & (z.real < 0.5)
    with np.errstate(all='ignore'):
        out[right] = np.exp(_log_gamma_right(z[right]))
        zl = z[left]
        out[left] = np.pi / (np.sin(np.pi * zl) * np.exp(_log_gamma_right(1 - zl)))
    out = settle(out)
    out[poles] = INFINITY
    return out


def _exprel(x: np.ndarray) -> np.ndarray:
    """(e^x - 1) / x, without cancellation near x = 0."""
    out = np.ones(x.shape, dtype=complex)
    small = np.abs(x) < 1e-3
    xs = x[small]
    out[small] = 1 + xs / 2 * (1 + xs / 3 * (1 + xs / 4))
    xl = x[~small]
    out[~small] = np.expm1(xl) / xl
    return out


def _zeta_right(s: np.ndarray, regular: bool = False) -> np.ndarray:
    """Euler-Maclaurin summation, for Re s >= 0.5 and s != 1.

    With ``regular`` the pole is removed: the result is zeta(s) - 1/(s - 1),
    which stays accurate as s approaches 1.
    """
    if s.size == 0:
        return s.copy()
    n_terms = int(max(20, math.ceil(0.6 * float(np.max(np.abs(s.imag))) + 10)))
    total = np.zeros(s.shape, dtype=complex)
    for n in range(1, n_terms):
        total += np.exp(-s * math.log(n))
    log_n = math.log(n_terms)
    n_power = np.exp(-s * log_n)
    if regular:
        # (N^(1-s) - 1) / (s - 1)
        total += -log_n * _exprel((1 - s) * log_n)
    else:
        total += n_terms * n_power / (s - 1)
    total += n_power / 2
    rising = s.copy()
    power = n_power / n_terms
    for k, coefficient in enumerate(EULER_MACLAURIN_COEFFICIENTS, start=1):
        total += coefficient * rising * power
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (n_terms * n_terms)
    return total


def zeta(z) -> np.ndarray:
    z = _as_array(z)
    out = np.full(z.shape, UNDEFINED, dtype=complex)
    ok = finite_mask(z)
    pole = ok & (z == 1)
    right = ok & ~pole & (z.real >= 0.5)
    left = ok & (z.real < 0.5)
    with np.errstate(all='ignore'):
        out[right] = _zeta_right(z[right])
        s = z[left]
        log_factor = s * math.log(2) + (s - 1) * math.log(math.pi) + _log_gamma_right(1 - s)
        # zeta(1 - s) = -1/s + regular part; sin(pi s / 2) / s is (pi / 2) sinc(s / 2)
        sine_zeta = (np.sin(np.pi * s / 2) * _zeta_right(1 - s, regular=True)
                     - np.pi / 2 * np.sinc(s / 2))
        out[left] = np.exp(log_factor) * sine_zeta
        # sin(pi s / 2) vanishes exactly at the trivial zeros
        trivial = left & (z.imag == 0) & (z.real < 0) & (z.real / 2 == np.round(z.real / 2))
        out[trivial] = 0
    out = settle(out)
    out[pole] = INFINITY
    return out


def central_difference(func, z, order: int) -> np.ndarray:
    """Derivative of order 1 or 2 by central differences (steps 1e-6 and 1e-4)."""
    z = _as_array(z)
    if order == 0:
        return func(z)
    if order == 1:
        h = STEP_FIRST
        ahead, behind = func(z + h), func(z - h)
        with np.errstate(all='ignore'):
            out = (ahead - behind) / (2 * h)
        return settle(out)
    if order == 2:
        h = STEP_SECOND
        ahead, centre, behind = func(z + h), func(z), func(z - h)
        with np.errstate(all='ignore'):
            out = (ahead - 2 * centre + behind) / (h * h)
        return settle(out)
    raise ValueError(f"numeric derivatives are available up to order 2, not {order}")


def zeta_derivative(z, order: int) -> np.ndarray:
    return central_difference(zeta, z, order)


def gamma_derivative(z, order: int) -> np.ndarray:
    return central_difference(gamma, z, order)


def _divisor_sums(count: int, power: int) -> np.ndarray:
    sums = np.zeros(count + 1)
    for d in range(1, count + 1):
        sums[d::d] += float(d) ** power
    return sums[1:]


@lru_cache(maxsize=32)
def eisenstein_sums(lattice: LatticeSpec) -> tuple:
    """Full lattice sums G4, G6, G8 from the q-expansions of E4, E6, E8."""
    tau = lattice.omega2 / lattice.omega1
    if tau.imag < 0:
        tau = -tau
    q = complex(np.exp(2j * np.pi * tau))
    count = 10
    while abs(q) ** count * count ** 8 > 1e-18 and count < 5000:
        count += 10
    n = np.arange(1, count + 1)
    q_powers = q ** n
    e4 = 1 + 240 * np.sum(_divisor_sums(count, 3) * q_powers)
    e6 = 1 - 504 * np.sum(_divisor_sums(count, 5) * q_powers)
    e8 = 1 + 480 * np.sum(_divisor_sums(count, 7) * q_powers)
    w = lattice.omega1
    g4 = np.pi ** 4 / 45 * e4 / w ** 4
    g6 = 2 * np.pi ** 6 / 945 * e6 / w ** 6
    g8 = np.pi ** 8 / 4725 * e8 / w ** 8
    return complex(g4), complex(g6), complex(g8)


def lattice_invariants(lattice: LatticeSpec) -> tuple:
    g4, g6, _ = eisenstein_sums(lattice)
    return 60 * g4, 140 * g6


@lru_cache(maxsize=32)
def _lattice_window(lattice: LatticeSpec):
    """Nonzero lattice points |m|, |n| <= shells and the tail polynomial of ℘."""
    span = np.arange(-lattice.shells, lattice.shells + 1)
    m, n = np.meshgrid(span, span)
    points = (m * lattice.omega1 + n * lattice.omega2).ravel()
    points = points[points != 0]
    g4, g6, g8 = eisenstein_sums(lattice)
    tail4 = g4 - np.sum(points ** -4.0)
    tail6 = g6 - np.sum(points ** -6.0)
    tail8 = g8 - np.sum(points ** -8.0)
    tail = Polynomial([0, 0, 3 * tail4, 0, 5 * tail6, 0, 7 * tail8])
    logger.debug(f"lattice window with {points.size} points, tail |G4| {abs(tail4):.3g}")
    return points, tail


def _reduce(z: np.ndarray, lattice: LatticeSpec) -> np.ndarray:
    basis = np.array([
        [lattice.omega1.real, lattice.omega2.real],
        [lattice.omega1.imag, lattice.omega2.imag],
    ])
    a, b = np.linalg.solve(basis, np.vstack([z.real, z.imag]))
    return z - np.round(a) * lattice.omega1 - np.round(b) * lattice.omega2


def wp(z, lattice: LatticeSpec, order: int = 0) -> np.ndarray:
    """Weierstrass ℘ (order 0) or its derivative of the given order."""
    z = _as_array(z)
    out = np.full(z.shape, UNDEFINED, dtype=complex)
    ok = finite_mask(z)
    if not ok.any():
        return out
    points, tail = _lattice_window(lattice)
    if order:
        tail = tail.deriv(order)
    reduced = _reduce(z[ok], lattice)
    near = np.abs(reduced) <= LATTICE_POINT_RADIUS
    safe = np.where(near, 0.5, reduced)
    values = np.empty(safe.shape, dtype=complex)
    chunk = max(1, _LATTICE_CHUNK_ELEMENTS // points.size)
    sign_factorial = (-1) ** order * math.factorial(order + 1)
    for start in range(0, safe.size, chunk):
        zc = safe[start:start + chunk]
        diff = zc[:, None] - points[None, :]
        if order == 0:
            lattice_sum = np.sum(diff ** -2.0 - points[None, :] ** -2.0, axis=1)
            values[start:start + chunk] = zc ** -2.0 + lattice_sum
        else:
            power = -(order + 2.0)
            lattice_sum = np.sum(diff ** power, axis=1)
            values[start:start + chunk] = sign_factorial * (zc ** power + lattice_sum)
    values += tail(safe)
    values[near] = INFINITY
    out[ok] = values
    return settle(out)
