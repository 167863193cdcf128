"""
Simple pytest configuration for phaseplot tests
"""
import os
import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'phasor.settings')
django.setup()

import numpy as np
import pytest

from phaseplot.expr import parse
from phaseplot.geometry import Frame, Rect
from phaseplot.tests.factories import BlaschkeSpecFactory


@pytest.fixture
def square():
    """The default analysis window [-2, 2] x [-2, 2]"""
    return Rect(xmin=-2.0, xmax=2.0, ymin=-2.0, ymax=2.0)


@pytest.fixture
def small_frame():
    """A coarse frame for quick renders"""
    return Frame(xmin=-2.0, xmax=2.0, ymin=-2.0, ymax=2.0, xres=24, yres=16)


@pytest.fixture
def rational():
    """(z - 1)/(z^2 + z + 1): one zero, two poles"""
    return parse('(z-1)/(z^2+z+1)')


@pytest.fixture
def two_zero_blaschke():
    """Blaschke product with simple zeros at 0.5 and -0.5"""
    return BlaschkeSpecFactory(zeros=[(0.5, 1), (-0.5, 1)])


@pytest.fixture
def disk_points():
    """Points spread over the disk |z| <= 0.9, avoiding the origin"""
    rng = np.random.default_rng(7)
    radius = 0.9 * np.sqrt(rng.uniform(0.01, 1.0, 200))
    angle = rng.uniform(0, 2 * np.pi, 200)
    return radius * np.exp(1j * angle)
