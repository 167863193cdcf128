import cmath

import numpy as np
import pytest

from phaseplot.color import (
    GRAY,
    WHITE,
    ColorScheme,
    SchemeKind,
    colorize,
    parse_scheme,
    phase_to_color,
    saddle_jump_scheme,
    scheme_apply,
)
from phaseplot.exceptions import JobConfigError
from phaseplot.expr import parse
from phaseplot.geometry import Rect
from phaseplot.values import INFINITY, UNDEFINED, ExtendedComplex


class TestPhaseToColor:
    """Test the standard colour wheel"""

    def test_primary_phases(self):
        """Test red at phase 1 and green a third of a turn later"""
        assert phase_to_color(1) == (255, 0, 0)
        assert phase_to_color(cmath.exp(2j * cmath.pi / 3)) == (0, 255, 0)
        assert phase_to_color(cmath.exp(4j * cmath.pi / 3)) == (0, 0, 255)

    def test_depends_on_phase_only(self):
        """Test that the plain scheme ignores the modulus"""
        assert phase_to_color(0.01 + 0.01j) == phase_to_color(100 + 100j)

    def test_special_values(self):
        """Test the colours of zero, infinity and undefined values"""
        assert phase_to_color(0) == GRAY
        assert phase_to_color(ExtendedComplex.undefined()) == GRAY
        assert phase_to_color(ExtendedComplex.infinity()) == WHITE


class TestSchemes:
    """Test the brightness-modulating schemes"""

    def test_jump_darkens_selected_phase(self):
        """Test that a jump at phase 1 darkens pure red"""
        scheme = parse_scheme('jump:0')
        assert scheme_apply(scheme, 1) == (166, 0, 0)
        assert scheme_apply(scheme, 1j) == phase_to_color(1j)

    def test_jump_over_another_base(self):
        """Test jump schemes on top of a sawtooth base"""
        scheme = parse_scheme('jump:0.5:sawtooth')
        assert scheme.kind is SchemeKind.JUMP
        assert scheme.base is SchemeKind.SAWTOOTH
        assert scheme.jump_phases[0] == pytest.approx(-1)

    def test_domain_coloring_extremes(self):
        """Test black at zeros and pure hue on the unit circle"""
        scheme = ColorScheme(kind=SchemeKind.DOMAIN)
        assert scheme_apply(scheme, 0) == (0, 0, 0)
        assert scheme_apply(scheme, 1) == (255, 0, 0)
        assert scheme_apply(scheme, INFINITY) == WHITE

    def test_sawtooth_repeats_per_e_fold(self):
        """Test that |w| and e|w| share a colour"""
        scheme = parse_scheme('sawtooth')
        w = 1.7 * cmath.exp(0.4j)
        assert scheme_apply(scheme, w) == scheme_apply(scheme, w * cmath.e)
        assert scheme_apply(scheme, w) != scheme_apply(scheme, w * 1.5)

    def test_colorize_shape(self):
        """Test that colorize keeps the array shape"""
        w = np.array([[1, 1j], [UNDEFINED, INFINITY]])
        colors = colorize(ColorScheme(), w)
        assert colors.shape == (2, 2, 3)
        assert colors.dtype == np.uint8
        assert tuple(colors[1, 0]) == GRAY

    @pytest.mark.parametrize('name,expected', [
        ('plain', (0, 255, 64)),
        ('sawtooth', (0, 191, 48)),
        ('grid', (0, 143, 36)),
        ('domain', (78, 255, 122)),
    ])
    def test_fixed_colours(self, name, expected):
        """Test the four basic schemes at w = e^(1/2) e^(3 pi i / 4), mid-sector and mid-ring"""
        w = cmath.exp(0.5 + 0.75j * cmath.pi)
        assert scheme_apply(parse_scheme(name), w) == expected

    def test_grid_sector_jumps(self):
        """Test twelve falling brightness jumps around |w| = e^0.3"""
        theta = 0.001 + 2 * np.pi * np.arange(4096) / 4096
        colors = colorize(parse_scheme('grid'), np.exp(0.3 + 1j * theta)).astype(int)
        brightness = colors.max(axis=1)
        drops = np.roll(brightness, -1) - brightness
        assert np.sum(drops < -40) == 12
        assert np.sum(drops > 40) == 0

    @pytest.mark.parametrize('name', ['rainbow', 'jump:', 'jump:a,b', 'jump:0:jump'])
    def test_bad_names(self, name):
        """Test that unknown or malformed schemes are configuration errors"""
        with pytest.raises(JobConfigError):
            parse_scheme(name)


class TestSaddleJumps:
    """Test highlighting colour saddles"""

    def test_saddle_phase_becomes_jump(self):
        """Test that z^2 - 1 gets a jump at the phase of f(0) = -1"""
        scheme = saddle_jump_scheme(parse('z^2 - 1'), Rect(xmin=-0.5, xmax=0.6, ymin=-0.5, ymax=0.6))
        assert scheme.kind is SchemeKind.JUMP
        assert scheme.jump_phases[0] == pytest.approx(-1, abs=1e-9)

    def test_no_saddles_keeps_base(self):
        """Test that an exponential has no saddles to highlight"""
        base = parse_scheme('grid')
        assert saddle_jump_scheme(parse('exp(z)'), Rect(xmin=-1, xmax=1, ymin=-1, ymax=1), base) == base
