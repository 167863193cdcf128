import io

import numpy as np
import pytest

from phaseplot.color import ColorScheme, parse_scheme
from phaseplot.exceptions import JobConfigError
from phaseplot.expr import parse
from phaseplot.geometry import Frame
from phaseplot.render import Image, read_png, read_ppm, render, save, write_png, write_ppm


def red_pixel() -> Image:
    return Image.from_array(np.array([[[255, 0, 0]]], dtype=np.uint8))


class TestRender:
    """Test sampling a frame"""

    def test_pixel_centres(self):
        """Test that a one-pixel frame samples its centre"""
        frame = Frame(xmin=0.5, xmax=1.5, ymin=-0.5, ymax=0.5, xres=1, yres=1)
        image = render(parse('z'), frame, ColorScheme())
        assert image == red_pixel()

    def test_orientation(self):
        """Test that row 0 is the top of the frame and column 0 its left edge"""
        frame = Frame(xmin=-1, xmax=1, ymin=-1, ymax=1, xres=2, yres=2)
        image = render(parse('z'), frame, ColorScheme())
        # top-left samples -0.5 + 0.5i, bottom-right 0.5 - 0.5i
        assert image.pixel(0, 0) == render(parse('-1 + i'), Frame(
            xmin=0, xmax=1, ymin=0, ymax=1, xres=1, yres=1), ColorScheme()).pixel(0, 0)
        assert image.pixel(1, 1) != image.pixel(0, 0)

    def test_thread_count_does_not_change_pixels(self, small_frame):
        """Test that threaded rendering is deterministic"""
        ast = parse('(z-1)/(z^2+z+1)')
        scheme = parse_scheme('grid')
        single = render(ast, small_frame.model_copy(update={'yres': 40}), scheme, threads=1)
        several = render(ast, small_frame.model_copy(update={'yres': 40}), scheme, threads=4)
        assert single == several

    def test_phase_only_ignores_scaling(self, small_frame):
        """Test that f and 2f give the same bytes under the plain scheme"""
        images = []
        for text in ('(z-1)/(z^2+z+1)', '2*((z-1)/(z^2+z+1))'):
            sink = io.BytesIO()
            write_ppm(render(parse(text), small_frame, ColorScheme()), sink)
            images.append(sink.getvalue())
        assert images[0] == images[1]

    def test_supersampling_keeps_size(self, small_frame):
        """Test that supersampled images have the frame's size"""
        image = render(parse('exp(1/z)'), small_frame, ColorScheme(), supersample=True)
        assert (image.width, image.height) == (24, 16)

    def test_poles_and_zeros_render(self):
        """Test the special colours at an exact zero and pole"""
        frame = Frame(xmin=-1, xmax=1, ymin=-1, ymax=1, xres=1, yres=1)
        assert render(parse('z'), frame, ColorScheme()).pixel(0, 0) == (128, 128, 128)
        assert render(parse('1/z'), frame, ColorScheme()).pixel(0, 0) == (255, 255, 255)


class TestImageFiles:
    """Test PPM and PNG output"""

    def test_ppm_bytes(self):
        """Test the exact bytes of a one-pixel red PPM"""
        sink = io.BytesIO()
        write_ppm(red_pixel(), sink)
        assert sink.getvalue() == bytes.fromhex('50 36 0A 31 20 31 0A 32 35 35 0A FF 00 00')

    def test_ppm_read_back(self, small_frame):
        """Test reading a written PPM"""
        image = render(parse('sin(z)'), small_frame, parse_scheme('sawtooth'))
        sink = io.BytesIO()
        write_ppm(image, sink)
        sink.seek(0)
        assert read_ppm(sink) == image

    def test_png_read_back(self, small_frame):
        """Test that PNG is lossless"""
        image = render(parse('sin(z)'), small_frame, parse_scheme('domain'))
        sink = io.BytesIO()
        write_png(image, sink)
        sink.seek(0)
        assert read_png(sink) == image

    def test_save_by_suffix(self, tmp_path):
        """Test that save picks the format from the suffix"""
        path = save(red_pixel(), tmp_path / 'out' / 'red.ppm')
        assert path.read_bytes().startswith(b'P6\n1 1\n255\n')
        with pytest.raises(JobConfigError):
            save(red_pixel(), tmp_path / 'red.gif')

    def test_rejects_malformed_ppm(self):
        """Test that a wrong header is refused"""
        with pytest.raises(ValueError):
            read_ppm(io.BytesIO(b'P3\n1 1\n255\n255 0 0\n'))

    def test_image_shape_is_checked(self):
        """Test the pixel array validation"""
        with pytest.raises(ValueError):
            Image(width=2, height=1, pixels=np.zeros((1, 1, 3), dtype=np.uint8))
