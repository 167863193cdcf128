"""Pixel-grid sampling and image files (binary PPM and PNG)."""
import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import BinaryIO, Optional, Tuple

import numpy as np
from django.conf import settings
from PIL import Image as PILImage
from pydantic import BaseModel, ConfigDict, model_validator

from .color import ColorScheme, colorize
from .exceptions import JobConfigError
from .expr import ExprAst, evaluate_array
from .geometry import Frame

logger = logging.getLogger(__name__)

ROWS_PER_TASK = 16
_PPM_HEADER = re.compile(rb'P6\s+(\d+)\s+(\d+)\s+(\d+)\s')


class Image(BaseModel):
    """RGB pixels, row-major with row 0 at the top."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    width: int
    height: int
    pixels: np.ndarray

    @model_validator(mode='after')
    def check_shape(self) -> 'Image':
        if self.pixels.shape != (self.height, self.width, 3) or self.pixels.dtype != np.uint8:
            raise ValueError(
                f"pixels must be uint8 of shape ({self.height}, {self.width}, 3), "
                f"got {self.pixels.dtype} {self.pixels.shape}"
            )
        return self

    @classmethod
    def from_array(cls, pixels: np.ndarray) -> 'Image':
        pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
        return cls(width=pixels.shape[1], height=pixels.shape[0], pixels=pixels)

    def pixel(self, col: int, row: int) -> Tuple[int, int, int]:
        r, g, b = self.pixels[row, col]
        return int(r), int(g), int(b)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.width == other.width and self.height == other.height \
            and np.array_equal(self.pixels, other.pixels)


def _render_band(ast: ExprAst, frame: Frame, scheme: ColorScheme, rows: slice,
                 oversample: int) -> np.ndarray:
    columns = frame.columns(oversample)
    ys = frame.rows(oversample)[rows.start * oversample:rows.stop * oversample]
    z = columns[None, :] + 1j * ys[:, None]
    colors = colorize(scheme, evaluate_array(ast, z))
    if oversample == 1:
        return colors
    height, width = colors.shape[0] // oversample, colors.shape[1] // oversample
    blocks = colors.reshape(height, oversample, width, oversample, 3).astype(float)
    return np.round(blocks.mean(axis=(1, 3))).astype(np.uint8)


def render(ast: ExprAst, frame: Frame, scheme: ColorScheme, threads: Optional[int] = None,
           supersample: bool = False) -> Image:
    """Colour every pixel centre of the frame; bands of rows run on a thread pool."""
    threads = threads or settings.PHASEPLOT_THREADS
    oversample = 2 if supersample else 1
    started = time.perf_counter()
    pixels = np.empty((frame.yres, frame.xres, 3), dtype=np.uint8)
    bands = [
        slice(start, min(start + ROWS_PER_TASK, frame.yres))
        for start in range(0, frame.yres, ROWS_PER_TASK)
    ]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = [
            (band, pool.submit(_render_band, ast, frame, scheme, band, oversample))
            for band in bands
        ]
        for band, future in futures:
            pixels[band] = future.result()
    elapsed = time.perf_counter() - started
    logger.info(f"rendered {frame.xres}x{frame.yres} '{ast}' with {scheme.kind.value} "
                f"in {elapsed:.2f}s on {threads} thread(s)")
    return Image(width=frame.xres, height=frame.yres, pixels=pixels)


def render_values(values: np.ndarray, scheme: ColorScheme) -> Image:
    """Colour a precomputed (height, width) grid of extended values."""
    return Image.from_array(colorize(scheme, values))


def write_ppm(image: Image, sink: BinaryIO) -> None:
    sink.write(f"P6\n{image.width} {image.height}\n255\n".encode('ascii'))
    sink.write(image.pixels.tobytes())


def read_ppm(source: BinaryIO) -> Image:
    data = source.read()
    header = _PPM_HEADER.match(data)
    if not header:
        raise ValueError('not a binary PPM (P6) stream')
    width, height, maxval = (int(g) for g in header.groups())
    if maxval != 255:
        raise ValueError(f'only 8-bit PPM is supported, maxval {maxval}')
    payload = data[header.end():header.end() + width * height * 3]
    if len(payload) != width * height * 3:
        raise ValueError('truncated PPM payload')
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return Image.from_array(pixels.copy())


def write_png(image: Image, sink: BinaryIO) -> None:
    PILImage.fromarray(image.pixels).save(sink, format='PNG')


def read_png(source: BinaryIO) -> Image:
    with PILImage.open(source) as picture:
        return Image.from_array(np.asarray(picture.convert('RGB')))


WRITERS = {'.ppm': write_ppm, '.png': write_png}


def save(image: Image, path) -> Path:
    path = Path(path)
    writer = WRITERS.get(path.suffix.lower())
    if writer is None:
        raise JobConfigError(f"unsupported image format '{path.suffix}' (use .ppm or .png)")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'wb') as sink:
        writer(image, sink)
    logger.info(f"wrote {path}")
    return path
