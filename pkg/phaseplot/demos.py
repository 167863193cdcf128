"""Ready-made jobs that reproduce the classic pictures: zeros of partial
sums crowding the circle of convergence, the Riemann zeta function, a
harmonic polynomial with n^2 zeros, the basins of a Blaschke product and
the branch-cut exercise."""
import logging
from typing import Callable, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from .analysis import (
    localize_singularities,
    partial_sum,
    report_text,
    wilmshurst,
    wilmshurst_zero_lines,
    winding_on_circle,
)
from .color import parse_scheme
from .expr import evaluate_array, parse
from .flow import BlaschkeSpec, basin_decomposition, basin_image, decomposition_text
from .geometry import Frame
from .render import Image, render

logger = logging.getLogger(__name__)

BLASCHKE_ZEROS = (0.5, 0.5j, -0.6, -0.3 - 0.3j, 0.2 + 0.6j)
ZETA_ZERO_ORDINATE = 14.134725


class DemoResult(BaseModel):

    model_config = ConfigDict(arbitrary_types_allowed=True)

    images: Dict[str, Image]
    text: str


def _square(half: float, resolution: int, center: complex = 0j) -> Frame:
    return Frame(
        xmin=center.real - half, xmax=center.real + half,
        ymin=center.imag - half, ymax=center.imag + half,
        xres=resolution, yres=resolution,
    )


def jentzsch(resolution: Optional[int] = None, threads: Optional[int] = None) -> DemoResult:
    """Degree-20 partial sum of the geometric series; its zeros sit on |z| = 1."""
    ast = partial_sum('geometric', 20)
    frame = _square(1.5, resolution or 400)
    image = render(ast, frame, parse_scheme('plain'), threads)
    report = localize_singularities(ast, frame.rect, threads=threads)
    winding = winding_on_circle(ast, 0j, 1.2)
    text = report_text(report) + f"chromatic number on |z| = 1.2: {winding}\n"
    return DemoResult(images={'phase': image}, text=text)


def zeta(resolution: Optional[int] = None, threads: Optional[int] = None) -> DemoResult:
    ast = parse('zeta(z)')
    height = resolution or 500
    frame = Frame(xmin=-8.0, xmax=8.0, ymin=-4.0, ymax=36.0, xres=max(1, height * 2 // 5), yres=height)
    image = render(ast, frame, parse_scheme('sawtooth'), threads)
    trivial = winding_on_circle(ast, -2 + 0j, 0.5)
    first = winding_on_circle(ast, complex(0.5, ZETA_ZERO_ORDINATE), 0.5)
    text = (
        f"chromatic number around -2: {trivial}\n"
        f"chromatic number around 0.5+{ZETA_ZERO_ORDINATE}i: {first}\n"
    )
    return DemoResult(images={'phase': image}, text=text)


def wilmshurst_demo(resolution: Optional[int] = None,
                    threads: Optional[int] = None) -> DemoResult:
    n = 4
    ast = wilmshurst(n)
    frame = Frame(xmin=-1.0, xmax=2.0, ymin=-1.5, ymax=1.5,
                  xres=resolution or 400, yres=resolution or 400)
    image = render(ast, frame, parse_scheme('jump:0,0.25,0.5,0.75'), threads)
    zeros = wilmshurst_zero_lines(n)
    lines = [f"{z.real:.12g} {z.imag:.12g}" for z in zeros]
    lines.append(f"zeros: {len(zeros)}")
    return DemoResult(images={'phase': image}, text='\n'.join(lines) + '\n')


def blaschke_demo(resolution: Optional[int] = None,
                  threads: Optional[int] = None) -> DemoResult:
    spec = BlaschkeSpec(zeros=[(z, 1) for z in BLASCHKE_ZEROS])
    frame = _square(1.0, resolution or 300)
    phase = render(spec.ast, frame, parse_scheme('plain'), threads)
    decomp = basin_decomposition(spec, frame, threads)
    return DemoResult(
        images={'phase': phase, 'basins': basin_image(decomp)},
        text=decomposition_text(decomp),
    )


def branches(resolution: Optional[int] = None, threads: Optional[int] = None) -> DemoResult:
    """exp(log z) is z everywhere; log(exp z) is z only on the strip |Im z| < pi."""
    frame = _square(8.0, resolution or 300)
    z = frame.grid()
    scheme = parse_scheme('grid')
    images, lines = {}, []
    for name, source in (('exp-log', 'exp(log(z))'), ('log-exp', 'log(exp(z))')):
        ast = parse(source)
        images[name] = render(ast, frame, scheme, threads)
        w = evaluate_array(ast, z.ravel()).reshape(z.shape)
        same = np.abs(w - z) <= 1e-9 * np.maximum(1.0, np.abs(z))
        strip = np.abs(z.imag) < np.pi
        lines.append(f"{source} = z everywhere: {'yes' if same.all() else 'no'}")
        lines.append(f"{source} = z exactly on |Im z| < pi: "
                     f"{'yes' if np.array_equal(same, strip) else 'no'}")
    return DemoResult(images=images, text='\n'.join(lines) + '\n')


DEMOS: Dict[str, Callable[..., DemoResult]] = {
    'jentzsch': jentzsch,
    'zeta': zeta,
    'wilmshurst': wilmshurst_demo,
    'blaschke': blaschke_demo,
    'branches': branches,
}


def run_demo(name: str, resolution: Optional[int] = None,
             threads: Optional[int] = None) -> DemoResult:
    logger.info(f"running demo {name}")
    return DEMOS[name](resolution, threads)
