import numpy as np

from phaseplot.flow import (
    BlaschkeSpec,
    PhaseFlow,
    basin_decomposition,
    basin_image,
    boundary_phase_measure,
    decomposition_text,
    integrate_orbit,
    structure_sequence,
)
from phaseplot.forms import BasinJobForm, MeasureJobForm, OrbitJobForm
from phaseplot.geometry import Disk, PathPolyline
from phaseplot.management.base import PhasePlotCommand, fmt, fmt_complex
from phaseplot.render import save


class Command(PhasePlotCommand):
    help = 'Orbits, basins and boundary measures of the phase flow.'
    forms = {
        'orbits': OrbitJobForm,
        'basins': BasinJobForm,
        'sequence': BasinJobForm,
        'measure': MeasureJobForm,
    }

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True, metavar='ACTION')

        orbits = self.add_action(actions, 'orbits', 'integrate orbits of the phase flow')
        self.add_function_argument(orbits)
        orbits.add_argument('--starts', help='comma-separated start points')
        orbits.add_argument('--direction', help='forward or reversed (default forward)')
        orbits.add_argument('--domain', help='disk or xmin,xmax,ymin,ymax (default disk)')
        orbits.add_argument('--max-steps', type=int, help='step limit per orbit')

        for name, help_text in (('basins', 'basin decomposition of a Blaschke product'),
                                ('sequence', 'structure sequence of a Blaschke product')):
            basins = self.add_action(actions, name, help_text)
            basins.add_argument('--zeros', help="comma-separated 'location[:order]' zeros in the disk")
            basins.add_argument('--c', help='unimodular constant factor (default 1)')
            basins.add_argument('--res', help='WxH of the basin image (default 200x200)')
            basins.add_argument('-o', '--output', help='basin image, .ppm or .png')

        measure = self.add_action(actions, 'measure', 'phase carried across arcs of a circle')
        self.add_function_argument(measure)
        measure.add_argument('--bins', type=int, help='number of equal arcs (default 4)')
        measure.add_argument('--center', help='circle centre (default 0)')
        measure.add_argument('--radius', type=float, help='circle radius (default 1)')
        measure.add_argument('--samples', type=int, help='polygon vertices (default 256)')

    def run_orbits(self, job):
        domain = job['domain']
        flow = PhaseFlow.over(job['function'], domain.bounding_rect if isinstance(domain, Disk)
                              else domain, job['threads'])
        for start in job['starts']:
            orbit = integrate_orbit(flow, start, job['direction'], domain, job['max_steps'])
            self.emit(f"{orbit.termination.value} {len(orbit.points)} {fmt_complex(orbit.end)}")

    def run_basins(self, job):
        spec = BlaschkeSpec(zeros=job['zeros'], c=job['c'])
        window = job['window'] if job['output'] else None
        decomp = basin_decomposition(spec, window, job['threads'])
        self.emit(decomposition_text(decomp))
        if job['output']:
            save(basin_image(decomp), job['output'])

    def run_sequence(self, job):
        decomp = basin_decomposition(BlaschkeSpec(zeros=job['zeros'], c=job['c']),
                                     threads=job['threads'])
        self.emit(str(structure_sequence(decomp)))

    def run_measure(self, job):
        circle = PathPolyline.circle(job['center'], job['radius'], job['samples'])
        weights = boundary_phase_measure(job['function'], circle, job['bins'])
        self.emit('\n'.join(fmt(w) for w in weights))
        self.emit(f"sum {fmt(float(np.sum(weights)))}")
