from phaseplot.analysis import (
    PeriodicityKind,
    classify_periodicity,
    count_zeros_poles,
    essential_probe,
    find_saddles,
    localize_singularities,
    log_derivative_density,
    report_text,
    winding_on_circle,
)
from phaseplot.forms import (
    CountJobForm,
    DensityJobForm,
    LocateJobForm,
    PeriodJobForm,
    ProbeJobForm,
    WindingJobForm,
)
from phaseplot.management.base import PhasePlotCommand, fmt, fmt_complex


class Command(PhasePlotCommand):
    help = 'Read zeros, poles, saddles and other structure off the phase of f.'
    forms = {
        'count': CountJobForm,
        'locate': LocateJobForm,
        'saddles': LocateJobForm,
        'probe': ProbeJobForm,
        'period': PeriodJobForm,
        'density': DensityJobForm,
        'winding': WindingJobForm,
    }

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True, metavar='ACTION')

        count = self.add_action(actions, 'count', 'zeros minus poles inside a rectangle')
        self.add_function_argument(count)
        count.add_argument('--rect', help='xmin,xmax,ymin,ymax (default -2,2,-2,2)')

        for name, help_text in (('locate', 'zeros and poles with their orders'),
                                ('saddles', 'colour saddles, the zeros of f\' off the zeros of f')):
            locate = self.add_action(actions, name, help_text)
            self.add_function_argument(locate)
            locate.add_argument('--rect', help='xmin,xmax,ymin,ymax (default -2,2,-2,2)')
            locate.add_argument('--min-box', type=float, help='smallest box side (default 1e-3)')

        probe = self.add_action(actions, 'probe', 'crossings of one colour on shrinking circles')
        self.add_function_argument(probe)
        probe.add_argument('--center', help='centre of the circles (default 0)')
        probe.add_argument('--color', help='the colour as a complex number (default 1)')
        probe.add_argument('--radii', help='descending radii (default 0.2,0.1,0.05)')

        period = self.add_action(actions, 'period', 'striped, periodic or aperiodic phase')
        self.add_function_argument(period)
        period.add_argument('--periods', help='comma-separated candidate periods')
        period.add_argument('--rect', help='probe rectangle (default -1,1,-1,1)')

        density = self.add_action(actions, 'density', '|f\'/f|, the density of isochromatic lines')
        self.add_function_argument(density)
        density.add_argument('--point', help='where to measure')

        winding = self.add_action(actions, 'winding', 'chromatic number of a circle')
        self.add_function_argument(winding)
        winding.add_argument('--center', help='circle centre (default 0)')
        winding.add_argument('--radius', type=float, help='circle radius (default 1)')

    def run_count(self, job):
        self.emit(str(count_zeros_poles(job['function'], job['rect'])))

    def run_locate(self, job):
        report = localize_singularities(job['function'], job['rect'], job['min_box'], job['threads'])
        self.emit(report_text(report))

    def run_saddles(self, job):
        report = find_saddles(job['function'], job['rect'], job['min_box'], job['threads'])
        self.emit(report_text(report))

    def run_probe(self, job):
        counts = essential_probe(job['function'], job['center'], job['color'], job['radii'])
        self.emit('\n'.join(f"{fmt(radius)} {count}" for radius, count in counts))

    def run_period(self, job):
        result = classify_periodicity(job['function'], job['periods'], job['rect'])
        lines = [result.kind.value]
        if result.kind is PeriodicityKind.STRIPED:
            lines += [f"a {fmt_complex(result.a)}", f"b {fmt_complex(result.b)}"]
        for period, alpha in zip(result.periods, result.alphas):
            lines.append(f"period {fmt_complex(period)} alpha {fmt(alpha)}")
        self.emit('\n'.join(lines))

    def run_density(self, job):
        self.emit(fmt(log_derivative_density(job['function'], job['point'])))

    def run_winding(self, job):
        self.emit(str(winding_on_circle(job['function'], job['center'], job['radius'])))
