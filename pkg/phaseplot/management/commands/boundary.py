from phaseplot.boundary import (
    chrom_of_coloring,
    extend_analytic,
    extend_with_singularities,
    read_coloring,
    sample_coloring,
    write_coloring,
)
from phaseplot.forms import BoundarySampleJobForm, BoundarySolveJobForm, ColoringJobForm
from phaseplot.management.base import PhasePlotCommand
from phaseplot.render import save


class Command(PhasePlotCommand):
    help = 'Boundary value problems for phase plots on the unit disk.'
    forms = {
        'solve': BoundarySolveJobForm,
        'sample': BoundarySampleJobForm,
        'chrom': ColoringJobForm,
    }

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True, metavar='ACTION')

        solve = self.add_action(actions, 'solve', 'extend a boundary colouring into the disk')
        solve.add_argument('-B', '--coloring', help="colouring file: N, then N lines 're im'")
        solve.add_argument('--zeros', help="prescribed zeros, 'location[:order]' items")
        solve.add_argument('--poles', help="prescribed poles, 'location[:order]' items")
        solve.add_argument('--res', help='WxH of the phase image (default 200x200)')
        solve.add_argument('-o', '--output', help='phase image, .ppm or .png')

        sample = self.add_action(actions, 'sample', 'write the boundary colouring of an expression')
        self.add_function_argument(sample)
        sample.add_argument('--samples', type=int, help='power of two >= 64 (default 256)')
        sample.add_argument('-o', '--output', help='colouring file to write')

        chrom = self.add_action(actions, 'chrom', 'chromatic number of a boundary colouring')
        chrom.add_argument('-B', '--coloring', help='colouring file')

    def run_solve(self, job):
        coloring = read_coloring(job['coloring'])
        if job['zeros'] or job['poles']:
            extension = extend_with_singularities(coloring, job['zeros'], job['poles'], job['window'])
        else:
            extension = extend_analytic(coloring, job['window'])
        self.emit(f"samples {coloring.size}")
        self.emit(f"chromatic number {chrom_of_coloring(coloring)}")
        if job['output']:
            self.emit(str(save(extension.image(), job['output'])))

    def run_sample(self, job):
        coloring = sample_coloring(job['function'], job['samples'])
        with open(job['output'], 'w') as sink:
            write_coloring(coloring, sink)
        self.emit(job['output'])

    def run_chrom(self, job):
        self.emit(str(chrom_of_coloring(read_coloring(job['coloring']))))
