from pathlib import Path

from phaseplot.demos import DEMOS, run_demo
from phaseplot.forms import DemoJobForm
from phaseplot.management.base import PhasePlotCommand
from phaseplot.render import save


class Command(PhasePlotCommand):
    help = 'Reproduce the reference pictures; no flags are required.'
    form_class = DemoJobForm

    def add_arguments(self, parser):
        parser.add_argument('name', choices=sorted(DEMOS), help='which demo to run')
        parser.add_argument('--output-dir', help='where images go (default PHASEPLOT_OUTPUT_DIR)')
        parser.add_argument('--res', type=int, help='image size in pixels')
        self.add_job_arguments(parser)

    def run(self, job):
        name = job['name']
        result = run_demo(name, job['res'], job['threads'])
        output_dir = Path(job['output_dir'])
        for key, image in sorted(result.images.items()):
            save(image, output_dir / f"{name}-{key}.png")
        self.emit(result.text)
