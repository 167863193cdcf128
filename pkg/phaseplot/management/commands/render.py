from phaseplot.color import saddle_jump_scheme
from phaseplot.forms import RenderJobForm
from phaseplot.management.base import PhasePlotCommand
from phaseplot.render import render, save


class Command(PhasePlotCommand):
    help = 'Render the phase plot of an expression to a PPM or PNG file.'
    form_class = RenderJobForm

    def add_arguments(self, parser):
        self.add_function_argument(parser)
        parser.add_argument('--frame', help='xmin,xmax,ymin,ymax (default -2,2,-2,2)')
        parser.add_argument('--res', help='WxH in pixels (default 400x400)')
        parser.add_argument('--scheme',
                            help='plain, sawtooth, grid, domain or jump:<turns,...>[:<base>] '
                                 '(default plain)')
        parser.add_argument('-o', '--output', help='image file, .ppm or .png')
        parser.add_argument('--supersample', action='store_true', default=None,
                            help='average 2x2 samples per pixel')
        parser.add_argument('--highlight-saddles', action='store_true', default=None,
                            help='add jumps at the colours of the saddles in the frame')
        self.add_job_arguments(parser)

    def run(self, job):
        scheme = job['scheme']
        if job['highlight_saddles']:
            scheme = saddle_jump_scheme(job['function'], job['frame'], scheme)
        image = render(job['function'], job['window'], scheme, job['threads'], job['supersample'])
        self.emit(str(save(image, job['output'])))
