from pathlib import Path

import pytest

from phaseplot.color import SchemeKind
from phaseplot.exceptions import JobConfigError
from phaseplot.forms import (
    BasinJobForm,
    BoundarySampleJobForm,
    CountJobForm,
    DemoJobForm,
    OrbitJobForm,
    ProbeJobForm,
    RenderJobForm,
    parse_complex,
)
from phaseplot.geometry import Disk, Frame, Rect


class TestParseComplex:
    """Test complex number input"""

    @pytest.mark.parametrize('text,expected', [
        ('0.5', 0.5),
        ('-0.3-0.3i', -0.3 - 0.3j),
        ('i', 1j),
        ('2j', 2j),
        (' 1 + 2i ', 1 + 2j),
    ])
    def test_spellings(self, text, expected):
        """Test the accepted spellings"""
        assert parse_complex(text) == expected


class TestJobForms:
    """Test job configuration forms"""

    def test_defaults(self):
        """Test that an expression alone is a complete count job"""
        job = CountJobForm.from_options({'function': 'z^3'}).cleaned_data
        assert job['rect'] == Rect(xmin=-2, xmax=2, ymin=-2, ymax=2)
        assert str(job['function']) == 'z^3'
        assert job['threads'] is None

    def test_flags_override_config_file(self, tmp_path):
        """Test the precedence defaults < config file < flags"""
        config = tmp_path / 'job.env'
        config.write_text('function = z - 1\nres = 10x20\nSCHEME=sawtooth\n')
        job = RenderJobForm.from_options(
            {'output': 'a.png', 'scheme': 'grid', 'frame': None, 'supersample': None},
            str(config),
        ).cleaned_data
        assert str(job['function']) == 'z - 1'
        assert job['res'] == (10, 20)
        assert job['scheme'].kind is SchemeKind.GRID
        assert job['supersample'] is False
        assert job['window'] == Frame(xmin=-2, xmax=2, ymin=-2, ymax=2, xres=10, yres=20)
        assert job['output'] == Path('a.png')

    def test_dashed_config_keys(self, tmp_path):
        """Test that config keys may use dashes"""
        config = tmp_path / 'job.env'
        config.write_text('highlight-saddles = true\n')
        job = RenderJobForm.from_options({'function': 'z', 'output': 'a.ppm'}, str(config))
        assert job.cleaned_data['highlight_saddles'] is True

    def test_unknown_config_key(self, tmp_path):
        """Test that typos in config files are reported"""
        config = tmp_path / 'job.env'
        config.write_text('functon = z\n')
        with pytest.raises(JobConfigError, match='functon'):
            CountJobForm.from_options({}, str(config))

    def test_missing_config_file(self, tmp_path):
        """Test a config path that does not exist"""
        with pytest.raises(JobConfigError):
            CountJobForm.from_options({'function': 'z'}, str(tmp_path / 'missing.env'))

    def test_syntax_error_is_configuration_error(self):
        """Test that a bad expression is a usage error naming its offset"""
        with pytest.raises(JobConfigError, match='offset 8'):
            CountJobForm.from_options({'function': 'exp(1/z'})

    @pytest.mark.parametrize('options', [
        {'function': 'z', 'rect': '2,1,0,1'},
        {'function': 'z', 'rect': '1,2,3'},
        {'function': 'z', 'threads': 0},
        {},
    ])
    def test_invalid_values(self, options):
        """Test that invalid values name the offending option"""
        with pytest.raises(JobConfigError):
            CountJobForm.from_options(options)

    def test_bad_image_suffix(self):
        """Test the output format check"""
        with pytest.raises(JobConfigError, match='unsupported image format'):
            RenderJobForm.from_options({'function': 'z', 'output': 'plot.jpg'})

    def test_reference_colour_must_be_nonzero(self):
        """Test that the counted colour must be a nonzero number"""
        with pytest.raises(JobConfigError):
            ProbeJobForm.from_options({'function': '1/z', 'color': '0'})

    @pytest.mark.parametrize('radii', ['0.1,0.2', '0.2,0.2', '0.1,0', '0.1,-0.05'])
    def test_radii_must_be_positive_and_descending(self, radii):
        """Test that shrinking circles are required around the singularity"""
        with pytest.raises(JobConfigError, match='radii'):
            ProbeJobForm.from_options({'function': 'exp(1/z)', 'radii': radii})
        job = ProbeJobForm.from_options({'function': 'exp(1/z)', 'radii': '0.3, 0.1'})
        assert job.cleaned_data['radii'] == [0.3, 0.1]

    @pytest.mark.parametrize('samples', [100, 96, 65])
    def test_boundary_samples_power_of_two(self, samples):
        """Test that colouring files hold a power-of-two number of samples"""
        with pytest.raises(JobConfigError, match='power of two'):
            BoundarySampleJobForm.from_options({'function': 'z - 2', 'samples': samples, 'output': 'b.txt'})
        job = BoundarySampleJobForm.from_options({'function': 'z - 2', 'samples': 128, 'output': 'b.txt'})
        assert job.cleaned_data['samples'] == 128

    def test_orbit_domain(self):
        """Test the disk default and rectangular domains"""
        job = OrbitJobForm.from_options({'function': 'z', 'starts': '0.5, 0.2i'}).cleaned_data
        assert job['domain'] == Disk()
        assert job['starts'] == [0.5, 0.2j]
        job = OrbitJobForm.from_options({'function': 'z', 'starts': '0.5', 'domain': '-1,1,-1,1'})
        assert job.cleaned_data['domain'] == Rect(xmin=-1, xmax=1, ymin=-1, ymax=1)

    def test_basin_zeros_with_orders(self):
        """Test 'location:order' lists"""
        job = BasinJobForm.from_options({'zeros': '0.5, -0.3-0.3i:2'}).cleaned_data
        assert job['zeros'] == [(0.5, 1), (-0.3 - 0.3j, 2)]
        assert job['c'] == 1
        with pytest.raises(JobConfigError):
            BasinJobForm.from_options({'zeros': '0.5:0'})

    def test_demo_defaults(self, settings):
        """Test that the demo output directory follows the settings"""
        settings.PHASEPLOT_OUTPUT_DIR = Path('/tmp/pictures')
        job = DemoJobForm.from_options({'name': 'zeta'}).cleaned_data
        assert job['output_dir'] == '/tmp/pictures'
        with pytest.raises(JobConfigError):
            DemoJobForm.from_options({'name': 'mandelbrot'})
