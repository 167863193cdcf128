import numpy as np
import pytest

from phaseplot.boundary import sample_coloring, write_coloring
from phaseplot.cli import attach_dashed_values, run
from phaseplot.expr import parse
from phaseplot.render import read_png, read_ppm


class TestRun:
    """Test the command-line dispatcher"""

    def test_no_arguments(self, capsys):
        """Test that a bare call prints usage and fails"""
        assert run([]) == 1
        assert 'usage' in capsys.readouterr().out

    def test_unknown_command(self, capsys):
        """Test an unknown command name"""
        assert run(['plot']) == 1
        assert "unknown command 'plot'" in capsys.readouterr().err

    def test_help(self, capsys):
        """Test that --help exits cleanly"""
        assert run(['render', '--help']) == 0
        assert '--frame' in capsys.readouterr().out

    def test_unknown_flag(self, capsys):
        """Test that argparse errors are usage errors"""
        assert run(['analyze', 'count', '-f', 'z', '--bogus']) == 1

    def test_dashed_values_stay_values(self):
        """Test that negative bounds and expressions are not taken for options"""
        args = ['--rect', '-2,2,-2,2', '-f', '-z^2', '--center', '-2', '-o', 'a.ppm']
        assert attach_dashed_values(args) == ['--rect=-2,2,-2,2', '-f=-z^2', '--center=-2', '-o', 'a.ppm']
        assert attach_dashed_values(['--supersample', '-o', 'x.png']) == ['--supersample', '-o', 'x.png']

    def test_bare_variable_is_a_value(self):
        """Test that '-f -z' keeps -z as the expression"""
        assert attach_dashed_values(['-f', '-z', '-o', 'a.ppm']) == ['-f=-z', '-o', 'a.ppm']
        assert attach_dashed_values(['--center', '-i']) == ['--center=-i']

    def test_render_negated_variable(self, tmp_path):
        """Test a render of -z given as a bare dashed value"""
        output = tmp_path / 'minus.ppm'
        assert run(['render', '-f', '-z', '--frame', '0.5,1.5,-0.5,0.5', '--res', '1x1',
                    '-o', str(output)]) == 0
        assert output.read_bytes()[-3:] == bytes.fromhex('00 FF FF')

    def test_value_errors_are_usage_errors(self, tmp_path, monkeypatch, capsys):
        """Test that a ValueError from a job exits with 1 instead of a traceback"""
        def refuse(ast, n):
            raise ValueError(f"the number of samples must be a power of two >= 64, got {n}")

        monkeypatch.setattr('phaseplot.management.commands.boundary.sample_coloring', refuse)
        assert run(['boundary', 'sample', '-f', 'z', '-o', str(tmp_path / 'b.txt')]) == 1
        assert 'power of two' in capsys.readouterr().err


class TestRenderCommand:
    """Test the render command"""

    def test_ppm_output(self, tmp_path, capsys):
        """Test rendering to a PPM file"""
        output = tmp_path / 'z.ppm'
        assert run(['render', '-f', 'z', '--frame', '0.5,1.5,-0.5,0.5', '--res', '1x1',
                    '-o', str(output)]) == 0
        assert output.read_bytes() == bytes.fromhex('50 36 0A 31 20 31 0A 32 35 35 0A FF 00 00')
        assert str(output) in capsys.readouterr().out

    def test_png_with_scheme(self, tmp_path):
        """Test a sawtooth PNG with supersampling"""
        output = tmp_path / 'zeta.png'
        assert run(['render', '-f', 'zeta(z)', '--frame', '-8,8,-4,36', '--res', '8x20',
                    '--scheme', 'sawtooth', '--supersample', '-o', str(output)]) == 0
        with open(output, 'rb') as source:
            image = read_png(source)
        assert (image.width, image.height) == (8, 20)

    def test_config_file(self, tmp_path):
        """Test a job described by a config file"""
        output = tmp_path / 'job.ppm'
        config = tmp_path / 'job.env'
        config.write_text(f'function = 1/z^2\nres = 3x2\noutput = {output}\n')
        assert run(['render', '--config', str(config)]) == 0
        with open(output, 'rb') as source:
            assert read_ppm(source).pixels.shape == (2, 3, 3)

    def test_syntax_error_exit_code(self, tmp_path, capsys):
        """Test that a malformed expression is a usage error"""
        assert run(['render', '-f', 'exp(1/z', '-o', str(tmp_path / 'x.ppm')]) == 1
        assert 'offset 8' in capsys.readouterr().err


class TestAnalyzeCommand:
    """Test the analyze command"""

    def test_count(self, capsys):
        """Test the chromatic number of a rectangle"""
        assert run(['analyze', 'count', '-f', '(z-1)/(z^2+z+1)', '--rect', '-2,2,-2,2']) == 0
        assert capsys.readouterr().out == '-1\n'

    def test_locate(self, capsys):
        """Test the located zero of a linear function"""
        assert run(['analyze', 'locate', '-f', 'z - 0.25 - 0.5*i']) == 0
        lines = capsys.readouterr().out.splitlines()
        kind, re, im, order, _ = lines[0].split()
        assert (kind, order) == ('zero', '1')
        assert complex(float(re), float(im)) == pytest.approx(0.25 + 0.5j, abs=1e-9)
        assert lines[-1] == '1'

    def test_winding(self, capsys):
        """Test the chromatic number of a circle"""
        assert run(['analyze', 'winding', '-f', 'zeta(z)', '--center', '-2', '--radius', '0.5']) == 0
        assert capsys.readouterr().out == '1\n'

    def test_colour_counts_on_circles(self, capsys):
        """Test colour counts on shrinking circles"""
        assert run(['analyze', 'probe', '-f', 'exp(1/z)']) == 0
        counts = [int(line.split()[1]) for line in capsys.readouterr().out.splitlines()]
        assert counts == [2, 6, 14]

    def test_period(self, capsys):
        """Test the periodicity classification output"""
        assert run(['analyze', 'period', '-f', 'exp(2*z + 1)']) == 0
        assert capsys.readouterr().out.splitlines()[0] == 'striped'

    def test_non_holomorphic_is_math_error(self, capsys):
        """Test that analysis of im(z) exits with 2"""
        assert run(['analyze', 'count', '-f', 'im(z)']) == 2
        assert 'not meromorphic' in capsys.readouterr().err

    def test_ascending_radii_exit_1(self, capsys):
        """Test that growing radii are a usage error"""
        assert run(['analyze', 'probe', '-f', 'exp(1/z)', '--radii', '0.1,0.2']) == 1
        assert 'strictly descending' in capsys.readouterr().err

    def test_missing_function(self):
        """Test that the expression is required"""
        assert run(['analyze', 'count']) == 1


class TestFlowCommand:
    """Test the flow command"""

    def test_sequence(self, capsys):
        """Test the structure sequence of two symmetric zeros"""
        assert run(['flow', 'sequence', '--zeros', '0.5,-0.5']) == 0
        assert capsys.readouterr().out == '1 2\n'

    def test_measure(self, capsys):
        """Test equal weights for f = z"""
        assert run(['flow', 'measure', '-f', 'z', '--bins', '4']) == 0
        lines = capsys.readouterr().out.splitlines()
        np.testing.assert_allclose([float(w) for w in lines[:4]], 0.25, atol=1e-9)
        assert lines[-1] == 'sum 1'

    def test_orbits(self, capsys):
        """Test that reversed orbits report where they end"""
        assert run(['flow', 'orbits', '-f', 'z - 0.3', '--starts', '0.8', '--direction', 'reversed']) == 0
        assert capsys.readouterr().out.startswith('reached-zero ')

    def test_zero_outside_disk(self, capsys):
        """Test that Blaschke zeros outside the disk are a math error"""
        assert run(['flow', 'sequence', '--zeros', '1.5']) == 2


class TestBoundaryCommand:
    """Test the boundary command"""

    def test_nonzero_chromatic_number_exits_2(self, tmp_path, capsys):
        """Test that a winding colouring cannot be solved without zeros"""
        path = tmp_path / 'b.txt'
        assert run(['boundary', 'sample', '-f', 'z', '--samples', '64', '-o', str(path)]) == 0
        capsys.readouterr()
        assert run(['boundary', 'solve', '-B', str(path)]) == 2
        assert 'nonzero chromatic number' in capsys.readouterr().err

    def test_solve_with_zeros(self, tmp_path, capsys):
        """Test solving with a prescribed zero and writing the image"""
        path = tmp_path / 'b.txt'
        with open(path, 'w') as sink:
            write_coloring(sample_coloring(parse('z*(z - 2)'), 128), sink)
        image = tmp_path / 'solved.png'
        assert run(['boundary', 'solve', '-B', str(path), '--zeros', '0',
                    '--res', '10x10', '-o', str(image)]) == 0
        out = capsys.readouterr().out
        assert 'chromatic number 1' in out
        assert image.exists()

    def test_chrom(self, tmp_path, capsys):
        """Test the chromatic number of a colouring file"""
        path = tmp_path / 'b.txt'
        with open(path, 'w') as sink:
            write_coloring(sample_coloring(parse('z^3*(z - 3)'), 128), sink)
        assert run(['boundary', 'chrom', '-B', str(path)]) == 0
        assert capsys.readouterr().out == '3\n'

    def test_sample_count_not_power_of_two(self, tmp_path, capsys):
        """Test that 100 boundary samples are a usage error"""
        path = tmp_path / 'b.txt'
        assert run(['boundary', 'sample', '-f', 'z - 2', '--samples', '100', '-o', str(path)]) == 1
        assert 'power of two' in capsys.readouterr().err
        assert not path.exists()

    def test_missing_coloring_file(self, tmp_path):
        """Test a colouring path that does not exist"""
        assert run(['boundary', 'chrom', '-B', str(tmp_path / 'nope.txt')]) == 1


class TestDemoCommand:
    """Test the demo command"""

    def test_branches(self, tmp_path, capsys):
        """Test the branch-cut demo text and images"""
        assert run(['demo', 'branches', '--output-dir', str(tmp_path), '--res', '32']) == 0
        out = capsys.readouterr().out
        assert 'exp(log(z)) = z everywhere: yes' in out
        assert 'log(exp(z)) = z everywhere: no' in out
        assert (tmp_path / 'branches-exp-log.png').exists()
        assert (tmp_path / 'branches-log-exp.png').exists()

    def test_wilmshurst(self, tmp_path, capsys):
        """Test sixteen zeros for the harmonic example"""
        assert run(['demo', 'wilmshurst', '--output-dir', str(tmp_path), '--res', '16']) == 0
        assert capsys.readouterr().out.splitlines()[-1] == 'zeros: 16'

    def test_unknown_demo(self):
        """Test that unknown demo names are usage errors"""
        assert run(['demo', 'mandelbrot']) == 1
