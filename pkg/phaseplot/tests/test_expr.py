import cmath

import numpy as np
import pytest

from phaseplot.exceptions import (
    ArityMismatch,
    ExpressionSyntaxError,
    NonHolomorphicError,
    NonUnimodularC,
    UnknownIdentifier,
    ZeroOutsideDisk,
)
from phaseplot.expr import ExprAst, blaschke, differentiate, evaluate, evaluate_array, parse, polynomial


SAMPLES = np.array([0.3 + 0.2j, -0.7 + 0.1j, 1.1 - 0.4j, -0.2 - 0.9j])


class TestParse:
    """Test parsing expressions into trees"""

    def test_precedence_and_associativity(self):
        """Test that ^ binds tighter than unary minus and is right-associative"""
        assert evaluate(parse('-z^2'), 2).value == -4
        assert evaluate(parse('2^3^2'), 0).value == pytest.approx(512)
        assert evaluate(parse('1 - 2 - 3'), 0).value == -4
        assert evaluate(parse('8/2/2'), 0).value == 2

    def test_imaginary_unit(self):
        """Test that i is the imaginary unit"""
        assert evaluate(parse('z^2 + 1'), 1j).value == 0
        assert evaluate(parse('i*i'), 0).value == -1

    def test_unclosed_call_reports_end_offset(self):
        """Test the 1-based offset of a missing closing parenthesis"""
        with pytest.raises(ExpressionSyntaxError) as excinfo:
            parse('exp(1/z')
        assert excinfo.value.offset == 8

    def test_unexpected_byte(self):
        """Test that a stray character is reported where it occurs"""
        with pytest.raises(ExpressionSyntaxError) as excinfo:
            parse('z $ 1')
        assert excinfo.value.offset == 3

    def test_unknown_identifier(self):
        """Test unknown names"""
        with pytest.raises(UnknownIdentifier) as excinfo:
            parse('z + foo(z)')
        assert excinfo.value.offset == 5

    def test_arity_mismatch(self):
        """Test wrong argument counts"""
        with pytest.raises(ArityMismatch):
            parse('sin(z, z)')
        with pytest.raises(ArityMismatch):
            parse('wp(z, 1)')

    def test_lattice_arguments_must_be_constant(self):
        """Test that wp periods cannot depend on z"""
        with pytest.raises(ExpressionSyntaxError):
            parse('wp(z, z, 2*i)')

    def test_degenerate_lattice(self):
        """Test that collinear periods are rejected"""
        with pytest.raises(ExpressionSyntaxError):
            parse('wp(z, 1, 2)')


class TestPrint:
    """Test canonical printing"""

    def test_minimal_parentheses(self):
        """Test that only necessary parentheses are printed"""
        assert str(parse('(z-1)/(z^2+z+1)')) == '(z - 1)/(z^2 + z + 1)'
        assert str(parse('((z))*(2)')) == 'z*2'
        assert str(parse('(z^2)^3')) == '(z^2)^3'
        assert str(parse('-(z+1)')) == '-(z + 1)'

    @pytest.mark.parametrize('source', [
        '(z-1)/(z^2+z+1)',
        'exp(1/z) - sin(z)*cos(z)',
        'z^-2 + 3*i*z',
        'log(exp(z)) - sqrt(z + 2)',
        'wp(z, 2, 2*i, 20)',
    ])
    def test_printed_text_reparses_to_same_function(self, source):
        """Test that printing then parsing gives the same values"""
        ast = parse(source)
        again = parse(str(ast))
        np.testing.assert_allclose(evaluate_array(again, SAMPLES), evaluate_array(ast, SAMPLES),
                                   rtol=1e-12)


class TestEvaluate:
    """Test extended-value evaluation"""

    def test_pole_is_infinite(self):
        """Test that 1/z is infinite at 0"""
        assert evaluate(parse('1/z'), 0).is_infinite

    def test_zero_over_zero_is_undefined(self):
        """Test that z/z has no value at 0"""
        assert evaluate(parse('z/z'), 0).is_undefined

    def test_exp_log_is_identity(self):
        """Test that exp(log z) = z away from 0"""
        np.testing.assert_allclose(evaluate_array(parse('exp(log(z))'), SAMPLES), SAMPLES, rtol=1e-12)

    def test_log_exp_on_strip(self):
        """Test that log(exp z) = z for |Im z| < pi and not beyond"""
        ast = parse('log(exp(z))')
        inside = np.array([0.5 + 3.0j, -2.0 - 3.1j, 1.0 + 0.0j])
        np.testing.assert_allclose(evaluate_array(ast, inside), inside, rtol=1e-12)
        outside = evaluate(ast, 0.5 + 4.0j).value
        assert abs(outside - (0.5 + 4.0j)) == pytest.approx(2 * np.pi)

    def test_principal_sqrt(self):
        """Test the branch of sqrt on the negative axis"""
        assert evaluate(parse('sqrt(z)'), -4).value == pytest.approx(2j)

    def test_callable_ast(self):
        """Test calling the tree directly"""
        ast = parse('z^3')
        np.testing.assert_allclose(ast(SAMPLES), SAMPLES ** 3)


class TestHolomorphy:
    """Test the holomorphic flag and derivatives"""

    def test_non_holomorphic_functions(self):
        """Test that conj, re, im and abs clear the flag"""
        assert parse('exp(z) + z^2').holomorphic
        for source in ('im(z)', 'conj(z)', 're(z) + z', 'abs(z)*z'):
            assert not parse(source).holomorphic

    def test_differentiate_non_holomorphic(self):
        """Test that im(z) cannot be differentiated"""
        with pytest.raises(NonHolomorphicError):
            differentiate(parse('im(z)'))

    @pytest.mark.parametrize('source,expected', [
        ('z^3', lambda z: 3 * z ** 2),
        ('exp(2*z)', lambda z: 2 * np.exp(2 * z)),
        ('sin(z)*cos(z)', lambda z: np.cos(2 * z)),
        ('1/(z - 2)', lambda z: -1 / (z - 2) ** 2),
        ('log(z^2 + 1)', lambda z: 2 * z / (z ** 2 + 1)),
        ('tan(z)', lambda z: 1 / np.cos(z) ** 2),
        ('z^z', lambda z: z ** z * (np.log(z) + 1)),
    ])
    def test_derivative_values(self, source, expected):
        """Test symbolic derivatives against closed forms"""
        derivative = differentiate(parse(source))
        np.testing.assert_allclose(evaluate_array(derivative, SAMPLES), expected(SAMPLES), rtol=1e-10)

    @pytest.mark.parametrize('source', ['z^3 - 2*z', 'exp(z)*sin(z)', '(z - 1)/(z^2 + 4)', 'cos(z^2)'])
    def test_derivative_matches_difference_quotient(self, source):
        """Test the symbolic derivative against central differences at 1000 seeded points"""
        rng = np.random.default_rng(21)
        z = 1.5 * np.sqrt(rng.uniform(0, 1, 1000)) * np.exp(2j * np.pi * rng.uniform(0, 1, 1000))
        ast = parse(source)
        h = 1e-5
        quotient = (evaluate_array(ast, z + h) - evaluate_array(ast, z - h)) / (2 * h)
        np.testing.assert_allclose(evaluate_array(differentiate(ast), z), quotient, rtol=1e-6, atol=1e-8)

    def test_identity_elision(self):
        """Test that derivatives do not carry multiplications by one"""
        assert str(differentiate(parse('z'))) == '1'
        assert str(differentiate(parse('z + 3'))) == '1'
        assert str(differentiate(parse('exp(z)'))) == 'exp(z)'

    def test_special_function_chain(self):
        """Test that gamma and zeta differentiate to their numeric derivatives"""
        assert str(differentiate(parse('gamma(z)'))) == 'dgamma(z)'
        assert str(differentiate(differentiate(parse('zeta(z)')))) == 'ddzeta(z)'


class TestBuilders:
    """Test programmatic construction"""

    def test_polynomial(self):
        """Test the polynomial builder against numpy"""
        coefficients = [1, -2, 0, 0.5 + 1j]
        ast = ExprAst(polynomial(coefficients))
        expected = np.polynomial.polynomial.polyval(SAMPLES, coefficients)
        np.testing.assert_allclose(evaluate_array(ast, SAMPLES), expected, rtol=1e-12)

    def test_blaschke_is_unimodular_on_circle(self):
        """Test that a Blaschke product has modulus one on the unit circle"""
        ast = blaschke([(0.5, 1), (-0.3 + 0.4j, 2), (0, 1)], c=cmath.exp(0.7j))
        circle = np.exp(1j * np.linspace(0, 2 * np.pi, 50))
        np.testing.assert_allclose(np.abs(evaluate_array(ast, circle)), 1.0, rtol=1e-12)
        assert evaluate(ast, 0.5).value == 0

    def test_blaschke_rejects_bad_input(self):
        """Test zeros outside the disk and non-unimodular constants"""
        with pytest.raises(ZeroOutsideDisk):
            blaschke([(1.2, 1)])
        with pytest.raises(ZeroOutsideDisk):
            blaschke([(0.2, 0)])
        with pytest.raises(NonUnimodularC):
            blaschke([(0.2, 1)], c=2)
