"""The test suite for keylang.py"""
import sys
sys.path.insert(1, ".")
from anisopy import *

import unittest

import numpy as np


def check_lang(test: unittest.TestCase, program: str, x, expected):
    """Asserts that the program parses and interprets to the expected result

    Parameters
    ----------
    test : unittest.TestCase
        the test case to run the test on
    program : str
        the program string to parse and interpret
    x : Sequence
        the coordinates to substitute, shape (N,) or (N, P)
    expected : float or Sequence[float]
        the expected value of the program"""
    ast = parse(program)
    result = interpret(ast, np.asarray(x, dtype=float))
    np.testing.assert_allclose(result, expected, rtol=1e-14, atol=1e-14, err_msg=f"Expression = {program}, AST = ({ast})")


class TestKeyLang(unittest.TestCase):
    """Test suite for keylang.py"""

    def test_1_plus_1(self):
        check_lang(self, "1 + 1", [0, 0], 2)

    def test_2_times_2(self):
        check_lang(self, "2 * 2", [0, 0], 4)

    def test_2_pow_2(self):
        check_lang(self, "2 ^ 2", [0, 0], 4)

    def test_1_plus_2_times_2(self):
        check_lang(self, "1 + 2 * 2", [0, 0], 5)

    def test_2_times_1_plus_2(self):
        check_lang(self, "2 * ( 1 + 2 )", [0, 0], 6)

    def test_subtraction_left_to_right(self):
        check_lang(self, "10 - 2 - 3", [0, 0], 5)

    def test_division_left_to_right(self):
        check_lang(self, "8 / 2 / 2", [0, 0], 2)

    def test_negation_binds_looser_than_pow(self):
        check_lang(self, "- 2 ^ 2", [0, 0], -4)

    def test_negative_exponent(self):
        check_lang(self, "2 ^ - 1", [0, 0], 0.5)

    def test_pow_right_associative(self):
        check_lang(self, "2 ^ 3 ^ 2", [0, 0], 512)

    def test_pi(self):
        check_lang(self, "pi", [0, 0], np.pi)

    def test_1_plus_x1(self):
        check_lang(self, "1 + x1", [1, 0], 2)

    def test_vectorized_coordinates(self):
        x = [[0.0, 0.5, 1.0], [1.0, 2.0, 3.0]]
        check_lang(self, "x1 * x2", x, [0.0, 1.0, 3.0])

    def test_sine_product(self):
        check_lang(self, "sin ( pi * x1 ) * sin ( pi * x2 )", [0.5, 0.5], 1.0)

    def test_functions(self):
        check_lang(self, "exp ( 0 ) + sqrt ( 4 ) + abs ( - 3 ) + log ( 1 ) + cos ( 0 )", [0, 0], 7)

    def test_x3_in_2d_raises(self):
        with self.assertRaises(ExpressionSyntaxError):
            interpret(parse("x3"), np.zeros(2))

    def test_mismatched_parenthesis(self):
        with self.assertRaises(ExpressionSyntaxError):
            parse("( 1 + 2")

    def test_unexpected_token(self):
        with self.assertRaises(ExpressionSyntaxError):
            parse("1 + 2 )")

    def test_bad_literal(self):
        with self.assertRaises(ExpressionSyntaxError):
            parse("1 + y")

    def test_abrupt_end(self):
        with self.assertRaises(ExpressionSyntaxError):
            parse("1 +")

    def test_function_needs_parenthesis(self):
        with self.assertRaises(ExpressionSyntaxError):
            parse("sin x1")

    def test_variables(self):
        self.assertEqual(variables(parse("x1 * x3 + 2")), {0, 2})
        self.assertEqual(variables(parse("pi")), set())

    def test_compile_expression(self):
        fn = compile_expression("x1 + 2 * x2")
        self.assertEqual(fn.source, "x1 + 2 * x2")
        np.testing.assert_allclose(fn(np.array([[1.0, 2.0], [3.0, 4.0]])), [7.0, 10.0])
        self.assertEqual(variables(fn.ast), {0, 1})


if __name__ == "__main__":
    unittest.main()
