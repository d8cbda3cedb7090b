import unittest
from fractions import Fraction
from typing import TypeAlias
from unittest import TestCase

from errors import NotInvariantError, RingMismatchError, SkewPolyParseError
from skewpoly import (
    E1,
    E2,
    R,
    R3,
    RS,
    EExpression,
    SkewPoly,
    act_s,
    degree_slice,
    demazure,
    is_invariant,
    left_decompose,
    monomials,
    parse_poly,
    right_decompose,
    rs_normal_form,
)
from utils.linalg import rank

x1, x2 = SkewPoly.var(2, 1), SkewPoly.var(2, 2)

Input: TypeAlias = str
Output: TypeAlias = str


def generate_tests(cls: object):
    """Turns inputN/outputN pairs into tests comparing demazure(1, inputN) with outputN."""
    inputs: dict[str, Input] = {}
    outputs: dict[str, Output] = {}
    for k, v in cls.__dict__.items():
        if k.startswith("input"):
            inputs[k.removeprefix("input")] = v  # type: ignore
        if k.startswith("output"):
            outputs[k.removeprefix("output")] = v  # type: ignore

    def test_factory(testcase: tuple[Input, Output]):
        input_data, output_data = testcase

        def f(self: TestCase):
            self.assertEqual(demazure(1, parse_poly(input_data)), parse_poly(output_data))

        return f

    for k, v in inputs.items():
        setattr(cls, f"test_{k}", test_factory((v, outputs[k])))
    return cls


@generate_tests
class TestDemazureValues(TestCase):
    input1: Input = "x1"
    output1: Output = "1"

    input2: Input = "x2"
    output2: Output = "1"

    input3: Input = "x1*x2"
    output3: Output = "0"

    input4: Input = "x1^2"
    output4: Output = "x1 - x2"

    input5: Input = "x1 - x2"
    output5: Output = "0"


class TestMultiplication(TestCase):
    def test_defining_relation(self):
        self.assertEqual(x2 * x1, -(x1 * x2))

    def test_square_of_sum(self):
        self.assertEqual((x1 + x2) ** 2, x1**2 + x2**2)
        self.assertEqual((x1 + x2) ** 2, (x1 - x2) ** 2)

    def test_sign_count(self):
        self.assertEqual((x1 * x2) * (x1 * x2), SkewPoly.monomial((2, 2), -1))

    def test_associative(self):
        polys = [x1 + 2 * x2, x1 * x2 - x2**2, x1**3 + x2, E1 * E2]
        for a in polys:
            for b in polys:
                for c in polys:
                    self.assertEqual((a * b) * c, a * (b * c))

    def test_degree_additive(self):
        p, q = x1**2 + x1 * x2, x2**3
        self.assertEqual((p * q).homogeneous_degree(), 10)
        self.assertIsNone((x1 + x1**2).homogeneous_degree())

    def test_mismatched_rings(self):
        with self.assertRaises(RingMismatchError):
            x1 * SkewPoly.var(3, 1)


class TestTransposition(TestCase):
    def test_generators(self):
        self.assertEqual(act_s(1, x1), -x2)
        self.assertEqual(act_s(1, E1), E1)
        self.assertEqual(act_s(1, E2), -E2)

    def test_involution(self):
        for d in range(0, 13, 2):
            for b in degree_slice(R, d):
                self.assertEqual(act_s(1, act_s(1, b)), b)

    def test_automorphism(self):
        p, q = x1**2 - 3 * x2, x1 * x2 + x2**2
        self.assertEqual(act_s(1, p * q), act_s(1, p) * act_s(1, q))

    def test_invalid_index(self):
        with self.assertRaises(RingMismatchError):
            act_s(2, x1)
        with self.assertRaises(RingMismatchError):
            demazure(0, x1)

    def test_three_variables(self):
        y1, y2, y3 = (SkewPoly.var(3, i) for i in (1, 2, 3))
        self.assertEqual(act_s(1, y3), -y3)
        self.assertEqual(act_s(2, y1), -y1)
        self.assertEqual(act_s(2, y2), -y3)


class TestDemazureCalculus(TestCase):
    def test_leibniz(self):
        polys = [x1, x2, x1**2 + x2, x1 * x2**2, 2 * x1**3 - x2**3]
        for f in polys:
            for g in polys:
                self.assertEqual(demazure(1, f * g), demazure(1, f) * g + act_s(1, f) * demazure(1, g))

    def test_anticommutes_with_s(self):
        for d in range(0, 21, 2):
            for b in degree_slice(R, d):
                self.assertEqual(demazure(1, act_s(1, b)), -act_s(1, demazure(1, b)))

    def test_squares_to_zero(self):
        for d in range(0, 21, 2):
            for b in degree_slice(R, d):
                self.assertTrue(demazure(1, demazure(1, b)).is_zero())

    def test_kernel_equals_image(self):
        for d in range(0, 21, 2):
            source = monomials(2, d)
            below = {m: j for j, m in enumerate(monomials(2, d - 2))} if d else {}
            rows = [{} for _ in below]
            for k, m in enumerate(source):
                for t, c in demazure(1, SkewPoly.monomial(m)).terms.items():
                    rows[below[t]][k] = c
            kernel = len(source) - rank(rows, len(source))
            above = monomials(2, d + 2)
            index = {m: j for j, m in enumerate(source)}
            image_rows = [{} for _ in source]
            for k, m in enumerate(above):
                for t, c in demazure(1, SkewPoly.monomial(m)).terms.items():
                    image_rows[index[t]][k] = c
            self.assertEqual(kernel, rank(image_rows, len(above)), f"degree {d}")
            self.assertEqual(kernel, len(degree_slice(RS, d)), f"degree {d}")

    def test_image_is_invariant(self):
        for d in range(2, 17, 2):
            for b in degree_slice(R, d):
                self.assertTrue(is_invariant(1, demazure(1, b)))

    def test_is_invariant(self):
        self.assertTrue(is_invariant(1, x1 - x2))
        self.assertFalse(is_invariant(1, x1))


class TestInvariants(TestCase):
    def test_normal_form(self):
        self.assertEqual(rs_normal_form(x1 - x2), EExpression({(1, 0): 1}))
        self.assertEqual(rs_normal_form(x1**2 + x2**2), EExpression({(2, 0): 1}))
        self.assertEqual(rs_normal_form(x1 * x2 * (x1 - x2)), EExpression({(1, 1): -1}))

    def test_anticommuting_generators(self):
        self.assertEqual(E1 * E2, -(E2 * E1))

    def test_non_invariant(self):
        with self.assertRaises(NotInvariantError):
            rs_normal_form(x1)
        with self.assertRaises(NotInvariantError):
            rs_normal_form(x1**2)

    def test_round_trip(self):
        for a in range(9):
            for b in range(5):
                if 2 * a + 4 * b > 16:
                    continue
                e = EExpression({(a, b): Fraction(3, 2)})
                self.assertEqual(rs_normal_form(e.expand()), e)
        mixed = EExpression({(2, 0): 1, (0, 1): -2})
        self.assertEqual(rs_normal_form(mixed.expand()), mixed)

    def test_slices(self):
        self.assertEqual(degree_slice(R, 2), [x1, x2])
        self.assertEqual(degree_slice(RS, 4), [E1**2, E2])
        self.assertEqual(len(degree_slice(R3, 4)), 6)
        with self.assertRaises(ValueError):
            degree_slice(R, 3)


class TestDecompositions(TestCase):
    def test_left_examples(self):
        self.assertEqual(left_decompose(x1, 2), (E1, SkewPoly.const(2)))
        self.assertEqual(left_decompose(x2**2, 2), (E2, -E1))
        f = E1 * E2 + E2
        self.assertEqual(left_decompose(f, 1), (f, SkewPoly.zero(2)))

    def test_right_examples(self):
        self.assertEqual(right_decompose(x2, 2), (SkewPoly.zero(2), SkewPoly.const(2)))
        self.assertEqual(right_decompose(x1, 2), (E1, SkewPoly.const(2)))
        self.assertEqual(right_decompose(x1 * x2, 2), (E2, SkewPoly.zero(2)))

    def test_round_trips(self):
        for d in range(0, 17, 2):
            for b in degree_slice(R, d):
                for v in (1, 2):
                    xv = SkewPoly.var(2, v)
                    c0, c1 = left_decompose(b, v)
                    self.assertEqual(c0 + c1 * xv, b)
                    self.assertTrue(is_invariant(1, c0) and is_invariant(1, c1))
                    e0, e1 = right_decompose(b, v)
                    self.assertEqual(e0 + xv * e1, b)
                    self.assertTrue(is_invariant(1, e0) and is_invariant(1, e1))


class TestText(TestCase):
    def test_parse(self):
        self.assertEqual(parse_poly("-3*x1^2*x2"), SkewPoly.monomial((2, 1), -3))
        self.assertEqual(parse_poly("x2*x1"), -(x1 * x2))
        self.assertEqual(parse_poly("E1*E2"), E1 * E2)
        self.assertEqual(parse_poly("1/2*x1 + 1/2"), x1.scale(Fraction(1, 2)) + Fraction(1, 2))

    def test_round_trip(self):
        for p in [x1**2 - 3 * x1 * x2, SkewPoly.zero(2), x2.scale(Fraction(-2, 3)) + 5, E1 * E2]:
            self.assertEqual(parse_poly(str(p)), p)
        e = rs_normal_form(E1 * E2 - E2)
        self.assertEqual(str(e), "E1*E2 - E2")
        self.assertEqual(EExpression.parse(str(e)), e)

    def test_bad_input(self):
        for text in ["", "x1**", "y1", "x3", "x1 x2"]:
            with self.assertRaises(SkewPolyParseError):
                parse_poly(text)


if __name__ == "__main__":
    unittest.main()
