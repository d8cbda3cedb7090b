import random
import unittest
from typing import TypeAlias
from unittest import TestCase

from complexes import (
    Summand,
    reduce,
    reduce_power,
    rouquier,
    rouquier_inv,
    split_summand,
    tensor_complexes,
    unit_complex,
)
from errors import ExpressionError
from grothendieck import (
    BASIS,
    FormValue,
    K0Elem,
    LaurentPoly,
    check_against_hom,
    class_of,
    euler_class,
    evaluate,
    form,
    k0_mul,
    k0_tau,
    trace,
)

q = LaurentPoly.q
one, b, c, bc = (K0Elem.basis(name) for name in ("1", "b", "c", "bc"))


def _random_elem(rng: random.Random) -> K0Elem:
    coords = {}
    for k in BASIS:
        coords[k] = LaurentPoly({rng.randint(-3, 3): rng.randint(-2, 2), rng.randint(-3, 3): rng.randint(-2, 2)})
    return K0Elem(coords)


class TestLaurent(TestCase):
    def test_arithmetic(self):
        p = q(1) + 2
        self.assertEqual(p * p, q(2) + q(1) * 4 + 4)
        self.assertEqual(p.bar(), q(-1) + 2)
        self.assertEqual(q(3).inverse(), q(-3))
        self.assertEqual(str(q(-1) - q(2) * 3 + 1), "q^-1 + 1 - 3q^2")
        with self.assertRaises(ExpressionError):
            (q(1) + 1).inverse()


class TestRing(TestCase):
    def test_relations(self):
        self.assertEqual(b * b, K0Elem({(1, 0): q(-1), (1, 1): q(1)}))
        self.assertEqual(c * c, one)
        self.assertEqual(b * c, bc)
        self.assertEqual(str(b * b), "q^-1*b + q*bc")

    def test_tau(self):
        self.assertEqual(k0_tau(b * q(1)), bc * q(-1))
        self.assertEqual(k0_tau(c), c)
        self.assertEqual(k0_tau(one), one)

    def test_commutative_associative(self):
        rng = random.Random(7)
        for _ in range(200):
            x, y, z = _random_elem(rng), _random_elem(rng), _random_elem(rng)
            self.assertEqual(k0_mul(x, y), k0_mul(y, x))
            self.assertEqual(k0_mul(k0_mul(x, y), z), k0_mul(x, k0_mul(y, z)))

    def test_tau_antiautomorphism(self):
        rng = random.Random(11)
        for _ in range(100):
            x, y = _random_elem(rng), _random_elem(rng)
            self.assertEqual(k0_tau(k0_tau(x)), x)
            self.assertEqual(k0_tau(k0_mul(x, y)), k0_mul(k0_tau(y), k0_tau(x)))


class TestForm(TestCase):
    def test_trace(self):
        self.assertEqual(trace(one).numerator, q(0))
        self.assertEqual(trace(b).numerator, q(3))
        self.assertEqual(trace(c).numerator, LaurentPoly())
        self.assertEqual(trace(bc).numerator, q(1))

    def test_table(self):
        self.assertEqual(form(one, c).numerator, LaurentPoly())
        self.assertEqual(form(c, one).numerator, LaurentPoly())
        self.assertEqual(form(b, one).numerator, q(1))
        self.assertEqual(form(one, bc).numerator, q(1))
        self.assertEqual(form(one, b).numerator, q(3))
        self.assertEqual(form(bc, one).numerator, q(3))
        self.assertEqual(form(b, b).numerator, q(4) + 1)
        self.assertEqual(form(b, bc).numerator, q(2) * 2)

    def test_semilinear(self):
        for x in (one, b, c, bc):
            for m in (one, b, c, bc):
                for n in (one, b, c, bc):
                    self.assertEqual(form(x * m, n), form(m, k0_tau(x) * n))
                    self.assertEqual(form(c * m, c * n), form(m, n))
        self.assertEqual(form(b * q(2), one).numerator, q(-1))
        self.assertEqual(form(one, b * q(2)).numerator, q(5))

    def test_series(self):
        self.assertEqual(FormValue(q(1)).series(12), {1: 1, 5: 2, 9: 3})
        self.assertEqual(FormValue(q(4) + 1).series(8), {0: 1, 4: 3, 8: 5})
        self.assertEqual(str(form(b, b)), "(1 + q^4)/(1 - q^4)^2")
        self.assertEqual(str(trace(c)), "0")


class TestExpressions(TestCase):
    def test_values(self):
        self.assertEqual(evaluate("b*b"), b * b)
        self.assertEqual(evaluate("c*c"), one)
        self.assertEqual(evaluate("tau(q*b)"), bc * q(-1))
        self.assertEqual(evaluate("form(b, 1)"), FormValue(q(1)))
        self.assertEqual(evaluate("trace(b*c)"), FormValue(q(1)))
        self.assertEqual(evaluate("q^-1*b - 2*bc"), b * q(-1) - bc * 2)
        self.assertEqual(evaluate("q^2*trace(1)"), FormValue(q(2)))

    def test_errors(self):
        for text in ["b +", "b/c", "form(b)", "x", "trace(b)*trace(c)", "b + trace(b)", "1.5*b"]:
            with self.assertRaises(ExpressionError, msg=text):
                evaluate(text)


class TestClasses(TestCase):
    def test_summands(self):
        self.assertEqual(class_of(Summand(("Bbar",), 1)), bc * q(1))
        self.assertEqual(class_of(Summand(("U", "B"))), bc)
        self.assertEqual(class_of(Summand()), one)

    def test_square_of_B(self):
        square = class_of(Summand(("B", "B")))
        self.assertEqual(square, b * q(-1) + bc * q(1))
        leaves = sum((class_of(leaf) for leaf, _, _ in split_summand(Summand(("B", "B")))), K0Elem())
        self.assertEqual(leaves, square)

    def test_euler(self):
        self.assertEqual(euler_class(rouquier()), b - one * q(-1))
        self.assertEqual(euler_class(unit_complex()), one)
        C = tensor_complexes(rouquier(), rouquier_inv())
        self.assertEqual(euler_class(C), one)
        self.assertEqual(euler_class(reduce(C)[0]), one)

    def test_euler_of_powers(self):
        for n in range(1, 6):
            self.assertEqual(euler_class(reduce_power(n)[0]), euler_class(rouquier()) ** n, f"n={n}")
        for n in range(1, 4):
            self.assertEqual(euler_class(reduce_power(n, inverse=True)[0]), euler_class(rouquier_inv()) ** n)


class TestHomAgreement(TestCase):
    def test_closed_forms(self):
        report = check_against_hom("B", "R", 12)
        self.assertTrue(report.passed)
        self.assertEqual(report.computed, {1: 1, 5: 2, 9: 3})
        report = check_against_hom("R", "B", 12)
        self.assertTrue(report.passed)
        self.assertEqual(report.computed, {3: 1, 7: 2, 11: 3})

    def test_more_pairs(self):
        for source, target in [("R", "R"), ("R", "U"), ("B", "B"), ("B", "Bbar"), ("B*B", "R"), ("B{2}", "U*B")]:
            self.assertTrue(check_against_hom(source, target, 12).passed, f"{source} -> {target}")


Pair: TypeAlias = tuple[str, str]
Series: TypeAlias = dict[int, int]

CLOSED_FORM_CUTOFF = 17


def generate_tests(cls: object):
    """Turns inputN/outputN pairs into tests of the Hom series of inputN against the closed form outputN."""
    inputs: dict[str, Pair] = {}
    outputs: dict[str, Series] = {}
    for k, v in cls.__dict__.items():
        if k.startswith("input"):
            inputs[k.removeprefix("input")] = v  # type: ignore
        if k.startswith("output"):
            outputs[k.removeprefix("output")] = v  # type: ignore

    def test_factory(testcase: tuple[Pair, Series]):
        (source, target), expected = testcase

        def f(self: TestCase):
            report = check_against_hom(source, target, CLOSED_FORM_CUTOFF)
            self.assertEqual(report.computed, expected)
            self.assertEqual(report.expected, expected)
            self.assertTrue(report.passed)

        return f

    for k, v in inputs.items():
        setattr(cls, f"test_{k}", test_factory((v, outputs[k])))
    return cls


@generate_tests
class TestClosedForms(TestCase):
    # 1/(1-q^4)^2
    input1: Pair = ("R", "R")
    output1: Series = {0: 1, 4: 2, 8: 3, 12: 4, 16: 5}

    input2: Pair = ("R", "U")
    output2: Series = {}

    # q/(1-q^4)^2
    input3: Pair = ("B", "R")
    output3: Series = {1: 1, 5: 2, 9: 3, 13: 4, 17: 5}

    # q^3/(1-q^4)^2
    input4: Pair = ("R", "B")
    output4: Series = {3: 1, 7: 2, 11: 3, 15: 4}

    # (1+q^4)/(1-q^4)^2
    input5: Pair = ("B", "B")
    output5: Series = {0: 1, 4: 3, 8: 5, 12: 7, 16: 9}

    # 2q^2/(1-q^4)^2
    input6: Pair = ("B", "Bbar")
    output6: Series = {2: 2, 6: 4, 10: 6, 14: 8}


if __name__ == "__main__":
    unittest.main()
