import unittest
from unittest import TestCase

from bimod import Morphism, chain, is_isomorphic, shift, vec_ratio, vec_scale
from calculus import B, named
from complexes import (
    Complex,
    Summand,
    decompose,
    expected_shape,
    gaussian_eliminate,
    matches_shape,
    parse_word,
    reduce,
    reduce_power,
    rouquier,
    rouquier_inv,
    split_summand,
    tensor_complexes,
    unit_complex,
)
from errors import ExpressionError, PivotError, UnknownSummandError
from models import ShapeEntry
from skewpoly import one


def _shape(C: Complex) -> list[tuple[int, str, int]]:
    return [(e.degree, e.label, e.shift) for e in C.shape()]


class TestWords(TestCase):
    def test_parse(self):
        self.assertEqual(parse_word("B"), Summand(("B",)))
        self.assertEqual(parse_word("B*Bbar{2}"), Summand(("B", "Bbar"), 2))
        self.assertEqual(parse_word("R{-1}"), Summand((), -1))
        self.assertEqual(parse_word("U{1} * B{-2}"), Summand(("U", "B"), -1))
        self.assertEqual(str(parse_word("Bbar{1}")), "Bbar{1}")

    def test_bad_words(self):
        with self.assertRaises(UnknownSummandError):
            parse_word("C")
        for text in ["", "B{", "B*", "B{x}"]:
            with self.assertRaises(ExpressionError):
                parse_word(text)


class TestRouquier(TestCase):
    def test_complexes(self):
        C = rouquier()
        self.assertEqual(C.terms, {0: [Summand(("B",))], 1: [Summand((), -1)]})
        self.assertEqual(C.block(0, 0, 0), named("m"))
        self.assertEqual(C.verify(), [])
        D = rouquier_inv()
        self.assertEqual(D.terms, {-1: [Summand((), 1)], 0: [Summand(("Bbar",))]})
        self.assertEqual(D.verify(), [])

    def test_tensor_shape(self):
        C = tensor_complexes(rouquier(), rouquier_inv())
        self.assertEqual(C.degrees(), [-1, 0, 1])
        self.assertEqual(C.terms[-1], [Summand(("B",), 1)])
        self.assertEqual(C.terms[0], [Summand(("B", "Bbar")), Summand()])
        self.assertEqual(C.terms[1], [Summand(("Bbar",), -1)])
        self.assertIsNone(C.check_d_squared())
        self.assertEqual(C.verify(), [])

    def test_triple_tensor(self):
        C = tensor_complexes(tensor_complexes(rouquier(), rouquier_inv()), rouquier())
        self.assertIsNone(C.check_d_squared())
        self.assertIsNone(decompose(C).check_d_squared())

    def test_unit(self):
        C = tensor_complexes(unit_complex(), rouquier())
        self.assertEqual(C.terms, rouquier().terms)
        self.assertEqual(C.block(0, 0, 0), rouquier().block(0, 0, 0))
        D = tensor_complexes(rouquier_inv(), unit_complex())
        self.assertEqual(D.terms, rouquier_inv().terms)


class TestDecompose(TestCase):
    def test_split_BB(self):
        leaves = split_summand(Summand(("B", "B")))
        self.assertEqual([leaf for leaf, _, _ in leaves], [Summand(("B",), -1), Summand(("Bbar",), 1)])
        for leaf, incl, proj in leaves:
            self.assertEqual(incl.source.degrees, leaf.obj.degrees)
            self.assertEqual(proj.target.degrees, leaf.obj.degrees)

    def test_split_long_word(self):
        leaves = split_summand(Summand(("B", "B", "B")))
        self.assertEqual(sum(len(leaf.obj) for leaf, _, _ in leaves), 8)
        for leaf, incl, proj in leaves:
            self.assertEqual(chain(incl, proj), Morphism.identity(leaf.obj))

    def test_canonical_summands_stay(self):
        for s in [Summand(("B",)), Summand(("U",), 2), Summand()]:
            leaves = split_summand(s)
            self.assertEqual(len(leaves), 1)
            self.assertEqual(leaves[0][0], s)


class TestReduce(TestCase):
    def test_inverse_on_the_right(self):
        C, trace = reduce(tensor_complexes(rouquier(), rouquier_inv()), check=True)
        self.assertEqual(_shape(C), [(0, "R", 0)])
        self.assertTrue(trace.checked_every_step)
        self.assertTrue(trace.steps)

    def test_inverse_on_the_left(self):
        C, _ = reduce(tensor_complexes(rouquier_inv(), rouquier()), check=True)
        self.assertEqual(_shape(C), [(0, "R", 0)])

    def test_non_unit_pivot(self):
        zero = Complex({0: [Summand(("B",))], 1: [Summand(("B",))]}, {0: {(0, 0): Morphism.zero(B, B)}})
        with self.assertRaises(PivotError):
            gaussian_eliminate(zero, 0, 0, 0)
        C = decompose(rouquier())
        with self.assertRaises(PivotError):
            gaussian_eliminate(C, 0, 0, 0)
        with self.assertRaises(PivotError):
            gaussian_eliminate(C, 5, 0, 0)

    def test_powers(self):
        for n in range(1, 6):
            C, _ = reduce_power(n)
            self.assertEqual(len(C.degrees()), n + 1, f"n={n}")
            report = matches_shape(C, expected_shape(n), check_images=n in (2, 3))
            self.assertTrue(report.passed, f"n={n}: {report.reason}")
            self.assertEqual(C.verify(), [])

    def test_inverse_powers(self):
        for n in range(1, 4):
            C, _ = reduce_power(n, inverse=True)
            report = matches_shape(C, expected_shape(n, inverse=True), check_images=n in (2, 3))
            self.assertTrue(report.passed, f"n={n}: {report.reason}")

    def test_stated_shapes(self):
        self.assertEqual(
            [(e.degree, e.label, e.shift) for e in expected_shape(2)], [(0, "Bbar", 1), (1, "B", -1), (2, "R", -2)]
        )
        self.assertEqual(
            [(e.degree, e.label, e.shift) for e in expected_shape(3)],
            [(0, "B", 2), (1, "Bbar", 0), (2, "B", -2), (3, "R", -3)],
        )
        self.assertEqual(
            [(e.degree, e.label, e.shift) for e in expected_shape(2, inverse=True)],
            [(-2, "R", 2), (-1, "Bbar", 1), (0, "B", -1)],
        )

    def test_square_text(self):
        C, _ = reduce_power(2)
        self.assertEqual(str(C), "Bbar{1} → B{-1} → R{-2}")

    def test_shifted_descriptor_fails(self):
        C, _ = reduce_power(3)
        wrong = [ShapeEntry(degree=e.degree, label=e.label, shift=e.shift + 2) for e in expected_shape(3)]
        self.assertFalse(matches_shape(C, wrong).passed)
        self.assertFalse(matches_shape(C, expected_shape(2)).passed)

    def test_generator_images(self):
        C, _ = reduce_power(2)
        self.assertTrue(is_isomorphic(C.terms[1][0].obj, shift(B, -1)))
        # B{-1} -> R{-2} is the multiplication map
        self.assertIsNotNone(vec_ratio(C.block(1, 0, 0).row(0), {0: one()}))
        self.assertTrue(matches_shape(C, expected_shape(2), check_images=True).passed)

    def test_extra_summand_fails(self):
        C, _ = reduce_power(2)
        terms = {n: list(ts) for n, ts in C.terms.items()}
        terms[1].append(Summand(("B",), -1))
        report = matches_shape(Complex(terms, C.diffs), expected_shape(2), check_images=False)
        self.assertFalse(report.passed)
        self.assertIn("extra B{-1}", report.reason)

    def test_whole_block_is_compared(self):
        C, _ = reduce_power(2)
        block = C.block(1, 0, 0)
        rescaled = Complex(C.terms, {**C.diffs, 1: {(0, 0): block.scale(-3)}})
        self.assertTrue(matches_shape(rescaled, expected_shape(2)).passed)
        rows = [block.row(0)] + [vec_scale(r, 2) for r in block.matrix[1:]]
        bent = Morphism(block.source, block.target, block.degree, rows)
        report = matches_shape(Complex(C.terms, {**C.diffs, 1: {(0, 0): bent}}), expected_shape(2))
        self.assertFalse(report.passed)
        self.assertIn("not the expected map", report.reason)


if __name__ == "__main__":
    unittest.main()
