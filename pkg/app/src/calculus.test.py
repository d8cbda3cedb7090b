import unittest
from unittest import TestCase

from bimod import (
    Morphism,
    compose,
    graded_hom_series,
    hom_basis,
    is_isomorphic,
    shift,
    split_idempotent,
    vec_add,
    vec_ratio,
    vec_scale,
    verify_morphism,
)
from calculus import (
    BB,
    BBAR,
    B_BBAR,
    DIAGRAMS,
    ORIENTED_DEGREES,
    B,
    R_,
    U,
    UB,
    catalog,
    compare,
    decompose_pair,
    decomposition_BB,
    idempotents_BB,
    named,
    negative_controls,
    relation_suite,
    verify_catalog,
)
from errors import UnknownMapError
from skewpoly import one, x

ONE, x1, x2 = one(), x(1), x(2)


class TestNamedMaps(TestCase):
    def test_multiplication(self):
        self.assertEqual(named("m").apply(B.element(ONE, x2)), {0: x2})
        self.assertEqual(named("m").apply(B.element(x1, x2)), {0: x1 * x2})

    def test_dot(self):
        image = named("delta").apply({0: ONE})
        self.assertEqual(image, vec_add(B.element(ONE, x2), B.element(x2, ONE), -1))
        self.assertEqual(image, vec_add(B.element(ONE, x1), B.element(x1, ONE), -1))

    def test_merge(self):
        self.assertEqual(named("merge").apply(BB.element(ONE, x1, ONE, ONE)), UB.element(ONE, ONE, ONE))
        self.assertEqual(named("merge").apply(BB.element(ONE, ONE, ONE, ONE)), {})

    def test_id_m(self):
        self.assertEqual(named("id_m").apply(BB.element(ONE, ONE, ONE, ONE)), B.element(ONE, ONE))

    def test_unknown(self):
        with self.assertRaises(UnknownMapError):
            named("no_such_map")

    def test_cached(self):
        self.assertIs(named("split"), named("split"))

    def test_catalog_verifies(self):
        reports = verify_catalog()
        self.assertEqual(len(reports), len(catalog()))
        for r in reports:
            self.assertTrue(r.passed, f"{r.name}: {r.reason}")

    def test_dot_then_multiplication_vanishes(self):
        self.assertTrue(compose(named("delta"), named("m")).is_zero())


class TestHomSpaces(TestCase):
    def test_multiplication_spans(self):
        maps = hom_basis(B, shift(R_, -1), 0)
        self.assertEqual(len(maps), 1)
        self.assertIsNotNone(vec_ratio(maps[0].row(0), named("m").row(0)))

    def test_endomorphisms_are_scalars(self):
        self.assertEqual(len(hom_basis(B, B, 0)), 1)
        self.assertEqual(len(hom_basis(BBAR, BBAR, 0)), 1)

    def test_no_maps_into_transposition(self):
        for d in range(-2, 13):
            self.assertEqual(hom_basis(R_, U, d), [])

    def test_closed_forms(self):
        self.assertEqual(graded_hom_series(R_, R_, 12).dims, {0: 1, 4: 2, 8: 3, 12: 4})
        self.assertEqual(graded_hom_series(B, R_, 9).dims, {1: 1, 5: 2, 9: 3})
        self.assertEqual(graded_hom_series(R_, B, 11).dims, {3: 1, 7: 2, 11: 3})
        self.assertEqual(graded_hom_series(B, B, 8).dims, {0: 1, 4: 3, 8: 5})
        self.assertEqual(graded_hom_series(B, BBAR, 6).dims, {2: 2, 6: 4})

    def test_fake_map_fails(self):
        fake = Morphism(B, shift(R_, -1), 2, [{0: x1}, {0: x1 * x1}])
        report = verify_morphism(fake)
        self.assertFalse(report.passed)
        self.assertIsNotNone(report.witness)


class TestIdempotents(TestCase):
    def test_sum_is_identity(self):
        e1, e2 = idempotents_BB()
        v = BB.element(ONE, x1, ONE, ONE)
        self.assertEqual((e1 + e2).apply(v), v)
        self.assertEqual(e1 + e2, Morphism.identity(BB))

    def test_orthogonal(self):
        e1, e2 = idempotents_BB()
        self.assertEqual(compose(e1, e1), e1)
        self.assertEqual(compose(e2, e2), e2)
        self.assertTrue(compose(e1, e2).is_zero())
        self.assertTrue(compose(e2, e1).is_zero())

    def test_split_summands(self):
        e1, e2 = idempotents_BB()
        first, incl, proj = split_idempotent(e1)
        self.assertTrue(is_isomorphic(first, shift(B, -1)))
        self.assertEqual(compose(incl, proj), Morphism.identity(first))
        second, incl, proj = split_idempotent(e2)
        self.assertTrue(is_isomorphic(second, shift(BBAR, 1)))
        self.assertEqual(compose(incl, proj), Morphism.identity(second))

    def test_identity_splits_to_itself(self):
        M, incl, proj = split_idempotent(Morphism.identity(B))
        self.assertIs(M, B)

    def test_decomposition_pieces(self):
        pieces = decomposition_BB()
        self.assertEqual([(p.label, p.shift) for p in pieces], [("B", -1), ("Bbar", 1)])
        for p in pieces:
            self.assertEqual(compose(p.incl, p.proj), Morphism.identity(p.incl.source))

    def test_pairs_cover_every_label(self):
        for left in ("U", "B", "Bbar"):
            for right in ("U", "B", "Bbar"):
                pieces = decompose_pair(left, right)
                self.assertTrue(pieces, f"{left}*{right}")
                total = sum((compose(p.proj, p.incl) for p in pieces[1:]), compose(pieces[0].proj, pieces[0].incl))
                self.assertEqual(total, Morphism.identity(pieces[0].proj.source), f"{left}*{right}")

    def test_second_degree_two_maps(self):
        self.assertFalse(named("extra_deg2").is_zero())
        self.assertEqual(len(hom_basis(BBAR, B, 2)), 2)


class TestRelations(TestCase):
    def test_suite_passes(self):
        for r in relation_suite():
            self.assertTrue(r.passed, f"{r.name}: {r.lhs} = {r.rhs}, witness {r.witness}")

    def test_negative_controls_fail(self):
        controls = negative_controls()
        self.assertEqual(len(controls), 3)
        for r in controls:
            self.assertFalse(r.passed, r.name)

    def test_compare_reports_witness(self):
        m = named("m")
        report = compare("scaled", "2m", "m", m.scale(2), m)
        self.assertFalse(report.passed)
        self.assertEqual(report.status, "FAIL")
        self.assertEqual(report.witness.row, 0)


class TestOrientedCalculus(TestCase):
    def test_degree_table(self):
        self.assertEqual(len(ORIENTED_DEGREES), 12)
        self.assertEqual(sorted(ORIENTED_DEGREES.values()), [-1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1])
        for ident, degree in ORIENTED_DEGREES.items():
            self.assertEqual(named(ident).degree, degree, ident)

    def test_every_diagram_names_a_map(self):
        for picture, ident in DIAGRAMS.items():
            self.assertIn(ident, catalog(), picture)
            self.assertTrue(verify_morphism(named(ident)).passed, picture)

    def test_down_dot(self):
        self.assertEqual(named("m_bar").apply(BBAR.element(ONE, ONE, ONE)), U.element(ONE))
        self.assertEqual(named("m_bar").apply(BBAR.element(ONE, ONE, x1)), U.element(-x2))

    def test_reversal_vertices_are_inverse(self):
        for there, back, obj in (("b_ubbar", "ubbar_b", B), ("b_bbaru", "bbaru_b", B)):
            self.assertEqual(compose(named(there), named(back)), Morphism.identity(obj), there)

    def test_vertices_on_generators(self):
        self.assertEqual(named("vertex_out").apply(BBAR.element(ONE, ONE, x1)), B_BBAR.element(ONE, ONE, ONE, ONE, x1))
        merged = named("vertex_in").apply(B_BBAR.element(ONE, x1, ONE, ONE, ONE))
        self.assertEqual(merged, vec_scale(B.element(ONE, ONE), -1))
        self.assertEqual(named("vertex_in").apply(B_BBAR.element(ONE, ONE, ONE, ONE, ONE)), {})


class TestRouquierSplitting(TestCase):
    def test_cup_is_not_built_from_the_differentials(self):
        d2, d3, j = named("d2"), named("d3"), named("j")
        self.assertEqual(j, -named("beta3"))
        self.assertEqual(compose(j, d3), d2)
        self.assertNotEqual(compose(-j, d3), d2)

    def test_d3prime_kills_the_image_of_d1(self):
        self.assertTrue(compose(named("d1"), named("d3prime")).is_zero())
        self.assertFalse(compose(named("d1"), named("d3")).is_zero())

    def test_d3prime_on_generators(self):
        d3prime = named("d3prime")
        self.assertEqual(d3prime.apply(B_BBAR.element(ONE, ONE, ONE, ONE, ONE)), BBAR.element(ONE, ONE, ONE))
        self.assertEqual(d3prime.apply(B_BBAR.element(ONE, x1, ONE, ONE, ONE)), BBAR.element(ONE, ONE, -x2))

    def test_splitting_relations_are_evaluated(self):
        names = {r.name for r in relation_suite()}
        expected = ["h0 d1 = id", "d2 = d3 j", "d3 h3 = id", "h0 h3 = 0"]
        expected += ["d3' d1 = 0", "d3' h3 = id", "d1 h0 + h3 d3' = id"]
        for name in expected:
            self.assertIn(name, names)


if __name__ == "__main__":
    unittest.main()
