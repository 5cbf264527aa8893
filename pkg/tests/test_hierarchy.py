"""Tests for the descent relation and E_alpha."""

import itertools
import random
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from clopen_baire.clopen import Point, decide_pair
from clopen_baire.errors import DomainViolation
from clopen_baire.hierarchy import (
    DescentStep,
    DescentTrace,
    GammaCode,
    Region,
    cantor_pair,
    cantor_unpair,
    check_trace,
    e_alpha,
    p_alpha,
    r_alpha_decide,
    r_alpha_rect,
    random_gamma_spec,
    random_point_spec,
    region_of,
    s_alpha,
    witness_neighbor,
)
from clopen_baire.models import Verdict
from clopen_baire.ordinal import OMEGA, Ordinal, parse_ordinal
from clopen_baire.pointspec import PointSpec, parse_point_spec

ALPHAS = [parse_ordinal(text) for text in ("w", "w*2", "w^2", "w^3+w")]


def run(alpha_text, x_text, y_text):
    return r_alpha_decide(
        parse_ordinal(alpha_text),
        Point.from_spec(parse_point_spec(x_text)),
        Point.from_spec(parse_point_spec(y_text)),
    )


class TestGammaCode(unittest.TestCase):
    """Test the Gamma coding of naturals."""

    def test_cantor_pairing(self):
        self.assertEqual(cantor_pair(0, 0), 0)
        self.assertEqual(cantor_unpair(1), (1, 0))
        self.assertEqual(cantor_unpair(2), (0, 1))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10**6))
    def test_unpair_inverts_pair(self, z):
        self.assertEqual(cantor_pair(*cantor_unpair(z)), z)

    def test_small_codes(self):
        code = GammaCode(OMEGA)
        self.assertEqual(code.decode(0), (0, Verdict.IN))
        self.assertEqual(code.decode(1), (1, Verdict.IN))
        self.assertEqual(code.decode(2), (0, Verdict.OUT))

    def test_encode_decode(self):
        code = GammaCode(parse_ordinal("w^2"))
        for entry in ((3, Verdict.OUT), (0, parse_ordinal("w+4")), (7, Ordinal.finite(2))):
            self.assertEqual(code.decode(code.encode(entry)), entry)

    def test_requires_limit(self):
        with self.assertRaises(DomainViolation):
            GammaCode(Ordinal.finite(3))
        with self.assertRaises(DomainViolation):
            GammaCode(OMEGA).decode(-1)


class TestDescent(unittest.TestCase):
    """Test the descent procedure."""

    def test_first_label_in(self):
        trace = run("w", "0,(1)*", "(1|in)*")
        self.assertIs(trace.verdict, Verdict.IN)
        self.assertEqual(trace.i0, 0)
        self.assertEqual(trace.steps, (DescentStep(0, 1, Verdict.IN),))
        self.assertEqual((trace.x_depth, trace.y_depth), (1, 1))

    def test_descending_chain_then_in(self):
        trace = run("w", "0,1,(2)*", "(1|3),(2|1),(0|in)*")
        self.assertIs(trace.verdict, Verdict.IN)
        self.assertEqual(trace.i0, 2)
        self.assertEqual([step.label for step in trace.steps], [Ordinal.finite(3), Ordinal.finite(1), Verdict.IN])
        self.assertEqual((trace.x_depth, trace.y_depth), (3, 3))
        self.assertEqual(check_trace(trace), [])

    def test_failed_descent_is_out(self):
        trace = run("w", "(0)*", "(0|3)*")
        self.assertIs(trace.verdict, Verdict.OUT)
        self.assertEqual(trace.i0, 1)
        self.assertEqual(check_trace(trace), [])

    def test_label_outside_alpha(self):
        with self.assertRaises(DomainViolation):
            run("w", "(0)*", "(0|w)*")

    def test_check_trace_flags_wrong_verdict(self):
        trace = DescentTrace(OMEGA, (DescentStep(0, 0, Verdict.OUT),), 0, Verdict.IN, 1, 1)
        self.assertTrue(check_trace(trace))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.sampled_from(ALPHAS))
    def test_random_traces_are_sound_and_determined(self, seed, alpha):
        rng = random.Random(seed)
        x = Point.from_spec(random_point_spec(rng, 6, rng.randint(1, 6), rng.randint(1, 2)))
        y = Point.from_spec(random_gamma_spec(rng, alpha, 31, 6, rng.randint(1, 6), rng.randint(1, 2)))
        trace = r_alpha_decide(alpha, x, y)
        self.assertEqual(check_trace(trace), [])
        x2 = Point.from_spec(PointSpec(prefix=x.prefix(trace.x_depth), period=(rng.randrange(9),)))
        y2 = Point.from_spec(PointSpec(prefix=y.prefix(trace.y_depth), period=((rng.randrange(9), Verdict.OUT),)))
        self.assertIs(r_alpha_decide(alpha, x2, y2).verdict, trace.verdict)


class TestRectangles(unittest.TestCase):
    """Test the procedure on finite prefixes."""

    def test_pending_on_t(self):
        state = r_alpha_rect(OMEGA, (0, 1), ((1, Ordinal.finite(5)),))
        self.assertIs(state.verdict, Verdict.UNDECIDED)
        self.assertEqual(state.pending_m, 1)
        self.assertEqual(state.last_label, Ordinal.finite(5))
        self.assertTrue(state.claim_form)

    def test_pending_on_s(self):
        state = r_alpha_rect(OMEGA, (0,), ((3, Ordinal.finite(5)),))
        self.assertEqual(state.pending_n, 3)
        self.assertFalse(state.claim_form)
        self.assertEqual(r_alpha_rect(OMEGA, (), ()).pending_n, 0)

    def test_integer_entries_are_codes(self):
        code = GammaCode(OMEGA)
        coded = r_alpha_rect(OMEGA, (0, 1), (code.encode((1, Ordinal.finite(5))),))
        self.assertEqual(coded, r_alpha_rect(OMEGA, (0, 1), ((1, Ordinal.finite(5)),)))

    def test_prefix_verdicts_agree_with_every_completion(self):
        labels = (Verdict.OUT, Ordinal.finite(1), Ordinal.finite(0))
        entries = [(pointer, label) for pointer in range(3) for label in labels]
        entries.append((0, Verdict.IN))
        filler = (0, Verdict.OUT)
        decided = 0
        for x_prefix in itertools.product(range(3), repeat=3):
            x = Point.constant_after(x_prefix)
            for y_prefix in itertools.product(entries, repeat=3):
                verdict = r_alpha_decide(OMEGA, x, Point.constant_after(y_prefix, filler)).verdict
                for i in range(4):
                    for j in range(4):
                        state = r_alpha_rect(OMEGA, x_prefix[:i], y_prefix[:j])
                        if state.verdict is not Verdict.UNDECIDED:
                            decided += 1
                            self.assertIs(state.verdict, verdict, (x_prefix[:i], y_prefix[:j]))
                self.assertIs(r_alpha_rect(OMEGA, x_prefix, y_prefix).verdict, verdict)
        self.assertGreater(decided, 0)

    def test_decided_rectangle(self):
        state = r_alpha_rect(OMEGA, (0,), ((0, Verdict.IN),))
        self.assertIs(state.verdict, Verdict.IN)


class TestGraphs(unittest.TestCase):
    """Test S_alpha, P_alpha and E_alpha."""

    def setUp(self):
        self.graph = e_alpha(OMEGA)
        self.code = GammaCode(OMEGA)

    def test_regions(self):
        self.assertIs(region_of(0), Region.C)
        self.assertIs(region_of(1), Region.D)
        self.assertIs(region_of(2), Region.C1)
        self.assertIs(region_of(9), Region.D1)
        self.assertEqual(Region.C1.side, "A")
        self.assertEqual(Region.D1.side, "B")

    def test_region_edges(self):
        self.assertIs(self.graph.decide_rect((0,), (3,)), Verdict.IN)
        self.assertIs(self.graph.decide_rect((3,), (0,)), Verdict.IN)
        self.assertIs(self.graph.decide_rect((2,), (1,)), Verdict.IN)
        self.assertIs(self.graph.decide_rect((0,), (2,)), Verdict.OUT)
        self.assertIs(self.graph.decide_rect((1,), (4,)), Verdict.OUT)
        self.assertIs(self.graph.decide_rect((0,), (1,)), Verdict.UNDECIDED)

    def test_directed_relations(self):
        self.assertIs(s_alpha(OMEGA).decide_rect((1,), (0,)), Verdict.OUT)
        self.assertIs(p_alpha(OMEGA).decide_rect((2,), (1,)), Verdict.IN)
        self.assertIs(p_alpha(OMEGA).decide_rect((1,), (2,)), Verdict.OUT)
        self.assertIs(p_alpha(OMEGA).decide_rect((0,), (4,)), Verdict.IN)

    def test_c_by_d_follows_descent(self):
        s = (0, 0)
        t = (1, self.code.encode((0, Verdict.IN)))
        self.assertIs(self.graph.decide_rect(s, t), Verdict.IN)
        self.assertIs(self.graph.decide_rect(t, s), Verdict.IN)

    def test_state_bound(self):
        filler = self.code.encode((0, Verdict.OUT))
        s = (0, 2, 3, 0)
        t = (1, filler, filler, self.code.encode((1, Ordinal.finite(4))))
        self.assertEqual(self.graph.state_bound(s, t), Ordinal.finite(4))
        self.assertEqual(self.graph.state_bound(t, s), Ordinal.finite(4))
        self.assertIsNone(self.graph.state_bound((0,), (3,)))

    def test_witness_neighbor_in_every_region(self):
        for first in (0, 1, 2, 3, 8):
            with self.subTest(first=first):
                x = Point.constant_after((first, 5, 1))
                y = witness_neighbor(OMEGA, x, fuel=8, graph=self.graph)
                self.assertIs(decide_pair(self.graph, x, y, 8).verdict, Verdict.IN)

    def test_same_side_is_never_in(self):
        for s, t in (((0, 4), (2, 1)), ((1, 3), (5, 0)), ((0, 1), (0, 2)), ((3,), (7,))):
            self.assertIsNot(self.graph.decide_rect(s, t), Verdict.IN)


if __name__ == "__main__":
    unittest.main()
