"""Tests for ordinal notations."""

import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from clopen_baire.errors import DomainViolation, EmptyDomainError, EnumerationExhausted, OrdinalSyntaxError
from clopen_baire.models import Comparison, Verdict
from clopen_baire.ordinal import (
    OMEGA,
    ZERO,
    Ordinal,
    cmp_ordinal,
    descent_certificate,
    enumerate_below,
    enumeration_index,
    enumeration_window,
    format_label,
    format_ordinal,
    parse_label,
    parse_ordinal,
    triangle_lt,
)

exponents = st.one_of(st.integers(0, 4).map(Ordinal.finite), st.just(OMEGA), st.just(parse_ordinal("w+1")))
ordinals = st.dictionaries(exponents, st.integers(1, 5), max_size=4).map(
    lambda terms: Ordinal(tuple(sorted(terms.items(), key=lambda item: item[0], reverse=True)))
)


class TestOrdinalText(unittest.TestCase):
    """Test parsing and formatting."""

    def test_parse_and_format_roundtrip(self):
        for text in ("0", "7", "w", "w+5", "w^2*3+w+5", "w^w", "w^(w+1)", "w^(w*2+3)*4+w^3+1"):
            self.assertEqual(format_ordinal(parse_ordinal(text)), text)

    def test_parse_builds_cnf_terms(self):
        value = parse_ordinal("w^2*3+w+5")
        self.assertEqual(
            value.terms,
            ((Ordinal.finite(2), 3), (Ordinal.finite(1), 1), (ZERO, 5)),
        )

    def test_parse_accepts_omega_letter_and_spaces(self):
        self.assertEqual(parse_ordinal(" ω ^ 2 + 1 "), parse_ordinal("w^2+1"))

    def test_non_cnf_sum_reports_position(self):
        with self.assertRaises(OrdinalSyntaxError) as caught:
            parse_ordinal("w+w^2")
        self.assertEqual(caught.exception.position, 2)

    def test_rejects_malformed_text(self):
        for text in ("", "w+0", "w^w^2", "w*0", "3x", "w^(w"):
            with self.subTest(text=text):
                with self.assertRaises(OrdinalSyntaxError):
                    parse_ordinal(text)

    def test_labels(self):
        self.assertIs(parse_label("in"), Verdict.IN)
        self.assertIs(parse_label(" OUT "), Verdict.OUT)
        self.assertEqual(parse_label("w+2"), parse_ordinal("w+2"))
        self.assertEqual(format_label(Verdict.IN), "in")
        self.assertEqual(format_label(parse_ordinal("w^2")), "w^2")

    @settings(max_examples=100, deadline=None)
    @given(ordinals)
    def test_text_roundtrip_property(self, value):
        self.assertEqual(parse_ordinal(format_ordinal(value)), value)


class TestOrdinalOrder(unittest.TestCase):
    """Test comparison and structure."""

    def test_chain_is_increasing(self):
        chain = [parse_ordinal(text) for text in ("0", "5", "w", "w+1", "w*2", "w^2", "w^2+w*7", "w^w", "w^(w+1)")]
        for smaller, larger in zip(chain, chain[1:]):
            self.assertLess(smaller, larger)
            self.assertIs(cmp_ordinal(larger, smaller), Comparison.GT)

    def test_successor_and_limit(self):
        self.assertTrue(parse_ordinal("w+3").is_successor)
        self.assertTrue(parse_ordinal("w^2+w").is_limit)
        self.assertFalse(ZERO.is_limit)
        self.assertFalse(ZERO.is_successor)
        self.assertEqual(parse_ordinal("w+3").predecessor(), parse_ordinal("w+2"))
        self.assertEqual(parse_ordinal("w+1").predecessor(), OMEGA)
        with self.assertRaises(ValueError):
            OMEGA.predecessor()

    def test_finite_values(self):
        self.assertEqual(Ordinal.finite(4).finite_value, 4)
        self.assertEqual(ZERO.finite_value, 0)
        with self.assertRaises(ValueError):
            OMEGA.finite_value

    def test_constructor_rejects_non_cnf(self):
        with self.assertRaises(ValueError):
            Ordinal(((ZERO, 1), (Ordinal.finite(1), 1)))
        with self.assertRaises(ValueError):
            Ordinal(((ZERO, 0),))

    def test_triangle_order(self):
        self.assertTrue(triangle_lt(Verdict.IN, ZERO))
        self.assertTrue(triangle_lt(Verdict.OUT, OMEGA))
        self.assertTrue(triangle_lt(Verdict.IN, Verdict.IN))
        self.assertFalse(triangle_lt(Verdict.IN, Verdict.OUT))
        self.assertFalse(triangle_lt(ZERO, Verdict.IN))
        self.assertTrue(triangle_lt(Ordinal.finite(3), OMEGA))

    def test_verdict_decided(self):
        self.assertTrue(Verdict.IN.decided)
        self.assertFalse(Verdict.UNDECIDED.decided)

    @settings(max_examples=100, deadline=None)
    @given(ordinals, ordinals, ordinals)
    def test_order_laws(self, a, b, c):
        self.assertEqual(cmp_ordinal(a, b), -cmp_ordinal(b, a))
        if a < b and b < c:
            self.assertLess(a, c)
        self.assertEqual(a == b, cmp_ordinal(a, b) is Comparison.EQ)


class TestEnumeration(unittest.TestCase):
    """Test enumeration below a notation."""

    def test_below_omega_is_the_naturals(self):
        self.assertEqual([enumerate_below(OMEGA, k) for k in range(10)], [Ordinal.finite(k) for k in range(10)])

    def test_finite_enumeration_runs_out(self):
        self.assertEqual(enumeration_window(Ordinal.finite(5), 31), tuple(Ordinal.finite(k) for k in range(5)))
        with self.assertRaises(EnumerationExhausted):
            enumerate_below(Ordinal.finite(5), 5)

    def test_nothing_below_zero(self):
        with self.assertRaises(EmptyDomainError):
            enumerate_below(ZERO, 0)
        self.assertEqual(enumeration_window(ZERO, 5), ())

    def test_index_inverts_enumeration(self):
        for text in ("w", "w*2", "w^2", "w^3+w"):
            alpha = parse_ordinal(text)
            seen = set()
            for k in range(120):
                beta = enumerate_below(alpha, k)
                self.assertLess(beta, alpha)
                self.assertEqual(enumeration_index(alpha, beta), k)
                seen.add(beta)
            self.assertEqual(len(seen), 120)

    def test_index_outside_domain(self):
        with self.assertRaises(DomainViolation):
            enumeration_index(OMEGA, OMEGA)

    def test_window_below_w_squared_reaches_omega(self):
        window = enumeration_window(parse_ordinal("w^2"), 8)
        self.assertIn(OMEGA, window)
        self.assertEqual(window[0], ZERO)

    def test_descent_certificate(self):
        self.assertEqual(descent_certificate(Ordinal.finite(4), 31), 4)
        self.assertEqual(descent_certificate(OMEGA, 31), 31)


if __name__ == "__main__":
    unittest.main()
