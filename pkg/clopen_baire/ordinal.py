"""Ordinal notations below epsilon_0 and the labels built on them.

An ordinal is written in Cantor normal form as a tuple of
``(exponent, coefficient)`` terms with strictly decreasing exponents; the
empty tuple is 0. Labels are either ordinals or one of ``Verdict.IN`` /
``Verdict.OUT``.

Text grammar::

    sum      := term ('+' term)*          (exponents strictly decreasing)
    term     := INT | 'w' ['^' exponent] ['*' INT]
    exponent := INT | 'w' | '(' sum ')'

``w`` may also be written ``ω``.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, Optional, Tuple, Union

from .errors import (
    DomainViolation,
    EmptyDomainError,
    EnumerationExhausted,
    OrdinalSyntaxError,
)
from .models import Comparison, Verdict

Term = Tuple["Ordinal", int]


@dataclass(frozen=True)
class Ordinal:
    """A Cantor-normal-form notation for an ordinal below epsilon_0."""

    terms: Tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        previous: Optional[Ordinal] = None
        for exponent, coefficient in self.terms:
            if not isinstance(exponent, Ordinal):
                raise ValueError(f"exponent {exponent!r} is not an Ordinal")
            if isinstance(coefficient, bool) or not isinstance(coefficient, int) or coefficient < 1:
                raise ValueError(f"coefficient {coefficient!r} must be a positive integer")
            if previous is not None and not exponent < previous:
                raise ValueError("exponents must strictly decrease")
            previous = exponent

    @classmethod
    def finite(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls() if n == 0 else cls(((cls(), n),))

    @classmethod
    def omega_power(cls, exponent: "Ordinal", coefficient: int = 1) -> "Ordinal":
        return cls(((exponent, coefficient),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return all(exponent.is_zero for exponent, _ in self.terms)

    @property
    def finite_value(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    @property
    def weight(self) -> int:
        """Grading used by the enumeration: sum of exponent weight plus coefficient."""
        return sum(exponent.weight + coefficient for exponent, coefficient in self.terms)

    def predecessor(self) -> "Ordinal":
        if not self.is_successor:
            raise ValueError(f"{self} has no predecessor")
        *head, (exponent, coefficient) = self.terms
        if coefficient > 1:
            head.append((exponent, coefficient - 1))
        return Ordinal(tuple(head))

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return cmp_ordinal(self, other) is Comparison.LT

    def __le__(self, other: object) -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return cmp_ordinal(self, other) is not Comparison.GT

    def __gt__(self, other: object) -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return cmp_ordinal(self, other) is Comparison.GT

    def __ge__(self, other: object) -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return cmp_ordinal(self, other) is not Comparison.LT

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"


ZERO = Ordinal()
ONE = Ordinal.finite(1)
OMEGA = Ordinal.omega_power(ONE)

Label = Union[Ordinal, Verdict]


def cmp_ordinal(a: Ordinal, b: Ordinal) -> Comparison:
    """Compare two notations lexicographically on their CNF terms."""
    for (exp_a, coef_a), (exp_b, coef_b) in zip(a.terms, b.terms):
        by_exponent = cmp_ordinal(exp_a, exp_b)
        if by_exponent is not Comparison.EQ:
            return by_exponent
        if coef_a != coef_b:
            return Comparison.LT if coef_a < coef_b else Comparison.GT
    if len(a.terms) == len(b.terms):
        return Comparison.EQ
    return Comparison.LT if len(a.terms) < len(b.terms) else Comparison.GT


# Labels

def is_q(label: object) -> bool:
    """True for the two non-ordinal labels."""
    return label is Verdict.IN or label is Verdict.OUT


def is_label(value: object) -> bool:
    return isinstance(value, Ordinal) or is_q(value)


def triangle_lt(x: Label, y: Label) -> bool:
    """The label order: ordinals by size, IN/OUT below every ordinal and only
    related to themselves."""
    if isinstance(x, Ordinal) and isinstance(y, Ordinal):
        return x < y
    if is_q(x) and isinstance(y, Ordinal):
        return True
    if is_q(x) and is_q(y):
        return x is y
    return False


def format_label(label: Label) -> str:
    if is_q(label):
        return label.value
    if isinstance(label, Ordinal):
        return format_ordinal(label)
    raise ValueError(f"{label!r} is not a label")


def parse_label(text: str) -> Label:
    cleaned = text.strip().lower()
    if cleaned == Verdict.IN.value:
        return Verdict.IN
    if cleaned == Verdict.OUT.value:
        return Verdict.OUT
    return parse_ordinal(text)


# Enumeration below a notation

def _sequences(weight: int, bound: Optional[Ordinal], limit: Optional[Tuple[Term, ...]]) -> Iterator[Tuple[Term, ...]]:
    """Term tuples of exactly `weight`, exponents below `bound`, lexicographically
    below `limit` (no constraint when None)."""
    if weight == 0:
        if limit is None or limit:
            yield ()
        return
    if limit is not None and not limit:
        return
    for exponent_weight in range(weight):
        if bound is not None:
            candidates = _below_of_weight(bound, exponent_weight)
        elif limit is not None:
            candidates = _upto_of_weight(limit[0][0], exponent_weight)
        else:
            raise ValueError("unbounded generation needs a limit")
        for exponent in candidates:
            if limit is not None and exponent > limit[0][0]:
                continue
            for coefficient in range(1, weight - exponent_weight + 1):
                rest_limit: Optional[Tuple[Term, ...]] = None
                if limit is not None and exponent == limit[0][0]:
                    if coefficient > limit[0][1]:
                        continue
                    if coefficient == limit[0][1]:
                        rest_limit = limit[1:]
                for rest in _sequences(weight - exponent_weight - coefficient, exponent, rest_limit):
                    yield ((exponent, coefficient),) + rest


@lru_cache(maxsize=None)
def _below_of_weight(alpha: Ordinal, weight: int) -> Tuple[Ordinal, ...]:
    """Notations below `alpha` of the given weight, by term count then size."""
    found = [Ordinal(terms) for terms in _sequences(weight, None, alpha.terms)]
    found.sort(key=lambda o: (len(o.terms), o))
    return tuple(found)


def _upto_of_weight(alpha: Ordinal, weight: int) -> Tuple[Ordinal, ...]:
    found = list(_below_of_weight(alpha, weight))
    if alpha.weight == weight:
        found.append(alpha)
    return tuple(found)


@lru_cache(maxsize=None)
def _layer_positions(alpha: Ordinal, weight: int) -> Dict[Ordinal, int]:
    return {notation: index for index, notation in enumerate(_below_of_weight(alpha, weight))}


def enumerate_below(alpha: Ordinal, k: int) -> Ordinal:
    """The k-th notation below alpha.

    The enumeration lists weight 0, 1, 2, ... in turn and, inside one weight,
    orders by number of terms and then by size. Every notation below alpha
    has a finite weight, so every one of them is reached.
    """
    if alpha.is_zero:
        raise EmptyDomainError("nothing lies below 0")
    if k < 0:
        raise ValueError("enumeration index must be non-negative")
    if alpha.is_finite and k >= alpha.finite_value:
        raise EnumerationExhausted(f"only {alpha.finite_value} notations lie below {alpha}")
    weight = 0
    while True:
        layer = _below_of_weight(alpha, weight)
        if k < len(layer):
            return layer[k]
        k -= len(layer)
        weight += 1


def enumeration_index(alpha: Ordinal, beta: Ordinal) -> int:
    """Inverse of `enumerate_below`: the k with enumerate_below(alpha, k) == beta."""
    if not beta < alpha:
        raise DomainViolation(f"{beta} is not below {alpha}")
    target = beta.weight
    offset = sum(len(_below_of_weight(alpha, weight)) for weight in range(target))
    return offset + _layer_positions(alpha, target)[beta]


def enumeration_window(alpha: Ordinal, window: int) -> Tuple[Ordinal, ...]:
    """The first `window` notations below alpha (fewer when alpha is finite)."""
    if alpha.is_zero:
        return ()
    size = min(window, alpha.finite_value) if alpha.is_finite else window
    return tuple(enumerate_below(alpha, k) for k in range(size))


def descent_certificate(alpha: Ordinal, window: int) -> int:
    """Length of the longest chain alpha > x1 > x2 > ... in which every step
    picks one of the first `window` notations below the current one."""

    @lru_cache(maxsize=None)
    def longest(current: Ordinal) -> int:
        options = enumeration_window(current, window)
        if not options:
            return 0
        return 1 + max(longest(option) for option in options)

    return longest(alpha)


# Text form

def format_ordinal(ordinal: Ordinal) -> str:
    if ordinal.is_zero:
        return "0"
    return "+".join(_format_term(exponent, coefficient) for exponent, coefficient in ordinal.terms)


def _format_term(exponent: Ordinal, coefficient: int) -> str:
    if exponent.is_zero:
        return str(coefficient)
    if exponent == ONE:
        base = "w"
    elif exponent.is_finite or exponent == OMEGA:
        base = f"w^{format_ordinal(exponent)}"
    else:
        base = f"w^({format_ordinal(exponent)})"
    return base if coefficient == 1 else f"{base}*{coefficient}"


class _OrdinalParser:
    """Recursive-descent parser for the ordinal grammar."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def parse(self) -> Ordinal:
        value = self._sum()
        self._skip()
        if self.pos != len(self.text):
            raise self._error("unexpected character")
        return value

    def _error(self, message: str, position: Optional[int] = None) -> OrdinalSyntaxError:
        return OrdinalSyntaxError(message, self.text, self.pos if position is None else position)

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _sum(self) -> Ordinal:
        terms = []
        has_zero = False
        while True:
            self._skip()
            start = self.pos
            exponent, coefficient = self._term()
            if coefficient == 0:
                has_zero = True
            elif terms and not exponent < terms[-1][0]:
                raise self._error("exponents must strictly decrease (not Cantor normal form)", start)
            else:
                terms.append((exponent, coefficient))
            if has_zero and (terms or self._peek() == "+"):
                raise self._error("0 cannot appear inside a sum", start)
            if self._peek() != "+":
                break
            self.pos += 1
        return Ordinal(tuple(terms))

    def _term(self) -> Tuple[Ordinal, int]:
        char = self._peek()
        if char.isdigit():
            return ZERO, self._int()
        if char in ("w", "ω"):
            self.pos += 1
            exponent = ONE
            if self._peek() == "^":
                self.pos += 1
                exponent = self._exponent()
            coefficient = 1
            if self._peek() == "*":
                self.pos += 1
                start = self.pos
                coefficient = self._int()
                if coefficient < 1:
                    raise self._error("coefficient must be positive", start)
            return exponent, coefficient
        raise self._error("expected a number or w")

    def _exponent(self) -> Ordinal:
        char = self._peek()
        if char == "(":
            self.pos += 1
            value = self._sum()
            if self._peek() != ")":
                raise self._error("expected ')'")
            self.pos += 1
            return value
        if char.isdigit():
            return Ordinal.finite(self._int())
        if char in ("w", "ω"):
            self.pos += 1
            if self._peek() == "^":
                raise self._error("nested exponent needs parentheses")
            return OMEGA
        raise self._error("expected an exponent")

    def _int(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self._error("expected digits")
        return int(self.text[start:self.pos])


def parse_ordinal(text: str) -> Ordinal:
    """Parse ordinal text; raises OrdinalSyntaxError with the failing position."""
    return _OrdinalParser(text).parse()
