"""Shared data models for Clopen Baire."""

from enum import Enum, IntEnum
from typing import Tuple

# A finite sequence of naturals, an element of the tree of finite sequences.
FinSeq = Tuple[int, ...]

# Two same-length sequences, the basic rectangle [s] x [t].
Pair = Tuple[FinSeq, FinSeq]


class Comparison(IntEnum):
    """Result of a three-way comparison."""

    LT = -1
    EQ = 0
    GT = 1


class Verdict(Enum):
    """Edge verdict on a rectangle or a pair of points.

    IN and OUT double as the two non-ordinal labels of an alpha-tree.
    """

    IN = "in"
    OUT = "out"
    UNDECIDED = "undecided"

    @property
    def decided(self) -> bool:
        return self is not Verdict.UNDECIDED
