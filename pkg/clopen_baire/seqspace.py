"""Finite sequences, cylinders and bounded antichain exploration on Baire space."""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Hashable, Iterator, List, Sequence, Tuple

from .errors import ComparableSequencesError, NoParentError
from .models import FinSeq


class Membership(Enum):
    """Verdict of a prefix predicate on a cylinder."""

    INSIDE = "inside"
    OUTSIDE = "outside"
    UNDECIDED = "undecided"


class Separation(Enum):
    """Verdict of a separating predicate: the cylinder lies in A, in B, or neither yet."""

    A = "A"
    B = "B"
    MIXED = "mixed"


PrefixPredicate = Callable[[FinSeq], Membership]
Separator = Callable[[FinSeq], Separation]


def parent(s: Sequence[int]) -> FinSeq:
    if not s:
        raise NoParentError("the empty sequence has no parent")
    return tuple(s[:-1])


def is_prefix(s: Sequence[int], t: Sequence[int]) -> bool:
    """True if s is an initial segment of t (s may equal t)."""
    return len(s) <= len(t) and tuple(t[: len(s)]) == tuple(s)


def comparable(s: Sequence[int], t: Sequence[int]) -> bool:
    return is_prefix(s, t) or is_prefix(t, s)


def split_level(s: Sequence[int], t: Sequence[int]) -> int:
    """Least n with s|n != t|n."""
    for index, (a, b) in enumerate(zip(s, t)):
        if a != b:
            return index + 1
    raise ComparableSequencesError(f"{tuple(s)} and {tuple(t)} are comparable")


def sequence_key(s: Sequence[int]) -> Tuple[int, FinSeq]:
    """Canonical order on sequences: by length, then entries."""
    return len(s), tuple(s)


def sequences_of_length(branch_bound: int, length: int, base: FinSeq = ()) -> Iterator[FinSeq]:
    """All extensions of `base` of the given total length with new entries below branch_bound."""
    for tail in itertools.product(range(branch_bound), repeat=max(0, length - len(base))):
        yield base + tail


def bounded_sequences(branch_bound: int, depth_bound: int, base: FinSeq = ()) -> Iterator[FinSeq]:
    """Every extension of `base` up to length depth_bound, shortest first."""
    for length in range(len(base), depth_bound + 1):
        yield from sequences_of_length(branch_bound, length, base)


@dataclass(frozen=True)
class Antichain:
    """Minimal decided prefixes found by a bounded exploration.

    `tags` holds the verdict each member was found with. The exploration is
    complete only when no branch was cut by either bound.
    """

    members: Tuple[FinSeq, ...]
    tags: Tuple[Hashable, ...]
    truncated_branching: bool
    depth_exhausted: bool

    @property
    def complete(self) -> bool:
        return not (self.truncated_branching or self.depth_exhausted)

    def __iter__(self) -> Iterator[FinSeq]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, s: object) -> bool:
        return s in self.members

    def covers(self, s: Sequence[int]) -> bool:
        return any(is_prefix(member, s) for member in self.members)

    def tagged(self, tag: Hashable) -> Tuple[FinSeq, ...]:
        return tuple(member for member, member_tag in zip(self.members, self.tags) if member_tag == tag)


def minimal_decided(
    decide: Callable[[FinSeq], Hashable],
    is_final: Callable[[Hashable], bool],
    is_dead: Callable[[Hashable], bool],
    branch_bound: int,
    depth_bound: int,
    root: FinSeq = (),
) -> Antichain:
    """Explore the tree below `root` and collect minimal prefixes with a final verdict.

    Dead verdicts prune their subtree without being recorded. Nodes of length
    depth_bound that are still open mark the result as depth-exhausted.
    """
    found: List[Tuple[FinSeq, Hashable]] = []
    truncated_branching = False
    depth_exhausted = False
    stack = [tuple(root)]
    while stack:
        s = stack.pop()
        verdict = decide(s)
        if is_final(verdict):
            found.append((s, verdict))
            continue
        if is_dead(verdict):
            continue
        if len(s) >= depth_bound:
            depth_exhausted = True
            continue
        truncated_branching = True
        stack.extend(s + (i,) for i in reversed(range(branch_bound)))
    found.sort(key=lambda item: sequence_key(item[0]))
    return Antichain(
        members=tuple(s for s, _ in found),
        tags=tuple(tag for _, tag in found),
        truncated_branching=truncated_branching,
        depth_exhausted=depth_exhausted,
    )


def decompose_open(predicate: PrefixPredicate, branch_bound: int, depth_bound: int) -> Antichain:
    """Minimal INSIDE prefixes of a clopen set within the bounded universe."""
    return minimal_decided(
        predicate,
        is_final=lambda verdict: verdict is Membership.INSIDE,
        is_dead=lambda verdict: verdict is Membership.OUTSIDE,
        branch_bound=branch_bound,
        depth_bound=depth_bound,
    )


def sigma_antichain(separator: Separator, branch_bound: int, depth_bound: int) -> Antichain:
    """Minimal sequences whose cylinder is purely on the A side or purely on the B side."""
    return minimal_decided(
        separator,
        is_final=lambda verdict: verdict is not Separation.MIXED,
        is_dead=lambda verdict: False,
        branch_bound=branch_bound,
        depth_bound=depth_bound,
    )


def pairwise_incomparable(members: Sequence[FinSeq]) -> bool:
    return all(not comparable(a, b) for a, b in itertools.combinations(members, 2))
