"""Alpha-trees and the incremental construction of the universal labelling.

An alpha-tree labels every pair of distinct same-level nodes with an ordinal
below alpha or with IN/OUT, so that a pair whose parents differ carries a
label strictly below (in the triangle order) the label of its parents.

The universal tree grows one fresh child per build step. Each step serves a
request triple (p, F, f): add a child t of p with L(s, t) = f(s) for s in F.
Triples come from a demand queue when one is pending and otherwise from a
fair schedule that revisits every triple of every grade infinitely often.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Deque, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import DomainViolation, HorizonExhaustedError, InvalidAlphaTreeError, MissingLabelError
from .models import FinSeq, Pair, Verdict
from .ordinal import Label, Ordinal, enumeration_window, format_label, is_label, is_q, triangle_lt
from .seqspace import sequence_key

logger = logging.getLogger(__name__)


def canonical_pair(s: FinSeq, t: FinSeq) -> Pair:
    return (s, t) if s <= t else (t, s)


class FillerPolicy(Enum):
    """How labels that were never stored are resolved."""

    NONE = "none"
    PLAIN = "plain"
    TRUE_CLOPEN = "true-clopen"


def plain_filler(s: FinSeq, t: FinSeq, parent_label: Optional[Label]) -> Label:
    if parent_label is not None and is_q(parent_label):
        return parent_label
    return Verdict.OUT


def lprime_filler(s: FinSeq, t: FinSeq, parent_label: Optional[Label]) -> Label:
    """Filler of the true-clopen variant: pairs past level 1 that share their
    first coordinate are OUT."""
    if len(s) > 1 and s[0] == t[0]:
        return Verdict.OUT
    return plain_filler(s, t, parent_label)


@dataclass
class AlphaTree:
    """A parent-closed set of nodes with labels stored per unordered pair."""

    alpha: Ordinal
    nodes: Set[FinSeq] = field(default_factory=set)
    labels: Dict[Pair, Label] = field(default_factory=dict)
    filler: FillerPolicy = FillerPolicy.NONE
    _levels: Dict[int, List[FinSeq]] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.nodes = {tuple(node) for node in self.nodes} | {()}
        self.labels = {canonical_pair(tuple(s), tuple(t)): label for (s, t), label in self.labels.items()}
        self._levels = {}
        for node in sorted(self.nodes, key=sequence_key):
            self._levels.setdefault(len(node), []).append(node)

    @property
    def depth(self) -> int:
        return max(self._levels)

    def level(self, n: int) -> List[FinSeq]:
        return sorted(self._levels.get(n, []))

    def children(self, s: FinSeq) -> List[FinSeq]:
        return [node for node in self.level(len(s) + 1) if node[:-1] == s]

    def add_node(self, node: FinSeq) -> None:
        node = tuple(node)
        if node in self.nodes:
            return
        if node[:-1] not in self.nodes:
            raise DomainViolation(f"parent of {node} is not in the tree")
        self.nodes.add(node)
        self._levels.setdefault(len(node), []).append(node)

    def set_label(self, s: FinSeq, t: FinSeq, label: Label) -> None:
        self._check_pair(s, t)
        self.labels[canonical_pair(tuple(s), tuple(t))] = label

    def explicit_label(self, s: FinSeq, t: FinSeq) -> Optional[Label]:
        return self.labels.get(canonical_pair(tuple(s), tuple(t)))

    def label(self, s: Sequence[int], t: Sequence[int]) -> Label:
        s, t = tuple(s), tuple(t)
        self._check_pair(s, t)
        return self._resolve(s, t)

    def _check_pair(self, s: FinSeq, t: FinSeq) -> None:
        if len(s) != len(t) or s == t:
            raise DomainViolation(f"{s}, {t} is not a pair of distinct same-level nodes")
        if s not in self.nodes or t not in self.nodes:
            raise DomainViolation(f"{s if s not in self.nodes else t} is not a node")

    def _resolve(self, s: FinSeq, t: FinSeq) -> Label:
        found = self.labels.get(canonical_pair(s, t))
        if found is not None:
            return found
        ps, pt = s[:-1], t[:-1]
        parent_label = None if ps == pt else self._resolve(ps, pt)
        if parent_label is not None and is_q(parent_label):
            return parent_label
        if self.filler is FillerPolicy.PLAIN:
            return plain_filler(s, t, parent_label)
        if self.filler is FillerPolicy.TRUE_CLOPEN:
            return lprime_filler(s, t, parent_label)
        raise MissingLabelError(f"no label for {s}, {t}")

    def pairs(self) -> Iterator[Pair]:
        """Every unordered pair of distinct same-level nodes, level by level."""
        for n in sorted(self._levels):
            yield from itertools.combinations(self.level(n), 2)

    def copy(self) -> "AlphaTree":
        return AlphaTree(alpha=self.alpha, nodes=set(self.nodes), labels=dict(self.labels), filler=self.filler)


@dataclass(frozen=True)
class AlphaViolation:
    kind: str
    s: FinSeq
    t: FinSeq = ()
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind} at {self.s}, {self.t}: {self.detail}"


@dataclass
class ValidationReport:
    violations: List[AlphaViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_for_violations(self) -> None:
        if self.violations:
            raise InvalidAlphaTreeError(f"{len(self.violations)} violations, first: {self.violations[0]}", self.violations)


def validate_alpha_tree(tree: AlphaTree, exhaustive: bool = False) -> ValidationReport:
    """Check structure and every stored label; with `exhaustive`, also check
    that every pair resolves to a label."""
    report = ValidationReport()
    for node in sorted(tree.nodes, key=sequence_key):
        if any(not isinstance(entry, int) or entry < 0 for entry in node):
            report.violations.append(AlphaViolation("bad-entry", node))
        if node and node[:-1] not in tree.nodes:
            report.violations.append(AlphaViolation("orphan", node))
    for (s, t), label in sorted(tree.labels.items(), key=lambda item: (sequence_key(item[0][0]), item[0][1])):
        if len(s) != len(t) or s == t or s not in tree.nodes or t not in tree.nodes:
            report.violations.append(AlphaViolation("bad-pair", s, t))
            continue
        if not is_label(label):
            report.violations.append(AlphaViolation("bad-label", s, t, repr(label)))
            continue
        if isinstance(label, Ordinal) and not label < tree.alpha:
            report.violations.append(AlphaViolation("out-of-range", s, t, format_label(label)))
        if tree.filler is FillerPolicy.TRUE_CLOPEN and len(s) > 1 and s[0] == t[0] and label is not Verdict.OUT:
            report.violations.append(AlphaViolation("true-clopen", s, t, format_label(label)))
        if s[:-1] == t[:-1]:
            continue
        try:
            parent_label = tree.label(s[:-1], t[:-1])
        except MissingLabelError:
            report.violations.append(AlphaViolation("missing", s[:-1], t[:-1]))
            continue
        if not triangle_lt(label, parent_label):
            report.violations.append(
                AlphaViolation("descent", s, t, f"{format_label(label)} not below {format_label(parent_label)}")
            )
    if exhaustive:
        for s, t in tree.pairs():
            if canonical_pair(s, t) in tree.labels:
                continue
            try:
                tree.label(s, t)
            except MissingLabelError:
                report.violations.append(AlphaViolation("missing", s, t))
    return report


def scan_true_clopen(tree: AlphaTree) -> List[Pair]:
    """Pairs past level 1 sharing their first coordinate whose label is not OUT."""
    offenders = []
    for n in range(2, tree.depth + 1):
        by_first: Dict[int, List[FinSeq]] = {}
        for node in tree.level(n):
            by_first.setdefault(node[0], []).append(node)
        for group in by_first.values():
            for s, t in itertools.combinations(group, 2):
                if tree.label(s, t) is not Verdict.OUT:
                    offenders.append((s, t))
    return offenders


@dataclass(frozen=True)
class RequestTriple:
    """Ask for a child t of p with L(s, t) = f(s) for every (s, f(s)) listed."""

    p: FinSeq
    assignments: Tuple[Tuple[FinSeq, Label], ...] = ()

    @property
    def F(self) -> Tuple[FinSeq, ...]:
        return tuple(s for s, _ in self.assignments)

    def describe(self) -> str:
        parts = ", ".join(f"{s}->{format_label(label)}" for s, label in self.assignments)
        return f"p={self.p} f={{{parts}}}"


def schedule_position(cursor: int) -> Tuple[int, int]:
    """(grade, occurrence) served at a cursor position.

    Grade g owns the positions k with k + 1 = 2^(g-1) * odd, so every grade
    recurs every 2^g positions.
    """
    position = cursor + 1
    grade = (position & -position).bit_length()
    return grade, position >> grade


def grade_activation(grade: int) -> int:
    """First cursor position of a grade."""
    return (1 << (grade - 1)) - 1


def _unrank_subset(items: Sequence[FinSeq], size: int, index: int) -> List[FinSeq]:
    chosen = []
    start = 0
    for remaining in range(size, 0, -1):
        for position in range(start, len(items)):
            count = comb(len(items) - position - 1, remaining - 1)
            if index < count:
                chosen.append(items[position])
                start = position + 1
                break
            index -= count
    return chosen


class GradeUniverse:
    """All triples of one grade: admitted parents, level subsets of size at
    most `grade`, and labels from the first `grade` entries of the label list."""

    def __init__(self, grade: int, admitted: Sequence[FinSeq], labels: Sequence[Label]) -> None:
        self.grade = grade
        self.labels = tuple(labels)
        self.blocks: List[Tuple[FinSeq, Tuple[FinSeq, ...], int]] = []
        for p in admitted:
            level = tuple(node for node in admitted if len(node) == len(p) + 1)
            size = sum(comb(len(level), r) * len(self.labels) ** r for r in range(min(grade, len(level)) + 1))
            self.blocks.append((p, level, size))
        self.size = sum(size for _, _, size in self.blocks)

    def unrank(self, index: int) -> RequestTriple:
        index %= self.size
        for p, level, size in self.blocks:
            if index >= size:
                index -= size
                continue
            for r in range(min(self.grade, len(level)) + 1):
                labelings = len(self.labels) ** r
                block = comb(len(level), r) * labelings
                if index >= block:
                    index -= block
                    continue
                subset = _unrank_subset(level, r, index // labelings)
                code = index % labelings
                chosen = []
                for _ in range(r):
                    code, digit = divmod(code, len(self.labels))
                    chosen.append(self.labels[digit])
                return RequestTriple(p=p, assignments=tuple(zip(subset, chosen)))
        raise AssertionError("index within universe size")

    def contains(self, request: RequestTriple) -> bool:
        for p, level, _ in self.blocks:
            if p == request.p:
                return (
                    len(request.assignments) <= self.grade
                    and all(s in level for s in request.F)
                    and all(label in self.labels for _, label in request.assignments)
                )
        return False


class UniversalTree:
    """Construction state (T_n, L_n) of the universal alpha-tree."""

    def __init__(self, alpha: Ordinal, variant: FillerPolicy = FillerPolicy.PLAIN) -> None:
        if variant is FillerPolicy.NONE:
            raise ValueError("the universal tree needs a filler rule")
        self.tree = AlphaTree(alpha=alpha, filler=variant)
        self.order: List[FinSeq] = [()]
        self.next_child: Dict[FinSeq, int] = {(): 0}
        self.step = 0
        self.cursor = 0
        self.grade_cutoffs: Dict[int, int] = {}
        self._universes: Dict[int, GradeUniverse] = {}
        self._demands: Deque[RequestTriple] = deque()

    @classmethod
    def restore(
        cls,
        tree: AlphaTree,
        order: Sequence[FinSeq],
        step: int,
        cursor: int,
        grade_cutoffs: Dict[int, int],
    ) -> "UniversalTree":
        universal = cls(tree.alpha, tree.filler)
        universal.tree = tree
        universal.order = [tuple(node) for node in order]
        universal.next_child = {node: 0 for node in universal.order}
        for node in universal.order[1:]:
            universal.next_child[node[:-1]] = max(universal.next_child[node[:-1]], node[-1] + 1)
        universal.step = step
        universal.cursor = cursor
        universal.grade_cutoffs = dict(grade_cutoffs)
        return universal

    @property
    def alpha(self) -> Ordinal:
        return self.tree.alpha

    @property
    def variant(self) -> FillerPolicy:
        return self.tree.filler

    def label(self, s: FinSeq, t: FinSeq) -> Label:
        return self.tree.label(s, t)

    def children(self, p: FinSeq) -> List[FinSeq]:
        return [p + (i,) for i in range(self.next_child.get(p, 0))]

    def label_list(self, grade: int) -> Tuple[Label, ...]:
        labels: Tuple[Label, ...] = (Verdict.IN, Verdict.OUT) + enumeration_window(self.alpha, max(0, grade - 2))
        return labels[:grade]

    def universe(self, grade: int) -> GradeUniverse:
        """Triples of a grade; the admitted nodes are fixed when the grade is first used."""
        if grade not in self._universes:
            cutoff = self.grade_cutoffs.setdefault(grade, len(self.order))
            self._universes[grade] = GradeUniverse(grade, self.order[:cutoff], self.label_list(grade))
        return self._universes[grade]

    def request_grade(self, request: RequestTriple) -> Optional[int]:
        """Smallest activated grade whose universe holds the request."""
        for grade in sorted(self.grade_cutoffs):
            if self.universe(grade).contains(request):
                return grade
        return None

    def schedule_next(self) -> RequestTriple:
        grade, occurrence = schedule_position(self.cursor)
        self.cursor += 1
        return self.universe(grade).unrank(occurrence)

    def inconsistency(self, request: RequestTriple) -> Optional[str]:
        """Why a request cannot be served, or None if it can."""
        p = request.p
        if p not in self.tree.nodes:
            return f"{p} is not a node"
        seen = set()
        for s, label in request.assignments:
            if s in seen:
                return f"{s} listed twice"
            seen.add(s)
            if s not in self.tree.nodes or len(s) != len(p) + 1:
                return f"{s} is not a node on level {len(p) + 1}"
            if not is_label(label) or (isinstance(label, Ordinal) and not label < self.alpha):
                return f"{label!r} is not a label below {self.alpha}"
            if self.variant is FillerPolicy.TRUE_CLOPEN and p and s[0] == p[0] and label is not Verdict.OUT:
                return f"{s} shares its first coordinate with children of {p} and must be out"
            if s[:-1] != p:
                parent_label = self.label(p, s[:-1])
                if not triangle_lt(label, parent_label):
                    return f"{format_label(label)} is not below L({p}, {s[:-1]}) = {format_label(parent_label)}"
        return None

    def matches(self, t: FinSeq, request: RequestTriple) -> bool:
        if t[:-1] != request.p or t in request.F:
            return False
        return all(self.label(t, s) == label for s, label in request.assignments)

    def push_demand(self, request: RequestTriple, copies: int = 1) -> None:
        self._demands.extend([request] * copies)

    def clear_demands(self) -> None:
        self._demands.clear()

    def advance(self) -> Optional[FinSeq]:
        """One build step; returns the new node, or None if the triple was skipped."""
        request = self._demands.popleft() if self._demands else self.schedule_next()
        self.step += 1
        reason = self.inconsistency(request)
        if reason is not None:
            logger.debug("step %d: skipped %s (%s)", self.step, request.describe(), reason)
            return None
        p = request.p
        t = p + (self.next_child[p],)
        self.next_child[p] += 1
        self.next_child[t] = 0
        self.order.append(t)
        self.tree.add_node(t)
        for s, label in request.assignments:
            self.tree.set_label(s, t, label)
        logger.debug("step %d: added %s for %s", self.step, t, request.describe())
        return t

    def run(self, steps: int) -> None:
        for _ in range(steps):
            self.advance()

    def snapshot(self) -> AlphaTree:
        return self.tree.copy()


def schedule_next(universal: UniversalTree) -> RequestTriple:
    return universal.schedule_next()


def build_step(universal: UniversalTree) -> UniversalTree:
    universal.advance()
    return universal


def fairness_horizon(universal: UniversalTree, grade: int, count: int) -> int:
    """Schedule steps that guarantee `count` servings of any triple of `grade`."""
    delay = max(0, grade_activation(grade) - universal.cursor)
    size = universal.universe(grade).size if grade in universal.grade_cutoffs else None
    if size is None:
        raise DomainViolation(f"grade {grade} is not active yet (cursor {universal.cursor})")
    return delay + (1 << grade) * (size * count + 1)


def find_witnesses(
    universal: UniversalTree,
    request: RequestTriple,
    count: int,
    horizon: int,
    exclude: Iterable[FinSeq] = (),
    demand: bool = True,
) -> List[FinSeq]:
    """Return `count` children t of request.p with L(t, s) = f(s) on F.

    Existing matching children come first. With `demand`, the request is
    queued ahead of the schedule; otherwise only the fair schedule runs.
    """
    reason = universal.inconsistency(request)
    if reason is not None:
        raise DomainViolation(f"inconsistent request {request.describe()}: {reason}")
    excluded = set(exclude)
    witnesses = [t for t in universal.children(request.p) if t not in excluded and universal.matches(t, request)]
    witnesses = witnesses[:count]
    if demand and len(witnesses) < count:
        universal.push_demand(request, count - len(witnesses))
    steps = 0
    try:
        while len(witnesses) < count and steps < horizon:
            created = universal.advance()
            steps += 1
            if created is not None and created not in excluded and universal.matches(created, request):
                witnesses.append(created)
    finally:
        universal.clear_demands()
    if len(witnesses) < count:
        logger.warning("horizon %d exhausted with %d of %d witnesses for %s", horizon, len(witnesses), count, request.describe())
        raise HorizonExhaustedError(
            f"found {len(witnesses)} of {count} witnesses within {horizon} steps", found=len(witnesses), wanted=count
        )
    return witnesses
