"""Clopen graphs on Baire space presented as prefix-pair oracles."""

import logging
import random
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Generic, List, Optional, Sequence, Tuple, TypeVar

from .errors import DomainViolation, FuelExhaustedError, IndistinguishablePointsError
from .models import FinSeq, Pair, Verdict
from .ordinal import OMEGA, Label, Ordinal, is_q
from .pointspec import Entry, PointSpec
from .seqspace import sequences_of_length, split_level
from .universal import AlphaTree, FillerPolicy, canonical_pair

logger = logging.getLogger(__name__)

T = TypeVar("T")

RectDecider = Callable[[FinSeq, FinSeq], Verdict]
StateBound = Callable[[FinSeq, FinSeq], Optional[Ordinal]]


class GraphOracle:
    """A clopen graph given by its verdicts on same-length prefix rectangles.

    Queries are cached per unordered pair (per ordered pair for directed
    relations); `raw_decide` bypasses the cache so symmetry can be checked.
    """

    def __init__(
        self,
        decide: RectDecider,
        name: str = "graph",
        state_bound: Optional[StateBound] = None,
        symmetric: bool = True,
        cache_size: int = 1 << 16,
    ) -> None:
        self._decide = decide
        self.name = name
        self.state_bound = state_bound
        self.symmetric = symmetric
        self._cached = lru_cache(maxsize=cache_size)(self._decide)

    def decide_rect(self, s: Sequence[int], t: Sequence[int]) -> Verdict:
        s, t = tuple(s), tuple(t)
        if len(s) != len(t):
            raise ValueError(f"rectangle sides differ in length: {s} vs {t}")
        if s == t:
            raise DomainViolation(f"diagonal rectangle {s} is never decided")
        if not self.symmetric:
            return self._cached(s, t)
        return self._cached(*canonical_pair(s, t))

    def raw_decide(self, s: Sequence[int], t: Sequence[int]) -> Verdict:
        return self._decide(tuple(s), tuple(t))

    def __repr__(self) -> str:
        return f"GraphOracle({self.name!r})"


def complete_graph() -> GraphOracle:
    return GraphOracle(lambda s, t: Verdict.IN, name="complete")


def empty_graph() -> GraphOracle:
    return GraphOracle(lambda s, t: Verdict.OUT, name="empty")


class Point(Generic[T]):
    """A point of Baire space (or of Gamma^omega) with memoized coordinates."""

    def __init__(self, coord: Callable[[int], T], spec: Optional[PointSpec] = None) -> None:
        self._coord = coord
        self.spec = spec
        self._values: List[T] = []
        self._lock = threading.Lock()

    def __call__(self, k: int) -> T:
        if k < 0:
            raise IndexError("coordinates are indexed from 0")
        with self._lock:
            while len(self._values) <= k:
                self._values.append(self._coord(len(self._values)))
            return self._values[k]

    def prefix(self, n: int) -> Tuple[T, ...]:
        if n == 0:
            return ()
        self(n - 1)
        with self._lock:
            return tuple(self._values[:n])

    @classmethod
    def from_spec(cls, spec: PointSpec) -> "Point[Entry]":
        return cls(spec.coordinate, spec=spec)

    @classmethod
    def constant_after(cls, prefix: Sequence[T], value: T = 0) -> "Point[T]":
        return cls.from_spec(PointSpec(prefix=tuple(prefix), period=(value,)))

    def __repr__(self) -> str:
        return f"Point({self.spec or self.prefix(len(self._values))})"


@dataclass(frozen=True)
class PairDecision:
    """Outcome of scanning a pair of points for a decided rectangle."""

    verdict: Verdict
    depth: int
    split: int
    diverged: bool = False

    def require_decided(self) -> Verdict:
        if self.diverged:
            raise FuelExhaustedError(f"no decision up to depth {self.depth}")
        return self.verdict


def decide_pair(graph: GraphOracle, x: Point, y: Point, fuel: int) -> PairDecision:
    """Decide whether x and y are adjacent by scanning rectangles x|n, y|n.

    Scanning starts at the first level where the points differ; the reported
    depth is the least n with a decided rectangle.
    """
    split = None
    for k in range(fuel):
        if x(k) != y(k):
            split = k + 1
            break
    if split is None:
        raise IndistinguishablePointsError(f"points agree on their first {fuel} coordinates")
    for n in range(split, fuel + 1):
        verdict = graph.decide_rect(x.prefix(n), y.prefix(n))
        if verdict.decided:
            return PairDecision(verdict=verdict, depth=n, split=split)
    logger.debug("%s: pair undecided up to fuel %d", graph.name, fuel)
    return PairDecision(verdict=Verdict.UNDECIDED, depth=fuel, split=split, diverged=True)


@dataclass(frozen=True)
class CanonicalTree:
    """Canonical alpha-tree of a graph on a bounded universe.

    `truncated` lists undecided pairs sitting on the depth bound; their
    ordinal label is only a lower bound.
    """

    tree: AlphaTree
    truncated: Tuple[Pair, ...]

    @property
    def complete(self) -> bool:
        return not self.truncated


def canonical_alpha_tree(graph: GraphOracle, branch_bound: int, depth_bound: int) -> CanonicalTree:
    """Label the bounded tree by verdicts, and undecided pairs by their rank
    in the tree of undecided rectangles hanging below their sibling root.

    Labels below a decided pair are left implicit (they repeat the parent).
    """
    labels: Dict[Pair, Label] = {}
    truncated: List[Pair] = []

    def rank(s: FinSeq, t: FinSeq) -> Label:
        verdict = graph.decide_rect(s, t)
        if verdict.decided:
            labels[(s, t)] = verdict
            return verdict
        if len(s) >= depth_bound:
            truncated.append((s, t))
            value = 0
        else:
            value = 0
            for i in range(branch_bound):
                for j in range(branch_bound):
                    child = rank(s + (i,), t + (j,))
                    if isinstance(child, Ordinal):
                        value = max(value, child.finite_value + 1)
        label = Ordinal.finite(value)
        labels[(s, t)] = label
        return label

    nodes = set()
    for length in range(depth_bound + 1):
        nodes.update(sequences_of_length(branch_bound, length))
    for length in range(depth_bound):
        for u in sequences_of_length(branch_bound, length):
            for i in range(branch_bound):
                for j in range(i + 1, branch_bound):
                    rank(u + (i,), u + (j,))
    truncated.sort()
    tree = AlphaTree(alpha=OMEGA, nodes=nodes, labels=labels, filler=FillerPolicy.NONE)
    return CanonicalTree(tree=tree, truncated=tuple(truncated))


def graph_from_labeling(
    label: Callable[[FinSeq, FinSeq], Label],
    name: str = "labeling",
    domain: Optional[Callable[[FinSeq], bool]] = None,
) -> GraphOracle:
    """The graph whose verdict on (s, t) is the first IN/OUT label met along
    (s|k, t|k) from the split level up to |s|.

    With a `domain`, pairs leaving it stay undecided.
    """

    def decide(s: FinSeq, t: FinSeq) -> Verdict:
        for k in range(split_level(s, t), len(s) + 1):
            if domain is not None and not (domain(s[:k]) and domain(t[:k])):
                return Verdict.UNDECIDED
            value = label(s[:k], t[:k])
            if is_q(value):
                return value
        return Verdict.UNDECIDED

    return GraphOracle(decide, name=name)


@dataclass
class GraphViolation:
    kind: str
    witness: Tuple[object, ...]

    def __str__(self) -> str:
        return f"{self.kind}: {self.witness}"


@dataclass
class GraphReport:
    name: str
    samples: int
    violations: List[GraphViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _random_distinct_pair(rng: random.Random, branch_bound: int, length: int) -> Pair:
    while True:
        s = tuple(rng.randrange(branch_bound) for _ in range(length))
        t = tuple(rng.randrange(branch_bound) for _ in range(length))
        if s != t:
            return s, t


def check_graph(
    graph: GraphOracle,
    samples: int,
    fuel: int,
    rng: random.Random,
    branch_bound: int = 3,
    depth_bound: int = 5,
) -> GraphReport:
    """Sample rectangles and points looking for asymmetric, incoherent or
    undecidable behaviour."""
    report = GraphReport(name=graph.name, samples=samples)
    for _ in range(samples):
        s, t = _random_distinct_pair(rng, branch_bound, rng.randint(1, depth_bound))
        forward, backward = graph.raw_decide(s, t), graph.raw_decide(t, s)
        if forward is not backward:
            report.violations.append(GraphViolation("asymmetric", (s, t, forward, backward)))
        if forward.decided:
            for i in range(branch_bound):
                for j in range(branch_bound):
                    extended = graph.decide_rect(s + (i,), t + (j,))
                    if extended is not forward:
                        report.violations.append(GraphViolation("incoherent", (s, t, forward, i, j, extended)))
        x = Point.constant_after(s, 0)
        y = Point.constant_after(t, 0)
        decision = decide_pair(graph, x, y, fuel)
        if decision.diverged:
            report.violations.append(GraphViolation("undecided", (s, t, fuel)))
    return report
