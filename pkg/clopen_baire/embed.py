"""Embedding alpha-trees into the universal tree.

Source nodes are placed one at a time, breadth first in (level, lexicographic)
order. Placing r asks the universal tree for a fresh child of sigma(r*) whose
labels against the already placed images on r's level copy the source labels.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .clopen import GraphOracle, Point, decide_pair, graph_from_labeling
from .errors import DomainViolation, EmbeddingMismatchError, IndistinguishablePointsError
from .models import FinSeq, Pair, Verdict
from .ordinal import OMEGA, Label, Ordinal, enumeration_window, format_label, is_q
from .seqspace import sequence_key, split_level
from .universal import (
    AlphaTree,
    FillerPolicy,
    RequestTriple,
    UniversalTree,
    find_witnesses,
    scan_true_clopen,
    validate_alpha_tree,
)

logger = logging.getLogger(__name__)


class LazyAlphaTree:
    """A possibly infinite alpha-tree: child entries per node and a label per pair."""

    def __init__(
        self,
        alpha: Ordinal,
        children: Callable[[FinSeq], Sequence[int]],
        label: Callable[[FinSeq, FinSeq], Label],
        name: str = "lazy",
        depth: Optional[int] = None,
    ) -> None:
        self.alpha = alpha
        self._children = children
        self._label = label
        self.name = name
        self.depth = depth
        self._levels: Dict[int, List[FinSeq]] = {0: [()]}

    @classmethod
    def from_alpha_tree(cls, tree: AlphaTree) -> "LazyAlphaTree":
        def children(s: FinSeq) -> List[int]:
            return [child[-1] for child in tree.children(s)]

        return cls(tree.alpha, children, tree.label, name="finite", depth=tree.depth)

    @classmethod
    def countdown(cls, branch: int, height: int) -> "LazyAlphaTree":
        """Full `branch`-ary tree labelled height - n on level n below height, and
        from level `height` on by the parity of the entries where the pair split."""

        def label(s: FinSeq, t: FinSeq) -> Label:
            if len(s) < height:
                return Ordinal.finite(height - len(s))
            j = split_level(s, t) - 1
            return Verdict.IN if (s[j] + t[j]) % 2 == 0 else Verdict.OUT

        return cls(OMEGA, lambda s: range(branch), label, name=f"countdown({branch},{height})")

    def child_entries(self, s: FinSeq) -> List[int]:
        return sorted(self._children(tuple(s)))

    def child_nodes(self, s: FinSeq) -> List[FinSeq]:
        return [s + (i,) for i in self.child_entries(s)]

    def has_node(self, s: FinSeq) -> bool:
        s = tuple(s)
        if self.depth is not None and len(s) > self.depth:
            return False
        return not s or (self.has_node(s[:-1]) and s[-1] in self._children(s[:-1]))

    def level(self, n: int) -> List[FinSeq]:
        if n not in self._levels:
            self._levels[n] = [child for node in self.level(n - 1) for child in self.child_nodes(node)]
        return sorted(self._levels[n])

    def label(self, s: FinSeq, t: FinSeq) -> Label:
        return self._label(tuple(s), tuple(t))


Source = Union[AlphaTree, LazyAlphaTree]


class Embedding:
    """A level- and order-preserving injection sigma of source nodes into the universal tree."""

    def __init__(self, source: Source, target: UniversalTree, horizon: int) -> None:
        self.source = source if isinstance(source, LazyAlphaTree) else LazyAlphaTree.from_alpha_tree(source)
        self.source_tree = source if isinstance(source, AlphaTree) else None
        self.target = target
        self.horizon = horizon
        self.sigma: Dict[FinSeq, FinSeq] = {(): ()}
        self._placed: Dict[int, List[FinSeq]] = {0: [()]}

    def ensure(self, node: FinSeq) -> FinSeq:
        """Image of a source node, placing it (and its ancestors) if needed."""
        node = tuple(node)
        if node in self.sigma:
            return self.sigma[node]
        if not self.source.has_node(node):
            raise DomainViolation(f"{node} is not a node of {self.source.name}")
        p = self.ensure(node[:-1])
        placed = self._placed.setdefault(len(node), [])
        request = RequestTriple(
            p=p,
            assignments=tuple((self.sigma[s], self.source.label(node, s)) for s in placed),
        )
        images = [self.sigma[s] for s in placed]
        (image,) = find_witnesses(self.target, request, 1, self.horizon, exclude=images)
        self.sigma[node] = image
        placed.append(node)
        return image

    def extend_to_level(self, n: int) -> None:
        for level in range(1, n + 1):
            for node in self.source.level(level):
                self.ensure(node)

    def image(self, node: FinSeq) -> FinSeq:
        return self.sigma[tuple(node)]

    def placed_pairs(self) -> List[Pair]:
        pairs = []
        for level in sorted(self._placed):
            nodes = sorted(self._placed[level])
            pairs.extend((a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :])
        return pairs

    def structural_problems(self) -> List[str]:
        problems = []
        images: Dict[FinSeq, FinSeq] = {}
        for node, image in sorted(self.sigma.items(), key=lambda item: sequence_key(item[0])):
            if len(image) != len(node):
                problems.append(f"{node} -> {image} changes level")
            if node and self.sigma.get(node[:-1]) != image[:-1]:
                problems.append(f"{node} -> {image} is not below the image of its parent")
            if image in images:
                problems.append(f"{node} and {images[image]} share the image {image}")
            images[image] = node
        return problems

    def label_mismatches(self) -> List[Tuple[Pair, Label, Label]]:
        mismatches = []
        for s, t in self.placed_pairs():
            expected = self.source.label(s, t)
            actual = self.target.label(self.sigma[s], self.sigma[t])
            if expected != actual:
                mismatches.append(((s, t), expected, actual))
        return mismatches

    def with_source(self, source: Source) -> "Embedding":
        """Same sigma against another source, used to inject faults."""
        other = Embedding(source, self.target, self.horizon)
        other.sigma = dict(self.sigma)
        other._placed = {level: list(nodes) for level, nodes in self._placed.items()}
        return other


def embed_tree(source: Source, universal: UniversalTree, horizon: int, depth: Optional[int] = None) -> Embedding:
    """Embed a finite alpha-tree, or the first `depth` levels of a lazy one."""
    if isinstance(source, AlphaTree):
        validate_alpha_tree(source, exhaustive=True).raise_for_violations()
        if universal.variant is FillerPolicy.TRUE_CLOPEN:
            offenders = scan_true_clopen(source)
            if offenders:
                raise DomainViolation(f"source is not true-clopen: {offenders[0]} is not out")
        depth = source.depth if depth is None else depth
    elif depth is None:
        raise ValueError("a lazy source needs an explicit depth")
    if universal.alpha < source.alpha:
        raise DomainViolation(f"source labels below {source.alpha} do not fit below {universal.alpha}")
    embedding = Embedding(source, universal, horizon)
    embedding.extend_to_level(depth)
    problems = embedding.structural_problems() + [
        f"L{pair} = {format_label(actual)}, source {format_label(expected)}"
        for pair, expected, actual in embedding.label_mismatches()
    ]
    if problems:
        raise EmbeddingMismatchError(f"embedding failed {len(problems)} checks", problems)
    logger.debug("embedded %d nodes into a universal tree of %d", len(embedding.sigma), len(universal.order))
    return embedding


def induced_point_map(embedding: Embedding, x: Point) -> Point:
    """f(x) = union of sigma(x|n); coordinate k needs only x|(k+1)."""

    def coordinate(k: int) -> int:
        prefix = x.prefix(k + 1)
        if not embedding.source.has_node(prefix):
            raise DomainViolation(f"{prefix} leaves the source tree")
        return embedding.ensure(prefix)[k]

    return Point(coordinate)


def random_branch(source: LazyAlphaTree, rng: random.Random) -> Point:
    """A seeded random branch through a tree with no leaves."""
    entries: List[int] = []
    chooser = random.Random(rng.getrandbits(64))

    def coordinate(k: int) -> int:
        while len(entries) <= k:
            options = source.child_entries(tuple(entries))
            if not options:
                raise DomainViolation(f"{tuple(entries)} is a leaf")
            entries.append(chooser.choice(options))
        return entries[k]

    return Point(coordinate)


@dataclass
class Disagreement:
    source_pair: Pair
    target_pair: Pair
    source_verdict: Verdict
    target_verdict: Verdict
    source_labels: List[str]
    target_labels: List[str]

    def __str__(self) -> str:
        return (
            f"{self.source_pair} -> {self.target_pair}: {self.source_verdict.value} vs {self.target_verdict.value}"
            f" (labels {self.source_labels} vs {self.target_labels})"
        )


@dataclass
class ReductionReport:
    pairs_checked: int = 0
    samples: int = 0
    structural: List[str] = field(default_factory=list)
    label_mismatches: List[str] = field(default_factory=list)
    disagreements: List[Disagreement] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.structural or self.label_mismatches or self.disagreements)


def _label_scan(label: Callable[[FinSeq, FinSeq], Label], s: FinSeq, t: FinSeq) -> List[str]:
    scan = []
    for k in range(split_level(s, t), len(s) + 1):
        value = label(s[:k], t[:k])
        scan.append(format_label(value))
        if is_q(value):
            break
    return scan


def verify_reduction(embedding: Embedding, samples: int, fuel: int, rng: random.Random) -> ReductionReport:
    """Check sigma exactly, then compare source and target verdicts on sampled pairs."""
    report = ReductionReport(samples=samples)
    report.structural = embedding.structural_problems()
    mismatches = embedding.label_mismatches()
    report.pairs_checked = len(embedding.placed_pairs())
    report.label_mismatches = [
        f"{pair}: source {format_label(expected)}, target {format_label(actual)}" for pair, expected, actual in mismatches
    ]
    source_graph: GraphOracle = graph_from_labeling(embedding.source.label, name="source")
    target_graph: GraphOracle = graph_from_labeling(embedding.target.label, name="universal")
    finite = embedding.source.depth is not None
    for _ in range(samples):
        if finite:
            pair = _sample_nodes(embedding, rng)
            if pair is None:
                break
            s, t = pair
            source_verdict = source_graph.decide_rect(s, t)
            image_pair = (embedding.sigma[s], embedding.sigma[t])
            target_verdict = target_graph.decide_rect(*image_pair)
        else:
            x, y = random_branch(embedding.source, rng), random_branch(embedding.source, rng)
            try:
                decision = decide_pair(source_graph, x, y, fuel)
            except IndistinguishablePointsError:
                continue
            source_verdict = decision.verdict
            fx, fy = induced_point_map(embedding, x), induced_point_map(embedding, y)
            target_verdict = decide_pair(target_graph, fx, fy, fuel).verdict
            s, t = x.prefix(decision.depth), y.prefix(decision.depth)
            image_pair = (fx.prefix(decision.depth), fy.prefix(decision.depth))
        if source_verdict is not target_verdict:
            report.disagreements.append(
                Disagreement(
                    (s, t),
                    image_pair,
                    source_verdict,
                    target_verdict,
                    _label_scan(embedding.source.label, s, t) if s != t else [],
                    _label_scan(embedding.target.label, *image_pair) if image_pair[0] != image_pair[1] else [],
                )
            )
    return report


def _sample_nodes(embedding: Embedding, rng: random.Random) -> Optional[Pair]:
    levels = [level for level, nodes in sorted(embedding._placed.items()) if len(nodes) >= 2]
    if not levels:
        return None
    nodes = sorted(embedding._placed[rng.choice(levels)])
    s, t = rng.sample(nodes, 2)
    return s, t


def perturb_source(tree: AlphaTree, rng: random.Random) -> AlphaTree:
    """Copy of the tree with one pair's label changed."""
    pairs = list(tree.pairs())
    if not pairs:
        raise DomainViolation("tree has no pairs to perturb")
    s, t = rng.choice(pairs)
    current = tree.label(s, t)
    broken = tree.copy()
    broken.set_label(s, t, Verdict.OUT if current is Verdict.IN else Verdict.IN)
    return broken


def random_alpha_tree(
    rng: random.Random,
    alpha: Ordinal,
    max_nodes: int,
    max_depth: int,
    window: int,
    max_children: int = 3,
) -> AlphaTree:
    """A seeded valid alpha-tree with every pair resolvable.

    Sibling pairs draw any label; a pair under an ordinal-labelled parent pair
    draws IN, OUT or one of the first `window` notations below that ordinal.
    Pairs under IN/OUT parents are left to propagation. The root always gets
    at least two children, so the tree has a pair to label.
    """
    if max_nodes < 3 or max_depth < 1:
        raise ValueError("a tree with a pair needs max_nodes >= 3 and max_depth >= 1")
    candidates = (Verdict.IN, Verdict.OUT) + enumeration_window(alpha, window)
    nodes = {()}
    frontier: List[FinSeq] = [()]
    while frontier and len(nodes) < max_nodes:
        node = frontier.pop(0)
        if len(node) >= max_depth:
            continue
        for i in range(rng.randint(0, max_children) if node else rng.randint(2, max(2, max_children))):
            if len(nodes) >= max_nodes:
                break
            child = node + (i,)
            nodes.add(child)
            frontier.append(child)
    tree = AlphaTree(alpha=alpha, nodes=nodes)
    for s, t in tree.pairs():
        if s[:-1] == t[:-1]:
            tree.set_label(s, t, rng.choice(candidates))
            continue
        parent_label = tree.label(s[:-1], t[:-1])
        if is_q(parent_label):
            continue
        below = (Verdict.IN, Verdict.OUT) + enumeration_window(parent_label, window)
        tree.set_label(s, t, rng.choice(below))
    return tree
