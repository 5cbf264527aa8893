"""Rank machinery: the tree T* of undecided rectangles and its rank function.

The rank of T* rooted at (s, t) bounds from above how many rounds of clopen
partitioning [s] x [t] needs before every piece is homogeneous. Everything is
computed on a truncation: children use entries below `branch_bound`, and
pairs never grow past length `depth_bound`.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .clopen import GraphOracle
from .models import FinSeq, Pair, Verdict
from .ordinal import Ordinal
from .seqspace import Antichain, Membership, comparable, is_prefix, minimal_decided

logger = logging.getLogger(__name__)

PrefixMap = Callable[[FinSeq], FinSeq]


@dataclass(frozen=True)
class TStarNode:
    verdict: Verdict
    children: Tuple[Pair, ...] = ()
    truncated: bool = False

    @property
    def terminal(self) -> bool:
        return self.verdict.decided


@dataclass(frozen=True)
class TStar:
    """Truncated tree of rectangles below a root pair.

    Decided rectangles are terminal; undecided ones either have all B x B
    children or sit on the depth bound and are marked truncated.
    """

    root: Pair
    nodes: Dict[Pair, TStarNode]
    branch_bound: int
    depth_bound: int

    @property
    def complete(self) -> bool:
        return not any(node.truncated for node in self.nodes.values())

    def __len__(self) -> int:
        return len(self.nodes)

    @classmethod
    def from_edges(
        cls,
        root: Pair,
        children: Mapping[Pair, Sequence[Pair]],
        branch_bound: int = 0,
        depth_bound: int = 0,
    ) -> "TStar":
        """Build a tree by hand: nodes without children are terminal."""
        nodes: Dict[Pair, TStarNode] = {}
        stack = [root]
        while stack:
            pair = stack.pop()
            kids = tuple(children.get(pair, ()))
            verdict = Verdict.UNDECIDED if kids else Verdict.IN
            nodes[pair] = TStarNode(verdict=verdict, children=kids)
            stack.extend(kids)
        return cls(root=root, nodes=nodes, branch_bound=branch_bound, depth_bound=depth_bound)


def _require_pair(s: FinSeq, t: FinSeq) -> None:
    if len(s) != len(t):
        raise ValueError(f"rectangle sides differ in length: {s} vs {t}")
    if s == t:
        raise ValueError(f"rectangle {s} x {t} sits on the diagonal")


def tstar_build(graph: GraphOracle, s0: FinSeq, t0: FinSeq, branch_bound: int, depth_bound: int) -> TStar:
    s0, t0 = tuple(s0), tuple(t0)
    _require_pair(s0, t0)
    if branch_bound < 1:
        raise ValueError("branch_bound must be positive")
    nodes: Dict[Pair, TStarNode] = {}
    stack = [(s0, t0)]
    while stack:
        s, t = stack.pop()
        verdict = graph.decide_rect(s, t)
        if verdict.decided:
            nodes[(s, t)] = TStarNode(verdict)
        elif len(s) >= depth_bound:
            nodes[(s, t)] = TStarNode(verdict, truncated=True)
        else:
            kids = tuple((s + (i,), t + (j,)) for i in range(branch_bound) for j in range(branch_bound))
            nodes[(s, t)] = TStarNode(verdict, children=kids)
            stack.extend(kids)
    return TStar(root=(s0, t0), nodes=nodes, branch_bound=branch_bound, depth_bound=depth_bound)


def tree_rank(tree: TStar) -> Ordinal:
    """Standard rank: terminal nodes 0, others the max of child rank + 1.

    A truncated undecided node counts 1, which it at least is in the full tree.
    """
    ranks: Dict[Pair, int] = {}
    stack: List[Tuple[Pair, bool]] = [(tree.root, False)]
    while stack:
        pair, expanded = stack.pop()
        node = tree.nodes[pair]
        if node.terminal:
            ranks[pair] = 0
        elif node.truncated:
            ranks[pair] = 1
        elif expanded:
            ranks[pair] = max(ranks[child] + 1 for child in node.children)
        else:
            stack.append((pair, True))
            stack.extend((child, False) for child in node.children)
    return Ordinal.finite(ranks[tree.root])


@dataclass(frozen=True)
class RankBound:
    """Truncation upper bound on the rank of a rectangle.

    `state_bound` is a proven lower bound on the true rank when the oracle
    can supply one; `unbounded_branching` flags a truncation value below it.
    """

    value: Ordinal
    complete: bool
    nodes: int
    state_bound: Optional[Ordinal] = None

    @property
    def unbounded_branching(self) -> bool:
        return self.state_bound is not None and self.value < self.state_bound


def rank_upper(graph: GraphOracle, s: FinSeq, t: FinSeq, branch_bound: int, depth_bound: int) -> RankBound:
    tree = tstar_build(graph, s, t, branch_bound, depth_bound)
    value = tree_rank(tree)
    state = graph.state_bound(tuple(s), tuple(t)) if graph.state_bound else None
    bound = RankBound(value=value, complete=tree.complete, nodes=len(tree), state_bound=state)
    if bound.unbounded_branching:
        logger.debug("%s: truncation rank %s below proven bound %s at %s, %s", graph.name, value, state, s, t)
    return bound


def pullback_graph(graph: GraphOracle, prefix_map: PrefixMap) -> GraphOracle:
    """The graph on the domain of a coherent prefix map, read through its images."""

    def decide(s: FinSeq, t: FinSeq) -> Verdict:
        image_s, image_t = prefix_map(s), prefix_map(t)
        common = min(len(image_s), len(image_t))
        image_s, image_t = image_s[:common], image_t[:common]
        if image_s == image_t:
            return Verdict.UNDECIDED
        return graph.decide_rect(image_s, image_t)

    return GraphOracle(decide, name=f"pullback({graph.name})")


@dataclass
class PulledPartition:
    """Preimages of codomain pieces, one antichain per piece."""

    pieces: List[Antichain] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return all(piece.complete for piece in self.pieces)

    def piece_of(self, s: FinSeq) -> Optional[int]:
        for index, piece in enumerate(self.pieces):
            if piece.covers(s):
                return index
        return None


def pullback_partition(
    prefix_map: PrefixMap,
    pieces: Sequence[Sequence[FinSeq]],
    branch_bound: int,
    depth_bound: int,
) -> PulledPartition:
    """Pull each codomain piece (a union of cylinders) back along the map."""

    def membership(cylinders: Sequence[FinSeq]) -> Callable[[FinSeq], Membership]:
        def decide(s: FinSeq) -> Membership:
            image = prefix_map(s)
            if any(is_prefix(cylinder, image) for cylinder in cylinders):
                return Membership.INSIDE
            if not any(comparable(cylinder, image) for cylinder in cylinders):
                return Membership.OUTSIDE
            return Membership.UNDECIDED

        return decide

    result = PulledPartition()
    for cylinders in pieces:
        result.pieces.append(
            minimal_decided(
                membership([tuple(c) for c in cylinders]),
                is_final=lambda verdict: verdict is Membership.INSIDE,
                is_dead=lambda verdict: verdict is Membership.OUTSIDE,
                branch_bound=branch_bound,
                depth_bound=depth_bound,
            )
        )
    return result
