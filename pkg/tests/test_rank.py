"""Tests for the rank machinery."""

import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from clopen_baire.clopen import GraphOracle, complete_graph
from clopen_baire.hierarchy import GammaCode, e_alpha
from clopen_baire.models import Verdict
from clopen_baire.ordinal import OMEGA, Ordinal
from clopen_baire.rank import RankBound, TStar, pullback_graph, pullback_partition, rank_upper, tree_rank, tstar_build


def decided_from(length):
    return GraphOracle(lambda s, t: Verdict.IN if len(s) >= length else Verdict.UNDECIDED, name=f"from{length}")


def naive_rank(children, node):
    kids = children.get(node, [])
    return 0 if not kids else 1 + max(naive_rank(children, kid) for kid in kids)


@st.composite
def finite_trees(draw):
    root = ((), ())
    children = {}
    frontier = [root]
    budget = draw(st.integers(0, 60))
    while frontier and budget > 0:
        node = frontier.pop(draw(st.integers(0, len(frontier) - 1)))
        width = draw(st.integers(0, 3))
        kids = [(node[0] + (i,), node[1] + (i + 1,)) for i in range(min(width, budget))]
        budget -= len(kids)
        if kids:
            children[node] = kids
            frontier.extend(kids)
    return root, children


class TestTreeRank(unittest.TestCase):
    """Test T* construction and its rank."""

    def test_homogeneous_rectangle_has_rank_zero(self):
        tree = tstar_build(complete_graph(), (0,), (1,), 3, 4)
        self.assertEqual(len(tree), 1)
        self.assertEqual(tree_rank(tree), Ordinal.finite(0))
        self.assertTrue(tree.complete)

    def test_truncated_nodes_count_one(self):
        always = GraphOracle(lambda s, t: Verdict.UNDECIDED)
        tree = tstar_build(always, (0,), (1,), 2, 2)
        self.assertEqual(len(tree), 5)
        self.assertFalse(tree.complete)
        self.assertEqual(tree_rank(tree), Ordinal.finite(2))

    def test_decided_children(self):
        tree = tstar_build(decided_from(2), (0,), (1,), 2, 3)
        self.assertTrue(tree.complete)
        self.assertEqual(tree_rank(tree), Ordinal.finite(1))

    def test_rejects_bad_roots(self):
        with self.assertRaises(ValueError):
            tstar_build(complete_graph(), (1,), (1,), 2, 2)
        with self.assertRaises(ValueError):
            tstar_build(complete_graph(), (1,), (1, 0), 2, 2)
        with self.assertRaises(ValueError):
            tstar_build(complete_graph(), (1,), (0,), 0, 2)

    def test_hand_built_chain(self):
        root = ((), ())
        a, b, c = ((0,), (1,)), ((0, 0), (1, 0)), ((0, 0, 0), (1, 0, 0))
        tree = TStar.from_edges(root, {root: [a], a: [b], b: [c]})
        self.assertEqual(tree_rank(tree), Ordinal.finite(3))

    def test_e_alpha_tree_matches_exhaustive_expansion(self):
        graph, fresh = e_alpha(OMEGA), e_alpha(OMEGA)
        code = GammaCode(OMEGA)
        filler = code.encode((0, Verdict.OUT))
        roots = [((0, 0), (1, 0)), ((0, 1), (1, filler))]
        for s0, t0 in roots:
            with self.subTest(root=(s0, t0)):
                tree = tstar_build(graph, s0, t0, 3, 4)
                expected = {}

                def expand(s, t):
                    verdict = fresh.decide_rect(s, t)
                    if verdict is not Verdict.UNDECIDED:
                        expected[(s, t)] = (verdict, False, ())
                        return 0
                    if len(s) >= 4:
                        expected[(s, t)] = (verdict, True, ())
                        return 1
                    kids = tuple((s + (i,), t + (j,)) for i in range(3) for j in range(3))
                    expected[(s, t)] = (verdict, False, kids)
                    return 1 + max(expand(*kid) for kid in kids)

                rank = expand(s0, t0)
                self.assertEqual(set(tree.nodes), set(expected))
                for pair, node in tree.nodes.items():
                    self.assertEqual((node.verdict, node.truncated, node.children), expected[pair])
                self.assertEqual(tree_rank(tree), Ordinal.finite(rank))

    @settings(max_examples=100, deadline=None)
    @given(finite_trees())
    def test_rank_matches_naive_recursion(self, drawn):
        root, children = drawn
        self.assertEqual(tree_rank(TStar.from_edges(root, children)).finite_value, naive_rank(children, root))


class TestRankBounds(unittest.TestCase):
    """Test truncation bounds on E_alpha."""

    def setUp(self):
        self.graph = e_alpha(OMEGA)
        code = GammaCode(OMEGA)
        filler = code.encode((0, Verdict.OUT))
        self.s = (0, 2, 3, 0)
        self.t = (1, filler, filler, code.encode((1, Ordinal.finite(4))))

    def test_state_bound_marks_unbounded_branching(self):
        bound = rank_upper(self.graph, self.s, self.t, 2, len(self.s) + 1)
        self.assertEqual(bound.value, Ordinal.finite(1))
        self.assertTrue(bound.complete)
        self.assertEqual(bound.state_bound, Ordinal.finite(4))
        self.assertTrue(bound.unbounded_branching)

    def test_decided_rectangle(self):
        bound = rank_upper(self.graph, (0,), (3,), 3, 3)
        self.assertEqual(bound.value, Ordinal.finite(0))
        self.assertIsNone(bound.state_bound)
        self.assertFalse(bound.unbounded_branching)

    def test_incomplete_truncation(self):
        bound = rank_upper(self.graph, (0,), (1,), 2, 1)
        self.assertFalse(bound.complete)
        self.assertEqual(bound.value, Ordinal.finite(1))

    def test_monotone_in_branch_bound(self):
        values = [rank_upper(self.graph, (0, 1), (1, 0), b, 4).value for b in (2, 3, 4)]
        self.assertEqual(values, sorted(values))

    def test_rank_bound_without_state(self):
        self.assertFalse(RankBound(Ordinal.finite(2), True, 3).unbounded_branching)


class TestPullbacks(unittest.TestCase):
    """Test pullbacks along prefix maps."""

    def test_pullback_graph_reads_images(self):
        graph = GraphOracle(lambda s, t: Verdict.IN if 2 in s + t else Verdict.OUT)
        pulled = pullback_graph(graph, lambda s: tuple(2 * entry for entry in s))
        self.assertIs(pulled.decide_rect((0,), (1,)), Verdict.IN)
        self.assertIs(pulled.decide_rect((0,), (2,)), Verdict.OUT)

    def test_pullback_rank_bounded_by_image(self):
        graph = e_alpha(OMEGA)
        pulled = pullback_graph(graph, lambda s: tuple(2 * entry for entry in s))
        below = rank_upper(pulled, (0, 1), (1, 1), 2, 4).value
        above = rank_upper(graph, (0, 2), (2, 2), 4, 4).value
        self.assertLessEqual(below, above)

    def test_pullback_partition(self):
        pulled = pullback_partition(lambda s: s, [[(0,)], [(1,)]], branch_bound=3, depth_bound=2)
        self.assertEqual(pulled.piece_of((0, 5)), 0)
        self.assertEqual(pulled.piece_of((1,)), 1)
        self.assertIsNone(pulled.piece_of((2,)))
        self.assertFalse(pulled.complete)


if __name__ == "__main__":
    unittest.main()
