"""Tests for JSON documents and DOT output."""

import json
import tempfile
import unittest
from pathlib import Path

from pydantic import ValidationError

from clopen_baire.clopen import Point
from clopen_baire.embed import embed_tree
from clopen_baire.game import GreedyChallenger, check_transcript, initial_state, rank_game_play
from clopen_baire.hierarchy import e_alpha, r_alpha_decide
from clopen_baire.models import Verdict
from clopen_baire.ordinal import OMEGA, Ordinal, parse_ordinal
from clopen_baire.pointspec import parse_point_spec
from clopen_baire.rank import rank_upper
from clopen_baire.serialization import (
    AlphaTreeDoc,
    DocumentStore,
    EmbeddingDoc,
    LabelDoc,
    RankDoc,
    TraceDoc,
    TranscriptDoc,
    UniversalDoc,
    dump_document,
    tree_to_dot,
    universal_to_dot,
)
from clopen_baire.universal import UniversalTree

W2 = parse_ordinal("w^2")
SAMPLE_TREE = Path(__file__).resolve().parent.parent / "samples" / "sample_tree.json"


class TestDocuments(unittest.TestCase):
    """Test document models."""

    def test_label_doc(self):
        self.assertIs(LabelDoc(q="in").to_label(), Verdict.IN)
        self.assertEqual(LabelDoc(ord="w+1").to_label(), parse_ordinal("w+1"))
        self.assertEqual(LabelDoc.of(Ordinal.finite(3)), LabelDoc(ord="3"))
        self.assertEqual(LabelDoc.of(Verdict.OUT), LabelDoc(q="out"))

    def test_label_doc_needs_exactly_one_kind(self):
        with self.assertRaises(ValidationError):
            LabelDoc()
        with self.assertRaises(ValidationError):
            LabelDoc(q="in", ord="1")
        with self.assertRaises(ValidationError):
            LabelDoc(q="maybe")

    def test_sample_tree_document_is_canonical(self):
        doc = AlphaTreeDoc.model_validate_json(SAMPLE_TREE.read_text(encoding="utf-8"))
        tree = doc.to_tree()
        self.assertEqual(tree.alpha, W2)
        self.assertEqual(len(tree.nodes), 12)
        self.assertEqual(tree.label((0,), (1,)), parse_ordinal("w+1"))
        self.assertEqual(AlphaTreeDoc.of(tree), doc)

    def test_trace_doc(self):
        x, y = Point.from_spec(parse_point_spec("0,(1)*")), Point.from_spec(parse_point_spec("(1|in)*"))
        doc = TraceDoc.of(r_alpha_decide(OMEGA, x, y), x, y)
        self.assertEqual(doc.verdict, "in")
        self.assertEqual(doc.x, "0,(1)*")
        self.assertEqual(doc.steps[0].label, LabelDoc(q="in"))
        self.assertEqual(doc.to_trace().verdict, Verdict.IN)

    def test_trace_doc_without_points_omits_them(self):
        x, y = Point.from_spec(parse_point_spec("0,(1)*")), Point.from_spec(parse_point_spec("(1|in)*"))
        payload = json.loads(dump_document(TraceDoc.of(r_alpha_decide(OMEGA, x, y))))
        self.assertNotIn("x", payload)
        self.assertEqual(payload["i0"], 0)

    def test_rank_doc(self):
        bound = rank_upper(e_alpha(OMEGA), (0,), (3,), 3, 3)
        doc = RankDoc.of("E(w)", (0,), (3,), 3, 3, bound)
        self.assertEqual(doc.rank, "0")
        self.assertTrue(doc.complete)
        self.assertNotIn("state_bound", json.loads(dump_document(doc)))

    def test_transcript_doc(self):
        transcript = rank_game_play(W2, initial_state(W2, Ordinal.finite(5)), GreedyChallenger(31), 200)
        doc = TranscriptDoc.of(transcript)
        self.assertEqual(doc.outcome, "refuted")
        self.assertEqual(doc.survived, 5)
        self.assertEqual(doc.initial.pending, "5")
        self.assertTrue(doc.certificate.verified)
        first = doc.rounds[0].prover_move
        self.assertEqual(first.s_double_prime, first.s_prime + [len(first.t_prime)])
        self.assertIsNone(doc.rounds[-1].prover_move)

    def test_transcript_doc_reads_back(self):
        transcript = rank_game_play(W2, initial_state(W2, OMEGA), GreedyChallenger(31), 200)
        payload = json.loads(dump_document(TranscriptDoc.of(transcript)))
        self.assertIn("prover_move", payload["rounds"][0])
        self.assertIn("new_state", payload["rounds"][0])
        read_back = TranscriptDoc.model_validate(payload).to_transcript()
        self.assertEqual([r.move for r in read_back.rounds], [r.move for r in transcript.rounds])
        self.assertEqual([r.new_state for r in read_back.rounds], [r.new_state for r in transcript.rounds])
        self.assertEqual(read_back.rounds[0].s_partition, transcript.rounds[0].s_partition)
        self.assertEqual(read_back.outcome, transcript.outcome)
        self.assertTrue(read_back.certificate.verified)
        self.assertEqual(check_transcript(read_back), [])

    def test_tampered_move_is_reported(self):
        transcript = rank_game_play(W2, initial_state(W2, Ordinal.finite(3)), GreedyChallenger(31), 200)
        payload = json.loads(dump_document(TranscriptDoc.of(transcript)))
        payload["rounds"][0]["prover_move"]["s_double_prime"].append(7)
        problems = check_transcript(TranscriptDoc.model_validate(payload).to_transcript())
        self.assertEqual(problems, ["round 1: prover move does not lead to the recorded state"])

    def test_universal_doc_resumes(self):
        universal = UniversalTree(W2)
        universal.run(80)
        resumed = UniversalDoc.model_validate_json(dump_document(UniversalDoc.of(universal))).to_universal()
        universal.run(20)
        resumed.run(20)
        self.assertEqual(UniversalDoc.of(resumed), UniversalDoc.of(universal))

    def test_universal_doc_is_a_flat_alpha_tree(self):
        universal = UniversalTree(W2)
        universal.run(10)
        payload = json.loads(dump_document(UniversalDoc.of(universal)))
        self.assertNotIn("tree", payload)
        self.assertEqual(payload["step"], 10)
        self.assertEqual(payload["filler"], payload["variant"])
        tree_fields = {key: payload[key] for key in ("alpha", "filler", "nodes", "labels")}
        self.assertEqual(AlphaTreeDoc.model_validate(tree_fields).to_tree(), universal.tree)

    def test_universal_doc_variant_must_match_filler(self):
        payload = json.loads(dump_document(UniversalDoc.of(UniversalTree(W2))))
        payload["variant"] = "true-clopen"
        with self.assertRaises(ValidationError):
            UniversalDoc.model_validate(payload)

    def test_embedding_doc_pairs(self):
        source = DocumentStore().read_tree(str(SAMPLE_TREE))
        universal = UniversalTree(W2)
        embedding = embed_tree(source, universal, horizon=20_000)
        doc = EmbeddingDoc.of(embedding, source=str(SAMPLE_TREE), target="universal.json")
        self.assertEqual(doc.pairs[0].source_node, [])
        self.assertEqual(doc.sigma(), embedding.sigma)
        self.assertEqual(doc.source_snapshot, str(SAMPLE_TREE))
        self.assertEqual(doc.target_snapshot, "universal.json")
        self.assertNotIn("target_snapshot", json.loads(dump_document(EmbeddingDoc.of(embedding))))


class TestDocumentStore(unittest.TestCase):
    """Test DocumentStore on disk."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.store = DocumentStore()

    def tearDown(self):
        self.temp_dir.cleanup()

    def path(self, name):
        return str(Path(self.temp_dir.name) / name)

    def test_write_then_read(self):
        tree = self.store.read_tree(str(SAMPLE_TREE))
        self.store.write(self.path("tree.json"), AlphaTreeDoc.of(tree))
        self.assertEqual(self.store.read_tree(self.path("tree.json")), tree)
        self.assertTrue(Path(self.path("tree.json")).read_text(encoding="utf-8").endswith("}\n"))

    def test_read_tree_of_a_snapshot(self):
        universal = UniversalTree(W2)
        universal.run(30)
        self.store.write(self.path("universal.json"), UniversalDoc.of(universal))
        self.assertEqual(self.store.read_tree(self.path("universal.json")), universal.tree)
        self.assertEqual(self.store.read_universal(self.path("universal.json")).order, universal.order)

    def test_rejects_wrong_document(self):
        self.store.write(self.path("label.json"), LabelDoc(q="in"))
        with self.assertRaises(ValidationError):
            self.store.read_tree(self.path("label.json"))

    def test_missing_file(self):
        with self.assertRaises(OSError):
            self.store.read_tree(self.path("absent.json"))


class TestDot(unittest.TestCase):
    """Test DOT drawings."""

    def test_tree_to_dot(self):
        dot = tree_to_dot(DocumentStore().read_tree(str(SAMPLE_TREE)))
        self.assertTrue(dot.startswith("graph alpha_tree {"))
        self.assertIn("root -- n0;", dot)
        self.assertIn('n0 -- n1 [style=dashed, constraint=false, label="w+1"];', dot)
        self.assertTrue(dot.endswith("}"))

    def test_universal_to_dot(self):
        universal = UniversalTree(W2)
        universal.run(3)
        dot = universal_to_dot(universal)
        self.assertTrue(dot.startswith("graph universal {"))
        self.assertIn("4 nodes after 3 steps", dot)


if __name__ == "__main__":
    unittest.main()
