"""JSON documents and DOT drawings for everything a command writes.

Documents are pydantic models; lists are emitted in a fixed order so equal
inputs give byte-identical files.
"""

import json
import threading
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, model_validator

from .clopen import Point
from .embed import Embedding
from .game import (
    CylinderPartition,
    GameRound,
    GameState,
    GameTranscript,
    LevelPartition,
    Outcome,
    Partition,
    ProverMove,
    RefutationCertificate,
)
from .hierarchy import DescentStep, DescentTrace
from .models import FinSeq, Verdict
from .ordinal import Label, format_label, format_ordinal, is_q, parse_label, parse_ordinal
from .pointspec import GammaEntry, format_point_spec, parse_point_spec
from .rank import RankBound
from .seqspace import sequence_key
from .universal import AlphaTree, FillerPolicy, UniversalTree

Doc = TypeVar("Doc", bound=BaseModel)


class Document(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class LabelDoc(Document):
    """`{"q": "in"}`, `{"q": "out"}` or `{"ord": "w^2+1"}`."""

    q: Optional[Literal["in", "out"]] = None
    ord: Optional[str] = None

    @model_validator(mode="after")
    def _one_kind(self) -> "LabelDoc":
        if (self.q is None) == (self.ord is None):
            raise ValueError("a label is either q or ord")
        return self

    @classmethod
    def of(cls, label: Label) -> "LabelDoc":
        if is_q(label):
            return cls(q=label.value)
        return cls(ord=format_label(label))

    def to_label(self) -> Label:
        return Verdict(self.q) if self.q is not None else parse_ordinal(self.ord)


class PairLabelDoc(Document):
    s: List[int]
    t: List[int]
    label: LabelDoc


class AlphaTreeDoc(Document):
    alpha: str
    filler: Literal["none", "plain", "true-clopen"] = "none"
    nodes: List[List[int]]
    labels: List[PairLabelDoc]

    @classmethod
    def of(cls, tree: AlphaTree) -> "AlphaTreeDoc":
        labels = sorted(tree.labels.items(), key=lambda item: (sequence_key(item[0][0]), sequence_key(item[0][1])))
        return cls(
            alpha=format_ordinal(tree.alpha),
            filler=tree.filler.value,
            nodes=[list(node) for node in sorted(tree.nodes, key=sequence_key)],
            labels=[PairLabelDoc(s=list(s), t=list(t), label=LabelDoc.of(label)) for (s, t), label in labels],
        )

    def to_tree(self) -> AlphaTree:
        return AlphaTree(
            alpha=parse_ordinal(self.alpha),
            nodes={tuple(node) for node in self.nodes},
            labels={(tuple(entry.s), tuple(entry.t)): entry.label.to_label() for entry in self.labels},
            filler=FillerPolicy(self.filler),
        )


class UniversalDoc(AlphaTreeDoc):
    """An alpha-tree document plus the construction state needed to resume building."""

    variant: Literal["plain", "true-clopen"]
    step: int
    cursor: int
    order: List[List[int]]
    grade_cutoffs: List[Tuple[int, int]]

    @model_validator(mode="after")
    def _variant_is_filler(self) -> "UniversalDoc":
        if self.variant != self.filler:
            raise ValueError(f"variant {self.variant} does not match filler {self.filler}")
        return self

    @classmethod
    def of(cls, universal: UniversalTree) -> "UniversalDoc":
        return cls(
            **AlphaTreeDoc.of(universal.tree).model_dump(),
            variant=universal.variant.value,
            step=universal.step,
            cursor=universal.cursor,
            order=[list(node) for node in universal.order],
            grade_cutoffs=sorted(universal.grade_cutoffs.items()),
        )

    def to_universal(self) -> UniversalTree:
        return UniversalTree.restore(
            self.to_tree(),
            order=[tuple(node) for node in self.order],
            step=self.step,
            cursor=self.cursor,
            grade_cutoffs=dict(self.grade_cutoffs),
        )


class StepDoc(Document):
    m: int
    n: int
    label: LabelDoc


class TraceDoc(Document):
    alpha: str
    x: Optional[str] = None
    y: Optional[str] = None
    steps: List[StepDoc]
    i0: int
    verdict: Literal["in", "out"]
    x_depth: int
    y_depth: int
    depth: int

    @classmethod
    def of(cls, trace: DescentTrace, x: Optional[Point] = None, y: Optional[Point] = None) -> "TraceDoc":
        return cls(
            alpha=format_ordinal(trace.alpha),
            x=format_point_spec(x.spec) if x is not None and x.spec is not None else None,
            y=format_point_spec(y.spec) if y is not None and y.spec is not None else None,
            steps=[StepDoc(m=step.m, n=step.n, label=LabelDoc.of(step.label)) for step in trace.steps],
            i0=trace.i0,
            verdict=trace.verdict.value,
            x_depth=trace.x_depth,
            y_depth=trace.y_depth,
            depth=trace.depth,
        )

    def to_trace(self) -> DescentTrace:
        return DescentTrace(
            alpha=parse_ordinal(self.alpha),
            steps=tuple(DescentStep(step.m, step.n, step.label.to_label()) for step in self.steps),
            i0=self.i0,
            verdict=Verdict(self.verdict),
            x_depth=self.x_depth,
            y_depth=self.y_depth,
        )


class RankDoc(Document):
    graph: str
    s: List[int]
    t: List[int]
    branch_bound: int
    depth_bound: int
    rank: str
    complete: bool
    nodes: int
    state_bound: Optional[str] = None
    unbounded_branching: bool = False

    @classmethod
    def of(cls, graph: str, s: FinSeq, t: FinSeq, branch_bound: int, depth_bound: int, bound: RankBound) -> "RankDoc":
        return cls(
            graph=graph,
            s=list(s),
            t=list(t),
            branch_bound=branch_bound,
            depth_bound=depth_bound,
            rank=format_ordinal(bound.value),
            complete=bound.complete,
            nodes=bound.nodes,
            state_bound=format_ordinal(bound.state_bound) if bound.state_bound is not None else None,
            unbounded_branching=bound.unbounded_branching,
        )


def _gamma_entries(entries: Tuple[GammaEntry, ...]) -> List[str]:
    return [f"{pointer}|{format_label(label)}" for pointer, label in entries]


def _parse_gamma_entries(entries: List[str]) -> Tuple[GammaEntry, ...]:
    parsed = []
    for entry in entries:
        pointer, _, label = entry.partition("|")
        parsed.append((int(pointer), parse_label(label)))
    return tuple(parsed)


def _partition(description: Dict[str, Any]) -> Partition:
    if description["kind"] == "level":
        return LevelPartition(tuple(description["base"]), description["depth"], description.get("modulus", 0))
    if description["kind"] == "cylinders":
        return CylinderPartition(
            tuple(description["base"]),
            tuple(tuple(cylinder) for cylinder in description["cylinders"]),
            description.get("remainder", True),
        )
    raise ValueError(f"unknown partition kind {description['kind']!r}")


class StateDoc(Document):
    s: List[int]
    t: List[str]
    pending: str
    pending_m: int
    round: int

    @classmethod
    def of(cls, state: GameState) -> "StateDoc":
        return cls(
            s=list(state.s),
            t=_gamma_entries(state.t),
            pending=format_ordinal(state.pending),
            pending_m=state.pending_m,
            round=state.round,
        )

    def to_state(self) -> GameState:
        return GameState(
            s=tuple(self.s),
            t=_parse_gamma_entries(self.t),
            pending=parse_ordinal(self.pending),
            pending_m=self.pending_m,
            round=self.round,
        )


class ProverMoveDoc(Document):
    """The prover's answer: pieces s' and t', then s'' = s' + (|t'|,)."""

    s_prime: List[int]
    t_prime: List[str]
    s_double_prime: List[int]

    @classmethod
    def of(cls, move: ProverMove) -> "ProverMoveDoc":
        return cls(
            s_prime=list(move.s_prime),
            t_prime=_gamma_entries(move.t_prime),
            s_double_prime=list(move.s_double_prime),
        )

    def to_move(self) -> ProverMove:
        return ProverMove(
            s_prime=tuple(self.s_prime),
            t_prime=_parse_gamma_entries(self.t_prime),
            s_double_prime=tuple(self.s_double_prime),
        )


class RoundDoc(Document):
    claim: str
    s_partition: Dict[str, Any]
    t_partition: Dict[str, Any]
    prover_move: Optional[ProverMoveDoc] = None
    new_state: Optional[StateDoc] = None

    @classmethod
    def of(cls, game_round: GameRound) -> "RoundDoc":
        return cls(
            claim=format_ordinal(game_round.claim),
            s_partition=game_round.s_partition.describe(),
            t_partition=game_round.t_partition.describe(),
            prover_move=ProverMoveDoc.of(game_round.move) if game_round.move is not None else None,
            new_state=StateDoc.of(game_round.new_state) if game_round.new_state is not None else None,
        )

    def to_round(self) -> GameRound:
        return GameRound(
            claim=parse_ordinal(self.claim),
            s_partition=_partition(self.s_partition),
            t_partition=_partition(self.t_partition),
            move=self.prover_move.to_move() if self.prover_move is not None else None,
            new_state=self.new_state.to_state() if self.new_state is not None else None,
        )


class CertificateDoc(Document):
    x: str
    y_in: str
    y_out: str
    trace_in: TraceDoc
    trace_out: TraceDoc
    verified: bool

    @classmethod
    def of(cls, certificate: RefutationCertificate) -> "CertificateDoc":
        return cls(
            x=format_point_spec(certificate.x),
            y_in=format_point_spec(certificate.y_in),
            y_out=format_point_spec(certificate.y_out),
            trace_in=TraceDoc.of(certificate.trace_in),
            trace_out=TraceDoc.of(certificate.trace_out),
            verified=certificate.verified,
        )

    def to_certificate(self) -> RefutationCertificate:
        return RefutationCertificate(
            x=parse_point_spec(self.x),
            y_in=parse_point_spec(self.y_in),
            y_out=parse_point_spec(self.y_out),
            trace_in=self.trace_in.to_trace(),
            trace_out=self.trace_out.to_trace(),
        )


class TranscriptDoc(Document):
    alpha: str
    challenger: str
    initial: StateDoc
    rounds: List[RoundDoc]
    outcome: Literal["refuted", "exhausted", "rejected"]
    survived: int
    certificate: Optional[CertificateDoc] = None
    diagnosis: Optional[str] = None

    @classmethod
    def of(cls, transcript: GameTranscript) -> "TranscriptDoc":
        return cls(
            alpha=format_ordinal(transcript.alpha),
            challenger=transcript.challenger,
            initial=StateDoc.of(transcript.initial),
            rounds=[RoundDoc.of(game_round) for game_round in transcript.rounds],
            outcome=transcript.outcome.value,
            survived=transcript.survived,
            certificate=CertificateDoc.of(transcript.certificate) if transcript.certificate else None,
            diagnosis=transcript.diagnosis,
        )

    def to_transcript(self) -> GameTranscript:
        """Rebuild the transcript so it can be checked again after reading it back."""
        return GameTranscript(
            alpha=parse_ordinal(self.alpha),
            challenger=self.challenger,
            initial=self.initial.to_state(),
            rounds=[game_round.to_round() for game_round in self.rounds],
            outcome=Outcome(self.outcome),
            certificate=self.certificate.to_certificate() if self.certificate is not None else None,
            diagnosis=self.diagnosis,
        )


class EmbeddingPairDoc(Document):
    source_node: List[int]
    target_node: List[int]


class EmbeddingDoc(Document):
    """sigma as source/target node pairs, with the files the nodes refer to."""

    alpha: str
    universal_alpha: str
    variant: Literal["plain", "true-clopen"]
    source_snapshot: Optional[str] = None
    target_snapshot: Optional[str] = None
    pairs: List[EmbeddingPairDoc]
    pairs_checked: int
    universal_nodes: int

    @classmethod
    def of(cls, embedding: Embedding, source: Optional[str] = None, target: Optional[str] = None) -> "EmbeddingDoc":
        pairs = sorted(embedding.sigma.items(), key=lambda item: sequence_key(item[0]))
        return cls(
            alpha=format_ordinal(embedding.source.alpha),
            universal_alpha=format_ordinal(embedding.target.alpha),
            variant=embedding.target.variant.value,
            source_snapshot=source,
            target_snapshot=target,
            pairs=[EmbeddingPairDoc(source_node=list(node), target_node=list(image)) for node, image in pairs],
            pairs_checked=len(embedding.placed_pairs()),
            universal_nodes=len(embedding.target.order),
        )

    def sigma(self) -> Dict[FinSeq, FinSeq]:
        return {tuple(entry.source_node): tuple(entry.target_node) for entry in self.pairs}


class CheckDoc(Document):
    name: str
    passed: int
    failed: int
    measured: bool = False
    witnesses: List[str] = []
    notes: List[str] = []


class SuiteDoc(Document):
    suite: str
    seed: int
    quick: bool
    ok: bool
    checks: List[CheckDoc]


class VerifyDoc(Document):
    seed: int
    ok: bool
    suites: List[SuiteDoc]


def dump_document(document: BaseModel) -> str:
    return document.model_dump_json(indent=2, exclude_none=True)


class DocumentStore:
    """Reads and writes JSON documents on disk."""

    def __init__(self) -> None:
        self._lock = threading.Lock()

    def write(self, path: str, document: BaseModel) -> None:
        payload = dump_document(document) + "\n"
        with self._lock:
            Path(path).write_text(payload, encoding="utf-8")

    def read(self, path: str, model: Type[Doc]) -> Doc:
        with self._lock:
            payload = Path(path).read_text(encoding="utf-8")
        return model.model_validate_json(payload)

    def read_tree(self, path: str) -> AlphaTree:
        """An alpha-tree file, or the tree of a universal snapshot."""
        with self._lock:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(payload, dict) and "step" in payload:
            return UniversalDoc.model_validate(payload).to_tree()
        return AlphaTreeDoc.model_validate(payload).to_tree()

    def read_universal(self, path: str) -> UniversalTree:
        return self.read(path, UniversalDoc).to_universal()


# DOT


def _node_id(node: FinSeq) -> str:
    return "n" + "_".join(str(entry) for entry in node) if node else "root"


def _node_label(node: FinSeq) -> str:
    return "<>" if not node else "<" + ",".join(str(entry) for entry in node) + ">"


def tree_to_dot(tree: AlphaTree, name: str = "alpha_tree", caption: Optional[str] = None) -> str:
    """Parent edges solid, stored pair labels as dashed undirected edges."""
    lines = [f"graph {name} {{", "  node [shape=box, fontname=monospace];"]
    lines.append(f'  label="{caption or "alpha = " + format_ordinal(tree.alpha)}";')
    for node in sorted(tree.nodes, key=sequence_key):
        lines.append(f'  {_node_id(node)} [label="{_node_label(node)}"];')
    for node in sorted(tree.nodes, key=sequence_key):
        if node:
            lines.append(f"  {_node_id(node[:-1])} -- {_node_id(node)};")
    labels = sorted(tree.labels.items(), key=lambda item: (sequence_key(item[0][0]), sequence_key(item[0][1])))
    for (s, t), label in labels:
        lines.append(f'  {_node_id(s)} -- {_node_id(t)} [style=dashed, constraint=false, label="{format_label(label)}"];')
    lines.append("}")
    return "\n".join(lines)


def universal_to_dot(universal: UniversalTree) -> str:
    caption = (
        f"universal {universal.variant.value} alpha = {format_ordinal(universal.alpha)}, "
        f"{len(universal.order)} nodes after {universal.step} steps"
    )
    return tree_to_dot(universal.tree, name="universal", caption=caption)
