"""An adversary game witnessing rank lower bounds for R_alpha rectangles.

A state is a rectangle [s] x [t] on which the descent procedure has read
ordinals alpha_0 > ... > alpha_{N-1} and now points at t(m_N) with
m_N >= |t|; its rank is at least gamma = alpha_{N-1}.

Each round the challenger partitions [s] and [t] into clopen pieces and claims
the pieces have rank beta < gamma. The prover moves into one piece on each
side, writes (|s'|, beta) at t'(m_N) and points s'' = s' + (|t'|,) past the
end of t', reaching a new state with gamma = beta. When gamma is 0 the only
claim left is 0 (homogeneous), which the prover refutes with two completions
of the rectangle, one related and one not.
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Protocol, Sequence, Tuple, Union

from .clopen import Point
from .errors import IllegalClaimError, MalformedPartitionError
from .hierarchy import DescentTrace, GammaCode, r_alpha_decide, r_alpha_rect, require_limit
from .models import FinSeq, Verdict
from .ordinal import ZERO, Ordinal, enumeration_window
from .pointspec import GammaEntry, PointSpec
from .seqspace import is_prefix, pairwise_incomparable

logger = logging.getLogger(__name__)

FILLER: GammaEntry = (0, Verdict.OUT)


@dataclass(frozen=True)
class GameState:
    s: FinSeq
    t: Tuple[GammaEntry, ...]
    pending: Ordinal
    pending_m: int
    round: int = 0

    @classmethod
    def from_rect(cls, alpha: Ordinal, s: Sequence[int], t: Sequence[GammaEntry], round: int = 0) -> "GameState":
        state = r_alpha_rect(alpha, s, t)
        if not state.claim_form:
            raise ValueError(f"rectangle {tuple(s)} x {tuple(t)} is not waiting on t with an ordinal read")
        return cls(s=tuple(s), t=tuple(t), pending=state.last_label, pending_m=state.pending_m, round=round)


def initial_state(alpha: Ordinal, beta: Ordinal) -> GameState:
    """s = (0, 1), t = ((1, beta),): the rectangle whose rank is at least beta."""
    require_limit(alpha)
    if not beta < alpha:
        raise IllegalClaimError(f"{beta} is not below {alpha}")
    return GameState.from_rect(alpha, (0, 1), ((1, beta),))


@dataclass(frozen=True)
class LevelPartition:
    """Pieces of [base] cut at absolute length `depth`.

    With modulus 0 every cylinder of that length is its own piece; otherwise
    cylinders are grouped by their new entries taken mod `modulus`.
    """

    base: FinSeq
    depth: int
    modulus: int = 0

    def validate(self, base: FinSeq) -> None:
        if self.base != base:
            raise MalformedPartitionError(f"partition of {self.base} offered for [{base}]")
        if self.depth < len(base):
            raise MalformedPartitionError(f"cut depth {self.depth} is above the base length {len(base)}")
        if self.modulus < 0:
            raise MalformedPartitionError("modulus must be non-negative")

    def settle(self, seq: FinSeq, pad: int) -> Tuple[FinSeq, Tuple[int, ...]]:
        """Extend seq into a single piece; returns the extension and the piece key."""
        seq = seq + (pad,) * max(0, self.depth - len(seq))
        cut = seq[len(self.base) : self.depth]
        key = tuple(v % self.modulus for v in cut) if self.modulus else cut
        return seq, key

    def describe(self) -> dict:
        return {"kind": "level", "base": list(self.base), "depth": self.depth, "modulus": self.modulus}


@dataclass(frozen=True)
class CylinderPartition:
    """Pieces [c] for each listed cylinder, plus the rest of [base] when `remainder`."""

    base: FinSeq
    cylinders: Tuple[FinSeq, ...]
    remainder: bool = True

    def validate(self, base: FinSeq) -> None:
        if self.base != base:
            raise MalformedPartitionError(f"partition of {self.base} offered for [{base}]")
        for cylinder in self.cylinders:
            if not is_prefix(base, cylinder):
                raise MalformedPartitionError(f"cylinder {cylinder} escapes [{base}]")
        if not pairwise_incomparable(self.cylinders):
            raise MalformedPartitionError("cylinders overlap")
        if not self.remainder and self.cylinders != (base,):
            raise MalformedPartitionError("finitely many proper cylinders cannot cover the base; add a remainder piece")

    def settle(self, seq: FinSeq, pad: int) -> Tuple[FinSeq, Tuple[int, ...]]:
        for index, cylinder in enumerate(self.cylinders):
            if is_prefix(cylinder, seq):
                return seq, (index,)
            if is_prefix(seq, cylinder):
                return cylinder, (index,)
        return seq, (-1,)

    def describe(self) -> dict:
        return {
            "kind": "cylinders",
            "base": list(self.base),
            "cylinders": [list(c) for c in self.cylinders],
            "remainder": self.remainder,
        }


Partition = Union[LevelPartition, CylinderPartition]


@dataclass(frozen=True)
class ChallengerTurn:
    claim: Ordinal
    s_partition: Partition
    t_partition: Partition


class Challenger(Protocol):
    name: str

    def propose(self, alpha: Ordinal, state: GameState, codes: FinSeq) -> ChallengerTurn:
        ...


def _finest(state: GameState, codes: FinSeq) -> Tuple[LevelPartition, LevelPartition]:
    return LevelPartition(state.s, len(state.s) + 1), LevelPartition(codes, len(codes) + 1)


def greedy_claim(pending: Ordinal, window: int) -> Ordinal:
    """gamma - 1 for successors, the largest of the first `window` notations below a limit."""
    if pending.is_zero:
        return ZERO
    if pending.is_successor:
        return pending.predecessor()
    return max(enumeration_window(pending, window))


class GreedyChallenger:
    """Finest level partitions and the largest claim it can name."""

    name = "greedy"

    def __init__(self, window: int) -> None:
        self.window = window

    def propose(self, alpha: Ordinal, state: GameState, codes: FinSeq) -> ChallengerTurn:
        s_partition, t_partition = _finest(state, codes)
        return ChallengerTurn(greedy_claim(state.pending, self.window), s_partition, t_partition)


class RandomChallenger:
    """Seeded random claims and a mix of level and cylinder partitions."""

    name = "random"

    def __init__(self, rng: random.Random, window: int) -> None:
        self.rng = rng
        self.window = window

    def _partition(self, base: FinSeq) -> Partition:
        if self.rng.random() < 0.5:
            return LevelPartition(base, len(base) + self.rng.randint(0, 2), self.rng.randint(0, 3))
        cylinders = []
        for first in self.rng.sample(range(6), self.rng.randint(1, 3)):
            tail = tuple(self.rng.randrange(4) for _ in range(self.rng.randint(0, 2)))
            cylinders.append(base + (first,) + tail)
        return CylinderPartition(base, tuple(cylinders), remainder=True)

    def propose(self, alpha: Ordinal, state: GameState, codes: FinSeq) -> ChallengerTurn:
        options = enumeration_window(state.pending, self.window)
        claim = self.rng.choice(options) if options else ZERO
        return ChallengerTurn(claim, self._partition(state.s), self._partition(codes))


class ScriptedChallenger:
    """Plays a fixed list of claims with the finest partitions, then claims 0."""

    name = "scripted"

    def __init__(self, claims: Sequence[Ordinal]) -> None:
        self.claims = list(claims)

    def propose(self, alpha: Ordinal, state: GameState, codes: FinSeq) -> ChallengerTurn:
        claim = self.claims.pop(0) if self.claims else ZERO
        s_partition, t_partition = _finest(state, codes)
        return ChallengerTurn(claim, s_partition, t_partition)


def claim_is_legal(claim: Ordinal, pending: Ordinal) -> bool:
    return claim < pending or (claim.is_zero and pending.is_zero)


@dataclass(frozen=True)
class ProverMove:
    s_prime: FinSeq
    t_prime: Tuple[GammaEntry, ...]
    s_double_prime: FinSeq


def prover_move(alpha: Ordinal, state: GameState, turn: ChallengerTurn) -> Tuple[ProverMove, GameState]:
    """Answer a claim beta < gamma with a new state pending on beta."""
    code = GammaCode(alpha)
    s_prime, _ = turn.s_partition.settle(state.s, pad=0)
    t = list(state.t)
    t.extend([FILLER] * (state.pending_m - len(t)))
    t.append((len(s_prime), turn.claim))
    t_codes, _ = turn.t_partition.settle(code.encode_all(t), pad=code.encode(FILLER))
    t_prime = code.decode_all(t_codes)
    s_double = s_prime + (len(t_prime),)
    move = ProverMove(s_prime=s_prime, t_prime=t_prime, s_double_prime=s_double)
    new_state = GameState.from_rect(alpha, s_double, t_prime, round=state.round + 1)
    if new_state.pending != turn.claim:
        raise AssertionError(f"prover reached pending {new_state.pending}, expected {turn.claim}")
    return move, new_state


@dataclass(frozen=True)
class RefutationCertificate:
    """Two completions of the final rectangle, one related and one not."""

    x: PointSpec
    y_in: PointSpec
    y_out: PointSpec
    trace_in: DescentTrace
    trace_out: DescentTrace

    @property
    def verified(self) -> bool:
        return self.trace_in.verdict is Verdict.IN and self.trace_out.verdict is Verdict.OUT


def refute_homogeneity(alpha: Ordinal, state: GameState) -> RefutationCertificate:
    padding = tuple([FILLER] * (state.pending_m - len(state.t)))
    x = PointSpec(prefix=state.s, period=(0,))
    y_in = PointSpec(prefix=state.t + padding + ((0, Verdict.IN),), period=(FILLER,))
    y_out = PointSpec(prefix=state.t + padding + ((0, Verdict.OUT),), period=(FILLER,))
    trace_in = r_alpha_decide(alpha, Point.from_spec(x), Point.from_spec(y_in))
    trace_out = r_alpha_decide(alpha, Point.from_spec(x), Point.from_spec(y_out))
    return RefutationCertificate(x, y_in, y_out, trace_in, trace_out)


class Outcome(Enum):
    REFUTED = "refuted"
    EXHAUSTED = "exhausted"
    REJECTED = "rejected"


@dataclass(frozen=True)
class GameRound:
    claim: Ordinal
    s_partition: Partition
    t_partition: Partition
    move: Optional[ProverMove]
    new_state: Optional[GameState]


@dataclass
class GameTranscript:
    alpha: Ordinal
    challenger: str
    initial: GameState
    rounds: List[GameRound] = field(default_factory=list)
    outcome: Outcome = Outcome.EXHAUSTED
    certificate: Optional[RefutationCertificate] = None
    diagnosis: Optional[str] = None

    @property
    def survived(self) -> int:
        """Rounds in which the prover answered a claim with a new state."""
        return sum(1 for game_round in self.rounds if game_round.new_state is not None)

    @property
    def final_state(self) -> GameState:
        states = [r.new_state for r in self.rounds if r.new_state is not None]
        return states[-1] if states else self.initial


def rank_game_play(alpha: Ordinal, initial: GameState, challenger: Challenger, max_rounds: int) -> GameTranscript:
    require_limit(alpha)
    code = GammaCode(alpha)
    transcript = GameTranscript(alpha=alpha, challenger=challenger.name, initial=initial)
    state = initial
    for _ in range(max_rounds):
        codes = code.encode_all(state.t)
        turn = challenger.propose(alpha, state, codes)
        try:
            if not claim_is_legal(turn.claim, state.pending):
                raise IllegalClaimError(f"claim {turn.claim} is not below pending {state.pending}")
            turn.s_partition.validate(state.s)
            turn.t_partition.validate(codes)
        except (IllegalClaimError, MalformedPartitionError) as error:
            logger.info("round %d rejected: %s", state.round + 1, error)
            transcript.rounds.append(GameRound(turn.claim, turn.s_partition, turn.t_partition, None, None))
            transcript.outcome = Outcome.REJECTED
            transcript.diagnosis = str(error)
            return transcript
        if state.pending.is_zero:
            transcript.rounds.append(GameRound(turn.claim, turn.s_partition, turn.t_partition, None, None))
            transcript.certificate = refute_homogeneity(alpha, state)
            transcript.outcome = Outcome.REFUTED
            logger.debug("refuted homogeneity after %d rounds", transcript.survived)
            return transcript
        move, state = prover_move(alpha, state, turn)
        transcript.rounds.append(GameRound(turn.claim, turn.s_partition, turn.t_partition, move, state))
        logger.debug("round %d: pending %s", state.round, state.pending)
    return transcript


def check_transcript(transcript: GameTranscript) -> List[str]:
    """Moves reach their states, pending ordinals descend, every state waits on t
    and the certificate holds."""
    problems = []
    previous = transcript.initial.pending
    for index, game_round in enumerate(transcript.rounds):
        if game_round.new_state is None:
            continue
        state = game_round.new_state
        move = game_round.move
        if move is not None and (
            move.s_double_prime != move.s_prime + (len(move.t_prime),)
            or (state.s, state.t) != (move.s_double_prime, move.t_prime)
        ):
            problems.append(f"round {index + 1}: prover move does not lead to the recorded state")
        if not state.pending < previous:
            problems.append(f"round {index + 1}: pending {state.pending} does not descend from {previous}")
        rect = r_alpha_rect(transcript.alpha, state.s, state.t)
        if not rect.claim_form or rect.last_label != state.pending:
            problems.append(f"round {index + 1}: state is not waiting on t with pending {state.pending}")
        previous = state.pending
    if transcript.outcome is Outcome.REFUTED and not (transcript.certificate and transcript.certificate.verified):
        problems.append("refutation certificate does not verify")
    return problems
