"""The ordinal-descent relation R_alpha and the graphs built from it.

R_alpha relates x in Baire space to y in Gamma^omega, Gamma = omega x (Q u alpha):
starting from m_0 = x(0), read y(m_i) = (n_i, alpha_i) and jump to
m_{i+1} = x(n_i). The run stops at the first alpha_i that is IN/OUT or that
fails to descend below alpha_{i-1}; the pair is related iff that label is IN.

S_alpha moves R_alpha into [<0>] x [<1>], P_alpha adds C1 x D and C x D1, and
E_alpha is the symmetric closure of P_alpha.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import isqrt
from typing import List, Optional, Sequence, Tuple, Union

from .clopen import GraphOracle, Point, decide_pair
from .constants import REGION_C, REGION_C1, REGION_D, REGION_D1_START
from .errors import DomainViolation, FuelExhaustedError
from .models import FinSeq, Verdict
from .ordinal import (
    Label,
    Ordinal,
    enumerate_below,
    enumeration_index,
    enumeration_window,
    format_label,
    is_label,
    is_q,
)
from .pointspec import GammaEntry, PointSpec

logger = logging.getLogger(__name__)


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(z: int) -> Tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def require_limit(alpha: Ordinal) -> None:
    if not alpha.is_limit:
        raise DomainViolation(f"{alpha} is not a limit notation")


@lru_cache(maxsize=1 << 14)
def _decode(alpha: Ordinal, code: int) -> GammaEntry:
    pointer, label_code = cantor_unpair(code)
    if label_code == 0:
        return pointer, Verdict.IN
    if label_code == 1:
        return pointer, Verdict.OUT
    return pointer, enumerate_below(alpha, label_code - 2)


@dataclass(frozen=True)
class GammaCode:
    """Bijection between naturals and Gamma entries (n, label) for a limit alpha.

    Labels are coded 0 = IN, 1 = OUT, 2 + k = the k-th notation below alpha,
    and the pair (n, label code) is Cantor-paired.
    """

    alpha: Ordinal

    def __post_init__(self) -> None:
        require_limit(self.alpha)

    def label_code(self, label: Label) -> int:
        if label is Verdict.IN:
            return 0
        if label is Verdict.OUT:
            return 1
        if isinstance(label, Ordinal):
            return 2 + enumeration_index(self.alpha, label)
        raise DomainViolation(f"{label!r} is not a label")

    def encode(self, entry: GammaEntry) -> int:
        pointer, label = entry
        return cantor_pair(pointer, self.label_code(label))

    def decode(self, code: int) -> GammaEntry:
        if code < 0:
            raise DomainViolation("codes are naturals")
        return _decode(self.alpha, code)

    def encode_all(self, entries: Sequence[GammaEntry]) -> FinSeq:
        return tuple(self.encode(entry) for entry in entries)

    def decode_all(self, codes: Sequence[int]) -> Tuple[GammaEntry, ...]:
        return tuple(self.decode(code) for code in codes)


@dataclass(frozen=True)
class DescentStep:
    m: int
    n: int
    label: Label


@dataclass(frozen=True)
class DescentTrace:
    """A finished run of the descent procedure.

    x_depth and y_depth count the coordinates that were read; every pair of
    points sharing those prefixes ends the same way.
    """

    alpha: Ordinal
    steps: Tuple[DescentStep, ...]
    i0: int
    verdict: Verdict
    x_depth: int
    y_depth: int

    @property
    def depth(self) -> int:
        return max(self.x_depth, self.y_depth)


def _check_label(alpha: Ordinal, label: object, position: int) -> None:
    if not is_label(label):
        raise DomainViolation(f"y({position}) = {label!r} carries no label")
    if isinstance(label, Ordinal) and not label < alpha:
        raise DomainViolation(f"label {label} at y({position}) is not below {alpha}")


def r_alpha_decide(alpha: Ordinal, x: Point, y: Point) -> DescentTrace:
    """Run the descent procedure on full points; always terminates."""
    require_limit(alpha)
    steps: List[DescentStep] = []
    x_depth, y_depth = 1, 0
    previous: Optional[Ordinal] = None
    m = x(0)
    while True:
        n, label = y(m)
        y_depth = max(y_depth, m + 1)
        _check_label(alpha, label, m)
        steps.append(DescentStep(m, n, label))
        if is_q(label):
            verdict = label
            break
        if previous is not None and not label < previous:
            verdict = Verdict.OUT
            break
        previous = label
        m = x(n)
        x_depth = max(x_depth, n + 1)
    return DescentTrace(alpha, tuple(steps), len(steps) - 1, verdict, x_depth, y_depth)


@dataclass(frozen=True)
class RectState:
    """The procedure run on finite prefixes s, t.

    When undecided, exactly one of pending_m (the next read of t is past its
    end) or pending_n (the next read of s is past its end) is set, and
    last_label is the most recent ordinal read.
    """

    verdict: Verdict
    steps: Tuple[DescentStep, ...]
    pending_m: Optional[int] = None
    pending_n: Optional[int] = None
    last_label: Optional[Ordinal] = None

    @property
    def claim_form(self) -> bool:
        """Undecided with a known pointer into t and at least one ordinal read."""
        return self.verdict is Verdict.UNDECIDED and self.pending_m is not None and self.last_label is not None


def r_alpha_rect(alpha: Ordinal, s: Sequence[int], t: Sequence[Union[GammaEntry, int]]) -> RectState:
    """Run the procedure as far as the prefixes allow. Integer entries of t
    are read as Gamma codes."""
    if any(isinstance(entry, int) for entry in t):
        code = GammaCode(alpha)
        t = tuple(code.decode(entry) if isinstance(entry, int) else entry for entry in t)
    steps: List[DescentStep] = []
    previous: Optional[Ordinal] = None
    if not s:
        return RectState(Verdict.UNDECIDED, (), pending_n=0)
    m = s[0]
    while True:
        if m >= len(t):
            return RectState(Verdict.UNDECIDED, tuple(steps), pending_m=m, last_label=previous)
        n, label = t[m]
        _check_label(alpha, label, m)
        steps.append(DescentStep(m, n, label))
        if is_q(label):
            return RectState(label, tuple(steps), last_label=previous)
        if previous is not None and not label < previous:
            return RectState(Verdict.OUT, tuple(steps), last_label=previous)
        previous = label
        if n >= len(s):
            return RectState(Verdict.UNDECIDED, tuple(steps), pending_n=n, last_label=previous)
        m = s[n]


class Region(Enum):
    C = "C"
    D = "D"
    C1 = "C1"
    D1 = "D1"

    @property
    def side(self) -> str:
        return "A" if self in (Region.C, Region.C1) else "B"


def region_of(first: int) -> Region:
    if first == REGION_C:
        return Region.C
    if first == REGION_D:
        return Region.D
    if first == REGION_C1:
        return Region.C1
    if first >= REGION_D1_START:
        return Region.D1
    raise DomainViolation(f"{first} is not a natural")


def _s_verdict(alpha: Ordinal, code: GammaCode, s: FinSeq, t: FinSeq) -> Verdict:
    if s[0] != REGION_C or t[0] != REGION_D:
        return Verdict.OUT
    return r_alpha_rect(alpha, s[1:], code.decode_all(t[1:])).verdict


def _p_verdict(alpha: Ordinal, code: GammaCode, s: FinSeq, t: FinSeq) -> Verdict:
    source, target = region_of(s[0]), region_of(t[0])
    if source is Region.C and target is Region.D:
        return _s_verdict(alpha, code, s, t)
    if (source is Region.C1 and target is Region.D) or (source is Region.C and target is Region.D1):
        return Verdict.IN
    return Verdict.OUT


def s_alpha(alpha: Ordinal) -> GraphOracle:
    """Directed relation: a copy of R_alpha inside [<0>] x [<1>]."""
    code = GammaCode(alpha)
    return GraphOracle(lambda s, t: _s_verdict(alpha, code, s, t), name=f"S_{alpha}", symmetric=False)


def p_alpha(alpha: Ordinal) -> GraphOracle:
    """Directed relation S_alpha u (C1 x D) u (C x D1)."""
    code = GammaCode(alpha)
    return GraphOracle(lambda s, t: _p_verdict(alpha, code, s, t), name=f"P_{alpha}", symmetric=False)


def e_alpha(alpha: Ordinal) -> GraphOracle:
    """Symmetric closure of P_alpha, a true clopen graph bipartite over A = C u C1, B = D u D1."""
    code = GammaCode(alpha)

    def decide(s: FinSeq, t: FinSeq) -> Verdict:
        forward = _p_verdict(alpha, code, s, t)
        backward = _p_verdict(alpha, code, t, s)
        if Verdict.IN in (forward, backward):
            return Verdict.IN
        if forward is Verdict.OUT and backward is Verdict.OUT:
            return Verdict.OUT
        return Verdict.UNDECIDED

    def state_bound(s: FinSeq, t: FinSeq) -> Optional[Ordinal]:
        for a, b in ((s, t), (t, s)):
            if a and a[0] == REGION_C and b[0] == REGION_D:
                state = r_alpha_rect(alpha, a[1:], code.decode_all(b[1:]))
                return state.last_label if state.claim_form else None
        return None

    return GraphOracle(decide, name=f"E_{alpha}", state_bound=state_bound)


_NEIGHBOR_FIRST = {Region.C: 3, Region.C1: 1, Region.D: 2, Region.D1: 0}


def witness_neighbor(alpha: Ordinal, x: Point, fuel: int, graph: Optional[GraphOracle] = None) -> Point:
    """A point adjacent to x in E_alpha, chosen by the region of x."""
    graph = graph or e_alpha(alpha)
    y = Point.constant_after((_NEIGHBOR_FIRST[region_of(x(0))],), 0)
    decision = decide_pair(graph, x, y, fuel)
    if decision.verdict is not Verdict.IN:
        raise FuelExhaustedError(f"neighbour {y} of {x} was not confirmed (got {decision.verdict.value})")
    return y


def check_trace(trace: DescentTrace) -> List[str]:
    """Every way the trace breaks the descent invariants."""
    problems = []
    if not trace.steps or trace.i0 != len(trace.steps) - 1:
        return [f"i0 {trace.i0} does not mark the last of {len(trace.steps)} steps"]
    for index, step in enumerate(trace.steps[:-1]):
        if not isinstance(step.label, Ordinal):
            problems.append(f"step {index} before i0 carries {format_label(step.label)}")
        elif index > 0 and not step.label < trace.steps[index - 1].label:
            problems.append(f"step {index} does not descend")
    final = trace.steps[-1].label
    stops = is_q(final) or (trace.i0 > 0 and isinstance(final, Ordinal) and not final < trace.steps[-2].label)
    if not stops:
        problems.append(f"run stopped at {format_label(final)} without a stopping condition")
    if (trace.verdict is Verdict.IN) != (final is Verdict.IN):
        problems.append(f"verdict {trace.verdict.value} disagrees with final label {format_label(final)}")
    return problems


def random_point_spec(rng: random.Random, max_value: int, prefix_len: int, period_len: int = 1) -> PointSpec:
    return PointSpec(
        prefix=tuple(rng.randrange(max_value) for _ in range(prefix_len)),
        period=tuple(rng.randrange(max_value) for _ in range(max(1, period_len))),
    )


def random_gamma_spec(
    rng: random.Random,
    alpha: Ordinal,
    window: int,
    max_pointer: int,
    prefix_len: int,
    period_len: int = 1,
    q_weight: float = 0.2,
) -> PointSpec:
    """A Gamma point whose ordinal labels come from the first `window` notations below alpha."""
    candidates = enumeration_window(alpha, window)

    def entry() -> GammaEntry:
        pointer = rng.randrange(max_pointer)
        if not candidates or rng.random() < q_weight:
            return pointer, rng.choice((Verdict.IN, Verdict.OUT))
        return pointer, rng.choice(candidates)

    return PointSpec(
        prefix=tuple(entry() for _ in range(prefix_len)),
        period=tuple(entry() for _ in range(max(1, period_len))),
    )
