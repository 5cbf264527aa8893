"""Seeded verification suites.

Each suite draws from its own random stream (seed and suite name), records
pass/fail counts per check and keeps the first few counterexamples. Reports
hold no timings, so a rerun with the same config is byte-identical.
"""

import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

from .clopen import Point, canonical_alpha_tree, decide_pair, graph_from_labeling
from .config import RunConfig
from .constants import DEFAULT_GAME_ROUNDS, REGION_C, REGION_C1, REGION_D, REGION_D1_START
from .embed import embed_tree, perturb_source, random_alpha_tree, verify_reduction
from .errors import ClopenError
from .game import Challenger, GreedyChallenger, Outcome, RandomChallenger, check_transcript, initial_state, rank_game_play
from .hierarchy import GammaCode, check_trace, e_alpha, r_alpha_decide, random_gamma_spec, random_point_spec, witness_neighbor
from .models import FinSeq, Pair, Verdict
from .ordinal import (
    OMEGA,
    Label,
    Ordinal,
    cmp_ordinal,
    enumerate_below,
    enumeration_index,
    enumeration_window,
    format_ordinal,
    parse_ordinal,
)
from .pointspec import PointSpec
from .rank import TStar, pullback_graph, rank_upper, tree_rank
from .serialization import AlphaTreeDoc, CheckDoc, SuiteDoc, TraceDoc, TranscriptDoc, UniversalDoc, VerifyDoc
from .seqspace import sequence_key, sequences_of_length
from .universal import (
    FillerPolicy,
    RequestTriple,
    UniversalTree,
    fairness_horizon,
    find_witnesses,
    grade_activation,
    scan_true_clopen,
    validate_alpha_tree,
)

logger = logging.getLogger(__name__)

MAX_WITNESSES = 5

DESCENT_ALPHAS = ("w", "w*2", "w^2", "w^3+w")


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    measured: bool = False
    witnesses: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.measured or self.failed == 0

    def record(self, ok: bool, witness: Optional[str] = None) -> None:
        if ok:
            self.passed += 1
            return
        self.failed += 1
        if witness is not None and len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def to_doc(self) -> CheckDoc:
        return CheckDoc(
            name=self.name,
            passed=self.passed,
            failed=self.failed,
            measured=self.measured,
            witnesses=self.witnesses,
            notes=self.notes,
        )


@dataclass
class SuiteResult:
    suite: str
    seed: int
    quick: bool
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def check(self, name: str, measured: bool = False) -> CheckResult:
        result = CheckResult(name=name, measured=measured)
        self.checks.append(result)
        return result

    def to_doc(self) -> SuiteDoc:
        return SuiteDoc(
            suite=self.suite,
            seed=self.seed,
            quick=self.quick,
            ok=self.ok,
            checks=[check.to_doc() for check in self.checks],
        )


SuiteRunner = Callable[[RunConfig, random.Random, SuiteResult], None]


def _random_ordinal(rng: random.Random, max_exponent: int = 3, max_terms: int = 3) -> Ordinal:
    terms = []
    for exponent in sorted(rng.sample(range(max_exponent + 1), rng.randint(0, max_terms)), reverse=True):
        terms.append((Ordinal.finite(exponent), rng.randint(1, 4)))
    return Ordinal(tuple(terms))


def ordinal_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    samples = config.scaled(2000, 200)
    order = result.check("order-laws")
    text = result.check("text-roundtrip")
    enumeration = result.check("enumeration")
    for _ in range(samples):
        a, b, c = (_random_ordinal(rng) for _ in range(3))
        antisymmetric = cmp_ordinal(a, b) == -cmp_ordinal(b, a)
        transitive = not (a < b and b < c) or a < c
        order.record(antisymmetric and transitive, f"{a}, {b}, {c}")
        text.record(parse_ordinal(format_ordinal(a)) == a, format_ordinal(a))
    for alpha_text in DESCENT_ALPHAS:
        alpha = parse_ordinal(alpha_text)
        window = enumeration_window(alpha, config.enumeration_window)
        distinct = len(set(window)) == len(window)
        below = all(beta < alpha for beta in window)
        inverse = all(enumeration_index(alpha, beta) == k for k, beta in enumerate(window))
        enumeration.record(distinct and below and inverse, alpha_text)
        deep = enumerate_below(alpha, config.scaled(500, 60))
        enumeration.record(deep < alpha and enumeration_index(alpha, deep) == config.scaled(500, 60), alpha_text)


def _random_pair(rng: random.Random, alpha: Ordinal, window: int) -> Tuple[Point, Point]:
    x = random_point_spec(rng, max_value=6, prefix_len=rng.randint(1, 6), period_len=rng.randint(1, 2))
    y = random_gamma_spec(rng, alpha, window, max_pointer=6, prefix_len=rng.randint(1, 6), period_len=rng.randint(1, 2))
    return Point.from_spec(x), Point.from_spec(y)


def descent_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    per_alpha = config.scaled(2500, 100)
    check = result.check("descent-trace")
    for alpha_text in DESCENT_ALPHAS:
        alpha = parse_ordinal(alpha_text)
        for _ in range(per_alpha):
            x, y = _random_pair(rng, alpha, config.enumeration_window)
            trace = r_alpha_decide(alpha, x, y)
            problems = check_trace(trace)
            witness = f"{TraceDoc.of(trace, x, y).model_dump_json()}: {problems}" if problems else None
            check.record(not problems, witness)


def _extend(rng: random.Random, prefix: Tuple[object, ...], tail: Callable[[], object]) -> Point:
    return Point.from_spec(PointSpec(prefix=prefix + tuple(tail() for _ in range(rng.randint(0, 4))), period=(tail(),)))


def determinacy_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    traces = config.scaled(1000, 40)
    extensions = config.scaled(100, 10)
    check = result.check("prefix-determinacy")
    alpha = parse_ordinal("w^2")
    labels = (Verdict.IN, Verdict.OUT) + enumeration_window(alpha, config.enumeration_window)
    for _ in range(traces):
        x, y = _random_pair(rng, alpha, config.enumeration_window)
        trace = r_alpha_decide(alpha, x, y)
        x_prefix, y_prefix = x.prefix(trace.x_depth), y.prefix(trace.y_depth)
        for _ in range(extensions):
            x2 = _extend(rng, x_prefix, lambda: rng.randrange(8))
            y2 = _extend(rng, y_prefix, lambda: (rng.randrange(8), rng.choice(labels)))
            again = r_alpha_decide(alpha, x2, y2)
            ok = again.verdict is trace.verdict
            check.record(ok, None if ok else f"x={x_prefix} y={y_prefix}: {trace.verdict.value} vs {again.verdict.value}")


def _region_first(rng: random.Random, side: str) -> int:
    if side == "A":
        return rng.choice((REGION_C, REGION_C1))
    return rng.choice((REGION_D, REGION_D1_START, REGION_D1_START + rng.randrange(4)))


def bipartite_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    samples = config.scaled(1000, 60)
    alpha = OMEGA
    graph = e_alpha(alpha)
    same_side = result.check("same-side-never-in")
    neighbours = result.check("witness-neighbour")
    seen: Set[Pair] = set()
    for _ in range(samples * 20):
        if len(seen) == samples:
            break
        side = rng.choice("AB")
        length = rng.randint(1, 6)
        s = (_region_first(rng, side),) + tuple(rng.randrange(10) for _ in range(length - 1))
        t = (_region_first(rng, side),) + tuple(rng.randrange(10) for _ in range(length - 1))
        if s == t or (s, t) in seen or (t, s) in seen:
            continue
        seen.add((s, t))
        verdict = graph.decide_rect(s, t)
        same_side.record(verdict is not Verdict.IN, f"{s}, {t}")
    if len(seen) < samples:
        same_side.notes.append(f"drew only {len(seen)} distinct pairs of {samples}")
    for _ in range(samples):
        first = rng.choice((REGION_C, REGION_D, REGION_C1, REGION_D1_START + rng.randrange(3)))
        spec = random_point_spec(rng, max_value=10, prefix_len=rng.randint(0, 5))
        x = Point.from_spec(PointSpec(prefix=(first,) + spec.prefix, period=spec.period))
        try:
            y = witness_neighbor(alpha, x, config.fuel, graph)
            ok = decide_pair(graph, x, y, config.fuel).verdict is Verdict.IN
            neighbours.record(ok, repr(x))
        except ClopenError as error:
            neighbours.record(False, f"{x!r}: {error}")


def game_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    top = config.scaled(50, 8)
    seeds = config.scaled(20, 3)
    alpha = OMEGA
    greedy = result.check("greedy-finite")
    randomized = result.check("random-finite")
    limit = result.check("omega-start")

    def play(gamma: Ordinal, challenger: Challenger) -> List[str]:
        transcript = rank_game_play(alpha, initial_state(alpha, gamma), challenger, DEFAULT_GAME_ROUNDS)
        problems = check_transcript(transcript)
        if transcript.outcome is not Outcome.REFUTED:
            problems.append(f"outcome {transcript.outcome.value}: {transcript.diagnosis}")
        if challenger.name == "greedy" and gamma.is_finite and transcript.survived != gamma.finite_value:
            problems.append(f"survived {transcript.survived} rounds, expected {gamma}")
        return problems

    for value in range(top + 1):
        gamma = Ordinal.finite(value)
        problems = play(gamma, GreedyChallenger(config.enumeration_window))
        greedy.record(not problems, f"gamma={value}: {problems}")
        for index in range(seeds):
            challenger = RandomChallenger(random.Random(f"{config.seed}:game:{value}:{index}"), config.enumeration_window)
            problems = play(gamma, challenger)
            randomized.record(not problems, f"gamma={value} seed={index}: {problems}")
    above = parse_ordinal("w^2")
    for index in range(seeds + 1):
        challenger = (
            GreedyChallenger(config.enumeration_window)
            if index == 0
            else RandomChallenger(random.Random(f"{config.seed}:game:w:{index}"), config.enumeration_window)
        )
        transcript = rank_game_play(above, initial_state(above, OMEGA), challenger, DEFAULT_GAME_ROUNDS)
        problems = check_transcript(transcript)
        first = transcript.rounds[0].claim if transcript.rounds else None
        if first is None or not first.is_finite or first.finite_value >= config.enumeration_window:
            problems.append(f"first claim {first} is not a natural below {config.enumeration_window}")
        if transcript.outcome is not Outcome.REFUTED:
            problems.append(f"outcome {transcript.outcome.value}")
        limit.record(not problems, f"{challenger.name} #{index}: {problems}")


def _naive_rank(children: Dict[Pair, List[Pair]], node: Pair) -> int:
    kids = children.get(node, [])
    if not kids:
        return 0
    return max(_naive_rank(children, kid) for kid in kids) + 1


def _random_finite_tree(rng: random.Random, max_nodes: int) -> Dict[Pair, List[Pair]]:
    root: Pair = ((), ())
    children: Dict[Pair, List[Pair]] = {}
    frontier = [root]
    count = 1
    while frontier and count < max_nodes:
        node = frontier.pop(rng.randrange(len(frontier)))
        kids = []
        for i in range(rng.randint(0, 4)):
            if count >= max_nodes:
                break
            kids.append((node[0] + (i,), node[1] + (i,)))
            count += 1
        if kids:
            children[node] = kids
            frontier.extend(kids)
    return children


def _random_rect(rng: random.Random, branch_bound: int, length: int) -> Pair:
    while True:
        s = (REGION_C,) + tuple(rng.randrange(branch_bound) for _ in range(length - 1))
        t = (REGION_D,) + tuple(rng.randrange(branch_bound) for _ in range(length - 1))
        if rng.random() < 0.3:
            t = (_region_first(rng, rng.choice("AB")),) + t[1:]
        if s != t:
            return s, t


def rank_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    oracle = result.check("rank-oracle")
    for _ in range(config.scaled(100, 15)):
        children = _random_finite_tree(rng, rng.randint(1, 500))
        root: Pair = ((), ())
        fast = tree_rank(TStar.from_edges(root, children)).finite_value
        slow = _naive_rank(children, root)
        oracle.record(fast == slow, f"{len(children)} inner nodes: {fast} vs {slow}")

    graph = e_alpha(OMEGA)
    bounds = (2, 4, 8) if not config.quick else (2, 4)
    monotone = result.check("branch-monotone")
    for _ in range(config.scaled(50, 8)):
        s, t = _random_rect(rng, 2, 2)
        values = [rank_upper(graph, s, t, b, len(s) + 2).value for b in bounds]
        ok = all(a <= b for a, b in zip(values, values[1:]))
        monotone.record(ok, f"{s}, {t}: {[str(v) for v in values]}")

    nested = result.check("nested-rectangles")
    depth = config.depth_bound
    for _ in range(config.scaled(200, 20)):
        s, t = _random_rect(rng, config.branch_bound, 2)
        extra = rng.randint(1, 2)
        s2 = s + tuple(rng.randrange(config.branch_bound) for _ in range(extra))
        t2 = t + tuple(rng.randrange(config.branch_bound) for _ in range(extra))
        outer = rank_upper(graph, s, t, config.branch_bound, depth).value
        inner = rank_upper(graph, s2, t2, config.branch_bound, depth).value
        nested.record(inner <= outer, f"{s2}, {t2} inside {s}, {t}: {inner} > {outer}")

    pullback = result.check("pullback-monotone")
    pulled = pullback_graph(graph, lambda s: tuple(2 * entry for entry in s))
    for _ in range(config.scaled(50, 8)):
        s, t = _random_rect(rng, 2, 2)
        image_s, image_t = tuple(2 * e for e in s), tuple(2 * e for e in t)
        below = rank_upper(pulled, s, t, 2, len(s) + 2).value
        above = rank_upper(graph, image_s, image_t, 4, len(s) + 2).value
        pullback.record(below <= above, f"{s}, {t}: {below} > {above}")


def _spread_request(rng: random.Random, universal: UniversalTree, labels: Tuple[Label, ...]) -> RequestTriple:
    """A triple whose parent is any node built so far, listing up to three
    nodes of the next level with random labels."""
    p = rng.choice(universal.order)
    level = universal.tree.level(len(p) + 1)
    chosen = rng.sample(level, min(len(level), rng.randint(0, 3)))
    return RequestTriple(p=p, assignments=tuple((s, rng.choice(labels)) for s in sorted(chosen, key=sequence_key)))


def universal_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    alpha = parse_ordinal("w^2")
    steps = config.scaled(10_000, 1_000)
    every = config.scaled(1_000, 250)
    validity = result.check("checkpoint-validity")
    fairness = result.check("fair-witnesses")
    demanded = result.check("demand-witnesses")
    lprime = result.check("true-clopen-scan")
    for variant in (FillerPolicy.PLAIN, FillerPolicy.TRUE_CLOPEN):
        universal = UniversalTree(alpha, variant)
        for _ in range(steps // every):
            universal.run(every)
            report = validate_alpha_tree(universal.tree)
            validity.record(report.ok, f"{variant.value} step {universal.step}: {report.violations[:1]}")
        if variant is FillerPolicy.TRUE_CLOPEN:
            offenders = scan_true_clopen(universal.tree)
            lprime.record(not offenders, f"{offenders[:3]}")
        requests = 0
        attempts = 0
        while requests < config.scaled(250, 20) and attempts < 50 * config.scaled(250, 20):
            attempts += 1
            grade = rng.randint(1, 3)
            if universal.cursor < grade_activation(grade):
                continue
            request = universal.universe(grade).unrank(rng.randrange(universal.universe(grade).size))
            if universal.inconsistency(request) is not None:
                continue
            requests += 1
            horizon = fairness_horizon(universal, grade, 3)
            try:
                found = find_witnesses(universal, request, 3, horizon, demand=False)
                fairness.record(len(set(found)) == 3, request.describe())
            except ClopenError as error:
                fairness.record(False, f"{variant.value} {request.describe()}: {error}")
        wanted = config.scaled(250, 20)
        labels = (Verdict.IN, Verdict.OUT) + enumeration_window(alpha, config.enumeration_window)
        parents: Set[FinSeq] = set()
        served = 0
        attempts = 0
        while served < wanted and attempts < 50 * wanted:
            attempts += 1
            request = _spread_request(rng, universal, labels)
            if universal.inconsistency(request) is not None:
                continue
            served += 1
            parents.add(request.p)
            existing = universal.children(request.p)
            try:
                found = find_witnesses(universal, request, 3, horizon=3, exclude=existing)
                fresh = len(set(found)) == 3 and not set(found) & set(existing)
                demanded.record(fresh and all(universal.matches(t, request) for t in found), request.describe())
            except ClopenError as error:
                demanded.record(False, f"{variant.value} {request.describe()}: {error}")
        demanded.notes.append(f"{variant.value}: {served} requests over {len(parents)} of {len(universal.order)} nodes")
        report = validate_alpha_tree(universal.tree)
        validity.record(report.ok, f"{variant.value} after demands: {report.violations[:1]}")


def embed_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    alpha = parse_ordinal("w^2")
    universal = UniversalTree(alpha)
    embedded = result.check("embedding")
    reduction = result.check("reduction-agreement")
    faults = result.check("fault-detection")
    samples = config.scaled(200, 20)
    for index in range(config.scaled(100, 10)):
        source = random_alpha_tree(rng, alpha, max_nodes=40, max_depth=6, window=8)
        try:
            embedding = embed_tree(source, universal, config.horizon)
        except ClopenError as error:
            embedded.record(False, f"tree #{index}: {error}")
            continue
        embedded.record(True)
        report = verify_reduction(embedding, samples, config.fuel, rng)
        reduction.record(report.ok, f"tree #{index}: {[str(d) for d in report.disagreements[:2]]}")
        broken = embedding.with_source(perturb_source(source, rng))
        faults.record(bool(broken.label_mismatches()), f"tree #{index}: perturbation went unnoticed")


def roundtrip_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    branch_bound = config.branch_bound
    depth_bound = config.scaled(config.depth_bound, min(config.depth_bound, 3))
    graph = e_alpha(OMEGA)
    canonical = canonical_alpha_tree(graph, branch_bound, depth_bound)
    valid = result.check("canonical-valid")
    report = validate_alpha_tree(canonical.tree)
    valid.record(report.ok, f"{report.violations[:1]}")
    agreement = result.check("labeling-agreement")
    relabelled = graph_from_labeling(canonical.tree.label, name="canonical")
    for length in range(1, depth_bound + 1):
        level = list(sequences_of_length(branch_bound, length))
        for i, s in enumerate(level):
            for t in level[i + 1 :]:
                expected, actual = graph.decide_rect(s, t), relabelled.decide_rect(s, t)
                ok = expected is actual
                agreement.record(ok, None if ok else f"{s}, {t}: {expected.value} vs {actual.value}")
    documents = result.check("document-roundtrip")
    tree_doc = AlphaTreeDoc.of(canonical.tree)
    documents.record(tree_doc.to_tree() == canonical.tree, "canonical tree")
    universal = UniversalTree(parse_ordinal("w^2"))
    universal.run(config.scaled(500, 100))
    universal_doc = UniversalDoc.of(universal)
    again = UniversalDoc.model_validate_json(universal_doc.model_dump_json())
    documents.record(again == universal_doc and UniversalDoc.of(again.to_universal()) == universal_doc, "universal")
    alpha = parse_ordinal("w*2")
    greedy = GreedyChallenger(config.enumeration_window)
    transcript = rank_game_play(alpha, initial_state(alpha, OMEGA), greedy, DEFAULT_GAME_ROUNDS)
    read_back = TranscriptDoc.model_validate_json(TranscriptDoc.of(transcript).model_dump_json()).to_transcript()
    moves = [r.move for r in read_back.rounds] == [r.move for r in transcript.rounds]
    documents.record(moves and check_transcript(read_back) == [], "game transcript")


def _stabilization_rect(alpha: Ordinal, beta: Ordinal) -> Pair:
    """A rectangle of E_alpha in C x D waiting on t with pending beta."""
    code = GammaCode(alpha)
    filler = code.encode((0, Verdict.OUT))
    s = (REGION_C, 2, 3, 0)
    t = (REGION_D, filler, filler, code.encode((1, beta)))
    return s, t


def stabilization_suite(config: RunConfig, rng: random.Random, result: SuiteResult) -> None:
    """Measured only: truncation ranks against the pending ordinal."""
    alpha = OMEGA
    graph = e_alpha(alpha)
    check = result.check("rank-stabilization", measured=True)
    for beta in range(config.scaled(4, 2)):
        s, t = _stabilization_rect(alpha, Ordinal.finite(beta))
        for branch_bound in (2, 3):
            for extra in (1, 2):
                bound = rank_upper(graph, s, t, branch_bound, len(s) + extra)
                check.notes.append(
                    f"beta={beta} B={branch_bound} D={len(s) + extra}: rank {bound.value}"
                    f" complete={bound.complete} below-state={bound.unbounded_branching}"
                )
                check.record(True)


SUITES: Dict[str, SuiteRunner] = {
    "ordinal": ordinal_suite,
    "descent": descent_suite,
    "determinacy": determinacy_suite,
    "bipartite": bipartite_suite,
    "game": game_suite,
    "rank": rank_suite,
    "universal": universal_suite,
    "embed": embed_suite,
    "roundtrip": roundtrip_suite,
    "rank-stabilization": stabilization_suite,
}


def run_suite(name: str, config: RunConfig) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    result = SuiteResult(suite=name, seed=config.seed, quick=config.quick)
    started = time.perf_counter()
    SUITES[name](config, random.Random(f"{config.seed}:{name}"), result)
    logger.info("suite %s finished in %.2fs (ok=%s)", name, time.perf_counter() - started, result.ok)
    return result


def run_suites(name: str, config: RunConfig) -> VerifyDoc:
    names = list(SUITES) if name == "all" else [name]
    results = [run_suite(suite, config) for suite in names]
    return VerifyDoc(seed=config.seed, ok=all(r.ok for r in results), suites=[r.to_doc() for r in results])
