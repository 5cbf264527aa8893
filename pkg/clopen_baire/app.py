"""Command handlers behind the `clopen_baire` entry point."""

import argparse
import logging
import sys
from typing import Optional, Union

from pydantic import BaseModel, ValidationError

from .clopen import Point, graph_from_labeling
from .constants import BANNER, EXIT_EXHAUSTED, EXIT_OK, EXIT_PROPERTY_FAILURE, EXIT_USAGE
from .embed import embed_tree, verify_reduction
from .errors import ClopenError, DomainViolation, EmbeddingMismatchError, FuelExhaustedError, HorizonExhaustedError
from .game import GreedyChallenger, Outcome, RandomChallenger, check_transcript, initial_state, rank_game_play
from .hierarchy import r_alpha_decide, random_gamma_spec, random_point_spec
from .io import ConsoleIO, FileIO, IOInterface
from .models import FinSeq
from .ordinal import Ordinal, parse_ordinal
from .pointspec import parse_point_spec
from .rank import rank_upper
from .serialization import EmbeddingDoc, RankDoc, TraceDoc, TranscriptDoc, UniversalDoc, dump_document, universal_to_dot
from .suites import run_suites
from .universal import FillerPolicy, UniversalTree
from .workbench import ClopenWorkbench

logger = logging.getLogger(__name__)


class ExitStatus(Exception):
    """Ends a command early with an exit code and a diagnostic."""

    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def parse_sequence(text: str) -> FinSeq:
    """`0,1,5` -> (0, 1, 5); the empty string is the empty sequence."""
    text = text.strip().strip("<>")
    if not text:
        return ()
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise DomainViolation(f"{text!r} is not a comma list of naturals") from None
    if any(value < 0 for value in values):
        raise DomainViolation(f"{text!r} has a negative entry")
    return values


class ClopenCommandApp:
    """Runs one parsed command and maps its outcome to an exit code."""

    def __init__(
        self,
        workbench: Optional[ClopenWorkbench] = None,
        io: Optional[IOInterface] = None,
        err_io: Optional[IOInterface] = None,
    ) -> None:
        self.workbench = workbench or ClopenWorkbench()
        self.config = self.workbench.config
        self.io = io
        self.err_io = err_io or ConsoleIO(sys.stderr)

    def run(self, args: argparse.Namespace) -> int:
        handlers = {
            "decide": self._handle_decide,
            "rank": self._handle_rank,
            "game": self._handle_game,
            "universal": self._handle_universal,
            "embed": self._handle_embed,
            "verify": self._handle_verify,
        }
        command = getattr(args, "command", None)
        if command not in handlers:
            self.err_io.write(BANNER)
            self.err_io.write("Choose a command: " + ", ".join(handlers))
            return EXIT_USAGE
        try:
            return handlers[command](args)
        except ExitStatus as status:
            self.err_io.write(f"{command}: {status}")
            return status.code
        except (FuelExhaustedError, HorizonExhaustedError) as error:
            self.err_io.write(f"{command}: {error}")
            return EXIT_EXHAUSTED
        except EmbeddingMismatchError as error:
            self.err_io.write(f"{command}: {error}")
            for problem in error.problems:
                self.err_io.write(f"  {problem}")
            return EXIT_PROPERTY_FAILURE
        except (ClopenError, ValidationError, ValueError, OSError) as error:
            self.err_io.write(f"{command}: {error}")
            return EXIT_USAGE

    # Output

    def _emit(self, document: BaseModel, dot: Optional[str] = None) -> None:
        if self.config.output_format == "dot":
            if dot is None:
                raise ExitStatus(EXIT_USAGE, "this command has no DOT form; use --format json")
            payload = dot
        else:
            payload = dump_document(document)
        sink = self.io or (FileIO(self.config.output) if self.config.output else ConsoleIO())
        sink.write(payload)
        sink.close()

    # Commands

    def _handle_decide(self, args: argparse.Namespace) -> int:
        alpha = parse_ordinal(args.alpha)
        if args.random:
            rng = self.workbench.rng("decide")
            x_spec = random_point_spec(rng, max_value=6, prefix_len=rng.randint(1, 6), period_len=rng.randint(1, 2))
            y_spec = random_gamma_spec(
                rng, alpha, self.config.enumeration_window, max_pointer=6, prefix_len=rng.randint(1, 6)
            )
        elif args.x is None or args.y is None:
            raise ExitStatus(EXIT_USAGE, "give --x and --y, or --random")
        else:
            x_spec, y_spec = parse_point_spec(args.x), parse_point_spec(args.y)
        if x_spec.is_gamma or not y_spec.is_gamma:
            raise DomainViolation("--x takes naturals and --y takes Gamma entries such as (1|in)")
        x, y = Point.from_spec(x_spec), Point.from_spec(y_spec)
        trace = r_alpha_decide(alpha, x, y)
        self._emit(TraceDoc.of(trace, x, y))
        return EXIT_OK

    def _handle_rank(self, args: argparse.Namespace) -> int:
        branch_bound = args.branch or self.config.branch_bound
        depth_bound = args.depth if args.depth is not None else self.config.depth_bound
        s, t = parse_sequence(args.s), parse_sequence(args.t)
        if args.graph == "ealpha":
            alpha = parse_ordinal(args.alpha)
            graph = self.workbench.graph(alpha)
        else:
            tree = self.workbench.store.read_tree(args.graph)
            graph = graph_from_labeling(tree.label, name=args.graph, domain=tree.nodes.__contains__)
        bound = rank_upper(graph, s, t, branch_bound, depth_bound)
        self._emit(RankDoc.of(graph.name, s, t, branch_bound, depth_bound, bound))
        return EXIT_OK

    def _handle_game(self, args: argparse.Namespace) -> int:
        alpha = parse_ordinal(args.alpha)
        gamma = parse_ordinal(args.gamma)
        window = self.config.enumeration_window
        if args.challenger == "greedy":
            challenger: Union[GreedyChallenger, RandomChallenger] = GreedyChallenger(window)
        else:
            challenger = RandomChallenger(self.workbench.rng("game"), window)
        transcript = rank_game_play(alpha, initial_state(alpha, gamma), challenger, args.rounds)
        self._emit(TranscriptDoc.of(transcript))
        problems = check_transcript(transcript)
        if problems:
            raise ExitStatus(EXIT_PROPERTY_FAILURE, "; ".join(problems))
        if transcript.outcome is Outcome.EXHAUSTED:
            raise ExitStatus(EXIT_EXHAUSTED, f"no refutation within {args.rounds} rounds")
        if transcript.outcome is Outcome.REJECTED:
            self.err_io.write(f"game: challenger move rejected: {transcript.diagnosis}")
        return EXIT_OK

    def _universal(self, alpha: Optional[Ordinal], variant: str, resume: Optional[str], steps: int) -> UniversalTree:
        """A fresh tree built to `steps`, or a saved one built `steps` further."""
        if resume:
            universal = self.workbench.load_universal(resume)
            universal.run(steps)
            return universal
        return self.workbench.universal(alpha, FillerPolicy(variant), steps)

    def _handle_universal(self, args: argparse.Namespace) -> int:
        alpha = None if args.resume else parse_ordinal(args.alpha)
        universal = self._universal(alpha, args.variant, args.resume, args.steps)
        self._emit(UniversalDoc.of(universal), dot=universal_to_dot(universal))
        return EXIT_OK

    def _handle_embed(self, args: argparse.Namespace) -> int:
        source = self.workbench.store.read_tree(args.tree)
        if args.universal == "fresh":
            alpha = parse_ordinal(args.alpha) if args.alpha else source.alpha
            universal = self._universal(alpha, args.variant, None, args.steps)
        else:
            universal = self._universal(None, args.variant, args.universal, args.steps)
        embedding = embed_tree(source, universal, self.config.horizon)
        if args.save_universal:
            self.workbench.store.write(args.save_universal, UniversalDoc.of(universal))
        target = args.save_universal or (None if args.universal == "fresh" else args.universal)
        self._emit(EmbeddingDoc.of(embedding, source=args.tree, target=target), dot=universal_to_dot(universal))
        if args.check_samples:
            report = verify_reduction(embedding, args.check_samples, self.config.fuel, self.workbench.rng("embed"))
            if not report.ok:
                for line in report.structural + report.label_mismatches + [str(d) for d in report.disagreements]:
                    self.err_io.write(f"  {line}")
                raise ExitStatus(EXIT_PROPERTY_FAILURE, "reduction check failed")
        return EXIT_OK

    def _handle_verify(self, args: argparse.Namespace) -> int:
        report = run_suites(args.suite, self.config)
        self._emit(report)
        if report.ok:
            return EXIT_OK
        for suite in report.suites:
            for check in suite.checks:
                if check.failed and not check.measured:
                    self.err_io.write(f"{suite.suite}/{check.name}: {check.failed} failed")
                    for witness in check.witnesses:
                        self.err_io.write(f"  {witness}")
        return EXIT_PROPERTY_FAILURE

