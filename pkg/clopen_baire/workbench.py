"""Shared state for one command run."""

import logging
import random
from typing import Dict, Optional, Tuple

from .clopen import GraphOracle
from .config import RunConfig
from .hierarchy import e_alpha
from .ordinal import Ordinal
from .serialization import DocumentStore
from .universal import FillerPolicy, UniversalTree

logger = logging.getLogger(__name__)


class ClopenWorkbench:
    """Config, seeded randomness, and the graphs and universal trees a run builds.

    Every random stream is derived from the seed and a purpose label, so adding
    a consumer never shifts the draws of another.
    """

    def __init__(self, config: Optional[RunConfig] = None) -> None:
        self.config = config or RunConfig()
        self.store = DocumentStore()
        self._graphs: Dict[Ordinal, GraphOracle] = {}
        self._universals: Dict[Tuple[Ordinal, FillerPolicy], UniversalTree] = {}

    def rng(self, purpose: str) -> random.Random:
        return random.Random(f"{self.config.seed}:{purpose}")

    def graph(self, alpha: Ordinal) -> GraphOracle:
        """The cached E_alpha oracle."""
        if alpha not in self._graphs:
            self._graphs[alpha] = e_alpha(alpha)
        return self._graphs[alpha]

    def universal(self, alpha: Ordinal, variant: FillerPolicy = FillerPolicy.PLAIN, steps: int = 0) -> UniversalTree:
        """A universal tree for alpha, built to at least `steps` steps."""
        key = (alpha, variant)
        if key not in self._universals:
            self._universals[key] = UniversalTree(alpha, variant)
        universal = self._universals[key]
        if universal.step < steps:
            logger.debug("building universal %s tree from step %d to %d", variant.value, universal.step, steps)
            universal.run(steps - universal.step)
        return universal

    def load_universal(self, path: str) -> UniversalTree:
        universal = self.store.read_universal(path)
        self._universals[(universal.alpha, universal.variant)] = universal
        return universal
