"""Run configuration for Clopen Baire."""

import os
from typing import Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field

from .constants import (
    DEFAULT_BRANCH_BOUND,
    DEFAULT_DEPTH_BOUND,
    DEFAULT_ENUMERATION_WINDOW,
    DEFAULT_FUEL,
    DEFAULT_HORIZON,
    DEFAULT_SEED,
    SEED_ENV,
)


class RunConfig(BaseModel):
    """Everything a command's output may depend on besides its inputs."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(DEFAULT_SEED, ge=0, lt=1 << 64, description="Seed for every random choice")
    fuel: int = Field(DEFAULT_FUEL, ge=1, description="Longest prefix read when deciding a pair of points")
    horizon: int = Field(DEFAULT_HORIZON, ge=1, description="Build steps allowed per witness search")
    branch_bound: int = Field(DEFAULT_BRANCH_BOUND, ge=1, description="Largest entry + 1 in bounded explorations")
    depth_bound: int = Field(DEFAULT_DEPTH_BOUND, ge=0, description="Longest sequence in bounded explorations")
    enumeration_window: int = Field(DEFAULT_ENUMERATION_WINDOW, ge=1, description="Notations drawn below a limit")
    output: Optional[str] = Field(None, description="Write the result here instead of stdout")
    output_format: Literal["json", "dot"] = "json"
    quick: bool = Field(False, description="Scaled-down verification sizes")

    @classmethod
    def from_sources(cls, overrides: Mapping[str, object], environ: Optional[Mapping[str, str]] = None) -> "RunConfig":
        """Defaults, then the environment, then explicit overrides (None means unset)."""
        environ = os.environ if environ is None else environ
        values = {}
        if environ.get(SEED_ENV):
            values["seed"] = environ[SEED_ENV]
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls.model_validate(values)

    def scaled(self, full: int, quick: int) -> int:
        return quick if self.quick else full
