"""Constants for Clopen Baire."""

# Run defaults (overridable through RunConfig).
DEFAULT_SEED = 1
DEFAULT_FUEL = 64
DEFAULT_HORIZON = 20_000
DEFAULT_BRANCH_BOUND = 3
DEFAULT_DEPTH_BOUND = 5
# How many notations below a limit a challenger or sampler draws from.
DEFAULT_ENUMERATION_WINDOW = 31
DEFAULT_GAME_ROUNDS = 200

# Exit codes of the command-line driver.
EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3

# First coordinates of the four regions of E_alpha.
REGION_C = 0
REGION_D = 1
REGION_C1 = 2
REGION_D1_START = 3

SEED_ENV = "CLOPEN_BAIRE_SEED"
LOG_LEVEL_ENV = "CLOPEN_BAIRE_LOG_LEVEL"

BANNER = r"""
  ___ _                          ___       _
 / __| |___ _ __  ___ _ _       | _ ) __ _(_)_ _ ___
| (__| / _ \ '_ \/ -_) ' \      | _ \/ _` | | '_/ -_)
 \___|_\___/ .__/\___|_||_|     |___/\__,_|_|_| \___|
           |_|
"""
