"""abditom: an agent kernel that reads teammates' minds by abduction.

The package combines a small logic-programming core (SLDNF resolution with
strong negation and integrity constraints), perspective shifting over
knows/2 clauses, abductive explanation of observed actions, and an action
selector that fires a rule only when its body holds in every knowledge
completion.  A cooperative fireworks card game instantiates the kernel,
and a seeded harness runs reproducible experiments over it.
"""

from .abduction import AbduceLimits, AbducibleSet, abduce, abducible_set
from .assimilation import AicRecord, build_aic, install_aic, refine, update_aics
from .errors import AbditomError
from .harness import SweepConfig, sweep_records
from .kb import KnowledgeBase
from .parser import parse_clause, parse_program
from .perspective import PerspectiveProgram, shift_chain, shift_perspective
from .runtime import Agent, GameRecord, run_game
from .selection import Decision, SelectLimits, select_action
from .solver import SolveLimits, entails, solve, violates_imp

__version__ = "0.1.0"

__all__ = [
    "AbduceLimits",
    "AbducibleSet",
    "AbditomError",
    "Agent",
    "AicRecord",
    "Decision",
    "GameRecord",
    "KnowledgeBase",
    "PerspectiveProgram",
    "SelectLimits",
    "SolveLimits",
    "SweepConfig",
    "__version__",
    "abduce",
    "abducible_set",
    "build_aic",
    "entails",
    "install_aic",
    "parse_clause",
    "parse_program",
    "refine",
    "run_game",
    "select_action",
    "shift_chain",
    "shift_perspective",
    "solve",
    "sweep_records",
    "update_aics",
    "violates_imp",
]
