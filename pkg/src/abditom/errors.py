"""Exception types raised across the abditom package."""


class AbditomError(Exception):
    """Base class for all package-specific errors."""


class ParseError(AbditomError):
    """Syntax error in rule-language source text.

    Carries the 1-based line and column of the offending token and a short
    description of what was expected there.
    """

    def __init__(self, line: int, col: int, expected: str):
        self.line = line
        self.col = col
        self.expected = expected
        super().__init__(f"parse error at {line}:{col}: expected {expected}")


class TomRestrictionViolated(AbditomError):
    """A knows/2 clause whose fact argument does not recur in its own body."""


class AbduciblePredicateConflict(AbditomError):
    """A predicate declared abducible also heads an ordinary clause."""

    def __init__(self, pred: str):
        self.pred = pred
        super().__init__(f"abducible predicate also heads a clause: {pred}")


class DepthExceeded(AbditomError):
    """Resolution exceeded the configured depth limit."""


class FlounderedNaf(AbditomError):
    """Negation-as-failure reached with unbound variables in its goal."""


class NonGroundBuiltin(AbditomError):
    """A builtin comparison was evaluated over non-ground operands."""


class BuiltinTypeError(AbditomError):
    """Arithmetic over something that is not an integer."""


class NonGroundAbducible(AbditomError):
    """abducible/1 produced a non-ground candidate."""


class ExplanationLimitExceeded(AbditomError):
    """Abductive search visited more candidates than the configured cap."""


class NonGroundKnowledge(AbditomError):
    """knows/2 produced a non-ground fact during a perspective shift."""


class EmptyDnf(AbditomError):
    """Attempted to build a constraint from zero explanations."""


class FormLimitExceeded(AbditomError):
    """Skolemisation produced more candidate forms than the configured cap."""


class InstanceLimitExceeded(AbditomError):
    """Grounding produced more instances than the configured cap."""


class NoActionSelected(AbditomError):
    """No strategy rule produced a unanimous action."""


class InvalidPlayerCount(AbditomError):
    """Game requested with a player count outside 2..5."""


class IllegalAction(AbditomError):
    """Action applied to a state where it is not legal."""


class GameOver(AbditomError):
    """Action applied to a finished game."""


class MissingFallbackRule(AbditomError):
    """Strategy file lacks the always-applicable fallback rules."""


class UnannotatedActionRule(AbditomError):
    """Action rule without a priority annotation."""


class UnknownMetric(AbditomError):
    """Plot requested for a metric that is not recorded."""


class EmptyData(AbditomError):
    """Plot requested over zero usable data points."""
