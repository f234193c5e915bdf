"""Exception types raised across the package."""


class SadkitError(Exception):
    """Base class for every error raised by sadkit."""


class NotStrong(SadkitError):
    pass


class NotTwoArcStrong(SadkitError):
    pass


class PreconditionViolated(SadkitError):
    pass


class InvalidPartition(SadkitError):
    """A proposed (V1, V2) split violates one of the split-digraph rules."""

    def __init__(self, rule, detail=""):
        self.rule = rule
        self.detail = detail
        msg = rule if not detail else f"{rule}: {detail}"
        super().__init__(msg)


class InternalInvariantFailure(SadkitError):
    """A construction produced an object failing its own postcondition.

    This signals a bug in the construction, never a property of the input.
    """


class NoPathPair(InternalInvariantFailure):
    pass


class BudgetExceeded(SadkitError):
    pass


class ParseError(SadkitError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class InvalidFlags(SadkitError):
    pass


class GenerationFailed(SadkitError):
    pass
