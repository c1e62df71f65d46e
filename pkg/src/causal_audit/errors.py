"""Exception hierarchy.

Everything raised deliberately by the library derives from :class:`CausalAuditError`,
so callers (the CLI in particular) can separate modelling mistakes from bugs.
"""


class CausalAuditError(Exception):
    pass


class ModelError(CausalAuditError, ValueError):
    """A model, assignment or intervention violates a structural invariant."""


class CycleError(ModelError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("edge set contains the cycle " + " -> ".join(self.cycle))


class UnknownVariableError(ModelError):
    def __init__(self, name, context=""):
        self.name = name
        msg = f"unknown variable {name!r}"
        super().__init__(f"{msg} ({context})" if context else msg)


class UnknownStateError(ModelError):
    def __init__(self, variable, state):
        self.variable = variable
        self.state = state
        super().__init__(f"variable {variable!r} has no state {state!r}")


class DuplicateVariableError(ModelError):
    pass


class DuplicateStateError(ModelError):
    pass


class CptShapeError(ModelError):
    pass


class ParentMismatchError(ModelError):
    pass


class ProbabilityRangeError(ModelError):
    pass


class MissingCptError(ModelError):
    pass


class NormalizationError(ModelError):
    def __init__(self, child, row, total, line=None):
        self.child = child
        self.row = row
        self.total = total
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(
            f"{where}CPT row {row} of {child!r} sums to {total!r}, not 1"
        )


class PartialAssignmentError(ModelError):
    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__("assignment does not bind " + ", ".join(self.missing))


class ModelTooLargeError(ModelError):
    pass


class ZeroConditioningError(CausalAuditError, ZeroDivisionError):
    """The conditioning event has probability zero."""

    def __init__(self, given, message=None):
        self.given = dict(given)
        if message is None:
            rendered = ", ".join(f"{k}={v}" for k, v in self.given.items()) or "<empty>"
            message = f"conditioning event {{{rendered}}} has probability 0"
        super().__init__(message)


class ShapeMismatchError(ModelError):
    pass


class TargetMismatchError(ModelError):
    pass


class PathExplosionError(CausalAuditError):
    def __init__(self, source, sink, cap):
        self.cap = cap
        super().__init__(f"more than {cap} directed paths from {source!r} to {sink!r}")


class InfeasibleParameterError(CausalAuditError, ValueError):
    pass


class ModelSyntaxError(CausalAuditError):
    """Malformed model document. Carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class DuplicateSectionError(ModelSyntaxError):
    pass
