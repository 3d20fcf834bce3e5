"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: schema problems -> 2, infeasible
gap ladders -> 3, solver failures -> 4, gate failures -> 1.
"""


class InputError(ValueError):
    """Caller passed dimensionally or structurally invalid data."""


class CapabilityError(RuntimeError):
    """Request exceeds a documented capability bound (order, truncation, ladder depth)."""


class PreconditionError(ValueError):
    """A mathematical precondition (gap window, mode support) is violated."""


class ConvergenceError(RuntimeError):
    """A fixed-point or power iteration failed to contract."""


class StiffnessError(RuntimeError):
    """Adaptive stepping rejected more than the allowed number of halvings."""


class CoverageError(RuntimeError):
    """Query point lies outside the sampled blend/mollify domain."""
