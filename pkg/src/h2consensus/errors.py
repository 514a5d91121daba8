"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` means the input was
rejected (bad graph, infeasible parameters), :class:`NumericError` means a
valid input hit a numerical failure. The command-line front end maps them to
exit codes 2 and 1 respectively.
"""


class H2ConsensusError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(H2ConsensusError, ValueError):
    pass


class NumericError(H2ConsensusError, ArithmeticError):
    pass


# graph construction
class EmptyGraph(ValidationError):
    pass


class SelfLoop(ValidationError):
    pass


class DuplicateEdge(ValidationError):
    pass


class DisconnectedGraph(ValidationError):
    pass


class NotASpanningTree(ValidationError):
    pass


class NotATree(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class RankDeficientZ(ValidationError):
    pass


class InfeasibleMu(ValidationError):
    def __init__(self, mu, mu_max):
        self.mu = mu
        self.mu_max = mu_max
        super().__init__(
            f"mu={mu:g} is infeasible; feasible range is 0 <= mu <= {mu_max:g} (n/eps_min)"
        )


class UnstableStep(ValidationError):
    def __init__(self, dt, dt_max):
        self.dt = dt
        self.dt_max = dt_max
        super().__init__(
            f"dt={dt:g} violates the explicit Euler stability bound; use dt < {dt_max:.6g}"
        )


class EmptyInput(ValidationError):
    pass


class ParseError(ValidationError):
    pass


# numerics
class SingularTreeGram(NumericError):
    pass


class SingularCycleGram(NumericError):
    pass


class UnstablePair(NumericError):
    pass


class UnstableA(NumericError):
    pass


class IllConditioned(NumericError):
    pass


class NonConvergence(NumericError):
    pass
