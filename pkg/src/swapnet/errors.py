"""Exception types shared across the package."""


class SwapnetError(Exception):
    """Base class for all swapnet errors."""


class ParameterOutOfDomain(SwapnetError):
    """A generator or search parameter violates its stated domain."""


class DisconnectedGraph(SwapnetError):
    """A connection graph that must be connected is not."""


class InvalidSwap(SwapnetError):
    """A swap violates its structural invariants (bad edge, duplicate add)."""


class DisconnectingSwap(SwapnetError):
    """Applying a swap would leave the connection graph disconnected."""


class PreconditionViolated(SwapnetError):
    """An operation was called on input outside its stated precondition."""


class NotInEquilibrium(SwapnetError):
    """An equilibrium-only construction stalled, so the input cannot be one."""


class BudgetExhausted(SwapnetError):
    """An exact search exceeded its configured node budget."""


class ReconstructionFailed(SwapnetError):
    """A bundled instance no longer satisfies its frozen behavioural contract."""


class CertificateMismatch(SwapnetError):
    """A generator's output disagrees with its own cost certificate."""


class InstanceFormatError(SwapnetError):
    """An instance file could not be parsed or failed validation."""
