"""Exception taxonomy for the toolkit.

Every failure mode that callers are expected to handle gets its own class,
so orchestration code (CLI, verification sweeps) can map them to exit codes
without string matching.
"""


class CarnotError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(CarnotError, ValueError):
    pass


class PolyParseError(CarnotError, ValueError):
    def __init__(self, message, text=None, pos=None):
        if text is not None and pos is not None:
            message = f"{message} (at position {pos} in {text!r})"
        super().__init__(message)
        self.text = text
        self.pos = pos


class NotBracketGenerating(CarnotError):
    """Iterated brackets failed to span the tangent space at the point."""

    def __init__(self, rank, dim, depth):
        super().__init__(
            f"bracket rank {rank} < {dim} after words of length {depth}"
        )
        self.rank = rank
        self.dim = dim
        self.depth = depth


class ZeroDriftAtPoint(CarnotError):
    """The drift field vanishes at the base point."""


class NonNegativeOrder(CarnotError):
    """The drift has non-negative order, so no drift weight s can be assigned."""

    def __init__(self, order):
        super().__init__(f"field order at the point is {order} >= 0")
        self.order = order


class OrderExceedsCap(CarnotError):
    """No nonzero iterated derivative found up to the configured depth."""

    def __init__(self, depth):
        super().__init__(f"no nonzero iterated derivative up to depth {depth}")
        self.depth = depth


class CapTooSmall(CarnotError):
    """The truncation cap is too small for the requested construction."""


class RectificationFailed(CarnotError):
    """Drift straightening produced coordinates that fail verification."""


class LeftDomain(CarnotError):
    """A trajectory exited the integration safety box."""

    def __init__(self, time, state):
        super().__init__(f"trajectory left the safety box at t={time:.6g}")
        self.time = time
        self.state = state


class ProfileSingularity(CarnotError):
    """A time profile blows up inside the requested integration window."""


class NoFeasibleWitness(CarnotError):
    """The optimizer found no control meeting the endpoint tolerance."""

    def __init__(self, diagnostics):
        super().__init__(
            "no feasible witness within budget "
            f"(best endpoint error {diagnostics.get('best_endpoint_error')})"
        )
        self.diagnostics = diagnostics


class InsufficientSpan(CarnotError):
    """Not enough data, or not enough dynamic range, for a power-law fit."""


class ConfigError(CarnotError):
    pass
