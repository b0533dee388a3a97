"""Exception hierarchy shared across the library."""


class PsmtError(Exception):
    """Base class for all library errors."""


class SpecMismatch(PsmtError):
    """Operands belong to different field specs."""


class DivisionByZero(PsmtError):
    """Inversion or division by the zero element."""


class TupleTooLong(PsmtError):
    """Tuple encoding exceeds the configured length bound."""


class DecodeError(PsmtError):
    """Payload is not a valid tuple encoding."""


class ParamError(PsmtError):
    """Invalid secret-sharing or decoding parameters."""


class InsufficientShares(PsmtError):
    """Fewer shares than the reconstruction threshold."""


class MissingEntries(PsmtError):
    """Received word has unfilled slots where a full word is required."""


class OracleTooLarge(PsmtError):
    """Brute-force decoding search space exceeds the configured limit."""


class SizeLimit(PsmtError):
    """Instance too large for exhaustive connectivity analysis."""


class PreconditionError(PsmtError):
    """Topology does not satisfy a protocol's connectivity precondition."""


class StrategyInapplicable(PsmtError):
    """Adversary strategy requires structure the topology does not supply."""
