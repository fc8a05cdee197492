class EcmError(Exception):
    """Root of every error raised by ecmod."""


class CurveError(EcmError, ValueError):
    pass


class SingularCurve(CurveError):
    pass


class BasePointOffCurve(CurveError):
    pass


class WrongOrder(CurveError):
    pass


class PointOffCurve(CurveError):
    pass


class FieldTooLarge(CurveError):
    pass


class InfinityPoint(CurveError):
    pass


class CurveInvalid(CurveError):
    pass


class UnknownCurve(CurveError):
    pass


class CurveFileError(CurveError):
    pass


class GeometryError(EcmError, ValueError):
    pass


class EmptyInput(GeometryError):
    pass


class DegenerateAllZero(GeometryError):
    pass


class TooFewPoints(GeometryError):
    pass


class UnsupportedOrder(GeometryError):
    pass


class GenerationError(EcmError, ValueError):
    pass


class EmptyPool(GenerationError):
    pass


class PoolTooSmall(GenerationError):
    pass


class ConstraintInfeasible(GenerationError):
    pass


class ExhaustedAttempts(GenerationError):
    """Raised when tuple generation stops before reaching the requested count.

    Args:
        bank: The partial bank built so far (flagged ``partial``).
        attempts: Number of attempts consumed.
    """

    def __init__(self, bank, attempts: int):
        self.bank = bank
        self.attempts = attempts
        super().__init__(
            f"Found {len(bank.tuples)} of {bank.n_tuples} tuples after "
            f"{attempts} attempts."
        )


class ModemError(EcmError, ValueError):
    pass


class LengthNotDivisible(ModemError):
    pass


class ScheduleTooShort(ModemError):
    pass


class BankMismatch(ModemError):
    pass


class SimulationError(EcmError, ValueError):
    pass


class NoSamples(SimulationError):
    pass


class IoFailure(EcmError, OSError):
    pass
