class PhasePlotError(Exception):

    def __init__(self, message: str, **context):
        self.message = message
        self.context = context
        super().__init__(self.message)


class JobConfigError(PhasePlotError):
    """Bad flag values, unknown config keys, unparseable job input."""


class ExpressionSyntaxError(PhasePlotError):

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}", offset=offset)


class UnknownIdentifier(ExpressionSyntaxError):
    pass


class ArityMismatch(ExpressionSyntaxError):
    pass


class NonHolomorphicError(PhasePlotError):
    pass


class ZeroOutsideDisk(PhasePlotError):
    pass


class NonUnimodularC(PhasePlotError):
    pass


class SingularOnPath(PhasePlotError):

    def __init__(self, message: str, point: complex):
        self.point = point
        super().__init__(message, point=point)


class RefinementExhausted(PhasePlotError):

    def __init__(self, message: str, depth: int):
        self.depth = depth
        super().__init__(message, depth=depth)


class SingularPoint(PhasePlotError):
    pass


class SingularOnCircle(PhasePlotError):
    pass


class TooFewValidSamples(PhasePlotError):

    def __init__(self, message: str, valid: int):
        self.valid = valid
        super().__init__(message, valid=valid)


class StagnationError(PhasePlotError):
    pass


class SeedClassificationError(PhasePlotError):
    pass


class BoundViolation(PhasePlotError):
    pass


class DiscontinuousColoring(PhasePlotError):
    pass


class NonzeroChromaticNumber(PhasePlotError):

    def __init__(self, message: str, chrom: int):
        self.chrom = chrom
        super().__init__(message, chrom=chrom)


class ChromaticMismatch(PhasePlotError):
    pass


class LocationOnBoundary(PhasePlotError):
    pass


class DerivativeUnavailable(PhasePlotError):
    """Raised when a derivative node has no further derivative node."""
