"""Exception hierarchy shared by every module."""


class BlockSepError(Exception):
    """Base class for all errors raised by blocksep."""


class NonSquareError(BlockSepError, ValueError):
    pass


class DimensionMismatchError(BlockSepError, ValueError):
    pass


class NotHermitianError(BlockSepError, ValueError):
    pass


class NotNormalError(BlockSepError, ValueError):
    pass


class NoConvergenceError(BlockSepError, ArithmeticError):
    pass


class FamilyInvalidError(BlockSepError, ValueError):
    """Blocks are not a commuting family of normal matrices."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ResidualTooLargeError(BlockSepError, ArithmeticError):
    pass


class InconsistentInputError(BlockSepError, ValueError):
    pass


class NotNegativeError(BlockSepError, ValueError):
    pass


class TooLargeError(BlockSepError, ValueError):
    pass


class ParseError(BlockSepError, ValueError):
    pass
