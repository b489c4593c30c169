"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`CRSymError`.
The ``exit_code`` attribute is what the command line tool returns when the
error escapes a subcommand.
"""


class CRSymError(Exception):
    exit_code = 1


class ParseError(CRSymError, ValueError):
    exit_code = 3

    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class RealityViolation(CRSymError, ValueError):
    exit_code = 4

    def __init__(self, pairs):
        self.pairs = list(pairs)
        listed = ", ".join(f"{a}<->{b}" for a, b in self.pairs)
        super().__init__(f"defining function is not real; unmatched conjugate pairs: {listed}")


class NotPrepared(CRSymError, ValueError):
    exit_code = 5


class NotFiniteType(CRSymError, ValueError):
    exit_code = 6


class NotCircular(CRSymError, ValueError):
    exit_code = 7


class OutOfScope(CRSymError, ValueError):
    exit_code = 8


class ModelSurface(CRSymError, ValueError):
    exit_code = 9


class NotNormalized(CRSymError, ValueError):
    exit_code = 10


class NotSpecialNormalized(NotNormalized):
    exit_code = 10


class SingularLinearPart(CRSymError, ValueError):
    exit_code = 11


class NormalizationViolation(CRSymError, ValueError):
    exit_code = 11


class TruncationTooLow(CRSymError, ValueError):
    exit_code = 12


class RankDefect(CRSymError, ArithmeticError):
    exit_code = 13


class NonAffine(CRSymError, ArithmeticError):
    exit_code = 14
