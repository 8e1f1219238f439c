"""Exception hierarchy shared by all tonecurve modules."""


class ToneCurveError(Exception):
    """Base class for every error raised by this package."""


class ParseError(ToneCurveError, ValueError):
    """Malformed input file.

    ``line`` is the 1-based line number when it is known.
    """

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class CorpusError(ToneCurveError):
    """A manifest token could not be resolved into a TokenRecord."""


class SamplingError(ToneCurveError):
    """A token slice cannot be turned into a ten-point contour."""


class GeometryError(ToneCurveError):
    """Degenerate tonal triangle."""


class StatsError(ToneCurveError, ValueError):
    """Invalid input to a statistical routine."""


class UnbalancedDesignError(StatsError):
    """Factorial ANOVA requested on cells with unequal counts."""
