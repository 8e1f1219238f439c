"""tonecurve: shape measurements for lexical-tone pitch contours.

F0 tracks and Praat segmentations are sliced into tokens, normalized to
semitones relative to each speaker's mean pitch and sampled at ten points.
Each ten-point contour is then classified by its number of turning points
and scored by the sine of the angle at its turning point(s) in a tonal
triangle.  The ``stats`` subpackage runs the factorial ANOVA, correlation
and rank tests used to compare conditions.

    >>> from tonecurve import SampledContour, analyze_token
    >>> c = SampledContour("demo", [1, .95, .9, .85, .8, .84, .88, .92, .96, 1], 180.0)
    >>> r = analyze_token(c)
    >>> r.contour_class.value, round(r.curvature_index, 4)
    ('One', 0.695)
"""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    CorpusError,
    GeometryError,
    ParseError,
    SamplingError,
    StatsError,
    ToneCurveError,
    UnbalancedDesignError,
)
from .normalize import (  # noqa: E402
    SampledContour,
    SpeakerReference,
    hz_to_semitone,
    sample_ten_points,
    speaker_reference,
)
from .tcatt import (  # noqa: E402
    ContourClass,
    CurvatureResult,
    analyze_token,
    classify,
    curvature,
    landmarks,
)

__all__ = [
    "CorpusError", "GeometryError", "ParseError", "SamplingError", "StatsError",
    "ToneCurveError", "UnbalancedDesignError", "SampledContour", "SpeakerReference",
    "hz_to_semitone", "sample_ten_points", "speaker_reference", "ContourClass",
    "CurvatureResult", "analyze_token", "classify", "curvature", "landmarks",
]
