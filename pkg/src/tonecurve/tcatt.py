"""Tonal Contour Analysis in Tonal Triangle.

Step 1 counts turning points by comparing the chord slope from onset to
offset (``k``) with the slopes from onset to the lowest point (``k_min``)
and to the highest point (``k_max``).  Step 2 builds a triangle on each
turning point and reports the sine of the angle at that vertex as the
curvature of the contour.

Geometry is done in (normalized time, semitone) coordinates with unit
aspect ratio unless ``semitone_scale`` says otherwise; curvature values are
only comparable between runs that share this convention.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .exceptions import GeometryError
from .normalize import TIME_GRID, SampledContour

DEFAULT_EPS_SLOPE = 1e-6
MIN_SIDE = 1e-12
CURVATURE_CONVENTION = ("t in [0,1] normalized time; s in semitones re speaker mean "
                        "times semitone_scale; Euclidean distances with unit aspect")


class ContourClass(str, enum.Enum):
    MONOTONE = "Monotone"
    ONE = "One"
    TWO_OR_MORE = "TwoOrMore"

    @property
    def n_turns(self) -> int:
        return {"Monotone": 0, "One": 1, "TwoOrMore": 2}[self.value]

    def __str__(self):
        return self.value


class Point(NamedTuple):
    t: float
    s: float


@dataclass(frozen=True)
class ContourLandmarks:
    B: Point
    C: Point
    lo_index: int
    lo: Point
    hi_index: int
    hi: Point


@dataclass(frozen=True)
class ChordSlopes:
    k: float
    k_min: Optional[float]
    k_max: Optional[float]
    dip_deviates: bool = False
    peak_deviates: bool = False


@dataclass(frozen=True)
class Turn:
    index: int
    t: float
    s: float
    cos_angle: float
    angle_rad: float
    sine: float
    obtuse: bool
    paper_sine: float


@dataclass(frozen=True)
class CurvatureResult:
    token_id: str
    contour_class: ContourClass
    turns: Tuple[Turn, ...]
    curvature_index: float
    landmarks: Optional[ContourLandmarks] = None
    slopes: Optional[ChordSlopes] = None

    @property
    def n_turns(self) -> int:
        return len(self.turns)

    @property
    def paper_sine(self) -> Tuple[float, ...]:
        return tuple(t.paper_sine for t in self.turns)


def _coords(contour, semitone_scale):
    s = contour.s if isinstance(contour, SampledContour) else np.asarray(contour, float)
    return TIME_GRID, np.asarray(s, dtype=float) * semitone_scale


def landmarks(contour, semitone_scale: float = 1.0) -> ContourLandmarks:
    """Onset, offset, lowest and highest points; ties go to the earliest index."""
    t, s = _coords(contour, semitone_scale)
    lo = int(np.argmin(s))  # argmin/argmax return the first occurrence
    hi = int(np.argmax(s))
    last = len(s) - 1

    def pt(i):
        return Point(float(t[i]), float(s[i]))

    return ContourLandmarks(B=pt(0), C=pt(last), lo_index=lo, lo=pt(lo),
                            hi_index=hi, hi=pt(hi))


def _slope(p: Point, q: Point) -> float:
    return float((q.s - p.s) / (q.t - p.t))


def classify(contour, eps_slope: float = DEFAULT_EPS_SLOPE,
             semitone_scale: float = 1.0) -> Tuple[ContourClass, ChordSlopes]:
    """Count turning points from the three chord slopes.

    The dip side deviates when the lowest point is interior and the chord to
    it falls more steeply than the onset-offset chord; the peak side likewise
    with the highest point rising more steeply.  Neither side deviating means
    no turning point, one side means one, both sides means two or more.
    """
    lm = landmarks(contour, semitone_scale)
    last = len(TIME_GRID) - 1
    k = _slope(lm.B, lm.C)
    k_min = None if lm.lo_index == 0 else _slope(lm.B, lm.lo)
    k_max = None if lm.hi_index == 0 else _slope(lm.B, lm.hi)
    dip = 0 < lm.lo_index < last and k_min < k - eps_slope
    peak = 0 < lm.hi_index < last and k_max > k + eps_slope
    if dip and peak:
        cls = ContourClass.TWO_OR_MORE
    elif dip or peak:
        cls = ContourClass.ONE
    else:
        cls = ContourClass.MONOTONE
    return cls, ChordSlopes(k, k_min, k_max, bool(dip), bool(peak))


def vertex_angle(apex, left, right):
    """Angle at ``apex`` of the triangle (left, apex, right) by the law of cosines.

    Returns ``(cos_angle, angle_rad, sine, paper_sine)``.  With the opposite-
    vertex naming, ``a`` is the side facing the apex and ``b``, ``c`` the two
    sides meeting there.  ``paper_sine`` is sqrt(2bc(1 - cos)) / c, kept only
    for comparison with published values; it is not the sine of the angle.
    """
    apex, left, right = (np.asarray(p, dtype=float) for p in (apex, left, right))
    a = float(np.hypot(*(right - left)))
    b = float(np.hypot(*(right - apex)))
    c = float(np.hypot(*(left - apex)))
    if min(a, b, c) < MIN_SIDE:
        raise GeometryError(f"degenerate triangle (sides {a:.3g}, {b:.3g}, {c:.3g})")
    cos_angle = (b * b + c * c - a * a) / (2.0 * b * c)
    cos_angle = min(1.0, max(-1.0, cos_angle))
    sine = math.sqrt(max(0.0, 1.0 - cos_angle * cos_angle))
    paper_sine = math.sqrt(max(0.0, 2.0 * b * c * (1.0 - cos_angle))) / c
    return cos_angle, math.acos(cos_angle), sine, paper_sine


def _turn(index, t, s, apex, left, right) -> Turn:
    cos_angle, angle, sine, paper_sine = vertex_angle(apex, left, right)
    return Turn(index=index, t=float(t[index]), s=float(s[index]), cos_angle=cos_angle,
                angle_rad=angle, sine=sine, obtuse=cos_angle < 0, paper_sine=paper_sine)


def curvature(contour, contour_class: ContourClass, lm: ContourLandmarks,
              slopes: Optional[ChordSlopes] = None, semitone_scale: float = 1.0,
              token_id: Optional[str] = None) -> CurvatureResult:
    """Tonal-triangle curvature for an already classified contour.

    One turn: triangle (onset, turn, offset).  Two turns A then D: angle at A
    in (onset, A, D) and at D in (A, D, offset); the index is the larger sine.
    ``slopes`` picks the deviating extremum for a one-turn contour; without
    it the dip is assumed unless only the peak is interior.
    """
    if token_id is None:
        token_id = getattr(contour, "token_id", "")
    t, s = _coords(contour, semitone_scale)
    pts = np.column_stack([t, s])
    B, C = pts[0], pts[-1]
    try:
        if contour_class is ContourClass.MONOTONE:
            turns = ()
        elif contour_class is ContourClass.ONE:
            if slopes is not None:
                idx = lm.lo_index if slopes.dip_deviates else lm.hi_index
            else:
                idx = lm.lo_index if 0 < lm.lo_index < len(t) - 1 else lm.hi_index
            turns = (_turn(idx, t, s, pts[idx], B, C),)
        else:
            ia, id_ = sorted((lm.lo_index, lm.hi_index))
            A, D = pts[ia], pts[id_]
            turns = (_turn(ia, t, s, A, B, D), _turn(id_, t, s, D, A, C))
    except GeometryError as exc:
        raise GeometryError(f"{token_id}: {exc}") from None
    index = max((tr.sine for tr in turns), default=0.0)
    return CurvatureResult(token_id, contour_class, turns, index, lm, slopes)


def analyze_token(contour, eps_slope: float = DEFAULT_EPS_SLOPE,
                  semitone_scale: float = 1.0) -> CurvatureResult:
    """Landmarks, classification and curvature for one contour."""
    lm = landmarks(contour, semitone_scale)
    cls, slopes = classify(contour, eps_slope, semitone_scale)
    return curvature(contour, cls, lm, slopes, semitone_scale)
