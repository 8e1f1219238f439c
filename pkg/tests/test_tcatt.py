import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tonecurve.exceptions import GeometryError
from tonecurve.normalize import TIME_GRID, SampledContour
from tonecurve.tcatt import (
    ContourClass,
    analyze_token,
    classify,
    curvature,
    landmarks,
    vertex_angle,
)


def contour(s, tid="tok"):
    return SampledContour(tid, np.asarray(s, dtype=float), 200.0)


def dot_cos(apex, p, q):
    """Independent oracle: angle cosine from the dot product of the two edges."""
    u = np.subtract(p, apex)
    v = np.subtract(q, apex)
    return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))


def sign_changes(s):
    d = np.sign(np.diff(s))
    d = d[d != 0]
    return int(np.sum(d[1:] != d[:-1]))


DIP = [1, .75, .5, .25, 0, .2, .4, .6, .8, 1]
FALL_RISE_FALL = [1, 0.4, 0.0, 0.3, 0.6, 0.9, 1.2, 1.0, 0.7, 0.5]


class TestLandmarks:
    def test_dip_with_tie(self):
        lm = landmarks(contour(DIP))
        assert lm.lo_index == 4
        assert lm.hi_index == 0  # tie between 0 and 9 goes to the earliest
        assert lm.B == (0.0, 1.0) and lm.C == (1.0, 1.0)

    def test_increasing(self):
        lm = landmarks(contour(np.arange(10.0)))
        assert (lm.lo_index, lm.hi_index) == (0, 9)

    def test_constant(self):
        lm = landmarks(contour(np.full(10, 0.3)))
        assert lm.lo_index == lm.hi_index == 0


class TestClassify:
    def test_dip_is_one(self):
        cls, sl = classify(contour(DIP))
        assert cls is ContourClass.ONE
        assert sl.k == 0.0
        assert sl.k_min == pytest.approx(-2.25)
        assert sl.k_max is None
        assert sl.dip_deviates and not sl.peak_deviates

    def test_fall_rise_fall_is_two(self):
        cls, sl = classify(contour(FALL_RISE_FALL))
        assert cls is ContourClass.TWO_OR_MORE
        assert sl.k == pytest.approx(-0.5)
        assert sl.k_min == pytest.approx(-4.5)
        assert sl.k_max == pytest.approx(0.3)

    def test_increasing_is_monotone(self):
        assert classify(contour(np.linspace(-1, 2, 10)))[0] is ContourClass.MONOTONE

    def test_constant_is_monotone(self):
        assert classify(contour(np.zeros(10)))[0] is ContourClass.MONOTONE

    def test_eps_absorbs_rounding(self):
        s = np.zeros(10)
        s[4] = -1e-9
        assert classify(contour(s))[0] is ContourClass.MONOTONE
        assert classify(contour(s), eps_slope=0.0)[0] is ContourClass.ONE

    def test_peak_only(self):
        s = [0, .3, .6, .9, 1.2, 1.0, .8, .6, .4, .2]
        cls, sl = classify(contour(s))
        assert cls is ContourClass.ONE and sl.peak_deviates

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(-10, 10), min_size=10, max_size=10),
           st.floats(0.01, 100))
    def test_scale_invariance(self, s, lam):
        # exact inequalities (eps 0) are invariant under any positive scaling
        s = np.array(s)
        base = classify(contour(s), eps_slope=0.0)[0]
        sl = classify(contour(s), eps_slope=0.0)[1]
        # skip near-ties where rounding of the scaled values can flip a comparison
        for kk in (sl.k_min, sl.k_max):
            assume(kk is None or abs(kk - sl.k) > 1e-9 * (1 + abs(sl.k)))
        assume(len(set(s.tolist())) == 10)
        assert classify(contour(s * lam), eps_slope=0.0)[0] is base
        assert classify(contour(s), eps_slope=0.0, semitone_scale=lam)[0] is base


class TestGeometry:
    def test_shallow_dip(self):
        cos_a, angle, sine, _ = vertex_angle((4 / 9, 0.8), (0, 1), (1, 1))
        assert cos_a == pytest.approx(-0.71902, abs=1e-4)
        assert cos_a == pytest.approx(dot_cos((4 / 9, 0.8), (0, 1), (1, 1)), abs=1e-12)
        assert sine == pytest.approx(0.69499, abs=1e-4)
        assert math.pi / 2 < angle < math.pi

    def test_deep_dip_is_acute(self):
        cos_a, angle, sine, _ = vertex_angle((4 / 9, 0.0), (0, 1), (1, 1))
        assert cos_a == pytest.approx(0.60156, abs=1e-4)
        assert sine == pytest.approx(0.79882, abs=1e-4)

    def test_collinear(self):
        cos_a, angle, sine, _ = vertex_angle((0.5, 0.5), (0, 0), (1, 1))
        assert cos_a == -1.0 and angle == pytest.approx(math.pi) and sine <= 1e-9

    def test_degenerate(self):
        with pytest.raises(GeometryError):
            vertex_angle((0, 0), (0, 0), (1, 1))

    def test_paper_sine_equilateral_and_right(self):
        h = math.sqrt(3) / 2
        _, _, sine, literal = vertex_angle((0.5, h), (0, 0), (1, 0))
        assert sine == pytest.approx(0.86603, abs=1e-4)
        assert literal == pytest.approx(1.0, abs=1e-4)
        _, _, sine, literal = vertex_angle((0, 0), (1, 0), (0, 1))
        assert sine == pytest.approx(1.0)
        assert literal == pytest.approx(math.sqrt(2))

    @settings(max_examples=300, deadline=None)
    @given(st.tuples(*[st.floats(-5, 5)] * 6))
    def test_against_dot_product(self, xs):
        apex, p, q = np.array(xs).reshape(3, 2)
        sides = [np.linalg.norm(p - q), np.linalg.norm(apex - p), np.linalg.norm(apex - q)]
        assume(min(sides) > 1e-3)
        cos_a, angle, sine, literal = vertex_angle(apex, p, q)
        assert cos_a == pytest.approx(dot_cos(apex, p, q), abs=1e-9)
        assert 0 <= sine <= 1 and 0 <= angle <= math.pi
        assert sine == pytest.approx(math.sqrt(1 - cos_a ** 2), abs=1e-12)
        assert literal >= 0


class TestCurvature:
    def test_one_turn(self, shallow_dip_s):
        res = analyze_token(contour(shallow_dip_s))
        assert res.contour_class is ContourClass.ONE
        (turn,) = res.turns
        assert turn.index == 4
        assert turn.cos_angle == pytest.approx(-0.71902, abs=1e-4)
        assert res.curvature_index == pytest.approx(0.69499, abs=1e-4)
        assert turn.obtuse

    def test_two_turns(self):
        res = analyze_token(contour(FALL_RISE_FALL))
        assert res.contour_class is ContourClass.TWO_OR_MORE
        a, d = res.turns
        assert (a.index, d.index) == (2, 6)
        pts = np.column_stack([TIME_GRID, FALL_RISE_FALL])
        assert a.cos_angle == pytest.approx(dot_cos(pts[2], pts[0], pts[6]), abs=1e-12)
        assert d.cos_angle == pytest.approx(dot_cos(pts[6], pts[2], pts[9]), abs=1e-12)
        assert res.curvature_index == max(a.sine, d.sine)
        assert res.curvature_index == pytest.approx(0.716746, abs=1e-5)

    def test_monotone(self):
        res = analyze_token(contour(np.zeros(10)))
        assert res.contour_class is ContourClass.MONOTONE
        assert res.turns == () and res.curvature_index == 0.0

    def test_explicit_steps_match_composition(self):
        c = contour(DIP)
        cls, sl = classify(c)
        res = curvature(c, cls, landmarks(c), sl)
        assert res.curvature_index == analyze_token(c).curvature_index
        assert res.token_id == "tok"

    def test_one_turn_collinear_vertex(self):
        # a level contour with one point just below the chord: tiny curvature
        s = np.zeros(10)
        s[5] = -1e-3
        res = analyze_token(contour(s))
        assert res.contour_class is ContourClass.ONE
        assert res.curvature_index < 1e-2

    def test_paper_sine_differs_from_sine(self, shallow_dip_s):
        turn = analyze_token(contour(shallow_dip_s)).turns[0]
        assert turn.paper_sine >= 0
        assert abs(turn.paper_sine - turn.sine) > 1e-3

    def test_dip_depth_monotone_in_obtuse_regime(self):
        prev = -1.0
        for d in np.linspace(0.01, 0.49, 49):
            s = np.interp(TIME_GRID, [0, 4 / 9, 1], [0, -d, 0])
            res = analyze_token(contour(s))
            assert res.turns[0].obtuse
            assert res.curvature_index > prev
            prev = res.curvature_index

    def test_semitone_scale_changes_curvature_not_class(self, shallow_dip_s):
        a = analyze_token(contour(shallow_dip_s))
        b = analyze_token(contour(shallow_dip_s), semitone_scale=3.0)
        assert a.contour_class is b.contour_class
        assert a.curvature_index != pytest.approx(b.curvature_index)


def random_shape(rng, n_changes):
    """Noise-free contour with a given number of direction changes and
    unique interior turning extrema."""
    while True:
        if n_changes == 0:
            steps = rng.uniform(0.05, 1.0, 9) * rng.choice([-1, 1])
        else:
            cuts = np.sort(rng.choice(np.arange(1, 9), n_changes, replace=False))
            sign = rng.choice([-1, 1])
            steps = np.empty(9)
            edges = [0, *cuts, 9]
            for j in range(len(edges) - 1):
                steps[edges[j]:edges[j + 1]] = sign * (-1) ** j * rng.uniform(0.05, 1.0,
                                                                               edges[j + 1] - edges[j])
        s = np.concatenate([[0.0], np.cumsum(steps)]) + rng.normal(0, 1)
        if n_changes == 2:
            lo, hi = int(np.argmin(s)), int(np.argmax(s))
            if not (0 < lo < 9 and 0 < hi < 9):
                continue
        return s


@pytest.mark.parametrize("n_changes,expected", [(0, ContourClass.MONOTONE),
                                                (1, ContourClass.ONE),
                                                (2, ContourClass.TWO_OR_MORE)])
def test_sign_change_oracle(n_changes, expected):
    rng = np.random.default_rng(7 + n_changes)
    for _ in range(300):
        s = random_shape(rng, n_changes)
        assert sign_changes(s) == n_changes
        assert classify(contour(s))[0] is expected
