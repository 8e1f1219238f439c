import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tonecurve.exceptions import SamplingError
from tonecurve.ingest import F0Track, TokenRecord
from tonecurve.normalize import (
    TIME_GRID,
    SpeakerReference,
    hz_to_semitone,
    normalize_corpus,
    sample_ten_points,
    sample_times,
    speaker_reference,
)


def token(times, f0, interval=None, speaker="S1", tid="S1/w/medial/1"):
    f0 = np.asarray(f0, dtype=float)
    tr = F0Track(times, f0, f0 > 0)
    if interval is None:
        interval = (float(times[0]), float(times[-1]))
    return TokenRecord(tid, speaker, "F", "T1T2", "medial", 1, "w",
                       tr.slice(*interval), interval)


class TestReference:
    def test_singleton(self):
        assert speaker_reference([np.array([200.0])]).ref_hz == 200.0

    def test_arithmetic_and_geometric(self):
        vals = [np.array([100.0, 300.0])]
        assert speaker_reference(vals).ref_hz == pytest.approx(200.0, abs=1e-12)
        # sqrt(100 * 300)
        assert speaker_reference(vals, "geometric_mean").ref_hz == pytest.approx(173.205, abs=1e-3)

    def test_unvoiced_samples_ignored(self):
        tr = F0Track([0.0, 0.1, 0.2], [0.0, 100.0, 300.0], [False, True, True])
        ref = speaker_reference([tr])
        assert ref.ref_hz == 200.0 and ref.n_samples == 2

    def test_all_unvoiced(self):
        tr = F0Track([0.0, 0.1], [0.0, 0.0], [False, False])
        with pytest.raises(SamplingError):
            speaker_reference([tr])

    def test_bad_method(self):
        with pytest.raises(ValueError):
            speaker_reference([np.array([1.0])], "median")


class TestSemitone:
    def test_identity_and_octave(self):
        assert hz_to_semitone(220, 220) == 0.0
        assert abs(hz_to_semitone(440, 220) - 12.0) <= 1e-9

    def test_against_log2(self):
        # 12 * log2(261.63 / 220) = 3.000293...
        assert hz_to_semitone(261.63, 220) == pytest.approx(3.0001, abs=1e-3)

    @pytest.mark.parametrize("xi,ref", [(0, 100), (100, 0), (-1, 100)])
    def test_non_positive(self, xi, ref):
        with pytest.raises(ValueError):
            hz_to_semitone(xi, ref)

    @given(st.floats(20, 2000), st.floats(20, 2000), st.floats(0.01, 100))
    def test_ratio_invariance(self, xi, ref, lam):
        assert hz_to_semitone(xi * lam, ref * lam) == pytest.approx(
            hz_to_semitone(xi, ref), abs=1e-9)

    @given(st.floats(20, 2000), st.floats(20, 2000), st.floats(50, 500))
    def test_monotone(self, a, b, ref):
        if a < b:
            assert hz_to_semitone(a, ref) < hz_to_semitone(b, ref)


class TestSampling:
    def test_constant_contour(self):
        times = np.linspace(0, 0.18, 19)
        c = sample_ten_points(token(times, np.full(19, 220.0)),
                              SpeakerReference("S1", 220.0, 19))
        assert np.all(c.s == 0.0)
        assert c.duration_ms == pytest.approx(180.0)
        assert c.t.tolist() == [i / 9 for i in range(10)]

    def test_linear_hz_then_convert(self):
        c = sample_ten_points(token([0.0, 0.09], [200.0, 400.0]),
                              SpeakerReference("S1", 200.0, 2))
        assert c.s[0] == 0.0
        assert c.s[-1] == pytest.approx(12.0, abs=1e-12)
        # hand interpolation: tau_i = 0.01 * i, f0 = 200 + i * 200 / 9
        expected = [12 * math.log2((200 + i * 200 / 9) / 200) for i in range(10)]
        np.testing.assert_allclose(c.s, expected, atol=1e-12)

    def test_edge_clamping_and_gap_bridging(self):
        times = np.array([0.0, 0.02, 0.04, 0.06, 0.08, 0.1])
        f0 = np.array([0.0, 100.0, 0.0, 0.0, 200.0, 0.0])
        tok = token(times, f0)
        with pytest.raises(SamplingError):
            sample_ten_points(tok, SpeakerReference("S1", 100.0, 2))
        c = sample_ten_points(tok, SpeakerReference("S1", 100.0, 2), min_coverage=0.3)
        assert c.s[0] == 0.0  # held at the first voiced value
        assert c.s[-1] == pytest.approx(12.0)  # held at the last voiced value
        assert 0.0 < c.s[4] < 12.0

    def test_insufficient_coverage(self):
        f0 = [150.0] * 3 + [0.0] * 7
        with pytest.raises(SamplingError, match="coverage"):
            sample_ten_points(token(np.arange(10) * 0.01, f0), SpeakerReference("S1", 150, 3))

    def test_no_voiced(self):
        with pytest.raises(SamplingError, match="no voiced"):
            sample_ten_points(token([0.0, 0.1], [0.0, 0.0]), SpeakerReference("S1", 150, 3))

    def test_sample_times_hit_edges_exactly(self):
        for xmin, xmax in [(0.1, 0.3), (1.2345678, 1.9876543), (12.3, 12.517)]:
            tau = sample_times(xmin, xmax)
            assert tau[0] == xmin and tau[-1] == xmax
            assert np.all(np.diff(tau) > 0)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(60, 400), min_size=3, max_size=30), st.floats(0.1, 10))
    def test_scale_invariance(self, f0, lam):
        times = np.arange(len(f0)) * 0.01
        a = sample_ten_points(token(times, f0), SpeakerReference("S1", 150.0, 1))
        b = sample_ten_points(token(times, np.array(f0) * lam),
                              SpeakerReference("S1", 150.0 * lam, 1))
        np.testing.assert_allclose(a.s, b.s, atol=1e-9)
        assert len(a.s) == 10


def test_normalize_corpus_two_phase():
    times = np.arange(10) * 0.01
    toks = [token(times, np.full(10, 100.0), tid="A/w/medial/1", speaker="A"),
            token(times, np.full(10, 300.0), tid="A/w/medial/2", speaker="A"),
            token(times, np.zeros(10), tid="B/w/medial/1", speaker="B")]
    errors = []
    out = normalize_corpus(toks, errors=errors, workers=2)
    # speaker A mean = 200 Hz
    assert [c.token_id for c in out] == ["A/w/medial/1", "A/w/medial/2"]
    assert out[0].s[0] == pytest.approx(12 * math.log2(0.5))
    assert out[1].s[0] == pytest.approx(12 * math.log2(1.5))
    assert errors and errors[0][0] == "B/w/medial/1"
    with pytest.raises(SamplingError):
        normalize_corpus(toks)


def test_time_grid_is_fixed():
    assert TIME_GRID.tolist() == [(i - 1) / 9 for i in range(1, 11)]
    with pytest.raises(ValueError):
        TIME_GRID[0] = 1.0
