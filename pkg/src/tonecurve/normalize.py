"""Speaker-relative semitone contours sampled at ten equidistant points."""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import SamplingError
from .ingest import F0Track, TokenRecord

N_POINTS = 10
REFERENCE_METHODS = ("arithmetic_mean", "geometric_mean")
SEMITONES_PER_DECADE = 12.0 / math.log10(2.0)

#: the shared normalized-time grid, t_i = (i - 1) / 9
TIME_GRID = np.arange(N_POINTS) / (N_POINTS - 1)
TIME_GRID.setflags(write=False)


@dataclass(frozen=True)
class SpeakerReference:
    speaker_id: str
    ref_hz: float
    n_samples: int
    method: str = "arithmetic_mean"

    def __post_init__(self):
        if not self.ref_hz > 0 or self.n_samples <= 0:
            raise ValueError("reference needs ref_hz > 0 and n_samples > 0")


@dataclass(frozen=True, eq=False)
class SampledContour:
    token_id: str
    s: np.ndarray
    duration_ms: float

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float).reshape(-1)
        if len(s) != N_POINTS:
            raise ValueError(f"a contour has exactly {N_POINTS} points, got {len(s)}")
        if not self.duration_ms > 0:
            raise ValueError("duration_ms must be positive")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def t(self) -> np.ndarray:
        return TIME_GRID

    @property
    def points(self) -> List[Tuple[float, float]]:
        return list(zip(TIME_GRID.tolist(), self.s.tolist()))


def hz_to_semitone(xi, ref):
    """Semitones of ``xi`` relative to ``ref``: 12 / log10(2) * log10(xi / ref)."""
    xi_arr = np.asarray(xi, dtype=float)
    ref_arr = np.asarray(ref, dtype=float)
    if np.any(~(xi_arr > 0)) or np.any(~(ref_arr > 0)):
        raise ValueError("hz_to_semitone needs positive frequencies")
    out = SEMITONES_PER_DECADE * np.log10(xi_arr / ref_arr)
    return float(out) if out.ndim == 0 else out


def _voiced_values(tracks) -> np.ndarray:
    if isinstance(tracks, F0Track):
        tracks = [tracks]
    chunks = []
    for tr in tracks:
        if isinstance(tr, F0Track):
            chunks.append(tr.voiced_f0())
        else:
            arr = np.asarray(tr, dtype=float).reshape(-1)
            chunks.append(arr[arr > 0])
    return np.concatenate(chunks) if chunks else np.empty(0)


def speaker_reference(tracks, method: str = "arithmetic_mean",
                      speaker_id: str = "") -> SpeakerReference:
    """Mean pitch of a speaker over all voiced samples in ``tracks``.

    ``tracks`` may hold F0Track objects or plain arrays of f0 values
    (non-positive entries count as unvoiced).
    """
    if method not in REFERENCE_METHODS:
        raise ValueError(f"method must be one of {REFERENCE_METHODS}, got {method!r}")
    values = _voiced_values(tracks)
    if values.size == 0:
        raise SamplingError(f"speaker {speaker_id!r}: no voiced samples for a reference")
    if method == "arithmetic_mean":
        ref = float(np.mean(values))
    else:
        ref = float(np.exp(np.mean(np.log(values))))
    return SpeakerReference(speaker_id, ref, int(values.size), method)


def sample_times(xmin: float, xmax: float) -> np.ndarray:
    tau = xmin + np.arange(N_POINTS) * (xmax - xmin) / (N_POINTS - 1)
    tau[0], tau[-1] = xmin, xmax  # no rounding drift at the interval edges
    return tau


def sample_ten_points(token: TokenRecord, ref: SpeakerReference,
                      min_coverage: float = 0.5) -> SampledContour:
    """Ten semitone values at equidistant times from interval onset to offset.

    F0 is interpolated linearly in Hz between the voiced samples bracketing
    each target time and held at the nearest voiced value beyond the voiced
    span.  Coverage is the fraction of samples in the slice that are voiced.
    """
    xmin, xmax = token.interval
    if not xmax > xmin:
        raise SamplingError(f"{token.token_id}: empty interval [{xmin}, {xmax}]")
    track = token.track_slice
    n_voiced = track.n_voiced
    if n_voiced == 0:
        raise SamplingError(f"{token.token_id}: no voiced samples in slice")
    coverage = n_voiced / len(track)
    if coverage < min_coverage:
        raise SamplingError(f"{token.token_id}: insufficient voiced coverage "
                            f"{coverage:.0%} < {min_coverage:.0%}")
    times = track.times[track.voiced]
    f0 = track.f0[track.voiced]
    f_at = np.interp(sample_times(xmin, xmax), times, f0)
    s = hz_to_semitone(f_at, ref.ref_hz)
    return SampledContour(token.token_id, np.atleast_1d(s), (xmax - xmin) * 1000.0)


def speaker_references(tokens: Iterable[TokenRecord], method: str = "arithmetic_mean"
                       ) -> Dict[str, SpeakerReference]:
    by_speaker = defaultdict(list)
    for tok in tokens:
        by_speaker[tok.speaker_id].append(tok.track_slice)
    return {sid: speaker_reference(tracks, method, sid)
            for sid, tracks in sorted(by_speaker.items())}


def normalize_corpus(tokens: Sequence[TokenRecord], method: str = "arithmetic_mean",
                     min_coverage: float = 0.5, workers: int = 1,
                     errors: Optional[List[Tuple[str, str]]] = None
                     ) -> List[SampledContour]:
    """Two-phase pipeline: per-speaker references first, then per-token sampling.

    Failed tokens go to ``errors`` as ``(token_id, reason)`` when a list is
    given, otherwise the first failure raises.  Output keeps input order.
    """
    refs = {}
    by_speaker = defaultdict(list)
    for tok in tokens:
        by_speaker[tok.speaker_id].append(tok.track_slice)
    for sid, tracks in by_speaker.items():
        try:
            refs[sid] = speaker_reference(tracks, method, sid)
        except SamplingError as exc:
            refs[sid] = exc

    def one(tok):
        ref = refs[tok.speaker_id]
        if isinstance(ref, Exception):
            return None, str(ref)
        try:
            return sample_ten_points(tok, ref, min_coverage), None
        except SamplingError as exc:
            return None, str(exc)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, tokens))
    else:
        outcomes = [one(t) for t in tokens]

    contours = []
    for tok, (contour, reason) in zip(tokens, outcomes):
        if contour is None:
            if errors is None:
                raise SamplingError(reason)
            errors.append((tok.token_id, reason))
        else:
            contours.append(contour)
    return contours
