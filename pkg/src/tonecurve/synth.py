"""Seeded synthetic contours and corpora with known generating parameters.

Random numbers come from numpy's PCG64 bit generator.  Token ``i`` (0-based,
in corpus order) draws from its own stream seeded with
``SeedSequence([seed, i])``, so output does not depend on how tokens are
scheduled across workers.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .ingest import (
    GENDERS,
    POSITIONS,
    CorpusManifest,
    F0Track,
    Interval,
    IntervalTier,
    SpeakerEntry,
    TokenSpec,
    TrackEntry,
    make_token_id,
    serialize_f0_csv,
    serialize_textgrid,
)
from .normalize import TIME_GRID, SampledContour, sample_times

GENERATOR = "numpy.random.PCG64, per-token SeedSequence([seed, token_index])"
TIER_NAME = "syllable"

#: Disyllabic target words (first syllable T1..T5, second syllable T2).
WORDS = (
    ("khui_mng", "开门", "open the door", "T1T2"),
    ("tsing_hua", "中华", "China", "T1T2"),
    ("mhe_ni", "明年", "the next year", "T2T2"),
    ("phu_thau", "葡萄", "the grape", "T2T2"),
    ("gu_gieng", "语言", "the language", "T3T2"),
    ("tsui_ni", "水泥", "the cement", "T3T2"),
    ("tshau_than", "臭虫", "the bug", "T4T2"),
    ("tshai_thau", "菜头", "the vegetable", "T4T2"),
    ("mbun_tue", "问题", "the problem", "T5T2"),
    ("tua_mng", "大门", "the gate", "T5T2"),
)
TONAL_COMBINATIONS = ("T1T2", "T2T2", "T3T2", "T4T2", "T5T2")
FACTOR_LEVELS = {
    "tonal_combination": TONAL_COMBINATIONS,
    "position": POSITIONS,
    "gender": GENDERS,
}
GROUND_TRUTH_COLUMNS = ("token_id", "dip_depth_st", "duration_ms", "speaker_id",
                        "gender", "tonal_combination", "position", "repetition",
                        "word_id")


@dataclass(frozen=True)
class ContourSpec:
    onset_st: float = 0.0
    dip_depth_st: float = 0.0
    dip_position: float = 0.4
    offset_st: float = 0.0
    second_peak_st: float = 0.0
    noise_sd_st: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.dip_position < 1.0:
            raise ValueError("dip_position must lie strictly inside (0, 1)")
        if self.dip_depth_st < 0 or self.second_peak_st < 0 or self.noise_sd_st < 0:
            raise ValueError("dip depth, second peak and noise sd must be >= 0")


def contour_nodes(spec: ContourSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Vertices of the noiseless piecewise-linear template.

    The dip vertex lies ``dip_depth_st`` below the onset-offset chord, so a
    zero depth gives a straight line and, for a level chord, the dip sits at
    ``onset_st - dip_depth_st``.  The optional second peak sits halfway
    between the dip and the offset, ``second_peak_st`` above the offset level.
    """
    p = spec.dip_position
    chord = spec.onset_st + p * (spec.offset_st - spec.onset_st)
    t = [0.0, p]
    s = [spec.onset_st, chord - spec.dip_depth_st]
    if spec.second_peak_st > 0:
        t.append(0.5 * (spec.dip_position + 1.0))
        s.append(spec.offset_st + spec.second_peak_st)
    t.append(1.0)
    s.append(spec.offset_st)
    return np.array(t), np.array(s)


def gen_contour(spec: ContourSpec, token_id: str = "", duration_ms: float = 200.0,
                rng: Optional[np.random.Generator] = None) -> SampledContour:
    t, s = contour_nodes(spec)
    points = np.interp(TIME_GRID, t, s)
    if spec.noise_sd_st > 0:
        if rng is None:
            rng = np.random.Generator(np.random.PCG64(spec.seed))
        points = points + rng.normal(0.0, spec.noise_sd_st, size=len(points))
    return SampledContour(token_id, points, duration_ms)


def _parse_effect_key(key: str) -> Tuple[str, str]:
    factor, sep, level = key.partition(":")
    if not sep or factor not in FACTOR_LEVELS:
        raise ValueError(f"effect {key!r}: factor must be one of "
                         f"{sorted(FACTOR_LEVELS)} written as 'factor:level'")
    if level not in FACTOR_LEVELS[factor]:
        raise ValueError(f"effect {key!r}: level must be one of {FACTOR_LEVELS[factor]}")
    return factor, level


@dataclass(frozen=True)
class SynthCorpusConfig:
    """Balanced corpus design and the effects programmed into it.

    ``effects`` maps ``"factor:level"`` to semitones added to the dip depth.
    Token duration is ``base_duration_ms + position_duration_ms[position] +
    coupling_ms_per_st * dip_depth`` plus Gaussian jitter.
    """

    n_speakers_per_gender: int = 4
    repetitions: int = 2
    onset_st: float = 0.0
    offset_st: float = 0.0
    dip_position: float = 0.4
    base_dip_st: float = 0.0
    dip_sd_st: float = 0.0
    noise_sd_st: float = 0.2
    effects: Mapping[str, float] = field(default_factory=dict)
    base_duration_ms: float = 200.0
    position_duration_ms: Mapping[str, float] = field(default_factory=dict)
    coupling_ms_per_st: float = 0.0
    duration_sd_ms: float = 0.0
    seed: int = 2021

    def __post_init__(self):
        for key in self.effects:
            _parse_effect_key(key)
        for pos in self.position_duration_ms:
            if pos not in POSITIONS:
                raise ValueError(f"position_duration_ms: unknown position {pos!r}")
        if self.n_speakers_per_gender < 1 or self.repetitions < 1:
            raise ValueError("need at least one speaker per gender and one repetition")
        if min(self.dip_sd_st, self.noise_sd_st, self.duration_sd_ms) < 0:
            raise ValueError("standard deviations must be >= 0")
        ContourSpec(dip_position=self.dip_position)

    @classmethod
    def from_dict(cls, data: Mapping) -> "SynthCorpusConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown synth config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["effects"] = dict(sorted(self.effects.items()))
        d["position_duration_ms"] = dict(sorted(self.position_duration_ms.items()))
        return d


def effects_config(**overrides) -> SynthCorpusConfig:
    """Subtle dips (obtuse turn angles) made deeper after a high-offset first
    syllable (T3T2), in sentence-initial position and for male speakers.
    Duration is longest initially and grows with dip depth."""
    base = SynthCorpusConfig(
        base_dip_st=0.1,
        dip_sd_st=0.03,
        noise_sd_st=0.02,
        effects={"tonal_combination:T3T2": 0.12, "position:initial": 0.12,
                 "position:final": 0.05, "gender:M": 0.08},
        position_duration_ms={"initial": 40.0, "medial": 0.0, "final": 20.0},
        coupling_ms_per_st=150.0,
        duration_sd_ms=15.0,
    )
    return replace(base, **overrides)


@dataclass(frozen=True, eq=False)
class SynthToken:
    token_id: str
    speaker_id: str
    gender: str
    tonal_combination: str
    position: str
    repetition: int
    word_id: str
    dip_depth_st: float
    duration_ms: float
    contour: SampledContour

    @property
    def factors(self) -> Dict[str, str]:
        return {"tonal_combination": self.tonal_combination,
                "position": self.position, "gender": self.gender}


@dataclass(frozen=True, eq=False)
class SynthCorpus:
    config: SynthCorpusConfig
    tokens: Tuple[SynthToken, ...]
    speaker_hz: Mapping[str, float]

    def __len__(self):
        return len(self.tokens)

    def ground_truth_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(GROUND_TRUTH_COLUMNS)
        for tok in self.tokens:
            w.writerow([tok.token_id, repr(tok.dip_depth_st), repr(tok.duration_ms),
                        tok.speaker_id, tok.gender, tok.tonal_combination,
                        tok.position, tok.repetition, tok.word_id])
        return buf.getvalue()


def speaker_ids(config: SynthCorpusConfig) -> List[Tuple[str, str]]:
    return [(f"{g}{i:02d}", g) for g in GENDERS
            for i in range(1, config.n_speakers_per_gender + 1)]


def _design(config):
    rows = []
    for sid, gender in speaker_ids(config):
        for word_id, _, _, combo in WORDS:
            for pos in POSITIONS:
                for rep in range(1, config.repetitions + 1):
                    rows.append((sid, gender, word_id, combo, pos, rep))
    return rows


def _one_token(config, index, row):
    sid, gender, word_id, combo, pos, rep = row
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, index]))
    levels = {"tonal_combination": combo, "position": pos, "gender": gender}
    depth = config.base_dip_st + sum(
        v for k, v in config.effects.items()
        if levels[_parse_effect_key(k)[0]] == _parse_effect_key(k)[1])
    if config.dip_sd_st > 0:
        depth += rng.normal(0.0, config.dip_sd_st)
    depth = max(0.0, float(depth))
    duration = (config.base_duration_ms + config.position_duration_ms.get(pos, 0.0)
                + config.coupling_ms_per_st * depth)
    if config.duration_sd_ms > 0:
        duration += rng.normal(0.0, config.duration_sd_ms)
    duration = max(20.0, float(duration))
    spec = ContourSpec(onset_st=config.onset_st, dip_depth_st=depth,
                       dip_position=config.dip_position, offset_st=config.offset_st,
                       noise_sd_st=config.noise_sd_st)
    tid = make_token_id(sid, word_id, pos, rep)
    contour = gen_contour(spec, tid, duration, rng=rng)
    return SynthToken(tid, sid, gender, combo, pos, rep, word_id, depth, duration, contour)


def gen_corpus(config: SynthCorpusConfig, workers: int = 1) -> SynthCorpus:
    """Generate the full factorial corpus.

    Each speaker's contours are shifted by one constant so that the mean of
    their voiced F0 equals the speaker's base frequency; this makes the
    stored contours exactly what semitone normalization recovers.
    """
    design = _design(config)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(lambda a: _one_token(config, *a), enumerate(design)))
    else:
        raw = [_one_token(config, i, row) for i, row in enumerate(design)]

    speaker_hz = {}
    tokens = []
    for k, (sid, gender) in enumerate(speaker_ids(config)):
        base = (200.0 if gender == "F" else 110.0) + 10.0 * (k % config.n_speakers_per_gender)
        speaker_hz[sid] = base
        mine = [t for t in raw if t.speaker_id == sid]
        all_s = np.concatenate([t.contour.s for t in mine])
        shift = -12.0 * np.log2(np.mean(np.exp2(all_s / 12.0)))
        for t in mine:
            centered = SampledContour(t.token_id, t.contour.s + shift, t.duration_ms)
            tokens.append(replace(t, contour=centered))
    return SynthCorpus(config, tuple(tokens), speaker_hz)


def interval_label(tok: SynthToken) -> str:
    return f"{tok.word_id}.{tok.position}.{tok.repetition}"


def _speaker_files(tokens: Sequence[SynthToken], base_hz: float, gap_s: float = 0.1):
    times, f0s, voiced, intervals = [], [], [], []
    cursor = 0.0
    n_gap = 5
    for tok in tokens:
        start = cursor + gap_s
        for j in range(1, n_gap + 1):
            times.append(cursor + j * gap_s / (n_gap + 1))
            f0s.append(0.0)
            voiced.append(False)
        intervals.append(Interval(cursor, start, ""))
        end = start + tok.duration_ms / 1000.0
        tau = sample_times(start, end)
        times.extend(tau.tolist())
        f0s.extend((base_hz * np.exp2(tok.contour.s / 12.0)).tolist())
        voiced.extend([True] * len(tau))
        intervals.append(Interval(start, end, interval_label(tok)))
        cursor = end
    for j in range(1, n_gap + 1):
        times.append(cursor + j * gap_s / (n_gap + 1))
        f0s.append(0.0)
        voiced.append(False)
    intervals.append(Interval(cursor, cursor + gap_s, ""))
    track = F0Track(np.array(times), np.array(f0s), np.array(voiced))
    tier = IntervalTier(TIER_NAME, tuple(intervals), 0.0, cursor + gap_s)
    return track, tier


def corpus_files(corpus: SynthCorpus) -> Dict[str, str]:
    """Relative path -> file text for the whole corpus tree."""
    files = {}
    speakers = []
    for sid, gender in speaker_ids(corpus.config):
        mine = [t for t in corpus.tokens if t.speaker_id == sid]
        track, tier = _speaker_files(mine, corpus.speaker_hz[sid])
        track_path = f"tracks/{sid}.csv"
        grid_path = f"textgrids/{sid}.TextGrid"
        files[track_path] = serialize_f0_csv(track)
        files[grid_path] = serialize_textgrid([tier])
        specs = tuple(TokenSpec(t.word_id, t.tonal_combination, t.position, t.repetition,
                                interval_label=interval_label(t)) for t in mine)
        speakers.append(SpeakerEntry(sid, gender, (
            TrackEntry(track_path, "csv", grid_path, TIER_NAME, specs),)))
    files["manifest.json"] = CorpusManifest(tuple(speakers)).to_json()
    files["ground_truth.csv"] = corpus.ground_truth_csv()
    meta = {"generator": GENERATOR, "config": corpus.config.to_dict(),
            "n_tokens": len(corpus.tokens), "speaker_hz": dict(corpus.speaker_hz)}
    files["synth_metadata.json"] = json.dumps(meta, indent=2, sort_keys=True) + "\n"
    return files


def write_corpus(corpus: SynthCorpus, out_dir) -> Path:
    """Write the corpus tree under ``out_dir``; returns the manifest path."""
    out = Path(out_dir)
    for rel, text in sorted(corpus_files(corpus).items()):
        path = out / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return out / "manifest.json"
