"""Corpus manifests and their resolution into per-token F0 slices."""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from ..exceptions import CorpusError, ParseError
from .praat import IntervalTier, parse_pitchtier, parse_textgrid
from .tracks import F0Track, decode_text, parse_f0_csv

GENDERS = ("F", "M")
POSITIONS = ("initial", "medial", "final")
TRACK_FORMATS = ("csv", "pitchtier")
_COMBINATION = re.compile(r"^T[1-5]T2$")


@dataclass(frozen=True)
class TokenSpec:
    word_id: str
    tonal_combination: str
    position: str
    repetition: int
    interval_index: Optional[int] = None
    interval_label: Optional[str] = None


@dataclass(frozen=True)
class TrackEntry:
    track_file: str
    track_format: str
    textgrid_file: str
    tier_name: str
    tokens: Tuple[TokenSpec, ...] = ()


@dataclass(frozen=True)
class SpeakerEntry:
    speaker_id: str
    gender: str
    entries: Tuple[TrackEntry, ...] = ()


@dataclass(frozen=True)
class CorpusManifest:
    speakers: Tuple[SpeakerEntry, ...] = ()

    @property
    def n_tokens(self) -> int:
        return sum(len(e.tokens) for s in self.speakers for e in s.entries)

    def to_dict(self) -> dict:
        def token(t: TokenSpec):
            d = {k: v for k, v in asdict(t).items() if v is not None}
            return d

        return {"speakers": [
            {"speaker_id": s.speaker_id, "gender": s.gender,
             "entries": [{"track_file": e.track_file, "track_format": e.track_format,
                          "textgrid_file": e.textgrid_file, "tier_name": e.tier_name,
                          "tokens": [token(t) for t in e.tokens]}
                         for e in s.entries]}
            for s in self.speakers]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True, eq=False)
class TokenRecord:
    token_id: str
    speaker_id: str
    gender: str
    tonal_combination: str
    position: str
    repetition: int
    word_id: str
    track_slice: F0Track = field(repr=False)
    interval: Tuple[float, float]

    @property
    def factors(self) -> Dict[str, str]:
        return {"tonal_combination": self.tonal_combination,
                "position": self.position, "gender": self.gender}


def make_token_id(speaker_id, word_id, position, repetition) -> str:
    return f"{speaker_id}/{word_id}/{position}/{repetition}"


def _require(d, key, where):
    if key not in d:
        raise CorpusError(f"{where}: missing field {key!r}")
    return d[key]


def _nonempty(value, key, where):
    if not isinstance(value, str) or not value:
        raise CorpusError(f"{where}: {key} must be a non-empty string")
    return value


def manifest_from_dict(data: dict) -> CorpusManifest:
    """Validate a decoded manifest document and build a CorpusManifest."""
    if not isinstance(data, dict) or not isinstance(data.get("speakers"), list):
        raise CorpusError("manifest: top level must be an object with a 'speakers' array")
    speakers = []
    for si, sp in enumerate(data["speakers"]):
        where = f"speakers[{si}]"
        speaker_id = _nonempty(_require(sp, "speaker_id", where), "speaker_id", where)
        gender = _require(sp, "gender", where)
        if gender not in GENDERS:
            raise CorpusError(f"{where}: gender must be one of {GENDERS}, got {gender!r}")
        entries = []
        for ei, en in enumerate(_require(sp, "entries", where)):
            ewhere = f"{where}.entries[{ei}]"
            fmt = _require(en, "track_format", ewhere)
            if fmt not in TRACK_FORMATS:
                raise CorpusError(f"{ewhere}: track_format must be one of {TRACK_FORMATS}")
            tokens = []
            for ti, tk in enumerate(_require(en, "tokens", ewhere)):
                twhere = f"{ewhere}.tokens[{ti}]"
                has_idx = tk.get("interval_index") is not None
                has_lab = tk.get("interval_label") is not None
                if has_idx == has_lab:
                    raise CorpusError(f"{twhere}: give exactly one of interval_index, "
                                      "interval_label")
                combo = _require(tk, "tonal_combination", twhere)
                if not isinstance(combo, str) or not _COMBINATION.match(combo):
                    raise CorpusError(f"{twhere}: tonal_combination must look like TnT2 "
                                      f"(n in 1..5), got {combo!r}")
                pos = _require(tk, "position", twhere)
                if pos not in POSITIONS:
                    raise CorpusError(f"{twhere}: position must be one of {POSITIONS}")
                rep = _require(tk, "repetition", twhere)
                if isinstance(rep, bool) or not isinstance(rep, int) or rep < 1:
                    raise CorpusError(f"{twhere}: repetition must be a positive integer")
                idx = tk.get("interval_index")
                if has_idx and (isinstance(idx, bool) or not isinstance(idx, int) or idx < 0):
                    raise CorpusError(f"{twhere}: interval_index must be a non-negative int")
                tokens.append(TokenSpec(
                    word_id=_nonempty(_require(tk, "word_id", twhere), "word_id", twhere),
                    tonal_combination=combo, position=pos, repetition=rep,
                    interval_index=idx, interval_label=tk.get("interval_label")))
            entries.append(TrackEntry(
                track_file=_nonempty(_require(en, "track_file", ewhere), "track_file", ewhere),
                track_format=fmt,
                textgrid_file=_nonempty(_require(en, "textgrid_file", ewhere),
                                        "textgrid_file", ewhere),
                tier_name=_nonempty(_require(en, "tier_name", ewhere), "tier_name", ewhere),
                tokens=tuple(tokens)))
        speakers.append(SpeakerEntry(speaker_id, gender, tuple(entries)))
    return CorpusManifest(tuple(speakers))


def parse_manifest(text_content: str) -> CorpusManifest:
    try:
        data = json.loads(text_content.lstrip("﻿"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"manifest is not valid JSON: {exc.msg}", line=exc.lineno) from None
    return manifest_from_dict(data)


def read_text_file(path) -> str:
    return decode_text(Path(path).read_bytes())


def directory_loader(base_dir) -> Callable[[str], str]:
    """File loader resolving manifest paths relative to ``base_dir``."""
    base = Path(base_dir)

    def load(path: str) -> str:
        p = Path(path)
        return read_text_file(p if p.is_absolute() else base / p)

    return load


def resolve_interval(tier: IntervalTier, spec: TokenSpec):
    if spec.interval_index is not None:
        if spec.interval_index >= len(tier.intervals):
            raise CorpusError(f"interval_index {spec.interval_index} out of range for tier "
                              f"{tier.name!r} with {len(tier.intervals)} intervals")
        return tier.intervals[spec.interval_index]
    hits = [iv for iv in tier.intervals if iv.label and iv.label == spec.interval_label]
    if len(hits) != 1:
        raise CorpusError(f"unresolved interval: label {spec.interval_label!r} matches "
                          f"{len(hits)} intervals in tier {tier.name!r}")
    return hits[0]


def _load_entry(entry: TrackEntry, file_loader):
    def fetch(path):
        try:
            return file_loader(path)
        except Exception as exc:  # loader errors carry no uniform type
            raise CorpusError(f"{path}: cannot load file: {exc}") from exc

    track_text = fetch(entry.track_file)
    try:
        if entry.track_format == "csv":
            track = parse_f0_csv(track_text, source_id=entry.track_file)
        else:
            track = parse_pitchtier(track_text, source_id=entry.track_file)
    except ParseError as exc:
        raise CorpusError(str(exc)) from exc
    grid_text = fetch(entry.textgrid_file)
    try:
        tiers = parse_textgrid(grid_text, source_id=entry.textgrid_file)
    except ParseError as exc:
        raise CorpusError(str(exc)) from exc
    named = [t for t in tiers if t.name == entry.tier_name]
    if len(named) != 1:
        raise CorpusError(f"{entry.textgrid_file}: expected one tier named "
                          f"{entry.tier_name!r}, found {len(named)}")
    return track, named[0]


def load_corpus(manifest: CorpusManifest, file_loader: Callable[[str], str],
                errors: Optional[List[Tuple[str, str]]] = None,
                workers: int = 1) -> List[TokenRecord]:
    """Resolve every manifest token into a :class:`TokenRecord`.

    Output order is by speaker_id, then manifest order.  With ``errors=None``
    the first failure raises :class:`CorpusError`; otherwise failures are
    appended to ``errors`` as ``(token_id, reason)`` and loading continues,
    so ``len(result) + len(errors)`` equals the manifest token count.
    """
    speakers = sorted(manifest.speakers, key=lambda s: s.speaker_id)
    jobs = [(sp, en) for sp in speakers for en in sp.entries]

    def attempt(job):
        try:
            return _load_entry(job[1], file_loader), None
        except CorpusError as exc:
            return None, str(exc)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            loaded = list(pool.map(attempt, jobs))
    else:
        loaded = [attempt(j) for j in jobs]

    def fail(token_id, reason):
        if errors is None:
            raise CorpusError(f"{token_id}: {reason}")
        errors.append((token_id, reason))

    records: List[TokenRecord] = []
    seen = set()
    for (sp, entry), (result, load_error) in zip(jobs, loaded):
        for spec in entry.tokens:
            tid = make_token_id(sp.speaker_id, spec.word_id, spec.position, spec.repetition)
            if tid in seen:
                fail(tid, "duplicate token_id")
                continue
            seen.add(tid)
            if load_error is not None:
                fail(tid, load_error)
                continue
            track, tier = result
            try:
                iv = resolve_interval(tier, spec)
            except CorpusError as exc:
                fail(tid, str(exc))
                continue
            lo, hi = track.span
            if not (lo <= iv.xmin and iv.xmax <= hi):
                fail(tid, f"interval [{iv.xmin}, {iv.xmax}] outside track span [{lo}, {hi}]")
                continue
            records.append(TokenRecord(
                token_id=tid, speaker_id=sp.speaker_id, gender=sp.gender,
                tonal_combination=spec.tonal_combination, position=spec.position,
                repetition=spec.repetition, word_id=spec.word_id,
                track_slice=track.slice(iv.xmin, iv.xmax), interval=(iv.xmin, iv.xmax)))
    return records
