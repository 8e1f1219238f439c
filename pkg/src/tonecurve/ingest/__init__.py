"""Parsing of F0 tracks, Praat segmentations and corpus manifests."""

from .corpus import (
    GENDERS,
    POSITIONS,
    CorpusManifest,
    SpeakerEntry,
    TokenRecord,
    TokenSpec,
    TrackEntry,
    directory_loader,
    load_corpus,
    make_token_id,
    manifest_from_dict,
    parse_manifest,
    read_text_file,
    resolve_interval,
)
from .praat import (
    Interval,
    IntervalTier,
    parse_pitchtier,
    parse_textgrid,
    serialize_pitchtier,
    serialize_textgrid,
)
from .tracks import F0Track, decode_text, parse_f0_csv, serialize_f0_csv

__all__ = [
    "GENDERS", "POSITIONS", "CorpusManifest", "SpeakerEntry", "TokenRecord",
    "TokenSpec", "TrackEntry", "directory_loader", "load_corpus", "make_token_id",
    "manifest_from_dict", "parse_manifest", "read_text_file", "resolve_interval",
    "Interval", "IntervalTier", "parse_pitchtier", "parse_textgrid",
    "serialize_pitchtier", "serialize_textgrid", "F0Track", "decode_text",
    "parse_f0_csv", "serialize_f0_csv",
]
