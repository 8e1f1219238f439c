"""F0 tracks and the plain CSV track format (``time_s,f0_hz``)."""

from __future__ import annotations

import codecs
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..exceptions import ParseError

CSV_HEADER = "time_s,f0_hz"
_UNVOICED_TOKENS = {"", "nan", "0", "--undefined--"}


@dataclass(frozen=True, eq=False)
class F0Track:
    """Time-stamped F0 samples with a voicing flag.

    Unvoiced samples carry ``f0 == 0``.  ``domain`` is the declared time
    range of the source object (PitchTier ``xmin``/``xmax``); when absent the
    span of the sample times is used.
    """

    times: np.ndarray
    f0: np.ndarray
    voiced: np.ndarray
    source_id: str = ""
    domain: Optional[Tuple[float, float]] = field(default=None)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        f0 = np.asarray(self.f0, dtype=float).reshape(-1)
        voiced = np.asarray(self.voiced, dtype=bool).reshape(-1)
        if not (len(times) == len(f0) == len(voiced)):
            raise ValueError("times, f0 and voiced must have equal length")
        if len(times) > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("track times must be strictly increasing")
        if np.any(voiced & ~(f0 > 0)):
            raise ValueError("voiced samples must have f0 > 0")
        f0 = np.where(voiced, f0, 0.0)
        for arr in (times, f0, voiced):
            arr.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "f0", f0)
        object.__setattr__(self, "voiced", voiced)

    def __len__(self):
        return len(self.times)

    @property
    def span(self) -> Tuple[float, float]:
        if self.domain is not None:
            return self.domain
        if len(self.times) == 0:
            return (math.nan, math.nan)
        return (float(self.times[0]), float(self.times[-1]))

    @property
    def n_voiced(self) -> int:
        return int(self.voiced.sum())

    def voiced_f0(self) -> np.ndarray:
        return self.f0[self.voiced]

    def slice(self, xmin: float, xmax: float) -> "F0Track":
        """Samples with ``xmin <= time <= xmax``; never interpolates."""
        keep = (self.times >= xmin) & (self.times <= xmax)
        return F0Track(self.times[keep], self.f0[keep], self.voiced[keep],
                       source_id=self.source_id, domain=(xmin, xmax))

    def samples(self):
        """Iterate ``(time, f0, voiced)`` tuples."""
        for t, f, v in zip(self.times, self.f0, self.voiced):
            yield float(t), float(f), bool(v)


def decode_text(data: bytes) -> str:
    """Decode UTF-8 or UTF-16 bytes, sniffing the byte-order mark."""
    if data.startswith(codecs.BOM_UTF8):
        return data[len(codecs.BOM_UTF8):].decode("utf-8")
    if data.startswith(codecs.BOM_UTF16_LE) or data.startswith(codecs.BOM_UTF16_BE):
        return data.decode("utf-16")
    # BOM-less UTF-16 still shows up from some Praat builds
    if len(data) >= 4 and data[1:4:2] == b"\x00\x00" and data[0] != 0:
        return data.decode("utf-16-le")
    if len(data) >= 4 and data[0:4:2] == b"\x00\x00" and data[1] != 0:
        return data.decode("utf-16-be")
    return data.decode("utf-8")


def _reject_binary(text: str, source=None):
    if text.startswith("ooBinaryFile"):
        raise ParseError("binary Praat files are not supported; save as text",
                         line=1, source=source)


def parse_f0_csv(text_content: str, source_id: str = "") -> F0Track:
    """Parse a ``time_s,f0_hz`` CSV listing.

    Empty, ``NaN`` or ``0`` in the f0 column marks the frame unvoiced.
    """
    text = text_content.lstrip("﻿")
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("empty file", line=1, source=source_id or None)
    header = [h.strip() for h in lines[0].split(",")]
    if header != ["time_s", "f0_hz"]:
        raise ParseError(f"expected header {CSV_HEADER!r}, got {lines[0]!r}",
                         line=1, source=source_id or None)

    times, f0s, voiced = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, got {len(parts)}",
                             line=lineno, source=source_id or None)
        t_field, f_field = parts[0].strip(), parts[1].strip()
        try:
            t = float(t_field)
        except ValueError:
            raise ParseError(f"bad time value {t_field!r}", line=lineno,
                             source=source_id or None) from None
        if not math.isfinite(t):
            raise ParseError(f"bad time value {t_field!r}", line=lineno,
                             source=source_id or None)
        if f_field.lower() in _UNVOICED_TOKENS:
            f = 0.0
        else:
            try:
                f = float(f_field)
            except ValueError:
                raise ParseError(f"bad f0 value {f_field!r}", line=lineno,
                                 source=source_id or None) from None
            if math.isnan(f) or f == 0.0:
                f = 0.0
            elif f < 0 or not math.isfinite(f):
                raise ParseError(f"f0 must be positive, got {f_field!r}",
                                 line=lineno, source=source_id or None)
        if times and t <= times[-1]:
            raise ParseError(f"non-monotone time {t!r} after {times[-1]!r}",
                             line=lineno, source=source_id or None)
        times.append(t)
        f0s.append(f)
        voiced.append(f > 0)

    if not times:
        raise ParseError("no data rows", line=1, source=source_id or None)
    return F0Track(np.array(times), np.array(f0s), np.array(voiced, dtype=bool),
                   source_id=source_id)


def serialize_f0_csv(track: F0Track) -> str:
    """Inverse of :func:`parse_f0_csv`; floats written with ``repr`` so they
    reparse exactly."""
    rows = [CSV_HEADER]
    for t, f, v in track.samples():
        rows.append(f"{t!r},{f!r}" if v else f"{t!r},0")
    return "\n".join(rows) + "\n"
