"""Readers and writers for Praat text files (PitchTier, TextGrid).

Praat's long and short text forms carry the same token stream; the long
form only adds ``label =`` decorations and ``[n]:`` indices.  Both are
handled by one scanner that drops the decorations and yields numbers,
strings and ``<flag>`` tokens with their line numbers.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ParseError
from .tracks import F0Track, _reject_binary


class Interval(NamedTuple):
    xmin: float
    xmax: float
    label: str


@dataclass(frozen=True)
class IntervalTier:
    name: str
    intervals: Tuple[Interval, ...]
    xmin: Optional[float] = None
    xmax: Optional[float] = None

    def __len__(self):
        return len(self.intervals)


class _Tok(NamedTuple):
    kind: str  # "num" | "str" | "flag" | "word"
    value: object
    line: int


_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")
_WORDS = re.compile(r"[A-Za-z_]\w*(?:[ \t]+[A-Za-z_]\w*)*")
_FLAG = re.compile(r"<(\w+)>")


def _scan(text: str, source=None) -> List[_Tok]:
    toks = []
    i, n, line = 0, len(text), 1
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
        elif ch.isspace() or ch in "=:?":
            i += 1
        elif ch == "!":
            # short-form comment
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "[":
            j = text.find("]", i)
            if j < 0:
                raise ParseError("unterminated '['", line=line, source=source)
            i = j + 1
        elif ch == '"':
            start_line = line
            j = i + 1
            buf = []
            while True:
                if j >= n:
                    raise ParseError("unterminated string", line=start_line,
                                     source=source)
                if text[j] == '"':
                    if j + 1 < n and text[j + 1] == '"':
                        buf.append('"')
                        j += 2
                        continue
                    break
                if text[j] == "\n":
                    line += 1
                buf.append(text[j])
                j += 1
            toks.append(_Tok("str", "".join(buf), start_line))
            i = j + 1
        elif ch == "<":
            m = _FLAG.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {ch!r}", line=line,
                                 source=source)
            toks.append(_Tok("flag", m.group(1), line))
            i = m.end()
        else:
            m = _NUMBER.match(text, i)
            if m and (m.end() == n or not (text[m.end()].isalpha() or text[m.end()] == "_")):
                toks.append(_Tok("num", float(m.group()), line))
                i = m.end()
                continue
            m = _WORDS.match(text, i)
            if not m:
                m = re.compile(r"\S+").match(text, i)
                toks.append(_Tok("word", m.group(), line))
                i = m.end()
                continue
            j = m.end()
            while j < n and text[j] in " \t":
                j += 1
            if j < n and text[j] in "=:?[":
                i = j  # a label such as "xmin =" or "points [1]:"
            else:
                toks.append(_Tok("word", m.group(), line))
                i = m.end()
    return toks


class _Cursor:
    def __init__(self, toks, source):
        self.toks = toks
        self.pos = 0
        self.source = source

    def _last_line(self):
        return self.toks[-1].line if self.toks else 1

    def at_end(self):
        return self.pos >= len(self.toks)

    def next(self, what):
        if self.at_end():
            raise ParseError(f"unexpected end of file, expected {what}",
                             line=self._last_line(), source=self.source)
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def number(self, what="number"):
        tok = self.next(what)
        if tok.kind != "num":
            raise ParseError(f"expected {what}, got non-numeric {tok.value!r}",
                             line=tok.line, source=self.source)
        return tok.value

    def count(self, what):
        value = self.number(what)
        if value != int(value) or value < 0:
            raise ParseError(f"{what} must be a non-negative integer",
                             line=self.toks[self.pos - 1].line, source=self.source)
        return int(value)

    def string(self, what="string"):
        tok = self.next(what)
        if tok.kind != "str":
            raise ParseError(f"expected {what}, got {tok.value!r}",
                             line=tok.line, source=self.source)
        return tok.value


def _header(text: str, expected_class: str, source) -> _Cursor:
    _reject_binary(text, source)
    cur = _Cursor(_scan(text, source), source)
    if cur.at_end():
        raise ParseError("missing header", line=1, source=source)
    first = cur.toks[0]
    if first.kind != "str" or first.value != "ooTextFile":
        raise ParseError('missing header: expected File type = "ooTextFile"',
                         line=first.line, source=source)
    cur.pos = 1
    cls = cur.next("object class")
    if cls.kind != "str" or cls.value != expected_class:
        raise ParseError(f"expected Object class = {expected_class!r}, got {cls.value!r}",
                         line=cls.line, source=source)
    return cur


def parse_pitchtier(text_content: str, source_id: str = "") -> F0Track:
    """Parse a PitchTier in long or short text form.  Every point is voiced."""
    source = source_id or None
    cur = _header(text_content.lstrip("﻿"), "PitchTier", source)
    xmin = cur.number("xmin")
    xmax = cur.number("xmax")
    declared = cur.count("point count")
    times, values = [], []
    for k in range(declared):
        if cur.at_end():
            raise ParseError(f"point count mismatch: declared {declared}, found {k}",
                             line=cur._last_line(), source=source)
        times.append(cur.number("point time"))
        if cur.at_end():
            raise ParseError(f"point count mismatch: declared {declared}, point {k + 1} "
                             "has no value", line=cur._last_line(), source=source)
        values.append(cur.number("point value"))
    if not cur.at_end():
        extra = (len(cur.toks) - cur.pos) // 2
        raise ParseError(f"point count mismatch: declared {declared}, "
                         f"found {declared + extra} or more",
                         line=cur.toks[cur.pos].line, source=source)
    times_arr = np.array(times, dtype=float)
    if len(times_arr) > 1 and not np.all(np.diff(times_arr) > 0):
        raise ParseError("point times must be strictly increasing", source=source)
    values_arr = np.array(values, dtype=float)
    if np.any(values_arr <= 0):
        raise ParseError("PitchTier values must be positive", source=source)
    return F0Track(times_arr, values_arr, np.ones(len(times_arr), dtype=bool),
                   source_id=source_id, domain=(xmin, xmax))


def _fmt(x: float) -> str:
    return repr(float(x))


def _quote(s: str) -> str:
    return '"' + s.replace('"', '""') + '"'


def serialize_pitchtier(track: F0Track, short: bool = False) -> str:
    """Write the voiced samples of ``track`` as a PitchTier text file."""
    times = track.times[track.voiced]
    values = track.f0[track.voiced]
    xmin, xmax = track.span
    if len(times) and (xmin != xmin or xmin > times[0]):
        xmin = float(times[0])
    if len(times) and (xmax != xmax or xmax < times[-1]):
        xmax = float(times[-1])
    if not len(times):
        xmin, xmax = 0.0, 0.0
    out = ['File type = "ooTextFile"', 'Object class = "PitchTier"', ""]
    if short:
        out += [_fmt(xmin), _fmt(xmax), str(len(times))]
        for t, v in zip(times, values):
            out += [_fmt(t), _fmt(v)]
    else:
        out += [f"xmin = {_fmt(xmin)} ", f"xmax = {_fmt(xmax)} ",
                f"points: size = {len(times)} "]
        for k, (t, v) in enumerate(zip(times, values), start=1):
            out += [f"points [{k}]:", f"    number = {_fmt(t)} ",
                    f"    value = {_fmt(v)} "]
    return "\n".join(out) + "\n"


def _check_tier(name, intervals, line, source):
    prev_xmax = None
    for k, iv in enumerate(intervals, start=1):
        if not iv.xmin < iv.xmax:
            raise ParseError(f"tier {name!r} interval {k}: xmin {iv.xmin} >= xmax {iv.xmax}",
                             line=line, source=source)
        if prev_xmax is not None and iv.xmin < prev_xmax:
            raise ParseError(f"tier {name!r} interval {k} overlaps the previous one "
                             f"({iv.xmin} < {prev_xmax})", line=line, source=source)
        prev_xmax = iv.xmax


def parse_textgrid(text_content: str, source_id: str = "") -> List[IntervalTier]:
    """Parse a TextGrid text file into its interval tiers, in file order.

    Point tiers (``TextTier``) are skipped with a :class:`UserWarning`.
    """
    source = source_id or None
    cur = _header(text_content.lstrip("﻿"), "TextGrid", source)
    cur.number("xmin")
    cur.number("xmax")
    tok = cur.next("tiers flag")
    if tok.kind == "flag":
        if tok.value == "absent":
            return []
        n_tiers = cur.count("tier count")
    elif tok.kind == "num":
        n_tiers = int(tok.value)
    else:
        raise ParseError(f"expected tier flag, got {tok.value!r}", line=tok.line,
                         source=source)

    tiers = []
    for _ in range(n_tiers):
        cls_tok = cur.next("tier class")
        if cls_tok.kind != "str":
            raise ParseError(f"expected tier class, got {cls_tok.value!r}",
                             line=cls_tok.line, source=source)
        name = cur.string("tier name")
        t_min = cur.number("tier xmin")
        t_max = cur.number("tier xmax")
        size = cur.count("item count")
        if cls_tok.value == "IntervalTier":
            intervals = []
            for _ in range(size):
                a = cur.number("interval xmin")
                b = cur.number("interval xmax")
                label = cur.string("interval text")
                intervals.append(Interval(a, b, label))
            _check_tier(name, intervals, cls_tok.line, source)
            tiers.append(IntervalTier(name, tuple(intervals), t_min, t_max))
        elif cls_tok.value in ("TextTier", "PointTier"):
            for _ in range(size):
                cur.number("point time")
                cur.string("point mark")
            warnings.warn(f"skipping point tier {name!r}", UserWarning, stacklevel=2)
        else:
            raise ParseError(f"unknown tier class {cls_tok.value!r}",
                             line=cls_tok.line, source=source)
    return tiers


def serialize_textgrid(tiers: Sequence[IntervalTier], xmin: Optional[float] = None,
                       xmax: Optional[float] = None) -> str:
    """Write interval tiers as a long-form TextGrid."""
    def lo(t):
        return t.xmin if t.xmin is not None else t.intervals[0].xmin

    def hi(t):
        return t.xmax if t.xmax is not None else t.intervals[-1].xmax

    if xmin is None:
        xmin = min(lo(t) for t in tiers) if tiers else 0.0
    if xmax is None:
        xmax = max(hi(t) for t in tiers) if tiers else 0.0
    out = ['File type = "ooTextFile"', 'Object class = "TextGrid"', "",
           f"xmin = {_fmt(xmin)} ", f"xmax = {_fmt(xmax)} "]
    if not tiers:
        out.append("tiers? <absent> ")
        return "\n".join(out) + "\n"
    out += ["tiers? <exists> ", f"size = {len(tiers)} ", "item []: "]
    for k, tier in enumerate(tiers, start=1):
        out += [f"    item [{k}]:",
                '        class = "IntervalTier" ',
                f"        name = {_quote(tier.name)} ",
                f"        xmin = {_fmt(lo(tier))} ",
                f"        xmax = {_fmt(hi(tier))} ",
                f"        intervals: size = {len(tier.intervals)} "]
        for j, iv in enumerate(tier.intervals, start=1):
            out += [f"        intervals [{j}]:",
                    f"            xmin = {_fmt(iv.xmin)} ",
                    f"            xmax = {_fmt(iv.xmax)} ",
                    f"            text = {_quote(iv.label)} "]
    return "\n".join(out) + "\n"
