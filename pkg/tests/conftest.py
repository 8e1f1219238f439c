import json
import sys

import numpy as np
import pytest

PITCHTIER_LONG = """File type = "ooTextFile"
Object class = "PitchTier"

xmin = 0
xmax = 0.3
points: size = 2
points [1]:
    number = 0.1
    value = 220
points [2]:
    number = 0.2
    value = 230
"""

PITCHTIER_SHORT = """File type = "ooTextFile"
Object class = "PitchTier"

0
0.3
2
0.1
220
0.2
230
"""

TEXTGRID_ONE_TIER = """File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 0.9
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "syllable"
        xmin = 0
        xmax = 0.9
        intervals: size = 3
        intervals [1]:
            xmin = 0
            xmax = 0.3
            text = ""
        intervals [2]:
            xmin = 0.3
            xmax = 0.6
            text = "mng"
        intervals [3]:
            xmin = 0.6
            xmax = 0.9
            text = ""
"""


def make_textgrid(tiers, xmax=1.0):
    """tiers: list of (class, name, items); items are (xmin, xmax, text) or
    (time, mark) for point tiers."""
    out = ['File type = "ooTextFile"', 'Object class = "TextGrid"', "",
           "xmin = 0 ", f"xmax = {xmax} ", "tiers? <exists> ", f"size = {len(tiers)} ",
           "item []: "]
    for k, (cls, name, items) in enumerate(tiers, start=1):
        out += [f"    item [{k}]:", f'        class = "{cls}" ', f'        name = "{name}" ',
                "        xmin = 0 ", f"        xmax = {xmax} "]
        if cls == "IntervalTier":
            out.append(f"        intervals: size = {len(items)} ")
            for j, (a, b, text) in enumerate(items, start=1):
                out += [f"        intervals [{j}]:", f"            xmin = {a} ",
                        f"            xmax = {b} ", f'            text = "{text}" ']
        else:
            out.append(f"        points: size = {len(items)} ")
            for j, (t, mark) in enumerate(items, start=1):
                out += [f"        points [{j}]:", f"            number = {t} ",
                        f'            mark = "{mark}" ']
    return "\n".join(out) + "\n"


@pytest.fixture
def shallow_dip_s():
    # onset (0, 1), turn (4/9, 0.8), offset (1, 1), linear in between
    return np.array([1.0, 0.95, 0.9, 0.85, 0.8, 0.84, 0.88, 0.92, 0.96, 1.0])


@pytest.fixture
def memory_loader():
    def build(files):
        def load(path):
            if path not in files:
                raise FileNotFoundError(path)
            return files[path]
        return load
    return build


def one_speaker_manifest(tokens, speaker="S1", gender="F", track="t.csv", grid="g.TextGrid",
                         fmt="csv"):
    return {"speakers": [{"speaker_id": speaker, "gender": gender, "entries": [
        {"track_file": track, "track_format": fmt, "textgrid_file": grid,
         "tier_name": "syllable", "tokens": tokens}]}]}


@pytest.fixture
def manifest_json():
    return lambda d: json.dumps(d)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(mod.RESULTS.items()):
        terminalreporter.write_line(line)
