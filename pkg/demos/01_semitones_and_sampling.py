"""
From a raw F0 track to ten semitone points
==========================================

A syllable's pitch track is reduced to ten equally spaced points, expressed in
semitones relative to the speaker's mean F0.
"""

import numpy as np

from tonecurve.ingest import TokenRecord, parse_f0_csv
from tonecurve.normalize import hz_to_semitone, sample_ten_points, speaker_reference

# One octave up is twelve semitones, whatever the starting frequency.
print("440 Hz re 220 Hz:", hz_to_semitone(440, 220), "st")
print("330 Hz re 220 Hz:", round(hz_to_semitone(330, 220), 4), "st")

# A 5 ms track of a falling-rising syllable, with two unvoiced frames
# (written as 0) in the middle of the vowel.
times = np.arange(0, 0.2, 0.005)
f0 = 180 - 60 * np.sin(np.pi * times / 0.2) ** 2
f0[18:20] = 0
text = "time_s,f0_hz\n" + "".join(f"{t:.3f},{f:.2f}\n" for t, f in zip(times, f0))
track = parse_f0_csv(text, source_id="demo")
print(f"{len(track.times)} frames, {track.n_voiced} voiced")

# The reference is the mean of all voiced frames of the speaker.
ref = speaker_reference([track], "arithmetic_mean", speaker_id="S1")
print(f"speaker reference: {ref.ref_hz:.2f} Hz")

# Unvoiced gaps are bridged by linear interpolation in Hz before conversion.
token = TokenRecord("S1/demo/medial/1", "S1", "F", "T2T2", "medial", 1, "demo",
                    track.slice(0.0, 0.195), (0.0, 0.195))
contour = sample_ten_points(token, ref)
for t, s in contour.points:
    print(f"  t = {t:.3f}   s = {s:+.3f} st")
print(f"duration: {contour.duration_ms:.0f} ms")
