"""
Counting turns and measuring curvature
======================================

Step one compares chord slopes to decide how many turning points a contour
has. Step two puts a triangle on each turn and reads off the sine of the
angle there.
"""

import numpy as np

from tonecurve import analyze_token
from tonecurve.normalize import TIME_GRID, SampledContour
from tonecurve.tcatt import vertex_angle


def show(name, s):
    res = analyze_token(SampledContour(name, np.asarray(s, float), 200.0))
    sl = res.slopes
    turns = ", ".join(f"#{t.index} sine {t.sine:.3f} ({'obtuse' if t.obtuse else 'acute'})"
                      for t in res.turns) or "none"
    print(f"{name:<16} k={sl.k:+.2f}  {res.contour_class.value:<9}  turns: {turns}  "
          f"curvature {res.curvature_index:.3f}")


show("rise", np.linspace(-1, 1, 10))
show("shallow dip", [1, .95, .9, .85, .8, .84, .88, .92, .96, 1])
show("deep dip", np.interp(TIME_GRID, [0, 4 / 9, 1], [1, -1, 1]))
show("fall-rise-fall", [1, 0.4, 0.0, 0.3, 0.6, 0.9, 1.2, 1.0, 0.7, 0.5])

# Deepening a dip raises the curvature only while the turn angle is obtuse.
# Past a right angle the sine falls again, so depth and curvature part ways.
print("\ndepth (st)  angle (deg)  sine")
for d in (0.05, 0.2, 0.4, 0.5, 1.0, 2.0, 4.0):
    cos_a, angle, sine, _ = vertex_angle((4 / 9, -d), (0, 0), (1, 0))
    print(f"{d:10.2f}  {np.degrees(angle):11.1f}  {sine:.3f}")

# The same geometry on a compressed semitone axis stays in the obtuse regime
# for deeper dips; the class never changes with the scale.
s = np.interp(TIME_GRID, [0, 4 / 9, 1], [0, -1.0, 0])
for scale in (1.0, 0.2):
    res = analyze_token(SampledContour("x", s, 200.0), semitone_scale=scale)
    print(f"1 st dip at axis scale {scale}: {res.contour_class.value}, "
          f"curvature {res.curvature_index:.3f}")
