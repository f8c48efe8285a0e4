"""
Width profile of a brick
========================

Sweeping the imaginary axis ``v`` through the e1-e2 plane traces the width
function of a 1 x 2 x 1 box: 1 along e1, 2 along e2, and the diagonal value
in between.
"""
import numpy as np

from scatsize import AnalyticPotential, AxisBox, E1, E3, PotentialModel, RealDirection, width
from scatsize import sweep_widths

brick = AxisBox((0, 0, 0), (1, 2, 1))
model = PotentialModel(AnalyticPotential(brick, 1.0))
alpha = RealDirection.normalized([0.6, 0.0, 0.8])

rows = sweep_widths(model, alpha, n=6, plane_normal=E3, b_grid=np.linspace(8, 24, 12), k=5.0,
                    start=E1)
print("   angle   width_hat   width_true")
for v, res in rows:
    angle = np.degrees(np.arctan2(v.y, v.x))
    print(f"{angle:8.1f}   {res.width_hat:9.4f}   {width(brick, v):9.4f}")
