"""
The surface integral behind the growth rate
===========================================

``J(b) = int_S exp(b k s.v) ds`` is what bounds the amplitude of an obstacle.
For a ball it is known in closed form, and ``ln J/(bk)`` approaches the
extent ``sup_S s.v`` only slowly: it first drops below 1, bottoms out at
``bk = 2 pi e``, and climbs back from below.
"""
import math

import numpy as np

from scatsize import Ball, E2, UnionOfBalls, lemma1_oracle

ball = Ball((0, 0, 0), 1.0)
for b in (2, 5, 10, 17.08, 30, 60, 120, 480):
    print(f"b = {b:7.2f}:  ln J/(bk) = {lemma1_oracle(ball, E2, b, 1.0) / b:.5f}")
print(f"minimum expected at b = 2 pi e = {2 * math.pi * math.e:.2f}")

# A shifted ball shows that the limit is sup s.v, not the thickness
shifted = Ball((0, 1, 0), 1.0)
print("\nball centred at (0, 1, 0):",
      [round(lemma1_oracle(shifted, E2, b, 1.0) / b, 4) for b in (10, 100, 1000)])

# Unions are integrated by quadrature over the exposed parts of each sphere
pair = UnionOfBalls((Ball((0, 0, 0), 1.0), Ball((0, 2.5, 0), 0.5)))
print("two balls, v = e2:", [round(lemma1_oracle(pair, E2, b, 1.0) / b, 4)
                             for b in (10, 40, 160)], "-> 3.0")
