"""
Why a sphere does not reveal its radius this way
================================================

For any spherically symmetric scatterer the amplitude is a function of the
single number ``t = beta . alpha``.  Along ``beta(b)`` this number grows only
linearly in ``b``, and the amplitude is an entire function of ``t`` of order
one half, so ``ln|A|`` grows like ``sqrt(b)`` rather than like ``k b R``.
The upper bound ``exp(k b R)`` still holds; it is simply far from sharp.
"""
import numpy as np

from scatsize import E2, E3, RealDirection, SphereObstacle, compute_ladder, fit_extent

alpha = RealDirection.normalized([0.6, 0.8, 0.0])
sphere = SphereObstacle(radius=1.0, k=3.0)

b = np.geomspace(2, 60, 10)
ladder = compute_ladder(sphere, alpha, E3, E2, b)

print(" b        ln|A|     ln|A|/(kb)   envelope/(kb)")
for bi, lm, env in zip(ladder.b_grid, ladder.logmag, ladder.envelope):
    print(f"{bi:6.2f}  {lm:9.4f}  {lm / (3 * bi):9.4f}   {env / (3 * bi):9.4f}")

# ln|A| against sqrt(b) is close to a straight line
slope, icpt = np.polyfit(np.sqrt(ladder.b_grid), ladder.logmag, 1)
resid = ladder.logmag - (slope * np.sqrt(ladder.b_grid) + icpt)
print(f"\nln|A| ~ {slope:.3f} sqrt(b) + {icpt:.3f}, max residual {np.abs(resid).max():.3f}")

est = fit_extent(ladder)
print(f"linear-in-b fit: d_hat = {est.d_hat:.3f}  (true extent 1.0)")

# The same happens for a radial potential in the Born approximation, and
# choosing alpha orthogonal to both w and v freezes t altogether.
