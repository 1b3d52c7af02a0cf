"""The two handle pieces and their corner-glued assembly.

The first piece cuts a cone-like metric along a graph hypersurface,
creating a corner with angle below pi/2; the second digs a shallow collar
into a convex boundary, creating an angle just above pi/2.  The assembly
checker verifies the cross second-fundamental-form sums, the angle sum
below pi, and positivity near the corner on the adjacent faces.

Run:  python demos/demo_handles.py
"""

import math

from warpbench import assemble_handle, corner_angle_handle1
from warpbench.blocks import corner_angle_handle2

# the cut angle is acute iff 2 sin(lam1 (pi/2 - eps1)) > 1, which pushes
# lam1 close to 1; the collar angle arccos(-a/sqrt(1+a^2)) sits just above
# pi/2 for a small dig slope a
for lam1, eps1 in ((0.3, 0.01), (0.5, 0.01), (0.9, 0.05), (0.985, 0.01)):
    theta = corner_angle_handle1(lam1, eps1)
    marker = "< pi/2" if theta < math.pi / 2 else "> pi/2  (unusable)"
    print(f"cut angle  lam1={lam1:5.3f} eps1={eps1:4.2f}: "
          f"theta = {theta:.4f}  {marker}")
for a in (0.02, 0.05, 1.0):
    print(f"collar angle a={a:4.2f}: theta = "
          f"{corner_angle_handle2(a):.4f}")

params1 = dict(lambda1=0.985, lambda2=0.99, eps1=0.01, eps2=0.1,
               delta=0.05)
params2 = dict(lambda1=0.01, lambda2=0.02, a=0.02, b=1.5, eps=0.1,
               nu=0.03)
print("\nassembling both pieces (n = 4, K = 0.9) ...")
rep = assemble_handle(4, 0.9, params1, params2)
print(f"verdict: {rep.verdict}")
print(f"angle sum {rep.aux['angle_sum']:.4f} < pi = {math.pi:.4f}")
print(f"inner-face curvature floor: -{rep.aux['lambda']:.5f}")
print("\nmargins (all must be positive):")
for m in rep.margins:
    print(f"  {m.label:44s} {m.min: .4g}")
