"""Cohomogeneity-one families: the projective interpolation between the
symmetric metric and its flattened deformation, and the five-dimensional
double-disc-bundle family with its blended localization.

Run:  python demos/demo_families.py
"""

import math

from warpbench import projective_family_check, wu_family_check

print("projective family: Ricci and key-inequality margins over the "
      "interpolation")
for d, n in ((2, 2), (4, 2), (8, 2)):
    for s in (0.0, 0.5, 1.0):
        rep = projective_family_check(d, n, s)
        key = rep.margin("key_inequality")
        ric = min(rep.margin(k).min for k in ("ric_tt", "ric_VV",
                                              "ric_XX"))
        print(f"  d={d} n={n} s={s:4.2f}: {rep.verdict:6s} "
              f"ric_min={ric:8.4f}  key_min={key.min:8.5f}")

print("\nfive-dimensional family, product-like member:")
rep = wu_family_check("g00")
pi2 = (math.pi / 2) ** 2
print(f"  Ricci diagonal at t=0: ({rep.aux['ric_tt_at_0']:.6f}, "
      f"{rep.aux['ric_VV_at_0']:.6f}, {rep.aux['ric_XX_at_0']:.6f})")
print(f"  expected:              ({pi2:.6f}, {3 * pi2:.6f}, "
      f"{math.pi ** 2 / 2:.6f})")

print("\nblended localization (matching zone eps = 0.1):")
rep = wu_family_check("blended", eps=0.1)
print(f"  verdict: {rep.verdict}")
for m in rep.margins:
    print(f"  {m.label:22s} min Ricci {m.min: .4f}")

print("\na matching zone of eps = 0.2 exceeds the curvature budget of "
      "the transition\n(the positive part of the blended second "
      "derivative must stay below\n(pi/2)^2 h / 2, and the slope gap to "
      "absorb grows with eps):")
rep = wu_family_check("blended", eps=0.2)
print(f"  verdict: {rep.verdict}")
