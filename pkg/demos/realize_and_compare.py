"""
Realize two matings with equal cluster data and show they are not conjugate.

Run:  python3 demos/realize_and_compare.py [outdir]

Thurston pullback turns each angle specification into a map
(A z^3 + 1) / (B z^3 + 1).  The multiplier spectra then tell the two maps
apart.  If an output directory is given, basin pictures are written there.
"""
import os
import sys

import numpy as np

from artifact import MatingSpec, realize, spectrum, compare, RenderJob, render_dynamical
from artifact.render import write_image

F = {"degree": 3, "white": ["11/80", "19/80"], "black": ["22/80", "24/80"]}
G = {"degree": 3, "white": ["21/80", "29/80"], "black": ["71/80", "73/80"]}

outdir = sys.argv[1] if len(sys.argv) > 1 else None
maps = {}
for name, d in (("F", F), ("G", G)):
    coeffs, trace, cfg = realize(MatingSpec.from_dict(d), tol=1e-12)
    maps[name] = coeffs
    mv = np.array(trace.maxMove)
    print(f"{name}: A = {coeffs.A:.5f}, B = {coeffs.B:.5f}  "
          f"({trace.iterations} steps, last move {mv[-1]:.1e})")
    s = spectrum(coeffs)
    print("   fixed multipliers  ", np.round(np.sort_complex(s.fixedPointMultipliers), 4))
    if outdir:
        p = len(cfg.labels) // 2
        job = RenderJob(coeffs, 0j, 6.0, (400, 400), maxIterations=80,
                        cycles=[list(cfg.positions[:p]), list(cfg.positions[p:])])
        path = os.path.join(outdir, f"{name}.ppm")
        write_image(path, render_dynamical(job))
        print("   wrote", path)

r = compare(maps["F"], maps["G"])
print(f"\nF ~ G ? {r['equivalent']}   spectrum distance {r['spectrum_distance']:.3f}")
