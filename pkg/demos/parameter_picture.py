"""
The parameter plane of z^3 + c with the period-4 centers marked.

Run:  python3 demos/parameter_picture.py [out.ppm]
"""
import sys

from artifact import RenderJob, render_parameter, discover_centers
from artifact.render import write_image

out = sys.argv[1] if len(sys.argv) > 1 else "multibrot3.ppm"
centers = discover_centers(3, 4)
print(f"{len(centers)} period-4 centers found")
job = RenderJob(0j, 0j, 3.2, (480, 480), maxIterations=120, degree=3,
                coloring="escape-time", markers=list(centers))
write_image(out, render_parameter(3, job))
print("wrote", out)
