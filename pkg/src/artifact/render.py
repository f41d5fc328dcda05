"""
Basin and escape-time pictures.

Pixels map to the plane through their centres, row-major, with pixel (0, 0)
at ``center - width/2 * (1 + 1j*aspect)`` and aspect = rows / cols.  Images
are uint8 RGB arrays; ``write_ppm`` stores them as binary P6.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, UnboundedJob
from .pullback import BicriticalCoefficients

BUDGET = 2_000_000_000      # pixels * iterations

WHITE_RGB = (255, 255, 255)
BLACK_RGB = (0, 0, 0)
GRAY_RGB = (128, 128, 128)
MARK_RGB = (220, 30, 30)


@dataclass
class RenderJob:
    target: object                  # BicriticalCoefficients or complex c for z^d + c
    center: complex = 0j
    width: float = 4.0
    resolution: tuple = (256, 256)  # (cols, rows)
    maxIterations: int = 200
    coloring: str = "basin"         # 'basin' | 'escape-time'
    degree: int = 2
    cycles: list = field(default_factory=list)     # superattracting cycles, one list each
    markers: list = field(default_factory=list)
    budget: int = BUDGET

    def validate(self):
        cols, rows = self.resolution
        if cols <= 0 or rows <= 0:
            raise InvalidInput("resolution must be positive")
        if not self.width > 0:
            raise InvalidInput("width must be positive")
        if self.maxIterations < 1:
            raise InvalidInput("maxIterations must be >= 1")
        if self.coloring not in ("basin", "escape-time"):
            raise InvalidInput(f"unknown coloring {self.coloring!r}")
        if cols * rows * self.maxIterations > self.budget:
            raise UnboundedJob(f"{cols}x{rows}x{self.maxIterations} exceeds budget {self.budget}")


def pixel_grid(center, width, resolution):
    cols, rows = resolution
    aspect = rows / cols
    h = width / cols
    top_left = center - width / 2 * (1 + 1j * aspect)
    x = (np.arange(cols) + 0.5) * h
    y = (np.arange(rows) + 0.5) * h
    return top_left + x[None, :] + 1j * y[:, None]


def plane_to_pixel(z, center, width, resolution):
    """(row, col) of the pixel containing z, or None when outside."""
    cols, rows = resolution
    h = width / cols
    top_left = center - width / 2 * (1 + 1j * rows / cols)
    col = int(np.floor((z - top_left).real / h))
    row = int(np.floor((z - top_left).imag / h))
    if 0 <= row < rows and 0 <= col < cols:
        return row, col
    return None


def _chordal(z, w):
    # chordal distance on the Riemann sphere; w finite or inf
    if np.isinf(w):
        return 2 / np.sqrt(1 + np.abs(z) ** 2)
    with np.errstate(all="ignore"):
        d = 2 * np.abs(z - w) / np.sqrt((1 + np.abs(z) ** 2) * (1 + abs(w) ** 2))
    return np.where(np.isinf(z), 2 / np.sqrt(1 + abs(w) ** 2), d)


def classify(f: BicriticalCoefficients, z, cycles, max_iter=200, eps=1e-6):
    """Index of the cycle whose basin holds each point (-1 if undecided)."""
    z = np.asarray(z, complex).copy()
    label = np.full(z.shape, -1, dtype=np.int8)
    todo = np.ones(z.shape, bool)
    for _ in range(max_iter + 1):
        for k, cyc in enumerate(cycles):
            for w in cyc:
                hit = todo & (_chordal(z, w) < eps)
                label[hit] = k
                todo &= ~hit
        if not todo.any():
            break
        z[todo] = f(z[todo])
    return label


def render_dynamical(job: RenderJob) -> np.ndarray:
    """Basin picture of a realized map: white and black basins, gray undecided.

    For a polynomial target (complex c) the escape-time picture of z^d + c is
    drawn instead, with the filled Julia set black.
    """
    job.validate()
    Z = pixel_grid(job.center, job.width, job.resolution)
    if isinstance(job.target, BicriticalCoefficients) and job.coloring == "basin":
        if not job.cycles:
            raise InvalidInput("basin colouring needs the superattracting cycles")
        lab = classify(job.target, Z, job.cycles, job.maxIterations)
        img = np.empty(Z.shape + (3,), np.uint8)
        img[...] = GRAY_RGB
        img[lab == 0] = WHITE_RGB
        img[lab == 1] = BLACK_RGB
    else:
        c = complex(job.target)
        count = escape_counts(Z, c, job.degree, job.maxIterations, _radius(job.degree, c))
        img = _escape_image(count, job.maxIterations)
    return _draw_markers(img, job)


def _radius(d, c):
    # |z| > max(2, |c| + 1) escapes for z^d + c
    return max(2.0, abs(c) + 1.0)


def _escape_image(count, max_iter):
    img = np.zeros(count.shape + (3,), np.uint8)
    esc = count < max_iter
    shade = (255 * np.sqrt(count[esc] / max_iter)).astype(np.uint8)
    img[esc] = 255 - shade[:, None]
    return img


def escape_counts(z, c, d, max_iter, radius):
    """Iterations until |z| > radius under z -> z^d + c (max_iter if never)."""
    z = np.array(z, complex)
    c = np.broadcast_to(np.asarray(c, complex), z.shape)
    count = np.full(z.shape, max_iter, np.int32)
    alive = np.ones(z.shape, bool)
    for k in range(max_iter):
        z[alive] = z[alive] ** d + c[alive]
        out = alive & (np.abs(z) > radius)
        count[out] = k
        alive &= ~out
        if not alive.any():
            break
    return count


def render_parameter(degree: int, job: RenderJob) -> np.ndarray:
    """Escape-time picture of the degree-d multibrot set (interior black)
    with a small red square at every marker."""
    if degree < 2:
        raise InvalidInput("degree must be >= 2")
    job.validate()
    C = pixel_grid(job.center, job.width, job.resolution)
    count = escape_counts(np.zeros_like(C), C, degree, job.maxIterations,
                          max(2.0, 2.0 ** (1 / (degree - 1))))
    return _draw_markers(_escape_image(count, job.maxIterations), job)


def _draw_markers(img, job, size=2):
    for m in job.markers:
        px = plane_to_pixel(complex(m), job.center, job.width, job.resolution)
        if px is None:
            continue
        r, c = px
        img[max(0, r - size):r + size + 1, max(0, c - size):c + size + 1] = MARK_RGB
    return img


def ppm_bytes(img: np.ndarray) -> bytes:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    rows, cols = img.shape[:2]
    return b"P6\n%d %d\n255\n" % (cols, rows) + img.tobytes()


def write_ppm(path, img: np.ndarray):
    with open(path, "wb") as fh:
        fh.write(ppm_bytes(img))


def read_ppm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise InvalidInput("not a binary PPM")
    cols, rows = map(int, parts[1].split())
    return np.frombuffer(parts[3], np.uint8).reshape(rows, cols, 3)


def write_image(path, img: np.ndarray):
    """PPM by default; PNG when the name ends in .png and Pillow is present."""
    path = str(path)
    if path.lower().endswith(".png"):
        try:
            from PIL import Image
        except ImportError:
            raise InvalidInput("PNG output needs Pillow (pip install artifact[png])") from None
        Image.fromarray(np.ascontiguousarray(img, np.uint8)).save(path)
    else:
        write_ppm(path, img)
