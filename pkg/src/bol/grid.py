"""Compactly supported functions on uniform d-dimensional grids.

Cell-centered sampling: cell index i holds the value at
origin + (i + 1/2) * h.  The function is zero outside the box.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, ResourceGuardError

MAX_CELLS_PER_AXIS = 10_000


@dataclass(frozen=True)
class GridFunction:
    spacing: float
    origin: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.ndim < 1 or any(n < 1 for n in vals.shape):
            raise DomainError("all extents must be >= 1")
        if not self.spacing > 0.0:
            raise DomainError("spacing must be positive")
        if not np.all(np.isfinite(vals)):
            raise DomainError("values must be finite")
        if len(self.origin) != vals.ndim:
            raise DomainError("origin length must match dimension")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))

    @property
    def dim(self):
        return self.values.ndim

    @property
    def shape(self):
        return self.values.shape

    @property
    def cell_volume(self):
        return self.spacing ** self.dim

    def support_diameter(self):
        """Euclidean diameter of the bounding box of nonzero cells."""
        nz = np.nonzero(self.values)
        if len(nz[0]) == 0:
            return 0.0
        ext = [(idx.max() - idx.min() + 1) * self.spacing for idx in nz]
        return math.sqrt(sum(e * e for e in ext))

    def scaled(self, c):
        return GridFunction(self.spacing, self.origin, c * self.values)


def lp_norm(f: GridFunction, p) -> float:
    if p == np.inf or p == math.inf:
        return float(np.max(np.abs(f.values)))
    if p < 1:
        raise DomainError("lp_norm needs p >= 1")
    return float((np.abs(f.values) ** p).sum() * f.cell_volume) ** (1.0 / p)


def total_variation(f: GridFunction) -> float:
    """Anisotropic (l1) discrete total variation with zero padding.

    Sum over axes of |forward differences| times h^(d-1), counting the
    jumps across the box boundary.  The coarea identity over thresholds
    is exact for this scheme.
    """
    return float(_kernels.total_variation_sum(f.values, f.spacing))


def shift(f: GridFunction, k) -> GridFunction:
    """g(x) = f(x + k*h): same cells, origin moved by -k*h."""
    k = np.asarray(k, dtype=np.int64)
    if k.shape != (f.dim,):
        raise DomainError("shift vector length must match dimension")
    new_origin = tuple(o - int(ki) * f.spacing for o, ki in zip(f.origin, k))
    return GridFunction(f.spacing, new_origin, f.values)


def shift_difference(f: GridFunction, k) -> GridFunction:
    """f(. + k*h) - f(.) on the union of both supports."""
    k = np.asarray(k, dtype=np.int64)
    if k.shape != (f.dim,):
        raise DomainError("shift vector length must match dimension")
    shape = tuple(n + abs(int(ki)) for n, ki in zip(f.shape, k))
    out = np.zeros(shape)
    sl_f = tuple(slice(max(int(ki), 0), max(int(ki), 0) + n) for n, ki in zip(f.shape, k))
    sl_g = tuple(slice(max(-int(ki), 0), max(-int(ki), 0) + n) for n, ki in zip(f.shape, k))
    out[sl_g] += f.values
    out[sl_f] -= f.values
    origin = tuple(
        o - max(int(ki), 0) * f.spacing for o, ki in zip(f.origin, k)
    )
    return GridFunction(f.spacing, origin, out)


def restrict_to(f: GridFunction, like: GridFunction) -> GridFunction:
    """Values of f on the box of ``like`` (zero where f is not defined)."""
    out = np.zeros(like.shape)
    idx_f = []
    idx_o = []
    for o_f, o_l, n_f, n_l in zip(f.origin, like.origin, f.shape, like.shape):
        off = round((o_l - o_f) / f.spacing)
        lo = max(0, off)
        hi = min(n_f, off + n_l)
        if lo >= hi:
            return GridFunction(like.spacing, like.origin, out)
        idx_f.append(slice(lo, hi))
        idx_o.append(slice(lo - off, hi - off))
    out[tuple(idx_o)] = f.values[tuple(idx_f)]
    return GridFunction(like.spacing, like.origin, out)


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


@dataclass(frozen=True)
class Ball:
    """Grid indicator of a Euclidean ball plus its analytic companions."""

    grid: GridFunction
    dim: int
    radius: float
    volume: float
    perimeter: float


def ball_indicator(d: int, radius: float, h: float) -> Ball:
    if radius <= 0 or h <= 0:
        raise DomainError("radius and spacing must be positive")
    if radius / h > 1e4:
        raise ResourceGuardError("radius/h exceeds 1e4", guard="ball_resolution")
    m = int(math.ceil(radius / h)) + 1
    axes = [(np.arange(2 * m) + 0.5) * h - m * h for _ in range(d)]
    sq = np.zeros((2 * m,) * d)
    for axis, coord in enumerate(axes):
        shape = [1] * d
        shape[axis] = 2 * m
        sq = sq + (coord ** 2).reshape(shape)
    dist = np.sqrt(sq)
    r_eff = radius
    if np.any(np.abs(dist - radius) < 1e-12 * max(radius, 1.0)):
        r_eff = radius + h * 1e-9  # break exact boundary ties
    vals = (dist <= r_eff).astype(np.float64)
    fn = GridFunction(h, (-m * h,) * d, vals)
    vd = unit_ball_volume(d)
    return Ball(fn, d, radius, vd * radius ** d, d * vd * radius ** (d - 1))


@dataclass(frozen=True)
class NormBundle:
    l1: float
    linf: float
    tv: float
    extra_lp: dict = field(default_factory=dict)

    def lp(self, p):
        return self.extra_lp.get(p)


def norm_bundle(f: GridFunction, ps=()) -> NormBundle:
    return NormBundle(
        l1=lp_norm(f, 1),
        linf=lp_norm(f, np.inf),
        tv=total_variation(f),
        extra_lp={p: lp_norm(f, p) for p in ps},
    )


# -- serialization: JSON header line followed by one value per line ------------

def save_grid_function(f: GridFunction, path: str) -> None:
    header = {
        "dim": f.dim,
        "shape": list(f.shape),
        "spacing": f.spacing,
        "origin": list(f.origin),
    }
    with open(path, "w") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for v in f.values.ravel(order="C"):
            fh.write(repr(float(v)) + "\n")


def load_grid_function(path: str) -> GridFunction:
    with open(path) as fh:
        header = json.loads(fh.readline())
        vals = np.array([float(line) for line in fh if line.strip()])
    shape = tuple(header["shape"])
    if vals.size != int(np.prod(shape)):
        raise DomainError("value count does not match the declared shape")
    return GridFunction(header["spacing"], tuple(header["origin"]), vals.reshape(shape))
