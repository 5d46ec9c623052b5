"""Sampled-function data model, geometry, and quadrature.

Functions live on a uniform grid over the box [-L, L)^dim with dim in {1, 2}
and N (a power of two) points per axis, sampled at x_i = -L + i*h, h = 2L/N.
The declared continuum semantics is zero extension outside the box for norms
and maximal averages, and periodic extension for Fourier-multiplier operators;
acceptance configurations keep supports far enough from the boundary that the
two regimes agree.

Geometry follows open balls B(x, r) = {y : |y - x| < r} (grid points exactly
at distance r are excluded) and half-open axis-parallel cubes.  The dyadic
annuli of a cube Q are S_0(Q) = 2Q and S_j(Q) = (2^{j+1} Q) \\ (2^j Q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BoundaryMarginError,
    IncompatibleTilingError,
    IndivisibleLevelError,
    UnsupportedDimensionError,
)

__all__ = [
    "GridSpec",
    "GridFunction",
    "Ball",
    "Cube",
    "UNIT_BALL_VOLUME",
    "region_mask",
    "integrate",
    "annulus_rings",
    "dyadic_cubes",
    "amalgam_tiles",
    "offsets",
    "freq_lattice",
    "conv_periodic",
    "ball_point_count",
    "write_gridfn",
    "read_gridfn",
    "read_csv_1d",
]

# hard-coded unit-ball volumes used by the indicator-norm identity
UNIT_BALL_VOLUME = {1: 2.0, 2: math.pi}


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid over [-L, L)^dim with N points per axis (N a power of two)."""

    dim: int
    half_width: float
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise UnsupportedDimensionError(f"dim must be 1 or 2, got {self.dim}")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if not _is_pow2(self.points_per_axis) or self.points_per_axis < 16:
            raise ValueError("points_per_axis must be a power of two >= 16")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.h**self.dim

    def axis(self) -> np.ndarray:
        N = self.points_per_axis
        return -self.half_width + self.h * np.arange(N)

    def coords(self) -> Tuple[np.ndarray, ...]:
        """Coordinate arrays broadcastable to the grid shape."""
        ax = self.axis()
        if self.dim == 1:
            return (ax,)
        return (ax[:, None], ax[None, :])

    def meshgrid(self) -> Tuple[np.ndarray, ...]:
        ax = self.axis()
        if self.dim == 1:
            return (ax,)
        X, Y = np.meshgrid(ax, ax, indexing="ij")
        return (X, Y)


@dataclass(frozen=True)
class Ball:
    """Open Euclidean ball B(x, r)."""

    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))


@dataclass(frozen=True)
class Cube:
    """Half-open axis-parallel cube Q(x, l) = prod_i [x_i - l/2, x_i + l/2)."""

    center: Tuple[float, ...]
    side: float

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError("side must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def scaled(self, lam: float) -> "Cube":
        """The concentric cube lambda*Q with side lambda * l."""
        return Cube(self.center, lam * self.side)

    @property
    def volume(self) -> float:
        return self.side ** len(self.center)

    @property
    def diameter(self) -> float:
        return self.side * math.sqrt(len(self.center))


Region = Union[Ball, Cube, None]


def region_mask(spec: GridSpec, region: Region) -> np.ndarray:
    """Boolean membership mask of the region on the grid (None = whole box)."""
    if region is None:
        return np.ones(spec.shape, dtype=bool)
    cs = spec.coords()
    if isinstance(region, Ball):
        if len(region.center) != spec.dim:
            raise ValueError("region dimension mismatch")
        d2 = sum((c - x0) ** 2 for c, x0 in zip(cs, region.center))
        return d2 < region.radius**2
    if isinstance(region, Cube):
        if len(region.center) != spec.dim:
            raise ValueError("region dimension mismatch")
        half = region.side / 2.0
        m = np.ones(spec.shape, dtype=bool)
        for c, x0 in zip(cs, region.center):
            m = m & (c >= x0 - half) & (c < x0 + half)
        return m
    raise TypeError(f"unsupported region {type(region)!r}")


class GridFunction:
    """Immutable sampled function: spec + dense row-major value array."""

    __slots__ = ("spec", "values", "support_hint")

    def __init__(
        self,
        spec: GridSpec,
        values: np.ndarray,
        support_hint: Optional[Cube] = None,
    ):
        arr = np.asarray(values)
        if arr.shape != spec.shape:
            raise ValueError(f"values shape {arr.shape} != grid shape {spec.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("all samples must be finite")
        if arr.dtype.kind not in "fc":
            arr = arr.astype(float)
        arr = arr.copy()
        arr.setflags(write=False)
        self.spec = spec
        self.values = arr
        self.support_hint = support_hint

    @classmethod
    def from_callable(cls, spec: GridSpec, fn, support_hint: Optional[Cube] = None):
        vals = fn(*spec.meshgrid())
        return cls(spec, np.asarray(vals), support_hint)

    @classmethod
    def zeros(cls, spec: GridSpec):
        return cls(spec, np.zeros(spec.shape))

    @classmethod
    def indicator(cls, spec: GridSpec, region: Region):
        return cls(spec, region_mask(spec, region).astype(float))

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.spec, values, self.support_hint)

    def __abs__(self) -> "GridFunction":
        return GridFunction(self.spec, np.abs(self.values), self.support_hint)

    def support_margin(self) -> float:
        """Distance from the (hinted or measured) support to the box boundary."""
        L = self.spec.half_width
        if self.support_hint is not None:
            half = self.support_hint.side / 2.0
            return L - max(abs(c) + half for c in self.support_hint.center)
        nz = np.nonzero(self.values)
        if len(nz[0]) == 0:
            return L
        reach = 0.0
        for axis_idx in range(self.spec.dim):
            ax = self.spec.axis()[nz[axis_idx]]
            reach = max(reach, float(np.max(np.abs(ax))))
        return L - reach

    def require_margin(self, margin: float, what: str = "operation"):
        m = self.support_margin()
        if m < margin - 1e-12:
            raise BoundaryMarginError(
                f"{what} needs support margin >= {margin:g}, measured {m:g}"
            )


def integrate(f: GridFunction, region: Region = None) -> float:
    """Riemann sum h^dim * sum of samples over the region (real part for real use)."""
    if region is None:
        s = f.values.sum()
    else:
        s = f.values[region_mask(f.spec, region)].sum()
    return float(np.real(s)) * f.spec.cell_volume if np.iscomplexobj(f.values) else float(s) * f.spec.cell_volume


def annulus_rings(spec: GridSpec, Q: Cube, jmax: int) -> List[np.ndarray]:
    """Masks of S_0(Q) = 2Q and S_j(Q) = (2^{j+1} Q) \\ (2^j Q), j = 1..jmax."""
    rings = [region_mask(spec, Q.scaled(2.0))]
    for j in range(1, jmax + 1):
        outer = region_mask(spec, Q.scaled(2.0 ** (j + 1)))
        inner = region_mask(spec, Q.scaled(2.0**j))
        rings.append(outer & ~inner)
    return rings


def dyadic_cubes(spec: GridSpec, level: int) -> List[Cube]:
    """The level-`level` dyadic partition of the box into 2^level cubes per axis."""
    if level < 0 or spec.points_per_axis % (1 << level) != 0:
        raise IndivisibleLevelError(f"2^{level} does not divide N={spec.points_per_axis}")
    k = 1 << level
    side = 2.0 * spec.half_width / k
    centers = -spec.half_width + side * (np.arange(k) + 0.5)
    if spec.dim == 1:
        return [Cube((c,), side) for c in centers]
    return [Cube((cx, cy), side) for cx in centers for cy in centers]


def amalgam_tiles(spec: GridSpec, t: float) -> List[Cube]:
    """The tiling {t[k + [0,1)^n]} restricted to the box.

    Requires t to be a power-of-two multiple of the spacing h that divides the
    half-width, so tiles align exactly with grid cells.
    """
    h = spec.h
    ratio = t / h
    m = round(math.log2(ratio)) if ratio > 0 else -1
    if m < 0 or abs(ratio - 2.0**m) > 1e-9 * ratio:
        raise IncompatibleTilingError(f"t={t:g} is not h * 2^m (h={h:g})")
    if abs(spec.half_width / t - round(spec.half_width / t)) > 1e-9:
        raise IncompatibleTilingError(f"t={t:g} does not divide half_width={spec.half_width:g}")
    kmax = int(round(spec.half_width / t))
    ks = range(-kmax, kmax)
    if spec.dim == 1:
        return [Cube((t * (k + 0.5),), t) for k in ks]
    return [Cube((t * (kx + 0.5), t * (ky + 0.5)), t) for kx in ks for ky in ks]


def offsets(spec: GridSpec) -> Tuple[np.ndarray, ...]:
    """Minimum-image displacement coordinates per axis (for periodic kernels)."""
    N = spec.points_per_axis
    d = spec.h * (((np.arange(N) + N // 2) % N) - N // 2)
    if spec.dim == 1:
        return (d,)
    return (d[:, None], d[None, :])


def offset_norm(spec: GridSpec) -> np.ndarray:
    ds = offsets(spec)
    return np.sqrt(sum(d**2 for d in ds))


def freq_lattice(spec: GridSpec) -> Tuple[np.ndarray, ...]:
    """Angular frequency lattice xi per axis for the periodic transform."""
    N = spec.points_per_axis
    xi = 2.0 * math.pi * np.fft.fftfreq(N, d=spec.h)
    if spec.dim == 1:
        return (xi,)
    return (xi[:, None], xi[None, :])


def freq_norm(spec: GridSpec) -> np.ndarray:
    xs = freq_lattice(spec)
    return np.sqrt(sum(x**2 for x in xs))


def conv_periodic(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Circular convolution of a value array with a min-image kernel array."""
    if np.iscomplexobj(values) or np.iscomplexobj(kernel):
        return np.fft.ifftn(np.fft.fftn(values) * np.fft.fftn(kernel))
    return np.fft.irfftn(
        np.fft.rfftn(values) * np.fft.rfftn(kernel), s=values.shape
    )


def ball_point_count(spec: GridSpec, radius: float) -> int:
    """Number of lattice offsets k with |k h| < radius (unrestricted lattice)."""
    h = spec.h
    kmax = int(math.ceil(radius / h))
    k = np.arange(-kmax, kmax + 1)
    if spec.dim == 1:
        return int(np.count_nonzero(np.abs(k * h) < radius))
    K2 = (k[:, None] * h) ** 2 + (k[None, :] * h) ** 2
    return int(np.count_nonzero(K2 < radius**2))


# ---------------------------------------------------------------------------
# file formats


def write_gridfn(path: str, f: GridFunction) -> None:
    """Write the GRIDFN1 container: ASCII header line then raw float64 data."""
    dtype = "complex" if np.iscomplexobj(f.values) else "real"
    header = f"GRIDFN1 {f.spec.dim} {f.spec.points_per_axis} {f.spec.half_width!r} {dtype}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        arr = f.values.astype(np.complex128 if dtype == "complex" else np.float64)
        if dtype == "complex":
            pairs = np.empty(arr.shape + (2,), dtype="<f8")
            pairs[..., 0] = arr.real
            pairs[..., 1] = arr.imag
            pairs.tofile(fh)
        else:
            arr.astype("<f8").tofile(fh)


def read_gridfn(path: str) -> GridFunction:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").split()
        if len(header) != 5 or header[0] != "GRIDFN1":
            raise ValueError("not a GRIDFN1 file")
        dim, N, L, dtype = int(header[1]), int(header[2]), float(header[3]), header[4]
        spec = GridSpec(dim, L, N)
        count = N**dim * (2 if dtype == "complex" else 1)
        raw = np.fromfile(fh, dtype="<f8", count=count)
    if raw.size != count:
        raise ValueError("truncated GRIDFN1 payload")
    if dtype == "complex":
        raw = raw.reshape(-1, 2)
        vals = (raw[:, 0] + 1j * raw[:, 1]).reshape(spec.shape)
    else:
        vals = raw.reshape(spec.shape)
    return GridFunction(spec, vals)


def read_csv_1d(path: str, half_width: float) -> GridFunction:
    """Read a one-column CSV of samples as a 1-D grid function."""
    vals = np.loadtxt(path, delimiter=",", ndmin=1)
    if vals.ndim != 1:
        raise ValueError("expected a single CSV column")
    spec = GridSpec(1, half_width, vals.size)
    return GridFunction(spec, vals)
