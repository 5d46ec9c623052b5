"""Maximal operators on grid functions.

Covers the centered and uncentered Hardy-Littlewood maximal operators
(ball averages of |f|, zero-extension semantics), the smooth-kernel maximal
family

    radial          M(f, phi)(x)      = sup_s |(phi_s * f)(x)|,
    non-tangential  M_a(f, phi)(x)    = sup_s sup_{|y-x| < a s} |(phi_s * f)(y)|,
    Peetre          M_b(f, phi)(x)    = sup_{s, y} |(phi_s * f)(y)| / (1 + |x-y|/s)^b,

and the grand variants taking an extra max over a finite dictionary of test
functions normalized in the seminorm

    p_N(phi) = sum_{|alpha| <= N} sup_x (1 + |x|)^{N+n} |d^alpha phi(x)|.

The continuum sup over scales is replaced by a max over a dyadic scale set;
smooth convolutions are evaluated spectrally in the periodic regime.  The
vector-valued maximal inequality check reports the slice-norm ratio of
l^r-aggregated maximal functions to the aggregated inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from .errors import ExponentOutOfRangeError, ZeroIntegralTestFunctionError
from .grid import GridFunction, GridSpec, offset_norm, offsets
from .norms import SliceSpaceParams, _ball_kernel_fft, slice_norm

__all__ = [
    "TestFunction",
    "MaximalConfig",
    "dyadic_scales",
    "default_radius_set",
    "unit_gaussian",
    "p_seminorm",
    "make_default_dictionary",
    "default_config",
    "hl_centered",
    "hl_uncentered",
    "smooth_convolve",
    "radial_maximal",
    "nontangential_maximal",
    "peetre_maximal",
    "grand_maximal",
    "grand_peetre",
    "grand_radial_maximal",
    "fefferman_stein_check",
]


@dataclass(frozen=True)
class TestFunction:
    """A smooth kernel profile phi given as a callable on coordinate arrays."""

    name: str
    profile: Callable[..., np.ndarray]
    mass: Optional[float] = None  # int phi when known analytically

    def sample(self, coords) -> np.ndarray:
        return self.profile(*coords)


def unit_gaussian(dim: int) -> TestFunction:
    """Mass-one Gaussian (2 pi)^{-n/2} exp(-|x|^2 / 2)."""

    def prof(*cs):
        r2 = sum(np.asarray(c) ** 2 for c in cs)
        return (2.0 * math.pi) ** (-dim / 2.0) * np.exp(-r2 / 2.0)

    return TestFunction("gauss-unit", prof, mass=1.0)


def _hermite(k: int, u: np.ndarray) -> np.ndarray:
    """Probabilists' Hermite polynomial He_k."""
    if k == 0:
        return np.ones_like(u)
    if k == 1:
        return u
    hm, h = np.ones_like(u), u
    for j in range(2, k + 1):
        hm, h = h, u * h - (j - 1) * hm
    return h


def _gauss_hermite_member(dim: int, orders: Tuple[int, ...], sigma: float) -> TestFunction:
    def prof(*cs):
        out = np.ones(np.broadcast(*cs).shape) if dim > 1 else np.ones_like(cs[0])
        r2 = 0.0
        for c, k in zip(cs, orders):
            u = np.asarray(c) / sigma
            out = out * _hermite(k, u)
            r2 = r2 + u**2
        return out * np.exp(-r2 / 2.0)

    tag = "".join(str(k) for k in orders)
    return TestFunction(f"gh{tag}-s{sigma:g}", prof)


def p_seminorm(
    fn: TestFunction,
    dim: int,
    n_order: int,
    half_width: float = 12.0,
    pts: int = 2048,
) -> float:
    """Sampled seminorm p_N: spectral derivatives on a fine reference grid."""
    if dim == 2:
        pts = min(pts, 256)
    ref = GridSpec(dim, half_width, pts)
    vals = fn.sample(ref.meshgrid())
    vhat = np.fft.fftn(vals)
    xi = 2.0 * math.pi * np.fft.fftfreq(pts, d=ref.h)
    if dim == 1:
        xis = (xi,)
    else:
        xis = (xi[:, None], xi[None, :])
    w = (1.0 + np.sqrt(sum(np.asarray(c) ** 2 for c in ref.meshgrid()))) ** (n_order + dim)
    total = 0.0
    alphas = (
        [(a,) for a in range(n_order + 1)]
        if dim == 1
        else [(a, b) for a in range(n_order + 1) for b in range(n_order + 1 - a)]
    )
    for alpha in alphas:
        mult = np.ones_like(vhat)
        for x, a in zip(xis, alpha):
            if a:
                mult = mult * (1j * x) ** a
        deriv = np.real(np.fft.ifftn(vhat * mult))
        total += float(np.max(w * np.abs(deriv)))
    return total


def make_default_dictionary(dim: int, n_order: int) -> List[TestFunction]:
    """Gaussians and Gaussian-Hermite products rescaled to p_N = 1."""
    raw: List[TestFunction] = []
    max_deg = min(n_order, 2)
    if dim == 1:
        for sigma in (1.0, 0.6):
            for k in range(max_deg + 1):
                raw.append(_gauss_hermite_member(1, (k,), sigma))
    else:
        for orders in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)][: 3 + 3 * max_deg // 2]:
            if sum(orders) <= max_deg:
                raw.append(_gauss_hermite_member(2, orders, 1.0))
        raw.append(_gauss_hermite_member(2, (0, 0), 0.6))
    out = []
    for m in raw:
        pn = p_seminorm(m, dim, n_order)
        prof = m.profile

        def scaled(*cs, _p=prof, _c=pn):
            return _p(*cs) / _c

        out.append(TestFunction(m.name + "-n", scaled))
    return out


def dyadic_scales(spec: GridSpec) -> np.ndarray:
    """Scales {h 2^j} covering (0, 2L] dyadically."""
    n = int(round(math.log2(spec.points_per_axis))) + 1
    return spec.h * 2.0 ** np.arange(n)


def default_radius_set(spec: GridSpec) -> np.ndarray:
    """All positive multiples of h up to 2L."""
    return spec.h * np.arange(1, spec.points_per_axis + 1)


@dataclass(frozen=True)
class MaximalConfig:
    """Radii, aperture, Peetre exponent, and the grand-maximal dictionary."""

    radius_set: np.ndarray
    aperture: float = 1.0
    peetre_b: float = 1.5
    dictionary_N: int = 2
    dictionary: Tuple[TestFunction, ...] = ()

    def __post_init__(self):
        rs = np.sort(np.asarray(self.radius_set, dtype=float))
        rs.setflags(write=False)
        object.__setattr__(self, "radius_set", rs)
        object.__setattr__(self, "dictionary", tuple(self.dictionary))


def default_config(
    spec: GridSpec,
    params: Optional[SliceSpaceParams] = None,
    radius_set: Optional[np.ndarray] = None,
) -> MaximalConfig:
    """Defaults tied to the space exponents: b = n/min(p-, q) + 1/2 and
    N = floor(n/min(p-, q) + 1) + 1."""
    n = spec.dim
    m = min(params.phi.p_minus, params.q) if params is not None else 1.0
    b = n / m + 0.5
    N = int(math.floor(n / m + 1.0)) + 1
    return MaximalConfig(
        radius_set=default_radius_set(spec) if radius_set is None else radius_set,
        aperture=1.0,
        peetre_b=b,
        dictionary_N=N,
        dictionary=tuple(make_default_dictionary(n, N)),
    )


def _strict_steps(r: float, h: float) -> int:
    """Largest integer k with k h < r."""
    return max(int(math.ceil(r / h - 1e-9)) - 1, 0)


def _ball_average_1d(vals: np.ndarray, steps_list: Sequence[int]) -> List[np.ndarray]:
    """Window means of zero-extended |f| for each half-width in steps_list."""
    N = vals.size
    wmax = max(steps_list)
    padded = np.zeros(N + 2 * wmax)
    padded[wmax : wmax + N] = vals
    cs = np.concatenate([[0.0], np.cumsum(padded)])
    outs = []
    for w in steps_list:
        i = np.arange(N) + wmax
        sums = cs[i + w + 1] - cs[i - w]
        outs.append(sums / (2 * w + 1))
    return outs


def _padded_spec(spec: GridSpec) -> GridSpec:
    return GridSpec(spec.dim, 2.0 * spec.half_width, 2 * spec.points_per_axis)


def _ball_average_2d(vals: np.ndarray, spec: GridSpec, radius: float) -> np.ndarray:
    """Zero-extension ball average via padded periodic convolution."""
    pspec = _padded_spec(spec)
    N = spec.points_per_axis
    big = np.zeros(pspec.shape)
    big[:N, :N] = vals
    kf, cnt = _ball_kernel_fft(pspec, radius)
    conv = np.fft.irfftn(np.fft.rfftn(big) * kf, s=pspec.shape)
    return conv[:N, :N] / cnt


def hl_centered(f: GridFunction, cfg: MaximalConfig) -> GridFunction:
    """Centered Hardy-Littlewood maximal function: sup_r avg_{B(x,r)} |f|."""
    a = np.abs(f.values)
    spec = f.spec
    if spec.dim == 1:
        steps = sorted({_strict_steps(r, spec.h) for r in cfg.radius_set})
        out = np.zeros_like(a)
        for avg in _ball_average_1d(a, steps):
            np.maximum(out, avg, out=out)
    else:
        out = np.zeros_like(a)
        done = set()
        for r in cfg.radius_set:
            key = _strict_steps(r / spec.h, 1.0)  # dedupe radii with equal point sets
            if key in done:
                continue
            done.add(key)
            np.maximum(out, _ball_average_2d(a, spec, r), out=out)
    return GridFunction(spec, out, f.support_hint)


def _dilate(vals: np.ndarray, steps: int, dim: int) -> np.ndarray:
    if steps <= 0:
        return vals
    if dim == 1:
        return ndimage.maximum_filter1d(vals, size=2 * steps + 1, mode="constant", cval=0.0)
    k = np.arange(-steps, steps + 1)
    foot = (k[:, None] ** 2 + k[None, :] ** 2) < (steps + 0.5) ** 2
    return ndimage.maximum_filter(vals, footprint=foot, mode="constant", cval=0.0)


def hl_uncentered(f: GridFunction, cfg: MaximalConfig) -> GridFunction:
    """Uncentered maximal function: sup over balls containing x (grid centers)."""
    a = np.abs(f.values)
    spec = f.spec
    out = np.zeros_like(a)
    if spec.dim == 1:
        steps = sorted({_strict_steps(r, spec.h) for r in cfg.radius_set})
        for w, avg in zip(steps, _ball_average_1d(a, steps)):
            np.maximum(out, _dilate(avg, w, 1), out=out)
    else:
        done = set()
        for r in cfg.radius_set:
            w = _strict_steps(r, spec.h)
            if w in done:
                continue
            done.add(w)
            avg = _ball_average_2d(a, spec, r)
            np.maximum(out, _dilate(avg, w, 2), out=out)
    return GridFunction(spec, out, f.support_hint)


def _kernel_fft(spec: GridSpec, fn: TestFunction, s: float) -> np.ndarray:
    ds = offsets(spec)
    kern = fn.sample(tuple(d / s for d in ds)) / s**spec.dim
    return np.fft.fftn(kern)


def smooth_convolve(f: GridFunction, fn: TestFunction, s: float) -> np.ndarray:
    """|(phi_s * f)| on the grid, spectral periodic convolution."""
    spec = f.spec
    conv = np.fft.ifftn(np.fft.fftn(f.values) * _kernel_fft(spec, fn, s)) * spec.cell_volume
    return np.abs(conv)


def _check_mass(f: GridFunction, fn: TestFunction):
    if fn.mass is not None:
        if fn.mass == 0.0:
            raise ZeroIntegralTestFunctionError(f"{fn.name} has zero integral")
        return
    spec = f.spec
    s = max(spec.h * 8, min(1.0, spec.half_width / 4))
    ds = offsets(spec)
    mass = float(fn.sample(tuple(d / s for d in ds)).sum()) / s**spec.dim * spec.cell_volume
    if abs(mass) < 1e-8:
        raise ZeroIntegralTestFunctionError(f"{fn.name} has (numerically) zero integral")


def radial_maximal(
    f: GridFunction, phi_test: TestFunction, scales: Sequence[float]
) -> GridFunction:
    """max over scales of |(phi_s * f)(x)|."""
    _check_mass(f, phi_test)
    out = np.zeros(f.spec.shape)
    for s in scales:
        np.maximum(out, smooth_convolve(f, phi_test, s), out=out)
    return GridFunction(f.spec, out, f.support_hint)


def nontangential_maximal(
    f: GridFunction, phi_test: TestFunction, a: float, scales: Sequence[float]
) -> GridFunction:
    """max over scales of sup_{|y-x| < a s} |(phi_s * f)(y)| (grid y)."""
    spec = f.spec
    out = np.zeros(spec.shape)
    for s in scales:
        conv = smooth_convolve(f, phi_test, s)
        np.maximum(out, _dilate(conv, _strict_steps(a * s, spec.h), spec.dim), out=out)
    return GridFunction(spec, out, f.support_hint)


def peetre_maximal(
    f: GridFunction, phi_test: TestFunction, b: float, scales: Sequence[float]
) -> GridFunction:
    """max over scales and all grid y of |(phi_s * f)(y)| (1 + |x-y|/s)^{-b}.

    The sup over y runs over the full grid with exact (minimum-image)
    Euclidean distances; evaluation is chunked dense broadcasting.
    """
    spec = f.spec
    flat_n = spec.points_per_axis**spec.dim
    if spec.dim == 1:
        pos = spec.axis()[:, None]
    else:
        X, Y = spec.meshgrid()
        pos = np.stack([X.ravel(), Y.ravel()], axis=1)
    box = 2.0 * spec.half_width
    out = np.zeros(flat_n)
    convs = [smooth_convolve(f, phi_test, s).ravel() for s in scales]
    chunk = max(1, int(2**22 // flat_n))
    for start in range(0, flat_n, chunk):
        sl = slice(start, min(start + chunk, flat_n))
        d = pos[sl, None, :] - pos[None, :, :]
        d -= box * np.round(d / box)  # minimum image
        dist = np.sqrt((d**2).sum(axis=2))
        best = np.zeros(dist.shape[0])
        for s, conv in zip(scales, convs):
            w = (1.0 + dist / s) ** (-b)
            np.maximum(best, (w * conv[None, :]).max(axis=1), out=best)
        out[sl] = best
    return GridFunction(spec, out.reshape(spec.shape), f.support_hint)


def grand_maximal(f: GridFunction, cfg: MaximalConfig, scales: Sequence[float]) -> GridFunction:
    """max over the dictionary of the aperture-1 non-tangential maximal."""
    if not cfg.dictionary:
        raise ValueError("grand maximal needs a nonempty dictionary")
    out = np.zeros(f.spec.shape)
    for m in cfg.dictionary:
        nt = nontangential_maximal(f, m, 1.0, scales)
        np.maximum(out, nt.values, out=out)
    return GridFunction(f.spec, out, f.support_hint)


def grand_peetre(
    f: GridFunction, cfg: MaximalConfig, b: float, scales: Sequence[float]
) -> GridFunction:
    """max over the dictionary of the Peetre-type maximal function."""
    if not cfg.dictionary:
        raise ValueError("grand Peetre maximal needs a nonempty dictionary")
    out = np.zeros(f.spec.shape)
    for m in cfg.dictionary:
        np.maximum(out, peetre_maximal(f, m, b, scales).values, out=out)
    return GridFunction(f.spec, out, f.support_hint)


def grand_radial_maximal(
    f: GridFunction, cfg: MaximalConfig, scales: Sequence[float]
) -> GridFunction:
    """max over the dictionary of the radial maximal (y = x only)."""
    if not cfg.dictionary:
        raise ValueError("grand radial maximal needs a nonempty dictionary")
    out = np.zeros(f.spec.shape)
    for m in cfg.dictionary:
        for s in scales:
            np.maximum(out, smooth_convolve(f, m, s), out=out)
    return GridFunction(f.spec, out, f.support_hint)


def fefferman_stein_check(
    fs: Sequence[GridFunction],
    r: float,
    params: SliceSpaceParams,
    cfg: MaximalConfig,
) -> Tuple[float, bool]:
    """Vector-valued maximal ratio
    ||(sum_j (M f_j)^r)^{1/r}|| / ||(sum_j |f_j|^r)^{1/r}|| in the slice norm.

    Returns (ratio, ok); an all-zero family yields the sentinel (0, False).
    Requires r in (1, inf) and the space window q > 1, p- > 1.
    """
    if not (1.0 < r < math.inf):
        raise ExponentOutOfRangeError(f"need r in (1, inf), got {r}")
    if params.q <= 1.0 or params.phi.p_minus <= 1.0:
        raise ExponentOutOfRangeError("window requires q > 1 and lower type > 1")
    if not fs or all(not np.any(g.values) for g in fs):
        return 0.0, False
    spec = fs[0].spec
    num = np.zeros(spec.shape)
    den = np.zeros(spec.shape)
    for g in fs:
        m = hl_centered(g, cfg)
        num += m.values**r
        den += np.abs(g.values) ** r
    num_f = GridFunction(spec, num ** (1.0 / r))
    den_f = GridFunction(spec, den ** (1.0 / r))
    return slice_norm(num_f, params) / slice_norm(den_f, params), True
