"""Littlewood-Paley functionals and the Poisson-semigroup maximal function.

All operators here act in the periodic (Fourier-multiplier) regime.  The
band-limited bump phi is a radial profile pinched between the indicator of
the ring 2 <= |xi| < 4 and the indicator of 1 <= |xi| < 8, equal to 1 on the
plateau and glued with the smooth exp(-1/u) bridge.  Band projections are

    phi(tau D) f = F^{-1}[ phi(tau xi) F f ],

and the three square functionals are log-tau quadratures of

    g(f)(x)^2        = int |phi(tau D) f(x)|^2 dtau/tau,
    S(f)(x)^2        = int int_{|x-y| < tau} |phi(tau D) f(y)|^2 dy dtau/tau^{n+1},
    g*_lam(f)(x)^2   = int int (tau/(tau+|x-y|))^{lam n} |phi(tau D) f(y)|^2 dy dtau/tau^{n+1},

discretized with a fixed number of sub-steps per octave (trapezoid weight
log(2)/M per node).  The Poisson maximal function takes the max over a dyadic
scale set of |F^{-1}(e^{-s |xi|} F f)|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InsufficientResolutionError
from .grid import GridFunction, GridSpec, conv_periodic, freq_norm, offset_norm

__all__ = [
    "BandBump",
    "LPConfig",
    "make_band_bump",
    "band_project",
    "g_function",
    "lusin_S",
    "g_lambda_star",
    "poisson_maximal",
    "default_lambda",
]


def _bridge(u: np.ndarray) -> np.ndarray:
    """Smooth 0 -> 1 transition on [0, 1] built from exp(-1/u)."""
    u = np.clip(u, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(u > 0.0, np.exp(-1.0 / np.maximum(u, 1e-300)), 0.0)
        b = np.where(u < 1.0, np.exp(-1.0 / np.maximum(1.0 - u, 1e-300)), 0.0)
    return a / (a + b)


def band_profile(r) -> np.ndarray:
    """Radial profile: 0 outside (1, 8), 1 on [2, 4], smooth in between."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    rise = (r > 1.0) & (r < 2.0)
    out[rise] = _bridge(r[rise] - 1.0)
    out[(r >= 2.0) & (r <= 4.0)] = 1.0
    fall = (r > 4.0) & (r < 8.0)
    out[fall] = _bridge((8.0 - r[fall]) / 4.0)
    return out


@dataclass(frozen=True)
class BandBump:
    """Band-limited bump: radial profile samples on the frequency lattice."""

    spec: GridSpec
    samples: np.ndarray

    def at(self, r) -> np.ndarray:
        return band_profile(r)


def make_band_bump(spec: GridSpec) -> BandBump:
    """Build the bump on the grid's frequency lattice.

    Requires the lattice to resolve the plateau 2 <= |xi| <= 4, i.e. frequency
    spacing pi/L at most 2.
    """
    if math.pi / spec.half_width > 2.0:
        raise InsufficientResolutionError(
            f"frequency spacing {math.pi / spec.half_width:g} too coarse for the band"
        )
    rho = freq_norm(spec)
    samples = band_profile(rho)
    samples.setflags(write=False)
    return BandBump(spec, samples)


@dataclass(frozen=True)
class LPConfig:
    """Scale grid (M sub-steps per octave) and the g* exponent lambda."""

    spec: GridSpec
    m_per_octave: int = 4
    lam: float = 2.5

    def __post_init__(self):
        if self.lam <= 1.0:
            raise ValueError("lambda must exceed 1")

    def tau_grid(self) -> np.ndarray:
        lo = self.spec.h / 8.0
        hi = 16.0 * self.spec.half_width
        n = int(math.ceil(math.log2(hi / lo) * self.m_per_octave)) + 1
        return lo * 2.0 ** (np.arange(n) / self.m_per_octave)

    @property
    def dlog(self) -> float:
        return math.log(2.0) / self.m_per_octave


def default_lambda(p_minus: float, q: float) -> float:
    """lambda = 1 + 2/min(p-, q) + 1/2, strictly inside the theorem window."""
    return 1.0 + 2.0 / min(p_minus, q) + 0.5


def band_project(f: GridFunction, bump: BandBump, tau: float) -> GridFunction:
    """phi(tau D) f: multiply the spectrum by phi(tau |xi|)."""
    spec = f.spec
    mult = band_profile(tau * freq_norm(spec))
    out = np.fft.ifftn(np.fft.fftn(f.values) * mult)
    if not np.iscomplexobj(f.values):
        out = out.real
    return GridFunction(spec, out, f.support_hint)


def _band_mult(spec: GridSpec, tau: float, rho: np.ndarray) -> Optional[np.ndarray]:
    mult = band_profile(tau * rho)
    if not mult.any():
        return None
    return mult


def _band_energies(f: GridFunction, cfg: LPConfig):
    """Yield (tau, |phi(tau D) f|^2) for the non-vanishing bands."""
    spec = f.spec
    rho = freq_norm(spec)
    fhat = np.fft.fftn(f.values)
    for tau in cfg.tau_grid():
        mult = _band_mult(spec, tau, rho)
        if mult is None:
            continue
        piece = np.fft.ifftn(fhat * mult)
        yield tau, np.abs(piece) ** 2


def g_function(f: GridFunction, bump: BandBump, cfg: LPConfig) -> GridFunction:
    """Pointwise square function over the scale grid."""
    acc = np.zeros(f.spec.shape)
    for _, e2 in _band_energies(f, cfg):
        acc += e2 * cfg.dlog
    return GridFunction(f.spec, np.sqrt(acc), f.support_hint)


def lusin_S(f: GridFunction, bump: BandBump, cfg: LPConfig) -> GridFunction:
    """Cone aggregation: cell-center membership in the open cone |x-y| < tau."""
    spec = f.spec
    acc = np.zeros(spec.shape)
    dn = offset_norm(spec)
    hv = spec.cell_volume
    for tau, e2 in _band_energies(f, cfg):
        kern = (dn < tau).astype(float) * (hv / tau**spec.dim)
        acc += conv_periodic(e2, kern) * cfg.dlog
    return GridFunction(spec, np.sqrt(np.clip(acc, 0.0, None)), f.support_hint)


def g_lambda_star(f: GridFunction, bump: BandBump, cfg: LPConfig) -> GridFunction:
    """Weighted aggregation with the kernel (tau/(tau+|x-y|))^{lambda n}."""
    spec = f.spec
    acc = np.zeros(spec.shape)
    dn = offset_norm(spec)
    hv = spec.cell_volume
    ln = cfg.lam * spec.dim
    for tau, e2 in _band_energies(f, cfg):
        kern = (tau / (tau + dn)) ** ln * (hv / tau**spec.dim)
        acc += conv_periodic(e2, kern) * cfg.dlog
    return GridFunction(spec, np.sqrt(np.clip(acc, 0.0, None)), f.support_hint)


def poisson_maximal(f: GridFunction, s_grid: Sequence[float]) -> GridFunction:
    """max over s of |F^{-1}(e^{-s |xi|} F f)| (semigroup multiplier)."""
    spec = f.spec
    rho = freq_norm(spec)
    fhat = np.fft.fftn(f.values)
    out = np.zeros(spec.shape)
    for s in s_grid:
        piece = np.fft.ifftn(fhat * np.exp(-s * rho))
        np.maximum(out, np.abs(piece), out=out)
    return GridFunction(spec, out, f.support_hint)
