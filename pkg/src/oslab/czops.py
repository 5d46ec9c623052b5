"""Convolutional singular integral operators of Hölder-regularity type.

A convolution kernel k is of delta-type (delta in (0, 1]) when

    |k(x - y) - k(x)| <= C |y|^delta / |x|^{n + delta}   for |x| >= 2|y|,

together with L^2 boundedness.  Built-in kernels: the Hilbert transform
(n = 1, symbol -i sign(xi)), the Riesz family (n = 2, symbols -i xi_j/|xi|),
and an epsilon-truncated odd power kernel sign(x)/(pi |x|) whose direct-sum
realization exercises the off-support integral formula.  The multiplier
realization evaluates exact symbols on the frequency lattice with the
principal-value convention symbol(0) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatchError, ParameterWindowError
from .grid import GridFunction, GridSpec, freq_lattice, freq_norm, offset_norm, offsets
from .maximal import MaximalConfig, TestFunction, hl_centered, radial_maximal, unit_gaussian
from .norms import SliceSpaceParams, slice_norm
from .atoms import AtomSpec, cube_slice_norm, hardy_norm

__all__ = [
    "CZKernel",
    "hilbert_kernel",
    "riesz_kernel",
    "truncated_power_sign_kernel",
    "kernel_value",
    "apply_cz",
    "kernel_regularity_check",
    "boundedness_ratios",
    "far_field_atom_check",
]

_RIESZ_C2 = 1.0 / (2.0 * math.pi)  # Gamma((n+1)/2) / pi^{(n+1)/2} at n = 2


@dataclass(frozen=True)
class CZKernel:
    """Kernel kind, regularity order delta, truncation, and realization."""

    kind: str  # "hilbert" | "riesz1" | "riesz2" | "truncated-power-sign"
    delta: float = 1.0
    eps: Optional[float] = None  # default 2h at apply time
    realization: str = "multiplier"  # or "direct"

    def __post_init__(self):
        if self.kind not in ("hilbert", "riesz1", "riesz2", "truncated-power-sign"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if not (0.0 < self.delta <= 1.0):
            raise ValueError("delta must lie in (0, 1]")
        if self.realization not in ("multiplier", "direct"):
            raise ValueError("realization must be 'multiplier' or 'direct'")

    @property
    def dim(self) -> int:
        return 2 if self.kind.startswith("riesz") else 1


def hilbert_kernel(realization: str = "multiplier") -> CZKernel:
    return CZKernel("hilbert", 1.0, None, realization)


def riesz_kernel(j: int, realization: str = "multiplier") -> CZKernel:
    if j not in (1, 2):
        raise ValueError("Riesz component must be 1 or 2")
    return CZKernel(f"riesz{j}", 1.0, None, realization)


def truncated_power_sign_kernel(delta: float, eps: Optional[float] = None) -> CZKernel:
    return CZKernel("truncated-power-sign", delta, eps, "direct")


def kernel_value(T: CZKernel, *x: float) -> float:
    """Continuum kernel value away from the origin."""
    if T.kind in ("hilbert", "truncated-power-sign"):
        (u,) = x
        return 1.0 / (math.pi * u)
    j = 1 if T.kind == "riesz1" else 2
    r = math.hypot(*x)
    return _RIESZ_C2 * x[j - 1] / r**3


def _symbol(T: CZKernel, spec: GridSpec) -> np.ndarray:
    xis = freq_lattice(spec)
    if T.kind in ("hilbert", "truncated-power-sign"):
        return -1j * np.sign(xis[0])
    rho = freq_norm(spec)
    j = 1 if T.kind == "riesz1" else 2
    with np.errstate(invalid="ignore", divide="ignore"):
        sym = -1j * xis[j - 1] / rho
    sym[rho == 0.0] = 0.0  # principal-value convention
    return sym


def _direct_kernel(T: CZKernel, spec: GridSpec) -> np.ndarray:
    ds = offsets(spec)
    rho = offset_norm(spec)
    eps = T.eps if T.eps is not None else 2.0 * spec.h
    with np.errstate(invalid="ignore", divide="ignore"):
        if T.kind in ("hilbert", "truncated-power-sign"):
            k = 1.0 / (math.pi * ds[0])
        else:
            j = 1 if T.kind == "riesz1" else 2
            k = _RIESZ_C2 * ds[j - 1] / rho**3
    k = np.where(rho >= eps, k, 0.0)
    k[tuple([0] * spec.dim)] = 0.0
    return k


def apply_cz(T: CZKernel, f: GridFunction) -> GridFunction:
    """Apply the operator in the periodic regime.

    Multiplier realization: exact lattice symbol.  Direct realization:
    convolution with the epsilon-truncated kernel samples.
    """
    spec = f.spec
    if spec.dim != T.dim:
        raise DimensionMismatchError(f"{T.kind} needs dim {T.dim}, grid has {spec.dim}")
    fhat = np.fft.fftn(f.values)
    if T.realization == "multiplier" and T.kind != "truncated-power-sign":
        out = np.fft.ifftn(fhat * _symbol(T, spec))
    else:
        khat = np.fft.fftn(_direct_kernel(T, spec)) * spec.cell_volume
        out = np.fft.ifftn(fhat * khat)
    if not np.iscomplexobj(f.values):
        out = out.real
    return GridFunction(spec, out, f.support_hint)


def kernel_regularity_check(
    T: CZKernel, sample_pairs: Sequence[Tuple[np.ndarray, np.ndarray]]
) -> float:
    """max over pairs of |k(x - y) - k(x)| |x|^{n+delta} / |y|^delta.

    Pairs must satisfy |x| >= 2 |y|; y = 0 pairs contribute 0.
    """
    n = T.dim
    best = 0.0
    for x, y in sample_pairs:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        nx = float(np.linalg.norm(x))
        ny = float(np.linalg.norm(y))
        if ny == 0.0:
            continue
        if nx < 2.0 * ny:
            raise ValueError("regularity samples need |x| >= 2|y|")
        diff = abs(kernel_value(T, *(x - y)) - kernel_value(T, *x))
        best = max(best, diff * nx ** (n + T.delta) / ny**T.delta)
    return best


def require_window(T: CZKernel, params: SliceSpaceParams) -> None:
    """Boundedness hypothesis: min(p-, q) in (n/(n+delta), 1]."""
    n = T.dim
    m = min(params.phi.p_minus, params.q)
    if not (n / (n + T.delta) < m <= 1.0):
        raise ParameterWindowError(
            f"min(p-, q) = {m:g} outside (n/(n+delta), 1] = ({n/(n+T.delta):g}, 1]"
        )


def boundedness_ratios(
    T: CZKernel,
    f: GridFunction,
    params: SliceSpaceParams,
    phi_test: Optional[TestFunction] = None,
    scales: Optional[Sequence[float]] = None,
) -> Tuple[float, float]:
    """(||Tf||_slice / ||f||_hardy, ||Tf||_hardy / ||f||_hardy) for one input."""
    require_window(T, params)
    tf = apply_cz(T, f)
    tf = GridFunction(tf.spec, tf.values)  # the image is not compactly supported
    hf = hardy_norm(f, params, phi_test, scales)
    if hf == 0.0:
        raise ValueError("zero input excluded (ratio undefined)")
    return (
        slice_norm(tf, params) / hf,
        hardy_norm(tf, params, phi_test, scales) / hf,
    )


def far_field_atom_check(
    T: CZKernel,
    atom: AtomSpec,
    params: SliceSpaceParams,
    cfg: MaximalConfig,
    n_probes: int = 32,
    phi_test: Optional[TestFunction] = None,
    scales: Optional[Sequence[float]] = None,
    seed: int = 0,
) -> Tuple[float, float]:
    """Far-field constants for one atom.

    Returns (c_maximal, c_decay) where, over probe points x outside the
    4 sqrt(n)-dilated cube,

        |M(T a, phi)(x)|  <= c_maximal [HL(chi_Q)(x)]^{(n+delta)/n} / ||chi_Q||,
        |T a (x)|         <= c_decay  r_Q^{n+delta} / dist(x, x_Q)^{n+delta} / ||chi_Q||.
    """
    spec = atom.payload.spec
    n = spec.dim
    if phi_test is None:
        phi_test = unit_gaussian(n)
    if scales is None:
        from .maximal import dyadic_scales

        scales = dyadic_scales(spec)
    ta = apply_cz(T, atom.payload)
    mta = radial_maximal(GridFunction(spec, ta.values), phi_test, scales).values
    chi = GridFunction.indicator(spec, atom.Q)
    hl_chi = hl_centered(chi, cfg).values
    chi_norm = cube_slice_norm(spec, atom.Q.side, params)

    far = ~_dilated_cube_mask(spec, atom.Q, 4.0 * math.sqrt(n))
    idx = np.nonzero(far.ravel())[0]
    rng = np.random.default_rng(seed)
    probes = rng.choice(idx, size=min(n_probes, idx.size), replace=False)

    if spec.dim == 1:
        pos = spec.axis()[:, None]
    else:
        X, Y = spec.meshgrid()
        pos = np.stack([X.ravel(), Y.ravel()], axis=1)
    dist = np.linalg.norm(pos - np.asarray(atom.Q.center)[None, :], axis=1)

    mta_f, ta_f, hl_f = mta.ravel(), np.abs(ta.values).ravel(), hl_chi.ravel()
    r_q = atom.Q.side
    c_max = 0.0
    c_dec = 0.0
    for p in probes:
        c_max = max(c_max, mta_f[p] * chi_norm / hl_f[p] ** ((n + T.delta) / n))
        c_dec = max(c_dec, ta_f[p] * chi_norm * dist[p] ** (n + T.delta) / r_q ** (n + T.delta))
    return c_max, c_dec


def _dilated_cube_mask(spec: GridSpec, Q, lam: float) -> np.ndarray:
    from .grid import region_mask

    return region_mask(spec, Q.scaled(lam))
