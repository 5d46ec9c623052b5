"""Hardy quasi-norm, atoms, molecules, and the level-set atomic decomposition.

The Hardy quasi-norm of f is the slice norm of its radial maximal function
with a unit-Gaussian test kernel.  An (r, d)-atom for the slice space is a
function a supported on a cube Q with

    ||a||_{L^r} <= |Q|^{1/r} / ||chi_Q||_slice     and     a _|_ P_d

(vanishing moments up to degree d).  A molecule relaxes compact support to
ring decay 2^{-tau j} over the dyadic annuli S_j(Q).

The decomposition is the grand-maximal level-set procedure: level sets
O_j = {M_N f > 2^j} are covered by maximal dyadic cubes whose tripled cube
stays inside O_j (Whitney-style); payload pieces are differences of level-set
truncations, moment-corrected per cube by subtracting the local polynomial
projection, whose mass is re-attributed to the coarser level.  The cascade
terminates in one window-wide fold, so the returned atoms, coefficients, and
residual reproduce f exactly on the grid by construction, and the residual is
the degree-d polynomial component of f over the window (zero for inputs with
vanishing moments).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import orlicz as oz
from .errors import (
    BoundaryMarginError,
    DegenerateCubeError,
    EmptyLevelRangeError,
    ExponentOutOfRangeError,
)
from .grid import Cube, GridFunction, GridSpec, annulus_rings, region_mask
from .maximal import (
    MaximalConfig,
    TestFunction,
    default_config,
    dyadic_scales,
    grand_maximal,
    radial_maximal,
    unit_gaussian,
)
from .norms import SliceSpaceParams, lebesgue_norm, slice_norm

__all__ = [
    "AtomSpec",
    "MoleculeSpec",
    "ValidationResult",
    "AtomicDecomposition",
    "hardy_norm",
    "cube_slice_norm",
    "moment_tolerance",
    "validate_atom",
    "validate_molecule",
    "synthesize_atom",
    "synthesize_molecule",
    "atomic_decompose",
    "s_functional",
    "finite_atomic_norm",
]


@dataclass(frozen=True)
class AtomSpec:
    """Supported cube, integrability exponent, moment order, and payload."""

    Q: Cube
    r: float
    d: int
    payload: GridFunction


@dataclass(frozen=True)
class MoleculeSpec:
    """Atom-like data with ring-decay rate tau instead of compact support."""

    Q: Cube
    r: float
    d: int
    tau: float
    payload: GridFunction


@dataclass(frozen=True)
class ValidationResult:
    """Per-condition outcomes; failures are data, not errors."""

    support_ok: bool
    size_ok: bool
    moments_ok: bool
    size_slack: float  # measured norm / allowed bound
    worst_moment: float  # largest |moment| / tolerance
    ring_slacks: Tuple[float, ...] = ()

    @property
    def ok(self) -> bool:
        return self.support_ok and self.size_ok and self.moments_ok


def hardy_norm(
    f: GridFunction,
    params: SliceSpaceParams,
    phi_test: Optional[TestFunction] = None,
    scales: Optional[Sequence[float]] = None,
) -> float:
    """Slice norm of the radial maximal function (unit Gaussian by default)."""
    if phi_test is None:
        phi_test = unit_gaussian(f.spec.dim)
    if scales is None:
        scales = dyadic_scales(f.spec)
    if not np.any(f.values):
        return 0.0
    return slice_norm(radial_maximal(f, phi_test, scales), params)


_cube_norm_cache: Dict[Tuple, float] = {}


def cube_slice_norm(spec: GridSpec, side: float, params: SliceSpaceParams) -> float:
    """Slice norm of a grid-aligned cube indicator; translation invariant,
    so cached per (grid, side, params)."""
    key = (spec, round(side / spec.h), id(params.phi), params.t, params.q)
    if key not in _cube_norm_cache:
        chi = GridFunction.indicator(spec, Cube((0.0,) * spec.dim, side))
        _cube_norm_cache[key] = slice_norm(chi, params)
    return _cube_norm_cache[key]


def moment_tolerance(payload: GridFunction, Q: Cube, d: int) -> float:
    """1e-10 * ||payload||_1 * diam(Q)^d."""
    l1 = lebesgue_norm(payload, 1.0)
    return 1e-10 * l1 * Q.diameter**d


def _centered_monomials(spec: GridSpec, mask: np.ndarray, Q: Cube, d: int) -> np.ndarray:
    cs = [np.broadcast_to(c, spec.shape)[mask] for c in spec.coords()]
    scale = Q.side / 2.0
    cols = []
    if spec.dim == 1:
        u = (cs[0] - Q.center[0]) / scale
        cols = [u**a for a in range(d + 1)]
    else:
        u = (cs[0] - Q.center[0]) / scale
        v = (cs[1] - Q.center[1]) / scale
        for tot in range(d + 1):
            for a in range(tot + 1):
                cols.append(u ** (tot - a) * v**a)
    return np.stack(cols, axis=1)


def _moments(payload: GridFunction, Q: Cube, d: int) -> np.ndarray:
    """Centered monomial moments int payload (x - x_Q)^alpha, |alpha| <= d."""
    spec = payload.spec
    mask = payload.values != 0
    if not mask.any():
        return np.zeros(1)
    X = _centered_monomials(spec, mask, Q, d)
    vals = np.real(payload.values[mask])
    scale = (Q.side / 2.0) ** _monomial_degrees(spec.dim, d)
    return (X * vals[:, None]).sum(axis=0) * spec.cell_volume * scale


def _monomial_degrees(dim: int, d: int) -> np.ndarray:
    if dim == 1:
        return np.arange(d + 1, dtype=float)
    return np.array([tot for tot in range(d + 1) for _ in range(tot + 1)], dtype=float)


def validate_atom(a: AtomSpec, params: SliceSpaceParams) -> ValidationResult:
    """Check support, size, and vanishing-moment conditions with slack."""
    spec = a.payload.spec
    inside = region_mask(spec, a.Q)
    support_ok = not np.any(a.payload.values[~inside])
    bound = a.Q.volume ** (0.0 if math.isinf(a.r) else 1.0 / a.r) / cube_slice_norm(
        spec, a.Q.side, params
    )
    size = lebesgue_norm(a.payload, a.r)
    size_ok = size <= bound * (1.0 + 1e-9)
    tol = moment_tolerance(a.payload, a.Q, a.d)
    moms = np.abs(_moments(a.payload, a.Q, a.d))
    worst = float(moms.max() / tol) if tol > 0 else (0.0 if moms.max() == 0 else math.inf)
    return ValidationResult(
        support_ok=support_ok,
        size_ok=size_ok,
        moments_ok=worst <= 1.0,
        size_slack=size / bound if bound > 0 else math.inf,
        worst_moment=worst,
    )


def validate_molecule(m: MoleculeSpec, params: SliceSpaceParams) -> ValidationResult:
    """Check ring-decay size conditions over S_j(Q) and vanishing moments."""
    spec = m.payload.spec
    bound0 = m.Q.volume ** (0.0 if math.isinf(m.r) else 1.0 / m.r) / cube_slice_norm(
        spec, m.Q.side, params
    )
    jmax = max(0, int(math.ceil(math.log2(4.0 * spec.half_width / m.Q.side))))
    rings = annulus_rings(spec, m.Q, jmax)
    slacks = []
    ok = True
    hv = spec.cell_volume
    for j, ring in enumerate(rings):
        vals = np.abs(m.payload.values[ring])
        if math.isinf(m.r):
            size = float(vals.max()) if vals.size else 0.0
        else:
            size = float((vals**m.r).sum() * hv) ** (1.0 / m.r) if vals.size else 0.0
        bound = 2.0 ** (-m.tau * j) * bound0
        slacks.append(size / bound if bound > 0 else math.inf)
        ok = ok and size <= bound * (1.0 + 1e-9)
    # mass escaping every ring (outside 2^{jmax+1} Q) would violate decay
    outer = ~region_mask(spec, m.Q.scaled(2.0 ** (jmax + 1)))
    ok = ok and not np.any(m.payload.values[outer])
    tol = moment_tolerance(m.payload, m.Q, m.d)
    moms = np.abs(_moments(m.payload, m.Q, m.d))
    worst = float(moms.max() / tol) if tol > 0 else (0.0 if moms.max() == 0 else math.inf)
    return ValidationResult(
        support_ok=True,
        size_ok=ok,
        moments_ok=worst <= 1.0,
        size_slack=max(slacks) if slacks else 0.0,
        worst_moment=worst,
        ring_slacks=tuple(slacks),
    )


def _project_out_polynomials(
    spec: GridSpec, values: np.ndarray, mask: np.ndarray, Q: Cube, d: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Return (residual, projection) of values*chi_mask onto P_d on the cube."""
    X = _centered_monomials(spec, mask, Q, d)
    if mask.sum() <= X.shape[1]:
        raise DegenerateCubeError(
            f"cube holds {int(mask.sum())} points for {X.shape[1]} moment constraints"
        )
    y = np.real(values[mask]).astype(float)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    r = y - X @ coef
    # one refinement pass: when y carries a large common component, the
    # first residual keeps an absolute eps * |y| leftover that would dominate
    # the moments of a tiny piece
    coef2, *_ = np.linalg.lstsq(X, r, rcond=None)
    r = r - X @ coef2
    coef = coef + coef2
    proj = np.zeros(spec.shape)
    proj[mask] = X @ coef
    resid = np.zeros(spec.shape)
    resid[mask] = r
    return resid, proj


def synthesize_atom(
    spec: GridSpec,
    Q: Cube,
    r: float,
    d: int,
    params: SliceSpaceParams,
    seed: int,
) -> AtomSpec:
    """Random valid atom: noise on Q, moments removed, rescaled to 0.9x bound."""
    rng = np.random.default_rng(seed)
    mask = region_mask(spec, Q)
    vals = np.zeros(spec.shape)
    vals[mask] = rng.standard_normal(int(mask.sum()))
    resid, _ = _project_out_polynomials(spec, vals, mask, Q, d)
    f = GridFunction(spec, resid, support_hint=Q)
    size = lebesgue_norm(f, r)
    if size == 0.0:
        raise DegenerateCubeError("projection annihilated the sample")
    bound = Q.volume ** (0.0 if math.isinf(r) else 1.0 / r) / cube_slice_norm(
        spec, Q.side, params
    )
    payload = GridFunction(spec, resid * (0.9 * bound / size), support_hint=Q)
    return AtomSpec(Q=Q, r=r, d=d, payload=payload)


def synthesize_molecule(
    spec: GridSpec,
    Q: Cube,
    r: float,
    d: int,
    tau: float,
    params: SliceSpaceParams,
    seed: int,
    window_margin: Optional[float] = None,
) -> MoleculeSpec:
    """Random valid molecule: ring-weighted noise, global moment removal,
    then one global rescale saturating the tightest ring bound at 0.9x."""
    rng = np.random.default_rng(seed)
    if window_margin is None:
        window_margin = spec.half_width / 2.0
    reach = spec.half_width - window_margin
    jmax = 0
    while Q.scaled(2.0 ** (jmax + 2)).side / 2.0 + max(abs(c) for c in Q.center) <= reach:
        jmax += 1
    rings = annulus_rings(spec, Q, jmax)
    vals = np.zeros(spec.shape)
    for j, ring in enumerate(rings):
        n = int(ring.sum())
        if n:
            vals[ring] = rng.standard_normal(n) * 2.0 ** (-tau * j)
    support = region_mask(spec, Q.scaled(2.0 ** (jmax + 1)))
    resid, _ = _project_out_polynomials(spec, vals, support, Q, d)
    bound0 = Q.volume ** (0.0 if math.isinf(r) else 1.0 / r) / cube_slice_norm(
        spec, Q.side, params
    )
    hv = spec.cell_volume
    scale = math.inf
    for j, ring in enumerate(rings):
        v = np.abs(resid[ring])
        if not v.size or not v.any():
            continue
        size = float(v.max()) if math.isinf(r) else float((v**r).sum() * hv) ** (1.0 / r)
        scale = min(scale, 0.9 * 2.0 ** (-tau * j) * bound0 / size)
    payload = GridFunction(spec, resid * scale)
    return MoleculeSpec(Q=Q, r=r, d=d, tau=tau, payload=payload)


@dataclass(frozen=True)
class AtomicDecomposition:
    """Weighted atoms plus the exact bookkeeping residual."""

    terms: Tuple[Tuple[float, AtomSpec], ...]
    s: float
    residual: GridFunction

    def reconstruct(self) -> np.ndarray:
        out = np.array(self.residual.values, dtype=float, copy=True)
        for lam, atom in self.terms:
            out += lam * atom.payload.values
        return out


def _whitney_cubes(
    spec: GridSpec, O: np.ndarray, window_cells: Tuple[int, int]
) -> List[Tuple[int, int, Tuple[int, ...]]]:
    """Maximal dyadic cubes with the tripled cube inside O and cube in window.

    Returns (level, cells_per_side, index tuple) entries; parenthood makes the
    selection pairwise disjoint.
    """
    from scipy import ndimage

    N = spec.points_per_axis
    lo, hi = window_cells
    out = []
    max_level = int(round(math.log2(N)))
    parent_elig = None
    for lev in range(max_level + 1):
        k = 1 << lev
        cells = N // k
        if spec.dim == 1:
            blocks = O.reshape(k, cells).all(axis=1)
        else:
            blocks = O.reshape(k, cells, k, cells).all(axis=(1, 3))
        elig = (
            ndimage.minimum_filter(blocks.astype(np.uint8), size=3, mode="constant", cval=0)
            .astype(bool)
        )
        # keep cubes fully inside the admissible window
        idx = np.arange(k)
        inside_axis = (idx * cells >= lo) & ((idx + 1) * cells <= hi)
        if spec.dim == 1:
            elig &= inside_axis
        else:
            elig &= inside_axis[:, None] & inside_axis[None, :]
        if parent_elig is None:
            fresh = elig
        else:
            grown = np.repeat(parent_elig, 2, axis=0)
            if spec.dim == 2:
                grown = np.repeat(grown, 2, axis=1)
            fresh = elig & ~grown
            elig = elig | grown  # a covered region stays covered at finer levels
        if spec.dim == 1:
            for i in np.nonzero(fresh)[0]:
                out.append((lev, cells, (int(i),)))
        else:
            for i, j in zip(*np.nonzero(fresh)):
                out.append((lev, cells, (int(i), int(j))))
        parent_elig = elig
        if cells == 1:
            break
    return out


def _cube_of(spec: GridSpec, cells: int, idx: Tuple[int, ...]) -> Cube:
    side = cells * spec.h
    center = tuple(-spec.half_width + (i + 0.5) * side for i in idx)
    return Cube(center, side)


def _cube_slice(cells: int, idx: Tuple[int, ...], dim: int):
    if dim == 1:
        (i,) = idx
        return (slice(i * cells, (i + 1) * cells),)
    i, j = idx
    return (slice(i * cells, (i + 1) * cells), slice(j * cells, (j + 1) * cells))


def atomic_decompose(
    f: GridFunction,
    params: SliceSpaceParams,
    cfg: Optional[MaximalConfig] = None,
    s: float = 0.5,
    d: int = 0,
    r: float = math.inf,
    max_levels: int = 40,
    scales: Optional[Sequence[float]] = None,
) -> AtomicDecomposition:
    """Grand-maximal level-set atomic decomposition with exact reconstruction.

    Level sets of M_N(f) over a dyadic threshold range are covered by
    Whitney-style maximal dyadic cubes; payload pieces are the level-set
    truncation differences, locally moment-corrected, with corrected mass
    re-attributed to the coarser level; the cascade ends in a fold onto the
    admissible window.  Coefficients saturate the atom size bound, so each
    emitted atom validates exactly.
    """
    spec = f.spec
    n = spec.dim
    if d < math.floor(n * (1.0 / s - 1.0)):
        raise ExponentOutOfRangeError(
            f"need d >= floor(n(1/s - 1)) = {math.floor(n * (1.0 / s - 1.0))}, got {d}"
        )
    if not (0.0 < s < min(params.phi.p_minus, params.q, 1.0) + 1e-12):
        raise ExponentOutOfRangeError(
            f"s={s} outside (0, min(p-, q, 1)={min(params.phi.p_minus, params.q, 1.0)})"
        )
    zero = GridFunction(spec, np.zeros(spec.shape))
    if not np.any(f.values):
        return AtomicDecomposition(terms=(), s=s, residual=zero)

    N = spec.points_per_axis
    margin_needed = max(params.t, spec.half_width / 2.0)
    if f.support_margin() < margin_needed - 1e-12:
        raise BoundaryMarginError(
            f"decomposition window needs support margin >= {margin_needed:g}"
        )
    win_side = 2.0 * (spec.half_width - margin_needed)
    win_cells_half = int(round(win_side / (2.0 * spec.h)))
    lo_cell, hi_cell = N // 2 - win_cells_half, N // 2 + win_cells_half
    window = Cube((0.0,) * n, win_side)

    if cfg is None:
        cfg = default_config(spec, params)
    if scales is None:
        scales = dyadic_scales(spec)
    m = grand_maximal(f, cfg, scales).values
    mpos = m[m > 0]
    if mpos.size == 0:
        raise EmptyLevelRangeError("grand maximal function vanishes identically")
    j_hi = int(math.ceil(math.log2(float(m.max()))))
    j_lo = int(math.ceil(math.log2(float(mpos.min()))))
    j_lo = max(j_lo, j_hi - max_levels)
    if j_hi <= j_lo:
        j_lo = j_hi - 1

    fv = np.real(f.values).astype(float)
    pending = np.zeros(spec.shape)
    terms: List[Tuple[float, AtomSpec]] = []
    # pieces below the float-cancellation grit of the cascade are not worth
    # an atom; they stay pending and land in the final fold (exactness kept)
    tiny = 1e-12 * float(np.abs(fv).max())

    prev_mask = np.zeros(spec.shape, dtype=bool)  # O_{j+1} at the top level
    for j in range(j_hi - 1, j_lo - 1, -1):
        Oj = m > 2.0**j
        band = Oj & ~prev_mask
        prev_mask = Oj
        pending[band] += fv[band]
        for lev, cells, idx in _whitney_cubes(spec, Oj, (lo_cell, hi_cell)):
            sl = _cube_slice(cells, idx, n)
            piece = pending[sl]
            if not np.any(np.abs(piece) > tiny):
                continue
            Q = _cube_of(spec, cells, idx)
            mask = np.zeros(spec.shape, dtype=bool)
            mask[sl] = True
            vals = np.zeros(spec.shape)
            vals[sl] = piece
            try:
                resid, proj = _project_out_polynomials(spec, vals, mask, Q, d)
            except DegenerateCubeError:
                continue  # too few points; leave the mass pending
            pending[sl] = proj[sl]
            if not np.any(np.abs(resid) > tiny):
                continue
            payload, lam = _normalize_atom(spec, resid, Q, r, params)
            terms.append((lam, AtomSpec(Q=Q, r=r, d=d, payload=payload)))

    # everything never thresholded past 2^{j_lo} flows into the final fold
    rest = ~prev_mask
    pending[rest] += fv[rest]
    return _finalize(spec, pending, window, win_cells_half, n, N, r, d, params, terms, s, tiny)


def _normalize_atom(spec, resid, Q, r, params):
    size = (
        float(np.abs(resid).max())
        if math.isinf(r)
        else float((np.abs(resid) ** r).sum() * spec.cell_volume) ** (1.0 / r)
    )
    bound = Q.volume ** (0.0 if math.isinf(r) else 1.0 / r) / cube_slice_norm(
        spec, Q.side, params
    )
    lam = size / bound
    payload = GridFunction(spec, resid / lam, support_hint=Q)
    return payload, lam


def _finalize(spec, pending, window, win_cells_half, n, N, r, d, params, terms, s, tiny):
    residual_vals = np.zeros(spec.shape)
    if np.any(np.abs(pending) > 0):
        mask = region_mask(spec, window)
        if np.any(np.abs(pending[~mask]) > 0):
            # mass escaped the window (cannot happen for compliant inputs);
            # keep it in the residual rather than emitting an invalid atom
            residual_vals[~mask] = pending[~mask]
            pending = np.where(mask, pending, 0.0)
        vals = pending
        resid, proj = _project_out_polynomials(spec, vals, mask, window, d)
        residual_vals += proj
        if np.any(np.abs(resid) > tiny):
            payload, lam = _normalize_atom(spec, resid, window, r, params)
            terms.append((lam, AtomSpec(Q=window, r=r, d=d, payload=payload)))
        else:
            residual_vals += resid
    residual = GridFunction(spec, residual_vals)
    return AtomicDecomposition(terms=tuple(terms), s=s, residual=residual)


def s_functional(
    spec: GridSpec,
    terms: Sequence[Tuple[float, AtomSpec]],
    params: SliceSpaceParams,
    s: float,
) -> float:
    """|| { sum_j [lam_j / ||chi_{Q_j}||]^s chi_{Q_j} }^{1/s} ||_slice."""
    if not terms:
        return 0.0
    acc = np.zeros(spec.shape)
    for lam, atom in terms:
        if lam == 0.0:
            continue
        chi_norm = cube_slice_norm(spec, atom.Q.side, params)
        acc[region_mask(spec, atom.Q)] += (lam / chi_norm) ** s
    field = GridFunction(spec, acc ** (1.0 / s))
    return slice_norm(field, params)


def finite_atomic_norm(
    decomp: AtomicDecomposition, params: SliceSpaceParams, s: Optional[float] = None
) -> float:
    """The finite-combination quasi-norm functional of a given decomposition."""
    if s is None:
        s = decomp.s
    if not decomp.terms:
        return 0.0
    spec = decomp.terms[0][1].payload.spec
    return s_functional(spec, decomp.terms, params, s)
