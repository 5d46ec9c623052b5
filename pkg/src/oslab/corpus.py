"""Deterministic corpus generation for the verification suites.

Members are built from analytic profiles sampled onto a requested grid, so a
family can be re-materialized at any resolution.  Every member is compactly
supported inside a concentric window (default: margin of half the box
half-width), which keeps slice norms, maximal averages, and decompositions
inside the declared zero-extension semantics.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import atoms as at
from .grid import Ball, Cube, GridFunction, GridSpec, region_mask
from .norms import SliceSpaceParams

__all__ = ["CorpusSpec", "CorpusMember", "generate_corpus", "remove_window_moments"]

DEFAULT_FAMILIES = {
    "indicators": 4,
    "bumps": 4,
    "dilates": 2,
    "trig": 3,
    "whitney": 3,
}


@dataclass(frozen=True)
class CorpusSpec:
    """Family counts plus the support window radius (max |x| of support)."""

    families: Dict[str, int] = field(default_factory=lambda: dict(DEFAULT_FAMILIES))
    window_radius: Optional[float] = None  # default: half_width / 2
    atom_r: float = math.inf
    atom_d: int = 0


@dataclass(frozen=True)
class CorpusMember:
    name: str
    fn: GridFunction


def _smooth_bump(r2: np.ndarray) -> np.ndarray:
    """C-infinity profile exp(-1/(1-u)) on u = r2 < 1, zero outside."""
    out = np.zeros_like(r2)
    inside = r2 < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
    return out * math.e  # peak value 1


def _support_cube(center, reach: float, dim: int) -> Cube:
    return Cube(tuple(center), 2.0 * reach)


def _bump_fn(grid: GridSpec, center, radius: float, amp: float) -> GridFunction:
    cs = grid.coords()
    r2 = sum((c - c0) ** 2 for c, c0 in zip(cs, center)) / radius**2
    return GridFunction(grid, amp * _smooth_bump(r2), _support_cube(center, radius, grid.dim))


def generate_corpus(
    seed: int,
    spec: CorpusSpec,
    grid: GridSpec,
    params: Optional[SliceSpaceParams] = None,
) -> List[CorpusMember]:
    """Deterministic corpus on the given grid; same seed, same members."""
    w = spec.window_radius if spec.window_radius is not None else grid.half_width / 2.0
    dim = grid.dim
    out: List[CorpusMember] = []
    for family, count in sorted(spec.families.items()):
        if count <= 0:
            continue
        rng = np.random.default_rng((seed, zlib.crc32(family.encode())))
        for i in range(count):
            name = f"{family}-{i}"
            if family == "indicators":
                c = rng.uniform(-w / 2, w / 2, size=dim)
                if i % 2 == 0:
                    size = rng.uniform(w / 8, w / 2)
                    f = GridFunction.indicator(grid, Ball(tuple(c), size))
                    f = GridFunction(grid, f.values, _support_cube(c, size, dim))
                else:
                    size = rng.uniform(w / 8, w / 2)
                    f = GridFunction.indicator(grid, Cube(tuple(c), 2 * size))
                    f = GridFunction(grid, f.values, _support_cube(c, size, dim))
            elif family == "bumps":
                c = rng.uniform(-w / 2, w / 2, size=dim)
                rad = rng.uniform(w / 6, w / 2)
                f = _bump_fn(grid, c, rad, rng.uniform(0.5, 2.0))
            elif family == "dilates":
                # f(theta x) for a fixed profile, theta a power of two
                theta = 2.0 ** (i - spec.families[family] // 2)
                reach = min(w, (w / 1.5) / theta)
                cs = grid.coords()
                r2 = sum((c * theta) ** 2 for c in cs) / (w / 1.5) ** 2
                f = GridFunction(grid, _smooth_bump(r2), _support_cube((0.0,) * dim, reach, dim))
            elif family == "trig":
                c = rng.uniform(-w / 4, w / 4, size=dim)
                rad = rng.uniform(w / 2, w * 0.9)
                cs = grid.coords()
                r2 = sum((cc - c0) ** 2 for cc, c0 in zip(cs, c)) / rad**2
                env = _smooth_bump(r2)
                waves = np.zeros(grid.shape)
                for _ in range(3):
                    freq = rng.uniform(1.0, 4.0) * math.pi / w
                    phase = rng.uniform(0, 2 * math.pi)
                    direction = rng.normal(size=dim)
                    direction /= np.linalg.norm(direction)
                    arg = sum(d * cc for d, cc in zip(direction, cs))
                    waves = waves + rng.uniform(0.3, 1.0) * np.cos(freq * arg + phase)
                f = GridFunction(grid, env * waves, _support_cube(c, rad, dim))
            elif family == "whitney":
                vals = np.zeros(grid.shape)
                for _ in range(4):
                    side = w / 2.0 ** rng.integers(1, 4)
                    c = rng.uniform(-(w - side / 2), w - side / 2, size=dim)
                    vals += rng.uniform(-1, 1) * region_mask(grid, Cube(tuple(c), side))
                f = GridFunction(grid, vals, _support_cube((0.0,) * dim, w, dim))
            elif family == "atoms":
                if params is None:
                    raise ValueError("atom family needs slice parameters")
                side = w / 2.0 ** rng.integers(0, 3)
                c = np.round(rng.uniform(-(w - side / 2), w - side / 2, size=dim) / grid.h) * grid.h
                atom = at.synthesize_atom(
                    grid, Cube(tuple(c), side), spec.atom_r, spec.atom_d, params,
                    seed=int(rng.integers(0, 2**31)),
                )
                f = atom.payload
            elif family == "molecules":
                if params is None:
                    raise ValueError("molecule family needs slice parameters")
                side = w / 2.0 ** rng.integers(2, 4)
                mol = at.synthesize_molecule(
                    grid, Cube((0.0,) * dim, side), 2.0, spec.atom_d, 1.5, params,
                    seed=int(rng.integers(0, 2**31)),
                )
                f = mol.payload
            else:
                raise ValueError(f"unknown corpus family {family!r}")
            if np.any(f.values):
                out.append(CorpusMember(name, f))
    return out


def remove_window_moments(f: GridFunction, d: int) -> GridFunction:
    """Subtract the degree-d polynomial component over the support window.

    Used to place corpus members inside the moment-vanishing regime that
    sub-unit exponents require.
    """
    from .atoms import _project_out_polynomials

    spec = f.spec
    hint = f.support_hint
    if hint is None:
        raise ValueError("member needs a support hint")
    mask = region_mask(spec, hint)
    mask &= np.ones(spec.shape, dtype=bool)
    resid, _ = _project_out_polynomials(spec, np.real(f.values).astype(float), mask, hint, d)
    return GridFunction(spec, resid, hint)
