"""Orlicz growth functions and their calculus.

An Orlicz function is a non-decreasing Phi: [0, inf) -> [0, inf) with
Phi(0) = 0, Phi > 0 on (0, inf) and Phi(t) -> inf.  Its power-law envelope is
quantified by type exponents: Phi is of lower (resp. upper) type p when

    Phi(s * t) <= C * s**p * Phi(t)   for s in (0, 1)  (resp. s >= 1).

This module provides the built-in growth-function kinds, monotone inversion,
numerical Young (Legendre-type) conjugation with optional convexification,
empirical type estimation, and the quasi-triangle diagnostic.  All evaluation
routines accept scalars or numpy arrays and are pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import DomainExceededError, NonConvexInputError

__all__ = [
    "OrliczFunction",
    "YoungConjugate",
    "power",
    "scaled_power",
    "power_log",
    "log_quotient",
    "tabulated",
    "eval_phi",
    "inverse",
    "conjugate",
    "convexify",
    "estimate_types",
    "check_quasi_triangle",
    "conjugate_exponent",
    "to_record",
    "from_record",
]

_E = math.e


def conjugate_exponent(p: float) -> float:
    """Return p' with 1/p + 1/p' = 1 (p > 1)."""
    if p <= 1.0:
        raise ValueError(f"conjugate exponent needs p > 1, got {p}")
    return p / (p - 1.0)


@dataclass(frozen=True, eq=False)  # identity equality: tabulated kinds hold arrays
class OrliczFunction:
    """A growth function with declared type exponents and a trusted domain.

    kind is one of "power", "scaled-power", "power-log", "log-quotient",
    "tabulated".  For "tabulated", parallel sample arrays (tau, Phi(tau)) are
    stored and evaluation uses monotone linear interpolation in log-log
    coordinates, which is exact on pure power laws.
    """

    kind: str
    params: Tuple[float, ...] = ()
    p_minus: float = 1.0
    p_plus: float = 1.0
    c_minus: float = 1.0
    c_plus: float = 1.0
    eval_domain: Tuple[float, float] = (1e-12, 1e12)
    tab_tau: Optional[np.ndarray] = field(default=None, repr=False)
    tab_phi: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == "tabulated":
            tau = np.asarray(self.tab_tau, dtype=float)
            phi = np.asarray(self.tab_phi, dtype=float)
            if tau.ndim != 1 or tau.shape != phi.shape or tau.size < 2:
                raise ValueError("tabulated kind needs matching 1-d sample arrays")
            if np.any(np.diff(tau) <= 0):
                raise ValueError("tabulated tau samples must be strictly increasing")
            if np.any(np.diff(phi) < 0):
                raise ValueError("tabulated Phi samples must be non-decreasing")
            tau.setflags(write=False)
            phi.setflags(write=False)
            object.__setattr__(self, "tab_tau", tau)
            object.__setattr__(self, "tab_phi", phi)
            object.__setattr__(self, "eval_domain", (float(tau[0]), float(tau[-1])))
        if self.p_minus <= 0 or self.p_plus <= 0:
            raise ValueError("type exponents must be positive")

    def __call__(self, tau):
        return eval_phi(self, tau)

    def inv(self, y):
        return inverse(self, y)


def power(r: float) -> OrliczFunction:
    """Phi(tau) = tau**r, exact types p- = p+ = r with constant 1."""
    if r <= 0:
        raise ValueError("power exponent must be positive")
    return OrliczFunction(kind="power", params=(float(r),), p_minus=r, p_plus=r)


def scaled_power(c: float, r: float) -> OrliczFunction:
    """Phi(tau) = c * tau**r; closed-form kind used by power conjugates."""
    if c <= 0 or r <= 0:
        raise ValueError("scale and exponent must be positive")
    return OrliczFunction(kind="scaled-power", params=(float(c), float(r)), p_minus=r, p_plus=r)


def power_log(p: float) -> OrliczFunction:
    """Phi(tau) = tau**p * log(e + tau).

    Lower type exactly p (constant 1); upper type p + 1/4 with a finite
    constant absorbing the slowly varying log factor.
    """
    if p <= 0:
        raise ValueError("power-log exponent must be positive")
    return OrliczFunction(
        kind="power-log", params=(float(p),), p_minus=p, p_plus=p + 0.25, c_plus=4.0
    )


def log_quotient() -> OrliczFunction:
    """Phi(tau) = tau / log(e + tau): upper type 1, lower type 0.9."""
    return OrliczFunction(
        kind="log-quotient", params=(), p_minus=0.9, p_plus=1.0, c_minus=2.5, c_plus=1.0
    )


def tabulated(
    tau: np.ndarray,
    phi: np.ndarray,
    p_minus: float,
    p_plus: float,
    c_minus: float = 1.0,
    c_plus: float = 1.0,
) -> OrliczFunction:
    """Wrap sample arrays (tau, Phi(tau)) as a tabulated growth function."""
    return OrliczFunction(
        kind="tabulated",
        p_minus=p_minus,
        p_plus=p_plus,
        c_minus=c_minus,
        c_plus=c_plus,
        tab_tau=np.asarray(tau, dtype=float),
        tab_phi=np.asarray(phi, dtype=float),
    )


def _tab_eval(phi: OrliczFunction, tau: np.ndarray) -> np.ndarray:
    """Monotone log-log interpolation of tabulated samples.

    Zero sample values (flat segments of a degenerate conjugate) are kept at
    zero below the first positive sample.
    """
    ts = phi.tab_tau
    ps = phi.tab_phi
    out = np.zeros_like(tau, dtype=float)
    pos = ps > 0.0
    first = int(np.argmax(pos)) if pos.any() else ps.size
    if first >= ps.size:
        return out
    t_pos, p_pos = ts[first:], ps[first:]
    live = tau > 0
    if first > 0:
        # below the zero/positive crossover the function is identically 0
        live = live & (tau >= t_pos[0])
    if t_pos.size == 1:
        out[live] = p_pos[0]
        return out
    lt_nodes = np.log(t_pos)
    lp_nodes = np.log(p_pos)
    lt = np.log(tau[live])
    ly = np.interp(lt, lt_nodes, lp_nodes)
    # log-log extrapolation below the first node with the edge slope
    below = lt < lt_nodes[0]
    if np.any(below):
        slope = (lp_nodes[1] - lp_nodes[0]) / (lt_nodes[1] - lt_nodes[0])
        ly[below] = lp_nodes[0] + slope * (lt[below] - lt_nodes[0])
    out[live] = np.exp(ly)
    return out


def eval_phi(phi: OrliczFunction, tau) -> np.ndarray | float:
    """Evaluate Phi(tau); monotone, Phi(0) = 0.

    Raises DomainExceededError when a tabulated kind is asked beyond its
    largest sample.
    """
    arr = np.asarray(tau, dtype=float)
    if np.any(arr < 0):
        raise ValueError("Phi is defined on [0, inf)")
    if phi.kind == "power":
        (r,) = phi.params
        out = arr**r
    elif phi.kind == "scaled-power":
        c, r = phi.params
        out = c * arr**r
    elif phi.kind == "power-log":
        (p,) = phi.params
        out = arr**p * np.log(_E + arr)
    elif phi.kind == "log-quotient":
        with np.errstate(over="ignore", invalid="ignore"):
            out = arr / np.log(_E + arr)
        out = np.where(arr == 0.0, 0.0, out)
    elif phi.kind == "tabulated":
        if np.any(arr > phi.eval_domain[1] * (1 + 1e-12)):
            raise DomainExceededError(
                f"tau beyond tabulated domain (max {phi.eval_domain[1]:g})"
            )
        out = _tab_eval(phi, np.atleast_1d(arr))
        out = out.reshape(arr.shape)
    else:
        raise ValueError(f"unknown kind {phi.kind!r}")
    return out if isinstance(tau, np.ndarray) else float(out)


def _bisect_inverse(phi: OrliczFunction, y: np.ndarray) -> np.ndarray:
    """Vectorized monotone bisection for Phi^{-1}; relative tol 1e-12."""
    lo = np.full(y.shape, phi.eval_domain[0])
    hi = np.full(y.shape, max(phi.eval_domain[1], 1.0))
    # expand the bracket where needed (closed-form kinds have no hard cap)
    for _ in range(200):
        bad = eval_phi(phi, hi) < y
        if not np.any(bad):
            break
        hi = np.where(bad, hi * 4.0, hi)
    for _ in range(200):
        mid = np.sqrt(lo * hi)
        high = eval_phi(phi, mid) >= y
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
        if np.all(hi - lo <= 1e-12 * hi):
            break
    return np.sqrt(lo * hi)


def inverse(phi: OrliczFunction, y) -> np.ndarray | float:
    """Return Phi^{-1}(y) with Phi(Phi^{-1}(y)) = y to relative 1e-10.

    Closed forms for (scaled) powers; monotone bisection otherwise.  For
    tabulated kinds a value beyond Phi(tau_max) raises DomainExceededError.
    """
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0):
        raise ValueError("inverse needs y >= 0")
    if phi.kind == "power":
        (r,) = phi.params
        out = arr ** (1.0 / r)
    elif phi.kind == "scaled-power":
        c, r = phi.params
        out = (arr / c) ** (1.0 / r)
    elif phi.kind == "tabulated":
        top = float(phi.tab_phi[-1])
        if np.any(arr > top * (1 + 1e-12)):
            raise DomainExceededError(f"y beyond tabulated range (max {top:g})")
        ps = phi.tab_phi
        ts = phi.tab_tau
        pos = ps > 0
        t_pos, p_pos = ts[pos], ps[pos]
        # collapse duplicate sample values so the inverse interp is well posed
        _, uniq = np.unique(p_pos, return_index=True)
        t_pos, p_pos = t_pos[uniq], p_pos[uniq]
        out = np.zeros_like(arr)
        live = arr > 0
        lp_nodes = np.log(p_pos)
        lt_nodes = np.log(t_pos)
        ly = np.log(arr[live])
        lt = np.interp(ly, lp_nodes, lt_nodes)
        below = ly < lp_nodes[0]
        if np.any(below) and lp_nodes.size > 1:
            slope = (lt_nodes[1] - lt_nodes[0]) / (lp_nodes[1] - lp_nodes[0])
            lt[below] = lt_nodes[0] + slope * (ly[below] - lp_nodes[0])
        out[live] = np.exp(lt)
    else:
        shaped = np.atleast_1d(arr)
        out = _bisect_inverse(phi, shaped).reshape(arr.shape)
    return out if isinstance(y, np.ndarray) else float(out)


def _is_convex(phi: OrliczFunction) -> bool:
    if phi.kind in ("power", "scaled-power"):
        return phi.params[-1] >= 1.0
    if phi.kind == "power-log":
        return phi.params[0] >= 1.0
    if phi.kind == "log-quotient":
        return False
    # tabulated: check discrete chords
    t, p = phi.tab_tau, phi.tab_phi
    slopes = np.diff(p) / np.diff(t)
    return bool(np.all(np.diff(slopes) >= -1e-9 * (1.0 + np.abs(slopes[1:]))))


def convexify(phi: OrliczFunction, n_grid: int = 4096) -> OrliczFunction:
    """Running-sup convexification: Phi~(t) = int_0^t sup_{tau<s} Phi(tau)/tau ds.

    Produces an equivalent convex function only when the lower type exceeds 1;
    otherwise the construction degenerates and NonConvexInputError is raised.
    Discretized by cumulative trapezoid on a log-spaced grid.
    """
    if phi.p_minus <= 1.0:
        raise NonConvexInputError(
            "running-sup convexification requires lower type > 1 "
            f"(declared {phi.p_minus})"
        )
    lo, hi = phi.eval_domain
    lo = max(lo, 1e-10)
    t = np.geomspace(lo, min(hi, 1e10), n_grid)
    slope = np.maximum.accumulate(eval_phi(phi, t) / t)
    vals = np.concatenate([[0.0], np.cumsum(0.5 * (slope[1:] + slope[:-1]) * np.diff(t))])
    vals += slope[0] * t[0]  # int_0^{t_0}: slope is flat below the first node
    keep = np.concatenate([[True], np.diff(vals) > 0])
    return tabulated(t[keep], vals[keep], phi.p_minus, phi.p_plus, phi.c_minus, phi.c_plus)


@dataclass(frozen=True)
class YoungConjugate:
    """The complementary function Psi(y) = sup_x {x*y - Phi(x)} of a Young Phi."""

    psi: OrliczFunction


def conjugate(
    phi: OrliczFunction,
    x_grid: Optional[np.ndarray] = None,
    y_grid: Optional[np.ndarray] = None,
    allow_convexify: bool = True,
) -> YoungConjugate:
    """Return the Young conjugate of phi.

    (Scaled) powers with exponent > 1 get the closed form
    Psi(y) = (1 - 1/r) (c r)^{-1/(r-1)} y^{r'}.  Power exponent 1 yields the
    degenerate conjugate (0 on [0,1], steep linear growth beyond), stored as
    tabulated samples.  Other kinds are conjugated numerically: supremum over
    a log-spaced x grid of 4096 points followed by a ternary refinement around
    the argmax (the objective is unimodal for convex Phi).
    """
    if not _is_convex(phi):
        if not allow_convexify:
            raise NonConvexInputError(f"{phi.kind} is not convex")
        phi = convexify(phi)  # raises for lower type <= 1

    if phi.kind in ("power", "scaled-power") and phi.params[-1] > 1.0:
        if phi.kind == "power":
            c, r = 1.0, phi.params[0]
        else:
            c, r = phi.params
        rp = conjugate_exponent(r)
        cc = (1.0 - 1.0 / r) * (c * r) ** (-1.0 / (r - 1.0))
        return YoungConjugate(scaled_power(cc, rp))

    if phi.kind == "power" and phi.params[0] == 1.0:
        # sup_x x(y-1) = 0 for y <= 1; beyond 1 the sup over the sample box
        # grows linearly with the largest admissible x
        xmax = phi.eval_domain[1]
        y = np.geomspace(1e-8, 1e8, 2049)
        vals = np.where(y <= 1.0, 0.0, xmax * (y - 1.0))
        return YoungConjugate(tabulated(y, vals, 1.0, 1.0))

    if x_grid is None:
        x_grid = np.geomspace(1e-8, 1e8, 4096)
    if y_grid is None:
        y_grid = np.geomspace(1e-8, 1e8, 4096)
    phix = eval_phi(phi, x_grid)
    # dense sup over the sample grid, all y at once
    obj = y_grid[:, None] * x_grid[None, :] - phix[None, :]
    k = np.argmax(obj, axis=1)
    lo = x_grid[np.maximum(k - 1, 0)]
    hi = x_grid[np.minimum(k + 1, x_grid.size - 1)]
    for _ in range(90):  # ternary refinement of the unimodal objective
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        f1 = y_grid * m1 - eval_phi(phi, m1)
        f2 = y_grid * m2 - eval_phi(phi, m2)
        take_hi = f1 < f2
        lo = np.where(take_hi, m1, lo)
        hi = np.where(take_hi, hi, m2)
    xs = 0.5 * (lo + hi)
    vals = np.maximum(y_grid * xs - eval_phi(phi, xs), 0.0)
    vals = np.maximum.accumulate(vals)
    if phi.p_plus > 1.0:
        pm = conjugate_exponent(phi.p_plus)
    else:
        pm = 1.0
    pp = conjugate_exponent(phi.p_minus) if phi.p_minus > 1.0 else float(phi.p_minus)
    return YoungConjugate(tabulated(y_grid, vals, pm, max(pm, pp)))


def estimate_types(
    phi: OrliczFunction, s_grid: np.ndarray, tau_grid: np.ndarray
) -> Tuple[float, float, float, float]:
    """Empirical type exponents (p_lo, p_hi, C_lo, C_hi) on the given grids.

    For each sampled (s, tau) the exponent witness is
    R = log(Phi(s tau)/Phi(tau)) / log s; the constant-1 admissible lower type
    is min R over s < 1 and the upper type is max R over s > 1.  Pure powers
    return their exponent exactly.
    """
    s = np.asarray(s_grid, dtype=float)
    tau = np.asarray(tau_grid, dtype=float)
    if s.size == 0 or tau.size == 0:
        raise ValueError("grids must be nonempty")
    ratios = []
    for which, mask in (("lo", s < 1.0), ("hi", s > 1.0)):
        ss = s[mask]
        if ss.size == 0:
            ratios.append(None)
            continue
        st = ss[:, None] * tau[None, :]
        num = eval_phi(phi, st)
        den = eval_phi(phi, np.broadcast_to(tau[None, :], st.shape).copy())
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.log(num / den) / np.log(ss)[:, None]
        ratios.append(r[np.isfinite(r)])
    p_lo = float(np.min(ratios[0])) if ratios[0] is not None else float("nan")
    p_hi = float(np.max(ratios[1])) if ratios[1] is not None else float("nan")
    return p_lo, p_hi, 1.0, 1.0


def check_quasi_triangle(phi: OrliczFunction, t1: float, t2: float) -> float:
    """Return Phi(t1 + t2) / (Phi(t1) + Phi(t2)); finite for t1 + t2 > 0."""
    if t1 < 0 or t2 < 0 or t1 + t2 <= 0:
        raise ValueError("need t1, t2 >= 0 with t1 + t2 > 0")
    den = eval_phi(phi, t1) + eval_phi(phi, t2)
    return float(eval_phi(phi, t1 + t2) / den)


def to_record(phi: OrliczFunction) -> str:
    """Serialize as a structured-text record (JSON)."""
    rec = {
        "kind": phi.kind,
        "params": list(phi.params),
        "p_minus": phi.p_minus,
        "p_plus": phi.p_plus,
        "c_minus": phi.c_minus,
        "c_plus": phi.c_plus,
        "eval_domain": list(phi.eval_domain),
    }
    if phi.kind == "tabulated":
        rec["tau"] = [repr(v) for v in phi.tab_tau]
        rec["phi"] = [repr(v) for v in phi.tab_phi]
    return json.dumps(rec)


def from_record(text: str) -> OrliczFunction:
    """Inverse of to_record."""
    rec = json.loads(text)
    if rec["kind"] == "tabulated":
        return tabulated(
            np.array([float(v) for v in rec["tau"]]),
            np.array([float(v) for v in rec["phi"]]),
            rec["p_minus"],
            rec["p_plus"],
            rec.get("c_minus", 1.0),
            rec.get("c_plus", 1.0),
        )
    return OrliczFunction(
        kind=rec["kind"],
        params=tuple(rec["params"]),
        p_minus=rec["p_minus"],
        p_plus=rec["p_plus"],
        c_minus=rec.get("c_minus", 1.0),
        c_plus=rec.get("c_plus", 1.0),
        eval_domain=tuple(rec["eval_domain"]),
    )
