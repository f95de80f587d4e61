"""Counterexample driver: probe construction, m-sweeps, residual bounds.

The driver locates a point where the relevant derivative of the outer
function is nonzero, builds the oscillatory probe pair (z, u), and sweeps
the frequency parameter m. For the pullback map the top derivative order of
the difference v of directional derivatives is k-1; for the composition
map it is k. In both cases the top derivative at the anchor point grows
like sqrt(m) while the residual (everything except the extracted leading
term) stays bounded, which is what defeats any fixed uniform estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .functions import (
    GridSpec,
    SmoothFunction,
    constant,
    probe,
    probe_deriv_closed_form,
    seminorm_profile,
)
from .jets import deriv_from_jet
from .maps import CirclePullback, MapSpec, PostComposition, SampledFunction
from .primitives import TWO_PI
from .tameness import PNormSpec, pnorm_eval

MAX_M = 2**14
_CHUNK = 1 << 16


class DegenerateMapError(ValueError):
    """The outer function has no usable point of nonzero derivative."""


class PrecisionBudgetError(RuntimeError):
    """The certified m would exceed the double-precision budget."""


@dataclass(frozen=True)
class ProbeParams:
    """Quantifier bundle for one counterexample instance."""

    k: int
    l: int
    eps0: float
    m: int
    s0: float
    t0: float

    def __post_init__(self):
        if self.k < 1 or self.k % 2 != 1:
            raise ValueError("k must be an odd positive integer")
        if self.l < 1:
            raise ValueError("l must be a positive integer")
        if abs(self.eps0 * self.l - 1.0) > 1e-12:
            raise ValueError("eps0 must equal 1/l")
        if self.m < 1:
            raise ValueError("m must be a positive integer")


@dataclass(frozen=True)
class GrowthRecord:
    """One row of an m-sweep."""

    m: int
    p_km1_z: float
    rho1_z: float
    rho1_u: float
    top_deriv_s0: float
    predicted: float
    tz_sup: float
    rho2_v: float

    def as_dict(self) -> dict:
        return {"m": self.m, "p_km1_z": self.p_km1_z, "rho1_z": self.rho1_z,
                "rho1_u": self.rho1_u, "top_deriv_s0": self.top_deriv_s0,
                "predicted": self.predicted, "Tz_sup": self.tz_sup,
                "rho2_v": self.rho2_v}


@dataclass
class SweepResult:
    records: list
    slope: Optional[float]
    violation: bool
    t0: float
    s0: float
    degenerate: bool
    deriv_mag: float


def _leading_primitive(map_spec: MapSpec):
    """phi' for the pullback map, phi'' for the composition map."""
    if isinstance(map_spec, CirclePullback):
        return map_spec.phi.derivative()
    return map_spec.phi.derivative().derivative()


def top_order(map_spec: MapSpec, k: int) -> int:
    return k - 1 if isinstance(map_spec, CirclePullback) else k


def find_t0(map_spec: MapSpec, x: SmoothFunction | None = None,
            points: int = 8192) -> float:
    """Point where the relevant derivative of phi is (maximally) nonzero.

    Ties break toward the smallest candidate; a maximum below tolerance
    signals the degenerate (estimate-satisfying) case.
    """
    lead = _leading_primitive(map_spec)
    if isinstance(map_spec, CirclePullback):
        t = np.arange(points) / points
        vals = np.abs(lead(t))
        j = int(np.argmax(vals))
        if vals[j] < 1e-9:
            raise DegenerateMapError("no usable t0: phi' vanishes on the grid")
        return float(t[j])
    if x is None:
        raise ValueError("the composition map needs the base point x to find t0")
    s = np.linspace(0.0, 1.0, points + 1)
    xs = x.evaluate(s)
    vals = np.abs(lead(xs))
    j = int(np.argmax(vals))
    if vals[j] < 1e-9:
        raise DegenerateMapError("no usable t0: phi'' vanishes on rng x")
    return float(xs[j])


def find_s0(map_spec: MapSpec, x: SmoothFunction, t0: float,
            points: int = 8192) -> float:
    """Anchor point with n*s0 + x(s0) = t0 (pullback) or x(s0) = t0."""
    if isinstance(map_spec, CirclePullback):
        n = map_spec.n
        # n*s + x(s) is onto since x is bounded; bracket around t0/n
        half = (seminorm_profile(x, 0)[0] + 1.0) / abs(n)
        lo, hi = t0 / n - half, t0 / n + half
        g = lambda s: n * s + x.evaluate(s) - t0
    else:
        lo, hi = 0.0, 1.0
        g = lambda s: x.evaluate(s) - t0
    s = np.linspace(lo, hi, points + 1)
    vals = g(s)
    exact = np.nonzero(np.abs(vals) < 1e-12)[0]
    if exact.size:
        return float(s[exact[0]])
    sign = np.sign(vals)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if not flips.size:
        raise ValueError("no root bracket found: t0 not attained on the grid")
    j = flips[0]
    return float(brentq(g, s[j], s[j + 1], xtol=1e-13))


def build_probe(params: ProbeParams, map_spec: MapSpec):
    """The oscillatory perturbation z and the constant direction u."""
    tag = map_spec.domain_tag
    z = probe(params.m, params.k, params.s0, tag)
    u = constant(params.eps0, tag)
    return z, u


def _difference_tree(map_spec: MapSpec, x: SmoothFunction,
                     z: SmoothFunction, u: SmoothFunction) -> SmoothFunction:
    return map_spec.gateaux(x + z, u) - map_spec.gateaux(x, u)


def _composed_argument(map_spec: MapSpec, x, z, s):
    if isinstance(map_spec, CirclePullback):
        return map_spec.n * s + x.evaluate(s) + z.evaluate(s)
    return x.evaluate(s) + z.evaluate(s)


def residual_tz(map_spec: MapSpec, x: SmoothFunction, params: ProbeParams,
                z: SmoothFunction, u: SmoothFunction,
                v: SmoothFunction | None = None,
                grid: GridSpec | None = None):
    """Split the top derivative of v into leading term and residual.

    Returns ``(leading_at_s0, tz)`` where ``leading_at_s0`` is
    eps0 * phi_lead(composed point at s0) * z^(k)(s0) and ``tz`` samples
    v^(top)/eps0 minus the leading term divided by eps0.
    """
    if v is None:
        v = _difference_tree(map_spec, x, z, u)
    top = top_order(map_spec, params.k)
    lead = _leading_primitive(map_spec)
    s = (grid or GridSpec()).points(v)
    fact = math.factorial(top)
    tz_vals = np.empty_like(s)
    for lo in range(0, s.size, _CHUNK):
        sc = s[lo:lo + _CHUNK]
        v_top = fact * v.node.coeffs(sc, top)[top]
        c = _composed_argument(map_spec, x, z, sc)
        zk = probe_deriv_closed_form(params.m, params.k, params.s0, params.k, sc)
        tz_vals[lo:lo + _CHUNK] = v_top / params.eps0 - lead(c) * zk
    c0 = _composed_argument(map_spec, x, z, np.array([params.s0]))
    zk0 = probe_deriv_closed_form(params.m, params.k, params.s0, params.k,
                                  params.s0)
    leading_at_s0 = params.eps0 * float(lead(c0)[0]) * zk0
    return leading_at_s0, SampledFunction(s, tz_vals)


def _locate_anchor(map_spec: MapSpec, x: SmoothFunction):
    """(t0, s0, deriv_mag, degenerate) for a sweep."""
    lead = _leading_primitive(map_spec)
    try:
        t0 = find_t0(map_spec, x)
    except DegenerateMapError:
        if isinstance(map_spec, CirclePullback):
            t0 = 0.0
            s0 = find_s0(map_spec, x, t0)
        else:
            s0 = 0.5
            t0 = x.evaluate(0.5)
        return t0, s0, abs(float(lead(t0))), True
    if isinstance(map_spec, PostComposition) and _is_constant_tree(x):
        s0 = 0.5  # interior placement keeps z's full oscillation inside I
    else:
        s0 = find_s0(map_spec, x, t0)
    return t0, s0, abs(float(lead(t0))), False


def _is_constant_tree(x: SmoothFunction) -> bool:
    s = np.linspace(0.0, 1.0, 17)
    vals = x.evaluate(s)
    return bool(np.max(vals) - np.min(vals) < 1e-14)


def growth_sweep(map_spec: MapSpec, x: SmoothFunction,
                 rho1: PNormSpec, rho2: PNormSpec,
                 k: int, l: int, m_list: Sequence[int],
                 grid: GridSpec | None = None) -> SweepResult:
    """One GrowthRecord per m, plus the fitted log-log slope."""
    m_list = list(m_list)
    if any(b <= a for a, b in zip(m_list, m_list[1:])):
        raise ValueError("m_list must be strictly ascending")
    if k % 2 != 1 or k < 1:
        raise ValueError("k must be odd and positive")
    t0, s0, deriv_mag, degenerate = _locate_anchor(map_spec, x)
    eps0 = 1.0 / l
    top = top_order(map_spec, k)
    records = []
    for m in m_list:
        params = ProbeParams(k=k, l=l, eps0=eps0, m=m, s0=s0, t0=t0)
        z, u = build_probe(params, map_spec)
        v = _difference_tree(map_spec, x, z, u)
        jet = v.jet_at(s0, top)
        top_deriv = abs(deriv_from_jet(jet, top))
        _, tz = residual_tz(map_spec, x, params, z, u, v=v, grid=grid)
        records.append(GrowthRecord(
            m=m,
            p_km1_z=float(seminorm_profile(z, k - 1, grid)[k - 1]),
            rho1_z=pnorm_eval(rho1, z, grid),
            rho1_u=pnorm_eval(rho1, u, grid),
            top_deriv_s0=top_deriv,
            predicted=eps0 * math.sqrt(TWO_PI * m) * deriv_mag,
            tz_sup=tz.sup(),
            rho2_v=pnorm_eval(rho2, v, grid),
        ))
    tops = np.array([r.top_deriv_s0 for r in records])
    if np.all(tops > 0.0) and len(records) >= 2:
        slope = float(np.polyfit(np.log([r.m for r in records]),
                                 np.log(tops), 1)[0])
    else:
        slope = None
    violation = any(r.rho1_z <= 1.0 and r.rho2_v > r.rho1_u for r in records)
    return SweepResult(records=records, slope=slope, violation=violation,
                       t0=t0, s0=s0, degenerate=degenerate,
                       deriv_mag=deriv_mag)


def estimate_residual_bound(map_spec: MapSpec, x: SmoothFunction,
                            k: int, l: int,
                            m_coarse: Sequence[int] = (16, 64, 256),
                            grid: GridSpec | None = None) -> float:
    """Empirical upper bound for the residual: twice the coarse-sweep
    maximum of sup|T_z|, plus one."""
    t0, s0, _, degenerate = _locate_anchor(map_spec, x)
    if degenerate:
        return 1.0
    eps0 = 1.0 / l
    worst = 0.0
    for m in m_coarse:
        params = ProbeParams(k=k, l=l, eps0=eps0, m=m, s0=s0, t0=t0)
        z, u = build_probe(params, map_spec)
        _, tz = residual_tz(map_spec, x, params, z, u, grid=grid)
        worst = max(worst, tz.sup())
    return 2.0 * worst + 1.0


def fix_m(map_spec: MapSpec, k: int, l: int, m_estimate: float,
          deriv_mag: float, max_m: int = MAX_M) -> int:
    """Smallest power-of-two m certifying the blow-up inequalities."""
    if m_estimate < 0.0:
        raise ValueError("M estimate must be nonnegative")
    m = 1
    while m <= max_m:
        root = math.sqrt(TWO_PI * m)
        if isinstance(map_spec, CirclePullback):
            ok = (1.0 / root <= 1.0 / k) and (l + m_estimate < root * deriv_mag)
        else:
            bound = max(k**2, (l + m_estimate)**2 / deriv_mag**2) / TWO_PI
            ok = m > bound
        if ok:
            return m
        m *= 2
    raise PrecisionBudgetError(
        f"required m exceeds precision budget (max {max_m})")
