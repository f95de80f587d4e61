"""The two concrete nonlinear maps and their directional derivatives.

`CirclePullback` is the local coordinate form of pulling back a 1-form on
the circle through a winding-n immersion perturbed by a periodic function:
x -> phi(n*s + x) * (n + x'). `PostComposition` post-composes unit-interval
functions with a fixed diffeomorphism: x -> phi(x).

Directional derivatives are hard-coded analytic trees (the drivers
differentiate them several more times, which a numeric limit could not
support); `gateaux_fd` is the central-difference oracle used to validate
them.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .functions import (
    PERIODIC,
    UNIT_INTERVAL,
    Affine,
    Constant,
    GridSpec,
    PrimitiveCompose,
    Product,
    SmoothFunction,
    Sum,
)
from .primitives import ScalarPrimitive

DOMAIN_MARGIN_TOL = 1e-9


class DomainViolation(Exception):
    """Raised when the base point leaves the map's open domain."""

    def __init__(self, margin: float):
        super().__init__(f"outside map domain (margin {margin:.3e})")
        self.margin = margin


@dataclass(frozen=True)
class SampledFunction:
    """Grid samples of a function on the common [0, 1] parameter range."""

    s: np.ndarray
    values: np.ndarray

    def sup(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


class MapSpec:
    """Common surface of the two map variants."""

    domain_tag: str
    cli_token: str

    def in_domain(self, x: SmoothFunction):
        raise NotImplementedError

    def apply(self, x: SmoothFunction) -> SmoothFunction:
        raise NotImplementedError

    def gateaux(self, x: SmoothFunction, u: SmoothFunction) -> SmoothFunction:
        raise NotImplementedError

    def _require_domain(self, x: SmoothFunction):
        if x.domain != self.domain_tag:
            raise ValueError(
                f"expected {self.domain_tag} function, got {x.domain}")
        margin, ok = self.in_domain(x)
        if not ok:
            raise DomainViolation(margin)


class CirclePullback(MapSpec):
    """x -> phi(n*s + x(s)) * (n + x'(s)) on 1-periodic functions."""

    domain_tag = PERIODIC
    cli_token = "ex2"

    def __init__(self, phi: ScalarPrimitive, n: int):
        if n == 0:
            raise ValueError("winding number n must be nonzero")
        if not phi.is_one_periodic:
            raise ValueError("phi must be 1-periodic for the pullback map")
        self.phi = phi
        self.n = int(n)

    def _inner(self, x: SmoothFunction):
        return Sum(Affine(float(self.n), 0.0), x.node)

    def in_domain(self, x: SmoothFunction, grid: GridSpec | None = None):
        """Grid infimum of |n + x'| with local refinement, and whether it
        clears the positivity tolerance."""
        if x.domain != self.domain_tag:
            raise ValueError("domain tag mismatch")
        dx = x.derivative()
        s = (grid or GridSpec()).points(x)
        signed = self.n + dx.evaluate(s)
        if np.any(signed == 0.0) or np.any(signed[:-1] * signed[1:] < 0.0):
            return 0.0, False  # n + x' crosses zero, so the infimum is zero
        vals = np.abs(signed)
        j = int(np.argmin(vals))
        lo, hi = s[max(j - 1, 0)], s[min(j + 1, s.size - 1)]
        margin = float(vals[j])
        if hi > lo:
            res = minimize_scalar(lambda t: (self.n + dx.evaluate(t))**2,
                                  bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-12})
            margin = min(margin, math.sqrt(float(res.fun)))
        return margin, margin > DOMAIN_MARGIN_TOL

    def apply(self, x: SmoothFunction) -> SmoothFunction:
        self._require_domain(x)
        inner = self._inner(x)
        node = Product(PrimitiveCompose(self.phi, inner),
                       Sum(Constant(float(self.n)), x.node.diff()))
        return SmoothFunction(node, PERIODIC)

    def gateaux(self, x: SmoothFunction, u: SmoothFunction) -> SmoothFunction:
        self._require_domain(x)
        inner = self._inner(x)
        term1 = Product(PrimitiveCompose(self.phi.derivative(), inner),
                        u.node,
                        Sum(Constant(float(self.n)), x.node.diff()))
        term2 = Product(PrimitiveCompose(self.phi, inner), u.node.diff())
        return SmoothFunction(Sum(term1, term2), PERIODIC)


class PostComposition(MapSpec):
    """x -> phi(x(s)) on smooth functions of the unit interval."""

    domain_tag = UNIT_INTERVAL
    cli_token = "ex4"

    def __init__(self, phi: ScalarPrimitive):
        if not phi.is_increasing_on():
            raise ValueError("phi must have positive derivative (sampled on [-10, 10])")
        self.phi = phi

    def in_domain(self, x: SmoothFunction):
        if x.domain != self.domain_tag:
            raise ValueError("domain tag mismatch")
        return float("inf"), True

    def apply(self, x: SmoothFunction) -> SmoothFunction:
        self._require_domain(x)
        return SmoothFunction(PrimitiveCompose(self.phi, x.node), UNIT_INTERVAL)

    def gateaux(self, x: SmoothFunction, u: SmoothFunction) -> SmoothFunction:
        self._require_domain(x)
        node = Product(PrimitiveCompose(self.phi.derivative(), x.node), u.node)
        return SmoothFunction(node, UNIT_INTERVAL)


def gateaux_fd(map_spec: MapSpec, x: SmoothFunction, u: SmoothFunction,
               t: float, num: int = 2049) -> SampledFunction:
    """Central-difference approximation of the directional derivative.

    Both perturbed base points must stay inside the map's domain.
    """
    if t <= 0.0:
        raise ValueError("step t must be positive")
    fp = map_spec.apply(x + t * u)
    fm = map_spec.apply(x + (-t) * u)
    if x.domain == PERIODIC:
        s = np.arange(num) / num
    else:
        s = np.linspace(0.0, 1.0, num)
    vals = (fp.evaluate(s) - fm.evaluate(s)) / (2.0 * t)
    return SampledFunction(s, vals)
