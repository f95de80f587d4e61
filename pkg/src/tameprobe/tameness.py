"""Metric P-norms built from the graded seminorms, and the estimate checker.

A P-norm here is a truncated weighted sum over the seminorm ladder. The
default "bounded" transform sums 2^(-i) * p_i / (1 + p_i), which satisfies
the metric axioms (symmetry, subadditivity, vanishing at zero); the
"linear" transform sums w_i * p_i. Truncation makes this a pseudo-metric
surrogate for the full graded metric: seminorms above the truncation level
are ignored.

`check_tame_estimate` tests the uniform estimate
rho2(df(x+z, u) - df(x, u)) <= rho1(u) over a supplied probe family,
restricted to perturbations with rho1(z) <= 1. A perturbed base point that
leaves the map's domain counts as a violation of the membership clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .functions import GridSpec, SmoothFunction, seminorm_profile
from .maps import MapSpec

TRANSFORMS = ("bounded", "linear")


@dataclass(frozen=True)
class PNormSpec:
    truncation: int = 12
    transform: str = "bounded"
    weights: tuple | None = None

    def __post_init__(self):
        if self.truncation < 0:
            raise ValueError("truncation must be nonnegative")
        if self.transform not in TRANSFORMS:
            raise ValueError(f"transform must be one of {TRANSFORMS}")
        if self.weights is not None:
            w = tuple(float(v) for v in self.weights)
            if len(w) != self.truncation + 1:
                raise ValueError("need truncation+1 weights")
            if any(v <= 0.0 for v in w):
                raise ValueError("weights must be positive")
            object.__setattr__(self, "weights", w)

    def weight(self, i: int) -> float:
        if self.weights is not None:
            return self.weights[i]
        return 2.0**(-i)

    def to_dict(self) -> dict:
        return {"truncation": self.truncation, "transform": self.transform,
                "weights": list(self.weights) if self.weights else None}

    @classmethod
    def from_dict(cls, d: dict) -> "PNormSpec":
        w = d.get("weights")
        return cls(truncation=int(d.get("truncation", 12)),
                   transform=d.get("transform", "bounded"),
                   weights=tuple(w) if w else None)


def pnorm_eval(spec: PNormSpec, x: SmoothFunction,
               grid: GridSpec | None = None) -> float:
    p = seminorm_profile(x, spec.truncation, grid)
    total = 0.0
    for i in range(spec.truncation + 1):
        if spec.transform == "bounded":
            total += spec.weight(i) * p[i] / (1.0 + p[i])
        else:
            total += spec.weight(i) * p[i]
    return total


@dataclass
class TameCheckReport:
    satisfied: bool
    witnesses: list = field(default_factory=list)   # (z, u, lhs, rhs)
    samples_checked: int = 0
    skipped_large_z: int = 0
    domain_exits: list = field(default_factory=list)  # (z, margin)


def check_tame_estimate(map_spec: MapSpec, x: SmoothFunction,
                        rho1: PNormSpec, rho2: PNormSpec,
                        probes, grid: GridSpec | None = None) -> TameCheckReport:
    """Evaluate the uniform estimate over a probe family.

    ``probes`` is a nonempty sequence of (z, u) pairs. Pairs with
    rho1(z) > 1 are outside the quantifier's range and only counted.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("probe list must be nonempty")
    _, ok = map_spec.in_domain(x)
    if not ok:
        raise ValueError("base point x is outside the map's domain")
    report = TameCheckReport(satisfied=True)
    for z, u in probes:
        if pnorm_eval(rho1, z, grid) > 1.0:
            report.skipped_large_z += 1
            continue
        margin, ok = map_spec.in_domain(x + z)
        if not ok:
            report.domain_exits.append((z, margin))
            report.satisfied = False
            continue
        v = map_spec.gateaux(x + z, u) - map_spec.gateaux(x, u)
        lhs = pnorm_eval(rho2, v, grid)
        rhs = pnorm_eval(rho1, u, grid)
        report.samples_checked += 1
        if lhs > rhs:
            report.witnesses.append((z, u, lhs, rhs))
            report.satisfied = False
    return report
