import math

import numpy as np

from tameprobe.functions import (
    PERIODIC,
    Constant,
    SinusoidProbe,
    SmoothFunction,
    Sum,
)

TWO_PI = 2.0 * math.pi


def random_small_function(rng, domain=PERIODIC, n_terms=2, scale=0.3,
                          max_freq=4, with_const=True):
    """Random low-frequency tree with first derivative bounded by ~scale.

    The amplitude budget keeps perturbed base points inside the pullback
    map's domain for winding number 1.
    """
    nodes = []
    for _ in range(n_terms):
        f = int(rng.integers(1, max_freq + 1))
        amp = scale * rng.uniform(0.2, 1.0) / (TWO_PI * f * n_terms)
        nodes.append(SinusoidProbe(amp, float(f), float(rng.uniform(0.0, 1.0))))
    if with_const:
        nodes.append(Constant(float(rng.uniform(-scale, scale))))
    return SmoothFunction(Sum(*nodes), domain)


_STENCILS = {
    1: ([1, -1], [1, -1], 2.0),
    2: ([1, 0, -1], [1, -2, 1], 1.0),
    3: ([2, 1, -1, -2], [1, -2, 2, -1], 2.0),
    4: ([2, 1, 0, -1, -2], [1, -4, 6, -4, 1], 1.0),
}


def fd_derivative(fn, s, order, h):
    """Central-difference derivative with two Richardson steps.

    Second-order stencils at steps h, h/2, h/4 extrapolated to sixth order.
    """
    offsets, weights, denom = _STENCILS[order]

    def estimate(step):
        total = 0.0
        for o, w in zip(offsets, weights):
            total += w * fn(s + o * step)
        return total / (denom * step**order)

    def refine(step):
        return (4.0 * estimate(step / 2.0) - estimate(step)) / 3.0

    return (16.0 * refine(h / 2.0) - refine(h)) / 15.0
