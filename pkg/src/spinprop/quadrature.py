"""Adaptive quadrature shared by angle reconstruction and the two-spin phases."""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

ABS_TOL = 1e-12
REL_TOL = 1e-12


def integrate(f, a: float, b: float, breakpoints=()) -> float:
    """Integral of a scalar function over [a, b] (either orientation).

    ``breakpoints`` lists points where ``f`` has a kink; intervals are split
    there so the adaptive rule never straddles one.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    cuts = [a] + sorted(x for x in breakpoints if a < x < b) + [b]
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, _ = quad(f, lo, hi, epsabs=ABS_TOL, epsrel=REL_TOL, limit=200)
        total += val
    return sign * total


def cumulative(f, t_ref: float, times, breakpoints=()) -> np.ndarray:
    """``int_{t_ref}^{t} f`` for every ``t`` in ``times``.

    Pieces between consecutive sorted nodes are integrated once and summed, so
    a dense grid costs one pass.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    nodes = np.unique(np.concatenate([times, [t_ref]]))
    pieces = np.array(
        [integrate(f, lo, hi, breakpoints) for lo, hi in zip(nodes[:-1], nodes[1:])]
    )
    running = np.concatenate([[0.0], np.cumsum(pieces)])
    offset = running[np.searchsorted(nodes, t_ref)]
    return running[np.searchsorted(nodes, times)] - offset
