"""Independent brute-force validators and desk-scale learning-theory metrics."""

from __future__ import annotations

import itertools
import math
from typing import Callable, Sequence

import numpy as np

from .core import Hypothesis, as_dataset
from .scenarios import Marginal, sample_marginal

MAX_CUBE_DIM = 16
MAX_DISCREPANCY_POINTS = 5000


def cube_vertices(d: int) -> np.ndarray:
    if d > MAX_CUBE_DIM:
        raise ValueError(f"cube enumeration limited to d <= {MAX_CUBE_DIM}")
    return np.array(list(itertools.product((-1.0, 1.0), repeat=d)))


def exact_cube_expectation(g: Callable[[np.ndarray], np.ndarray], d: int) -> float:
    """2^-d * sum of g over all vertices of {-1, +1}^d; g maps (n, d) -> (n,)."""
    return float(np.mean(g(cube_vertices(d))))


def mc_estimate(g: Callable[[np.ndarray], np.ndarray], spec: Marginal, n: int, delta: float,
                rng: np.random.Generator, bound: float | None = None,
                lower: float | None = None) -> tuple[float, float]:
    """Monte-Carlo mean of g with a Hoeffding half-width (bound - lower) * sqrt(ln(2/delta) / 2n).

    g must take values in [lower, bound]; ``lower`` defaults to -bound, so
    declaring only |g| <= bound gives the conservative range 2*bound.
    """
    if bound is None:
        raise ValueError("mc_estimate needs a declared bound on |g|")
    lower = -bound if lower is None else lower
    values = np.asarray(g(sample_marginal(spec, n, rng)), dtype=float)
    if np.any(values > bound) or np.any(values < lower):
        raise ValueError("g left its declared range")
    half = (bound - lower) * math.sqrt(math.log(2 / delta) / (2 * n))
    return float(values.mean()), half


# ---------------------------------------------------------------------------
# discrepancy distance for homogeneous halfspaces in the plane


def _arrangement(X: np.ndarray, tol: float):
    """Critical normal angles and, per point, the cyclic position range where it is labeled +1.

    Positions alternate between critical angles (even) and the open arcs
    after them (odd). A point is +1 for normals within pi/2 of its own angle,
    a closed arc, which becomes the cyclic position interval [2*enter, 2*leave].
    """
    phi = np.arctan2(X[:, 1], X[:, 0])
    two_pi = 2 * math.pi
    enter = np.mod(phi - math.pi / 2, two_pi)
    leave = np.mod(phi + math.pi / 2, two_pi)
    raw = np.sort(np.concatenate((enter, leave)))
    crit = [raw[0]]
    for c in raw[1:]:
        if c - crit[-1] > tol:
            crit.append(c)
    crit = np.array(crit)
    if len(crit) > 1 and crit[0] + two_pi - crit[-1] <= tol:
        crit = crit[:-1]

    K = len(crit)

    def circ(x):
        return np.abs(np.mod(x + math.pi, two_pi) - math.pi)

    def locate(a):
        idx = np.searchsorted(crit, a)
        hi, lo = idx % K, (idx - 1) % K
        return np.where(circ(crit[hi] - a) <= circ(crit[lo] - a), hi, lo)

    return crit, locate(enter), locate(leave)


def _coverage(starts, ends, weights, npos):
    """sum_i weights_i * [p in cyclic interval [starts_i, ends_i]] for every position p."""
    wrap = ends < starts
    diff = (np.bincount(starts, weights, npos + 1)
            - np.bincount(ends + 1, weights, npos + 1)
            + np.bincount(np.zeros(int(wrap.sum()), dtype=np.int64), weights[wrap], npos + 1)
            - np.bincount(np.full(int(wrap.sum()), npos), weights[wrap], npos + 1))
    return np.cumsum(diff)[:npos]


def discrepancy_2d_homogeneous(X1, X2, tol: float = 1e-12) -> float:
    """sup over homogeneous halfspaces f, f' of |Pr_X1[f != f'] - Pr_X2[f != f']| in R^2.

    Exact over the arrangement of critical angles; O(m^2) for m total points.
    Points at the origin are labeled +1 by every halfspace and never count.
    """
    X1, X2 = as_dataset(X1, 2), as_dataset(X2, 2)
    if len(X1) + len(X2) > MAX_DISCREPANCY_POINTS:
        raise ValueError(f"at most {MAX_DISCREPANCY_POINTS} points in total")
    # integer weights n2 and -n1 keep every sum exact; rescaled by n1*n2 at the end
    n1, n2 = len(X1), len(X2)
    w = np.concatenate((np.full(n1, float(n2)), np.full(n2, -float(n1))))
    X = np.concatenate((X1, X2))
    keep = np.hypot(X[:, 0], X[:, 1]) > 0
    X, w = X[keep], w[keep]
    if len(X) == 0:
        return 0.0
    crit, enter, leave = _arrangement(X, tol)
    npos = 2 * len(crit)
    starts, ends = 2 * enter, 2 * leave
    best = 0.0
    for a in range(npos):
        in_a = np.where(starts <= ends, (starts <= a) & (a <= ends), (a >= starts) | (a <= ends))
        g = w * np.where(in_a, 1.0, -1.0)
        # sum_i g_i f_b(x_i) = 2 * coverage(b) - sum(g)
        corr = 2 * _coverage(starts, ends, g, npos) - g.sum()
        # Pr1[f != f'] - Pr2[f != f'] = (sum(w) - sum_i w_i f_a f_b) / 2
        best = max(best, float(np.abs(w.sum() - corr).max()))
    return min(best / (2 * n1 * n2), 1.0)


def discrepancy_grid_2d(X1, X2, n_angles: int = 1440) -> float:
    """Brute-force discrepancy over a uniform grid of normal angles (a lower bound)."""
    X1, X2 = as_dataset(X1, 2), as_dataset(X2, 2)
    t = 2 * math.pi * np.arange(n_angles) / n_angles
    V = np.stack((np.cos(t), np.sin(t)), axis=1)
    return _grid_discrepancy(np.where(X1 @ V.T >= 0, 1.0, -1.0), np.where(X2 @ V.T >= 0, 1.0, -1.0))


def discrepancy_lattice_2d(deg1, r1, deg2, r2, steps_per_degree: int = 4) -> float:
    """Exact-arithmetic grid brute force for points at integer-degree polar angles.

    Normals range over multiples of 1/steps_per_degree degrees; a point at
    angle a is labeled +1 by normal b iff the cyclic angular distance is at
    most 90 degrees, decided in integers. Radii must be positive.
    """
    full = 360 * steps_per_degree
    b = np.arange(full)

    def preds(deg):
        a = (np.asarray(deg, dtype=np.int64) * steps_per_degree) % full
        diff = np.abs((b[None, :] - a[:, None]) % full)
        dist = np.minimum(diff, full - diff)
        return np.where(dist <= 90 * steps_per_degree, 1.0, -1.0)

    for r in (r1, r2):
        if np.any(np.asarray(r) <= 0):
            raise ValueError("lattice radii must be positive")
    return _grid_discrepancy(preds(deg1), preds(deg2))


def _grid_discrepancy(P1: np.ndarray, P2: np.ndarray) -> float:
    # Pr_X[f_a != f_b] = (1 - mean_x f_a f_b) / 2
    M1 = P1.T @ P1 / len(P1)
    M2 = P2.T @ P2 / len(P2)
    return float(np.abs(M1 - M2).max() / 2)


# ---------------------------------------------------------------------------
# Rademacher complexity


def rademacher_estimate(X, grid: Sequence[Hypothesis], trials: int, rng: np.random.Generator) -> float:
    """Average over sign vectors of (2/m) max over the grid of sum_j sigma_j f(x_j).

    The sup is taken over a finite grid only, so this estimates the empirical
    Rademacher complexity from below.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    X = as_dataset(X)
    m = len(X)
    P = np.stack([h.predict(X) for h in grid]).astype(float)  # (|grid|, m)
    sigma = rng.choice(np.array([-1.0, 1.0]), size=(trials, m))
    return float(np.mean((2 / m) * (sigma @ P.T).max(axis=1)))
