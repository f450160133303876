"""Multi-indices, empirical and reference moments, and the moment-matching test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .core import as_dataset, monomials, EmptyDatasetError

MAX_INDICES = 10**7
MAX_DOUBLE_FACTORIAL_ARG = 300


class StrictnessInfeasible(ValueError):
    """The paper-mode moment tolerance is too small to be meaningful at desk scale."""


@dataclass(frozen=True)
class StandardGaussian:
    dim: int


@dataclass(frozen=True)
class UniformHypercube:
    dim: int


@dataclass(frozen=True, eq=False)
class EmpiricalReference:
    X: np.ndarray

    @property
    def dim(self) -> int:
        return self.X.shape[1]


ReferenceMarginal = Union[StandardGaussian, UniformHypercube, EmpiricalReference]


def count_multi_indices(d: int, k: int) -> int:
    return math.comb(d + k, k)


def _compositions(total: int, d: int):
    # descending lexicographic order, e.g. (2,0),(1,1),(0,2)
    if d == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, d - 1):
            yield (first, *rest)


@lru_cache(maxsize=256)
def _indices(d: int, k: int) -> np.ndarray:
    rows = [c for t in range(k + 1) for c in _compositions(t, d)]
    arr = np.array(rows, dtype=np.int64).reshape(-1, d)
    arr.setflags(write=False)
    return arr


def enumerate_multi_indices(d: int, k: int) -> np.ndarray:
    """All alpha in N^d with |alpha|_1 <= k in graded-lexicographic order.

    Returned as a read-only (C(d+k, k), d) integer array.
    """
    if d < 1 or k < 0:
        raise ValueError("need d >= 1 and k >= 0")
    if count_multi_indices(d, k) > MAX_INDICES:
        raise OverflowError(f"C({d}+{k}, {k}) multi-indices exceeds {MAX_INDICES}")
    return _indices(int(d), int(k))


def empirical_moments(X, alphas) -> np.ndarray:
    X = as_dataset(X)
    if len(X) == 0:
        raise EmptyDatasetError("moments of an empty dataset")
    alphas = np.asarray(alphas, dtype=np.int64).reshape(-1, X.shape[1])
    out = np.empty(len(alphas))
    # chunk over points to bound memory for large n * m
    chunk = max(1, 2_000_000 // max(1, len(alphas)))
    acc = np.zeros(len(alphas))
    for start in range(0, len(X), chunk):
        acc += monomials(X[start:start + chunk], alphas).sum(axis=0)
    out[:] = acc / len(X)
    return out


def empirical_moment(X, alpha) -> float:
    return float(empirical_moments(X, np.asarray(alpha).reshape(1, -1))[0])


def double_factorial(n: int) -> float:
    """(n)!! computed iteratively; (-1)!! = 0!! = 1."""
    if n > MAX_DOUBLE_FACTORIAL_ARG:
        raise OverflowError(f"double factorial argument {n} exceeds {MAX_DOUBLE_FACTORIAL_ARG}")
    out = 1.0
    while n > 1:
        out *= n
        n -= 2
    return out


def gaussian_moment_1d(a: int) -> float:
    """E[z^a] for z ~ N(0, 1)."""
    return double_factorial(a - 1) if a % 2 == 0 else 0.0


def reference_moments(D: ReferenceMarginal, alphas) -> np.ndarray:
    alphas = np.asarray(alphas, dtype=np.int64).reshape(-1, D.dim)
    if isinstance(D, EmpiricalReference):
        return empirical_moments(D.X, alphas)
    if isinstance(D, UniformHypercube):
        return np.all(alphas % 2 == 0, axis=1).astype(float)
    if isinstance(D, StandardGaussian):
        top = int(alphas.max(initial=0))
        table = np.array([gaussian_moment_1d(a) for a in range(top + 1)])
        return np.prod(table[alphas], axis=1)
    raise TypeError(f"unsupported reference marginal {D!r}")


def reference_moment(D: ReferenceMarginal, alpha) -> float:
    return float(reference_moments(D, np.asarray(alpha).reshape(1, -1))[0])


@dataclass(frozen=True, eq=False)
class MomentReport:
    alphas: np.ndarray
    empirical: np.ndarray
    reference: np.ndarray

    @property
    def gaps(self) -> np.ndarray:
        return np.abs(self.empirical - self.reference)

    @property
    def worst_index(self) -> int:
        return int(np.argmax(self.gaps)) if len(self.gaps) else 0

    @property
    def worst_gap(self) -> float:
        return float(self.gaps.max(initial=0.0))

    @property
    def worst_alpha(self) -> tuple[int, ...]:
        return tuple(int(a) for a in self.alphas[self.worst_index])

    def to_json(self) -> list[dict]:
        return [
            {"alpha": [int(v) for v in a], "empirical": float(e), "reference": float(r),
             "gap": float(abs(e - r))}
            for a, e, r in zip(self.alphas, self.empirical, self.reference)
        ]


def moment_report(X, D: ReferenceMarginal, degree: int) -> MomentReport:
    X = as_dataset(X, D.dim)
    alphas = enumerate_multi_indices(D.dim, degree)
    return MomentReport(alphas, empirical_moments(X, alphas), reference_moments(D, alphas))


def moment_match_test(X, D: ReferenceMarginal, degree: int, delta: float) -> tuple[bool, MomentReport]:
    """Pass iff every moment of total degree <= ``degree`` is within ``delta`` of the reference."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    report = moment_report(X, D, degree)
    return bool(report.worst_gap <= delta), report


def default_delta(eps_prime: float, B: float, d: int, k: int, sample_budget: float = 1e12) -> float:
    """Moment tolerance eps' / (B^2 d^(4k)) used by the moment-matching learner.

    Raises StrictnessInfeasible when the tolerance is below what
    ``sample_budget`` test points could resolve (about 1/sqrt(budget)), which
    also covers underflow.
    """
    if min(eps_prime, B, d) <= 0 or k < 0:
        raise ValueError("all arguments must be positive")
    log_val = math.log(eps_prime) - 2 * math.log(B) - 4 * k * math.log(d)
    floor = max(1e-300, 1.0 / math.sqrt(sample_budget))
    if log_val < math.log(floor):
        raise StrictnessInfeasible(
            f"delta = {eps_prime}/({B}^2 * {d}^{4 * k}) = {math.exp(log_val):.3g} is below the "
            f"resolvable floor {floor:.3g}")
    return eps_prime / (B * B * float(d) ** (4 * k))
