"""Seeded synthetic worlds: marginals, ground-truth concepts, label models, and the grid-lambda oracle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    Halfspace,
    Hypothesis,
    LabeledDataset,
    as_dataset,
    unit,
)

REJECTION_CAP = 10**7


class RejectionCapExceeded(RuntimeError):
    pass


class NotOnCube(ValueError):
    pass


# ---------------------------------------------------------------------------
# marginals


class Marginal:
    dim: int

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Gaussian(Marginal):
    dim: int

    def sample(self, n, rng):
        return rng.standard_normal((n, self.dim))


@dataclass(frozen=True)
class Cube(Marginal):
    """Uniform on {-1, +1}^d; ``exhaustive`` lists every vertex n / 2^d times."""

    dim: int
    exhaustive: bool = False

    def sample(self, n, rng):
        if self.exhaustive:
            verts = np.array(list(itertools.product((-1.0, 1.0), repeat=self.dim)))[:, ::-1]
            reps, rem = divmod(n, len(verts))
            if rem:
                raise ValueError(f"exhaustive mode needs n divisible by {len(verts)}")
            return np.tile(verts, (reps, 1))
        return rng.choice(np.array([-1.0, 1.0]), size=(n, self.dim))


@dataclass(frozen=True)
class LaplaceProduct(Marginal):
    """Product of Laplace coordinates scaled to unit variance (isotropic log-concave)."""

    dim: int

    def sample(self, n, rng):
        return rng.laplace(0.0, 1 / math.sqrt(2), size=(n, self.dim))


@dataclass(frozen=True)
class UniformBall(Marginal):
    """Uniform on the ball of radius sqrt(d + 2), which has identity covariance."""

    dim: int

    def sample(self, n, rng):
        g = rng.standard_normal((n, self.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = rng.uniform(size=(n, 1)) ** (1 / self.dim)
        return g * r * math.sqrt(self.dim + 2)


@dataclass(frozen=True)
class StudentTProduct(Marginal):
    """Product of Student-t(nu) coordinates, optionally scaled to unit variance (nu > 2)."""

    dim: int
    nu: float = 3.0
    standardized: bool = True

    def sample(self, n, rng):
        x = rng.standard_t(self.nu, size=(n, self.dim))
        if self.standardized:
            if self.nu <= 2:
                raise ValueError("standardizing needs nu > 2")
            x /= math.sqrt(self.nu / (self.nu - 2))
        return x


@dataclass(frozen=True, eq=False)
class PointMass(Marginal):
    x: tuple

    @property
    def dim(self):
        return len(self.x)

    def sample(self, n, rng):
        return np.tile(np.asarray(self.x, dtype=float), (n, 1))


@dataclass(frozen=True, eq=False)
class MeanShift(Marginal):
    base: Marginal
    mu: tuple

    @property
    def dim(self):
        return self.base.dim

    def sample(self, n, rng):
        return self.base.sample(n, rng) + np.asarray(self.mu, dtype=float)


@dataclass(frozen=True, eq=False)
class CovScale(Marginal):
    base: Marginal
    diag: tuple

    @property
    def dim(self):
        return self.base.dim

    def sample(self, n, rng):
        return self.base.sample(n, rng) * np.asarray(self.diag, dtype=float)


@dataclass(frozen=True, eq=False)
class BandConditioned(Marginal):
    """``base`` conditioned on |v.x| <= width * |x|, by rejection sampling."""

    base: Marginal
    v: tuple
    width: float

    @property
    def dim(self):
        return self.base.dim

    def sample(self, n, rng):
        v = unit(self.v)
        kept, attempts = [], 0
        total = 0
        batch = max(1024, n)
        while total < n:
            if attempts >= REJECTION_CAP:
                raise RejectionCapExceeded(f"fewer than {n} acceptances in {REJECTION_CAP} draws")
            m = min(batch, REJECTION_CAP - attempts)
            X = self.base.sample(m, rng)
            attempts += m
            ok = np.abs(X @ v) <= self.width * np.linalg.norm(X, axis=1)
            kept.append(X[ok])
            total += int(ok.sum())
            batch = min(4 * batch, 1 << 22)
        return np.concatenate(kept)[:n]


@dataclass(frozen=True, eq=False)
class Mixture(Marginal):
    components: tuple  # of (weight, Marginal)

    def __post_init__(self):
        w = np.array([c[0] for c in self.components], dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1) > 1e-9:
            raise ValueError("mixture weights must be non-negative and sum to 1")
        if len({c[1].dim for c in self.components}) != 1:
            raise ValueError("mixture components disagree on dimension")

    @property
    def dim(self):
        return self.components[0][1].dim

    def sample(self, n, rng):
        w = np.array([c[0] for c in self.components], dtype=float)
        counts = rng.multinomial(n, w / w.sum())
        parts = [comp.sample(int(c), rng) for (_, comp), c in zip(self.components, counts) if c]
        X = np.concatenate(parts)
        return X[rng.permutation(n)]


def sample_marginal(spec: Marginal, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be at least 1")
    return as_dataset(spec.sample(n, rng), spec.dim)


# ---------------------------------------------------------------------------
# concepts


def _require_cube(X: np.ndarray) -> None:
    if not np.all(np.abs(X) == 1.0):
        raise NotOnCube("decision trees are defined on {-1, +1}^d only")


@dataclass(frozen=True, eq=False)
class DecisionTree(Hypothesis):
    """Tree over +-1 coordinates.

    ``node`` is either a leaf label (+1/-1) or a triple
    (variable, subtree for x_var = -1, subtree for x_var = +1).
    """

    node: object
    dim: int

    def predict(self, X):
        X = self._check(X)
        _require_cube(X)
        return self._eval(self.node, X)

    def _eval(self, node, X):
        if not isinstance(node, tuple):
            return np.full(len(X), int(node), dtype=np.int8)
        var, lo, hi = node
        return np.where(X[:, var] > 0, self._eval(hi, X), self._eval(lo, X)).astype(np.int8)

    def depth(self, node=None) -> int:
        node = self.node if node is None else node
        if not isinstance(node, tuple):
            return 0
        return 1 + max(self.depth(node[1]), self.depth(node[2]))

    def to_json(self):
        def enc(node):
            if not isinstance(node, tuple):
                return int(node)
            return [int(node[0]), enc(node[1]), enc(node[2])]
        return {"type": "tree", "dim": self.dim, "node": enc(self.node)}


@dataclass(frozen=True, eq=False)
class IntersectionOfHalfspaces(Hypothesis):
    """+1 iff every member halfspace outputs +1."""

    members: tuple

    @property
    def dim(self):
        return self.members[0].dim

    def predict(self, X):
        X = self._check(X)
        out = np.ones(len(X), dtype=bool)
        for h in self.members:
            out &= h.predict(X) == 1
        return np.where(out, 1, -1).astype(np.int8)

    def to_json(self):
        return {"type": "intersection", "members": [h.to_json() for h in self.members]}


def tree_from_json(obj) -> DecisionTree:
    def dec(node):
        if isinstance(node, list):
            return (int(node[0]), dec(node[1]), dec(node[2]))
        return int(node)
    return DecisionTree(dec(obj["node"]), int(obj["dim"]))


# ---------------------------------------------------------------------------
# label models


@dataclass(frozen=True)
class Realizable:
    pass


@dataclass(frozen=True)
class RandomClassificationNoise:
    eta: float

    def __post_init__(self):
        if not 0 <= self.eta < 0.5:
            raise ValueError("noise rate must lie in [0, 1/2)")


@dataclass(frozen=True)
class FlipAll:
    pass


LabelModel = Realizable | RandomClassificationNoise | FlipAll


def label(concept: Hypothesis, model, X, rng: np.random.Generator) -> LabeledDataset:
    X = as_dataset(X)
    y = concept.predict(X).astype(np.int8)
    if isinstance(model, RandomClassificationNoise):
        flips = rng.uniform(size=len(y)) < model.eta
        y = np.where(flips, -y, y)
    elif isinstance(model, FlipAll):
        y = -y
    elif not isinstance(model, Realizable):
        raise TypeError(f"unknown label model {model!r}")
    return LabeledDataset(X, y)


# ---------------------------------------------------------------------------
# grid lambda


def _errors_on(grid: Sequence[Hypothesis], S: LabeledDataset) -> np.ndarray:
    Xu, inv = np.unique(S.X, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    pos = np.bincount(inv, weights=(S.y == 1), minlength=len(Xu))
    neg = np.bincount(inv, weights=(S.y == -1), minlength=len(Xu))
    out = np.empty(len(grid))
    for i, h in enumerate(grid):
        pred = h.predict(Xu)
        out[i] = np.where(pred == 1, neg, pos).sum() / len(S)
    return out


def lambda_oracle(grid: Sequence[Hypothesis], S_train: LabeledDataset, S_test: LabeledDataset) -> float:
    """min over the grid of train error + test error (a grid-lambda, >= the true lambda)."""
    if len(grid) == 0:
        raise ValueError("empty concept grid")
    return float(np.min(_errors_on(grid, S_train) + _errors_on(grid, S_test)))


def with_negations(grid: Sequence[Hypothesis]) -> list[Hypothesis]:
    return list(grid) + [h.negate() for h in grid]


def trees_up_to_depth2(d: int, max_vars: int = 5) -> list[DecisionTree]:
    """Every decision tree of depth <= 2 over the first min(d, max_vars) coordinates."""
    vars_ = range(min(d, max_vars))
    leaves = [-1, 1]
    depth1 = [(v, a, b) for v in vars_ for a in leaves for b in leaves]
    sub = leaves + depth1
    nodes = leaves + depth1 + [(v, a, b) for v in vars_ for a in sub for b in sub
                               if isinstance(a, tuple) or isinstance(b, tuple)]
    return [DecisionTree(n, d) for n in nodes]


def homogeneous_halfspace_grid_2d(n_dirs: int = 720) -> list[Halfspace]:
    t = 2 * math.pi * np.arange(n_dirs) / n_dirs
    return [Halfspace(np.array([math.cos(a), math.sin(a)]), 0.0) for a in t]


def halfspace_grid_2d(n_dirs: int = 720, n_offsets: int = 100, max_offset: float = 3.0) -> list[Halfspace]:
    t = 2 * math.pi * np.arange(n_dirs) / n_dirs
    offs = np.linspace(-max_offset, max_offset, n_offsets)
    return [Halfspace(np.array([math.cos(a), math.sin(a)]), o) for a in t for o in offs]

