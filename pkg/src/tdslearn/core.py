"""Shared domain types: datasets, polynomials, hypotheses, outcomes, constants, RNG."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

UNIT_TOL = 1e-9


class DimensionError(ValueError):
    pass


class EmptyDatasetError(ValueError):
    pass


def sign(values: np.ndarray) -> np.ndarray:
    """Elementwise sign with sign(0) = +1, returned as int8 in {-1, +1}."""
    return np.where(np.asarray(values) >= 0, 1, -1).astype(np.int8)


def as_dataset(X, dim: int | None = None) -> np.ndarray:
    """Validate and return an unlabeled dataset as a float (n, d) array."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if dim is None or arr.size == dim else arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise DimensionError(f"expected an (n, d) array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionError(f"expected dimension {dim}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("dataset contains NaN or infinite entries")
    return arr


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Points X of shape (n, d) with labels y in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = as_dataset(self.X)
        y = np.asarray(self.y).reshape(-1).astype(np.int8)
        if len(y) != len(X):
            raise ValueError(f"{len(X)} points but {len(y)} labels")
        if not np.all((y == 1) | (y == -1)):
            raise ValueError("labels must be -1 or +1")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return len(self.y)

    def subset(self, idx) -> "LabeledDataset":
        return LabeledDataset(self.X[idx], self.y[idx])


# ---------------------------------------------------------------------------
# polynomials


def monomials(X: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """Evaluate x^alpha for every row of X and every row of alphas -> (n, m)."""
    X = np.asarray(X, dtype=float)
    alphas = np.asarray(alphas, dtype=np.int64).reshape(-1, X.shape[1])
    n, d = X.shape
    if len(alphas) == 0:
        return np.zeros((n, 0))
    top = int(alphas.max(initial=0))
    powers = np.ones((top + 1, n, d))
    for a in range(1, top + 1):
        powers[a] = powers[a - 1] * X
    out = np.ones((n, len(alphas)))
    for j in range(d):
        out *= powers[alphas[:, j], :, j].T
    return out


@dataclass(frozen=True, eq=False)
class SparsePolynomial:
    """Real polynomial in the monomial basis with declared degree and coefficient bounds.

    ``alphas`` is an (m, d) integer array of exponent vectors and ``coefs`` the
    matching coefficients. Absent monomials have coefficient 0.
    """

    dim: int
    alphas: np.ndarray
    coefs: np.ndarray
    degree: int
    bound: float = math.inf

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=np.int64).reshape(-1, self.dim)
        coefs = np.asarray(self.coefs, dtype=float).reshape(-1)
        if len(alphas) != len(coefs):
            raise ValueError("alphas and coefs differ in length")
        if np.any(alphas < 0):
            raise ValueError("exponents must be non-negative")
        if len(alphas) and alphas.sum(axis=1).max() > self.degree:
            raise ValueError(f"monomial exceeds declared degree {self.degree}")
        if np.any(np.abs(coefs) > self.bound * (1 + 1e-12)):
            raise ValueError(f"coefficient exceeds declared bound {self.bound}")
        alphas.setflags(write=False)
        coefs.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "coefs", coefs)

    @classmethod
    def from_terms(cls, dim: int, terms: Mapping[Sequence[int], float], degree: int | None = None,
                   bound: float = math.inf) -> "SparsePolynomial":
        keys = [tuple(int(a) for a in k) for k in terms]
        alphas = np.array(keys, dtype=np.int64).reshape(-1, dim)
        if degree is None:
            degree = int(alphas.sum(axis=1).max(initial=0))
        return cls(dim, alphas, np.array(list(terms.values()), dtype=float), degree, bound)

    def terms(self) -> dict[tuple[int, ...], float]:
        out: dict[tuple[int, ...], float] = {}
        for a, c in zip(self.alphas, self.coefs):
            key = tuple(int(v) for v in a)
            out[key] = out.get(key, 0.0) + float(c)
        return out

    def __call__(self, X) -> np.ndarray:
        X = as_dataset(X, self.dim)
        return monomials(X, self.alphas) @ self.coefs

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if other.dim != self.dim:
            raise DimensionError("polynomials differ in dimension")
        terms = self.terms()
        for k, c in other.terms().items():
            terms[k] = terms.get(k, 0.0) - c
        return SparsePolynomial.from_terms(self.dim, terms, max(self.degree, other.degree))

    def squared(self) -> "SparsePolynomial":
        """Expand p**2 into monomials."""
        a, c = self.alphas, self.coefs
        if len(a) * len(a) > 10**7:
            raise OverflowError("expansion exceeds 10^7 monomials")
        prod_alpha = (a[:, None, :] + a[None, :, :]).reshape(-1, self.dim)
        prod_coef = (c[:, None] * c[None, :]).reshape(-1)
        uniq, inv = np.unique(prod_alpha, axis=0, return_inverse=True)
        coefs = np.zeros(len(uniq))
        np.add.at(coefs, inv.reshape(-1), prod_coef)
        return SparsePolynomial(self.dim, uniq, coefs, 2 * self.degree)

    def max_abs_coef(self) -> float:
        return float(np.max(np.abs(self.coefs), initial=0.0))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "terms": [{"alpha": [int(v) for v in a], "coef": float(c)}
                      for a, c in zip(self.alphas, self.coefs)],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SparsePolynomial":
        terms = {tuple(t["alpha"]): t["coef"] for t in obj["terms"]}
        return cls.from_terms(int(obj["dim"]), terms, int(obj["degree"]))


# ---------------------------------------------------------------------------
# hypotheses


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("cannot normalize a zero or non-finite vector")
    if abs(norm - 1.0) <= 4 * np.finfo(float).eps:
        return v.copy()  # keeps normalization idempotent
    return v / norm


class Hypothesis:
    """Base class. Subclasses implement ``predict`` on an (n, d) array."""

    dim: int | None = None

    def predict(self, X) -> np.ndarray:
        raise NotImplementedError

    def negate(self) -> "Hypothesis":
        return Negation(self)

    def _check(self, X) -> np.ndarray:
        return as_dataset(X, self.dim)


@dataclass(frozen=True, eq=False)
class Constant(Hypothesis):
    b: int
    dim: int | None = None

    def __post_init__(self):
        if self.b not in (-1, 1):
            raise ValueError("constant label must be -1 or +1")

    def predict(self, X) -> np.ndarray:
        X = self._check(X)
        return np.full(len(X), self.b, dtype=np.int8)

    def negate(self) -> "Constant":
        return Constant(-self.b, self.dim)

    def to_json(self) -> dict:
        return {"type": "constant", "b": int(self.b)}


@dataclass(frozen=True, eq=False)
class Halfspace(Hypothesis):
    """x -> sign(v.x - tau); v is renormalized to unit length on construction."""

    v: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        v = unit(self.v)
        v.setflags(write=False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "tau", float(self.tau))

    @property
    def dim(self) -> int:
        return len(self.v)

    def margin(self, X) -> np.ndarray:
        return self._check(X) @ self.v - self.tau

    def predict(self, X) -> np.ndarray:
        return sign(self.margin(X))

    def to_json(self) -> dict:
        return {"type": "halfspace", "v": [float(a) for a in self.v], "tau": self.tau}


@dataclass(frozen=True, eq=False)
class PolySign(Hypothesis):
    poly: SparsePolynomial

    @property
    def dim(self) -> int:
        return self.poly.dim

    def predict(self, X) -> np.ndarray:
        return sign(self.poly(self._check(X)))

    def to_json(self) -> dict:
        return {"type": "polysign", "poly": self.poly.to_json()}


@dataclass(frozen=True, eq=False)
class Majority(Hypothesis):
    members: tuple

    def __post_init__(self):
        members = tuple(self.members)
        if len(members) % 2 == 0:
            raise ValueError("majority vote needs an odd number of members")
        object.__setattr__(self, "members", members)

    @property
    def dim(self) -> int | None:
        dims = {m.dim for m in self.members if m.dim is not None}
        if len(dims) > 1:
            raise DimensionError("majority members disagree on dimension")
        return dims.pop() if dims else None

    def predict(self, X) -> np.ndarray:
        X = self._check(X)
        votes = np.zeros(len(X), dtype=np.int64)
        for m in self.members:
            votes += m.predict(X)
        return sign(votes)

    def to_json(self) -> dict:
        return {"type": "majority", "members": [m.to_json() for m in self.members]}


@dataclass(frozen=True, eq=False)
class Negation(Hypothesis):
    inner: Hypothesis

    @property
    def dim(self):
        return self.inner.dim

    def predict(self, X) -> np.ndarray:
        return (-self.inner.predict(X)).astype(np.int8)

    def negate(self) -> Hypothesis:
        return self.inner

    def to_json(self) -> dict:
        return {"type": "negation", "inner": self.inner.to_json()}


def hypothesis_from_json(obj: Mapping) -> Hypothesis:
    kind = obj["type"]
    if kind == "constant":
        return Constant(int(obj["b"]))
    if kind == "halfspace":
        return Halfspace(np.array(obj["v"]), obj["tau"])
    if kind == "polysign":
        return PolySign(SparsePolynomial.from_json(obj["poly"]))
    if kind == "majority":
        return Majority(tuple(hypothesis_from_json(m) for m in obj["members"]))
    if kind == "negation":
        return Negation(hypothesis_from_json(obj["inner"]))
    raise ValueError(f"unknown hypothesis type {kind!r}")


def eval_hypothesis(h: Hypothesis, x) -> int:
    """Label of a single point."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    return int(h.predict(x)[0])


def empirical_error(h: Hypothesis, S: LabeledDataset) -> float:
    if len(S) == 0:
        raise EmptyDatasetError("empirical error of an empty dataset")
    return float(np.mean(h.predict(S.X) != S.y))


# ---------------------------------------------------------------------------
# outcomes


ACCEPT = "accept"
REJECT = "reject"


@dataclass(frozen=True)
class TdsOutcome:
    verdict: str
    hypothesis: Hypothesis | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in (ACCEPT, REJECT):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == ACCEPT and self.hypothesis is None:
            raise ValueError("an accepting outcome needs a hypothesis")

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPT

    @classmethod
    def accept(cls, h: Hypothesis, **diagnostics) -> "TdsOutcome":
        return cls(ACCEPT, h, diagnostics)

    @classmethod
    def reject(cls, **diagnostics) -> "TdsOutcome":
        return cls(REJECT, None, diagnostics)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "hypothesis": None if self.hypothesis is None else self.hypothesis.to_json(),
            "diagnostics": jsonable(self.diagnostics),
        }


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays and nested containers into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# constants and randomness


@dataclass(frozen=True)
class Constants:
    """Free constants of the halfspace learners.

    The defaults are desk-scale calibrated values; ``harness calibrate`` can
    tune them per scenario family.
    """

    C1: float = 2.0
    C2: float = 1.0
    C3: float = 2.0
    cap_tester_C: float = 4.0
    angle_C: float = 2.0
    amplification_T: int = 10

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"constant {f.name} must be positive")
        if self.amplification_T % 2:
            raise ValueError("amplification_T must be even")

    def replace(self, **changes) -> "Constants":
        return dataclasses.replace(self, **changes)

    def to_json(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_json(cls, obj: Mapping) -> "Constants":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(obj) - names
        if unknown:
            raise ValueError(f"unknown constants: {sorted(unknown)}")
        return cls(**obj)


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for ``seed`` and an optional substream path.

    Substreams are addressed by key, so a trial's draws do not depend on the
    order in which trials are executed.
    """
    seq = np.random.SeedSequence([int(seed) & (2**64 - 1), *[int(s) for s in stream]])
    return np.random.Generator(np.random.Philox(seq))


def spawn(rng: np.random.Generator, n: int) -> list[np.random.Generator]:
    return rng.spawn(n)
