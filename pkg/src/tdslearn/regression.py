"""Coefficient-bounded least-squares polynomial regression and the transfer-gap check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LabeledDataset, SparsePolynomial, EmptyDatasetError, as_dataset, monomials
from .moments import (
    ReferenceMarginal,
    enumerate_multi_indices,
    moment_report,
    reference_moments,
)

RIDGE_FALLBACK = 1e-8
MAX_COND = 1e12


class IllConditioned(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class RegressionProblem:
    S: LabeledDataset
    degree: int
    bound: float
    eps: float
    ridge: float = 0.0

    def __post_init__(self):
        if self.degree < 0 or not self.bound > 0 or not self.eps > 0 or self.ridge < 0:
            raise ValueError("need degree >= 0, bound > 0, eps > 0, ridge >= 0")
        if len(self.S) == 0:
            raise EmptyDatasetError("regression on an empty dataset")


def squared_loss(p: SparsePolynomial, S: LabeledDataset) -> float:
    if len(S) == 0:
        raise EmptyDatasetError("squared loss of an empty dataset")
    return float(np.mean((S.y - p(S.X)) ** 2))


def _quadratic(w, G, b, c):
    return float(w @ G @ w - 2 * b @ w + c)


def _solve_ridge(G: np.ndarray, b: np.ndarray, ridge: float) -> np.ndarray:
    A = G + ridge * np.eye(len(G))
    if np.linalg.cond(A) > MAX_COND:
        raise IllConditioned(f"normal equations ill-conditioned at ridge={ridge}")
    return np.linalg.solve(A, b)


def projected_gradient(G, b, c, bound, w0, tol, max_passes=10_000):
    """Minimize w'Gw - 2b'w + c over the box [-bound, bound]^m.

    Gradient steps of size 1/L (L the largest eigenvalue of 2G) followed by
    clipping; stops when a pass improves the loss by less than ``tol``.
    Returns the iterate and the loss after every pass.
    """
    L = 2 * float(np.linalg.eigvalsh(G).max(initial=0.0))
    w = np.clip(np.asarray(w0, dtype=float), -bound, bound)
    history = [_quadratic(w, G, b, c)]
    if L <= 0:
        return w, history
    for _ in range(max_passes):
        w = np.clip(w - 2 * (G @ w - b) / L, -bound, bound)
        history.append(_quadratic(w, G, b, c))
        if history[-2] - history[-1] < tol:
            break
    return w, history


def fit_bounded_polynomial(prob: RegressionProblem) -> SparsePolynomial:
    """Approximately solve min E_S[(y - p(x))^2] over degree-k p with |coef| <= B.

    The unconstrained ridge solution is returned when it already lies in the
    box; otherwise projected gradient descent refines the better of its
    clipped version and the zero polynomial.
    """
    S, k, B = prob.S, prob.degree, prob.bound
    alphas = enumerate_multi_indices(S.dim, k)
    Phi = monomials(S.X, alphas)
    y = S.y.astype(float)
    n = len(y)
    G = Phi.T @ Phi / n
    b = Phi.T @ y / n
    c = float(y @ y / n)
    try:
        w = _solve_ridge(G, b, prob.ridge)
    except (IllConditioned, np.linalg.LinAlgError):
        w = _solve_ridge(G, b, max(prob.ridge, RIDGE_FALLBACK))
    if np.any(np.abs(w) > B):
        start = np.clip(w, -B, B)
        if _quadratic(start, G, b, c) > c:
            start = np.zeros_like(w)
        w, _ = projected_gradient(G, b, c, B, start, prob.eps / 4)
    return SparsePolynomial(S.dim, alphas, np.clip(w, -B, B), k, B)


@dataclass(frozen=True)
class TransferGap:
    empirical: float
    reference: float
    gap: float
    bound: float
    delta: float

    def to_json(self) -> dict:
        return dict(empirical=self.empirical, reference=self.reference, gap=self.gap,
                    bound=self.bound, delta=self.delta)


def transfer_gap(p1: SparsePolynomial, p2: SparsePolynomial, X, D: ReferenceMarginal) -> TransferGap:
    """Compare E_X[(p1-p2)^2] with E_D[(p1-p2)^2] against the B^2 d^(4k) Delta bound.

    B is the largest absolute coefficient of p1 - p2, k the larger declared
    degree, and Delta the worst moment gap of X against D up to degree 2k.
    """
    if p1.dim != p2.dim or p1.dim != D.dim:
        raise ValueError("dimension mismatch")
    X = as_dataset(X, D.dim)
    q = p1 - p2
    k = max(p1.degree, p2.degree)
    q2 = q.squared()
    empirical = float(np.mean(q(X) ** 2))
    reference = float(reference_moments(D, q2.alphas) @ q2.coefs) if len(q2.coefs) else 0.0
    delta = moment_report(X, D, 2 * k).worst_gap
    B = q.max_abs_coef()
    bound = B * B * float(D.dim) ** (4 * k) * delta
    return TransferGap(empirical, reference, abs(empirical - reference), bound, delta)
