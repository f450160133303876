"""Distribution-generic TDS learners: moment matching, disagreement regions,
amplification and the PQ-learning reduction."""

from __future__ import annotations

import math
from typing import Callable, Protocol

import numpy as np
from scipy import optimize, special

from .core import (
    Halfspace,
    Hypothesis,
    LabeledDataset,
    Majority,
    PolySign,
    TdsOutcome,
    as_dataset,
    spawn,
)
from .halfspaces import erm_homogeneous
from .moments import ReferenceMarginal, default_delta, moment_match_test
from .regression import RegressionProblem, fit_bounded_polynomial, squared_loss

ErmOracle = Callable[[LabeledDataset, float], Hypothesis]
MembershipOracle = Callable[[Hypothesis, float, np.ndarray], np.ndarray]
PqLearner = Callable[[LabeledDataset, np.ndarray], "tuple[Hypothesis, Callable[[np.ndarray], np.ndarray]]"]


class TdsLearner(Protocol):
    def __call__(self, S_train: LabeledDataset, X_test: np.ndarray,
                 rng: np.random.Generator) -> TdsOutcome: ...


def tds_moment_matching(S_train: LabeledDataset, X_test, D: ReferenceMarginal, k: int, B: float,
                        eps: float, delta: float = 0.1, *, mode: str = "paper",
                        moment_tol: float | None = None) -> TdsOutcome:
    """Reject unless the test moments up to degree 2k match D, then fit sign(p).

    ``mode="paper"`` uses the tolerance (eps/100) / (B^2 d^(4k)) and may raise
    StrictnessInfeasible; ``mode="practical"`` uses ``moment_tol``.
    """
    if k < 0 or not B > 0:
        raise ValueError("need k >= 0 and B > 0")
    X_test = as_dataset(X_test, D.dim)
    eps_prime = eps / 100
    if mode == "paper":
        tol = default_delta(eps_prime, B, D.dim, k)
    elif mode == "practical":
        if moment_tol is None or not moment_tol > 0:
            raise ValueError("practical mode needs a positive moment_tol")
        tol = moment_tol
    else:
        raise ValueError(f"unknown mode {mode!r}")
    passed, report = moment_match_test(X_test, D, 2 * k, tol)
    diag = {"algorithm": "moment_matching", "mode": mode, "delta": tol, "degree": 2 * k,
            "worst_gap": report.worst_gap, "worst_alpha": list(report.worst_alpha)}
    if not passed:
        return TdsOutcome.reject(**diag)
    p = fit_bounded_polynomial(RegressionProblem(S_train, k, B, eps_prime))
    diag["train_squared_loss"] = squared_loss(p, S_train)
    return TdsOutcome.accept(PolySign(p), **diag)


def tds_disagreement(S_train: LabeledDataset, X_test, eps: float, eps_prime: float,
                     erm: ErmOracle, member: MembershipOracle) -> TdsOutcome:
    """Reject iff more than eps/2 of the test points fall in the disagreement region of the ERM."""
    X_test = as_dataset(X_test, S_train.dim)
    f = erm(S_train, eps_prime)
    inside = np.asarray(member(f, eps_prime, X_test), dtype=bool)
    frac = float(inside.mean()) if len(inside) else 0.0
    diag = {"algorithm": "disagreement", "eps_prime": eps_prime, "region_fraction": frac,
            "threshold": eps / 2}
    if frac > eps / 2:
        return TdsOutcome.reject(**diag)
    return TdsOutcome.accept(f, **diag)


def halfspace_erm_oracle(rng: np.random.Generator) -> ErmOracle:
    def erm(S: LabeledDataset, eps_prime: float) -> Hypothesis:
        return Halfspace(erm_homogeneous(S, rng), 0.0)
    return erm


def gaussian_halfspace_member(f: Halfspace, eps_prime: float, X: np.ndarray) -> np.ndarray:
    """Membership in the eps'-disagreement region of a homogeneous halfspace under N(0, I).

    Halfspaces within Gaussian distance eps' are those within angle pi*eps',
    and some such halfspace disagrees with f at x iff |v.x| <= sin(pi*eps')|x|.
    """
    phi = min(math.pi * eps_prime, math.pi / 2)
    X = as_dataset(X, f.dim)
    return np.abs(X @ f.v) <= math.sin(phi) * np.linalg.norm(X, axis=1)


def gaussian_region_mass(eps_prime: float, d: int) -> float:
    """N(0, I_d) mass of the eps'-disagreement region of a homogeneous halfspace."""
    s = math.sin(min(math.pi * eps_prime, math.pi / 2))
    if d == 1:
        return 0.0 if s < 1 else 1.0
    # (v.x / |x|)^2 ~ Beta(1/2, (d-1)/2)
    return float(special.betainc(0.5, (d - 1) / 2, s * s))


def gaussian_halfspace_eps_prime(eps: float, d: int, budget: float = 0.25) -> float:
    """Largest eps' whose region mass is budget * eps.

    The default spends half of the eps/2 reject threshold on the region mass
    and leaves the rest for sampling noise in the test set.
    """
    target = budget * eps
    if gaussian_region_mass(0.5, d) <= target:
        return 0.5
    return float(optimize.brentq(lambda e: gaussian_region_mass(e, d) - target, 0.0, 0.5, xtol=1e-14))


def shard(S_train: LabeledDataset, X_test: np.ndarray, T: int):
    """Split both datasets into T contiguous, disjoint blocks."""
    tr = np.array_split(np.arange(len(S_train)), T)
    te = np.array_split(np.arange(len(X_test)), T)
    return [(S_train.subset(a), X_test[b]) for a, b in zip(tr, te)]


def amplify(base: TdsLearner, T: int) -> TdsLearner:
    """Boost the success probability of ``base`` by running it on T disjoint shards.

    Rejects when more than T/2 runs reject; otherwise returns the majority
    vote of the first T/2 accepting hypotheses (an odd count is required for a
    vote, so an even count drops the last one).
    """
    if T < 2 or T % 2:
        raise ValueError("T must be an even integer >= 2")

    def learner(S_train: LabeledDataset, X_test, rng: np.random.Generator) -> TdsOutcome:
        X_test = as_dataset(X_test, S_train.dim)
        rngs = spawn(rng, T)
        outcomes = [base(s, x, r) for (s, x), r in zip(shard(S_train, X_test, T), rngs)]
        accepted = [o.hypothesis for o in outcomes if o.accepted]
        rejects = T - len(accepted)
        diag = {"algorithm": "amplify", "T": T, "rejects": rejects}
        if rejects > T // 2 or len(accepted) < T // 2:
            return TdsOutcome.reject(**diag)
        members = accepted[: T // 2]
        if len(members) % 2 == 0:
            members = members[:-1]
        return TdsOutcome.accept(Majority(tuple(members)), **diag)

    return learner


def pq_to_tds(pq: PqLearner, S_train: LabeledDataset, X_test, eps: float) -> TdsOutcome:
    """Reduce TDS learning to PQ learning by auditing the region on held-out test points."""
    X_test = as_dataset(X_test, S_train.dim)
    half = len(X_test) // 2
    X1, X2 = X_test[:half], X_test[half:]
    h, region = pq(S_train, X1)
    outside = float(np.mean(~np.asarray(region(X2), dtype=bool))) if len(X2) else 0.0
    diag = {"algorithm": "pq", "outside_fraction": outside, "threshold": eps / 3}
    if outside > eps / 3:
        return TdsOutcome.reject(**diag)
    return TdsOutcome.accept(h, **diag)
