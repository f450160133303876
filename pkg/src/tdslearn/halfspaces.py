"""Halfspace geometry, parameter recovery, ERM, and the halfspace TDS learners."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Constant,
    Constants,
    Halfspace,
    LabeledDataset,
    TdsOutcome,
    as_dataset,
    sign,
    unit,
)
from .moments import StandardGaussian, moment_match_test


class DegenerateChow(ValueError):
    """The label-weighted mean is (numerically) zero, so no direction can be read off."""


def angle(v1, v2) -> float:
    """Angle in [0, pi] between two nonzero vectors."""
    a, b = unit(v1), unit(v2)
    return float(np.arccos(np.clip(a @ b, -1.0, 1.0)))


def gaussian_disagreement(v1, v2) -> float:
    """Pr_{x ~ N(0, I)}[sign(v1.x) != sign(v2.x)] = angle / pi."""
    return angle(v1, v2) / math.pi


def disagreement_rate(X, v1, v2) -> float:
    X = as_dataset(X)
    return float(np.mean(sign(X @ unit(v1)) != sign(X @ unit(v2))))


def chow_direction(S: LabeledDataset) -> np.ndarray:
    if len(S) == 0:
        raise ValueError("chow direction of an empty dataset")
    s = S.y.astype(float) @ S.X
    if np.linalg.norm(s) < 1e-12:
        raise DegenerateChow("sum of y*x is zero")
    return s / np.linalg.norm(s)


def recover_offset(S: LabeledDataset, v) -> float:
    """Threshold in {v.x : x in S} minimizing the error of sign(v.x - t).

    Ties go to the smallest threshold.
    """
    proj = S.X @ unit(v)
    order = np.argsort(proj, kind="stable")
    p = proj[order]
    y = S.y[order]
    # errors for threshold p[i] (first occurrence): positives strictly below + negatives at/above
    pos_below = np.concatenate(([0], np.cumsum(y == 1)))[:-1]
    neg_below = np.concatenate(([0], np.cumsum(y == -1)))[:-1]
    first = np.concatenate(([True], p[1:] != p[:-1]))
    errors = pos_below + (np.count_nonzero(y == -1) - neg_below)
    errors = np.where(first, errors, np.iinfo(np.int64).max)
    return float(p[int(np.argmin(errors))])


def training_errors(X, y, v, tau: float = 0.0) -> int:
    return int(np.count_nonzero(sign(X @ v - tau) != y))


# ---------------------------------------------------------------------------
# ERM for homogeneous halfspaces


def _sweep_circle(P: np.ndarray, y: np.ndarray, tol: float = 1e-13):
    """Exact angular sweep over directions (cos t, sin t) for 2-D points P.

    Returns (best_t, best_errors, arc_width). Points at the origin are always
    labeled +1 by the sign convention.
    """
    r = np.hypot(P[:, 0], P[:, 1])
    zero = r == 0.0
    base = int(np.count_nonzero(y[zero] == -1))
    P, y = P[~zero], y[~zero]
    if len(P) == 0:
        return 0.0, base, 2 * math.pi
    phi = np.arctan2(P[:, 1], P[:, 0])
    two_pi = 2 * math.pi
    enter = np.mod(phi - math.pi / 2, two_pi)
    leave = np.mod(phi + math.pi / 2, two_pi)
    events = np.concatenate((enter, leave))
    # after an enter event the point is predicted +1, after a leave event -1
    new_pred = np.concatenate((np.ones(len(P)), -np.ones(len(P))))
    yy = np.concatenate((y, y))
    delta = np.where(new_pred != yy, 1, -1)
    order = np.argsort(events, kind="stable")
    events, delta = events[order], delta[order]
    widths = np.diff(np.concatenate((events, [events[0] + two_pi])))
    mids = events + widths / 2
    t0 = np.mod(mids[-1], two_pi)
    err0 = int(np.count_nonzero(sign(P @ np.array([math.cos(t0), math.sin(t0)])) != y))
    # arc j follows event j; the final arc wraps around and equals the start state
    errs = err0 + np.cumsum(delta) - delta.sum()
    valid = widths > tol
    if not np.any(valid):
        return t0, err0 + base, 0.0
    errs_v = np.where(valid, errs, np.iinfo(np.int64).max)
    best = errs_v.min()
    cands = np.flatnonzero(errs_v == best)
    j = cands[np.argmax(widths[cands])]
    return float(np.mod(mids[j], two_pi)), int(best) + base, float(widths[j])


def _erm_2d(X, y):
    t, _, _ = _sweep_circle(X, y)
    return np.array([math.cos(t), math.sin(t)])


def _orth_basis(p: np.ndarray) -> np.ndarray:
    """Two orthonormal vectors spanning the plane orthogonal to p in R^3."""
    p = unit(p)
    helper = np.eye(3)[int(np.argmin(np.abs(p)))]
    e1 = unit(np.cross(p, helper))
    e2 = np.cross(p, e1)
    return np.stack((e1, e2))


def _erm_3d(X, y, rng, exact_limit):
    # every cell of the arrangement has an edge on some great circle v.x_i = 0;
    # the sweep there labels x_i as +1, the tilted copy gives the cell across
    norms = np.linalg.norm(X, axis=1)
    anchors = np.flatnonzero(norms > 0)
    if len(anchors) > exact_limit:
        anchors = np.sort(rng.choice(anchors, exact_limit, replace=False))
    best_v, best_err = np.eye(3)[0], training_errors(X, y, np.eye(3)[0])
    safe_norms = np.where(norms > 0, norms, 1.0)
    for i in anchors:
        E = _orth_basis(X[i])
        t, err, _ = _sweep_circle(X @ E.T, y)
        if err - 1 >= best_err:
            continue
        v = math.cos(t) * E[0] + math.sin(t) * E[1]
        cands = [v]
        if y[i] == -1:
            rel = np.abs(X @ v) / safe_norms
            rel[i] = np.inf
            rel[norms == 0] = np.inf
            eta = 0.5 * min(float(rel.min(initial=1.0)), 1.0)
            cands.append(unit(v - eta * X[i] / norms[i]))
        for c in cands:
            e = training_errors(X, y, c)
            if e < best_err:
                best_v, best_err = c, e
    return best_v


def pocket_perceptron(X, y, rng, epochs: int = 5, subsample: int = 500) -> np.ndarray:
    """Homogeneous pocket perceptron on a random subsample; returns a unit vector."""
    n, d = X.shape
    idx = rng.choice(n, min(n, subsample), replace=False)
    Xs, ys = X[idx], y[idx].astype(float)
    w = rng.standard_normal(d)
    best, best_err = w.copy(), training_errors(Xs, ys, w)
    for _ in range(epochs):
        for j in rng.permutation(len(Xs)):
            if sign(Xs[j] @ w) != ys[j]:
                w = w + ys[j] * Xs[j]
        err = training_errors(Xs, ys, w)
        if err < best_err:
            best, best_err = w.copy(), err
        if best_err == 0:
            break
    if not np.any(best):
        best = rng.standard_normal(d)
    return unit(best)


def _perturbations(v, rng, count, scale):
    out = []
    for s in np.geomspace(scale, scale * 1e-3, num=max(1, count)):
        out.append(unit(v + s * rng.standard_normal(len(v))))
    return out


def erm_homogeneous(S: LabeledDataset, rng: np.random.Generator, *, restarts: int = 200,
                    perturbations: int = 200, exact_limit: int = 2000) -> np.ndarray:
    """Unit vector minimizing the empirical 0-1 error of x -> sign(v.x).

    Exact for d <= 3 (angular sweeps over the hyperplane arrangement; d = 3 is
    exact when |S| <= exact_limit). For d > 3 a heuristic pool: the Chow
    direction, pocket-perceptron restarts and random perturbations of the best.
    """
    X, y = S.X, S.y
    d = S.dim
    if d == 1:
        return np.array([1.0]) if training_errors(X, y, np.array([1.0])) <= \
            training_errors(X, y, np.array([-1.0])) else np.array([-1.0])
    if d == 2:
        return _erm_2d(X, y)
    if d == 3:
        return _erm_3d(X, y, rng, exact_limit)
    pool = []
    try:
        pool.append(chow_direction(S))
    except DegenerateChow:
        pass
    pool += [pocket_perceptron(X, y, rng) for _ in range(restarts)]
    errs = [training_errors(X, y, v) for v in pool]
    best = pool[int(np.argmin(errs))]
    for cand in _perturbations(best, rng, perturbations, 0.3):
        e = training_errors(X, y, cand)
        if e < min(errs):
            errs.append(e)
            pool.append(cand)
            best = cand
    return best


# ---------------------------------------------------------------------------
# bands and the cap tester stand-in


def band_fraction(X, v, tau: float, width) -> float:
    """Fraction of points with |v.x - tau| <= width(x).

    ``width`` is a scalar, an array with one entry per point, or a callable
    mapping the (n, d) array to such an array.
    """
    X = as_dataset(X)
    w = width(X) if callable(width) else np.broadcast_to(np.asarray(width, dtype=float), (len(X),))
    return float(np.mean(np.abs(X @ unit(v) - tau) <= w))


@dataclass(frozen=True)
class CapTesterConfig:
    theta: float
    levels: int = 6
    C: float = 4.0
    eps_add: float = 0.01

    def __post_init__(self):
        if not 0 < self.theta <= math.pi / 4 + 1e-15:
            raise ValueError("theta must lie in (0, pi/4]")
        if self.levels < 1:
            raise ValueError("need at least one grid level")


@dataclass(frozen=True)
class CapReport:
    passed: bool
    config: CapTesterConfig
    angles: tuple
    fractions: tuple
    thresholds: tuple

    @property
    def residual(self) -> float:
        """Band mass at the finest level; covers angles below the grid."""
        return self.fractions[-1]

    def certified_bound(self, phi: float) -> float:
        return self.config.C * phi + self.config.eps_add + self.residual

    def to_json(self) -> dict:
        return {"passed": self.passed, "theta": self.config.theta, "levels": self.config.levels,
                "C": self.config.C, "eps_add": self.config.eps_add,
                "angles": list(self.angles), "fractions": list(self.fractions),
                "thresholds": list(self.thresholds)}


def cap_disagreement_tester(X, v, cfg: CapTesterConfig) -> CapReport:
    """Check band mass at angles theta * 2^-j against (C/2) * angle + eps_add.

    A pass certifies that every unit v2 within angle phi <= theta of v
    disagrees with v on at most C*phi + eps_add + residual of X, since the
    disagreement region lies in the band |v.x| <= sin(phi)|x|.
    """
    X = as_dataset(X)
    v = unit(v)
    norms = np.linalg.norm(X, axis=1)
    margins = np.abs(X @ v)
    angles, fractions, thresholds = [], [], []
    for j in range(cfg.levels + 1):
        phi = cfg.theta * 2.0 ** -j
        frac = float(np.mean(margins <= math.sin(phi) * norms))
        angles.append(phi)
        fractions.append(frac)
        thresholds.append(cfg.C / 2 * phi + cfg.eps_add)
    passed = all(f <= t for f, t in zip(fractions, thresholds))
    return CapReport(passed, cfg, tuple(angles), tuple(fractions), tuple(thresholds))


def rotate_towards(v, phi: float, rng) -> np.ndarray:
    """A unit vector at angle phi from v in a uniformly random direction."""
    v = unit(v)
    u = rng.standard_normal(len(v))
    u -= (u @ v) * v
    u = unit(u)
    return math.cos(phi) * v + math.sin(phi) * u


def cap_guarantee_violations(X, v, report: CapReport, rng, n_dirs: int = 100) -> list[dict]:
    """Draw n_dirs vectors within angle theta of v and list any that break the certificate."""
    X = as_dataset(X)
    out = []
    for phi in rng.uniform(0, report.config.theta, n_dirs):
        v2 = rotate_towards(v, phi, rng)
        rate = disagreement_rate(X, v, v2)
        bound = report.certified_bound(phi)
        if rate > bound + 1e-12:
            out.append({"phi": float(phi), "rate": rate, "bound": bound})
    return out


# ---------------------------------------------------------------------------
# learners


def agnostic_learn_stub(S: LabeledDataset, eps: float, delta: float, rng, *, restarts: int = 10,
                        perturbations: int = 50) -> np.ndarray:
    """Stand-in for a cited agnostic halfspace learner.

    Builds a candidate pool on 80% of S (Chow direction, pocket restarts,
    exact ERM for d <= 3, local perturbations) and returns the candidate with
    the smallest error on the remaining 20%.
    """
    n = len(S)
    perm = rng.permutation(n)
    cut = max(1, int(round(0.8 * n)))
    train, hold = S.subset(perm[:cut]), S.subset(perm[cut:] if cut < n else perm)
    pool = []
    try:
        pool.append(chow_direction(train))
    except DegenerateChow:
        pool.append(np.eye(S.dim)[0])
    pool += [pocket_perceptron(train.X, train.y, rng) for _ in range(restarts)]
    if S.dim <= 3:
        pool.append(erm_homogeneous(train, rng))
    tr_err = [training_errors(train.X, train.y, v) for v in pool]
    pool += _perturbations(pool[int(np.argmin(tr_err))], rng, perturbations, 0.2)
    hold_err = [training_errors(hold.X, hold.y, v) for v in pool]
    return pool[int(np.argmin(hold_err))]


def tds_homogeneous_realizable(S_train: LabeledDataset, X_test, eps: float, rng) -> TdsOutcome:
    """Realizable TDS learner for origin-centered halfspaces under N(0, I)."""
    X_test = as_dataset(X_test, S_train.dim)
    d = S_train.dim
    eps_prime = eps ** 1.5 / (10 * math.sqrt(d))
    v = erm_homogeneous(S_train, rng)
    frac = band_fraction(X_test, v, 0.0, lambda X: eps_prime * np.linalg.norm(X, axis=1))
    diag = {"algorithm": "homogeneous_realizable", "eps_prime": eps_prime, "band_fraction": frac,
            "threshold": 0.75 * eps,
            "train_error": training_errors(S_train.X, S_train.y, v) / len(S_train)}
    if frac > 0.75 * eps:
        return TdsOutcome.reject(**diag)
    return TdsOutcome.accept(Halfspace(v, 0.0), **diag)


def tester_angle(eps_hat: float, eps: float, constants: Constants) -> float:
    return min(max(constants.angle_C * eps_hat + eps, 1e-12), math.pi / 4)


def tds_homogeneous_agnostic(S_train: LabeledDataset, X_test, eps: float, delta: float, rng,
                             constants: Constants = Constants(), *, holdout_fraction: float = 0.25,
                             levels: int = 6, eps_add: float = 0.01,
                             return_report: bool = False):
    """Agnostic TDS learner for origin-centered halfspaces under isotropic log-concave marginals.

    The learner and tester are stand-ins with the cited interfaces; the
    diagnostics say so.
    """
    if len(S_train) < 100:
        raise ValueError("need at least 100 training examples")
    X_test = as_dataset(X_test, S_train.dim)
    perm = rng.permutation(len(S_train))
    cut = int(round((1 - holdout_fraction) * len(S_train)))
    S1, S2 = S_train.subset(perm[:cut]), S_train.subset(perm[cut:])
    v = agnostic_learn_stub(S1, eps / constants.cap_tester_C, delta / 4, rng)
    eps_hat = training_errors(S2.X, S2.y, v) / len(S2)
    cfg = CapTesterConfig(tester_angle(eps_hat, eps, constants), levels, constants.cap_tester_C, eps_add)
    report = cap_disagreement_tester(X_test, v, cfg)
    diag = {"algorithm": "homogeneous_agnostic", "stand_in": True, "eps_hat": eps_hat,
            "theta": cfg.theta, "cap": report.to_json()}
    out = (TdsOutcome.accept(Halfspace(v, 0.0), **diag) if report.passed
           else TdsOutcome.reject(**diag))
    return (out, report) if return_report else out


@dataclass(frozen=True)
class GeneralHalfspaceParams:
    T: float
    k: int
    delta: float
    beta: float

    @classmethod
    def compute(cls, eps: float, d: int, constants: Constants) -> "GeneralHalfspaceParams":
        log_inv = math.log(1 / eps)
        T = 2.0 ** (constants.C1 ** 2 * log_inv + 1)
        k = max(1, math.ceil(constants.C1 * log_inv - 1e-9))
        delta = eps / float(d) ** (constants.C2 * k)
        beta = eps ** 2 / (constants.C3 * float(d) ** constants.C3)
        return cls(T, k, delta, beta)


def tds_general_halfspace(S_train: LabeledDataset, X_test, eps: float, rng,
                          constants: Constants = Constants(), *, delta: float | None = None) -> TdsOutcome:
    """Realizable TDS learner for general halfspaces under N(0, I).

    ``delta`` overrides the moment tolerance eps / d^(C2 k) of the large-bias
    branch (practical mode); None keeps it.
    """
    X_test = as_dataset(X_test, S_train.dim)
    d = S_train.dim
    prm = GeneralHalfspaceParams.compute(eps, d, constants)
    tol = prm.delta if delta is None else delta
    diag = {"algorithm": "general_halfspace", "T": prm.T, "k": prm.k, "beta": prm.beta,
            "delta": tol, "mode": "paper" if delta is None else "practical"}
    for b in (1, -1):
        if np.mean(S_train.y != b) <= 1 / prm.T:
            passed, report = moment_match_test(X_test, StandardGaussian(d), prm.k, tol)
            diag.update(branch="large_bias", label=b, worst_gap=report.worst_gap,
                        worst_alpha=list(report.worst_alpha))
            if not passed:
                return TdsOutcome.reject(**diag)
            return TdsOutcome.accept(Constant(b, d), **diag)
    diag["branch"] = "low_bias"
    try:
        v = chow_direction(S_train)
    except DegenerateChow as exc:
        diag["error"] = str(exc)
        return TdsOutcome.reject(**diag)
    tau = recover_offset(S_train, v)
    frac = band_fraction(X_test, v, tau, lambda X: prm.beta * (np.linalg.norm(X, axis=1) + 1))
    diag.update(band_fraction=frac, threshold=10 * eps)
    if frac > 10 * eps:
        return TdsOutcome.reject(**diag)
    return TdsOutcome.accept(Halfspace(v, tau), **diag)
