"""Experiment runner: JSON-configured trial batteries, CSV/JSON reports, calibration."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import halfspaces, learners
from .core import (
    Constant,
    Constants,
    Halfspace,
    Hypothesis,
    TdsOutcome,
    dumps,
    empirical_error,
    make_rng,
)
from .moments import StandardGaussian, StrictnessInfeasible, UniformHypercube
from .scenarios import (
    BandConditioned,
    CovScale,
    Cube,
    FlipAll,
    Gaussian,
    IntersectionOfHalfspaces,
    LaplaceProduct,
    MeanShift,
    Mixture,
    PointMass,
    RandomClassificationNoise,
    Realizable,
    StudentTProduct,
    UniformBall,
    halfspace_grid_2d,
    homogeneous_halfspace_grid_2d,
    label,
    lambda_oracle,
    sample_marginal,
    trees_up_to_depth2,
    tree_from_json,
)

CSV_SCHEMA = "tds-csv-v1"
CSV_COLUMNS = ["config_hash", "trial", "seed", "verdict", "test_error", "grid_lambda",
               "hypothesis", "diagnostics"]

MIN_CALIBRATION_TRIALS = 200

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INFEASIBLE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config parsing


def _keys(obj: Mapping, required: set, optional: set = frozenset(), where: str = "") -> None:
    if not isinstance(obj, Mapping):
        raise ConfigError(f"{where}: expected an object")
    missing = required - set(obj)
    unknown = set(obj) - required - set(optional)
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


def parse_marginal(obj: Mapping, where: str = "marginal"):
    kind = obj.get("type") if isinstance(obj, Mapping) else None
    simple = {"gaussian": Gaussian, "laplace": LaplaceProduct, "ball": UniformBall}
    if kind in simple:
        _keys(obj, {"type", "dim"}, where=where)
        return simple[kind](int(obj["dim"]))
    if kind == "cube":
        _keys(obj, {"type", "dim"}, {"exhaustive"}, where)
        return Cube(int(obj["dim"]), bool(obj.get("exhaustive", False)))
    if kind == "student_t":
        _keys(obj, {"type", "dim"}, {"nu", "standardized"}, where)
        return StudentTProduct(int(obj["dim"]), float(obj.get("nu", 3.0)), bool(obj.get("standardized", True)))
    if kind == "point_mass":
        _keys(obj, {"type", "x"}, where=where)
        return PointMass(tuple(float(v) for v in obj["x"]))
    if kind == "mean_shift":
        _keys(obj, {"type", "base", "mu"}, where=where)
        return MeanShift(parse_marginal(obj["base"], where + ".base"), tuple(obj["mu"]))
    if kind == "cov_scale":
        _keys(obj, {"type", "base", "diag"}, where=where)
        return CovScale(parse_marginal(obj["base"], where + ".base"), tuple(obj["diag"]))
    if kind == "band":
        _keys(obj, {"type", "base", "v", "width"}, where=where)
        return BandConditioned(parse_marginal(obj["base"], where + ".base"), tuple(obj["v"]),
                               float(obj["width"]))
    if kind == "mixture":
        _keys(obj, {"type", "components"}, where=where)
        comps = []
        for i, c in enumerate(obj["components"]):
            _keys(c, {"weight", "marginal"}, where=f"{where}.components[{i}]")
            comps.append((float(c["weight"]), parse_marginal(c["marginal"], f"{where}.components[{i}]")))
        try:
            return Mixture(tuple(comps))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: unknown marginal type {kind!r}")


def parse_concept(obj: Mapping, where: str = "concept") -> Hypothesis:
    kind = obj.get("type") if isinstance(obj, Mapping) else None
    if kind == "halfspace":
        _keys(obj, {"type", "v"}, {"tau"}, where)
        return Halfspace(np.array(obj["v"], dtype=float), float(obj.get("tau", 0.0)))
    if kind == "tree":
        _keys(obj, {"type", "dim", "node"}, where=where)
        return tree_from_json(obj)
    if kind == "intersection":
        _keys(obj, {"type", "members"}, where=where)
        return IntersectionOfHalfspaces(tuple(parse_concept(m, where + ".members") for m in obj["members"]))
    if kind == "constant":
        _keys(obj, {"type", "b"}, {"dim"}, where)
        return Constant(int(obj["b"]), obj.get("dim"))
    raise ConfigError(f"{where}: unknown concept type {kind!r}")


def parse_labels(obj: Mapping, where: str = "labels"):
    kind = obj.get("type") if isinstance(obj, Mapping) else None
    if kind == "realizable":
        _keys(obj, {"type"}, where=where)
        return Realizable()
    if kind == "rcn":
        _keys(obj, {"type", "eta"}, where=where)
        eta = float(obj["eta"])
        if not 0 <= eta < 0.5:
            raise ConfigError(f"{where}: noise rate {eta} outside [0, 1/2)")
        return RandomClassificationNoise(eta)
    if kind == "flip_all":
        _keys(obj, {"type"}, where=where)
        return FlipAll()
    raise ConfigError(f"{where}: unknown label model {kind!r}")


LEARNER_PARAMS = {
    "moment_matching": ({"eps", "k", "B", "reference"}, {"delta", "moment_tol"}),
    "homogeneous_realizable": ({"eps"}, set()),
    "homogeneous_agnostic": ({"eps"}, {"delta", "levels", "eps_add", "holdout_fraction"}),
    "general_halfspace": ({"eps"}, {"moment_tol"}),
    "disagreement_halfspace": ({"eps"}, {"eps_prime"}),
    "constant_accept": (set(), set()),
    "bernoulli_stub": ({"p"}, set()),
}
LAMBDA_GRIDS = {"none", "concept_pm", "trees_depth2", "homogeneous_2d", "halfspace_2d"}


@dataclass(frozen=True)
class ExperimentConfig:
    raw: dict
    name: str
    learner: str
    params: dict
    mode: str
    train_marginal: Any
    test_marginal: Any
    concept: Hypothesis
    train_labels: Any
    test_labels: Any
    lambda_grid: str
    trials: int
    seed: int
    n_train: int
    n_test: int
    n_eval: int
    constants: Constants = field(default_factory=Constants)
    amplify_T: int | None = None

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(dumps(self.raw).encode()).hexdigest()[:16]

    def with_constants(self, constants: Constants) -> "ExperimentConfig":
        raw = dict(self.raw)
        raw["constants"] = constants.to_json()
        raw.pop("constants_file", None)
        return dataclasses.replace(self, raw=raw, constants=constants)

    def with_trials(self, trials: int) -> "ExperimentConfig":
        raw = dict(self.raw, trials=trials)
        return dataclasses.replace(self, raw=raw, trials=trials)


CONFIG_REQUIRED = {"learner", "params", "train_marginal", "test_marginal", "concept", "trials", "seed",
                   "n_train", "n_test"}
CONFIG_OPTIONAL = {"name", "mode", "train_labels", "test_labels", "lambda_grid", "n_eval", "constants",
                   "constants_file", "amplify_T"}


def parse_config(obj: Mapping, base_dir: Path | None = None) -> ExperimentConfig:
    _keys(obj, CONFIG_REQUIRED, CONFIG_OPTIONAL, "config")
    learner = obj["learner"]
    if learner not in LEARNER_PARAMS:
        raise ConfigError(f"config: unknown learner {learner!r}")
    req, opt = LEARNER_PARAMS[learner]
    _keys(obj["params"], req, opt, "config.params")
    mode = obj.get("mode", "practical")
    if mode not in ("paper", "practical"):
        raise ConfigError(f"config: unknown mode {mode!r}")
    grid = obj.get("lambda_grid", "none")
    if grid not in LAMBDA_GRIDS:
        raise ConfigError(f"config: unknown lambda_grid {grid!r}")
    constants = Constants()
    try:
        if "constants_file" in obj:
            path = Path(obj["constants_file"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            constants = Constants.from_json(json.loads(path.read_text()))
        if "constants" in obj:
            constants = Constants.from_json({**constants.to_json(), **obj["constants"]})
    except (OSError, ValueError, TypeError) as exc:
        raise ConfigError(f"config.constants: {exc}") from exc
    ints = {}
    for key in ("trials", "seed", "n_train", "n_test"):
        if not isinstance(obj[key], int) or isinstance(obj[key], bool):
            raise ConfigError(f"config: {key} must be an integer")
        ints[key] = obj[key]
    n_eval = obj.get("n_eval", 10_000)
    if ints["trials"] < 1 or ints["n_train"] < 1 or ints["n_test"] < 1 or n_eval < 1:
        raise ConfigError("config: trials and sample sizes must be positive")
    amplify_T = obj.get("amplify_T")
    if amplify_T is not None and (amplify_T < 2 or amplify_T % 2):
        raise ConfigError("config: amplify_T must be an even integer >= 2")
    train_m = parse_marginal(obj["train_marginal"], "config.train_marginal")
    test_m = parse_marginal(obj["test_marginal"], "config.test_marginal")
    if train_m.dim != test_m.dim:
        raise ConfigError("config: train and test marginals differ in dimension")
    try:
        concept = parse_concept(obj["concept"])
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"config.concept: {exc}") from exc
    if concept.dim is not None and concept.dim != train_m.dim:
        raise ConfigError("config: concept dimension does not match the marginals")
    return ExperimentConfig(
        raw=json.loads(json.dumps(obj)), name=str(obj.get("name", "experiment")), learner=learner,
        params=dict(obj["params"]), mode=mode, train_marginal=train_m, test_marginal=test_m,
        concept=concept,
        train_labels=parse_labels(obj.get("train_labels", {"type": "realizable"}), "config.train_labels"),
        test_labels=parse_labels(obj.get("test_labels", {"type": "realizable"}), "config.test_labels"),
        lambda_grid=grid, n_eval=int(n_eval), constants=constants, amplify_T=amplify_T, **ints)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(obj, path.parent)


# ---------------------------------------------------------------------------
# trials


def build_learner(cfg: ExperimentConfig):
    """Return f(S_train, X_test, rng) -> TdsOutcome for the configured learner."""
    p, mode, consts = cfg.params, cfg.mode, cfg.constants
    dim = cfg.train_marginal.dim
    if cfg.learner == "moment_matching":
        ref = {"gaussian": StandardGaussian, "cube": UniformHypercube}.get(p["reference"])
        if ref is None:
            raise ConfigError(f"unknown reference {p['reference']!r}")
        if mode == "practical" and "moment_tol" not in p:
            raise ConfigError("practical mode needs params.moment_tol")

        def run(S, X, rng):
            return learners.tds_moment_matching(S, X, ref(dim), int(p["k"]), float(p["B"]), float(p["eps"]),
                                                float(p.get("delta", 0.1)), mode=mode,
                                                moment_tol=p.get("moment_tol"))
    elif cfg.learner == "homogeneous_realizable":
        def run(S, X, rng):
            return halfspaces.tds_homogeneous_realizable(S, X, float(p["eps"]), rng)
    elif cfg.learner == "homogeneous_agnostic":
        def run(S, X, rng):
            return halfspaces.tds_homogeneous_agnostic(
                S, X, float(p["eps"]), float(p.get("delta", 0.1)), rng, consts,
                levels=int(p.get("levels", 6)), eps_add=float(p.get("eps_add", 0.01)),
                holdout_fraction=float(p.get("holdout_fraction", 0.25)))
    elif cfg.learner == "general_halfspace":
        if mode == "practical" and "moment_tol" not in p:
            raise ConfigError("practical mode needs params.moment_tol")
        tol = p.get("moment_tol") if mode == "practical" else None

        def run(S, X, rng):
            return halfspaces.tds_general_halfspace(S, X, float(p["eps"]), rng, consts, delta=tol)
    elif cfg.learner == "disagreement_halfspace":
        eps = float(p["eps"])
        eps_prime = float(p.get("eps_prime", learners.gaussian_halfspace_eps_prime(eps, dim)))

        def run(S, X, rng):
            return learners.tds_disagreement(S, X, eps, eps_prime, learners.halfspace_erm_oracle(rng),
                                             learners.gaussian_halfspace_member)
    elif cfg.learner == "constant_accept":
        def run(S, X, rng):
            return TdsOutcome.accept(Constant(1, dim), algorithm="constant_accept")
    elif cfg.learner == "bernoulli_stub":
        def run(S, X, rng):
            if rng.uniform() < float(p["p"]):
                return TdsOutcome.accept(Constant(1, dim), algorithm="bernoulli_stub")
            return TdsOutcome.reject(algorithm="bernoulli_stub")
    else:  # pragma: no cover - guarded by parse_config
        raise ConfigError(cfg.learner)
    if cfg.amplify_T:
        return learners.amplify(run, cfg.amplify_T)
    return run


def lambda_grid(cfg: ExperimentConfig) -> list[Hypothesis] | None:
    dim = cfg.train_marginal.dim
    if cfg.lambda_grid == "none":
        return None
    if cfg.lambda_grid == "concept_pm":
        return [cfg.concept, cfg.concept.negate()]
    if cfg.lambda_grid == "trees_depth2":
        return trees_up_to_depth2(dim)
    if dim != 2:
        raise ConfigError("halfspace lambda grids are defined for d = 2")
    if cfg.lambda_grid == "homogeneous_2d":
        return homogeneous_halfspace_grid_2d()
    return halfspace_grid_2d()


@dataclass
class TrialResult:
    trial: int
    seed: int
    outcome: TdsOutcome
    test_error: float | None
    grid_lambda: float | None
    wall_time: float
    data: dict | None = None

    def row(self, config_hash: str) -> list[str]:
        return [
            config_hash, str(self.trial), str(self.seed), self.outcome.verdict,
            "" if self.test_error is None else f"{self.test_error:.12g}",
            "" if self.grid_lambda is None else f"{self.grid_lambda:.12g}",
            "" if self.outcome.hypothesis is None else dumps(_format_floats(self.outcome.hypothesis.to_json())),
            dumps(_format_floats(self.outcome.diagnostics)),
        ]


def _format_floats(obj):
    if isinstance(obj, dict):
        return {k: _format_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_format_floats(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}") if math.isfinite(obj) else str(obj)
    return obj


def run_trial(cfg: ExperimentConfig, trial: int, keep_data: bool = False) -> TrialResult:
    """One seeded trial; learners only ever see (labeled train, unlabeled test)."""
    start = time.perf_counter()
    X_train = sample_marginal(cfg.train_marginal, cfg.n_train, make_rng(cfg.seed, trial, 0))
    S_train = label(cfg.concept, cfg.train_labels, X_train, make_rng(cfg.seed, trial, 1))
    X_test = sample_marginal(cfg.test_marginal, cfg.n_test, make_rng(cfg.seed, trial, 2))
    X_eval = sample_marginal(cfg.test_marginal, cfg.n_eval, make_rng(cfg.seed, trial, 3))
    S_eval = label(cfg.concept, cfg.test_labels, X_eval, make_rng(cfg.seed, trial, 4))
    learner = build_learner(cfg)
    outcome = learner(S_train, X_test, make_rng(cfg.seed, trial, 5))
    test_error = empirical_error(outcome.hypothesis, S_eval) if outcome.accepted else None
    grid = lambda_grid(cfg)
    lam = lambda_oracle(grid, S_train, S_eval) if grid is not None else None
    data = {"S_train": S_train, "X_test": X_test, "S_eval": S_eval} if keep_data else None
    return TrialResult(trial, cfg.seed, outcome, test_error, lam, time.perf_counter() - start, data)


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("TDS_THREADS", "1")))
    except ValueError:
        return 1


def run_trials(cfg: ExperimentConfig, workers: int | None = None) -> list[TrialResult]:
    workers = _worker_count() if workers is None else workers
    if workers <= 1 or cfg.trials == 1:
        results = [run_trial(cfg, t) for t in range(cfg.trials)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_trial, [cfg] * cfg.trials, range(cfg.trials)))
    return sorted(results, key=lambda r: r.trial)


def csv_text(cfg: ExperimentConfig, results: list[TrialResult]) -> str:
    buf = io.StringIO()
    buf.write(f"#{CSV_SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        w.writerow(r.row(cfg.config_hash))
    return buf.getvalue()


def summarize(rows: list[dict], mode: str | None = None) -> dict:
    n = len(rows)
    accepted = [r for r in rows if r["verdict"] == "accept"]
    errs = np.array([float(r["test_error"]) for r in accepted if r["test_error"] != ""])
    lams = np.array([float(r["grid_lambda"]) for r in rows if r["grid_lambda"] != ""])
    out = {
        "trials": n,
        "accepts": len(accepted),
        "accept_rate": len(accepted) / n if n else None,
        "mean_error_on_accept": float(errs.mean()) if len(errs) else None,
        "q95_error_on_accept": float(np.quantile(errs, 0.95)) if len(errs) else None,
        "lambda_mean": float(lams.mean()) if len(lams) else None,
        "lambda_max": float(lams.max()) if len(lams) else None,
    }
    if mode is not None:
        out["mode"] = mode
    return out


def run(cfg: ExperimentConfig, out_dir, workers: int | None = None) -> dict:
    """Run every trial and write trials.csv plus summary.json into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = run_trials(cfg, workers)
    text = csv_text(cfg, results)
    with open(out_dir / "trials.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    summary = summarize(read_csv_text(text), cfg.mode)
    summary.update(name=cfg.name, config_hash=cfg.config_hash, learner=cfg.learner,
                   wall_time_total=sum(r.wall_time for r in results))
    summary = _format_floats(summary)
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


# ---------------------------------------------------------------------------
# reports


class ReportError(ValueError):
    pass


def read_csv_text(text: str) -> list[dict]:
    lines = text.splitlines()
    if not lines or lines[0] != f"#{CSV_SCHEMA}":
        raise ReportError(f"missing #{CSV_SCHEMA} schema line")
    reader = csv.reader(lines[1:])
    header = next(reader, None)
    if header != CSV_COLUMNS:
        raise ReportError(f"unexpected columns {header}")
    rows = []
    for i, rec in enumerate(reader):
        if len(rec) != len(CSV_COLUMNS):
            raise ReportError(f"row {i} has {len(rec)} fields")
        rows.append(dict(zip(CSV_COLUMNS, rec)))
    return rows


def report(paths) -> dict[str, dict]:
    """Merge trial CSVs and summarize per config hash."""
    groups: dict[str, list[dict]] = {}
    for path in paths:
        for row in read_csv_text(Path(path).read_text(encoding="utf-8")):
            groups.setdefault(row["config_hash"], []).append(row)
    return {h: summarize(rows) for h, rows in sorted(groups.items())}


def format_report(summaries: dict[str, dict]) -> str:
    cols = ["config_hash", "trials", "accepts", "accept_rate", "mean_error_on_accept",
            "q95_error_on_accept", "lambda_mean"]
    lines = [" ".join(cols)]
    for h, s in summaries.items():
        vals = [h] + [("-" if s[c] is None else (f"{s[c]:.12g}" if isinstance(s[c], float) else str(s[c])))
                      for c in cols[1:]]
        lines.append(" ".join(vals))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# calibration


class CalibrationFailed(RuntimeError):
    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


def calibrate(cfg: ExperimentConfig, constant: str, grid, target: float, trials: int = 200,
              workers: int | None = None) -> tuple[Constants, list[dict]]:
    """Smallest grid value of ``constant`` with empirical accept rate >= target.

    Requires a completeness scenario (identical train and test marginals).
    Raises CalibrationFailed carrying the best grid point when none qualifies.
    """
    if cfg.raw["train_marginal"] != cfg.raw["test_marginal"]:
        raise ConfigError("calibration needs a completeness scenario (test marginal = train marginal)")
    if constant not in {f.name for f in dataclasses.fields(Constants)}:
        raise ConfigError(f"unknown constant {constant!r}")
    history = []
    for value in sorted(grid):
        try:
            consts = cfg.constants.replace(**{constant: type(getattr(cfg.constants, constant))(value)})
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        trial_cfg = cfg.with_constants(consts).with_trials(max(trials, MIN_CALIBRATION_TRIALS))
        results = run_trials(trial_cfg, workers)
        rate = sum(r.outcome.accepted for r in results) / len(results)
        history.append({"value": value, "accept_rate": rate})
        if rate >= target:
            return consts, history
    best = max(history, key=lambda h: (h["accept_rate"], -h["value"]))
    raise CalibrationFailed(f"no value of {constant} reached accept rate {target}", {"best": best,
                                                                                      "history": history})


# ---------------------------------------------------------------------------
# CLI


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tdslearn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a trial battery")
    p_run.add_argument("-c", "--config", required=True)
    p_run.add_argument("-o", "--out", required=True)
    p_cal = sub.add_parser("calibrate", help="tune one constant for completeness")
    p_cal.add_argument("-c", "--config", required=True)
    p_cal.add_argument("--constant", required=True)
    p_cal.add_argument("--grid", required=True, help="comma-separated values")
    p_cal.add_argument("--target", type=float, default=0.95)
    p_cal.add_argument("--trials", type=int, default=200)
    p_cal.add_argument("-o", "--out", required=True, help="constants JSON file to write")
    p_rep = sub.add_parser("report", help="summarize trial CSVs")
    p_rep.add_argument("csv", nargs="+")
    p_rep.add_argument("--columns", help="write whitespace-separated columns for plotting")
    args = parser.parse_args(argv)

    try:
        if args.command == "run":
            summary = run(load_config(args.config), args.out)
            print(json.dumps(summary, sort_keys=True))
        elif args.command == "calibrate":
            grid = [float(v) for v in args.grid.split(",") if v.strip()]
            cfg = load_config(args.config)
            try:
                consts, history = calibrate(cfg, args.constant, grid, args.target, args.trials)
            except CalibrationFailed as exc:
                print(json.dumps({"status": "failed", **exc.best}, sort_keys=True))
                return EXIT_FAIL
            Path(args.out).write_text(json.dumps(consts.to_json(), indent=2, sort_keys=True) + "\n")
            print(json.dumps({"status": "ok", "constants": consts.to_json(), "history": history},
                             sort_keys=True))
        else:
            summaries = report(args.csv)
            text = format_report(summaries)
            sys.stdout.write(text)
            if args.columns:
                Path(args.columns).write_text(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StrictnessInfeasible as exc:
        print(f"infeasible strictness: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ReportError as exc:
        print(f"report error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
