"""Calibrate the cap tester constant on the Gaussian and Laplace completeness scenarios.

Writes one constants file per marginal, e.g. results/constants_gaussian.json,
which configs can consume through "constants_file".
"""

import json
import sys
from pathlib import Path

from tdslearn.harness import CalibrationFailed, calibrate, load_config

CONFIGS = Path(__file__).resolve().parent / "configs"


def main(out_dir: str = "results", grid=(1.0, 2.0, 4.0, 8.0), target: float = 0.95) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    status = 0
    for marginal in ("gaussian", "laplace"):
        cfg = load_config(CONFIGS / f"agnostic_{marginal}.json")
        try:
            consts, history = calibrate(cfg, "cap_tester_C", grid, target)
        except CalibrationFailed as exc:
            print(f"{marginal}: failed, best {exc.best['best']}")
            status = 1
            continue
        (out / f"constants_{marginal}.json").write_text(json.dumps(consts.to_json(), indent=2) + "\n")
        print(f"{marginal}: cap_tester_C = {consts.cap_tester_C} ({history})")
    return status


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
