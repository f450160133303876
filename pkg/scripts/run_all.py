"""Run every config under scripts/configs and print a merged report.

    python scripts/run_all.py [--out results] [--only NAME ...]
"""

import argparse
import json
import sys
from pathlib import Path

from tdslearn.harness import format_report, load_config, report, run

CONFIGS = Path(__file__).resolve().parent / "configs"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--only", nargs="*", help="config stems to run")
    args = ap.parse_args()
    paths = sorted(CONFIGS.glob("*.json"))
    if args.only:
        paths = [p for p in paths if p.stem in set(args.only)]
    csvs = []
    for path in paths:
        out = Path(args.out) / path.stem
        summary = run(load_config(path), out)
        print(f"{path.stem}: {json.dumps(summary, sort_keys=True)}", flush=True)
        csvs.append(out / "trials.csv")
    sys.stdout.write(format_report(report(csvs)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
