"""Mine the bundled mini-dataset and compare the run with the frozen goldens.

    python scripts/run_mini.py [--out DIR] [--seed N] [--update-golden]

``--update-golden`` copies delta.csv, lifespan.csv and stats.json over
tests/golden/mini/. Only do that after checking the new numbers by hand.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
import tempfile
from importlib import resources
from pathlib import Path

from maintscore.cli import main as cli_main

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden" / "mini"
FILES = ("delta.csv", "lifespan.csv", "stats.json")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--update-golden", action="store_true")
    args = parser.parse_args(argv)

    dataset = Path(str(resources.files("maintscore.data").joinpath("mini", "dataset.csv")))
    with tempfile.TemporaryDirectory() as tmp:
        out = args.out or Path(tmp) / "run"
        code = cli_main(["mine", str(dataset), "--out", str(out), "--seed", str(args.seed),
                         "--cache-dir", str(Path(tmp) / "cache")])
        if code:
            return code
        stats = json.loads((out / "stats.json").read_text())
        energy = stats["groups"]["energy"]
        print(f"energy commits: n={energy['n']} mean dM={energy['mean']:.3f} "
              f"decrease={energy['percent_decrease']:.3f} p={energy['p']:.4f}")
        for name in FILES:
            same = (out / name).read_bytes() == (GOLDEN / name).read_bytes()
            print(f"{name}: {'matches golden' if same else 'DIFFERS from golden'}")
            if args.update_golden and not same:
                shutil.copy(out / name, GOLDEN / name)
                print(f"  updated {GOLDEN / name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
