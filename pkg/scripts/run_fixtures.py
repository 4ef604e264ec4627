"""Build and verify every named fixture; print one summary line each.

    python3 scripts/run_fixtures.py [--seed N] [--json DIR]
"""

import argparse
import time
from pathlib import Path

from surfembed.embedder import embed
from surfembed.fixtures import PIPELINE_FIXTURES
from surfembed.verify import verify


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", type=Path, default=None, help="write each report here")
    args = ap.parse_args()
    if args.json:
        args.json.mkdir(parents=True, exist_ok=True)

    print(f"{'fixture':32s} {'ok':4s} {'secs':>6s}  {'b scale':>9s}  failed")
    for name, make in PIPELINE_FIXTURES.items():
        t0 = time.perf_counter()
        model, truncation = make()
        art = embed(model, truncation)
        rep = verify(art, seed=args.seed)
        dt = time.perf_counter() - t0
        print(f"{name:32s} {'yes' if rep.passed else 'NO':4s} {dt:6.2f}  {art.normalization:9.2e}  {','.join(rep.failed())}")
        if args.json:
            (args.json / f"{name}.json").write_text(rep.to_json() + "\n")


if __name__ == "__main__":
    main()
