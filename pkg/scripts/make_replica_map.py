"""Regenerate the committed replica benchmark map.

    python scripts/make_replica_map.py [--check]
"""

import argparse
import sys
from pathlib import Path

from fusionplan.replica import replica_pgm

TARGET = Path(__file__).resolve().parents[1] / "src" / "fusionplan" / "data" / "replica_map.pgm"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="only verify the fixture is up to date")
    ap.add_argument("--out", type=Path, default=TARGET)
    args = ap.parse_args()
    data = replica_pgm()
    if args.check:
        ok = args.out.exists() and args.out.read_bytes() == data
        print("up to date" if ok else "STALE")
        return 0 if ok else 1
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_bytes(data)
    print(f"wrote {args.out} ({len(data)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
