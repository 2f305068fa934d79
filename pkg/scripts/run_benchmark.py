"""Cross-validated comparison of all classifier kinds on the bundled datasets.

Extra datasets are picked up from RDEP_DATA_DIR. Equivalent to
``rdep benchmark --out-dir OUT``.
"""
import argparse
import sys

from rdep.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="benchmark-out")
    ap.add_argument("--jobs", type=int, default=None)
    args, rest = ap.parse_known_args()
    argv = ["benchmark", "--skip-missing", "--out-dir", args.out_dir] + rest
    if args.jobs:
        argv += ["--jobs", str(args.jobs)]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
