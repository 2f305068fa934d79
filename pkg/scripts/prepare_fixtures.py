"""Rebuild the bundled CSV fixtures from their upstream distributions.

Inputs (fetched by hand):
  --keel-wheel  keel_ds-0.2.5-py3-none-any.whl; its raw .dat files for sonar,
                pima (diabetes) and haberman are header-less comma rows with the
                class last, copied verbatim
  --pydataset   extracted pydataset-0.2.0 sdist directory, whose
                resources.tar.gz holds MASS synth.tr / synth.te as CSV
"""
import argparse
import csv
import tarfile
import zipfile
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "rdep" / "data"
KEEL = {
    "sonar": "balanced/raw/sonar.dat",
    "diabetes": "balanced/raw/pima.dat",
    "haberman": "imbalanced/raw/haberman.dat",
}
HEADERS = {
    "diabetes": ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age"],
    "haberman": ["age", "year", "nodes"],
}
RIPLEY = {"train": "synth.tr", "test": "synth.te"}


def write(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def from_keel(wheel: Path):
    with zipfile.ZipFile(wheel) as z:
        for name, member in KEEL.items():
            text = z.read(f"keel_ds/data/{member}").decode()
            rows = [[c.strip() for c in ln.split(",")] for ln in text.splitlines() if ln.strip()]
            n = len(rows[0]) - 1
            write(OUT / f"{name}.csv", HEADERS.get(name, [f"f{i + 1}" for i in range(n)]) + ["class"], rows)


def from_pydataset(root: Path):
    with tarfile.open(root / "pydataset" / "resources.tar.gz") as tar:
        for split, stem in RIPLEY.items():
            fh = tar.extractfile(f"resources/rdata/csv/MASS/{stem}.csv")
            rows = list(csv.reader(fh.read().decode().splitlines()))[1:]
            write(OUT / f"ripley_{split}.csv", ["xs", "ys", "class"], [r[1:] for r in rows])


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--keel-wheel", type=Path)
    ap.add_argument("--pydataset", type=Path)
    args = ap.parse_args()
    if args.keel_wheel:
        from_keel(args.keel_wheel)
    if args.pydataset:
        from_pydataset(args.pydataset)


if __name__ == "__main__":
    main()
