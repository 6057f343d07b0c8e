"""Rebuild ml-100k's u.user / u.item / u.data from RecBole's bundled copy.

RecBole ships ml-100k as tab-separated "atomic" files inside its wheel.
Those carry every field the loaders use (ids, ages, genders, occupations,
release years, genre lists, ratings); titles lose their "(year)" suffix,
release dates collapse to 01-Jan-<year>, and video date / URL are blank.

    pip download --no-deps recbole==1.2.1 -d /tmp/recbole
    python tools/ml100k_from_recbole.py /tmp/recbole/recbole-1.2.1-py3-none-any.whl data/ml-100k
"""
import argparse
import io
import sys
import zipfile
from pathlib import Path

GENRES = (
    "unknown", "Action", "Adventure", "Animation", "Children's", "Comedy", "Crime",
    "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror", "Musical",
    "Mystery", "Romance", "Sci-Fi", "Thriller", "War", "Western",
)
PREFIX = "recbole/dataset_example/ml-100k/ml-100k"


def read_atomic(wheel: zipfile.ZipFile, suffix: str):
    raw = wheel.read(f"{PREFIX}.{suffix}")
    lines = io.TextIOWrapper(io.BytesIO(raw), encoding="utf-8", newline="").read().splitlines()
    return [line.split("\t") for line in lines[1:] if line]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("wheel")
    p.add_argument("out")
    args = p.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(args.wheel) as wheel:
        users = read_atomic(wheel, "user")
        items = read_atomic(wheel, "item")
        inter = read_atomic(wheel, "inter")

    with open(out / "u.user", "w", encoding="latin-1", newline="") as fh:
        for uid, age, gender, occupation, zipcode in sorted(users, key=lambda r: int(r[0])):
            fh.write(f"{uid}|{age}|{gender}|{occupation}|{zipcode}\n")

    with open(out / "u.item", "w", encoding="latin-1", errors="replace", newline="") as fh:
        for mid, title, year, classes in sorted(items, key=lambda r: int(r[0])):
            date = f"01-Jan-{year}" if year.isdigit() else ""
            genres = set(classes.split(" "))
            flags = "|".join("1" if g in genres else "0" for g in GENRES)
            fh.write(f"{mid}|{title.replace('|', '/')}|{date}|||{flags}\n")

    with open(out / "u.data", "w", encoding="ascii", newline="") as fh:
        for uid, mid, rating, ts in inter:
            fh.write(f"{uid}\t{mid}\t{int(float(rating))}\t{int(float(ts))}\n")
    print(f"wrote {len(users)} users, {len(items)} movies, {len(inter)} ratings to {out}", file=sys.stderr)


if __name__ == "__main__":
    main()
