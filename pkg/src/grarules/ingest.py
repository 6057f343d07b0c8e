"""Loaders for MovieLens ml-100k and a small typed-CSV corpus format.

ml-100k files are read bit-exactly in their distributed layout:

* ``u.user``: ``id|age|gender|occupation|zip``
* ``u.item``: ``id|title|release date|video date|URL|`` + 19 genre flags
* ``u.data``: ``user<TAB>item<TAB>rating<TAB>timestamp``
"""
from __future__ import annotations

import bisect
import csv
import logging
import os
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from .core import (
    AttributeSchema,
    BinaryRelation,
    GranularError,
    InformationSystem,
    Kind,
    Mmer,
    SchemaError,
)

log = logging.getLogger(__name__)

ML_ENCODING = "latin-1"

#: genre flag order in u.item, after the leading ``unknown`` flag
GENRES = (
    "Action", "Adventure", "Animation", "Children's", "Comedy", "Crime",
    "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror", "Musical",
    "Mystery", "Romance", "Sci-Fi", "Thriller", "War", "Western",
)
UNKNOWN_GENRE = "unknown"
UNKNOWN_DECADE = "unknown-decade"


class CorpusError(GranularError):
    pass


class ParseError(CorpusError, ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


class DuplicateKeyError(CorpusError, ValueError):
    pass


@dataclass(frozen=True)
class DiscretizationSpec:
    """Inclusive upper bounds of consecutive bins starting at ``lower``; the
    last bin is unbounded."""

    attribute: str
    bounds: tuple[int, ...]
    lower: int = 0

    def __post_init__(self):
        bounds = tuple(int(b) for b in self.bounds)
        if any(b >= c for b, c in zip(bounds, bounds[1:])) or (bounds and bounds[0] < self.lower):
            raise ValueError(f"bin bounds must be strictly increasing from {self.lower}: {bounds}")
        object.__setattr__(self, "bounds", bounds)

    @property
    def labels(self) -> tuple[str, ...]:
        lows = (self.lower,) + tuple(b + 1 for b in self.bounds)
        return tuple(f"[{lo},{hi}]" for lo, hi in zip(lows, self.bounds)) + (f"[{lows[-1]},inf)",)

    def label(self, value: int) -> str:
        if value < self.lower:
            raise ValueError(f"{value} is below the first bin")
        return self.labels[bisect.bisect_left(self.bounds, value)]


#: [0,17], [18,24], [25,34], [35,44], [45,49], [50,55], [56,inf)
DEFAULT_AGE_BINS = DiscretizationSpec("Age-bin", (17, 24, 34, 44, 49, 55))


@dataclass(frozen=True)
class PrioritySpec:
    """Genre names, most important first."""

    order: tuple[str, ...] = GENRES

    def __post_init__(self):
        order = tuple(self.order)
        if len(set(order)) != len(order):
            raise ValueError("priority list has duplicates")
        unknown = set(order) - set(GENRES)
        if unknown:
            raise ValueError(f"not genre names: {sorted(unknown)}")
        object.__setattr__(self, "order", order)

    def pick(self, genres) -> str:
        for g in self.order:
            if g in genres:
                return g
        return UNKNOWN_GENRE


def _lines(path, encoding="utf-8"):
    with open(path, encoding=encoding, newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if line:
                yield lineno, line


def _int(path, lineno, text, what):
    try:
        return int(text)
    except ValueError:
        raise ParseError(path, lineno, f"{what} is not an integer: {text!r}") from None


def _check_unique(path, lineno, seen, key):
    if key in seen:
        raise DuplicateKeyError(f"{path}:{lineno}: duplicate id {key}")
    seen.add(key)


def load_users(path, bins: DiscretizationSpec = DEFAULT_AGE_BINS) -> InformationSystem:
    """Users with Age-bin, Gender and Occupation; the zip code is dropped."""
    ids, rows, seen = [], [], set()
    for lineno, line in _lines(path, ML_ENCODING):
        fields = line.split("|")
        if len(fields) != 5:
            raise ParseError(path, lineno, f"expected 5 fields, got {len(fields)}")
        uid = _int(path, lineno, fields[0], "user id")
        age = _int(path, lineno, fields[1], "age")
        _check_unique(path, lineno, seen, uid)
        try:
            label = bins.label(age)
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
        ids.append(uid)
        rows.append((label, fields[2], fields[3]))
    schema = (
        AttributeSchema.nominal(bins.attribute, bins.labels),
        AttributeSchema.nominal("Gender", ()),
        AttributeSchema.nominal("Occupation", ()),
    )
    return InformationSystem.from_rows(ids, schema, rows)


def decade(release_date: str) -> str:
    if not release_date:
        return UNKNOWN_DECADE
    year = datetime.strptime(release_date, "%d-%b-%Y").year
    return f"{year - year % 10}s"


def _read_items(path):
    """Yield (lineno, id, decade label, set of flagged genres incl. unknown)."""
    names = (UNKNOWN_GENRE,) + GENRES
    for lineno, line in _lines(path, ML_ENCODING):
        fields = line.split("|")
        if len(fields) != 5 + len(names):
            raise ParseError(path, lineno, f"expected {5 + len(names)} fields, got {len(fields)}")
        mid = _int(path, lineno, fields[0], "movie id")
        try:
            label = decade(fields[2])
        except ValueError:
            raise ParseError(path, lineno, f"malformed release date {fields[2]!r}") from None
        flags = fields[5:]
        if any(f not in ("0", "1") for f in flags):
            raise ParseError(path, lineno, f"genre flags must be 0 or 1: {flags}")
        yield lineno, mid, label, {g for g, f in zip(names, flags) if f == "1"}


def load_movies(
    path, mode: str = "scaling", priority: PrioritySpec | None = None, keep_unknown: bool = False
) -> InformationSystem:
    """Movies with Release-decade plus either 18 scaled genre flags
    (``scaling``) or a single nominal Genre picked by priority (``priority``).

    ``keep_unknown`` adds the ``unknown`` flag as a 19th scaled attribute in
    scaling mode; by default it is dropped since it encodes the empty genre set.
    """
    if mode not in ("scaling", "priority"):
        raise ValueError(f"unknown preprocessing mode {mode!r}")
    priority = priority or PrioritySpec()
    flagged = ((UNKNOWN_GENRE,) if keep_unknown else ()) + GENRES
    ids, rows, seen = [], [], set()
    for lineno, mid, label, genres in _read_items(path):
        _check_unique(path, lineno, seen, mid)
        ids.append(mid)
        if mode == "scaling":
            rows.append((label,) + tuple(int(g in genres) for g in flagged))
        else:
            if not genres:
                log.info("%s:%d: movie %d has no genre flag, using %r", path, lineno, mid, UNKNOWN_GENRE)
            rows.append((label, priority.pick(genres)))
    decade_attr = AttributeSchema.nominal("Release-decade", ())
    if mode == "scaling":
        schema = (decade_attr,) + tuple(AttributeSchema.scaled(g) for g in flagged)
    else:
        schema = (decade_attr, AttributeSchema.nominal("Genre", ()))
    return InformationSystem.from_rows(ids, schema, rows)


def load_ratings(path, n_users: int, n_movies: int, min_rating: int = 1) -> BinaryRelation:
    """User-movie pairs rated at least ``min_rating``; ids are 1-based."""
    if not 1 <= min_rating <= 5:
        raise ValueError(f"min_rating must lie in [1, 5], got {min_rating}")
    best: dict[tuple[int, int], int] = {}
    for lineno, line in _lines(path):
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(path, lineno, f"expected 4 fields, got {len(fields)}")
        u, m, r, _ = (_int(path, lineno, f, "field") for f in fields)
        if not (1 <= u <= n_users and 1 <= m <= n_movies and 1 <= r <= 5):
            raise ParseError(path, lineno, f"id or rating out of range: {line!r}")
        key = (u - 1, m - 1)
        if key in best:
            log.info("%s:%d: duplicate rating for user %d movie %d merged", path, lineno, u, m)
            r = max(r, best[key])
        best[key] = r
    return BinaryRelation.from_pairs(n_users, n_movies, (k for k, r in best.items() if r >= min_rating))


def load_ml100k(
    directory,
    preprocess: str = "scaling",
    bins: DiscretizationSpec = DEFAULT_AGE_BINS,
    priority: PrioritySpec | None = None,
    min_rating: int = 1,
    keep_unknown: bool = False,
) -> Mmer:
    directory = Path(directory)
    users = load_users(directory / "u.user", bins)
    movies = load_movies(directory / "u.item", preprocess, priority, keep_unknown)
    for system, what in ((users, "user"), (movies, "movie")):
        if system.objects != tuple(range(1, system.size + 1)):
            raise CorpusError(f"{what} ids are not 1..{system.size} in file order")
    rel = load_ratings(directory / "u.data", users.size, movies.size, min_rating)
    return Mmer(users, movies, rel)


def genre_sets(path) -> dict[int, set[str]]:
    """Raw genre flags per movie id, ``unknown`` included."""
    return {mid: genres for _, mid, _, genres in _read_items(path)}


# --- generic typed-CSV corpus -------------------------------------------------
#
# source.csv / target.csv: header ``id,<name>:nominal|scaled,...``
# relation.csv: header ``source,target`` then one id pair per row


def _load_table(path) -> InformationSystem:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "missing header") from None
        schema = []
        for cell in header[1:]:
            name, _, kind = cell.rpartition(":")
            try:
                schema.append(AttributeSchema(name, Kind(kind)))
            except ValueError:
                raise ParseError(path, 1, f"column {cell!r} must be typed :nominal or :scaled") from None
        ids, rows, seen = [], [], set()
        for lineno, rec in enumerate(reader, 2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise ParseError(path, lineno, f"expected {len(header)} fields, got {len(rec)}")
            _check_unique(path, lineno, seen, rec[0])
            row = []
            for attr, cell in zip(schema, rec[1:]):
                if attr.is_scaled:
                    if cell not in ("0", "1"):
                        raise ParseError(path, lineno, f"scaled column {attr.name!r} holds {cell!r}")
                    row.append(int(cell))
                else:
                    row.append(cell)
            ids.append(rec[0])
            rows.append(row)
    try:
        return InformationSystem.from_rows(ids, schema, rows)
    except SchemaError as exc:
        raise CorpusError(f"{path}: {exc}") from None


def load_generic(directory) -> Mmer:
    directory = Path(directory)
    source = _load_table(directory / "source.csv")
    target = _load_table(directory / "target.csv")
    src_index = {o: i for i, o in enumerate(source.objects)}
    tgt_index = {o: i for i, o in enumerate(target.objects)}
    path = directory / "relation.csv"
    pairs = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for lineno, rec in enumerate(reader, 2):
            if not rec:
                continue
            if len(rec) != 2 or rec[0] not in src_index or rec[1] not in tgt_index:
                raise ParseError(path, lineno, f"unknown pair {rec!r}")
            pairs.append((src_index[rec[0]], tgt_index[rec[1]]))
    return Mmer(source, target, BinaryRelation.from_pairs(source.size, target.size, pairs))


def _dump_table(system: InformationSystem, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id"] + [f"{a.name}:{a.kind.value}" for a in system.schema])
        for i, obj in enumerate(system.objects):
            w.writerow([obj] + [system.value(i, j) for j in range(len(system.schema))])


def dump_generic(es: Mmer, directory) -> None:
    directory = Path(directory)
    os.makedirs(directory, exist_ok=True)
    _dump_table(es.source, directory / "source.csv")
    _dump_table(es.target, directory / "target.csv")
    with open(directory / "relation.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["source", "target"])
        for x, y in es.relation.pairs():
            w.writerow([es.source.objects[x], es.target.objects[y]])
