"""Level-wise enumeration of granules that meet a coverage threshold."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import groupby

import numpy as np

from .core import (
    Granule,
    GranuleDescriptor,
    InformationSystem,
    UndefinedRatioError,
    as_fraction,
    ratio_at_least,
)


class MiningMode(enum.Enum):
    POSITIVE = "positive-only"
    ALL = "all-granules"

    @classmethod
    def parse(cls, text) -> MiningMode:
        if isinstance(text, cls):
            return text
        aliases = {"positive": cls.POSITIVE, "all": cls.ALL}
        return aliases.get(text) or cls(text)


@dataclass(frozen=True)
class GranuleLevel:
    length: int
    granules: tuple[Granule, ...]

    def __post_init__(self):
        object.__setattr__(self, "granules", tuple(self.granules))
        descs = [g.descriptor for g in self.granules]
        if any(len(d) != self.length for d in descs):
            raise ValueError(f"all descriptors of level {self.length} need {self.length} terms")
        if any(a >= b for a, b in zip(descs, descs[1:])):
            raise ValueError("level is not strictly sorted")

    def __len__(self) -> int:
        return len(self.granules)

    def __iter__(self):
        return iter(self.granules)


def _check_mincov(mincov):
    mincov = as_fraction(mincov)
    if not 0 < mincov <= 1:
        raise ValueError(f"coverage threshold must lie in (0, 1], got {mincov}")
    return mincov


def seed_granules(system: InformationSystem, mincov, mode=MiningMode.POSITIVE) -> GranuleLevel:
    """Single-term granules covering at least ``mincov`` of the universe.

    In positive mode a scaled attribute only contributes its value-1 granule.
    """
    mincov = _check_mincov(mincov)
    mode = MiningMode.parse(mode)
    n = system.size
    if n == 0:
        raise UndefinedRatioError("support over an empty universe")
    seeds = []
    for a, attr in enumerate(system.schema):
        col = system.codes[:, a]
        for code, value in enumerate(attr.domain):
            if mode is MiningMode.POSITIVE and attr.is_scaled and value != 1:
                continue
            ext = col == code
            if ratio_at_least(int(np.count_nonzero(ext)), n, mincov):
                ext.setflags(write=False)
                seeds.append(Granule(GranuleDescriptor(((a, value),)), ext))
    seeds.sort(key=lambda g: g.descriptor)
    return GranuleLevel(1, seeds)


def extend_level(prev: GranuleLevel, system: InformationSystem, mincov, mode=MiningMode.POSITIVE) -> GranuleLevel:
    """Apriori join: pair granules sharing their first k-1 terms and differing
    in the attribute of the last one; keep joins meeting ``mincov``.

    Positivity needs no re-check since a join of positive parents is positive.
    """
    mincov = _check_mincov(mincov)
    n = system.size
    k = prev.length
    out = []
    for _, group in groupby(prev.granules, key=lambda g: g.descriptor.terms[:-1]):
        group = list(group)
        for i, left in enumerate(group):
            last_attr = left.descriptor.terms[-1][0]
            for right in group[i + 1:]:
                if right.descriptor.terms[-1][0] == last_attr:
                    continue
                ext = left.extension & right.extension
                if ratio_at_least(int(np.count_nonzero(ext)), n, mincov):
                    ext.setflags(write=False)
                    terms = left.descriptor.terms + right.descriptor.terms[-1:]
                    out.append(Granule(GranuleDescriptor(terms), ext))
    out.sort(key=lambda g: g.descriptor)
    return GranuleLevel(k + 1, out)


def iter_levels(system: InformationSystem, mincov, mode=MiningMode.POSITIVE, max_len=None):
    level = seed_granules(system, mincov, mode)
    while len(level) and (max_len is None or level.length <= max_len):
        yield level
        level = extend_level(level, system, mincov, mode)


def enumerate_granules(system: InformationSystem, mincov, mode=MiningMode.POSITIVE, max_len=None) -> list[Granule]:
    """All granules of length >= 1 (and at most ``max_len``) with support at
    least ``mincov``, in canonical descriptor order."""
    granules = [g for level in iter_levels(system, mincov, mode, max_len) for g in level]
    granules.sort(key=lambda g: g.descriptor)
    return granules
