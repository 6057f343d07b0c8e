"""Backward mining of granular association rules."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    GranuleDescriptor,
    Mmer,
    Thresholds,
    UndefinedRatioError,
    as_fraction,
    block_of,
    lower_approx_inverse,
    ratio_at_least,
)
from .granules import MiningMode, enumerate_granules


@dataclass(frozen=True)
class RuleMeasures:
    scov: Fraction
    tcov: Fraction
    sconf: Fraction
    tc: Fraction

    @property
    def tconf(self) -> Fraction:
        # target confidence is not computable from a rule; it is the threshold used
        return self.tc


@dataclass(frozen=True)
class Rule:
    source: GranuleDescriptor
    target: GranuleDescriptor
    lh_size: int
    rh_size: int
    measures: RuleMeasures

    @property
    def key(self) -> tuple[GranuleDescriptor, GranuleDescriptor]:
        return self.source, self.target

    def render(self, es: Mmer, digits: int = 3) -> str:
        m = self.measures
        f = lambda q: f"{float(q):.{digits}f}"  # noqa: E731
        return (
            f"{self.source.render(es.source.schema)}({self.lh_size}) ⇒ "
            f"{self.target.render(es.target.schema)}({self.rh_size}) "
            f"[scov = {f(m.scov)}, tcov = {f(m.tcov)}, sconf = {f(m.sconf)}, tconf = {f(m.tconf)}]"
        )


def source_confidence(es: Mmer, lh: np.ndarray, rh: np.ndarray, tc) -> Fraction:
    """Share of ``lh`` whose neighborhoods hit at least ``tc`` of ``rh``."""
    lh = np.asarray(lh, dtype=bool)
    n_lh = int(np.count_nonzero(lh))
    if n_lh == 0 or not np.any(rh):
        raise UndefinedRatioError("source confidence of a rule with an empty side")
    covered = lower_approx_inverse(es.relation, rh, tc)
    return Fraction(int(np.count_nonzero(covered & lh)), n_lh)


def evaluate_rule(es: Mmer, source: GranuleDescriptor, target: GranuleDescriptor, tc) -> RuleMeasures:
    """Measures of ``source ⇒ target`` computed from scratch."""
    tc = as_fraction(tc)
    lh = block_of(es.source, source)
    rh = block_of(es.target, target)
    n_lh, n_rh = int(np.count_nonzero(lh)), int(np.count_nonzero(rh))
    if n_lh == 0 or n_rh == 0:
        raise UndefinedRatioError("rule side with an empty extension")
    return RuleMeasures(
        scov=Fraction(n_lh, es.source.size),
        tcov=Fraction(n_rh, es.target.size),
        sconf=source_confidence(es, lh, rh, tc),
        tc=tc,
    )


def mine(es: Mmer, t: Thresholds, mode=MiningMode.POSITIVE, *, max_len=None, prune=True) -> list[Rule]:
    """All rules whose sides meet ``ms``/``mt`` and whose source confidence at
    ``tc`` meets ``sc``, sorted by (source, target) descriptor.

    With ``prune`` the lower approximation of each target extension is
    computed once and shared by every source granule; without it each
    (source, target) pair rescans its left-hand objects.
    """
    mode = MiningMode.parse(mode)
    sources = enumerate_granules(es.source, t.ms, mode, max_len)
    targets = enumerate_granules(es.target, t.mt, mode, max_len)
    if not sources or not targets:
        return []
    n_u, n_v = es.source.size, es.target.size
    stack = np.array([g.extension for g in sources], dtype=np.float64)
    lh_sizes = np.array([g.size for g in sources], dtype=np.int64)
    rules = []
    for tg in targets:
        y = tg.extension
        rh_size = tg.size
        tcov = Fraction(rh_size, n_v)
        if prune:
            x = lower_approx_inverse(es.relation, y, t.tc)
            inside = np.rint(stack @ x).astype(np.int64)
        else:
            inside = np.array([_covered_inline(es, g.extension, y, t.tc) for g in sources], dtype=np.int64)
        keep = ratio_at_least(inside, lh_sizes, t.sc)
        for i in np.flatnonzero(keep):
            g = sources[i]
            rules.append(
                Rule(
                    g.descriptor,
                    tg.descriptor,
                    int(lh_sizes[i]),
                    rh_size,
                    RuleMeasures(
                        Fraction(int(lh_sizes[i]), n_u), tcov, Fraction(int(inside[i]), int(lh_sizes[i])), t.tc
                    ),
                )
            )
    rules.sort(key=lambda r: r.key)
    return rules


def _covered_inline(es: Mmer, lh: np.ndarray, rh: np.ndarray, tc: Fraction) -> int:
    members = np.flatnonzero(lh)
    hits = np.count_nonzero(es.relation.forward[members] & rh, axis=1)
    return int(np.count_nonzero(ratio_at_least(hits, int(np.count_nonzero(rh)), tc)))
