"""
A three-user, three-movie relation, mined by hand and by the library
===================================================================

Run from the repository root:  python3 notebooks/01_toy_mmer.py
"""
from fractions import Fraction
from pathlib import Path

import numpy as np

from grarules import Thresholds, block_of, lower_approx_inverse, mine, neighborhood
from grarules.ingest import load_generic

es = load_generic(Path(__file__).resolve().parent.parent / "tests" / "data" / "toy")
print(es.relation.forward.astype(int))  # rows are users, columns movies

# a granule is the block of objects sharing a conjunction of attribute values
males = es.source.descriptor({"Gender": "M"})
print(males.render(es.source.schema), np.flatnonzero(block_of(es.source, males)))

# who watched at least half of the 1990s movies?
nineties = block_of(es.target, es.target.descriptor({"Decade": "1990s"}))
print(np.flatnonzero(lower_approx_inverse(es.relation, nineties, Fraction(1, 2))))
for x in range(es.source.size):
    print(es.source.objects[x], "->", [es.target.objects[y] for y in np.flatnonzero(neighborhood(es.relation, x))])

# every rule with both sides covering a third of their universe
rules = mine(es, Thresholds("1/3", "1/3", 1, 1))
print(len(rules), "rules at sc = tc = 1")
for r in rules[:5]:
    print(r.render(es))

# lowering tc admits users who saw only part of the target granule
print(len(mine(es, Thresholds("1/3", "1/3", 1, "1/2"))), "rules at tc = 1/2")
