"""
Rules between user groups and movie groups on MovieLens 100K
============================================================

Needs the corpus in data/ml-100k (see README).  Run from the repo root.
"""
import os
from pathlib import Path

from grarules import Thresholds, enumerate_granules, evaluate_rule, mine
from grarules.ingest import load_ml100k

root = Path(os.environ.get("ML100K_DIR", "data/ml-100k"))
es = load_ml100k(root)
print(es.source.size, "users,", es.target.size, "movies,", len(es.relation), "ratings")

# granules covering at least 10% of their universe
users = enumerate_granules(es.source, "0.1")
movies = enumerate_granules(es.target, "0.1")
print(len(users), "user granules,", len(movies), "movie granules")
for g in movies[:4]:
    print(f"  {g.descriptor.render(es.target.schema)}  n={g.size}")

t = Thresholds(0.1, 0.1, 0.12, 0.15)
rules = mine(es, t)
print(len(rules), "rules")
best = sorted(rules, key=lambda r: r.measures.sconf, reverse=True)[:10]
for r in best:
    print(r.render(es))

# a single rule, measured directly
lh = es.source.descriptor({"Gender": "M", "Occupation": "student"})
rh = es.target.descriptor({"Release-decade": "1990s", "Thriller": 1})
m = evaluate_rule(es, lh, rh, t.tc)
print("students -> 90s thrillers:", m.sconf, float(m.sconf))

# ratings of 3+ only: the relation shrinks and so does the confidence
strict = load_ml100k(root, min_rating=3)
print("with min_rating=3:", evaluate_rule(strict, lh, rh, t.tc).sconf)
