"""
Multi-valued genres: keep every flag, or keep one genre per movie?
=================================================================

Scaling turns each genre into a 0/1 attribute.  Priority keeps the first
listed genre and throws the rest away, so fewer granules and fewer rules.
"""
import os
from fractions import Fraction
from pathlib import Path

from grarules import Thresholds, mine
from grarules.ingest import genre_sets, load_ml100k

root = Path(os.environ.get("ML100K_DIR", "data/ml-100k"))
scaled = load_ml100k(root)
single = load_ml100k(root, preprocess="priority")

raw = genre_sets(root / "u.item")
print(sum(len(g) > 1 for g in raw.values()), "of", len(raw), "movies list more than one genre")

print("ms=mt  scaling  priority  ratio")
for k in range(5, 13):
    m = Fraction(k, 100)
    t = Thresholds(m, m, "0.1", "0.1")
    a, b = len(mine(scaled, t)), len(mine(single, t))
    print(f"{float(m):.2f}  {a:7d}  {b:8d}  {a / b:5.2f}")
