# Reference values from scipy/numpy for the statistics oracle test.
import json, numpy as np
from scipy import stats
rng = np.random.default_rng(20261018)
print(repr(stats.kruskal([1,2,3],[10,11,12])))
out = []
for i in range(100):
    tied = i % 3 == 0
    k = int(rng.integers(2, 5))
    groups = []
    for _ in range(k):
        n = int(rng.integers(2, 31))
        if tied:
            g = rng.integers(0, 8, n).astype(float)
        else:
            g = np.round(rng.normal(rng.normal(0, 1), rng.uniform(0.5, 2), n), 6)
        groups.append(g)
    a, b = groups[0], groups[1]
    pooled = np.sqrt(((len(a)-1)*a.var(ddof=1) + (len(b)-1)*b.var(ddof=1)) / (len(a)+len(b)-2))
    d = None if pooled == 0 else float(abs(a.mean()-b.mean())/pooled)
    if np.ptp(np.concatenate(groups)) == 0:
        h, p = 0.0, 1.0
    else:
        h, p = stats.kruskal(*groups)
    n = int(rng.integers(2, 31))
    if tied:
        x = rng.integers(0, 6, n).astype(float); y = rng.integers(0, 6, n).astype(float)
    else:
        x = np.round(rng.normal(size=n), 6); y = np.round(x*rng.uniform(-1,1) + rng.normal(size=n), 6)
    tau = stats.kendalltau(x, y, variant='b').statistic
    out.append(dict(groups=[g.tolist() for g in groups], cohens_d=d, kw_h=float(h), kw_p=float(p),
                    x=x.tolist(), y=y.tolist(), kendall_tau=None if np.isnan(tau) else float(tau)))
json.dump(out, open('stats_reference.json','w'))
print(sum(o['cohens_d'] is None for o in out), sum(o['kendall_tau'] is None for o in out))
