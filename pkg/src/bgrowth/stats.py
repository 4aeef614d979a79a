"""Two-sample Wilcoxon rank-sum (Mann-Whitney) test with midrank ties.

Small samples (n1 + n2 <= 20) get an exact two-sided p-value from the
full distribution of rank assignments; larger ones use the normal
approximation with tie-corrected variance and a continuity correction.
The exact branch enumerates via a subset-sum count over the observed
midranks, which is identical to enumerating every split but runs in
polynomial time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EXACT_LIMIT = 20  # combined size at or below which the exact distribution is used


@dataclass(frozen=True)
class RankSumResult:
    u_statistic: float
    p_two_sided: float
    method: str  # "exact" or "normal-approximation"
    n1: int
    n2: int

    def significant(self, alpha: float = 0.01) -> bool:
        return self.p_two_sided < alpha


def _midranks(values: list[float]) -> list[float]:
    """Ranks 1..n with tied values sharing the mean of their rank block."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def _norm_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def _exact_two_sided(doubled_ranks: list[int], n1: int, u2_obs: int) -> float:
    """P(U as or more extreme than observed) over all C(n, n1) rank splits.

    Works in doubled-rank units so midranks stay integral.  dp[c][s]
    counts subsets of size c with doubled-rank sum s.
    """
    n = len(doubled_ranks)
    n2 = n - n1
    total_sum = sum(doubled_ranks)
    dp = [[0] * (total_sum + 1) for _ in range(n1 + 1)]
    dp[0][0] = 1
    for r in doubled_ranks:
        for c in range(min(n1, n) - 1, -1, -1):
            row = dp[c]
            nxt = dp[c + 1]
            for s in range(total_sum - r, -1, -1):
                if row[s]:
                    nxt[s + r] += row[s]
    counts = dp[n1]

    m2 = 2 * n1 * n2  # doubled U range endpoint
    offset = n1 * (n1 + 1)  # doubled min rank sum
    lo = min(u2_obs, m2 - u2_obs)
    hi = max(u2_obs, m2 - u2_obs)
    total = 0
    extreme = 0
    for s, cnt in enumerate(counts):
        if not cnt:
            continue
        u2 = s - offset
        total += cnt
        if u2 <= lo or u2 >= hi:
            extreme += cnt
    return min(1.0, extreme / total)


def wilcoxon_ranksum(a: list[float], b: list[float]) -> RankSumResult:
    """Two-sided test of equal location for two independent samples."""
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    n1, n2 = len(a), len(b)
    if n1 < 1 or n2 < 1:
        raise ValueError("both samples must be non-empty")

    ranks = _midranks(a + b)
    r1 = sum(ranks[:n1])
    u = r1 - n1 * (n1 + 1) / 2.0

    if n1 + n2 <= EXACT_LIMIT:
        doubled = [int(round(2 * r)) for r in ranks]
        u2_obs = int(round(2 * r1)) - n1 * (n1 + 1)
        p = _exact_two_sided(doubled, n1, u2_obs)
        return RankSumResult(u_statistic=u, p_two_sided=p, method="exact", n1=n1, n2=n2)

    n = n1 + n2
    mu = n1 * n2 / 2.0
    # tie correction: subtract sum(t^3 - t) over tie groups from n^3 - n
    tie_sum = 0
    seen: dict[float, int] = {}
    for v in a + b:
        seen[v] = seen.get(v, 0) + 1
    for t in seen.values():
        tie_sum += t**3 - t
    var = n1 * n2 / 12.0 * ((n + 1) - tie_sum / (n * (n - 1)))
    if var <= 0.0:
        return RankSumResult(u_statistic=u, p_two_sided=1.0, method="normal-approximation", n1=n1, n2=n2)
    sd = math.sqrt(var)
    if u > mu:
        z = (u - mu - 0.5) / sd
    elif u < mu:
        z = (u - mu + 0.5) / sd
    else:
        z = 0.0
    p = min(1.0, 2.0 * _norm_sf(abs(z)))
    return RankSumResult(u_statistic=u, p_two_sided=p, method="normal-approximation", n1=n1, n2=n2)
