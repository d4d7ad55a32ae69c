"""First-quadrant spectral page bounds and a seeded rank simulator.

A page is a finitely supported table of dimensions E2^(s,t) with declared
bounds s <= M, t <= N.  Two inequalities relate the page to any abutment it
converges to:

    dim H^n  <=  E2^(n,0) + sum_(0<=i<=n-1) E2^(i,n-i)
    E2^(n,0) <=  dim H^n + sum_(2<=i<=N) E2^(n-i,i-1)

The simulator drives the page to its degenerate state through pages
r = 2..N+1 with admissible random differential ranks (rank in + rank out
never exceeding a cell, no reuse of killed classes), recording the abutment
as the column sums of the final page.  It works with dimensions and ranks
only; admissibility is the whole contract.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import InvalidInput


@dataclass
class SpectralPage:
    """dims[(s, t)] = dim E2^(s,t); zero outside s <= M, t <= N."""

    M: int
    N: int
    dims: dict[tuple[int, int], int] = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (s, t), d in self.dims.items():
            if d < 0:
                raise InvalidInput("page dimensions are nonnegative")
            if d == 0:
                continue
            if s < 0 or t < 0:
                raise InvalidInput("first-quadrant pages only")
            if s > self.M or t > self.N:
                raise InvalidInput(f"entry ({s},{t}) exceeds bounds ({self.M},{self.N})")
            clean[(s, t)] = d
        self.dims = clean

    def get(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def total(self) -> int:
        return sum(self.dims.values())


def bound_upper(page: SpectralPage, n: int) -> int:
    """E2^(n,0) + sum over the rest of the antidiagonal s + t = n."""
    return page.get(n, 0) + sum(page.get(i, n - i) for i in range(n))


@dataclass
class EdgeReport:
    n: int
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def slack(self) -> int:
        return self.rhs - self.lhs


def bound_edge(page: SpectralPage, n: int, hn: int) -> EdgeReport:
    """E2^(n,0) <= dim H^n + sum_(2<=i<=N) E2^(n-i, i-1), with slack."""
    if hn < 0:
        raise InvalidInput("abutment dimensions are nonnegative")
    rhs = hn + sum(page.get(n - i, i - 1) for i in range(2, page.N + 1))
    return EdgeReport(n, page.get(n, 0), rhs)


@dataclass
class SimulationResult:
    seed: int
    abutment: list[int]  # H^0 .. H^(M+N)
    pages: list[dict]  # dims per page, page index 2 .. N+1
    differentials: list[dict]  # per page: {(s,t): rank}

    def euler_abutment(self) -> int:
        return sum((-1) ** n * d for n, d in enumerate(self.abutment))


def simulate(page: SpectralPage, seed: int) -> SimulationResult:
    """Run pages r = 2..N+1 with seeded admissible differential ranks.

    On page r the differential maps (s,t) to (s+r, t-r+1); the drawn rank is
    capped by the source dimension minus what already maps into the source,
    and by the target dimension.  The page after the last differential
    (degeneration by page N+1) yields the abutment by antidiagonal sums.
    """
    rng = random.Random(seed)
    cur = dict(page.dims)
    pages_log = [dict(cur)]
    diff_log = []
    for r in range(2, page.N + 1):
        incoming: dict[tuple[int, int], int] = {}
        outgoing: dict[tuple[int, int], int] = {}
        for (s, t) in sorted(cur):
            tgt = (s + r, t - r + 1)
            if tgt[1] < 0:
                continue
            dim_src = cur.get((s, t), 0)
            dim_tgt = cur.get(tgt, 0)
            cap = min(dim_src - incoming.get((s, t), 0), dim_tgt)
            if cap <= 0:
                continue
            rho = rng.randint(0, cap)
            if rho:
                outgoing[(s, t)] = rho
                incoming[tgt] = rho
        nxt = {}
        for cell in set(cur) | set(incoming):
            d = cur.get(cell, 0) - outgoing.get(cell, 0) - incoming.get(cell, 0)
            if d < 0:
                raise AssertionError("admissibility violated")
            if d:
                nxt[cell] = d
        diff_log.append({f"{s},{t}": rho for (s, t), rho in sorted(outgoing.items())})
        cur = nxt
        pages_log.append(dict(cur))
    abutment = [0] * (page.M + page.N + 1)
    for (s, t), d in cur.items():
        abutment[s + t] += d
    return SimulationResult(seed, abutment, pages_log, diff_log)
