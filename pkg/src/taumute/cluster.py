"""Quiver mutation and coefficient-free seed mutation with exact rational cluster variables."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import sympy

from .bqa import AlgebraError, BoundQuiverAlgebra


@dataclass(frozen=True)
class ExchangeQuiverFZ:
    """Quiver without loops or 2-cycles, as the matrix ``b[i][j]`` of arrows ``i+1 -> j+1``."""

    b: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        b = tuple(tuple(int(x) for x in row) for row in self.b)
        object.__setattr__(self, "b", b)
        n = len(b)
        for i in range(n):
            if len(b[i]) != n:
                raise ValueError("arrow matrix must be square")
            if b[i][i]:
                raise ValueError("loops are not allowed")
            for j in range(n):
                if b[i][j] < 0:
                    raise ValueError("arrow multiplicities are non-negative")
                if b[i][j] and b[j][i]:
                    raise ValueError("2-cycles are not allowed")

    @property
    def n(self) -> int:
        return len(self.b)

    @classmethod
    def from_arrows(cls, n: int, arrows: Iterable[tuple[int, int]]) -> "ExchangeQuiverFZ":
        """Arrows as 1-based ``(source, target)``; opposite arrows cancel in pairs."""
        s = [[0] * n for _ in range(n)]
        for a, c in arrows:
            if a == c:
                raise ValueError("loops are not allowed")
            s[a - 1][c - 1] += 1
            s[c - 1][a - 1] -= 1
        return cls.from_skew(s)

    @classmethod
    def from_skew(cls, s: Sequence[Sequence[int]]) -> "ExchangeQuiverFZ":
        return cls(tuple(tuple(max(x, 0) for x in row) for row in s))

    @classmethod
    def from_algebra(cls, algebra: BoundQuiverAlgebra) -> "ExchangeQuiverFZ":
        q = algebra.quiver
        counts = {}
        for a in q.arrows:
            counts[(a.source, a.target)] = counts.get((a.source, a.target), 0) + 1
        for (s, t) in counts:
            if s == t or (t, s) in counts:
                raise AlgebraError("the quiver has a loop or a 2-cycle")
        return cls.from_arrows(q.vertex_count, [(a.source, a.target) for a in q.arrows])

    def skew(self) -> list[list[int]]:
        return [[self.b[i][j] - self.b[j][i] for j in range(self.n)] for i in range(self.n)]

    def arrows(self) -> list[tuple[int, int, int]]:
        return [(i + 1, j + 1, self.b[i][j]) for i in range(self.n) for j in range(self.n) if self.b[i][j]]

    def permuted(self, perm: Sequence[int]) -> "ExchangeQuiverFZ":
        """Relabel vertex ``i`` (0-based) as ``perm[i]``."""
        out = [[0] * self.n for _ in range(self.n)]
        for i in range(self.n):
            for j in range(self.n):
                out[perm[i]][perm[j]] = self.b[i][j]
        return ExchangeQuiverFZ(tuple(tuple(r) for r in out))


def quiver_mutation(q: ExchangeQuiverFZ, i: int) -> ExchangeQuiverFZ:
    """Composite arrows through ``i``, reversal at ``i``, then 2-cycle cancellation."""
    if not 1 <= i <= q.n:
        raise ValueError(f"vertex {i} outside 1..{q.n}")
    k = i - 1
    s = q.skew()
    out = [[0] * q.n for _ in range(q.n)]
    for a in range(q.n):
        for c in range(q.n):
            if a == k or c == k:
                out[a][c] = -s[a][c]
            else:
                out[a][c] = s[a][c] + (abs(s[a][k]) * s[k][c] + s[a][k] * abs(s[k][c])) // 2
    return ExchangeQuiverFZ.from_skew(out)


# rational functions -------------------------------------------------------------------

@lru_cache(maxsize=None)
def function_field(n: int):
    """``Q(x_1, ..., x_n)`` over integer polynomials.

    Arithmetic runs in lex order, which sympy compares much faster; canonical
    keys are re-sorted into graded-lex order by :class:`RationalFunction`.
    """
    return sympy.polys.fields.field([f"x{i}" for i in range(1, n + 1)], sympy.ZZ, sympy.polys.orderings.lex)


def _grlex_terms(poly) -> tuple:
    return tuple(sorted(poly.terms(), key=lambda t: (sum(t[0]), t[0]), reverse=True))


def _reduce(num, den):
    """Cancel common factors; a monomial denominator only shares monomial and content factors."""
    if len(den) == 1:
        ((dm, _),) = den.terms()
        shift = tuple(min([dm[v]] + [m[v] for m in num.monoms()]) for v in range(len(dm)))
        if any(shift):
            num, den = num.quo_term((shift, 1)), den.quo_term((shift, 1))
    else:
        num, den = num.cancel(den)
    g = math.gcd(*(int(c) for c in num.coeffs()), *(int(c) for c in den.coeffs()))
    if _grlex_terms(den)[0][1] < 0:
        g = -g
    return num.quo_ground(g), den.quo_ground(g)


@dataclass(frozen=True)
class RationalFunction:
    """Reduced fraction of integer polynomials with positive leading denominator coefficient.

    ``num`` and ``den`` are the graded-lex sorted term tuples used for hashing.
    """

    num: tuple
    den: tuple
    numer: object = field(compare=False, hash=False, repr=False)
    denom: object = field(compare=False, hash=False, repr=False)

    @classmethod
    def from_polys(cls, num, den) -> "RationalFunction":
        if not den:
            raise ZeroDivisionError("zero denominator")
        num, den = _reduce(num, den)
        return cls(_grlex_terms(num), _grlex_terms(den), num, den)

    @classmethod
    def from_field(cls, f) -> "RationalFunction":
        return cls.from_polys(f.numer, f.denom)

    @property
    def denominator_is_monomial(self) -> bool:
        return len(self.den) == 1

    def __str__(self) -> str:
        return str(self.numer.as_expr() / self.denom.as_expr())


@dataclass(frozen=True)
class ClusterSeed:
    quiver: ExchangeQuiverFZ
    cluster: tuple[RationalFunction, ...]

    @property
    def key(self) -> frozenset:
        return frozenset(self.cluster)


def initial_seed(q: ExchangeQuiverFZ) -> ClusterSeed:
    _, *gens = function_field(q.n)
    return ClusterSeed(q, tuple(RationalFunction.from_field(x) for x in gens))


def seed_mutation(s: ClusterSeed, i: int) -> ClusterSeed:
    """``x_i* = (m1 + m2) / x_i`` with ``m1`` over arrows into ``i`` and ``m2`` over arrows out."""
    q = s.quiver
    if not 1 <= i <= q.n:
        raise ValueError(f"vertex {i} outside 1..{q.n}")
    k = i - 1
    one = function_field(q.n)[0].ring.one
    m1n, m1d, m2n, m2d = one, one, one, one
    for j, c in enumerate(s.cluster):
        if q.b[j][k]:
            m1n, m1d = m1n * c.numer ** q.b[j][k], m1d * c.denom ** q.b[j][k]
        if q.b[k][j]:
            m2n, m2d = m2n * c.numer ** q.b[k][j], m2d * c.denom ** q.b[k][j]
    xk = s.cluster[k]
    num = (m1n * m2d + m2n * m1d) * xk.denom
    den = m1d * m2d
    # exact division by the old numerator avoids a multivariate gcd in the common case
    quo, rem = num.div(xk.numer)
    new = RationalFunction.from_polys(quo, den) if not rem else RationalFunction.from_polys(num, den * xk.numer)
    cluster = s.cluster[:k] + (new,) + s.cluster[k + 1:]
    return ClusterSeed(quiver_mutation(q, i), cluster)


def seeds_equal(a: ClusterSeed, b: ClusterSeed) -> bool:
    """Same variables up to order, and the quivers agree under the matching."""
    if a.key != b.key:
        return False
    pos = {v: j for j, v in enumerate(b.cluster)}
    perm = [pos[v] for v in a.cluster]
    return a.quiver.permuted(perm) == b.quiver


# exchange graph ----------------------------------------------------------------------

@dataclass
class ExchangeGraph:
    seeds: list[ClusterSeed]
    edges: set
    complete: bool
    cap: int

    @property
    def truncated(self) -> bool:
        return not self.complete

    @property
    def cluster_variables(self) -> set[RationalFunction]:
        return {v for s in self.seeds for v in s.cluster}

    def is_regular(self) -> bool:
        n = self.seeds[0].quiver.n if self.seeds else 0
        deg = [0] * len(self.seeds)
        for a, b, _ in self.edges:
            deg[a] += 1
            deg[b] += 1
        return all(d == n for d in deg)


class SeedCollision(RuntimeError):
    """Two seeds share a cluster but not a matching quiver."""


def enumerate_seeds(q: ExchangeQuiverFZ, cap: int = 10_000) -> ExchangeGraph:
    start = initial_seed(q)
    seeds = [start]
    index = {start.key: 0}
    edges = set()
    queue = deque([0])
    complete = True
    while queue:
        a = queue.popleft()
        for i in range(1, q.n + 1):
            t = seed_mutation(seeds[a], i)
            b = index.get(t.key)
            if b is None:
                if len(seeds) >= cap:
                    complete = False
                    queue.clear()
                    break
                b = len(seeds)
                index[t.key] = b
                seeds.append(t)
                queue.append(b)
            elif not seeds_equal(t, seeds[b]):
                raise SeedCollision("same cluster with non-isomorphic quivers")
            edges.add((min(a, b), max(a, b), frozenset(seeds[a].cluster) ^ frozenset(seeds[b].cluster)))
    return ExchangeGraph(seeds, edges, complete, cap)


def check_laurent(graph: ExchangeGraph):
    from .taut import CheckReport, TruncatedPoset
    if not graph.complete:
        raise TruncatedPoset("exchange graph truncated; Laurent check disabled")
    rep = CheckReport("cluster variables are Laurent polynomials")
    for v in sorted(graph.cluster_variables, key=str):
        if not v.denominator_is_monomial:
            rep.violations.append(f"{v} has a non-monomial denominator")
    rep.details["clusters"] = len(graph.seeds)
    rep.details["variables"] = len(graph.cluster_variables)
    return rep


QUIVER_PRESETS = {
    "a1": lambda: ExchangeQuiverFZ.from_arrows(1, []),
    "a2": lambda: ExchangeQuiverFZ.from_arrows(2, [(1, 2)]),
    "a3": lambda: ExchangeQuiverFZ.from_arrows(3, [(1, 2), (2, 3)]),
    "a4": lambda: ExchangeQuiverFZ.from_arrows(4, [(1, 2), (2, 3), (3, 4)]),
    "d4": lambda: ExchangeQuiverFZ.from_arrows(4, [(1, 2), (2, 3), (2, 4)]),
    "kronecker": lambda: ExchangeQuiverFZ.from_arrows(2, [(1, 2), (1, 2)]),
}


def random_quiver(rng, n: int, max_mult: int = 2) -> ExchangeQuiverFZ:
    s = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        m = rng.randint(-max_mult, max_mult)
        s[i][j], s[j][i] = m, -m
    return ExchangeQuiverFZ.from_skew(s)
