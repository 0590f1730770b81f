"""Two-term complexes of projectives and their correspondence with support tau-tilting pairs.

A map ``(+)_k P_{src_k} -> (+)_l P_{tgt_l}`` is stored as an element matrix
``x[l][k]`` in ``e_{src_k} Lambda e_{tgt_l}`` acting by ``p |-> p * x``.  With
this convention ``g o f`` has entries ``sum_l f[l][k] * g[m][l]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .bqa import BoundQuiverAlgebra
from .exactla import Matrix, SparseRow, charpoly, solve, sparse_kernel, sparse_rank, sparse_rref, sparse_to_dense
from .repcat import Representation, cokernel, decompose, min_presentation, projective_map, registry
from .taut import CheckReport, ExchangePoset, StPair, dagger

Elements = tuple[tuple[SparseRow, ...], ...]


@dataclass(frozen=True)
class TwoTermComplex:
    """``P^{-1} --d--> P^0`` with ``P^{-1} = (+) P_{src_k}`` and ``P^0 = (+) P_{tgt_l}``."""

    algebra: BoundQuiverAlgebra
    src: tuple[int, ...]
    tgt: tuple[int, ...]
    d: Elements

    def __post_init__(self):
        if len(self.d) != len(self.tgt) or any(len(r) != len(self.src) for r in self.d):
            raise ValueError("differential shape does not match the projective terms")

    @property
    def pm1(self) -> tuple[int, ...]:
        return _mult(self.src, self.algebra.n)

    @property
    def p0(self) -> tuple[int, ...]:
        return _mult(self.tgt, self.algebra.n)

    def morphism(self):
        return projective_map(self.algebra, self.src, self.tgt, self.d)

    def dual(self) -> "TwoTermComplex":
        """``Hom(-, Lambda)``: a two-term complex over the opposite algebra."""
        d = tuple(tuple(self.d[l][k] for l in range(len(self.tgt))) for k in range(len(self.src)))
        return TwoTermComplex(self.algebra.opposite(), self.tgt, self.src, d)


def _mult(vertices: Sequence[int], n: int) -> tuple[int, ...]:
    out = [0] * n
    for v in vertices:
        out[v - 1] += 1
    return tuple(out)


# Hom spaces between sums of projectives in coordinates ------------------------------

class _HomCoords:
    """Coordinates on ``Hom((+) P_a, (+) P_b)``: one per path ``b_l -> a_k``."""

    def __init__(self, algebra: BoundQuiverAlgebra, a: Sequence[int], b: Sequence[int]):
        self.algebra = algebra
        self.a, self.b = tuple(a), tuple(b)
        self.index: dict[tuple[int, int, int], int] = {}
        for l, w in enumerate(self.b):
            for k, v in enumerate(self.a):
                for p in algebra.paths_between(w, v):
                    self.index[(l, k, p)] = len(self.index)

    @property
    def dim(self) -> int:
        return len(self.index)

    def basis(self) -> list[list[list[SparseRow]]]:
        out = []
        for (l, k, p) in self.index:
            m = [[{} for _ in self.a] for _ in self.b]
            m[l][k] = {p: Fraction(1)}
            out.append(m)
        return out

    def vector(self, m) -> SparseRow:
        out: SparseRow = {}
        for l in range(len(self.b)):
            for k in range(len(self.a)):
                for p, c in m[l][k].items():
                    if c:
                        out[self.index[(l, k, p)]] = c
        return out


def compose(algebra: BoundQuiverAlgebra, g, f) -> list[list[SparseRow]]:
    """``g o f`` for element matrices ``f: P_a -> P_b`` and ``g: P_b -> P_c``."""
    rows, mid = len(g), len(f)
    cols = len(f[0]) if f else 0
    out = [[{} for _ in range(cols)] for _ in range(rows)]
    for m in range(rows):
        for k in range(cols):
            acc: SparseRow = {}
            for l in range(mid):
                if not f[l][k] or not g[m][l]:
                    continue
                for i, c in algebra.multiply(f[l][k], g[m][l]).items():
                    acc[i] = acc.get(i, 0) + c
            out[m][k] = {i: c for i, c in acc.items() if c}
    return out


def hom_shift1_dim(p: TwoTermComplex, q: TwoTermComplex) -> int:
    """``dim Hom(P, Q[1])``: ``Hom(P^-1, Q^0)`` modulo ``d_Q s + t d_P``."""
    a = p.algebra
    target = _HomCoords(a, p.src, q.tgt)
    if target.dim == 0:
        return 0
    images = []
    for s in _HomCoords(a, p.src, q.src).basis():
        images.append(target.vector(compose(a, q.d, s)))
    for t in _HomCoords(a, p.tgt, q.tgt).basis():
        images.append(target.vector(compose(a, t, p.d)))
    return target.dim - sparse_rank(images)


def is_presilting(p: TwoTermComplex) -> bool:
    return hom_shift1_dim(p, p) == 0


# endomorphisms in the homotopy category ----------------------------------------------

@dataclass(frozen=True)
class HomotopyEndomorphisms:
    """``End_K(P)`` as chain maps modulo null-homotopic ones, with structure constants."""

    dim: int
    left: tuple[Matrix, ...]  # left multiplication by each basis element

    def gram_rank(self) -> int:
        g = Matrix(self.dim, self.dim, [[_trace(self.left[i] @ self.left[j]) for j in range(self.dim)]
                                        for i in range(self.dim)])
        return g.rank()


def _trace(m: Matrix) -> Fraction:
    return sum((m[i, i] for i in range(m.rows)), Fraction(0))


def homotopy_endomorphisms(p: TwoTermComplex) -> HomotopyEndomorphisms:
    a = p.algebra
    cm1 = _HomCoords(a, p.src, p.src)
    c0 = _HomCoords(a, p.tgt, p.tgt)
    cd = _HomCoords(a, p.src, p.tgt)
    n1, n0 = cm1.dim, c0.dim
    b1, b0 = cm1.basis(), c0.basis()
    keys1, keys0 = list(cm1.index), list(c0.index)

    def split(vec: SparseRow):
        f1 = [[{} for _ in p.src] for _ in p.src]
        f0 = [[{} for _ in p.tgt] for _ in p.tgt]
        for i, c in vec.items():
            if i < n1:
                l, k, path = keys1[i]
                f1[l][k] = {**f1[l][k], path: c}
            else:
                l, k, path = keys0[i - n1]
                f0[l][k] = {**f0[l][k], path: c}
        return f1, f0

    def join(f1, f0) -> SparseRow:
        out = dict(cm1.vector(f1))
        out.update({n1 + i: c for i, c in c0.vector(f0).items()})
        return out

    # chain condition d f^-1 - f^0 d = 0, one equation per coordinate of Hom(P^-1, P^0)
    columns = []
    for m in b1:
        columns.append(cd.vector(compose(a, p.d, m)))
    for m in b0:
        columns.append({i: -c for i, c in cd.vector(compose(a, m, p.d)).items()})
    eqs: dict[int, SparseRow] = {}
    for j, col in enumerate(columns):
        for i, c in col.items():
            eqs.setdefault(i, {})[j] = c
    chain = sparse_kernel(eqs.values(), n1 + n0)
    null = []
    for h in _HomCoords(a, p.tgt, p.src).basis():
        null.append(join(compose(a, h, p.d), compose(a, p.d, h)))
    null_red, _ = sparse_rref(null)
    reps = []
    cur = list(null_red)
    for v in chain:
        if sparse_rank(cur + [v]) > len(cur):
            cur.append(v)
            reps.append(v)
    m = len(reps)
    total = n1 + n0
    basis_mat = Matrix.from_columns([sparse_to_dense(v, total) for v in null_red + reps], total) \
        if null_red or reps else Matrix.zeros(total, 0)
    k = len(null_red)

    def coords(vec: SparseRow) -> list[Fraction]:
        sol = solve(basis_mat, Matrix.from_columns([sparse_to_dense(vec, total)], total))
        if sol is None:
            raise ValueError("product of chain maps left the chain-map space")
        return [sol[k + j, 0] for j in range(m)]

    parts = [split(v) for v in reps]
    left = []
    for i in range(m):
        cols = []
        for j in range(m):
            f1 = compose(a, parts[i][0], parts[j][0])
            f0 = compose(a, parts[i][1], parts[j][1])
            cols.append(coords(join(f1, f0)))
        left.append(Matrix.from_columns(cols, m) if m else Matrix.zeros(0, 0))
    return HomotopyEndomorphisms(m, tuple(left))


class SummandCountError(RuntimeError):
    """``End_K(P)`` modulo its radical is not a product of copies of the rationals."""


def summand_count(p: TwoTermComplex) -> int:
    """Number of indecomposable summands of a basic two-term complex, read off ``End_K(P)``."""
    e = homotopy_endomorphisms(p)
    if e.dim == 0:
        return 0
    for i in range(e.dim):
        for j in range(e.dim):
            comm = e.left[i] @ e.left[j] - e.left[j] @ e.left[i]
            if any(_trace(comm @ e.left[k]) for k in range(e.dim)):
                raise SummandCountError("End_K(P)/rad is not commutative; the complex is not basic")
    x = sympy.Symbol("x")
    for mat in e.left:
        coeffs = [sympy.Rational(c.numerator, c.denominator) for c in charpoly(mat)]
        _, factors = sympy.factor_list(sympy.Poly(coeffs, x))
        if any(f.degree() > 1 for f, _ in factors):
            raise SummandCountError("End_K(P)/rad has a non-rational residue field")
    return e.gram_rank()


def is_two_term_silting(p: TwoTermComplex) -> bool:
    return is_presilting(p) and summand_count(p) == p.algebra.n


# the correspondence with pairs ----------------------------------------------------------

def from_pair(pair: StPair) -> TwoTermComplex:
    """Sum of minimal presentations of the module part and ``P_v -> 0`` for support vertices."""
    a = pair.algebra
    reg = registry(a)
    src: list[int] = []
    tgt: list[int] = []
    blocks = []
    for i in pair.module:
        pres = min_presentation(reg[i])
        blocks.append((len(src), len(tgt), pres.elements))
        src.extend(pres.p1)
        tgt.extend(pres.p0)
    src.extend(pair.support)
    d = [[{} for _ in src] for _ in tgt]
    for s0, t0, el in blocks:
        for l, row in enumerate(el):
            for k, x in enumerate(row):
                d[t0 + l][s0 + k] = dict(x)
    return TwoTermComplex(a, tuple(src), tuple(tgt), tuple(tuple(r) for r in d))


def h0(p: TwoTermComplex) -> Representation:
    return cokernel(p.morphism())[0]


def check_silting_bijection(poset: ExchangePoset) -> CheckReport:
    poset.require_complete()
    rep = CheckReport("two-term silting correspondence")
    n = poset.algebra.n
    keys = set()
    for i, p in enumerate(poset.nodes):
        c = from_pair(p)
        if hom_shift1_dim(c, c):
            rep.violations.append(f"node {i}: complex is not presilting")
        count = summand_count(c)
        if count != n:
            rep.violations.append(f"node {i}: {count} summands instead of {n}")
        ids = tuple(sorted(j for j, _ in decompose(h0(c))))
        if ids != p.module:
            rep.violations.append(f"node {i}: H0 gives {ids}, expected {p.module}")
        keys.add((c.src, c.tgt, ids, p.support))
    if len(keys) != len(poset.nodes):
        rep.violations.append("from_pair is not injective")
    rep.details["silting"] = len(keys)
    rep.details["support_tau_tilting"] = len(poset.nodes)
    return rep


def check_dual_matches_dagger(poset: ExchangePoset) -> CheckReport:
    """``Hom(-, Lambda)`` on complexes agrees with the dagger on pairs."""
    poset.require_complete()
    rep = CheckReport("dual complex = dagger")
    for i, p in enumerate(poset.nodes):
        dc = from_pair(p).dual()
        d = dagger(p)
        expect = from_pair(d)
        ids = tuple(sorted(j for j, _ in decompose(h0(dc))))
        if ids != d.module:
            rep.violations.append(f"node {i}: H0 of the dual is {ids}, dagger has {d.module}")
        if dc.pm1 != expect.pm1 or dc.p0 != expect.p0:
            rep.violations.append(f"node {i}: projective terms of the dual differ from the dagger's complex")
    return rep
