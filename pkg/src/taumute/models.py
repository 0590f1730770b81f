"""Example algebra families and the Weyl-group side of the preprojective correspondence."""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .bqa import AlgebraError, BoundQuiverAlgebra, Quiver, Relation
from .exactla import Matrix, SparseRow, solve, sparse_rref, sparse_to_dense
from .repcat import (
    Representation,
    decompose,
    direct_sum,
    injective,
    is_isomorphic,
    regular,
)
from .taut import CheckReport, ExchangePoset, enumerate_poset, leq


def _letters(k: int) -> list[str]:
    if k <= len(string.ascii_lowercase):
        return list(string.ascii_lowercase[:k])
    return [f"a{i}" for i in range(1, k + 1)]


@lru_cache(maxsize=None)
def linear_An(n: int) -> BoundQuiverAlgebra:
    """Path algebra of ``1 -> 2 -> ... -> n`` with arrows named ``a, b, c, ...``."""
    if n < 1:
        raise AlgebraError("n must be positive")
    names = _letters(n - 1)
    q = Quiver.from_edges(n, [(names[i], i + 1, i + 2) for i in range(n - 1)])
    return BoundQuiverAlgebra(q, (), name=f"A{n}")


@lru_cache(maxsize=None)
def kq_mod_ba() -> BoundQuiverAlgebra:
    """``1 -a-> 2 -b-> 3`` with the composite ``ba`` set to zero."""
    q = Quiver.from_edges(3, [("a", 1, 2), ("b", 2, 3)])
    return BoundQuiverAlgebra(q, [Relation.path("a", "b")], name="A3/(ba)")


@lru_cache(maxsize=None)
def cyclic_nakayama(n: int, m: int) -> BoundQuiverAlgebra:
    """Cyclic quiver ``1 -> 2 -> ... -> n -> 1`` with every path of length ``m`` zero."""
    if n < 1 or m < 2:
        raise AlgebraError("cyclic Nakayama algebra needs n >= 1 and m >= 2")
    names = [f"a{i}" for i in range(1, n + 1)]
    q = Quiver.from_edges(n, [(names[i], i + 1, (i + 1) % n + 1) for i in range(n)])
    rels = [Relation.path(*[names[(s + k) % n] for k in range(m)]) for s in range(n)]
    return BoundQuiverAlgebra(q, rels, name=f"cyclic({n},{m})")


@lru_cache(maxsize=None)
def kronecker() -> BoundQuiverAlgebra:
    q = Quiver.from_edges(2, [("a", 1, 2), ("b", 1, 2)])
    return BoundQuiverAlgebra(q, (), name="Kronecker")


def dynkin_edges(kind: str, n: int) -> list[tuple[int, int]]:
    kind = kind.upper()
    if kind == "A" and n >= 1:
        return [(i, i + 1) for i in range(1, n)]
    if kind == "D" and n >= 4:
        return [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    if kind == "E" and n in (6, 7, 8):
        return [(i, i + 1) for i in range(1, n - 1)] + [(3, n)]
    raise AlgebraError(f"unsupported Dynkin type {kind}{n}")


def parse_type(dynkin: str) -> tuple[str, int]:
    kind, rank = dynkin[0].upper(), dynkin[1:]
    if not rank.isdigit():
        raise AlgebraError(f"bad Dynkin type {dynkin!r}")
    return kind, int(rank)


@lru_cache(maxsize=None)
def preprojective(dynkin: str) -> BoundQuiverAlgebra:
    """Preprojective algebra of a Dynkin diagram such as ``"A3"`` or ``"D4"``.

    Arrow ``a{k}: i -> j`` comes with ``a{k}*: j -> i``; the relation at vertex ``v``
    is ``sum (a a*) - sum (a* a)`` restricted to cycles at ``v``.
    """
    kind, n = parse_type(dynkin)
    edges = dynkin_edges(kind, n)
    arrows = []
    for k, (i, j) in enumerate(edges, start=1):
        arrows += [(f"a{k}", i, j), (f"a{k}*", j, i)]
    q = Quiver.from_edges(n, arrows)
    rels = []
    for v in range(1, n + 1):
        terms = []
        for k, (i, j) in enumerate(edges, start=1):
            if j == v:
                terms.append((1, (f"a{k}*", f"a{k}")))
            if i == v:
                terms.append((-1, (f"a{k}", f"a{k}*")))
        if terms:
            rels.append(Relation.combination(*terms))
    return BoundQuiverAlgebra(q, rels, name=f"Pi({kind}{n})")


def is_selfinjective(algebra: BoundQuiverAlgebra) -> bool:
    """The regular module is isomorphic to the sum of the indecomposable injectives."""
    inj = direct_sum([injective(algebra, v) for v in algebra.quiver.vertices], algebra)
    return is_isomorphic(regular(algebra), inj)


# Weyl groups of type A --------------------------------------------------------------

@dataclass(frozen=True)
class WeylElement:
    """An element of the symmetric group on ``n + 1`` letters, with one reduced word."""

    perm: tuple[int, ...]
    word: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.perm) - 1

    @property
    def length(self) -> int:
        return inversions(self.perm)


def inversions(perm: Sequence[int]) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])


def times_simple(perm: tuple[int, ...], i: int) -> tuple[int, ...]:
    """``w s_i`` in one-line notation: swap positions ``i`` and ``i + 1``."""
    p = list(perm)
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def perm_of_word(word: Sequence[int], rank: int) -> tuple[int, ...]:
    perm = tuple(range(1, rank + 2))
    for i in word:
        perm = times_simple(perm, i)
    return perm


def inverse(perm: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(perm)
    for pos, val in enumerate(perm, start=1):
        out[val - 1] = pos
    return tuple(out)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p q`` as functions: ``(p q)(k) = p(q(k))``."""
    return tuple(p[q[k] - 1] for k in range(len(q)))


def weyl_elements(dynkin: str) -> list[WeylElement]:
    kind, n = parse_type(dynkin)
    if kind != "A":
        raise AlgebraError("full Weyl group enumeration is implemented for type A only")
    out = []
    for perm in itertools.permutations(range(1, n + 2)):
        out.append(WeylElement(perm, reduced_word(perm)))
    out.sort(key=lambda w: (w.length, w.word))
    return out


def right_descents(perm: Sequence[int]) -> list[int]:
    return [i for i in range(1, len(perm)) if perm[i - 1] > perm[i]]


def reduced_word(perm: tuple[int, ...]) -> tuple[int, ...]:
    word: list[int] = []
    while True:
        d = right_descents(perm)
        if not d:
            return tuple(reversed(word))
        perm = times_simple(perm, d[0])
        word.append(d[0])


def all_reduced_words(w: WeylElement | tuple[int, ...]) -> list[tuple[int, ...]]:
    perm = w.perm if isinstance(w, WeylElement) else tuple(w)
    if inversions(perm) == 0:
        return [()]
    out = []
    for i in right_descents(perm):
        for prefix in all_reduced_words(times_simple(perm, i)):
            out.append(prefix + (i,))
    return sorted(out)


def is_reduced(word: Sequence[int], rank: int) -> bool:
    return inversions(perm_of_word(word, rank)) == len(word)


def right_order_leq(w1: WeylElement, w2: WeylElement) -> bool:
    """``w1 <= w2`` iff ``l(w2) = l(w1) + l(w1^{-1} w2)``."""
    return w2.length == w1.length + inversions(compose(inverse(w1.perm), w2.perm))


# ideals of the preprojective algebra -------------------------------------------------

def _span(algebra: BoundQuiverAlgebra, vectors) -> tuple[SparseRow, ...]:
    rows, _ = sparse_rref(v for v in vectors if v)
    return tuple(sorted((tuple(sorted(r.items())) for r in rows)))


def ideal_generated_off(algebra: BoundQuiverAlgebra, i: int) -> tuple:
    """``I_i = Lambda (1 - e_i) Lambda`` as a reduced spanning set."""
    vecs = []
    for j in algebra.quiver.vertices:
        if j == i:
            continue
        for p in range(algebra.dim):
            left = algebra.basis_product(p, j - 1)
            if not left:
                continue
            for q in range(algebra.dim):
                vecs.append(algebra.multiply(left, {q: Fraction(1)}))
    return _span(algebra, vecs)


def ideal_product(algebra: BoundQuiverAlgebra, x: tuple, y: tuple) -> tuple:
    vecs = [algebra.multiply(dict(a), dict(b)) for a in x for b in y]
    return _span(algebra, vecs)


def ideal_subspace(algebra: BoundQuiverAlgebra, word: Sequence[int]) -> tuple:
    """Reduced basis of ``I_{i_1} ... I_{i_l}``; the empty word gives the whole algebra."""
    cur = _span(algebra, [{k: Fraction(1)} for k in range(algebra.dim)])
    for i in word:
        cur = ideal_product(algebra, cur, ideal_generated_off(algebra, i))
    return cur


def ideal_module(algebra: BoundQuiverAlgebra, space: tuple) -> Representation:
    """A two-sided ideal given by a spanning set, viewed as a left module."""
    basis = algebra.basis
    bases = []
    for v in algebra.quiver.vertices:
        proj = [{k: c for k, c in dict(r).items() if basis[k].target == v} for r in space]
        rows, _ = sparse_rref(p for p in proj if p)
        bases.append(rows)
    dims = [len(b) for b in bases]
    maps = []
    for idx, a in enumerate(algebra.quiver.arrows):
        s, t = a.source - 1, a.target - 1
        arrow_elt = algebra.path_element(a.name)
        tgt = Matrix.from_columns([sparse_to_dense(r, algebra.dim) for r in bases[t]], algebra.dim)
        images = [sparse_to_dense(algebra.multiply(arrow_elt, r), algebra.dim) for r in bases[s]]
        if not images:
            maps.append(Matrix.zeros(dims[t], 0))
            continue
        if not bases[t]:
            maps.append(Matrix.zeros(0, dims[s]))
            continue
        sol = solve(tgt, Matrix.from_columns(images, algebra.dim))
        if sol is None:
            raise AlgebraError("subspace is not closed under left multiplication")
        maps.append(sol)
    return Representation(algebra, dims, maps)


def ideal_Iw(algebra: BoundQuiverAlgebra, word: Sequence[int]) -> Representation:
    rank = algebra.n
    if not is_reduced(word, rank):
        raise AlgebraError(f"word {tuple(word)} is not reduced")
    return ideal_module(algebra, ideal_subspace(algebra, word))


def check_mizuno(dynkin: str, poset: ExchangePoset | None = None) -> CheckReport:
    """Braid-move independence of ``I_w``, bijectivity onto the poset and order compatibility.

    Longer Weyl group elements give smaller ideals, so the right order is
    compared with the reverse of the Fac order.
    """
    alg = preprojective(dynkin)
    poset = enumerate_poset(alg) if poset is None else poset
    poset.require_complete()
    rep = CheckReport(f"Weyl group correspondence {dynkin}")
    elems = weyl_elements(dynkin)
    node_of = []
    for w in elems:
        words = all_reduced_words(w)
        spaces = {ideal_subspace(alg, wd) for wd in words}
        if len(spaces) != 1:
            rep.violations.append(f"{w.perm}: reduced words give {len(spaces)} different ideals")
        ids = tuple(sorted(i for i, _ in decompose(ideal_Iw(alg, w.word))))
        match = [k for k, p in enumerate(poset.nodes) if p.module == ids]
        if len(match) != 1:
            rep.violations.append(f"{w.perm}: I_w matches {len(match)} poset nodes")
            node_of.append(None)
        else:
            node_of.append(match[0])
    found = [k for k in node_of if k is not None]
    if len(set(found)) != len(found) or len(found) != len(poset.nodes):
        rep.violations.append(f"w -> I_w is not a bijection ({len(set(found))} of {len(poset.nodes)} nodes)")
    if not rep.violations:
        le = poset.leq_matrix()
        for a, b in itertools.product(range(len(elems)), repeat=2):
            if right_order_leq(elems[a], elems[b]) != le[node_of[b]][node_of[a]]:
                rep.violations.append(f"order mismatch for {elems[a].perm}, {elems[b].perm}")
    rep.details["elements"] = len(elems)
    rep.details["nodes"] = len(poset.nodes)
    rep.details["reduced_words"] = sum(len(all_reduced_words(w)) for w in elems)
    return rep


# cyclic Nakayama counts -------------------------------------------------------------

def compositions_count(n: int) -> int:
    """Lattice points ``a in Z_{>=0}^n`` with ``sum a = n``, by direct enumeration."""
    return sum(1 for a in itertools.product(range(n + 1), repeat=n) if sum(a) == n)


def check_adachi(n: int, m: int, poset: ExchangePoset | None = None) -> CheckReport:
    rep = CheckReport(f"cyclic Nakayama counts n={n} m={m}")
    if m < n:
        rep.violations.append("the count formula needs m >= n")
        return rep
    alg = cyclic_nakayama(n, m)
    poset = enumerate_poset(alg) if poset is None else poset
    poset.require_complete()
    tilting = sum(1 for p in poset.nodes if not p.support)
    rest = len(poset.nodes) - tilting
    lattice = compositions_count(n)
    if lattice != math.comb(2 * n - 1, n - 1):
        rep.violations.append(f"lattice count {lattice} differs from the binomial")
    if tilting != lattice or rest != lattice:
        rep.violations.append(f"tau-tilting {tilting}, others {rest}, expected {lattice} each")
    rep.details.update(tau_tilting=tilting, strictly_support=rest, lattice_points=lattice, total=len(poset.nodes))
    return rep


def unique_tilting_node(poset: ExchangePoset) -> list[int]:
    """Nodes whose module part is tilting; for a selfinjective algebra only ``(Lambda, 0)``."""
    from .taut import is_tilting
    return [i for i, p in enumerate(poset.nodes) if not p.support and is_tilting(p.rep())]


PRESETS = {
    "a1": lambda: linear_An(1),
    "a2": lambda: linear_An(2),
    "a3": lambda: linear_An(3),
    "a4": lambda: linear_An(4),
    "a3-mod-ba": kq_mod_ba,
    "kronecker": kronecker,
}


def preset(name: str) -> BoundQuiverAlgebra:
    """Named example algebras: ``a3``, ``a3-mod-ba``, ``cyclic:n,m``, ``preproj:A2``, ``an:5``, ..."""
    key = name.strip().lower()
    if key in PRESETS:
        return PRESETS[key]()
    if key.startswith("cyclic:"):
        parts = key.split(":", 1)[1].split(",")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise AlgebraError(f"bad cyclic preset {name!r}; expected cyclic:n,m")
        return cyclic_nakayama(int(parts[0]), int(parts[1]))
    if key.startswith("preproj:"):
        return preprojective(name.split(":", 1)[1].strip())
    if key.startswith("an:"):
        return linear_An(int(key.split(":", 1)[1]))
    raise AlgebraError(f"unknown preset {name!r}")
