"""Bound quiver algebras ``kQ/I`` with length-homogeneous relations.

Paths are stored in traversal order: ``(a, b)`` means "first ``a``, then
``b``".  The algebra product ``p * q`` is non-zero only when ``q`` ends where
``p`` starts, and equals the concatenation ``q`` then ``p``; so with arrows
``a: 1 -> 2`` and ``b: 2 -> 3`` the product ``b * a`` is the path ``ba``.

Vertices are labelled ``1..n`` everywhere in the public API.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactla import SparseRow, sparse_rref, to_fraction

DEFAULT_LENGTH_CAP = 30
MAX_PATHS = 200_000


class AlgebraError(ValueError):
    """Invalid quiver, relation or non-terminating grading."""


class NonHomogeneousRelation(AlgebraError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if self.vertex_count < 0:
            raise AlgebraError("negative vertex count")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("arrow names must be unique")
        for a in self.arrows:
            if not (1 <= a.source <= self.vertex_count and 1 <= a.target <= self.vertex_count):
                raise AlgebraError(f"arrow {a.name!r} has an endpoint outside 1..{self.vertex_count}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[str, int, int]]) -> "Quiver":
        return cls(n, tuple(Arrow(name, s, t) for name, s, t in edges))

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def arrow_index(self, name: str) -> int:
        for k, a in enumerate(self.arrows):
            if a.name == name:
                return k
        raise AlgebraError(f"unknown arrow {name!r}")

    def reversed(self) -> "Quiver":
        return Quiver(self.vertex_count, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))

    def is_sink(self, v: int) -> bool:
        return all(a.source != v for a in self.arrows)

    def is_source(self, v: int) -> bool:
        return all(a.target != v for a in self.arrows)


@dataclass(frozen=True)
class Relation:
    """A linear combination of equal-length paths with common endpoints."""

    terms: tuple[tuple[Fraction, tuple[str, ...]], ...]

    def __post_init__(self):
        terms = tuple((to_fraction(c), tuple(p)) for c, p in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise AlgebraError("empty relation")

    @classmethod
    def path(cls, *arrows: str) -> "Relation":
        return cls(((Fraction(1), tuple(arrows)),))

    @classmethod
    def combination(cls, *terms: tuple) -> "Relation":
        return cls(tuple((c, tuple(p)) for c, p in terms))

    def reversed(self) -> "Relation":
        return Relation(tuple((c, tuple(reversed(p))) for c, p in self.terms))


@dataclass(frozen=True)
class BasisPath:
    source: int
    target: int
    arrows: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)


def _validate_relation(q: Quiver, rel: Relation) -> tuple[int, int, int, list[tuple[Fraction, tuple[int, ...]]]]:
    ends = set()
    lengths = set()
    out = []
    for c, names in rel.terms:
        if not names:
            raise NonHomogeneousRelation("non-homogeneous relation: trivial path in a relation")
        idx = tuple(q.arrow_index(nm) for nm in names)
        for x, y in zip(idx, idx[1:]):
            if q.arrows[x].target != q.arrows[y].source:
                raise AlgebraError(f"path {'.'.join(names)} is not composable")
        ends.add((q.arrows[idx[0]].source, q.arrows[idx[-1]].target))
        lengths.add(len(idx))
        out.append((c, idx))
    if len(lengths) != 1:
        raise NonHomogeneousRelation("non-homogeneous relation: terms of different lengths")
    if len(ends) != 1:
        raise AlgebraError("relation terms do not share source and target")
    (length,) = lengths
    if length < 2:
        raise AlgebraError("relations must have length at least 2")
    (s, t), = ends
    return s, t, length, out


class BoundQuiverAlgebra:
    """Finite-dimensional algebra ``kQ/I`` with a basis of normal-form paths.

    The basis is computed degree by degree: in each length the span of the
    paths is reduced modulo the span of ``p * r * q`` for the generating
    relations ``r``; the non-pivot paths survive as basis elements and every
    pivot path is rewritten in terms of them.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation] = (),
                 length_cap: int = DEFAULT_LENGTH_CAP, name: str = ""):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.length_cap = length_cap
        self.name = name
        self._op: BoundQuiverAlgebra | None = None
        self._cache: dict = {}
        self._lock = threading.RLock()
        parsed = [_validate_relation(quiver, r) for r in self.relations]
        self._build(parsed)

    # construction -----------------------------------------------------------

    def _build(self, rels) -> None:
        q = self.quiver
        n = q.vertex_count
        out_arrows: dict[int, list[int]] = {v: [] for v in q.vertices}
        for k, a in enumerate(q.arrows):
            out_arrows[a.source].append(k)

        def target(src: int, arrows: tuple[int, ...]) -> int:
            return q.arrows[arrows[-1]].target if arrows else src

        basis: list[BasisPath] = [BasisPath(v, v, ()) for v in q.vertices]
        nf: dict[tuple[int, tuple[int, ...]], SparseRow] = {
            (v, ()): {v - 1: Fraction(1)} for v in q.vertices}
        level: list[tuple[int, tuple[int, ...]]] = [(v, ()) for v in q.vertices]
        all_paths: dict[int, list[tuple[int, tuple[int, ...]]]] = {0: level}
        total = n
        length = 0
        while True:
            length += 1
            if length > self.length_cap:
                raise AlgebraError(
                    f"grading did not terminate within length cap {self.length_cap}; "
                    "the ideal is not admissible or the algebra is infinite-dimensional")
            level = [(s, p + (k,)) for s, p in all_paths[length - 1]
                     for k in out_arrows[target(s, p)]]
            total += len(level)
            if total > MAX_PATHS:
                raise AlgebraError("path enumeration exceeded the path budget")
            all_paths[length] = level
            if not level:
                break
            col = {path: i for i, path in enumerate(level)}
            gens: list[SparseRow] = []
            for s_r, t_r, len_r, terms in rels:
                if len_r > length:
                    continue
                rest = length - len_r
                for left_len in range(rest + 1):
                    right_len = rest - left_len
                    # q: path ending at s_r of length left_len; p: path from t_r of length right_len
                    befores = [pp for pp in all_paths[left_len] if target(*pp) == s_r]
                    afters = [pp for pp in all_paths[right_len] if pp[0] == t_r]
                    for bs, bp in befores:
                        for _, ap in afters:
                            row: SparseRow = {}
                            for c, mid in terms:
                                key = (bs, bp + mid + ap)
                                j = col[key]
                                row[j] = row.get(j, 0) + c
                            row = {j: v for j, v in row.items() if v}
                            if row:
                                gens.append(row)
            red, pivots = sparse_rref(gens)
            pivset = set(pivots)
            survivors = [j for j in range(len(level)) if j not in pivset]
            if not survivors:
                break
            for j in survivors:
                s, p = level[j]
                nf[(s, p)] = {len(basis): Fraction(1)}
                basis.append(BasisPath(s, target(s, p), p))
            surv_index = {j: nf[level[j]] for j in survivors}
            for r, p in zip(red, pivots):
                vec: SparseRow = {}
                for j, c in r.items():
                    if j == p:
                        continue
                    (bi,) = surv_index[j]
                    vec[bi] = -c
                nf[level[p]] = vec
        self.nilpotency = length
        self.basis: tuple[BasisPath, ...] = tuple(basis)
        self._nf = nf
        self._between: dict[tuple[int, int], tuple[int, ...]] = {}
        for i, b in enumerate(self.basis):
            self._between.setdefault((b.source, b.target), ())
            self._between[(b.source, b.target)] += (i,)

    @classmethod
    def _from_parts(cls, quiver, relations, length_cap, name, basis, nf, nilpotency):
        obj = cls.__new__(cls)
        obj.quiver = quiver
        obj.relations = tuple(relations)
        obj.length_cap = length_cap
        obj.name = name
        obj._op = None
        obj._cache = {}
        obj._lock = threading.RLock()
        obj.basis = tuple(basis)
        obj._nf = nf
        obj.nilpotency = nilpotency
        obj._between = {}
        for i, b in enumerate(obj.basis):
            obj._between.setdefault((b.source, b.target), ())
            obj._between[(b.source, b.target)] += (i,)
        return obj

    # basic data -----------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.quiver.vertex_count

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        label = self.name or "BoundQuiverAlgebra"
        return f"<{label}: {self.n} vertices, dim {self.dim}>"

    def paths_between(self, source: int, target: int) -> tuple[int, ...]:
        """Basis indices of normal-form paths from ``source`` to ``target``."""
        return self._between.get((source, target), ())

    def trivial(self, v: int) -> int:
        return v - 1

    def basis_label(self, i: int) -> str:
        b = self.basis[i]
        if not b.arrows:
            return f"e{b.source}"
        return "".join(self.quiver.arrows[k].name for k in reversed(b.arrows))

    def dims_by_degree(self) -> list[int]:
        out = [0] * self.nilpotency
        for b in self.basis:
            out[b.length] += 1
        return out

    def normal_form(self, source: int, arrows: tuple[int, ...]) -> SparseRow:
        """Coordinates of an arbitrary composable path in the basis."""
        if len(arrows) >= self.nilpotency:
            return {}
        return self._nf[(source, tuple(arrows))]

    def path_element(self, *names: str) -> SparseRow:
        idx = tuple(self.quiver.arrow_index(nm) for nm in names)
        src = self.quiver.arrows[idx[0]].source
        return dict(self.normal_form(src, idx))

    # multiplication -----------------------------------------------------------------

    def basis_product(self, i: int, j: int) -> SparseRow:
        """``basis[i] * basis[j]``: traverse ``basis[j]`` first, then ``basis[i]``."""
        key = ("bp", i, j)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        p, q = self.basis[i], self.basis[j]
        if q.target != p.source:
            out: SparseRow = {}
        else:
            out = self.normal_form(q.source, q.arrows + p.arrows)
        self._cache[key] = out
        return out

    def multiply(self, x: SparseRow, y: SparseRow) -> SparseRow:
        out: SparseRow = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.basis_product(i, j).items():
                    v = out.get(k, 0) + a * b * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out

    def element(self, coeffs: Sequence) -> "AlgebraElement":
        return AlgebraElement(self, {i: to_fraction(c) for i, c in enumerate(coeffs) if c})

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, {v - 1: Fraction(1) for v in self.quiver.vertices})

    def idempotent(self, v: int) -> "AlgebraElement":
        return AlgebraElement(self, {v - 1: Fraction(1)})

    def basis_element(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {i: Fraction(1)})

    def relation_element(self, rel: Relation) -> "AlgebraElement":
        out: SparseRow = {}
        for c, names in rel.terms:
            for k, v in self.path_element(*names).items():
                out[k] = out.get(k, 0) + c * v
        return AlgebraElement(self, {k: v for k, v in out.items() if v})

    # opposite and quotients -----------------------------------------------------

    def opposite(self) -> "BoundQuiverAlgebra":
        """The opposite algebra, sharing basis indices with ``self``.

        Basis path ``i`` of the opposite is the reversal of basis path ``i``
        here, so coefficient vectors transfer unchanged.  ``A.opposite().opposite()``
        returns ``A`` itself.
        """
        with self._lock:
            if self._op is None:
                basis = [BasisPath(b.target, b.source, tuple(reversed(b.arrows))) for b in self.basis]
                nf = {}
                q = self.quiver
                for (s, p), vec in self._nf.items():
                    t = q.arrows[p[-1]].target if p else s
                    nf[(t, tuple(reversed(p)))] = vec
                name = self.name[:-3] if self.name.endswith("^op") else (self.name + "^op" if self.name else "")
                op = BoundQuiverAlgebra._from_parts(
                    q.reversed(), [r.reversed() for r in self.relations], self.length_cap,
                    name, basis, nf, self.nilpotency)
                op._op = self
                self._op = op
            return self._op

    def quotient_by_vertices(self, vertices: Iterable[int]) -> tuple["BoundQuiverAlgebra", dict[int, int]]:
        """``A / <e>`` for ``e`` the sum of the given vertex idempotents.

        Returns the quotient algebra and the map old vertex -> new vertex.
        """
        drop = set(vertices)
        keep = [v for v in self.quiver.vertices if v not in drop]
        relabel = {v: i + 1 for i, v in enumerate(keep)}
        arrows = [a for a in self.quiver.arrows if a.source in relabel and a.target in relabel]
        q = Quiver(len(keep), tuple(Arrow(a.name, relabel[a.source], relabel[a.target]) for a in arrows))
        names = {a.name for a in arrows}
        rels = []
        for r in self.relations:
            terms = tuple((c, p) for c, p in r.terms if all(nm in names for nm in p))
            if terms:
                rels.append(Relation(terms))
        return BoundQuiverAlgebra(q, rels, self.length_cap, name=f"{self.name}/<e{sorted(drop)}>"), relabel

    # registry of indecomposables (created lazily by repcat) ------------------------

    @property
    def cache(self) -> dict:
        return self._cache


@dataclass(frozen=True)
class AlgebraElement:
    algebra: BoundQuiverAlgebra = field(repr=False, compare=False)
    coeffs: dict = field(default_factory=dict)

    def _check(self, other: "AlgebraElement") -> None:
        if other.algebra is not self.algebra:
            raise AlgebraError("elements belong to different algebras")

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, self.algebra.multiply(self.coeffs, other.coeffs))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return AlgebraElement(self.algebra, {k: v for k, v in out.items() if v})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def scale(self, c) -> "AlgebraElement":
        c = to_fraction(c)
        return AlgebraElement(self.algebra, {k: c * v for k, v in self.coeffs.items() if c * v})

    def is_zero(self) -> bool:
        return not self.coeffs

    def vector(self) -> tuple[Fraction, ...]:
        return tuple(self.coeffs.get(i, Fraction(0)) for i in range(self.algebra.dim))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            lab = self.algebra.basis_label(k)
            parts.append(lab if c == 1 else f"{c}*{lab}")
        return " + ".join(parts)


def build_algebra(quiver: Quiver, relations: Sequence[Relation] = (),
                  length_cap: int = DEFAULT_LENGTH_CAP, name: str = "") -> BoundQuiverAlgebra:
    return BoundQuiverAlgebra(quiver, relations, length_cap, name)


def multiply(algebra: BoundQuiverAlgebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.algebra is not algebra or y.algebra is not algebra:
        raise AlgebraError("elements belong to a different algebra")
    return x * y


def opposite(algebra: BoundQuiverAlgebra) -> BoundQuiverAlgebra:
    return algebra.opposite()
