"""Representations of bound quivers and the module-category engine.

A representation stores one exact matrix per arrow, of shape
``d_target x d_source``.  Hom spaces are kernels of the stacked
intertwining equations; everything else (kernels, covers, presentations,
the transpose and the AR translate) is built on top of :func:`hom_basis`.

Indecomposable isomorphism classes get stable integer ids from a
per-algebra :class:`Registry`.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .bqa import AlgebraError, BoundQuiverAlgebra
from .exactla import (
    Matrix,
    SparseRow,
    block_diag,
    charpoly,
    complement_basis,
    dense_to_sparse,
    hstack,
    kernel_basis,
    solve,
    sparse_kernel,
    sparse_rank,
    sparse_rref,
    sparse_to_dense,
    vstack,
)


class RepresentationError(ValueError):
    pass


class NonSplitEndomorphismRing(RuntimeError):
    """Raised when a piece has ``dim End/rad End > 1`` but no rational endomorphism splits it."""


class Representation:
    """A finite-dimensional left module over a bound quiver algebra."""

    __slots__ = ("algebra", "dims", "maps", "_hash")

    def __init__(self, algebra: BoundQuiverAlgebra, dims: Sequence[int],
                 maps: Sequence[Matrix] | dict | None = None, check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        q = algebra.quiver
        if len(self.dims) != q.vertex_count:
            raise RepresentationError("dimension vector length differs from the vertex count")
        if maps is None:
            maps = [Matrix.zeros(self.dims[a.target - 1], self.dims[a.source - 1]) for a in q.arrows]
        elif isinstance(maps, dict):
            maps = [maps.get(a.name, Matrix.zeros(self.dims[a.target - 1], self.dims[a.source - 1]))
                    if not isinstance(maps.get(a.name), (list, tuple)) else Matrix.from_rows(maps[a.name])
                    for a in q.arrows]
        self.maps = tuple(maps)
        self._hash = None
        if len(self.maps) != len(q.arrows):
            raise RepresentationError("one matrix per arrow is required")
        for a, m in zip(q.arrows, self.maps):
            if m.shape != (self.dims[a.target - 1], self.dims[a.source - 1]):
                raise RepresentationError(f"matrix of arrow {a.name!r} has shape {m.shape}")
        if check:
            for rel in algebra.relations:
                if not self.relation_matrix(rel).is_zero():
                    raise RepresentationError("representation violates a relation")

    # basic data -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def d(self, v: int) -> int:
        return self.dims[v - 1]

    def path_matrix(self, source: int, arrows: Sequence[int]) -> Matrix:
        m = Matrix.identity(self.d(source))
        for k in arrows:
            m = self.maps[k] @ m
        return m

    def relation_matrix(self, rel) -> Matrix:
        q = self.algebra.quiver
        out = None
        for c, names in rel.terms:
            idx = [q.arrow_index(nm) for nm in names]
            m = self.path_matrix(q.arrows[idx[0]].source, idx).scale(c)
            out = m if out is None else out + m
        return out

    def basis_action(self, i: int) -> Matrix:
        """Matrix of the basis element ``i`` acting from its source to its target space."""
        b = self.algebra.basis[i]
        return self.path_matrix(b.source, b.arrows)

    def is_zero(self) -> bool:
        return self.dim == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return self.algebra is other.algebra and self.dims == other.dims and self.maps == other.maps

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dims, self.maps))
        return self._hash

    def __repr__(self) -> str:
        return f"Representation(dims={self.dims})"


@dataclass(frozen=True)
class Morphism:
    source: Representation
    target: Representation
    mats: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "mats", tuple(self.mats))
        for v, m in enumerate(self.mats):
            if m.shape != (self.target.dims[v], self.source.dims[v]):
                raise RepresentationError("morphism block has the wrong shape")

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(x for m in self.mats for x in m.flat())

    def is_intertwining(self) -> bool:
        for a, sm, tm in zip(self.source.algebra.quiver.arrows, self.source.maps, self.target.maps):
            if self.mats[a.target - 1] @ sm != tm @ self.mats[a.source - 1]:
                return False
        return True

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition ``self o other``."""
        return Morphism(other.source, self.target, tuple(a @ b for a, b in zip(self.mats, other.mats)))

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, tuple(a + b for a, b in zip(self.mats, other.mats)))

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, tuple(m.scale(c) for m in self.mats))

    def is_isomorphism(self) -> bool:
        return all(m.rows == m.cols and m.rank() == m.rows for m in self.mats)

    def is_surjective(self) -> bool:
        return all(m.rank() == m.rows for m in self.mats)

    def is_injective(self) -> bool:
        return all(m.rank() == m.cols for m in self.mats)

    def rank(self) -> int:
        return sum(m.rank() for m in self.mats)


def zero_morphism(m: Representation, n: Representation) -> Morphism:
    return Morphism(m, n, tuple(Matrix.zeros(b, a) for a, b in zip(m.dims, n.dims)))


def identity(m: Representation) -> Morphism:
    return Morphism(m, m, tuple(Matrix.identity(d) for d in m.dims))


def linear_combination(morphisms: Sequence[Morphism], coeffs: Sequence) -> Morphism:
    out = None
    for f, c in zip(morphisms, coeffs):
        if c:
            g = f.scale(c)
            out = g if out is None else out + g
    if out is None:
        return zero_morphism(morphisms[0].source, morphisms[0].target)
    return out


def zero_rep(algebra: BoundQuiverAlgebra) -> Representation:
    return Representation(algebra, [0] * algebra.n, check=False)


# direct sums -----------------------------------------------------------------

def direct_sum(reps: Sequence[Representation], algebra: BoundQuiverAlgebra | None = None) -> Representation:
    if not reps:
        if algebra is None:
            raise RepresentationError("empty direct sum needs the algebra")
        return zero_rep(algebra)
    alg = reps[0].algebra
    dims = [sum(r.dims[v] for r in reps) for v in range(alg.n)]
    maps = [block_diag([r.maps[k] for r in reps]) for k in range(len(alg.quiver.arrows))]
    return Representation(alg, dims, maps, check=False)


def injections(reps: Sequence[Representation], total: Representation) -> list[Morphism]:
    out = []
    offs = [0] * total.algebra.n
    for r in reps:
        mats = []
        for v in range(total.algebra.n):
            data = [[Fraction(0)] * r.dims[v] for _ in range(total.dims[v])]
            for i in range(r.dims[v]):
                data[offs[v] + i][i] = Fraction(1)
            mats.append(Matrix(total.dims[v], r.dims[v], data))
        out.append(Morphism(r, total, tuple(mats)))
        offs = [o + d for o, d in zip(offs, r.dims)]
    return out


def projections(reps: Sequence[Representation], total: Representation) -> list[Morphism]:
    return [Morphism(total, f.source, tuple(m.transpose() for m in f.mats))
            for f in injections(reps, total)]


def power(rep: Representation, k: int) -> Representation:
    return direct_sum([rep] * k, rep.algebra)


# projectives and injectives -------------------------------------------------------

def projective(algebra: BoundQuiverAlgebra, i: int) -> Representation:
    """``P_i = Lambda e_i``: paths out of ``i``, arrows acting by left composition."""
    key = ("proj", i)
    hit = algebra.cache.get(key)
    if hit is not None:
        return hit
    if not 1 <= i <= algebra.n:
        raise RepresentationError(f"vertex {i} out of range")
    q = algebra.quiver
    dims = [len(algebra.paths_between(i, j)) for j in q.vertices]
    maps = []
    for k, a in enumerate(q.arrows):
        src = algebra.paths_between(i, a.source)
        tgt = algebra.paths_between(i, a.target)
        pos = {b: r for r, b in enumerate(tgt)}
        data = [[Fraction(0)] * len(src) for _ in tgt]
        for c, b in enumerate(src):
            path = algebra.basis[b]
            for bi, val in algebra.normal_form(i, path.arrows + (k,)).items():
                data[pos[bi]][c] = val
        maps.append(Matrix(len(tgt), len(src), data))
    rep = Representation(algebra, dims, maps)
    algebra.cache[key] = rep
    return rep


def injective(algebra: BoundQuiverAlgebra, i: int) -> Representation:
    """``I_i = D(e_i Lambda)``: duals of paths into ``i``, arrows acting by precomposition."""
    key = ("inj", i)
    hit = algebra.cache.get(key)
    if hit is not None:
        return hit
    if not 1 <= i <= algebra.n:
        raise RepresentationError(f"vertex {i} out of range")
    q = algebra.quiver
    dims = [len(algebra.paths_between(j, i)) for j in q.vertices]
    maps = []
    for k, a in enumerate(q.arrows):
        # R: paths t(a)->i  ->  paths s(a)->i,  x |-> x * a ; the action is R^T
        src = algebra.paths_between(a.target, i)
        tgt = algebra.paths_between(a.source, i)
        pos = {b: r for r, b in enumerate(tgt)}
        data = [[Fraction(0)] * len(src) for _ in tgt]
        for c, b in enumerate(src):
            path = algebra.basis[b]
            for bi, val in algebra.normal_form(a.source, (k,) + path.arrows).items():
                data[pos[bi]][c] = val
        maps.append(Matrix(len(tgt), len(src), data).transpose())
    rep = Representation(algebra, dims, maps)
    algebra.cache[key] = rep
    return rep


def simple(algebra: BoundQuiverAlgebra, i: int) -> Representation:
    dims = [1 if v == i else 0 for v in algebra.quiver.vertices]
    return Representation(algebra, dims, check=False)


def regular(algebra: BoundQuiverAlgebra) -> Representation:
    return direct_sum([projective(algebra, i) for i in algebra.quiver.vertices], algebra)


def dual(rep: Representation) -> Representation:
    """``D = Hom_k(-, k)``: a module over the opposite algebra."""
    op = rep.algebra.opposite()
    return Representation(op, rep.dims, [m.transpose() for m in rep.maps], check=False)


def dual_morphism(f: Morphism) -> Morphism:
    return Morphism(dual(f.target), dual(f.source), tuple(m.transpose() for m in f.mats))


# maps between sums of projectives, described by algebra elements ------------------------

def projective_sum(algebra: BoundQuiverAlgebra, vertices: Sequence[int]) -> Representation:
    return direct_sum([projective(algebra, v) for v in vertices], algebra)


def map_from_projectives(algebra: BoundQuiverAlgebra, vertices: Sequence[int],
                         target: Representation, vectors: Sequence[Sequence]) -> Morphism:
    """The map ``(+)_k P_{v_k} -> M`` sending ``e_{v_k}`` to ``vectors[k]`` in ``M_{v_k}``."""
    src = projective_sum(algebra, vertices)
    cols: list[list[tuple]] = [[] for _ in range(algebra.n)]
    for v, vec in zip(vertices, vectors):
        vec = tuple(vec)
        for w in algebra.quiver.vertices:
            for b in algebra.paths_between(v, w):
                cols[w - 1].append(target.basis_action(b).apply(vec))
    mats = tuple(Matrix.from_columns(cols[w], target.dims[w]) for w in range(algebra.n))
    return Morphism(src, target, mats)


def elements_to_vector(algebra: BoundQuiverAlgebra, source: int, target: int, x: SparseRow) -> list[Fraction]:
    return [x.get(b, Fraction(0)) for b in algebra.paths_between(source, target)]


def projective_map(algebra: BoundQuiverAlgebra, src: Sequence[int], tgt: Sequence[int],
                   elements: Sequence[Sequence[SparseRow]]) -> Morphism:
    """Map ``(+)_k P_{src_k} -> (+)_l P_{tgt_l}`` given by ``elements[l][k]``.

    Component ``(l, k)`` is right multiplication ``p |-> p * x`` by an element
    ``x`` of ``e_{src_k} Lambda e_{tgt_l}`` (paths ``tgt_l -> src_k``).
    """
    target = projective_sum(algebra, tgt)
    vectors = []
    for k, v in enumerate(src):
        vec: list[Fraction] = []
        for l, w in enumerate(tgt):
            vec.extend(elements_to_vector(algebra, w, v, elements[l][k]))
        vectors.append(vec)
    return map_from_projectives(algebra, src, target, vectors)


def projective_map_elements(algebra: BoundQuiverAlgebra, src: Sequence[int], tgt: Sequence[int],
                            f: Morphism) -> list[list[SparseRow]]:
    """Inverse of :func:`projective_map`: read the elements off ``f(e_{src_k})``."""
    out = [[{} for _ in src] for _ in tgt]
    for k, v in enumerate(src):
        # column of e_v inside (P_src)_v
        off_k = sum(len(algebra.paths_between(u, v)) for u in src[:k])
        pos = off_k + algebra.paths_between(v, v).index(algebra.trivial(v))
        col = f.mats[v - 1].column(pos)
        off = 0
        for l, w in enumerate(tgt):
            paths = algebra.paths_between(w, v)
            out[l][k] = {b: col[off + r] for r, b in enumerate(paths) if col[off + r]}
            off += len(paths)
    return out


# Hom spaces -------------------------------------------------------------------

def hom_basis(m: Representation, n: Representation) -> list[Morphism]:
    """Basis of ``Hom(M, N)`` from the kernel of the intertwining equations."""
    if m.algebra is not n.algebra:
        raise RepresentationError("modules over different algebras")
    alg = m.algebra
    offs = []
    total = 0
    for v in range(alg.n):
        offs.append(total)
        total += n.dims[v] * m.dims[v]
    if total == 0:
        return []
    rows: list[SparseRow] = []
    for a, ma, na in zip(alg.quiver.arrows, m.maps, n.maps):
        s, t = a.source - 1, a.target - 1
        ds, dt = m.dims[s], m.dims[t]
        es, et = n.dims[s], n.dims[t]
        # (phi_t M_a - N_a phi_s)[i, j] = 0 for i < et, j < ds
        for i in range(et):
            for j in range(ds):
                row: SparseRow = {}
                for k in range(dt):
                    c = ma[k, j]
                    if c:
                        idx = offs[t] + i * dt + k
                        row[idx] = row.get(idx, 0) + c
                for k in range(es):
                    c = na[i, k]
                    if c:
                        idx = offs[s] + k * ds + j
                        row[idx] = row.get(idx, 0) - c
                if row:
                    rows.append(row)
    out = []
    for vec in sparse_kernel(rows, total):
        mats = []
        for v in range(alg.n):
            r, c = n.dims[v], m.dims[v]
            mats.append(Matrix(r, c, [[vec.get(offs[v] + i * c + j, Fraction(0)) for j in range(c)]
                                      for i in range(r)]))
        out.append(Morphism(m, n, tuple(mats)))
    return out


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_basis(m, n))


def span_rank(morphisms: Iterable[Morphism]) -> int:
    return sparse_rank(dense_to_sparse(f.flat()) for f in morphisms)


# sub and quotient modules -----------------------------------------------------------

def submodule(m: Representation, spaces: Sequence[Matrix]) -> tuple[Representation, Morphism]:
    """Submodule spanned vertex-wise by the columns of ``spaces`` (assumed independent and stable)."""
    alg = m.algebra
    dims = [s.cols for s in spaces]
    maps = []
    for a, ma in zip(alg.quiver.arrows, m.maps):
        s, t = a.source - 1, a.target - 1
        img = ma @ spaces[s]
        x = solve(spaces[t], img)
        if x is None:
            raise RepresentationError("subspace is not stable under the arrows")
        maps.append(x)
    sub = Representation(alg, dims, maps, check=False)
    return sub, Morphism(sub, m, tuple(spaces))


def independent_columns(mat: Matrix) -> Matrix:
    red, _ = sparse_rref(dense_to_sparse(c) for c in mat.columns())
    return Matrix.from_columns([sparse_to_dense(v, mat.rows) for v in red], mat.rows)


def quotient(m: Representation, spaces: Sequence[Matrix]) -> tuple[Representation, Morphism]:
    """``M / S`` for a stable family of subspaces, with the projection."""
    alg = m.algebra
    sections = []
    projs = []
    for v in range(alg.n):
        d = m.dims[v]
        sub = spaces[v]
        comp = complement_basis(sub, d)
        sec = Matrix.from_columns([[1 if i == c else 0 for i in range(d)] for c in comp], d)
        full = hstack([sub, sec], rows=d) if sub.cols else sec
        if full.cols != d:
            raise RepresentationError("subspace basis is not independent")
        inv = solve(full, Matrix.identity(d))
        proj = inv.submatrix(range(sub.cols, d), range(d))
        sections.append(sec)
        projs.append(proj)
    dims = [p.rows for p in projs]
    maps = []
    for a, ma in zip(alg.quiver.arrows, m.maps):
        s, t = a.source - 1, a.target - 1
        maps.append(projs[t] @ ma @ sections[s])
    q = Representation(alg, dims, maps, check=False)
    return q, Morphism(m, q, tuple(projs))


def kernel(f: Morphism) -> tuple[Representation, Morphism]:
    return submodule(f.source, [kernel_basis(mt) for mt in f.mats])


def image(f: Morphism) -> tuple[Representation, Morphism]:
    return submodule(f.target, [independent_columns(mt) for mt in f.mats])


def cokernel(f: Morphism) -> tuple[Representation, Morphism]:
    return quotient(f.target, [independent_columns(mt) for mt in f.mats])


def radical(m: Representation) -> tuple[Representation, Morphism]:
    alg = m.algebra
    spaces = []
    for w in alg.quiver.vertices:
        cols = [m.maps[k] for k, a in enumerate(alg.quiver.arrows) if a.target == w]
        if cols:
            spaces.append(independent_columns(hstack(cols)))
        else:
            spaces.append(Matrix.zeros(m.d(w), 0))
    return submodule(m, spaces)


def top(m: Representation) -> tuple[Representation, Morphism]:
    rad, inc = radical(m)
    return quotient(m, list(inc.mats))


def socle(m: Representation) -> tuple[Representation, Morphism]:
    alg = m.algebra
    spaces = []
    for w in alg.quiver.vertices:
        outs = [m.maps[k] for k, a in enumerate(alg.quiver.arrows) if a.source == w]
        if outs:
            spaces.append(kernel_basis(vstack(outs)))
        else:
            spaces.append(Matrix.identity(m.d(w)))
    return submodule(m, spaces)


def top_vector(m: Representation) -> tuple[int, ...]:
    rad, _ = radical(m)
    return tuple(a - b for a, b in zip(m.dims, rad.dims))


# covers and presentations -----------------------------------------------------

@dataclass(frozen=True)
class ProjectiveCover:
    vertices: tuple[int, ...]
    map: Morphism


@dataclass(frozen=True)
class MinPresentation:
    """``P1 --d1--> P0 --d0--> M -> 0`` with both maps projective covers onto their images."""

    module: Representation
    p0: tuple[int, ...]
    p1: tuple[int, ...]
    d0: Morphism
    d1: Morphism
    elements: tuple[tuple[SparseRow, ...], ...]
    syzygy: Representation
    syzygy_inclusion: Morphism

    @property
    def p0_mult(self) -> tuple[int, ...]:
        return _mult(self.p0, self.module.algebra.n)

    @property
    def p1_mult(self) -> tuple[int, ...]:
        return _mult(self.p1, self.module.algebra.n)


def _mult(vertices: Sequence[int], n: int) -> tuple[int, ...]:
    out = [0] * n
    for v in vertices:
        out[v - 1] += 1
    return tuple(out)


def projective_cover(m: Representation) -> ProjectiveCover:
    """Cover lifting the splitting of ``top M`` chosen by the first free basis vectors."""
    alg = m.algebra
    rad, inc = radical(m)
    vertices = []
    vectors = []
    for w in alg.quiver.vertices:
        for c in complement_basis(inc.mats[w - 1], m.d(w)):
            vertices.append(w)
            vectors.append([1 if i == c else 0 for i in range(m.d(w))])
    return ProjectiveCover(tuple(vertices), map_from_projectives(alg, vertices, m, vectors))


def min_presentation(m: Representation) -> MinPresentation:
    key = ("minpres", m)
    hit = m.algebra.cache.get(key)
    if hit is not None:
        return hit
    alg = m.algebra
    c0 = projective_cover(m)
    omega, inc = kernel(c0.map)
    c1 = projective_cover(omega)
    d1 = inc @ c1.map
    elements = projective_map_elements(alg, c1.vertices, c0.vertices, d1)
    pres = MinPresentation(m, c0.vertices, c1.vertices, c0.map, d1,
                           tuple(tuple(r) for r in elements), omega, inc)
    alg.cache[key] = pres
    return pres


def is_projective(m: Representation) -> bool:
    pres = min_presentation(m)
    return not pres.p1 and pres.syzygy.dim == 0


# transpose and AR translation -----------------------------------------------------

def _dual_elements(elements, rows: int, cols: int) -> list[list[SparseRow]]:
    return [[elements[l][k] for l in range(rows)] for k in range(cols)]


def transpose(m: Representation) -> Representation:
    """``Tr M = coker(d1*: P0* -> P1*)`` over the opposite algebra."""
    alg = m.algebra
    pres = min_presentation(m)
    op = alg.opposite()
    if not pres.p1:
        return zero_rep(op)
    dual_el = _dual_elements(pres.elements, len(pres.p0), len(pres.p1))
    f = projective_map(op, pres.p0, pres.p1, dual_el)
    return cokernel(f)[0]


def nakayama_of_presentation(m: Representation) -> Morphism:
    """``nu d1: nu P1 -> nu P0`` assembled from the injective representations."""
    alg = m.algebra
    pres = min_presentation(m)
    op = alg.opposite()
    dual_el = _dual_elements(pres.elements, len(pres.p0), len(pres.p1))
    fstar = projective_map(op, pres.p0, pres.p1, dual_el)
    nu = dual_morphism(fstar)
    inj1 = direct_sum([injective(alg, v) for v in pres.p1], alg)
    inj0 = direct_sum([injective(alg, v) for v in pres.p0], alg)
    if inj1.maps != nu.source.maps or inj0.maps != nu.target.maps:
        raise RepresentationError("Nakayama image disagrees with the injective representations")
    return Morphism(inj1, inj0, nu.mats)


def tau(m: Representation) -> Representation:
    """``tau M = ker(nu d1)``."""
    key = ("tau", m)
    hit = m.algebra.cache.get(key)
    if hit is not None:
        return hit
    pres = min_presentation(m)
    out = zero_rep(m.algebra) if not pres.p1 else kernel(nakayama_of_presentation(m))[0]
    m.algebra.cache[key] = out
    return out


def tau_minus(m: Representation) -> Representation:
    """``tau^- M = Tr D M``."""
    return transpose(dual(m))


# Ext and stable Hom -------------------------------------------------------------------

def ext1_dim(m: Representation, n: Representation) -> int:
    """``dim Ext^1(M, N) = dim coker(Hom(P0, N) -> Hom(Omega M, N))``."""
    alg = m.algebra
    pres = min_presentation(m)
    omega, inc = pres.syzygy, pres.syzygy_inclusion
    if omega.dim == 0:
        return 0
    target_dim = hom_dim(omega, n)
    if target_dim == 0:
        return 0
    restricted = []
    for k, v in enumerate(pres.p0):
        for c in range(n.d(v)):
            vecs = [[0] * n.d(w) for w in pres.p0]
            vecs[k] = [1 if i == c else 0 for i in range(n.d(v))]
            g = map_from_projectives(alg, pres.p0, n, vecs)
            restricted.append(g @ inc)
    return target_dim - span_rank(restricted)


def stable_hom_dim(x: Representation, y: Representation) -> int:
    """``dim Hom(X, Y)`` modulo maps factoring through a projective."""
    total = hom_dim(x, y)
    if total == 0:
        return 0
    cover = projective_cover(y)
    through = [cover.map @ g for g in hom_basis(x, cover.map.source)]
    return total - span_rank(through)


# annihilators -------------------------------------------------------------------

def annihilator(m: Representation) -> Matrix:
    """Columns: basis of ``{a in Lambda : a M = 0}`` in algebra coordinates."""
    alg = m.algebra
    rows_per_basis = []
    for i in range(alg.dim):
        rows_per_basis.append(m.basis_action(i).flat())
    # a = sum c_i b_i acts as zero iff each (source, target) block vanishes
    eqs: list[SparseRow] = []
    blocks: dict[tuple[int, int], list[int]] = {}
    for i, b in enumerate(alg.basis):
        blocks.setdefault((b.source, b.target), []).append(i)
    for (s, t), idx in blocks.items():
        size = m.d(s) * m.d(t)
        for e in range(size):
            row = {i: rows_per_basis[i][e] for i in idx if rows_per_basis[i][e]}
            if row:
                eqs.append(row)
    ker = sparse_kernel(eqs, alg.dim)
    return Matrix.from_columns([sparse_to_dense(v, alg.dim) for v in ker], alg.dim)


def is_faithful(m: Representation) -> bool:
    return annihilator(m).cols == 0


def is_sincere(m: Representation) -> bool:
    return all(d > 0 for d in m.dims)


# endomorphism rings and decomposition --------------------------------------------------

def _trace_form_rank(endos: Sequence[Morphism]) -> int:
    """``dim End/rad End`` via the trace form ``(x, y) -> tr(xy)`` on ``M`` (characteristic 0)."""
    gram = []
    for x in endos:
        row = []
        for y in endos:
            t = Fraction(0)
            for mx, my in zip(x.mats, y.mats):
                d = mx.rows
                for i in range(d):
                    rx = mx.row(i)
                    for k in range(d):
                        if rx[k]:
                            t += rx[k] * my[k, i]
            row.append(t)
        gram.append(row)
    return sparse_rank(dense_to_sparse(r) for r in gram)


def endomorphism_radical(endos: Sequence[Morphism]) -> list[list[Fraction]]:
    """Coefficient vectors (in the given basis) spanning ``rad End``."""
    gram = []
    for x in endos:
        row = []
        for y in endos:
            row.append(sum((_tr(mx @ my) for mx, my in zip(x.mats, y.mats)), Fraction(0)))
        gram.append(row)
    ker = sparse_kernel((dense_to_sparse(r) for r in gram), len(endos))
    return [list(sparse_to_dense(v, len(endos))) for v in ker]


def _tr(m: Matrix) -> Fraction:
    return sum((m[i, i] for i in range(m.rows)), Fraction(0))


def _quick_indecomposable(m: Representation) -> bool:
    if m.dim <= 1:
        return True
    if sum(top_vector(m)) == 1:
        return True
    soc, _ = socle(m)
    return soc.dim == 1


def _total_matrix(f: Morphism) -> Matrix:
    return block_diag(list(f.mats))


def _eval_poly(coeffs: Sequence[Fraction], f: Morphism) -> Morphism:
    """Horner evaluation of a polynomial (highest degree first) at an endomorphism."""
    ident = identity(f.source)
    out = zero_morphism(f.source, f.source)
    for c in coeffs:
        out = (f @ out) + ident.scale(c)
    return out


def _sweep(endos: Sequence[Morphism]) -> Iterable[Morphism]:
    h = len(endos)
    for e in endos:
        yield e
    for i, j in itertools.combinations(range(h), 2):
        for c in (1, -1, 2, -2):
            yield endos[i] + endos[j].scale(c)
    for base in range(2, 8):
        yield linear_combination(endos, [base ** k for k in range(h)])
        yield linear_combination(endos, [(k + 1) * (-1) ** k for k in range(h)])
    for r in (1, 2):
        if h > 5:
            break
        for coeffs in itertools.product(range(-r, r + 1), repeat=h):
            if any(coeffs):
                yield linear_combination(endos, coeffs)


def _split_by(f: Morphism) -> tuple[list[Matrix], list[Matrix]] | None:
    """Primary decomposition along the first irreducible factor of the characteristic polynomial."""
    cp = charpoly(_total_matrix(f))
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in cp], x, domain="QQ")
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None
    g, mult = factors[0]
    first = g ** mult
    rest = sympy.Poly(1, x, domain="QQ")
    for h, e in factors[1:]:
        rest = rest * h ** e

    def coeffs(p):
        return [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in p.all_coeffs()]

    a = _eval_poly(coeffs(first), f)
    b = _eval_poly(coeffs(rest), f)
    return [kernel_basis(m) for m in a.mats], [kernel_basis(m) for m in b.mats]


def split_indecomposables(m: Representation) -> list[Representation]:
    """Indecomposable summands of ``M`` (with repetition) by Fitting/primary splitting."""
    out = []
    stack = [m]
    while stack:
        x = stack.pop()
        if x.dim == 0:
            continue
        if _quick_indecomposable(x):
            out.append(x)
            continue
        endos = hom_basis(x, x)
        if _trace_form_rank(endos) == 1:
            out.append(x)
            continue
        for f in _sweep(endos):
            pieces = _split_by(f)
            if pieces is not None:
                left, right = pieces
                stack.append(submodule(x, right)[0])
                stack.append(submodule(x, left)[0])
                break
        else:
            raise NonSplitEndomorphismRing(
                f"non-split endomorphism ring: module with dims {x.dims} has dim End/rad End > 1 "
                "but no rational endomorphism splits it")
    return out


# isomorphism --------------------------------------------------------------------

def _iso_indecomposable(m: Representation, n: Representation) -> bool:
    if m.dims != n.dims:
        return False
    fs = hom_basis(m, n)
    if not fs:
        return False
    gs = hom_basis(n, m)
    if not gs:
        return False
    # End(M) is local: a composite is either invertible or in the radical
    for f in fs:
        for g in gs:
            if (g @ f).is_isomorphism():
                return True
    return False


def is_isomorphic(m: Representation, n: Representation) -> bool:
    if m.algebra is not n.algebra:
        raise RepresentationError("modules over different algebras")
    if m.dims != n.dims:
        return False
    if m == n:
        return True
    return decompose(m) == decompose(n)


# registry -----------------------------------------------------------------------

class Registry:
    """Stable integer ids for indecomposable isomorphism classes over one algebra."""

    def __init__(self, algebra: BoundQuiverAlgebra):
        self.algebra = algebra
        self.modules: list[Representation] = []
        self._buckets: dict[tuple[int, ...], list[int]] = {}
        self._exact: dict[Representation, int] = {}
        self._lock = threading.RLock()
        self._hom: dict[tuple[int, int], int] = {}
        self._homb: dict[tuple[int, int], list[Morphism]] = {}
        self._tau: dict[int, tuple[tuple[int, int], ...]] = {}
        self._proj: dict[int, int | None] = {}
        self.names: dict[int, str] = {}

    def __len__(self) -> int:
        return len(self.modules)

    def __getitem__(self, i: int) -> Representation:
        return self.modules[i]

    def lookup(self, m: Representation) -> int | None:
        hit = self._exact.get(m)
        if hit is not None:
            return hit
        for i in self._buckets.get(m.dims, []):
            if _iso_indecomposable(self.modules[i], m):
                self._exact[m] = i
                return i
        return None

    def insert(self, m: Representation) -> int:
        """Insert-if-absent for an indecomposable module; returns its id."""
        with self._lock:
            hit = self.lookup(m)
            if hit is not None:
                return hit
            i = len(self.modules)
            self.modules.append(m)
            self._buckets.setdefault(m.dims, []).append(i)
            self._exact[m] = i
            return i

    def hom_basis(self, i: int, j: int) -> list[Morphism]:
        key = (i, j)
        hit = self._homb.get(key)
        if hit is None:
            hit = hom_basis(self.modules[i], self.modules[j])
            self._homb[key] = hit
            self._hom[key] = len(hit)
        return hit

    def hom_dim(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._hom:
            self.hom_basis(i, j)
        return self._hom[key]

    def tau(self, i: int) -> tuple[tuple[int, int], ...]:
        hit = self._tau.get(i)
        if hit is None:
            hit = decompose(tau(self.modules[i]))
            self._tau[i] = hit
        return hit

    def projective_vertex(self, i: int) -> int | None:
        """Vertex ``v`` with ``X_i = P_v``, or ``None`` when ``X_i`` is not projective."""
        if i not in self._proj:
            m = self.modules[i]
            tv = top_vector(m)
            v = None
            if sum(tv) == 1:
                w = tv.index(1) + 1
                if projective(self.algebra, w).dims == m.dims:
                    v = w
            self._proj[i] = v
        return self._proj[i]

    def label(self, i: int) -> str:
        return self.names.get(i) or composition_label(self.modules[i])


def registry(algebra: BoundQuiverAlgebra) -> Registry:
    with algebra._lock:
        reg = algebra.cache.get("registry")
        if reg is None:
            reg = Registry(algebra)
            algebra.cache["registry"] = reg
            for v in algebra.quiver.vertices:
                reg.names[reg.insert(projective(algebra, v))] = f"P{v}"
    return reg


Decomposition = tuple[tuple[int, int], ...]


def decompose(m: Representation) -> Decomposition:
    """Registry ids of the indecomposable summands with multiplicities, sorted by id."""
    key = ("decomp", m)
    hit = m.algebra.cache.get(key)
    if hit is not None:
        return hit
    reg = registry(m.algebra)
    counts: dict[int, int] = {}
    for piece in split_indecomposables(m):
        i = reg.insert(piece)
        counts[i] = counts.get(i, 0) + 1
    out = tuple(sorted(counts.items()))
    m.algebra.cache[key] = out
    return out


def module_of(algebra: BoundQuiverAlgebra, ids: Iterable[int]) -> Representation:
    reg = registry(algebra)
    return direct_sum([reg[i] for i in ids], algebra)


def composition_label(m: Representation) -> str:
    """Radical layers as rows of vertex labels, e.g. ``1/2`` for ``P1`` over ``kQ/(ba)``."""
    layers = []
    cur = m
    guard = 0
    while cur.dim and guard < 64:
        tv = top_vector(cur)
        layers.append("".join(str(v + 1) * c for v, c in enumerate(tv)))
        cur, _ = radical(cur)
        guard += 1
    return "/".join(layers) if layers else "0"


# APR tilting -----------------------------------------------------------------------

def apr_tilt(algebra: BoundQuiverAlgebra, i: int) -> Representation:
    """``(+)_{j != i} P_j (+) tau^- S_i`` for a sink ``i`` of a path algebra."""
    if algebra.relations:
        raise AlgebraError("APR tilting needs a hereditary path algebra (no relations)")
    if not algebra.quiver.is_sink(i):
        raise AlgebraError(f"vertex {i} is not a sink")
    parts = [projective(algebra, j) for j in algebra.quiver.vertices if j != i]
    parts.append(tau_minus(simple(algebra, i)))
    return direct_sum(parts, algebra)
