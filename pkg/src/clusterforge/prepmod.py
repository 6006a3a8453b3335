"""Preprojective algebras of Dynkin type and their finite-dimensional modules.

The double quiver replaces each Dynkin edge {i,j} (oriented here as i<j) by
arrows a: i->j and a*: j->i.  The defining relation, localized at a vertex
v, reads

    sum_{edges (v,w), v<w} M(a*) M(a)  -  sum_{edges (u,v), u<v} M(a) M(a*) = 0,

i.e. "back-and-forth" composites through higher-numbered neighbours minus
those through lower-numbered neighbours.  Every quantity this package
reports (dimensions, Hom, Ext, filtration layers) is invariant under this
choice of signs.

The algebra basis is computed degree by degree: spanning paths are reduced
modulo the relation ideal until the graded piece vanishes.  Injectives are
realized as duals of the right projectives e_i Lambda, never hard-coded.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from . import linalg
from .cluster import ExchangeMatrix
from .fields import QQ
from .linalg import (
    Matrix,
    column_space_basis,
    hstack,
    identity_matrix,
    mat_mul,
    nullspace,
    rank,
    rref,
    solve_matrix,
    vstack,
    zero_matrix,
)


class PrepmodError(Exception):
    pass


class ResourceCapError(PrepmodError):
    """The algebra-basis computation exceeded the desk-scale cap."""


# ----------------------------------------------------------------------
# quivers


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class DoubleQuiver:
    """Double quiver of a simply-laced Dynkin diagram."""

    kind: str
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        arrows = []
        for i, j in self.edges:
            arrows.append(Arrow(f"{i}->{j}", i, j))
            arrows.append(Arrow(f"{j}->{i}", j, i))
        object.__setattr__(self, "_arrows", tuple(arrows))
        object.__setattr__(self, "_arrow_index", {a.name: k for k, a in enumerate(arrows)})
        object.__setattr__(self, "_vertex_index", {v: k for k, v in enumerate(self.vertices)})

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self._arrows

    def arrow_position(self, name: str) -> int:
        return self._arrow_index[name]

    def vertex_index(self, v: int) -> int:
        return self._vertex_index[v]

    def arrows_from(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def neighbours(self, v: int) -> list[int]:
        out = []
        for i, j in self.edges:
            if i == v:
                out.append(j)
            elif j == v:
                out.append(i)
        return out

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


def dynkin_edges(letter: str, rank: int) -> tuple[tuple[int, int], ...]:
    """Edge lists for the simply-laced diagrams.

    Type D uses the labelling with external nodes 1, 2 attached to the
    central node 3 and the tail 3-4-...-n; for D_4 the external nodes are
    1, 2, 4 and the central node is 3.
    """
    if letter == "A":
        return tuple((i, i + 1) for i in range(1, rank))
    if letter == "D":
        if rank < 4:
            raise PrepmodError("type D needs rank >= 4")
        return ((1, 3), (2, 3)) + tuple((i, i + 1) for i in range(3, rank))
    if letter == "E":
        if rank not in (6, 7, 8):
            raise PrepmodError("type E needs rank 6, 7 or 8")
        chain = [(1, 3), (3, 4), (4, 5), (5, 6)] + [(i, i + 1) for i in range(6, rank)]
        return tuple(sorted(chain + [(2, 4)]))
    raise PrepmodError(f"unsupported Dynkin letter {letter!r}")


@lru_cache(maxsize=None)
def dynkin_quiver(kind: str) -> DoubleQuiver:
    """Build the double quiver from a type string like "A3" or "D4"."""
    letter = kind[0].upper()
    rank = int(kind[1:])
    edges = dynkin_edges(letter, rank)
    return DoubleQuiver(f"{letter}{rank}", tuple(range(1, rank + 1)), edges)


def cartan_pairing(quiver: DoubleQuiver, d: Sequence[int], e: Sequence[int]) -> int:
    """Symmetrized Cartan form: (e_i,e_i)=2, (e_i,e_j)=-1 on edges, else 0."""
    total = sum(2 * a * b for a, b in zip(d, e))
    for i, j in quiver.edges:
        ii, jj = quiver.vertex_index(i), quiver.vertex_index(j)
        total -= d[ii] * e[jj] + d[jj] * e[ii]
    return total


def positive_root_count(quiver: DoubleQuiver, vertices: Sequence[int]) -> int:
    """Number of positive roots of the sub-diagram induced on the given
    vertices, by reflection closure of the simple roots."""
    verts = sorted(set(vertices))
    if not verts:
        return 0
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    cartan = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in quiver.edges:
        if i in index and j in index:
            cartan[index[i]][index[j]] = -1
            cartan[index[j]][index[i]] = -1
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for alpha in frontier:
            for j in range(n):
                pairing = sum(cartan[j][k] * alpha[k] for k in range(n))
                beta = tuple(
                    a - (pairing if k == j else 0) for k, a in enumerate(alpha)
                )
                if beta not in roots:
                    roots.add(beta)
                    nxt.append(beta)
        frontier = nxt
        if len(roots) > 10000:
            raise ResourceCapError("root-system closure did not terminate")
    return sum(1 for r in roots if all(c >= 0 for c in r) and any(r))


# ----------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class QuiverRep:
    """A finite-dimensional representation of the double quiver.

    dims is indexed by quiver.vertices order; maps is a tuple parallel to
    quiver.arrows, each matrix of shape (target_dim, source_dim).  Values
    are immutable; never mutate the tuples.
    """

    quiver: DoubleQuiver
    field: object
    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]

    def dim(self, v: int) -> int:
        return self.dims[self.quiver.vertex_index(v)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def map_of(self, arrow: Arrow) -> Matrix:
        return self.maps[self.quiver.arrow_position(arrow.name)]

    def to_json(self) -> dict:
        return {
            "type": self.quiver.kind,
            "dims": {str(v): self.dim(v) for v in self.quiver.vertices},
            "maps": {
                a.name: [[str(x) for x in row] for row in m]
                for a, m in zip(self.quiver.arrows, self.maps)
            },
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QuiverRep":
        quiver = dynkin_quiver(data["type"])
        dims = tuple(int(data["dims"].get(str(v), 0)) for v in quiver.vertices)
        if any(d < 0 for d in dims):
            raise PrepmodError(f"negative dimension in {dims}")
        maps = []
        for a in quiver.arrows:
            rows = data.get("maps", {}).get(a.name)
            tdim = dims[quiver.vertex_index(a.target)]
            sdim = dims[quiver.vertex_index(a.source)]
            if rows is None:
                maps.append(zero_matrix(QQ, tdim, sdim))
                continue
            matrix = tuple(tuple(Fraction(x) for x in row) for row in rows)
            if len(matrix) != tdim or any(len(row) != sdim for row in matrix):
                raise PrepmodError(
                    f"map {a.name} has the wrong shape; expected {tdim} x {sdim}"
                )
            maps.append(matrix)
        return cls(quiver, QQ, dims, tuple(maps))


def zero_rep(quiver: DoubleQuiver, field=QQ) -> QuiverRep:
    dims = (0,) * len(quiver.vertices)
    maps = tuple(zero_matrix(field, 0, 0) for _ in quiver.arrows)
    return QuiverRep(quiver, field, dims, maps)


def simple_rep(quiver: DoubleQuiver, i: int, field=QQ) -> QuiverRep:
    dims = tuple(1 if v == i else 0 for v in quiver.vertices)
    maps = []
    for a in quiver.arrows:
        maps.append(
            zero_matrix(field, dims[quiver.vertex_index(a.target)], dims[quiver.vertex_index(a.source)])
        )
    return QuiverRep(quiver, field, dims, tuple(maps))


def direct_sum(*reps: QuiverRep) -> QuiverRep:
    if not reps:
        raise PrepmodError("direct_sum of no modules")
    quiver, field = reps[0].quiver, reps[0].field
    for r in reps:
        if r.quiver is not quiver and r.quiver != quiver:
            raise PrepmodError("direct sum over different quivers")
    dims = tuple(sum(r.dims[i] for r in reps) for i in range(len(quiver.vertices)))
    maps = []
    for ai, a in enumerate(quiver.arrows):
        ti = quiver.vertex_index(a.target)
        si = quiver.vertex_index(a.source)
        block = [[field.zero()] * dims[si] for _ in range(dims[ti])]
        roff = coff = 0
        for r in reps:
            m = r.maps[ai]
            for x in range(r.dims[ti]):
                for y in range(r.dims[si]):
                    block[roff + x][coff + y] = m[x][y]
            roff += r.dims[ti]
            coff += r.dims[si]
        maps.append(tuple(tuple(row) for row in block))
    return QuiverRep(quiver, field, dims, tuple(maps))


def check_relation(rep: QuiverRep) -> tuple[bool, Optional[int]]:
    """True iff the preprojective relation holds at every vertex; on failure
    the witness vertex is returned."""
    q, F = rep.quiver, rep.field
    for v in q.vertices:
        dv = rep.dim(v)
        acc = zero_matrix(F, dv, dv)
        for i, j in q.edges:
            if i == v:
                fwd = rep.map_of(Arrow(f"{i}->{j}", i, j))
                back = rep.map_of(Arrow(f"{j}->{i}", j, i))
                acc = linalg.mat_add(F, acc, mat_mul(F, back, fwd))
            elif j == v:
                fwd = rep.map_of(Arrow(f"{i}->{j}", i, j))
                back = rep.map_of(Arrow(f"{j}->{i}", j, i))
                acc = linalg.mat_add(F, acc, linalg.mat_scale(F, F.from_int(-1), mat_mul(F, fwd, back)))
        if any(not F.is_zero(x) for row in acc for x in row):
            return False, v
    return True, None


def is_nilpotent(rep: QuiverRep) -> bool:
    """The total path action is nilpotent (automatic in Dynkin type)."""
    q, F = rep.quiver, rep.field
    n = rep.total_dim
    if n == 0:
        return True
    offs = {}
    off = 0
    for v in q.vertices:
        offs[v] = off
        off += rep.dim(v)
    big = [[F.zero()] * n for _ in range(n)]
    for a, m in zip(q.arrows, rep.maps):
        ro, co = offs[a.target], offs[a.source]
        for x in range(rep.dim(a.target)):
            for y in range(rep.dim(a.source)):
                big[ro + x][co + y] = m[x][y]
    power = tuple(tuple(row) for row in big)
    for _ in range(n):
        power = mat_mul(F, power, tuple(tuple(row) for row in big))
    return all(F.is_zero(x) for row in power for x in row)


# ----------------------------------------------------------------------
# socle, top, filtrations


def _incoming_stack(rep: QuiverRep, v: int) -> Matrix:
    F = rep.field
    blocks = [rep.map_of(a) for a in rep.quiver.arrows_into(v)]
    return hstack(F, blocks, rep.dim(v))


def _outgoing_stack(rep: QuiverRep, v: int) -> Matrix:
    F = rep.field
    blocks = [rep.map_of(a) for a in rep.quiver.arrows_from(v)]
    total_rows = sum(len(b) for b in blocks)
    if total_rows == 0:
        return zero_matrix(F, 0, rep.dim(v))
    return vstack(F, blocks, rep.dim(v))


def socle_basis_at(rep: QuiverRep, v: int) -> list:
    """Basis vectors of the S_v-isotypic socle part: the joint kernel of the
    outgoing arrow maps at v."""
    out = _outgoing_stack(rep, v)
    if len(out) == 0:
        return [tuple(rep.field.one() if i == j else rep.field.zero() for j in range(rep.dim(v))) for i in range(rep.dim(v))]
    return nullspace(rep.field, out)


def radical_basis_at(rep: QuiverRep, v: int) -> Matrix:
    """Basis (as columns) of the image of the incoming arrow maps at v."""
    return column_space_basis(rep.field, _incoming_stack(rep, v))


def socle_top(rep: QuiverRep) -> dict:
    """Multiplicities of each simple in the top and in the socle."""
    top = []
    soc = []
    for v in rep.quiver.vertices:
        dv = rep.dim(v)
        top.append(dv - rank(rep.field, _incoming_stack(rep, v)))
        soc.append(len(socle_basis_at(rep, v)))
    return {"top": tuple(top), "socle": tuple(soc)}


def sub_rep(rep: QuiverRep, bases: Mapping[int, Matrix]) -> QuiverRep:
    """Subrepresentation on per-vertex column-span bases (must be arrow-stable)."""
    q, F = rep.quiver, rep.field
    basis = {}
    for v in q.vertices:
        b = bases.get(v)
        if b is None:
            b = identity_matrix(F, rep.dim(v))
        basis[v] = b
    dims = tuple(len(basis[v][0]) if basis[v] else 0 for v in q.vertices)
    maps = []
    for a in q.arrows:
        image = mat_mul(F, rep.map_of(a), basis[a.source])
        coords = solve_matrix(F, basis[a.target], image)
        if coords is None:
            raise PrepmodError(f"subspaces not stable under arrow {a.name}")
        maps.append(coords)
    return QuiverRep(q, F, dims, tuple(maps))


def quotient_rep(rep: QuiverRep, sub_bases: Mapping[int, Matrix]) -> QuiverRep:
    """Quotient by a submodule given by per-vertex subspace bases (columns)."""
    q, F = rep.quiver, rep.field
    projections = {}
    sections = {}
    new_dims = []
    for v in q.vertices:
        dv = rep.dim(v)
        kb = sub_bases.get(v)
        if kb is None or (kb and len(kb[0]) == 0) or dv == 0:
            projections[v] = identity_matrix(F, dv)
            sections[v] = identity_matrix(F, dv)
            new_dims.append(dv)
            continue
        rows = tuple(zip(*kb))  # subspace basis vectors as rows
        red, pivots = rref(F, rows)
        comp = [c for c in range(dv) if c not in pivots]
        proj = []
        for c in comp:
            row = [F.zero()] * dv
            row[c] = F.one()
            for r, pc in enumerate(pivots):
                row[pc] = F.neg(red[r][c])
            proj.append(tuple(row))
        projections[v] = tuple(proj)
        sect = [[F.zero()] * len(comp) for _ in range(dv)]
        for idx, c in enumerate(comp):
            sect[c][idx] = F.one()
        sections[v] = tuple(tuple(r) for r in sect)
        new_dims.append(len(comp))
    maps = []
    for a in q.arrows:
        m = mat_mul(F, projections[a.target], mat_mul(F, rep.map_of(a), sections[a.source]))
        maps.append(m)
    return QuiverRep(q, F, tuple(new_dims), tuple(maps))


def socle_subrep_bases(rep: QuiverRep) -> dict[int, Matrix]:
    out = {}
    for v in rep.quiver.vertices:
        vecs = socle_basis_at(rep, v)
        out[v] = tuple(zip(*vecs)) if vecs else zero_matrix(rep.field, rep.dim(v), 0)
    return out


def socle_series(rep: QuiverRep) -> tuple[tuple[int, ...], ...]:
    """Layer dimension vectors of the socle filtration, socle first."""
    layers = []
    current = rep
    guard = rep.total_dim + 1
    while not current.is_zero and guard:
        soc = socle_top(current)["socle"]
        layers.append(soc)
        current = quotient_rep(current, socle_subrep_bases(current))
        guard -= 1
    return tuple(layers)


def radical_series(rep: QuiverRep) -> tuple[tuple[int, ...], ...]:
    """Layer dimension vectors of the radical filtration, top first."""
    layers = []
    current = rep
    guard = rep.total_dim + 1
    while not current.is_zero and guard:
        bases = {v: radical_basis_at(current, v) for v in current.quiver.vertices}
        nxt = sub_rep(current, bases)
        layers.append(tuple(a - b for a, b in zip(current.dims, nxt.dims)))
        current = nxt
        guard -= 1
    return tuple(layers)


# ----------------------------------------------------------------------
# the functors removing top / socle isotypic parts


def functor_E(rep: QuiverRep, i: int) -> QuiverRep:
    """Kernel of the projection onto the S_i-isotypic part of the top."""
    bases = {i: radical_basis_at(rep, i)}
    return sub_rep(rep, bases)


def functor_E_dagger(rep: QuiverRep, i: int) -> QuiverRep:
    """Quotient by the S_i-isotypic part of the socle."""
    vecs = socle_basis_at(rep, i)
    if not vecs:
        return rep
    bases = {i: tuple(zip(*vecs))}
    return quotient_rep(rep, bases)


def functor_E_word(rep: QuiverRep, letters: Sequence[int], dagger: bool = False) -> QuiverRep:
    """Composite functor along a word s_{i_1} ... s_{i_k}.

    The composition is read as written, so the last letter acts first; this
    order is pinned by the worked D_4 construction (and by the fact that
    the last occurrence of each letter in a reduced word for w_0 must kill
    the corresponding injective).
    """
    f = functor_E_dagger if dagger else functor_E
    current = rep
    for i in reversed(tuple(letters)):
        current = f(current, i)
    return current


# ----------------------------------------------------------------------
# Hom, Ext, rigidity


def hom_basis(m: QuiverRep, n: QuiverRep) -> list[tuple[Matrix, ...]]:
    """Basis of the intertwiner space Hom(m, n): per-vertex matrix tuples."""
    if m.quiver != n.quiver:
        raise PrepmodError("Hom between modules over different quivers")
    q, F = m.quiver, m.field
    offsets = {}
    total = 0
    for v in q.vertices:
        offsets[v] = total
        total += n.dim(v) * m.dim(v)
    if total == 0:
        return []
    rows = []
    for a in q.arrows:
        s, t = a.source, a.target
        ma, na = m.map_of(a), n.map_of(a)
        # equation f_t m_a - n_a f_s = 0, entries indexed by (x, y)
        for x in range(n.dim(t)):
            for y in range(m.dim(s)):
                row = [F.zero()] * total
                for k in range(m.dim(t)):
                    row[offsets[t] + x * m.dim(t) + k] = F.add(
                        row[offsets[t] + x * m.dim(t) + k], ma[k][y]
                    )
                for k in range(n.dim(s)):
                    row[offsets[s] + k * m.dim(s) + y] = F.sub(
                        row[offsets[s] + k * m.dim(s) + y], na[x][k]
                    )
                if any(not F.is_zero(x0) for x0 in row):
                    rows.append(tuple(row))
    if rows:
        kernel = nullspace(F, tuple(rows))
    else:
        kernel = [tuple(F.one() if i == j else F.zero() for j in range(total)) for i in range(total)]
    out = []
    for vec in kernel:
        per_vertex = []
        for v in q.vertices:
            block = []
            for x in range(n.dim(v)):
                base = offsets[v] + x * m.dim(v)
                block.append(tuple(vec[base : base + m.dim(v)]))
            per_vertex.append(tuple(block))
        out.append(tuple(per_vertex))
    return out


def hom_dim(m: QuiverRep, n: QuiverRep) -> int:
    """Dimension of the intertwiner space Hom(m, n)."""
    return len(hom_basis(m, n))


def ext1_dim(m: QuiverRep, n: QuiverRep) -> int:
    """dim Ext^1 via hom_dim(m,n) + hom_dim(n,m) - (dim m, dim n).

    Valid for nilpotent representations satisfying the defining relation; a
    negative value signals a relation-violating input and aborts.
    """
    value = hom_dim(m, n) + hom_dim(n, m) - cartan_pairing(m.quiver, m.dims, n.dims)
    if value < 0:
        raise PrepmodError(
            f"negative Ext dimension {value}; inputs violate the defining relation"
        )
    return value


def is_rigid(m: QuiverRep) -> bool:
    return ext1_dim(m, m) == 0


def fingerprint(rep: QuiverRep) -> tuple:
    """Cheap iso-invariants used as a memo key: dimension vector plus socle
    and radical filtration layers.  Cached on the instance."""
    cached = rep.__dict__.get("_fingerprint")
    if cached is None:
        cached = (rep.dims, socle_series(rep), radical_series(rep))
        object.__setattr__(rep, "_fingerprint", cached)
    return cached


def proven_isomorphic(
    m: QuiverRep, n: QuiverRep, rng: Optional[random.Random] = None, attempts: int = 8
) -> Optional[bool]:
    """Las Vegas isomorphism test.

    Returns False only on a certificate (invariant mismatch or empty Hom),
    True when an invertible intertwiner is found, and None when the search
    is inconclusive.  With rational coefficients drawn from [-99, 99] the
    chance of missing an existing isomorphism is below (dim/199) per try.
    """
    if m.dims != n.dims:
        return False
    if m.total_dim == 0:
        return True
    if m.maps == n.maps:
        return True
    if fingerprint(m) != fingerprint(n):
        return False
    basis = hom_basis(m, n)
    if not basis:
        return False
    rng = rng or random.Random(0)
    F = m.field
    nverts = len(m.quiver.vertices)
    if hasattr(F, "p") and F.p ** len(basis) <= 256:
        coeff_space = itertools.product(range(F.p), repeat=len(basis))
    else:
        coeff_space = (
            tuple(F.coerce(rng.randint(-99, 99)) for _ in basis) for _ in range(attempts)
        )
    for coeffs in coeff_space:
        if all(F.is_zero(c) for c in coeffs):
            continue
        ok = True
        for vi in range(nverts):
            dv = m.dims[vi]
            if dv == 0:
                continue
            block = [[F.zero()] * dv for _ in range(dv)]
            for c, h in zip(coeffs, basis):
                if F.is_zero(c):
                    continue
                hb = h[vi]
                for x in range(dv):
                    for y in range(dv):
                        block[x][y] = F.add(block[x][y], F.mul(c, hb[x][y]))
            if not linalg.is_invertible(F, tuple(tuple(r) for r in block)):
                ok = False
                break
        if ok:
            return True
    return None


def is_isomorphic(m: QuiverRep, n: QuiverRep, rng_seed: int = 0, attempts: int = 8) -> bool:
    """Boolean form of proven_isomorphic; inconclusive searches count as False."""
    return proven_isomorphic(m, n, random.Random(rng_seed), attempts) is True


# ----------------------------------------------------------------------
# the algebra basis and injectives


@dataclass(frozen=True)
class BasisPath:
    degree: int
    source: int
    target: int
    arrows: tuple[str, ...]  # in application order; empty for trivial paths


class PreprojectiveAlgebra:
    """Linear basis of the preprojective algebra, with left-multiplication data.

    basis_by_degree[l] is the list of BasisPath of degree l; lmul[l] maps an
    arrow name to {basis_index: {basis_index_at_l+1: coeff}}.
    """

    def __init__(self, quiver: DoubleQuiver, max_degree: int = 40, max_dim: int = 20000):
        self.quiver = quiver
        self.basis_by_degree: list[list[BasisPath]] = []
        self.lmul: list[dict[str, dict[int, dict[int, Fraction]]]] = []
        self._build(max_degree, max_dim)

    # -- construction ---------------------------------------------------

    def _relation_terms(self, v: int) -> list[tuple[int, Arrow, Arrow]]:
        """The relation at v as (sign, second_arrow, first_arrow) composites."""
        terms = []
        for i, j in self.quiver.edges:
            if i == v:
                fwd = Arrow(f"{i}->{j}", i, j)
                back = Arrow(f"{j}->{i}", j, i)
                terms.append((1, back, fwd))
            elif j == v:
                fwd = Arrow(f"{i}->{j}", i, j)
                back = Arrow(f"{j}->{i}", j, i)
                terms.append((-1, fwd, back))
        return terms

    def _build(self, max_degree: int, max_dim: int) -> None:
        q = self.quiver
        degree0 = [BasisPath(0, v, v, ()) for v in q.vertices]
        self.basis_by_degree.append(degree0)
        total = len(degree0)
        arrows = q.arrows
        while True:
            degree = len(self.basis_by_degree) - 1
            if degree >= max_degree:
                raise ResourceCapError(f"no vanishing by degree {max_degree}")
            current = self.basis_by_degree[degree]
            blocks: dict[tuple[int, int], list[tuple[str, int]]] = {}
            for a in arrows:
                for bi, b in enumerate(current):
                    if b.target == a.source:
                        blocks.setdefault((b.source, a.target), []).append((a.name, bi))
            relation_rows: dict[tuple[int, int], list[dict[int, Fraction]]] = {}
            if degree >= 1:
                prev = self.basis_by_degree[degree - 1]
                for qi, qp in enumerate(prev):
                    v = qp.target
                    key = (qp.source, v)
                    cand = blocks.get(key)
                    if cand is None:
                        continue
                    pos = {c: idx for idx, c in enumerate(cand)}
                    row: dict[int, Fraction] = {}
                    for sign, second, first in self._relation_terms(v):
                        mid = self.lmul[degree - 1].get(first.name, {}).get(qi, {})
                        for bi, coeff in mid.items():
                            col = pos.get((second.name, bi))
                            if col is None:
                                continue
                            val = row.get(col, Fraction(0)) + sign * coeff
                            if val:
                                row[col] = val
                            else:
                                row.pop(col, None)
                    if row:
                        relation_rows.setdefault(key, []).append(row)
            new_basis: list[BasisPath] = []
            lmul_level: dict[str, dict[int, dict[int, Fraction]]] = {}
            for key in sorted(blocks):
                cand = blocks[key]
                ncand = len(cand)
                rows = relation_rows.get(key, [])
                dense = tuple(
                    tuple(row.get(c, Fraction(0)) for c in range(ncand)) for row in rows
                )
                if dense:
                    red, pivots = rref(QQ, dense)
                else:
                    red, pivots = (), []
                pivot_set = set(pivots)
                free_cols = [c for c in range(ncand) if c not in pivot_set]
                col_to_new: dict[int, int] = {}
                for c in free_cols:
                    aname, bi = cand[c]
                    base = self.basis_by_degree[degree][bi]
                    col_to_new[c] = len(new_basis)
                    # the candidate is "aname after base": it extends the
                    # path at its target end
                    new_basis.append(
                        BasisPath(degree + 1, base.source, key[1], base.arrows + (aname,))
                    )
                pivot_expr: dict[int, dict[int, Fraction]] = {}
                for r, pc in enumerate(pivots):
                    expr = {}
                    for c in free_cols:
                        if red[r][c]:
                            expr[col_to_new[c]] = -red[r][c]
                    pivot_expr[pc] = expr
                for c, (aname, bi) in enumerate(cand):
                    if c in pivot_set:
                        vec = pivot_expr[c]
                    else:
                        vec = {col_to_new[c]: Fraction(1)}
                    if vec:
                        lmul_level.setdefault(aname, {}).setdefault(bi, {}).update(vec)
                    else:
                        lmul_level.setdefault(aname, {}).setdefault(bi, {})
            self.lmul.append(lmul_level)
            if not new_basis:
                break
            self.basis_by_degree.append(new_basis)
            total += len(new_basis)
            if total > max_dim:
                raise ResourceCapError(f"algebra dimension exceeded {max_dim}")

    # -- queries ----------------------------------------------------------

    @property
    def dimension(self) -> int:
        return sum(len(b) for b in self.basis_by_degree)

    @property
    def loewy_length(self) -> int:
        return len(self.basis_by_degree)

    def basis_paths(self, source: Optional[int] = None, target: Optional[int] = None) -> list[tuple[int, int]]:
        """(degree, index) handles of basis paths, filtered by endpoints."""
        out = []
        for deg, layer in enumerate(self.basis_by_degree):
            for i, b in enumerate(layer):
                if source is not None and b.source != source:
                    continue
                if target is not None and b.target != target:
                    continue
                out.append((deg, i))
        return out

    def reduce_path(self, arrow_names: Sequence[str]) -> dict[tuple[int, int], Fraction]:
        """Class of an explicit path (arrows in application order) over the basis."""
        if not arrow_names:
            raise PrepmodError("reduce_path needs at least one arrow")
        first = arrow_names[0]
        arrow = next((a for a in self.quiver.arrows if a.name == first), None)
        if arrow is None:
            raise PrepmodError(f"unknown arrow {first!r}")
        start = self.basis_by_degree[0]
        vec: dict[int, Fraction] = {
            i: Fraction(1) for i, b in enumerate(start) if b.source == arrow.source
        }
        deg = 0
        for aname in arrow_names:
            if deg >= len(self.lmul):
                return {}
            table = self.lmul[deg].get(aname, {})
            nxt: dict[int, Fraction] = {}
            for bi, coeff in vec.items():
                for ni, c in table.get(bi, {}).items():
                    val = nxt.get(ni, Fraction(0)) + coeff * c
                    if val:
                        nxt[ni] = val
                    else:
                        nxt.pop(ni, None)
            vec = nxt
            deg += 1
            if not vec:
                return {}
        return {(deg, i): c for i, c in vec.items()}

    def injective(self, i: int) -> QuiverRep:
        """Q_i as the dual of the right projective e_i Lambda.

        The space at vertex j is dual to the span of path classes j -> i;
        an arrow acts by dualized right multiplication.
        """
        q = self.quiver
        if i not in q.vertices:
            raise PrepmodError(f"vertex {i} not in quiver")
        vertex_basis: dict[int, list[tuple[int, int]]] = {
            v: self.basis_paths(source=v, target=i) for v in q.vertices
        }
        index: dict[int, dict[tuple[int, int], int]] = {
            v: {h: k for k, h in enumerate(vertex_basis[v])} for v in q.vertices
        }
        dims = tuple(len(vertex_basis[v]) for v in q.vertices)
        maps = []
        for a in q.arrows:
            src, tgt = a.source, a.target
            nrows = len(vertex_basis[tgt])
            ncols = len(vertex_basis[src])
            m = [[Fraction(0)] * ncols for _ in range(nrows)]
            for ri, (deg, bi) in enumerate(vertex_basis[tgt]):
                path = self.basis_by_degree[deg][bi]
                composed = self.reduce_path((a.name,) + path.arrows)
                for handle, coeff in composed.items():
                    ci = index[src].get(handle)
                    if ci is not None:
                        m[ri][ci] = coeff
            # rows indexed by target-side paths p, columns by source-side b:
            # entry = coeff of b in class(p composed after a), the dualized
            # right-multiplication action
            maps.append(tuple(tuple(row) for row in m))
        rep = QuiverRep(q, QQ, dims, tuple(maps))
        return rep


@lru_cache(maxsize=None)
def build_algebra_basis(kind: str) -> PreprojectiveAlgebra:
    """Build (and cache) the algebra for a type string like "D4"."""
    return PreprojectiveAlgebra(dynkin_quiver(kind))


def injective_rep(kind: str, i: int) -> QuiverRep:
    return build_algebra_basis(kind).injective(i)


# ----------------------------------------------------------------------
# complete rigid modules from reduced words


D4_RIGID_WORD = (1, 3, 1, 2, 3, 1, 4, 3, 1, 2, 3, 4)


def build_complete_rigid(kind: str, K: Sequence[int], letters: Sequence[int]) -> dict:
    """Summands of the complete rigid module attached to a reduced word.

    letters must be a reduced word for the longest element whose first
    l(w_0^K) letters are a reduced word for the parabolic longest element;
    reducedness is trusted, not checked.  M_p is the socle-side functor
    image of the injective at letter p along the length-p prefix; zero
    summands are dropped and the surviving count must equal dim N_K.
    """
    algebra = build_algebra_basis(kind)
    quiver = algebra.quiver
    letters = tuple(letters)
    K = tuple(sorted(set(K)))
    for v in K:
        if v not in quiver.vertices:
            raise PrepmodError(f"K contains {v}, not a vertex")
    J = tuple(v for v in quiver.vertices if v not in K)
    r = len(letters)
    r_total = positive_root_count(quiver, quiver.vertices)
    if r != r_total:
        raise PrepmodError(
            f"word length {r} differs from the number of positive roots {r_total}"
        )
    r_K = positive_root_count(quiver, K)
    dim_NK = r - r_K
    modules = {}
    for p in range(1, r + 1):
        modules[p] = functor_E_word(algebra.injective(letters[p - 1]), letters[:p], dagger=True)
    q_k = {}
    for k in K:
        positions = [p for p in range(1, r_K + 1) if letters[p - 1] == k]
        if not positions:
            raise PrepmodError(f"letter {k} missing from the w_0^K prefix")
        q_k[k] = max(positions)
    summands = []
    labels = []
    zero_indices = []
    for p in range(r_K + 1, r + 1):
        if modules[p].is_zero:
            zero_indices.append(p)
        else:
            summands.append(modules[p])
            labels.append(f"M{p}")
    for k in K:
        summands.append(modules[q_k[k]])
        labels.append(f"M{q_k[k]}")
    for j in J:
        summands.append(algebra.injective(j))
        labels.append(f"Q{j}")
    for a in range(len(summands)):
        for b in range(a + 1, len(summands)):
            if is_isomorphic(summands[a], summands[b]):
                raise PrepmodError(
                    f"summands {labels[a]} and {labels[b]} are isomorphic; "
                    "the construction violates the summand-count bound"
                )
    if len(summands) != dim_NK:
        raise PrepmodError(
            f"got {len(summands)} summands, expected dim N_K = {dim_NK}"
        )
    return {
        "summands": summands,
        "labels": labels,
        "modules_by_position": modules,
        "q_k": q_k,
        "zero_positions": zero_indices,
        "dim_NK": dim_NK,
        "J": J,
        "K": K,
    }


def exchange_matrix_from_sequences(
    summands: Sequence[QuiverRep],
    n_frozen: int,
    sequences: Sequence[Mapping[str, Sequence[int]]],
    coeff_vertices: Sequence[int] = (),
) -> dict:
    """Assemble the exchange matrix of a complete rigid module from its
    exchange-sequence data.

    sequences[k-1] holds multiplicity vectors over the summand list:
    "X" is the middle term of the sequence starting at the k-th summand
    (0 -> T_k -> X_k -> T_k* -> 0) and "Y" the middle term of the sequence
    ending at it (0 -> T_k* -> Y_k -> T_k -> 0).  Summand rows receive
    +[Y_k : T_i] - [X_k : T_i]; each appended coefficient row (one per
    vertex j in coeff_vertices) receives
    dim Hom(S_j, X_k) - dim Hom(S_j, Y_k); both sign conventions are pinned
    by the d4-example152 verification case.
    """
    d = len(summands)
    m = d - n_frozen
    if len(sequences) != m:
        raise PrepmodError(f"expected {m} exchange sequences, got {len(sequences)}")
    columns = []
    for k, seq in enumerate(sequences, start=1):
        xvec = tuple(seq["X"])
        yvec = tuple(seq["Y"])
        if len(xvec) != d or len(yvec) != d:
            raise PrepmodError("multiplicity vectors must cover every summand")
        overlap = [i for i in range(d) if xvec[i] and yvec[i]]
        if overlap:
            raise PrepmodError(
                f"direction {k}: X and Y share summand indices {overlap}"
            )
        columns.append(tuple(yvec[i] - xvec[i] for i in range(d)))
    rows = tuple(tuple(columns[j][i] for j in range(m)) for i in range(d))
    matrix = ExchangeMatrix(rows, n_frozen)
    extended_rows = {}
    if coeff_vertices:
        quiver = summands[0].quiver
        hom_to_simple = {
            j: [hom_dim(simple_rep(quiver, j, summands[0].field), t) for t in summands]
            for j in coeff_vertices
        }
        for j in coeff_vertices:
            row = []
            for seq in sequences:
                hx = sum(mult * hom_to_simple[j][i] for i, mult in enumerate(seq["X"]))
                hy = sum(mult * hom_to_simple[j][i] for i, mult in enumerate(seq["Y"]))
                row.append(hx - hy)
            extended_rows[j] = tuple(row)
        ext_matrix = ExchangeMatrix(
            rows + tuple(extended_rows[j] for j in coeff_vertices),
            n_frozen + len(coeff_vertices),
        )
    else:
        ext_matrix = matrix
    return {"matrix": matrix, "extended_rows": extended_rows, "extended_matrix": ext_matrix}


# ----------------------------------------------------------------------
# random relation-satisfying modules (for property suites)


def span_sub_rep(rep: QuiverRep, vectors: Mapping[int, Sequence[Sequence]]) -> QuiverRep:
    """Submodule generated by the given per-vertex vectors: close the span
    under all arrow maps, then restrict."""
    q, F = rep.quiver, rep.field
    spans: dict[int, list] = {v: [] for v in q.vertices}

    def add_vector(v, vec):
        current = spans[v]
        if not current:
            if any(not F.is_zero(x) for x in vec):
                current.append(tuple(vec))
                return True
            return False
        basis = tuple(zip(*current))
        if linalg.in_span(F, basis, tuple(vec)):
            return False
        current.append(tuple(vec))
        return True

    frontier = []
    for v, vecs in vectors.items():
        for vec in vecs:
            coerced = tuple(F.coerce(x) for x in vec)
            if add_vector(v, coerced):
                frontier.append((v, coerced))
    while frontier:
        v, vec = frontier.pop()
        for a in q.arrows_from(v):
            image = linalg.mat_vec(F, rep.map_of(a), vec)
            if add_vector(a.target, image):
                frontier.append((a.target, image))
    bases = {
        v: (tuple(zip(*spans[v])) if spans[v] else zero_matrix(F, rep.dim(v), 0))
        for v in q.vertices
    }
    return sub_rep(rep, bases)


def random_module(kind: str, rng: random.Random, max_total_dim: int = 8) -> QuiverRep:
    """A random relation-satisfying module: a random submodule of a small
    injective sum, shrunk with random socle-removal steps if too large."""
    algebra = build_algebra_basis(kind)
    quiver = algebra.quiver
    for _ in range(64):
        count = rng.randint(1, 2)
        ambient = direct_sum(
            *[algebra.injective(rng.choice(quiver.vertices)) for _ in range(count)]
        )
        vectors: dict[int, list] = {}
        for _ in range(rng.randint(1, 3)):
            v = rng.choice(quiver.vertices)
            dv = ambient.dim(v)
            if dv == 0:
                continue
            vectors.setdefault(v, []).append(
                [rng.randint(-2, 2) for _ in range(dv)]
            )
        if not vectors:
            continue
        sub = span_sub_rep(ambient, vectors)
        guard = 16
        while sub.total_dim > max_total_dim and guard:
            sub = functor_E_dagger(sub, rng.choice(quiver.vertices))
            guard -= 1
        if 0 < sub.total_dim <= max_total_dim:
            return sub
    raise PrepmodError("failed to sample a random module")
