"""Seeds, matrix/seed mutation, and mutation-class exploration.

A seed is a d-tuple of cluster variables (Laurent polynomials in the d
initial variables) together with a d x (d-n) exchange matrix whose
principal part (the first d-n rows) is skew-symmetric.  The last n cluster
entries are frozen coefficients and belong to every seed of the class.
Direction indices are 1-based throughout, matching the usual convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .laurent import InexactDivisionError, LaurentPoly, product_of


class ClusterError(Exception):
    pass


class LaurentPhenomenonError(ClusterError):
    """An exchange division failed; carries the offending seed and direction."""

    def __init__(self, seed: "Seed", direction: int, detail: str):
        self.seed = seed
        self.direction = direction
        super().__init__(
            f"inexact exchange division in direction {direction}: {detail}\n"
            f"seed cluster: {[str(p) for p in seed.cluster]}\n"
            f"matrix rows: {seed.matrix.rows}"
        )


@dataclass(frozen=True)
class ExchangeMatrix:
    """A d x (d-n) integer matrix with skew-symmetric principal part."""

    rows: tuple[tuple[int, ...], ...]
    n_frozen: int

    def __post_init__(self):
        d = len(self.rows)
        m = d - self.n_frozen
        if self.n_frozen < 0 or m < 0:
            raise ClusterError(f"need d >= n >= 0, got d={d}, n={self.n_frozen}")
        for row in self.rows:
            if len(row) != m:
                raise ClusterError(f"expected {m} columns, found row of length {len(row)}")
        for i in range(m):
            if self.rows[i][i] != 0:
                raise ClusterError(f"principal diagonal entry ({i + 1},{i + 1}) is nonzero")
            for j in range(i + 1, m):
                if self.rows[i][j] != -self.rows[j][i]:
                    raise ClusterError(
                        f"principal part not skew-symmetric at ({i + 1},{j + 1})"
                    )

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def n_mutable(self) -> int:
        return self.d - self.n_frozen

    def column(self, k: int) -> tuple[int, ...]:
        """Column of the matrix for 1-based direction k."""
        return tuple(row[k - 1] for row in self.rows)

    def mutate(self, k: int) -> "ExchangeMatrix":
        return mutate_matrix(self, k)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def mutate_matrix(b: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation in direction k (1-based).

    b'_ij = -b_ij when i = k or j = k, and otherwise
    b'_ij = b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2.
    """
    if not 1 <= k <= b.n_mutable:
        raise ClusterError(f"direction {k} out of range [1, {b.n_mutable}]")
    kk = k - 1
    new_rows = []
    for i, row in enumerate(b.rows):
        new_row = []
        for j, bij in enumerate(row):
            if i == kk or j == kk:
                new_row.append(-bij)
            else:
                bik = row[kk]
                bkj = b.rows[kk][j]
                new_row.append(bij + (abs(bik) * bkj + bik * abs(bkj)) // 2)
        new_rows.append(tuple(new_row))
    return ExchangeMatrix(tuple(new_rows), b.n_frozen)


@dataclass(frozen=True)
class Seed:
    """An exchange matrix plus the d-tuple of cluster variables."""

    matrix: ExchangeMatrix
    cluster: tuple[LaurentPoly, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.cluster) != self.matrix.d:
            raise ClusterError(
                f"cluster has {len(self.cluster)} entries, matrix expects {self.matrix.d}"
            )
        if len(self.labels) != len(self.cluster):
            raise ClusterError("labels and cluster must have equal length")
        names = self.cluster[0].varnames if self.cluster else ()
        for p in self.cluster:
            if p.varnames != names:
                raise ClusterError("cluster entries live over different variable lists")

    @property
    def varnames(self) -> tuple[str, ...]:
        return self.cluster[0].varnames if self.cluster else ()

    @property
    def mutable(self) -> tuple[LaurentPoly, ...]:
        return self.cluster[: self.matrix.n_mutable]

    @property
    def frozen(self) -> tuple[LaurentPoly, ...]:
        return self.cluster[self.matrix.n_mutable :]

    def key(self) -> tuple:
        """Canonical key: multiset of mutable variables plus the frozen tuple.

        The matrix is deliberately not part of the key; clusters are
        unordered and permuted seeds with the same variables are identified.
        """
        mut = tuple(sorted((p.sort_key() for p in self.mutable)))
        return (mut, tuple(p.sort_key() for p in self.frozen))

    def exchange_binomial(self, k: int) -> LaurentPoly:
        """The two-term numerator prod_{b_ik>0} y_i^{b_ik} + prod_{b_ik<0} y_i^{-b_ik}."""
        col = self.matrix.column(k)
        pos = product_of(
            (self.cluster[i] ** b for i, b in enumerate(col) if b > 0), self.varnames
        )
        neg = product_of(
            (self.cluster[i] ** (-b) for i, b in enumerate(col) if b < 0), self.varnames
        )
        return pos + neg

    def to_json(self) -> dict:
        return {
            "d": self.matrix.d,
            "n": self.matrix.n_frozen,
            "matrix": self.matrix.to_lists(),
            "cluster": [p.to_json() for p in self.cluster],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Seed":
        matrix = ExchangeMatrix(tuple(tuple(r) for r in data["matrix"]), int(data["n"]))
        cluster = tuple(LaurentPoly.from_json(p) for p in data["cluster"])
        labels = tuple(data.get("labels") or [f"y{i + 1}" for i in range(matrix.d)])
        return cls(matrix, cluster, labels)


def _toggle_star(label: str) -> str:
    return label[:-1] if label.endswith("*") else label + "*"


def mutate_seed(s: Seed, k: int) -> Seed:
    """Seed mutation in direction k: replace y_k by the exchange binomial / y_k."""
    if not 1 <= k <= s.matrix.n_mutable:
        raise ClusterError(f"direction {k} out of range [1, {s.matrix.n_mutable}]")
    binomial = s.exchange_binomial(k)
    try:
        new_var = binomial.div_exact(s.cluster[k - 1])
    except InexactDivisionError as exc:
        raise LaurentPhenomenonError(s, k, str(exc)) from exc
    cluster = list(s.cluster)
    cluster[k - 1] = new_var
    labels = list(s.labels)
    labels[k - 1] = _toggle_star(labels[k - 1])
    return Seed(s.matrix.mutate(k), tuple(cluster), tuple(labels))


@dataclass
class MutationClass:
    """The seeds reachable from an initial seed, up to cluster permutation."""

    initial_key: tuple
    seeds: dict  # canonical key -> Seed (first representative found)
    graph: dict  # canonical key -> {direction k: canonical key}
    order: list  # canonical keys in BFS discovery order
    exhausted: bool

    @property
    def cluster_count(self) -> int:
        return len(self.seeds)

    def variables(self) -> set[LaurentPoly]:
        """The distinct mutable cluster variables over the whole class."""
        out: set[LaurentPoly] = set()
        for seed in self.seeds.values():
            out.update(seed.mutable)
        return out

    def edges(self) -> list[tuple[tuple, int, tuple]]:
        out = []
        for src in self.order:
            for k, dst in sorted(self.graph[src].items()):
                out.append((src, k, dst))
        return out


def _assert_matrix_consistency(stored: Seed, candidate: Seed) -> None:
    """Check the candidate's matrix agrees with the stored seed's up to the
    unique cluster permutation (only when all mutable entries are distinct)."""
    if len(set(candidate.mutable)) != len(candidate.mutable):
        return
    perm = []
    stored_mut = list(stored.mutable)
    for p in candidate.mutable:
        perm.append(stored_mut.index(p))
    m = candidate.matrix.n_mutable
    for i in range(candidate.matrix.d):
        si = perm[i] if i < m else i
        for j in range(m):
            if candidate.matrix.rows[i][j] != stored.matrix.rows[si][perm[j]]:
                raise ClusterError(
                    "mutation produced a seed whose matrix disagrees with the stored "
                    "representative under the cluster permutation"
                )


def explore(
    s: Seed,
    max_seeds: int = 100000,
    max_depth: int = 64,
    check_matrices: bool = True,
) -> MutationClass:
    """Breadth-first closure of a seed under mutation, with canonical
    de-duplication.  Returns a partial class flagged exhausted=False when a
    limit is hit."""
    if max_seeds <= 0 or max_depth <= 0:
        raise ClusterError("limits must be positive")
    key0 = s.key()
    seeds = {key0: s}
    graph: dict = {key0: {}}
    order = [key0]
    frontier = [(s, key0)]
    exhausted = True
    depth = 0
    while frontier:
        if depth >= max_depth:
            exhausted = False
            break
        next_frontier = []
        for seed, skey in frontier:
            for k in range(1, seed.matrix.n_mutable + 1):
                neighbor = mutate_seed(seed, k)
                nkey = neighbor.key()
                if nkey in seeds:
                    if check_matrices:
                        _assert_matrix_consistency(seeds[nkey], neighbor)
                else:
                    if len(seeds) >= max_seeds:
                        exhausted = False
                        continue
                    seeds[nkey] = neighbor
                    graph[nkey] = {}
                    order.append(nkey)
                    next_frontier.append((neighbor, nkey))
                graph[skey][k] = nkey
        frontier = next_frontier
        depth += 1
        if not exhausted:
            break
    return MutationClass(key0, seeds, graph, order, exhausted)


def is_finite_type(s: Seed, max_seeds: int = 100000, max_depth: int = 64) -> dict:
    """Exhaustion-based finite-type detection; inconclusive results carry
    finite=False, exhausted=False."""
    mc = explore(s, max_seeds=max_seeds, max_depth=max_depth)
    return {
        "finite": mc.exhausted,
        "exhausted": mc.exhausted,
        "cluster_variable_count": len(mc.variables()),
        "cluster_count": mc.cluster_count,
    }


def cluster_monomials(mc: MutationClass, total_degree_bound: int) -> list[dict]:
    """All monomials in the variables of a single cluster, up to the degree
    bound, de-duplicated as Laurent polynomials across clusters."""
    if not mc.exhausted:
        raise ClusterError("cluster_monomials requires an exhausted mutation class")
    if total_degree_bound < 0:
        raise ClusterError("degree bound must be nonnegative")
    found: dict[LaurentPoly, dict] = {}
    for idx, key in enumerate(mc.order):
        seed = mc.seeds[key]
        d = len(seed.cluster)
        for total in range(total_degree_bound + 1):
            for exps in _compositions(total, d):
                poly = product_of(
                    (seed.cluster[i] ** e for i, e in enumerate(exps) if e),
                    seed.varnames,
                )
                rec = found.get(poly)
                if rec is None:
                    found[poly] = {
                        "monomial": poly,
                        "degree": total,
                        "clusters": [idx],
                    }
                elif idx not in rec["clusters"]:
                    rec["clusters"].append(idx)
    return sorted(found.values(), key=lambda r: (r["degree"], r["monomial"].sort_key()))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ----------------------------------------------------------------------
# built-in seeds

GRASSMANNIAN_2_5_MATRIX = (
    (0, -1),
    (1, 0),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
)

GRASSMANNIAN_2_5_LABELS = ("[1,3]", "[1,4]", "[1,2]", "[2,3]", "[3,4]", "[4,5]", "[1,5]")

# Rows are labelled (M7, M8, M4, M5, M6, Q4); columns by the mutable
# directions (M7, M8).
D4_FLAG_MATRIX = (
    (0, 0),
    (0, 0),
    (0, -1),
    (-1, 1),
    (0, -1),
    (1, 0),
)

D4_FLAG_LABELS = ("phi_M7", "phi_M8", "phi_M4", "phi_M5", "phi_M6", "phi_Q4")


def _initial_seed(matrix_rows, n_frozen: int, varnames, labels) -> Seed:
    matrix = ExchangeMatrix(tuple(tuple(r) for r in matrix_rows), n_frozen)
    cluster = tuple(LaurentPoly.variable(v, varnames) for v in varnames)
    return Seed(matrix, cluster, tuple(labels))


def quadric_seed(n: int) -> Seed:
    """Initial seed of the isotropic-cone coordinate ring for C^{2n}, n >= 4.

    Mutable positions hold y_2, ..., y_{n-1}; coefficients are
    y_1, y_n, y_{n+1}, y_{2n} and the quadratic functions p_1, ..., p_{n-3}.
    The matrix is reconstructed from the three exchange-relation shapes
    and validated against them, never asserted as a golden matrix; a
    column-sign ambiguity in the coefficient rows is harmless because the
    principal part is zero and the exchange binomial is sign-symmetric.
    """
    if n < 4:
        raise ClusterError("quadric seed requires n >= 4")
    mutable = [f"y{k}" for k in range(2, n)]
    coeffs = [f"y{1}", f"y{n}", f"y{n + 1}", f"y{2 * n}"] + [
        f"p{s}" for s in range(1, n - 2)
    ]
    varnames = tuple(mutable + coeffs)
    m = len(mutable)
    d = m + len(coeffs)
    coeff_index = {name: m + i for i, name in enumerate(coeffs)}
    cols = []
    for k in range(2, n):
        col = [0] * d
        if k == 2:
            col[coeff_index["p1"]] = 1
            col[coeff_index["y1"]] = -1
            col[coeff_index[f"y{2 * n}"]] = -1
        elif k == n - 1:
            col[coeff_index[f"p{n - 3}"]] = 1
            col[coeff_index[f"y{n}"]] = -1
            col[coeff_index[f"y{n + 1}"]] = -1
        else:
            col[coeff_index[f"p{k - 1}"]] = 1
            col[coeff_index[f"p{k - 2}"]] = -1
        cols.append(col)
    rows = tuple(tuple(cols[j][i] for j in range(m)) for i in range(d))
    return _initial_seed(rows, len(coeffs), varnames, varnames)


def quadric_relation_shape(n: int, k: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The two coefficient monomials of the exchange for the pair (y_k, y_{2n+1-k}),
    as sorted tuples of coefficient labels."""
    if k == 2:
        return (("p1",), ("y1", f"y{2 * n}"))
    if k == n - 1:
        return ((f"p{n - 3}",), (f"y{n}", f"y{n + 1}"))
    return ((f"p{k - 1}",), (f"p{k - 2}",))


def grassmannian_2_5_seed() -> Seed:
    varnames = tuple(f"y{i}" for i in range(1, 8))
    return _initial_seed(GRASSMANNIAN_2_5_MATRIX, 5, varnames, GRASSMANNIAN_2_5_LABELS)


def d4_flag_seed(extended: bool = False) -> Seed:
    rows = D4_FLAG_MATRIX + ((1, 0),) if extended else D4_FLAG_MATRIX
    labels = D4_FLAG_LABELS + ("Delta",) if extended else D4_FLAG_LABELS
    varnames = tuple(f"y{i}" for i in range(1, len(rows) + 1))
    n_frozen = len(rows) - 2
    return _initial_seed(rows, n_frozen, varnames, labels)


def builtin_seed(name: str, n: Optional[int] = None) -> Seed:
    """Built-in seeds: quadric(n), grassmannian_2_5, d4_flag, d4_flag_extended."""
    if name == "quadric":
        if n is None:
            raise ClusterError("quadric seed requires the parameter n")
        return quadric_seed(n)
    if name == "grassmannian_2_5":
        return grassmannian_2_5_seed()
    if name == "d4_flag":
        return d4_flag_seed(extended=False)
    if name == "d4_flag_extended":
        return d4_flag_seed(extended=True)
    raise ClusterError(f"unknown builtin seed {name!r}")


def mutation_class_to_dot(mc: MutationClass) -> str:
    """DOT export; nodes are canonical seed keys in discovery order, edges
    are labelled by the mutation direction (each unordered edge emitted once)."""
    index = {key: i for i, key in enumerate(mc.order)}
    lines = ["graph mutation_class {"]
    for key in mc.order:
        seed = mc.seeds[key]
        label = ", ".join(seed.labels[: seed.matrix.n_mutable])
        lines.append(f'  s{index[key]} [label="{label}"];')
    seen = set()
    for src, k, dst in mc.edges():
        a, b = index[src], index[dst]
        edge_id = (min(a, b), max(a, b), k)
        if edge_id in seen:
            continue
        seen.add(edge_id)
        lines.append(f'  s{a} -- s{b} [label="{k}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
