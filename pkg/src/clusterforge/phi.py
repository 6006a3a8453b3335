"""Flag functions phi_M: composition-series counting and polynomial assembly.

phi_M evaluated on x_{i_1}(t_1)...x_{i_k}(t_k) is the sum over multiplicity
vectors a of chi_{i^a,M} t^a / a!, where chi counts ascending chains of
submodules whose k-th factor is the simple at the k-th expanded letter and
the first letter consumes the socle end.

chi is computed by a bottom-up recursion (enumerate lines in the demanded
socle part, quotient, recurse).  When every step meets a socle part of
dimension <= 1 the chain set is finite and field-independent and the exact
backend returns its cardinality; otherwise the chains are counted over
increasing prime fields and the count polynomial is evaluated at q = 1,
accepting the fit once it is stable across two additional primes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Optional, Sequence

from .fields import PrimeField, RationalField
from .laurent import LaurentPoly
from .linalg import Matrix
from .prepmod import (
    QuiverRep,
    direct_sum,
    ext1_dim,
    fingerprint,
    proven_isomorphic,
    quotient_rep,
    socle_basis_at,
)


class PhiError(Exception):
    pass


class ChiUndeterminedError(PhiError):
    """Interpolation never stabilized within the prime cap."""


class _SocleBranching(Exception):
    """Internal: the exact backend hit a >= 2-dimensional socle part."""


class _BadReduction(Exception):
    """Internal: reduction mod p changed the module's filtration invariants."""


PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

EXACT = "exact-enumeration"
INTERPOLATED = "interpolated"


@dataclass(frozen=True)
class ChiResult:
    value: int
    backend: str
    primes: tuple[int, ...] = ()


@dataclass
class ChiTable:
    """Computed Euler characteristics keyed by expanded type words, with
    per-entry backend provenance."""

    entries: dict = field(default_factory=dict)

    def record(self, word: tuple[int, ...], result: ChiResult) -> None:
        self.entries[word] = result

    def to_json(self) -> dict:
        return {
            ",".join(map(str, word)): {
                "chi": r.value,
                "backend": r.backend,
                "primes_used": list(r.primes),
            }
            for word, r in sorted(self.entries.items())
        }


def _default_memo_cap() -> int:
    raw = os.environ.get("CLUSTERFORGE_MAX_MEM")
    if not raw:
        return 1 << 20
    try:
        return max(1024, int(raw) // 512)
    except ValueError:
        return 1 << 20


class FlagCounter:
    """Shared memo tables for the counting recursions.

    Quotient modules are memoized first by exact matrix identity, then by
    the cheap iso fingerprint backed by a Las Vegas isomorphism check; if
    the check is inconclusive the branch is recomputed without memoization.
    The entry cap (from CLUSTERFORGE_MAX_MEM, 512 bytes per entry assumed)
    only disables insertion, never correctness.
    """

    def __init__(self, max_entries: Optional[int] = None):
        self.exact: dict = {}
        self.by_fingerprint: dict = {}
        self.max_entries = _default_memo_cap() if max_entries is None else max_entries
        self.entry_count = 0

    def _room(self) -> bool:
        return self.entry_count < self.max_entries

    def lookup(self, rep: QuiverRep, word: tuple[int, ...]):
        key = (rep.quiver.kind, rep.field.name, rep.dims, rep.maps, word)
        hit = self.exact.get(key)
        if hit is not None:
            return hit
        if rep.total_dim >= 4:
            fp = (rep.quiver.kind, rep.field.name, fingerprint(rep), word)
            for stored_rep, count in self.by_fingerprint.get(fp, ()):
                if proven_isomorphic(rep, stored_rep) is True:
                    return count
        return None

    def store(self, rep: QuiverRep, word: tuple[int, ...], count: int) -> None:
        if not self._room():
            return
        key = (rep.quiver.kind, rep.field.name, rep.dims, rep.maps, word)
        self.exact[key] = count
        self.entry_count += 1
        if rep.total_dim >= 4:
            fp = (rep.quiver.kind, rep.field.name, fingerprint(rep), word)
            self.by_fingerprint.setdefault(fp, []).append((rep, count))


_SHARED_COUNTER = FlagCounter()


def _word_matches_dims(rep: QuiverRep, word: Sequence[int]) -> bool:
    counts = {v: 0 for v in rep.quiver.vertices}
    for letter in word:
        if letter not in counts:
            return False
        counts[letter] += 1
    return all(counts[v] == rep.dim(v) for v in rep.quiver.vertices)


def _line_matrix(rep: QuiverRep, vec) -> Matrix:
    return tuple((x,) for x in vec)


def _quotient_by_line(rep: QuiverRep, v: int, vec) -> QuiverRep:
    return quotient_rep(rep, {v: _line_matrix(rep, vec)})


def _lines_of_subspace(field: PrimeField, basis_vectors: list) -> Iterable[tuple]:
    """Canonical representatives of the lines of a GF(p)-span: coefficient
    tuples with first nonzero entry 1, mapped through the basis."""
    k = len(basis_vectors)
    p = field.p
    dim = len(basis_vectors[0])

    def combos(position):
        for tail in _tuples(p, k - position - 1):
            yield (0,) * position + (1,) + tail

    for position in range(k):
        for coeffs in combos(position):
            vec = [0] * dim
            for c, b in zip(coeffs, basis_vectors):
                if c:
                    for idx in range(dim):
                        vec[idx] = (vec[idx] + c * b[idx]) % p
            yield tuple(vec)


def _tuples(p: int, length: int):
    if length == 0:
        yield ()
        return
    for head in range(p):
        for tail in _tuples(p, length - 1):
            yield (head,) + tail


def count_flags(rep: QuiverRep, word: Sequence[int], counter: Optional[FlagCounter] = None,
                strict_unique: bool = False) -> int:
    """Number of composition series of the given type.

    Over a prime field this is the chain count over that field.  Rational
    modules always run in the unique-chain mode (a >= 2-dimensional
    demanded socle part has no finite line count there), which is also the
    exact chi backend; the branch raises _SocleBranching internally.
    """
    counter = counter or _SHARED_COUNTER
    word = tuple(word)
    if isinstance(rep.field, RationalField):
        strict_unique = True
    if not _word_matches_dims(rep, word):
        return 0
    return _count(rep, word, counter, strict_unique)


def _count(rep: QuiverRep, word: tuple[int, ...], counter: FlagCounter, strict: bool) -> int:
    if not word:
        return 1 if rep.is_zero else 0
    hit = counter.lookup(rep, word)
    if hit is not None:
        return hit
    v = word[0]
    soc = socle_basis_at(rep, v)
    if not soc:
        result = 0
    elif strict:
        if len(soc) >= 2:
            raise _SocleBranching()
        result = _count(_quotient_by_line(rep, v, soc[0]), word[1:], counter, strict)
    else:
        result = 0
        for vec in _lines_of_subspace(rep.field, soc):
            result += _count(_quotient_by_line(rep, v, vec), word[1:], counter, strict)
    counter.store(rep, word, result)
    return result


def count_flags_mod_p(rep: QuiverRep, word: Sequence[int], p: Optional[int] = None,
                      counter: Optional[FlagCounter] = None) -> int:
    """Chain count over a prime field.

    Accepts either a module already over GF(p), or a rational module
    together with p (reduced here; a degenerate reduction is an error)."""
    if isinstance(rep.field, PrimeField):
        return count_flags(rep, word, counter)
    if p is None:
        raise PhiError("count_flags_mod_p needs a prime for a rational module")
    try:
        rep_p = _reduce_mod_p(rep, PrimeField(p))
    except _BadReduction as exc:
        raise PhiError(str(exc)) from exc
    return count_flags(rep_p, word, counter)


def _reduce_mod_p(rep: QuiverRep, gf: PrimeField) -> QuiverRep:
    """Reduce a rational module mod p; cached on the instance.

    Raises ZeroDivisionError when a denominator vanishes mod p, and
    _BadReduction when the reduction degenerates (its socle/radical
    filtration invariants differ from the rational ones), e.g. when an
    integer matrix entry is divisible by p.  Both conditions disqualify the
    prime as an interpolation point.
    """
    cache = rep.__dict__.get("_mod_p_cache")
    if cache is None:
        cache = {}
        object.__setattr__(rep, "_mod_p_cache", cache)
    hit = cache.get(gf.p)
    if hit is not None:
        if isinstance(hit, Exception):
            raise hit
        return hit
    try:
        maps = tuple(
            tuple(tuple(gf.coerce(x) for x in row) for row in m) for m in rep.maps
        )
        rep_p = QuiverRep(rep.quiver, gf, rep.dims, maps)
        if fingerprint(rep_p) != fingerprint(rep):
            raise _BadReduction(f"module degenerates mod {gf.p}")
    except (ZeroDivisionError, _BadReduction) as exc:
        cache[gf.p] = exc
        raise
    cache[gf.p] = rep_p
    return rep_p


def _lagrange_at_one(points: Sequence[tuple[int, int]]) -> Fraction:
    total = Fraction(0)
    for i, (xi, yi) in enumerate(points):
        term = Fraction(yi)
        for j, (xj, _) in enumerate(points):
            if i != j:
                term *= Fraction(1 - xj, xi - xj)
        total += term
    return total


def _lagrange_eval(points: Sequence[tuple[int, int]], x: int) -> Fraction:
    total = Fraction(0)
    for i, (xi, yi) in enumerate(points):
        term = Fraction(yi)
        for j, (xj, _) in enumerate(points):
            if i != j:
                term *= Fraction(x - xj, xi - xj)
        total += term
    return total


def chi(rep: QuiverRep, word: Sequence[int], counter: Optional[FlagCounter] = None) -> ChiResult:
    """Euler characteristic of the composition-series variety of type word.

    Uses the exact backend whenever every recursion step meets a socle part
    of dimension <= 1; otherwise counts points over increasing primes and
    interpolates, accepting the fit once two further primes confirm it.
    An unstable interpolation is an explicit failure, never a guess.
    """
    counter = counter or _SHARED_COUNTER
    word = tuple(word)
    if not isinstance(rep.field, RationalField):
        raise PhiError("chi expects a module over the rationals")
    try:
        value = count_flags(rep, word, counter, strict_unique=True)
        return ChiResult(value, EXACT)
    except _SocleBranching:
        pass
    points: list[tuple[int, int]] = []
    used: list[int] = []
    for p in PRIMES:
        gf = PrimeField(p)
        try:
            rep_p = _reduce_mod_p(rep, gf)
        except (ZeroDivisionError, _BadReduction):
            continue
        points.append((p, count_flags(rep_p, word, counter)))
        used.append(p)
        for m in range(1, len(points) - 1):
            if len(points) < m + 2:
                break
            head = points[:m]
            if all(_lagrange_eval(head, q) == c for q, c in points[m : m + 2]):
                value = _lagrange_at_one(head)
                if value.denominator != 1:
                    raise PhiError(f"interpolated chi {value} is not an integer")
                return ChiResult(int(value), INTERPOLATED, tuple(used))
    raise ChiUndeterminedError(
        f"point counts {points} never stabilized within the prime cap"
    )


# ----------------------------------------------------------------------
# phi assembly


@dataclass
class PhiReport:
    poly: LaurentPoly
    backend: str
    primes: tuple[int, ...]
    table: ChiTable

    def to_json(self) -> dict:
        return {
            "polynomial": self.poly.to_json(),
            "backend": self.backend,
            "primes_used": list(self.primes),
        }


def _expansions(word_positions: Mapping[int, list[int]], dims: Mapping[int, int],
                length: int) -> Iterable[tuple[int, ...]]:
    """All multiplicity vectors a with per-vertex letter counts equal to the
    dimension vector, as full-length tuples."""
    items = sorted(word_positions)
    per_vertex: list[list[tuple[int, ...]]] = []
    for v in items:
        slots = word_positions[v]
        per_vertex.append(list(_compositions_of(dims[v], len(slots))))

    def rec(idx, acc):
        if idx == len(items):
            yield tuple(acc)
            return
        v = items[idx]
        slots = word_positions[v]
        for combo in per_vertex[idx]:
            for pos, val in zip(slots, combo):
                acc[pos] = val
            yield from rec(idx + 1, acc)
        for pos in slots:
            acc[pos] = 0

    yield from rec(0, [0] * length)


def _compositions_of(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions_of(total - first, parts - 1):
            yield (first,) + rest


def phi_eval(
    rep: QuiverRep,
    letters: Sequence[int],
    params: Optional[Sequence[str]] = None,
    counter: Optional[FlagCounter] = None,
) -> PhiReport:
    """phi_M over the word x_{i_1}(t_1)...x_{i_k}(t_k) as a polynomial in the
    t-parameters.

    Only multiplicity vectors whose per-vertex letter counts equal dim M
    contribute; each coefficient chi / prod a_j! is checked to be an integer
    before emission.
    """
    counter = counter or _SHARED_COUNTER
    letters = tuple(letters)
    if params is None:
        params = tuple(f"t{i + 1}" for i in range(len(letters)))
    params = tuple(params)
    if len(params) != len(letters):
        raise PhiError("letters and parameters must have equal length")
    varnames = params
    table = ChiTable()
    positions: dict[int, list[int]] = {}
    for idx, letter in enumerate(letters):
        positions.setdefault(letter, []).append(idx)
    bad = [v for v in positions if v not in rep.quiver.vertices]
    if bad:
        raise PhiError(f"letters {sorted(bad)} are not vertices of the quiver")
    dims = {v: rep.dim(v) for v in rep.quiver.vertices}
    for v, d in dims.items():
        if d and v not in positions:
            return PhiReport(LaurentPoly.zero(varnames), EXACT, (), table)
    terms: dict[tuple[int, ...], int] = {}
    backend = EXACT
    primes_used: set[int] = set()
    for avec in _expansions(positions, dims, len(letters)):
        expanded = tuple(
            letter for letter, mult in zip(letters, avec) for _ in range(mult)
        )
        result = chi(rep, expanded, counter)
        table.record(expanded, result)
        if result.backend == INTERPOLATED:
            backend = INTERPOLATED
            primes_used.update(result.primes)
        if result.value == 0:
            continue
        denom = 1
        for a in avec:
            denom *= factorial(a)
        coeff = Fraction(result.value, denom)
        if coeff.denominator != 1:
            raise PhiError(
                f"coefficient chi/a! = {coeff} is not an integer for a = {avec}"
            )
        terms[avec] = terms.get(avec, 0) + int(coeff)
    poly = LaurentPoly(varnames, terms)
    return PhiReport(poly, backend, tuple(sorted(primes_used)), table)


# ----------------------------------------------------------------------
# identity verification and positivity


def _first_difference(p: LaurentPoly, q: LaurentPoly) -> Optional[str]:
    diff = p - q
    if diff.is_zero:
        return None
    exps, coeff = diff.sorted_terms()[0]
    return str(LaurentPoly.monomial(diff.varnames, exps, coeff))


def verify_multiplication(
    m: QuiverRep,
    n: QuiverRep,
    letters: Sequence[int],
    middle_terms: Optional[tuple[QuiverRep, QuiverRep]] = None,
    counter: Optional[FlagCounter] = None,
) -> dict:
    """Check phi_M phi_N = phi_{M + N}, and when the two middle terms X, Y of
    the non-split extensions are supplied (dim Ext^1 must be 1), also
    phi_M phi_N = phi_X + phi_Y.  Failures carry a differing monomial."""
    counter = counter or _SHARED_COUNTER
    pm = phi_eval(m, letters, counter=counter)
    pn = phi_eval(n, letters, counter=counter)
    product = pm.poly * pn.poly
    psum = phi_eval(direct_sum(m, n), letters, counter=counter)
    report: dict = {
        "product_rule": {
            "holds": product == psum.poly,
            "witness": _first_difference(product, psum.poly),
        }
    }
    if middle_terms is not None:
        x, y = middle_terms
        ext = ext1_dim(m, n)
        rhs = phi_eval(x, letters, counter=counter).poly + phi_eval(y, letters, counter=counter).poly
        report["exchange_rule"] = {
            "ext1": ext,
            "holds": ext == 1 and product == rhs,
            "witness": _first_difference(product, rhs),
        }
    return report


def positivity_check(
    summands: Sequence[QuiverRep],
    letters: Sequence[int],
    point: Sequence[Fraction | int],
    labels: Optional[Sequence[str]] = None,
    counter: Optional[FlagCounter] = None,
) -> dict:
    """Exact phi values of each summand at a positive parameter point."""
    values = [Fraction(x) for x in point]
    if len(values) != len(letters):
        raise PhiError("point must supply one value per word letter")
    if any(v <= 0 for v in values):
        raise PhiError("positivity check requires strictly positive coordinates")
    if labels is None:
        labels = [f"T{i + 1}" for i in range(len(summands))]
    rows = []
    all_positive = True
    for label, rep in zip(labels, summands):
        report = phi_eval(rep, letters, counter=counter)
        assignment = {p: v for p, v in zip(report.poly.varnames, values)}
        value = report.poly.evaluate(assignment)
        rows.append(
            {
                "label": label,
                "value": value,
                "positive": value > 0,
                "backend": report.backend,
            }
        )
        all_positive = all_positive and value > 0
    return {"rows": rows, "all_positive": all_positive}
