"""Exact multivariate Laurent polynomials with integer coefficients.

A Laurent polynomial is stored as a map from exponent vectors (tuples of
ints, negative entries allowed) to nonzero integer coefficients, together
with the ordered tuple of variable names that fixes the meaning of each
exponent slot.  All values are immutable; arithmetic never leaves the ring
and evaluation is done in exact rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

# An exponent vector; one slot per variable of the ambient ring, negative
# entries permitted.
Monomial = tuple[int, ...]


class LaurentError(Exception):
    """Base class for Laurent-ring failures."""


class VariableMismatchError(LaurentError):
    """Operands live over different variable lists."""


class InexactDivisionError(LaurentError):
    """Division has a nonzero remainder (or a non-integer coefficient)."""


class EvaluationError(LaurentError):
    """Evaluation hit a zero value at a negatively-exponentiated variable."""


def _grlex_key(exponents: Monomial) -> tuple:
    return (sum(exponents), exponents)


class LaurentPoly:
    """An immutable Laurent polynomial over Z.

    >>> x, y = LaurentPoly.variables(("x", "y"))
    >>> str((x + y) * (x - y))
    'x^2 - y^2'
    >>> str((x * x).div_exact(x))
    'x'
    """

    __slots__ = ("varnames", "terms", "_hash")

    def __init__(self, varnames: Sequence[str], terms: Mapping[Monomial, int]):
        names = tuple(varnames)
        clean: dict[Monomial, int] = {}
        for exps, coeff in terms.items():
            if len(exps) != len(names):
                raise VariableMismatchError(
                    f"exponent vector {exps} has length {len(exps)}, expected {len(names)}"
                )
            if coeff:
                clean[tuple(exps)] = int(coeff)
        object.__setattr__(self, "varnames", names)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, varnames: Sequence[str]) -> "LaurentPoly":
        return cls(varnames, {})

    @classmethod
    def constant(cls, varnames: Sequence[str], c: int) -> "LaurentPoly":
        names = tuple(varnames)
        return cls(names, {(0,) * len(names): c})

    @classmethod
    def one(cls, varnames: Sequence[str]) -> "LaurentPoly":
        return cls.constant(varnames, 1)

    @classmethod
    def monomial(cls, varnames: Sequence[str], exponents: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls(varnames, {tuple(exponents): coeff})

    @classmethod
    def variable(cls, name: str, varnames: Sequence[str]) -> "LaurentPoly":
        names = tuple(varnames)
        idx = names.index(name)
        exps = tuple(1 if i == idx else 0 for i in range(len(names)))
        return cls(names, {exps: 1})

    @classmethod
    def variables(cls, varnames: Sequence[str]) -> list["LaurentPoly"]:
        """All generators of the ring with the given variable list, in order."""
        return [cls.variable(v, varnames) for v in varnames]

    # ------------------------------------------------------------------
    # structure

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_one(self) -> bool:
        return self.terms == {(0,) * len(self.varnames): 1}

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        """Maximum over terms of the exponent sum; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in canonical graded-lex descending order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def sort_key(self) -> tuple:
        """A total-order key on polynomials (used to canonicalize clusters)."""
        return tuple(self.sorted_terms())

    def _check_compatible(self, other: "LaurentPoly") -> None:
        if self.varnames != other.varnames:
            raise VariableMismatchError(
                f"variable lists differ: {self.varnames} vs {other.varnames}"
            )

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check_compatible(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.varnames, other)
        return NotImplemented

    # ------------------------------------------------------------------
    # ring operations

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            c = out.get(exps, 0) + coeff
            if c:
                out[exps] = c
            else:
                out.pop(exps, None)
        return LaurentPoly(self.varnames, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.varnames, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                c = out.get(exps, 0) + c1 * c2
                if c:
                    out[exps] = c
                else:
                    del out[exps]
        return LaurentPoly(self.varnames, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            raise TypeError("exponent must be an int")
        if n < 0:
            if not self.is_monomial:
                raise LaurentError("negative powers are only defined for monomials")
            (exps, coeff), = self.terms.items()
            if coeff not in (1, -1):
                raise InexactDivisionError(f"monomial coefficient {coeff} is not a unit")
            inv = LaurentPoly(self.varnames, {tuple(-e for e in exps): coeff})
            return inv ** (-n)
        result = LaurentPoly.one(self.varnames)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.varnames, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.varnames == other.varnames and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.varnames, tuple(self.sorted_terms())))
            object.__setattr__(self, "_hash", h)
        return h

    # ------------------------------------------------------------------
    # division and evaluation

    def div_exact(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Return r with r * divisor == self, or raise InexactDivisionError.

        Monomial content is cleared from both operands first; the remaining
        honest polynomials are divided by multivariate long division in
        graded-lex order.  A nonzero remainder is an error, never a
        truncation.
        """
        self._check_compatible(divisor)
        if divisor.is_zero:
            raise InexactDivisionError("division by the zero polynomial")
        if self.is_zero:
            return self
        nvars = len(self.varnames)
        shift_p = tuple(min(e[i] for e in self.terms) for i in range(nvars))
        shift_q = tuple(min(e[i] for e in divisor.terms) for i in range(nvars))
        current = {tuple(a - b for a, b in zip(e, shift_p)): c for e, c in self.terms.items()}
        divis = {tuple(a - b for a, b in zip(e, shift_q)): c for e, c in divisor.terms.items()}
        lead_q = max(divis, key=_grlex_key)
        lc_q = divis[lead_q]
        quotient: dict[Monomial, int] = {}
        while current:
            lead_c = max(current, key=_grlex_key)
            lc_c = current[lead_c]
            diff = tuple(a - b for a, b in zip(lead_c, lead_q))
            if any(d < 0 for d in diff) or lc_c % lc_q != 0:
                raise InexactDivisionError(
                    f"inexact division: remainder has leading term {lead_c} -> {lc_c}"
                )
            coeff = lc_c // lc_q
            quotient[diff] = quotient.get(diff, 0) + coeff
            for e, c in divis.items():
                exps = tuple(a + b for a, b in zip(diff, e))
                nc = current.get(exps, 0) - coeff * c
                if nc:
                    current[exps] = nc
                else:
                    current.pop(exps, None)
        shift = tuple(a - b for a, b in zip(shift_p, shift_q))
        return LaurentPoly(
            self.varnames,
            {tuple(a + b for a, b in zip(e, shift)): c for e, c in quotient.items()},
        )

    def evaluate(self, point: Mapping[str, Fraction | int]) -> Fraction:
        """Exact rational value of the polynomial at the given point.

        Every variable with a negative exponent somewhere in the polynomial
        must map to a nonzero rational.
        """
        values = []
        for i, name in enumerate(self.varnames):
            if name in point:
                values.append(Fraction(point[name]))
            else:
                if any(e[i] != 0 for e in self.terms):
                    raise EvaluationError(f"no value supplied for variable {name!r}")
                values.append(Fraction(0))
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = Fraction(coeff)
            for v, e in zip(values, exps):
                if e == 0:
                    continue
                if v == 0 and e < 0:
                    raise EvaluationError("zero value at a negative-exponent variable")
                term *= v ** e
            total += term
        return total

    # ------------------------------------------------------------------
    # serialization and display

    def to_json(self) -> dict:
        return {
            "vars": list(self.varnames),
            "terms": [
                {"exponents": list(e), "coeff": str(c)} for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        terms = {tuple(t["exponents"]): int(t["coeff"]) for t in data["terms"]}
        return cls(tuple(data["vars"]), terms)

    def _term_str(self, exps: Monomial, coeff: int) -> str:
        factors = []
        for name, e in zip(self.varnames, exps):
            if e == 0:
                continue
            factors.append(name if e == 1 else f"{name}^{e}")
        if not factors:
            return str(coeff)
        body = "*".join(factors)
        if coeff == 1:
            return body
        if coeff == -1:
            return f"-{body}"
        return f"{coeff}*{body}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (exps, coeff) in enumerate(self.sorted_terms()):
            s = self._term_str(exps, coeff)
            if i == 0:
                parts.append(s)
            elif s.startswith("-"):
                parts.append(f"- {s[1:]}")
            else:
                parts.append(f"+ {s}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"


def product_of(polys: Iterable[LaurentPoly], varnames: Sequence[str]) -> LaurentPoly:
    """Product of an iterable of polynomials (1 for the empty product)."""
    result = LaurentPoly.one(varnames)
    for p in polys:
        result = result * p
    return result
