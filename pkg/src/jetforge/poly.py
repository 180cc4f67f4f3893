"""Sparse multivariate polynomials over exact rationals.

A polynomial is a map from exponent tuples to nonzero Fraction coefficients.
The single term order used throughout the package is graded lexicographic:
smaller total degree first, ties broken so that earlier variables dominate
(so for two variables the monomials read 1, x1, x2, x1^2, x1*x2, x2^2, ...).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from .errors import ArityMismatch, IndexOutOfRange, InputError

# exponent tuples double as multi-indices everywhere in the package
MultiIndex = tuple


def monomial_key(exponents):
    """Sort key realizing the graded lexicographic order (ascending)."""
    return (sum(exponents), tuple(-e for e in exponents))


def graded_monomials(arity, max_degree):
    """All exponent tuples with total degree <= max_degree, graded-lex sorted.

    For arity d and bound r the list has C(r + d, d) entries; the empty
    exponent comes first.
    """
    if arity == 0:
        return [()]
    mons = [p for p in product(range(max_degree + 1), repeat=arity)
            if sum(p) <= max_degree]
    mons.sort(key=monomial_key)
    return mons


def _fr(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity, terms=None):
        coeffs = {}
        for expo, c in (terms or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != arity:
                raise ArityMismatch(
                    f"exponent {expo} has length {len(expo)}, expected {arity}")
            if any(e < 0 for e in expo):
                raise ValueError(f"negative exponent in {expo}")
            c = _fr(c)
            if c:
                coeffs[expo] = coeffs.get(expo, Fraction(0)) + c
                if not coeffs[expo]:
                    del coeffs[expo]
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, arity):
        return cls(arity, {})

    @classmethod
    def const(cls, value, arity):
        value = _fr(value)
        if not value:
            return cls.zero(arity)
        return cls(arity, {(0,) * arity: value})

    @classmethod
    def variable(cls, index, arity):
        if not 0 <= index < arity:
            raise IndexOutOfRange(f"variable {index} not in 0..{arity - 1}")
        expo = tuple(1 if i == index else 0 for i in range(arity))
        return cls(arity, {expo: Fraction(1)})

    # -- basic structure ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(p) for p in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0]))

    def leading(self):
        """(exponent, coefficient) of the graded-lex greatest monomial."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        expo = max(self.terms, key=monomial_key)
        return expo, self.terms[expo]

    def constant_term(self):
        return self.terms.get((0,) * self.arity, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other, self.arity)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other, self.arity)
        if isinstance(other, Polynomial):
            if other.arity != self.arity:
                raise ArityMismatch(
                    f"cannot combine arity {self.arity} with {other.arity}")
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for p, c in other.terms.items():
            s = terms.get(p, Fraction(0)) + c
            if s:
                terms[p] = s
            else:
                terms.pop(p, None)
        return Polynomial(self.arity, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.arity, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for p, c in self.terms.items():
            for q, d in other.terms.items():
                pq = tuple(a + b for a, b in zip(p, q))
                s = terms.get(pq, Fraction(0)) + c * d
                if s:
                    terms[pq] = s
                else:
                    del terms[pq]
        return Polynomial(self.arity, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.const(1, self.arity)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus and evaluation -------------------------------------------

    def derivative(self, index):
        """Formal partial derivative with respect to variable `index`."""
        if not 0 <= index < self.arity:
            raise IndexOutOfRange(f"variable {index} not in 0..{self.arity - 1}")
        terms = {}
        for p, c in self.terms.items():
            e = p[index]
            if e == 0:
                continue
            q = tuple(v - 1 if i == index else v for i, v in enumerate(p))
            terms[q] = terms.get(q, Fraction(0)) + c * e
        return Polynomial(self.arity, terms)

    def evaluate(self, point):
        """Exact value at a tuple of rationals."""
        if len(point) != self.arity:
            raise ArityMismatch(
                f"expected {self.arity} values, got {len(point)}")
        point = [_fr(v) for v in point]
        return evaluate_terms(self.terms, point, Fraction(1))

    def evaluate_in(self, values, one):
        """Evaluate on elements of any commutative ring.

        `values` substitute the variables; `one` must be the multiplicative
        identity of the target ring (used for the empty product).
        """
        if len(values) != self.arity:
            raise ArityMismatch(
                f"expected {self.arity} values, got {len(values)}")
        return evaluate_terms(self.terms, list(values), one)

    def rename_into(self, target_arity, index_map):
        """Reinterpret inside a larger ring, sending variable i to index_map[i]."""
        terms = {}
        for p, c in self.terms.items():
            q = [0] * target_arity
            for i, e in enumerate(p):
                q[index_map[i]] += e
            terms[tuple(q)] = terms.get(tuple(q), Fraction(0)) + c
        return Polynomial(target_arity, terms)

    # -- canonical form ----------------------------------------------------

    def normalized(self):
        """Primitive integer form with positive graded-lex leading coefficient.

        Clears denominators, divides by the gcd of the integer coefficients
        and fixes the sign, so two generators of the same rational line get
        the literal same representation.  Zero maps to zero.
        """
        if not self.terms:
            return self
        denlcm = 1
        for c in self.terms.values():
            denlcm = denlcm * c.denominator // math.gcd(denlcm, c.denominator)
        ints = {p: c * denlcm for p, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = math.gcd(g, int(c))
        lead = ints[max(ints, key=monomial_key)]
        if lead < 0:
            g = -g
        return Polynomial(self.arity, {p: c / g for p, c in ints.items()})

    # -- text form ---------------------------------------------------------

    def to_string(self, names=None):
        """Canonical text: graded-lex sorted terms joined by ' + '."""
        if not self.terms:
            return "0"
        names = names or default_names(self.arity)
        if len(names) != self.arity:
            raise ArityMismatch("wrong number of variable names")
        parts = []
        for p, c in self.sorted_terms():
            factors = [f"{names[i]}^{e}" for i, e in enumerate(p) if e]
            if factors:
                parts.append(str(c) + "*" + "*".join(factors))
            else:
                parts.append(str(c))
        return " + ".join(parts)

    @classmethod
    def from_string(cls, text, names):
        """Parse the textual form; tolerates '-' separators, bare variables
        and omitted '^1' exponents."""
        index = {n: i for i, n in enumerate(names)}
        arity = len(names)
        text = text.strip()
        if text in ("", "0"):
            return cls.zero(arity)
        text = text.replace("-", "+-").replace("e+-", "e-")
        terms = {}
        for chunk in text.split("+"):
            chunk = chunk.strip()
            if not chunk:
                continue
            coeff = Fraction(1)
            if chunk.startswith("-"):
                coeff = Fraction(-1)
                chunk = chunk[1:].strip()
            expo = [0] * arity
            for factor in chunk.split("*"):
                factor = factor.strip()
                if not factor:
                    raise InputError(f"empty factor in term {chunk!r}")
                if not (factor[0].isalpha() or factor[0] == "_"):
                    try:
                        coeff *= Fraction(factor)
                        continue
                    except (ValueError, ZeroDivisionError):
                        raise InputError(f"bad coefficient {factor!r}") from None
                name, _, power = factor.partition("^")
                name = name.strip()
                if name not in index:
                    raise InputError(f"unknown variable {name!r}")
                e = int(power) if power else 1
                if e < 0:
                    raise InputError(f"negative exponent in {factor!r}")
                expo[index[name]] += e
            key = tuple(expo)
            s = terms.get(key, Fraction(0)) + coeff
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        return cls(arity, terms)

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"


def default_names(arity):
    return [f"x{i + 1}" for i in range(arity)]


def evaluate_terms(terms, values, one):
    """Sum of c * prod(values[i] ** e) over a sparse term table.

    Works over any commutative ring containing the rational coefficients;
    powers of each value are computed once and cached.
    """
    if not terms:
        return one * Fraction(0)
    maxexp = {}
    for p in terms:
        for i, e in enumerate(p):
            if e:
                maxexp[i] = max(maxexp.get(i, 0), e)
    powers = {}
    for i, top in maxexp.items():
        row = [one]
        for _ in range(top):
            row.append(row[-1] * values[i])
        powers[i] = row
    total = None
    for p, c in terms.items():
        term = one
        for i, e in enumerate(p):
            if e:
                term = term * powers[i][e]
        term = term * c
        total = term if total is None else total + term
    return total
