"""Exact arithmetic in the truncated multivariate power series ring.

A series lives in Q[t_1..t_d]/(t_1..t_d)^(r+1): a sparse map from exponent
tuples of total degree <= r to nonzero coefficients.  Coefficients are
Fractions in ordinary use; any commutative ring element that supports +, *
and truth testing (notably Polynomial, for generic jets) works as well.

All values are immutable after construction and every operation is a pure
function, so concurrent use needs no synchronization.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (ArityMismatch, DimensionMismatch, IndexOutOfRange,
                     InputError, NotAUnit, OrderIncrease)
from .poly import Polynomial, evaluate_terms, monomial_key


def _is_scalar_zero(c):
    return not c


class TruncatedSeries:
    """Element of the order-r truncated power series ring in d variables."""

    __slots__ = ("dims", "order", "coeffs")

    def __init__(self, dims, order, coeffs=None):
        if dims < 1:
            raise ValueError("series need at least one variable")
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        table = {}
        for expo, c in (coeffs or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != dims:
                raise DimensionMismatch(
                    f"exponent {expo} has length {len(expo)}, expected {dims}")
            if any(e < 0 for e in expo):
                raise ValueError(f"negative exponent {expo}")
            if sum(expo) > order:
                continue
            if isinstance(c, int):
                c = Fraction(c)
            if _is_scalar_zero(c):
                continue
            if expo in table:
                c = table[expo] + c
                if _is_scalar_zero(c):
                    del table[expo]
                    continue
            table[expo] = c
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", table)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dims, order):
        return cls(dims, order, {})

    @classmethod
    def const(cls, value, dims, order):
        return cls(dims, order, {(0,) * dims: value})

    @classmethod
    def one(cls, dims, order):
        return cls.const(Fraction(1), dims, order)

    @classmethod
    def variable(cls, index, dims, order):
        if not 0 <= index < dims:
            raise IndexOutOfRange(f"variable {index} not in 0..{dims - 1}")
        if order < 1:
            return cls.zero(dims, order)
        expo = tuple(1 if i == index else 0 for i in range(dims))
        return cls(dims, order, {expo: Fraction(1)})

    # -- inspection --------------------------------------------------------

    def coefficient(self, expo):
        expo = tuple(expo)
        return self.coeffs.get(expo, Fraction(0))

    def constant_term(self):
        return self.coeffs.get((0,) * self.dims, Fraction(0))

    def is_zero(self):
        return not self.coeffs

    def homogeneous(self, degree):
        """The degree-s coefficients as a dict (may be empty)."""
        return {p: c for p, c in self.coeffs.items() if sum(p) == degree}

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.dims == other.dims and self.order == other.order
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.dims, self.order, frozenset(self.coeffs.items())))

    def _check_compatible(self, other):
        if self.dims != other.dims or self.order != other.order:
            raise DimensionMismatch(
                f"series in ({self.dims} vars, order {self.order}) vs "
                f"({other.dims} vars, order {other.order})")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compatible(other)
            table = dict(self.coeffs)
            for p, c in other.coeffs.items():
                s = table.get(p)
                s = c if s is None else s + c
                if _is_scalar_zero(s):
                    table.pop(p, None)
                else:
                    table[p] = s
            return TruncatedSeries(self.dims, self.order, table)
        return self + TruncatedSeries.const(other, self.dims, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.dims, self.order,
                               {p: -c for p, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compatible(other)
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compatible(other)
            table = {}
            r = self.order
            for p, c in self.coeffs.items():
                dp = sum(p)
                for q, d in other.coeffs.items():
                    if dp + sum(q) > r:
                        continue
                    pq = tuple(a + b for a, b in zip(p, q))
                    cd = c * d
                    s = table.get(pq)
                    s = cd if s is None else s + cd
                    if _is_scalar_zero(s):
                        table.pop(pq, None)
                    else:
                        table[pq] = s
            return TruncatedSeries(self.dims, self.order, table)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar):
        """Multiply every coefficient by a ring scalar."""
        if _is_scalar_zero(scalar):
            return TruncatedSeries.zero(self.dims, self.order)
        return TruncatedSeries(self.dims, self.order,
                               {p: c * scalar for p, c in self.coeffs.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = TruncatedSeries.one(self.dims, self.order)
        for _ in range(n):
            result = result * self
        return result

    # -- truncation structure ----------------------------------------------

    def restrict(self, new_order):
        """Truncate to a lower (or equal) order."""
        if new_order > self.order:
            raise OrderIncrease(
                f"cannot restrict order {self.order} to {new_order}")
        return TruncatedSeries(self.dims, new_order,
                               {p: c for p, c in self.coeffs.items()
                                if sum(p) <= new_order})

    def zero_extended(self, new_order):
        """The zero-fill preimage at a higher order (a section of restrict)."""
        if new_order < self.order:
            raise OrderIncrease(
                f"zero_extended targets order >= {self.order}")
        return TruncatedSeries(self.dims, new_order, dict(self.coeffs))

    def derive(self, index):
        """Formal d/dt_index.

        The result is declared at the same order r but carries no degree-r
        information: a caller that needs the derivative faithful at order r
        must start from an order r+1 series.
        """
        if not 0 <= index < self.dims:
            raise IndexOutOfRange(f"variable {index} not in 0..{self.dims - 1}")
        table = {}
        for p, c in self.coeffs.items():
            e = p[index]
            if e == 0:
                continue
            q = tuple(v - 1 if i == index else v for i, v in enumerate(p))
            table[q] = c * e
        return TruncatedSeries(self.dims, self.order, table)

    def invert_unit(self):
        """Multiplicative inverse; the constant term must be a nonzero rational."""
        c0 = self.constant_term()
        if isinstance(c0, Polynomial):
            if c0.degree() <= 0:
                c0 = c0.constant_term()
            else:
                raise NotAUnit("constant term is not a rational unit")
        if _is_scalar_zero(c0):
            raise NotAUnit("constant term is zero")
        # a = c0 (1 - n) with n of positive valuation, so 1/a is the
        # finite geometric sum (1 + n + ... + n^r) / c0.
        n = TruncatedSeries.one(self.dims, self.order) - self.scale(Fraction(1) / c0)
        result = TruncatedSeries.one(self.dims, self.order)
        power = TruncatedSeries.one(self.dims, self.order)
        for _ in range(self.order):
            power = power * n
            if power.is_zero():
                break
            result = result + power
        return result.scale(Fraction(1) / c0)

    # -- text form ---------------------------------------------------------

    def to_string(self):
        """Canonical text: graded-lex terms 'c * t1^e1*...' joined by ' + '."""
        if not self.coeffs:
            return "0"
        parts = []
        for p in sorted(self.coeffs, key=monomial_key):
            c = self.coeffs[p]
            cs = c.to_string() if isinstance(c, Polynomial) else str(c)
            factors = [f"t{i + 1}^{e}" for i, e in enumerate(p) if e]
            if factors:
                parts.append(f"{cs} * " + "*".join(factors))
            else:
                parts.append(cs)
        return " + ".join(parts)

    @classmethod
    def from_string(cls, text, dims, order):
        """Parse the canonical text (rational coefficients only)."""
        names = [f"t{i + 1}" for i in range(dims)]
        try:
            poly = Polynomial.from_string(text, names)
        except InputError:
            raise
        for p in poly.terms:
            if sum(p) > order:
                raise InputError(
                    f"term of degree {sum(p)} exceeds order {order}")
        return cls(dims, order, dict(poly.terms))

    def __repr__(self):
        return f"TruncatedSeries(d={self.dims}, r={self.order}, {self.to_string()!r})"


class JetPoint:
    """A point of the jet space of affine n-space: n series sharing (d, r).

    The coefficient of t^p in component i is the jet coordinate indexed by
    (p, i); the constant terms form the base point.
    """

    __slots__ = ("series",)

    def __init__(self, series):
        series = tuple(series)
        if not series:
            raise ArityMismatch("a jet needs at least one component")
        d, r = series[0].dims, series[0].order
        for s in series:
            if not isinstance(s, TruncatedSeries):
                raise TypeError("jet components must be TruncatedSeries")
            if s.dims != d or s.order != r:
                raise DimensionMismatch(
                    "all jet components must share the same (dims, order)")
        object.__setattr__(self, "series", series)

    def __setattr__(self, name, value):
        raise AttributeError("JetPoint is immutable")

    @property
    def n(self):
        return len(self.series)

    @property
    def dims(self):
        return self.series[0].dims

    @property
    def order(self):
        return self.series[0].order

    def component(self, i):
        return self.series[i]

    def basepoint(self):
        return tuple(s.constant_term() for s in self.series)

    def offsets(self):
        """Components minus their constant terms (positive valuation parts)."""
        return tuple(s - TruncatedSeries.const(s.constant_term(), s.dims, s.order)
                     for s in self.series)

    def restrict(self, new_order):
        return JetPoint([s.restrict(new_order) for s in self.series])

    def zero_extended(self, new_order):
        return JetPoint([s.zero_extended(new_order) for s in self.series])

    def __eq__(self, other):
        if not isinstance(other, JetPoint):
            return NotImplemented
        return self.series == other.series

    def __repr__(self):
        return f"JetPoint({[s.to_string() for s in self.series]})"

    @classmethod
    def constant(cls, values, dims, order):
        """The constant jet sitting at a rational point."""
        return cls([TruncatedSeries.const(v, dims, order) for v in values])


# -- module-level operation names ------------------------------------------

def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_derive(a, index):
    return a.derive(index)


def series_invert_unit(a):
    return a.invert_unit()


def restrict(a, new_order):
    return a.restrict(new_order)


def series_compose(f, jet):
    """Substitute the components of a jet into f and truncate.

    `f` may be a Polynomial in n variables (full substitution) or a
    TruncatedSeries in n variables, in which case it is evaluated on the
    positive-valuation offsets of the jet (a Taylor-style composition).
    """
    if isinstance(f, Polynomial):
        if f.arity != jet.n:
            raise ArityMismatch(
                f"polynomial in {f.arity} variables applied to a jet with "
                f"{jet.n} components")
        one = TruncatedSeries.one(jet.dims, jet.order)
        return evaluate_terms(f.terms, list(jet.series), one)
    if isinstance(f, TruncatedSeries):
        if f.dims != jet.n:
            raise ArityMismatch(
                f"series in {f.dims} variables applied to a jet with "
                f"{jet.n} components")
        one = TruncatedSeries.one(jet.dims, jet.order)
        return evaluate_terms(f.coeffs, list(jet.offsets()), one)
    raise TypeError("series_compose expects a Polynomial or TruncatedSeries")
