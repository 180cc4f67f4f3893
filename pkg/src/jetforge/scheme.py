"""Jet spaces of affine schemes made explicit.

Given a closed subscheme of affine n-space cut out by polynomials, the jet
space of d-dimensional order-r jets is again affine, cut out inside the
space of coefficient tuples by one polynomial equation per (generator,
monomial of degree <= r) pair.  Two constructions are provided:

* the direct route substitutes a generic coefficient series into each
  generator and reads off the monomial coefficients;
* the universal route builds the order-r Taylor expansion of each generator
  at the symbolic base point and composes it with the positive-valuation
  offset of the generic jet.

Both produce the same system; the equality is checked in the test suite.
Jet coordinates are ordered with the ambient component outside and the
monomial (graded-lex) inside.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (ArityMismatch, BasepointNotOnScheme, OrderMismatch,
                     OrderTooLow)
from .poly import Polynomial, graded_monomials
from .series import JetPoint, TruncatedSeries, series_compose


class AffineScheme:
    """A closed subscheme of affine n-space given by polynomial generators."""

    __slots__ = ("n", "generators", "names")

    def __init__(self, n, generators, names=None):
        generators = tuple(generators)
        for g in generators:
            if g.arity != n:
                raise ArityMismatch(
                    f"generator in {g.arity} variables, ambient dimension {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "names", tuple(names) if names else
                           tuple(f"x{i + 1}" for i in range(n)))

    def __setattr__(self, name, value):
        raise AttributeError("AffineScheme is immutable")

    def contains_point(self, point):
        return all(g.evaluate(point) == 0 for g in self.generators)


class AffineMap:
    """A polynomial map between affine spaces, one Polynomial per target slot."""

    __slots__ = ("n", "m", "components")

    def __init__(self, n, m, components):
        components = tuple(components)
        if len(components) != m:
            raise ArityMismatch(f"expected {m} components, got {len(components)}")
        for g in components:
            if g.arity != n:
                raise ArityMismatch(
                    f"component in {g.arity} variables, source dimension {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "components", components)

    def __setattr__(self, name, value):
        raise AttributeError("AffineMap is immutable")

    @classmethod
    def identity(cls, n):
        return cls(n, n, [Polynomial.variable(i, n) for i in range(n)])

    def compose(self, other):
        """self after other (source arity = other.n)."""
        if other.m != self.n:
            raise ArityMismatch("arities do not chain")
        one = Polynomial.const(1, other.n)
        comps = [g.evaluate_in(other.components, one) for g in self.components]
        return AffineMap(other.n, self.m, comps)

    def apply(self, point):
        return tuple(g.evaluate(point) for g in self.components)


class PolySystem:
    """A list of polynomial equations in named jet coordinates."""

    __slots__ = ("variables", "equations")

    def __init__(self, variables, equations):
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "equations", tuple(equations))
        for eq in self.equations:
            if eq.arity != len(self.variables):
                raise ArityMismatch("equation arity does not match variables")

    def __setattr__(self, name, value):
        raise AttributeError("PolySystem is immutable")

    def normalized(self):
        return PolySystem(self.variables,
                          [eq.normalized() for eq in self.equations])

    def __eq__(self, other):
        if not isinstance(other, PolySystem):
            return NotImplemented
        return (self.variables == other.variables
                and self.equations == other.equations)


class PolyMap:
    """A polynomial map between jet coordinate spaces."""

    __slots__ = ("source_arity", "target_arity", "components")

    def __init__(self, source_arity, target_arity, components):
        components = tuple(components)
        if len(components) != target_arity:
            raise ArityMismatch(
                f"expected {target_arity} components, got {len(components)}")
        for g in components:
            if g.arity != source_arity:
                raise ArityMismatch("component arity does not match source")
        object.__setattr__(self, "source_arity", source_arity)
        object.__setattr__(self, "target_arity", target_arity)
        object.__setattr__(self, "components", components)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMap is immutable")

    def apply_coords(self, values):
        if len(values) != self.source_arity:
            raise ArityMismatch("wrong number of coordinates")
        return [g.evaluate(values) for g in self.components]

    def compose(self, other):
        if other.target_arity != self.source_arity:
            raise ArityMismatch("arities do not chain")
        one = Polynomial.const(1, other.source_arity)
        comps = [g.evaluate_in(other.components, one) for g in self.components]
        return PolyMap(other.source_arity, self.target_arity, comps)

    def normalized(self):
        return PolyMap(self.source_arity, self.target_arity,
                       [g.normalized() for g in self.components])

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return (self.source_arity == other.source_arity
                and self.target_arity == other.target_arity
                and self.components == other.components)


# -- jet coordinates ---------------------------------------------------------

def jet_monomials(d, r):
    """The graded-lex list of monomials indexing jet coordinates."""
    return graded_monomials(d, r)


def jet_variable_names(n, d, r, names=None):
    """Names of the n*ell jet coordinates, component outside, monomial inside."""
    mons = jet_monomials(d, r)
    names = names or [f"x{i + 1}" for i in range(n)]
    out = []
    for i in range(n):
        for p in mons:
            out.append("a_" + names[i] + "_" + "_".join(str(e) for e in p))
    return out


def jet_to_coords(jet):
    """Flatten a jet into its coordinate vector (component outer, monomial inner)."""
    mons = jet_monomials(jet.dims, jet.order)
    out = []
    for s in jet.series:
        for p in mons:
            out.append(s.coefficient(p))
    return out


def coords_to_jet(values, n, d, r):
    mons = jet_monomials(d, r)
    ell = len(mons)
    if len(values) != n * ell:
        raise ArityMismatch(f"expected {n * ell} coordinates, got {len(values)}")
    series = []
    for i in range(n):
        block = values[i * ell:(i + 1) * ell]
        series.append(TruncatedSeries(d, r, dict(zip(mons, block))))
    return JetPoint(series)


def generic_jet(n, d, r):
    """The jet whose coefficients are the jet coordinate variables themselves."""
    mons = jet_monomials(d, r)
    ell = len(mons)
    total = n * ell
    series = []
    for i in range(n):
        coeffs = {p: Polynomial.variable(i * ell + k, total)
                  for k, p in enumerate(mons)}
        series.append(TruncatedSeries(d, r, coeffs))
    return JetPoint(series)


def _as_polynomial(c, arity):
    if isinstance(c, Polynomial):
        return c
    return Polynomial.const(c, arity)


# -- the two construction routes ---------------------------------------------

def jet_space_equations(scheme, d, r):
    """Defining equations of the jet space, by direct substitution.

    Returns one equation per (generator, monomial) pair, generator outside
    and monomial graded-lex inside; for r = 0 the system is the original
    generators read in the jet coordinates.
    """
    mons = jet_monomials(d, r)
    total = scheme.n * len(mons)
    sigma = generic_jet(scheme.n, d, r)
    names = jet_variable_names(scheme.n, d, r, scheme.names)
    equations = []
    for f in scheme.generators:
        expansion = series_compose(f, sigma)
        for p in mons:
            equations.append(_as_polynomial(expansion.coefficient(p), total))
    return PolySystem(names, equations)


def jet_prolong(g, d, r):
    """The induced map on jet coordinates, by direct substitution.

    Applying the returned map to the coordinates of a jet agrees with
    composing each component of g with the jet and truncating; this is
    functorial in g.
    """
    mons = jet_monomials(d, r)
    source = g.n * len(mons)
    target = g.m * len(mons)
    sigma = generic_jet(g.n, d, r)
    components = []
    for gj in g.components:
        expansion = series_compose(gj, sigma)
        for p in mons:
            components.append(_as_polynomial(expansion.coefficient(p), source))
    return PolyMap(source, target, components)


def _taylor_compose(f, n, d, r, sigma):
    """Order-r Taylor expansion of f at the symbolic base point, evaluated on
    the positive-valuation offsets of the generic jet."""
    mons = jet_monomials(d, r)
    ell = len(mons)
    total = n * ell
    # the base-point symbols are the constant-monomial coordinates
    base_index = [i * ell for i in range(n)]
    offsets = sigma.offsets()
    one = TruncatedSeries.one(d, r)
    # cached powers of each offset component
    pow_cache = [[one] for _ in range(n)]
    result = TruncatedSeries.zero(d, r)
    for q in graded_monomials(n, r):
        part = f
        for i, e in enumerate(q):
            for _ in range(e):
                part = part.derivative(i)
        if part.is_zero():
            continue
        coeff = part.rename_into(total, base_index)
        qfact = 1
        for e in q:
            qfact *= math.factorial(e)
        wq = one
        for i, e in enumerate(q):
            while len(pow_cache[i]) <= e:
                pow_cache[i].append(pow_cache[i][-1] * offsets[i])
            if e:
                wq = wq * pow_cache[i][e]
        result = result + wq.scale(coeff * Fraction(1, qfact))
    return result


def jet_space_equations_universal(scheme, d, r):
    """Same contract as jet_space_equations, via the Taylor-expansion route."""
    mons = jet_monomials(d, r)
    total = scheme.n * len(mons)
    sigma = generic_jet(scheme.n, d, r)
    names = jet_variable_names(scheme.n, d, r, scheme.names)
    equations = []
    for f in scheme.generators:
        expansion = _taylor_compose(f, scheme.n, d, r, sigma)
        for p in mons:
            equations.append(_as_polynomial(expansion.coefficient(p), total))
    return PolySystem(names, equations)


def jet_prolong_universal(g, d, r):
    """Same contract as jet_prolong, via the Taylor-expansion route."""
    mons = jet_monomials(d, r)
    source = g.n * len(mons)
    target = g.m * len(mons)
    sigma = generic_jet(g.n, d, r)
    components = []
    for gj in g.components:
        expansion = _taylor_compose(gj, g.n, d, r, sigma)
        for p in mons:
            components.append(_as_polynomial(expansion.coefficient(p), source))
    return PolyMap(source, target, components)


def apply_prolonged(pmap, jet, m):
    """Apply a prolonged map to a jet, returning the image jet."""
    values = pmap.apply_coords(jet_to_coords(jet))
    return coords_to_jet(values, m, jet.dims, jet.order)


# -- membership and non-degeneracy -------------------------------------------

def jet_membership(scheme, jet):
    """Whether every generator vanishes identically on the jet."""
    if jet.n != scheme.n:
        raise ArityMismatch(
            f"jet with {jet.n} components on a scheme in dimension {scheme.n}")
    return all(series_compose(f, jet).is_zero() for f in scheme.generators)


def tangent_rows(jet):
    """The d x n matrix of degree-one coefficients of a jet."""
    rows = []
    for a in range(jet.dims):
        unit = tuple(1 if i == a else 0 for i in range(jet.dims))
        rows.append([s.coefficient(unit) for s in jet.series])
    return rows


def is_nondegenerate(jet):
    """Whether the d induced tangent vectors are linearly independent."""
    if jet.order < 1:
        raise OrderTooLow("non-degeneracy needs order at least 1")
    return linalg.rank(tangent_rows(jet)) == jet.dims


def is_compatible(jet_hi, jet_lo):
    """Whether the higher-order jet restricts exactly to the lower one."""
    if jet_hi.dims != jet_lo.dims or jet_hi.n != jet_lo.n:
        raise ArityMismatch("jets live on different spaces")
    if jet_hi.order < jet_lo.order:
        raise OrderMismatch(
            f"first jet has order {jet_hi.order} < {jet_lo.order}")
    return jet_hi.restrict(jet_lo.order) == jet_lo


# -- dimension witnesses ------------------------------------------------------

@dataclass
class WitnessReport:
    """Per-order record of non-degenerate jets found above a point.

    A found witness at every order up to r_max is evidence (not proof) that
    the scheme has dimension at least d at the point; absence of a witness
    is never a negative certificate.
    """

    d: int
    r_max: int
    tangent_dim: int
    witnesses: dict = field(default_factory=dict)

    def found_through(self):
        r = 0
        while r + 1 <= self.r_max and self.witnesses.get(r + 1) is not None:
            r += 1
        return r


def _jacobian_at(scheme, point):
    return [[g.derivative(i).evaluate(point) for i in range(scheme.n)]
            for g in scheme.generators]


def _lift_once(scheme, jet):
    """Extend a jet on the scheme by one order, solving the linear top-degree
    conditions; returns the lifted jet or None if the system is inconsistent."""
    d, r = jet.dims, jet.order
    lifted = jet.zero_extended(r + 1)
    jac = _jacobian_at(scheme, jet.basepoint())
    top_monomials = [p for p in jet_monomials(d, r + 1) if sum(p) == r + 1]
    residuals = [series_compose(f, lifted) for f in scheme.generators]
    corrections = [dict() for _ in range(scheme.n)]
    for mu in top_monomials:
        if not scheme.generators:
            continue
        rhs = [-res.coefficient(mu) for res in residuals]
        sol = linalg.solve(jac, rhs)
        if sol is None:
            return None
        for i, v in enumerate(sol):
            if v:
                corrections[i][mu] = v
    series = [s + TruncatedSeries(d, r + 1, corrections[i])
              for i, s in enumerate(lifted.series)]
    return JetPoint(series)


def _prolong_parametrization(param, d, r, point):
    """Jet of a rational parametrization (n rational functions of d formal
    variables, regular at 0 with value `point`)."""
    disk = JetPoint([TruncatedSeries.variable(a, d, r) for a in range(d)])
    series = []
    for i, rf in enumerate(param):
        s = rf.eval_on_jet(disk)
        if s.constant_term() != point[i]:
            return None
        series.append(s)
    return JetPoint(series)


def dimension_witness(scheme, point, d, r_max, parametrizations=(), rng=None,
                      attempts=0):
    """Search for non-degenerate jets on the scheme above a point.

    Deterministic-first: supplied parametrizations are prolonged exactly,
    and tangent vectors from the Jacobian kernel are lifted order by order
    through the linear top-degree conditions.  An optional seeded random
    search perturbs the lift by kernel elements.  The report never claims a
    negative certificate.
    """
    point = tuple(Fraction(v) for v in point)
    if not scheme.contains_point(point):
        raise BasepointNotOnScheme(f"{point} does not satisfy the generators")
    kernel = linalg.kernel_basis(_jacobian_at(scheme, point)) if scheme.generators \
        else [[Fraction(1 if j == i else 0) for j in range(scheme.n)]
              for i in range(scheme.n)]
    report = WitnessReport(d=d, r_max=r_max, tangent_dim=len(kernel))
    rng = rng or random.Random(0)

    def tangent_candidates():
        if len(kernel) < d:
            return
        yield kernel[:d]
        for _ in range(attempts):
            mix = [[sum((Fraction(rng.randint(-3, 3)) * kernel[b][i]
                         for b in range(len(kernel))), Fraction(0))
                    for i in range(scheme.n)]
                   for _ in range(d)]
            yield mix

    for r in range(1, r_max + 1):
        found = None
        for param in parametrizations:
            jet = _prolong_parametrization(param, d, r, point)
            if jet is not None and jet_membership(scheme, jet) \
                    and is_nondegenerate(jet):
                found = jet
                break
        if found is None:
            for vectors in tangent_candidates():
                base = JetPoint([
                    TruncatedSeries(d, 1, {
                        (0,) * d: point[i],
                        **{tuple(1 if b == a else 0 for b in range(d)):
                           vectors[a][i] for a in range(d)},
                    }) for i in range(scheme.n)])
                if not is_nondegenerate(base):
                    continue
                jet = base
                while jet is not None and jet.order < r:
                    jet = _lift_once(scheme, jet)
                if jet is not None:
                    found = jet
                    break
        report.witnesses[r] = found
    return report
