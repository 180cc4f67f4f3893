"""Built-in worked connections.

The centrepiece is the rank-two chart of the Legendre elliptic family
y^2 = x(x-1)(x-lambda) in the frame {dx/y, x dx/y}, whose period
coordinates satisfy the classical second-order equation

    t(1-t) y'' + (1-2t) y' - y/4 = 0.

The matrix entries are not taken on faith: the test suite recovers that
scalar equation from the chart by symbolic elimination, checks the pole
locus and checks that the frame pairing is parallel.  A second, independent
oracle solves the scalar equation recursively at an ordinary rational point
with symbolic initial data, which keeps every end-to-end comparison in exact
arithmetic.  Two small synthetic charts round out the fixtures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .connection import ConnectionChart, MatrixJet
from .errors import SingularPoint
from .poly import Polynomial
from .ratfunc import RationalFunction
from .series import TruncatedSeries


def _p(coeff_by_degree):
    """Univariate polynomial from {degree: coefficient}."""
    return Polynomial(1, {(d,): c for d, c in coeff_by_degree.items()})


def _rf(num, den=None):
    return RationalFunction(_p(num), _p(den) if den is not None else None)


def legendre_chart():
    """Rank-two chart of the Legendre family in the frame {dx/y, x dx/y}.

    One base coordinate (the family parameter), weight one, filtration
    dims (2, 1), standard symplectic lattice form; the coefficient
    denominators vanish exactly at 0 and 1.
    """
    # first frame vector: d v1 = c11 v1 + c12 v2, and so on
    c11 = _rf({0: -1}, {1: 2, 0: -2})          # -1 / (2(t - 1))
    c12 = _rf({0: 1}, {2: 2, 1: -2})           # 1 / (2 t (t - 1))
    c21 = _rf({0: -1}, {1: 2, 0: -2})          # -1 / (2(t - 1))
    c22 = _rf({0: 1}, {1: 2, 0: -2})           # 1 / (2(t - 1))
    coeffs = [[[c11], [c12]], [[c21], [c22]]]
    gram = [[_rf({}), _rf({0: 4})],
            [_rf({0: -4}), _rf({})]]
    return ConnectionChart(
        n=1, m=2, coeffs=coeffs, weight=1, filtration_dims=(2, 1),
        gram=gram, polarization=[[0, 1], [-1, 0]], variables=("lambda",))


def legendre_scalar_coefficients():
    """Coefficients (p2, p1, p0) of p2 y'' + p1 y' + p0 y = 0 satisfied by
    the period coordinates of the Legendre chart."""
    return (_p({1: 1, 2: -1}),       # t (1 - t)
            _p({0: 1, 1: -2}),       # 1 - 2 t
            Polynomial(1, {(0,): Fraction(-1, 4)}))


def gauss_series_coefficients(count):
    """The first `count` Taylor coefficients at 0 of the period series:
    ((1/2)(3/2)...(2k-1)/2 / k!)^2 for k = 0..count-1, exactly."""
    out = []
    c = Fraction(1)
    for k in range(count):
        out.append(c * c)
        c = c * Fraction(2 * k + 1, 2 * (k + 1))
    return out


def hypergeometric_jet(lambda0, order):
    """Order-r jet at an ordinary point of the general solution of the
    Legendre scalar equation, symbolic in the initial data.

    The coefficients are polynomials in two symbols (the value and the first
    derivative at lambda0); re-expanding the classical series at a rational
    interior point is not a finite computation, so the jet is generated by
    the coefficient recursion of the equation instead.  The result is linear
    in the two symbols with exact rational coefficients.
    """
    lambda0 = Fraction(lambda0)
    if lambda0 in (0, 1):
        raise SingularPoint("the scalar equation is singular at 0 and 1")
    y0 = Polynomial.variable(0, 2)
    y1 = Polynomial.variable(1, 2)
    # shifted coefficients: a(t) y'' + b(t) y' + c y with t centred at lambda0
    a0 = lambda0 * (1 - lambda0)
    a1 = 1 - 2 * lambda0
    a2 = Fraction(-1)
    b0 = 1 - 2 * lambda0
    b1 = Fraction(-2)
    c = Fraction(-1, 4)
    coeffs = [y0, y1]
    for s in range(order - 1):
        lead = a0 * (s + 1) * (s + 2)
        term = (coeffs[s + 1] * (a1 * s * (s + 1) + b0 * (s + 1))
                + coeffs[s] * (a2 * s * (s - 1) + b1 * s + c))
        coeffs.append(term * (Fraction(-1) / lead))
    table = {(k,): coeffs[k] for k in range(order + 1) if coeffs[k]}
    return TruncatedSeries(1, order, table)


def exponential_chart():
    """Rank-one chart with unit coefficient: flat frames are multiples of
    the decaying exponential, so order-r jets have coefficients
    (-1)^k / k! times the initial value."""
    coeffs = [[[_rf({0: 1})]]]
    gram = [[_rf({0: 1})]]
    return ConnectionChart(n=1, m=1, coeffs=coeffs, weight=0,
                           filtration_dims=(1,), gram=gram,
                           polarization=[[1]], variables=("z",))


def exponential_reference(sigma, initial):
    """Closed-form frame jet for the exponential chart along any sigma."""
    w = sigma.offsets()[0]
    acc = TruncatedSeries.one(sigma.dims, sigma.order)
    power = TruncatedSeries.one(sigma.dims, sigma.order)
    for k in range(1, sigma.order + 1):
        power = power * w
        acc = acc + power.scale(Fraction((-1) ** k, math.factorial(k)))
    return MatrixJet([[acc.scale(initial[0][0])]])


def nilpotent_chart():
    """Rank-two chart with constant nilpotent coefficient; flat frames are
    polynomial in the base coordinate, so every jet is exact closed form."""
    z = _rf({})
    coeffs = [[[z], [_rf({0: 1})]], [[z], [z]]]
    gram = [[z, _rf({0: 1})], [_rf({0: -1}), z]]
    return ConnectionChart(n=1, m=2, coeffs=coeffs, weight=1,
                           filtration_dims=(2, 1), gram=gram,
                           polarization=[[0, 1], [-1, 0]], variables=("z",))


def nilpotent_reference(sigma, initial):
    """Closed-form frame jet for the nilpotent chart: (I + A w) M with
    A the constant multiplier of the system."""
    w = sigma.offsets()[0]
    d, r = sigma.dims, sigma.order
    zero = TruncatedSeries.zero(d, r)
    one = TruncatedSeries.one(d, r)
    # A = -C^T for C = [[0, 1], [0, 0]]
    expw = [[one, zero], [-w, one]]
    rows = []
    for j in range(2):
        row = []
        for k in range(2):
            acc = zero
            for i in range(2):
                acc = acc + expw[j][i].scale(initial[i][k])
            row.append(acc)
        rows.append(row)
    return MatrixJet(rows)


@dataclass(frozen=True)
class NamedExample:
    """A worked connection with safe base points and an optional closed form."""

    name: str
    chart: ConnectionChart
    basepoints: tuple
    reference: object = None
    description: str = ""


def builtin_examples():
    return {
        "legendre": NamedExample(
            name="legendre",
            chart=legendre_chart(),
            basepoints=(Fraction(1, 2), Fraction(1, 4), Fraction(2)),
            description="rank-two chart of the Legendre elliptic family"),
        "exponential": NamedExample(
            name="exponential",
            chart=exponential_chart(),
            basepoints=(Fraction(0), Fraction(1), Fraction(-3, 2)),
            reference=exponential_reference,
            description="rank-one chart with exponential flat frames"),
        "nilpotent": NamedExample(
            name="nilpotent",
            chart=nilpotent_chart(),
            basepoints=(Fraction(0), Fraction(5, 3)),
            reference=nilpotent_reference,
            description="rank-two constant-coefficient nilpotent chart"),
    }
