"""Jets of flat frames of a connection on an affine chart.

A chart stores the connection coefficients c[i][j][l] of a frame v^i (the
dz_l component of the 1-form acting on v^i with output coefficient on v^j),
a Gram matrix of the frame pairing, and the constant integer polarization
form of the reference lattice.  Flat frames b^k = sum_i f_ik v^i satisfy the
linear system

    d/dz_l f_jk = - sum_i f_ik c[i][j][l]

and two independent evaluators compute the order-r jet of f along a base
jet sigma with initial matrix M:

* `beta` expresses every iterated partial of f as a universal linear form
  in the entries of f (the xi table) and assembles the Taylor composition;
* `series_oracle` pulls the system back along sigma and solves the truncated
  equations degree by degree.

They share only the series ring, so their exact agreement is a genuine
cross-check.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import linalg
from .errors import (ArityMismatch, DimensionMismatch, SingularInitial,
                     SingularPoint)
from .poly import graded_monomials
from .ratfunc import RationalFunction
from .series import TruncatedSeries


class ConnectionChart:
    """Connection data on one affine chart with coordinates z_1..z_n."""

    __slots__ = ("n", "m", "coeffs", "weight", "filtration_dims", "gram",
                 "polarization", "variables", "_a_matrices")

    def __init__(self, n, m, coeffs, weight, filtration_dims, gram,
                 polarization, variables=None):
        if len(coeffs) != m or any(len(row) != m for row in coeffs):
            raise ArityMismatch("connection coefficient array is not m x m")
        for row in coeffs:
            for entry in row:
                if len(entry) != n:
                    raise ArityMismatch(
                        "each coefficient needs one component per coordinate")
                for rf in entry:
                    if rf.arity != n:
                        raise ArityMismatch(
                            "coefficient arity does not match the chart")
        filtration_dims = tuple(filtration_dims)
        if not filtration_dims or filtration_dims[0] != m:
            raise ValueError("filtration dims must start at the frame size")
        if any(a <= b for a, b in zip(filtration_dims, filtration_dims[1:])):
            raise ValueError("filtration dims must be strictly decreasing")
        if len(polarization) != m or any(len(r) != m for r in polarization):
            raise ArityMismatch("polarization must be m x m")
        sign = -1 if weight % 2 else 1
        for i in range(m):
            for k in range(m):
                if polarization[i][k] != sign * polarization[k][i]:
                    raise ValueError(
                        "polarization does not have the symmetry of the weight")
        if linalg.det([[Fraction(x) for x in row] for row in polarization]) == 0:
            raise ValueError("polarization is degenerate")
        if len(gram) != m or any(len(r) != m for r in gram):
            raise ArityMismatch("gram must be m x m")
        for i in range(m):
            for k in range(m):
                if gram[i][k].arity != n:
                    raise ArityMismatch("gram arity does not match the chart")
                if not (gram[i][k] == gram[k][i] * Fraction(sign)):
                    raise ValueError(
                        "gram does not have the symmetry of the weight")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs",
                           tuple(tuple(tuple(e) for e in row) for row in coeffs))
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "filtration_dims", filtration_dims)
        object.__setattr__(self, "gram", tuple(tuple(row) for row in gram))
        object.__setattr__(self, "polarization",
                           tuple(tuple(int(x) for x in row)
                                 for row in polarization))
        object.__setattr__(self, "variables", tuple(variables) if variables
                           else tuple(f"z{i + 1}" for i in range(n)))
        # the solver works with A_l = - C_l^T acting on the left of f
        a_mats = []
        for l in range(n):
            a_mats.append(tuple(tuple(-self.coeffs[i][j][l]
                                      for i in range(m)) for j in range(m)))
        object.__setattr__(self, "_a_matrices", tuple(a_mats))

    def __setattr__(self, name, value):
        raise AttributeError("ConnectionChart is immutable")

    def c(self, i, j, l):
        return self.coeffs[i][j][l]

    def a_matrix(self, l):
        """The left-multiplier matrix of the flat-frame system for d/dz_l."""
        return [list(row) for row in self._a_matrices[l]]

    def c_matrix(self, l):
        return [[self.coeffs[i][j][l] for j in range(self.m)]
                for i in range(self.m)]

    def assert_regular(self, point):
        """Raise SingularPoint if any chart denominator vanishes at the point."""
        point = tuple(point)
        if len(point) != self.n:
            raise ArityMismatch("point dimension does not match the chart")
        shown = "(" + ", ".join(str(x) for x in point) + ")"
        for row in self.coeffs:
            for entry in row:
                for rf in entry:
                    if rf.den.evaluate(point) == 0:
                        raise SingularPoint(
                            f"connection coefficient has a pole at {shown}")
        for row in self.gram:
            for rf in row:
                if rf.den.evaluate(point) == 0:
                    raise SingularPoint(f"gram has a pole at {shown}")

    def gram_at(self, point):
        return [[rf.evaluate(point) for rf in row] for row in self.gram]

    def pairing_is_flat(self):
        """Whether the frame pairing is parallel for the connection."""
        g = [list(row) for row in self.gram]
        for l in range(self.n):
            cl = self.c_matrix(l)
            dg = [[rf.derivative(l) for rf in row] for row in g]
            rhs = linalg.mat_add(linalg.mat_mul(cl, g),
                                 linalg.mat_mul(g, linalg.transpose(cl)))
            if not linalg.mat_eq(dg, rhs):
                return False
        return True

    def is_integrable(self):
        """Mixed-partial consistency of the flat-frame system."""
        for a in range(self.n):
            for b in range(a + 1, self.n):
                aa, ab = self.a_matrix(a), self.a_matrix(b)
                left = linalg.mat_add(
                    [[rf.derivative(a) for rf in row] for row in ab],
                    linalg.mat_mul(ab, aa))
                right = linalg.mat_add(
                    [[rf.derivative(b) for rf in row] for row in aa],
                    linalg.mat_mul(aa, ab))
                if not linalg.mat_eq(left, right):
                    return False
        return True


class MatrixJet:
    """A square matrix of truncated series with invertible constant term."""

    __slots__ = ("entries",)

    def __init__(self, entries, require_invertible=True):
        entries = tuple(tuple(row) for row in entries)
        m = len(entries)
        if any(len(row) != m for row in entries):
            raise ArityMismatch("matrix jet must be square")
        d, r = entries[0][0].dims, entries[0][0].order
        for row in entries:
            for s in row:
                if s.dims != d or s.order != r:
                    raise DimensionMismatch(
                        "matrix jet entries must share (dims, order)")
        if require_invertible:
            c = [[s.constant_term() for s in row] for row in entries]
            if not linalg.det(c):
                raise SingularInitial("constant term matrix is singular")
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixJet is immutable")

    @property
    def m(self):
        return len(self.entries)

    @property
    def dims(self):
        return self.entries[0][0].dims

    @property
    def order(self):
        return self.entries[0][0].order

    @classmethod
    def from_constant(cls, matrix, dims, order, require_invertible=True):
        return cls([[TruncatedSeries.const(x, dims, order) for x in row]
                    for row in matrix], require_invertible)

    @classmethod
    def identity(cls, m, dims, order):
        return cls.from_constant(linalg.identity(m), dims, order)

    def entry(self, j, k):
        return self.entries[j][k]

    def constant_matrix(self):
        return [[s.constant_term() for s in row] for row in self.entries]

    def transpose(self):
        return MatrixJet(tuple(zip(*self.entries)), require_invertible=False)

    def restrict(self, new_order):
        return MatrixJet([[s.restrict(new_order) for s in row]
                          for row in self.entries], require_invertible=False)

    def __add__(self, other):
        return MatrixJet([[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)],
                         require_invertible=False)

    def __sub__(self, other):
        return MatrixJet([[a - b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)],
                         require_invertible=False)

    def __mul__(self, other):
        """Product with another matrix jet or a constant matrix on the right."""
        if isinstance(other, MatrixJet):
            other = other.entries
        if isinstance(other, (list, tuple)) and other and \
                isinstance(other[0][0], TruncatedSeries):
            return MatrixJet(linalg.mat_mul(self.entries, other),
                             require_invertible=False)
        d, r = self.dims, self.order
        rows = []
        for row in self.entries:
            out = []
            for k in range(len(other[0])):
                acc = TruncatedSeries.zero(d, r)
                for i, s in enumerate(row):
                    acc = acc + s.scale(other[i][k])
                out.append(acc)
            rows.append(out)
        return MatrixJet(rows, require_invertible=False)

    def left_mul(self, matrix):
        """Product with a constant matrix on the left."""
        d, r = self.dims, self.order
        rows = []
        for j in range(len(matrix)):
            out = []
            for k in range(self.m):
                acc = TruncatedSeries.zero(d, r)
                for i in range(self.m):
                    acc = acc + self.entries[i][k].scale(matrix[j][i])
                out.append(acc)
            rows.append(out)
        return MatrixJet(rows, require_invertible=False)

    def is_zero(self):
        return all(s.is_zero() for row in self.entries for s in row)

    def __eq__(self, other):
        if not isinstance(other, MatrixJet):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return f"MatrixJet({[[s.to_string() for s in row] for row in self.entries]})"


def invert_series_matrix(entries):
    """Inverse of a square series matrix with invertible rational constant term.

    Writes the matrix as M0 (I + N) with N of positive valuation; the inverse
    is the finite Neumann sum over powers of -N times the inverse of M0.
    """
    m = len(entries)
    d, r = entries[0][0].dims, entries[0][0].order
    const = [[s.constant_term() for s in row] for row in entries]
    for row in const:
        for x in row:
            if not isinstance(x, (int, Fraction)):
                raise SingularInitial(
                    "series matrix inversion needs rational constant terms")
    try:
        inv0 = linalg.invert(const)
    except ValueError:
        raise SingularInitial("constant term matrix is singular") from None
    jet = MatrixJet(entries, require_invertible=False)
    nilpotent = jet.left_mul(inv0) - MatrixJet.identity(m, d, r)
    negated = MatrixJet([[-s for s in row] for row in nilpotent.entries],
                        require_invertible=False)
    total = MatrixJet.identity(m, d, r)
    power = MatrixJet.identity(m, d, r)
    for _ in range(r):
        power = power * negated
        if power.is_zero():
            break
        total = total + power
    return (total * inv0).entries


def matrixjet_invert(jet):
    """Multiplicative inverse of a matrix jet, exact at its order."""
    return MatrixJet(invert_series_matrix(jet.entries))


class XiTable:
    """Universal linear forms for the iterated partials of flat frames.

    For every derivative multi-degree q with |q| <= order, `gamma(q)` is the
    matrix G_q of rational functions with d_q f = G_q f for every solution f;
    the base case is the identity and each step applies the product rule and
    substitutes the first-order system.  Since the system is linear, every
    table entry is linear in the frame entries, and the coefficient of f_ik
    in the form for d_q f_jk is G_q[j][i], independent of the column k.
    Mixed partials are keyed by their sorted multi-degree; the word-order
    independence this assumes holds exactly for integrable systems and is
    spot-checked in the test suite.
    """

    __slots__ = ("chart", "order", "table")

    def __init__(self, chart, order, table):
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "table", table)

    def __setattr__(self, name, value):
        raise AttributeError("XiTable is immutable")

    def gamma(self, q):
        return self.table[tuple(q)]

    def entry(self, q, j, k):
        """The linear form for d_q f_jk as {(i, k): coefficient}."""
        row = self.table[tuple(q)][j]
        return {(i, k): row[i] for i in range(self.chart.m) if row[i]}

    def gamma_at(self, q, point):
        return [[rf.evaluate(point) for rf in row] for row in self.table[tuple(q)]]


def build_xi(chart, order):
    """Build the table of derivative forms for all multi-degrees up to order."""
    m, n = chart.m, chart.n
    one = RationalFunction.one(n)
    zero = RationalFunction.zero(n)
    table = {(0,) * n: [[one if i == j else zero for i in range(m)]
                        for j in range(m)]}
    for q in graded_monomials(n, order):
        if sum(q) == 0:
            continue
        l = next(i for i, e in enumerate(q) if e)
        prev = tuple(e - 1 if i == l else e for i, e in enumerate(q))
        gamma_prev = table[prev]
        derived = [[rf.derivative(l) for rf in row] for row in gamma_prev]
        table[tuple(q)] = linalg.mat_add(
            derived, linalg.mat_mul(gamma_prev, chart.a_matrix(l)))
    return XiTable(chart, order, table)


def word_gamma(chart, word):
    """The derivative form along an explicit word of partials.

    Used to guard the sorted-multi-degree keying of the table: for charts
    whose system is integrable the result depends only on the multi-degree.
    """
    m, n = chart.m, chart.n
    one = RationalFunction.one(n)
    zero = RationalFunction.zero(n)
    gamma = [[one if i == j else zero for i in range(m)] for j in range(m)]
    for l in word:
        derived = [[rf.derivative(l) for rf in row] for row in gamma]
        gamma = linalg.mat_add(derived,
                               linalg.mat_mul(gamma, chart.a_matrix(l)))
    return gamma


def _check_initial(matrix, m):
    if len(matrix) != m or any(len(row) != m for row in matrix):
        raise ArityMismatch("initial matrix has the wrong size")
    if not linalg.det(matrix):
        raise SingularInitial("initial matrix is singular")


def beta(chart, sigma, initial, table=None):
    """Order-r jet of the flat frame along sigma with value `initial` at the
    base point, assembled from the xi table.

    The result equals the jet of the unique local solution of the flat-frame
    system through (base point, initial); its constant term is `initial`.
    Entries of `initial` may be polynomials (the map is linear in them), as
    long as the determinant is not identically zero.
    """
    if sigma.n != chart.n:
        raise ArityMismatch("jet does not live on the chart")
    _check_initial(initial, chart.m)
    s = sigma.basepoint()
    chart.assert_regular(s)
    d, r = sigma.dims, sigma.order
    if table is None or table.order < r or table.chart is not chart:
        table = build_xi(chart, r)
    offsets = sigma.offsets()
    one = TruncatedSeries.one(d, r)
    pow_cache = [[one] for _ in range(chart.n)]
    acc = [[TruncatedSeries.zero(d, r) for _ in range(chart.m)]
           for _ in range(chart.m)]
    for q in graded_monomials(chart.n, r):
        wq = one
        for i, e in enumerate(q):
            while len(pow_cache[i]) <= e:
                pow_cache[i].append(pow_cache[i][-1] * offsets[i])
            if e:
                wq = wq * pow_cache[i][e]
        if wq.is_zero():
            continue
        qfact = 1
        for e in q:
            qfact *= math.factorial(e)
        coeff = linalg.mat_mul(table.gamma_at(q, s), initial)
        inv_fact = Fraction(1, qfact)
        for j in range(chart.m):
            for k in range(chart.m):
                c = coeff[j][k]
                if c:
                    acc[j][k] = acc[j][k] + wq.scale(c * inv_fact)
    return MatrixJet(acc)


def series_oracle(chart, sigma, initial, require_invertible=True):
    """Same contract as `beta`, computed by pulling the system back along
    sigma and solving the truncated equations degree by degree.

    Shares no code with the xi-table route beyond the series ring.  With
    `require_invertible=False` the recursion extends linearly to singular
    initial matrices.
    """
    if sigma.n != chart.n:
        raise ArityMismatch("jet does not live on the chart")
    if len(initial) != chart.m or any(len(row) != chart.m for row in initial):
        raise ArityMismatch("initial matrix has the wrong size")
    if require_invertible and not linalg.det(initial):
        raise SingularInitial("initial matrix is singular")
    s = sigma.basepoint()
    chart.assert_regular(s)
    d, r = sigma.dims, sigma.order
    m = chart.m
    # pulled-back multipliers: dF/dt_a = G_a F with
    # G_a = sum_l (d sigma_l / d t_a) (A_l along sigma)
    pulled = []
    for a in range(d):
        g = [[TruncatedSeries.zero(d, r) for _ in range(m)] for _ in range(m)]
        for l in range(chart.n):
            ds = sigma.series[l].derive(a)
            if ds.is_zero():
                continue
            amat = chart.a_matrix(l)
            for j in range(m):
                for i in range(m):
                    if amat[j][i]:
                        g[j][i] = g[j][i] + amat[j][i].eval_on_jet(sigma) * ds
        pulled.append(g)
    parts = [[{(0,) * d: initial[j][k]} if initial[j][k] else {}
              for k in range(m)] for j in range(m)]
    for degree in range(1, r + 1):
        current = [[TruncatedSeries(d, r, parts[j][k]) for k in range(m)]
                   for j in range(m)]
        inv_deg = Fraction(1, degree)
        for a in range(d):
            prod = linalg.mat_mul(pulled[a], current)
            for j in range(m):
                for k in range(m):
                    for p, c in prod[j][k].homogeneous(degree - 1).items():
                        shifted = tuple(e + 1 if i == a else e
                                        for i, e in enumerate(p))
                        prev = parts[j][k].get(shifted)
                        val = c * inv_deg
                        parts[j][k][shifted] = prev + val if prev is not None \
                            else val
    entries = [[TruncatedSeries(d, r, parts[j][k]) for k in range(m)]
               for j in range(m)]
    return MatrixJet(entries, require_invertible=require_invertible)


def check_right_equivariance(chart, sigma, initial, action, table=None):
    """Whether the frame jet of initial*A equals the frame jet of initial
    times A, exactly at the jet order."""
    if not linalg.det(action):
        raise SingularInitial("the acting matrix is singular")
    if table is None:
        table = build_xi(chart, sigma.order)
    moved = linalg.mat_mul(initial, action)
    left = beta(chart, sigma, moved, table=table)
    right = beta(chart, sigma, initial, table=table) * action
    return left == right


def check_flatness(chart, sigma, frame_jet):
    """Whether a frame jet satisfies the pulled-back system at order r - 1.

    Checks, for every jet variable t_a, that the t_a-derivative of each entry
    plus the pairing against the pulled-back connection forms vanishes one
    order below the jet order (derivatives lose the top degree).
    """
    d, r = sigma.dims, sigma.order
    if r == 0:
        return True
    m = chart.m
    pullback = [[[None] * d for _ in range(m)] for _ in range(m)]
    dsigma = [[sigma.series[l].derive(a) for a in range(d)]
              for l in range(chart.n)]
    for i in range(m):
        for j in range(m):
            for a in range(d):
                acc = TruncatedSeries.zero(d, r)
                for l in range(chart.n):
                    rf = chart.coeffs[i][j][l]
                    if rf:
                        acc = acc + rf.eval_on_jet(sigma) * dsigma[l][a]
                pullback[i][j][a] = acc
    for a in range(d):
        for j in range(m):
            for k in range(m):
                lhs = frame_jet.entry(j, k).derive(a)
                for i in range(m):
                    lhs = lhs + frame_jet.entry(i, k) * pullback[i][j][a]
                if not lhs.restrict(r - 1).is_zero():
                    return False
    return True


def period_system(chart):
    """The companion chart whose flat frames are the inverse transposes of
    the original chart's flat frames.

    Solutions of the returned system are the coefficient functions expressing
    the original frame in a flat basis (period coordinates).  The pairing
    data is the induced dual pairing, with the lattice form scaled to a
    primitive integer matrix; filtration dims are carried over unchanged and
    the companion is intended for flat-frame computations.
    """
    m, n = chart.m, chart.n
    coeffs = [[[-chart.coeffs[j][i][l] for l in range(n)]
               for j in range(m)] for i in range(m)]
    gram_inv_t = linalg.transpose(_ratfunc_invert([list(r) for r in chart.gram]))
    adj = _integer_adjugate(chart.polarization)
    return ConnectionChart(n, m, coeffs, chart.weight, chart.filtration_dims,
                           gram_inv_t, adj, chart.variables)


def _ratfunc_invert(g):
    """Inverse of a square matrix of rational functions (Gauss-Jordan)."""
    m = len(g)
    arity = g[0][0].arity
    one = RationalFunction.one(arity)
    zero = RationalFunction.zero(arity)
    work = [list(row) + [one if i == j else zero for j in range(m)]
            for i, row in enumerate(g)]
    for col in range(m):
        pivot = next((i for i in range(col, m) if work[i][col]), None)
        if pivot is None:
            raise ValueError("matrix of rational functions is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = one / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for i in range(m):
            if i != col and work[i][col]:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[col])]
    return [row[m:] for row in work]


def _integer_adjugate(q):
    m = len(q)
    fr = [[Fraction(x) for x in row] for row in q]
    adj = []
    for i in range(m):
        row = []
        for j in range(m):
            minor = [r[:i] + r[i + 1:] for k, r in enumerate(fr) if k != j]
            cof = linalg.det(minor) if minor else Fraction(1)
            row.append(cof if (i + j) % 2 == 0 else -cof)
        adj.append(row)
    g = 0
    for row in adj:
        for x in row:
            g = math.gcd(g, int(x))
    g = g or 1
    return [[int(x) // g for x in row] for row in adj]


def scalar_ode(chart):
    """Eliminate one entry of the rank-2 system on a one-dimensional chart.

    Returns the primitive integer coefficient polynomials (p2, p1, p0) of the
    scalar equation p2 y'' + p1 y' + p0 y = 0 satisfied by the period
    coordinates (the first row of the inverse of any flat frame); the leading
    coefficient of p2 is positive.
    """
    if chart.m != 2 or chart.n != 1:
        raise ArityMismatch("scalar elimination needs m = 2, n = 1")
    c11 = chart.coeffs[0][0][0]
    c12 = chart.coeffs[0][1][0]
    c21 = chart.coeffs[1][0][0]
    c22 = chart.coeffs[1][1][0]
    if not c12:
        raise ValueError("the system does not couple the two entries")
    logd = c12.derivative(0) / c12
    p2 = RationalFunction.one(1)
    p1 = -(c11 + c22 + logd)
    p0 = c11 * c22 - c12 * c21 - c11.derivative(0) + c11 * logd
    return normalize_poly_triple(p2, p1, p0)


def normalize_poly_triple(p2, p1, p0):
    """Clear denominators of three rational functions in one variable and
    return primitive integer polynomials with p2's leading coefficient
    positive."""
    from .ratfunc import _univ_divmod, _univ_gcd

    dens = [p.den for p in (p2, p1, p0)]
    lcm = dens[0]
    for dpoly in dens[1:]:
        g = _univ_gcd(lcm, dpoly)
        lcm = _univ_divmod(lcm * dpoly, g)[0]
    polys = []
    for p in (p2, p1, p0):
        factor = _univ_divmod(lcm, p.den)[0]
        polys.append(p.num * factor)
    denlcm = 1
    for poly in polys:
        for c in poly.terms.values():
            denlcm = denlcm * c.denominator // math.gcd(denlcm, c.denominator)
    g = 0
    for poly in polys:
        for c in poly.terms.values():
            g = math.gcd(g, int(c * denlcm))
    g = g or 1
    scale = Fraction(denlcm, g)
    polys = [poly * scale for poly in polys]
    if polys[0] and polys[0].leading()[1] < 0:
        polys = [-poly for poly in polys]
    return tuple(polys)
