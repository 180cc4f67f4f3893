"""Flag-variety charts, jets of local period maps and the polarization torsor.

A flag with prescribed step dimensions is represented on an affine chart by
nested pivot row sets and the non-pivot entries of a column-echelon
representative; a matrix (or matrix jet) is sent to the flag spanned by the
leading columns of each step.  On top of this sit:

* the first-relation check on polarized flags (pairings between
  complementary filtration steps vanish);
* the torsor condition M^T Gram(s) M = Q tying frame changes to the lattice
  polarization;
* `alpha`, the jet of the local period map: the flag of the inverse of the
  flat-frame jet; and
* `eta_chartlocal`, which picks a canonical rational torsor point over the
  base point (when one exists) and returns it with the associated flag jet.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import linalg
from .congruence import solve_congruence
from .connection import (MatrixJet, beta, invert_series_matrix,
                         matrixjet_invert)
from .errors import ArityMismatch, NoRationalFvPoint, NoValidChart
from .series import TruncatedSeries


class HodgeData:
    """Frame size, weight, filtration step dimensions and lattice form."""

    __slots__ = ("m", "weight", "filtration_dims", "polarization")

    def __init__(self, m, weight, filtration_dims, polarization):
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
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "filtration_dims", filtration_dims)
        object.__setattr__(self, "polarization",
                           tuple(tuple(int(x) for x in row)
                                 for row in polarization))

    def __setattr__(self, name, value):
        raise AttributeError("HodgeData is immutable")

    @classmethod
    def of_chart(cls, chart):
        return cls(chart.m, chart.weight, chart.filtration_dims,
                   chart.polarization)

    def step_sizes(self):
        """Proper step dimensions, deepest first (ascending)."""
        return tuple(reversed(self.filtration_dims[1:]))

    def dim_of_level(self, p):
        """Dimension of the level-p filtration step (full space for p <= 0)."""
        if p <= 0:
            return self.m
        if p < len(self.filtration_dims):
            return self.filtration_dims[p]
        return 0

    def __eq__(self, other):
        if not isinstance(other, HodgeData):
            return NotImplemented
        return (self.m, self.weight, self.filtration_dims, self.polarization) \
            == (other.m, other.weight, other.filtration_dims, other.polarization)


class FlagChart:
    """Nested pivot row sets, one per filtration step (deepest first)."""

    __slots__ = ("pivot_sets",)

    def __init__(self, pivot_sets):
        pivot_sets = tuple(tuple(sorted(int(x) for x in s)) for s in pivot_sets)
        prev = ()
        for s in pivot_sets:
            if len(set(s)) != len(s):
                raise ValueError("repeated pivot row")
            if not set(prev) <= set(s):
                raise ValueError("pivot sets must be nested")
            if len(s) <= len(prev):
                raise ValueError("pivot sets must strictly grow")
            prev = s
        object.__setattr__(self, "pivot_sets", pivot_sets)

    def __setattr__(self, name, value):
        raise AttributeError("FlagChart is immutable")

    def __eq__(self, other):
        if not isinstance(other, FlagChart):
            return NotImplemented
        return self.pivot_sets == other.pivot_sets

    def __repr__(self):
        return f"FlagChart({self.pivot_sets})"


class FlagJet:
    """A point of the jet space of the flag variety, in chart coordinates.

    `coords` maps (row, column) pairs of the echelon representative to
    truncated series; pivot entries are implicit (one on the matching pivot
    row, zero on the other pivot rows of the same or deeper steps).
    """

    __slots__ = ("hodge", "chart", "coords", "dims", "order")

    def __init__(self, hodge, chart, coords, dims, order):
        sizes = hodge.step_sizes()
        if len(chart.pivot_sets) != len(sizes) or any(
                len(s) != size for s, size in zip(chart.pivot_sets, sizes)):
            raise ValueError("chart does not match the filtration dims")
        coords = dict(coords)
        for (row, col), series in coords.items():
            if series.dims != dims or series.order != order:
                raise ValueError("coordinate series must share (dims, order)")
            if not 0 <= row < hodge.m:
                raise ValueError("coordinate row out of range")
        object.__setattr__(self, "hodge", hodge)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("FlagJet is immutable")

    def _column_blocks(self):
        """(column, step_index, pivot_row) for every representative column."""
        sizes = self.hodge.step_sizes()
        out = []
        col = 0
        prev = ()
        for step, pivots in enumerate(self.chart.pivot_sets):
            new_rows = [p for p in pivots if p not in prev]
            for row in new_rows:
                out.append((col, step, row))
                col += 1
            prev = pivots
        return out

    def representative(self):
        """The echelon representative as an m x (dim of widest step) matrix."""
        m = self.hodge.m
        width = self.hodge.step_sizes()[-1] if self.hodge.step_sizes() else 0
        zero = TruncatedSeries.zero(self.dims, self.order)
        one = TruncatedSeries.one(self.dims, self.order)
        rep = [[zero for _ in range(width)] for _ in range(m)]
        for col, step, pivot_row in self._column_blocks():
            pivots = set(self.chart.pivot_sets[step])
            for row in range(m):
                if row == pivot_row:
                    rep[row][col] = one
                elif row in pivots:
                    rep[row][col] = zero
                else:
                    rep[row][col] = self.coords.get((row, col), zero)
        return rep

    def __eq__(self, other):
        if not isinstance(other, FlagJet):
            return NotImplemented
        if (self.hodge, self.chart, self.dims, self.order) != \
                (other.hodge, other.chart, other.dims, other.order):
            return False
        keys = set(self.coords) | set(other.coords)
        zero = TruncatedSeries.zero(self.dims, self.order)
        return all(self.coords.get(k, zero) == other.coords.get(k, zero)
                   for k in keys)

    def __repr__(self):
        shown = {key: s.to_string() for key, s in sorted(self.coords.items())}
        return f"FlagJet(chart={self.chart.pivot_sets}, coords={shown})"


def _as_matrixjet(matrix):
    if isinstance(matrix, MatrixJet):
        return matrix
    return MatrixJet.from_constant(matrix, 1, 0)


def select_chart(hodge, constant_matrix):
    """Deterministic chart for a flag given by leading columns of a matrix:
    per step (deepest first) the lexicographically smallest nested pivot set
    whose constant minor is invertible."""
    m = hodge.m
    pivot_sets = []
    prev = ()
    for size in hodge.step_sizes():
        chosen = None
        for cand in combinations(range(m), size):
            if not set(prev) <= set(cand):
                continue
            minor = [[constant_matrix[row][col] for col in range(size)]
                     for row in cand]
            if linalg.det(minor):
                chosen = cand
                break
        if chosen is None:
            raise NoValidChart("no pivot set has an invertible constant minor")
        pivot_sets.append(chosen)
        prev = chosen
    return FlagChart(pivot_sets)


def flag_of_matrix(hodge, matrix, chart=None):
    """The flag jet spanned by the leading columns of a matrix jet.

    Step k of the flag is spanned by the first (dim of step k) columns; the
    result is the echelon-normalized chart representative, and is invariant
    under right multiplication by block-triangular jets preserving the
    leading column blocks.
    """
    jet = _as_matrixjet(matrix)
    if jet.m != hodge.m:
        raise ArityMismatch("matrix size does not match the frame size")
    sizes = hodge.step_sizes()
    if not sizes:
        return FlagJet(hodge, FlagChart([]), {}, jet.dims, jet.order)
    if chart is None:
        chart = select_chart(hodge, jet.constant_matrix())
    d, r = jet.dims, jet.order
    coords = {}
    col = 0
    prev = ()
    for step, size in enumerate(sizes):
        pivots = chart.pivot_sets[step]
        minor = [[jet.entry(row, c) for c in range(size)] for row in pivots]
        minor_inv = invert_series_matrix(minor)
        block = [[None] * size for _ in range(hodge.m)]
        for row in range(hodge.m):
            for c in range(size):
                acc = TruncatedSeries.zero(d, r)
                for k in range(size):
                    acc = acc + jet.entry(row, k) * minor_inv[k][c]
                block[row][c] = acc
        new_rows = [p for p in pivots if p not in prev]
        pivot_list = list(pivots)
        for row_added in new_rows:
            src_col = pivot_list.index(row_added)
            for row in range(hodge.m):
                if row in pivots:
                    continue
                series = block[row][src_col]
                if not series.is_zero():
                    coords[(row, col)] = series
            col += 1
        prev = pivots
    return FlagJet(hodge, chart, coords, d, r)


def check_hr1(hodge, flag):
    """Whether all pairings between complementary filtration steps vanish
    identically at the jet order."""
    rep = flag.representative()
    if not rep or not rep[0]:
        return True
    d, r = flag.dims, flag.order
    q = hodge.polarization
    for p in range(1, hodge.weight + 1):
        left = hodge.dim_of_level(p)
        right = hodge.dim_of_level(hodge.weight + 1 - p)
        if left == 0 or right == 0:
            continue
        for a in range(left):
            for b in range(right):
                acc = TruncatedSeries.zero(d, r)
                for i in range(hodge.m):
                    for j in range(hodge.m):
                        if q[i][j]:
                            acc = acc + rep[i][a] * rep[j][b] * Fraction(q[i][j])
                if not acc.is_zero():
                    return False
    return True


def gram_obeys_first_relation(chart):
    """Whether the chart's Gram matrix vanishes identically on complementary
    filtration blocks (the pattern that makes the containment of period-map
    jets in the first-relation locus a theorem for this chart)."""
    hodge = HodgeData.of_chart(chart)
    for p in range(1, hodge.weight + 1):
        left = hodge.dim_of_level(p)
        right = hodge.dim_of_level(hodge.weight + 1 - p)
        for i in range(left):
            for k in range(right):
                if chart.gram[i][k]:
                    return False
    return True


def check_fv(chart, point, matrix):
    """Whether M^T Gram(point) M equals the lattice polarization exactly."""
    gram = chart.gram_at(point)
    lhs = linalg.mat_mul(linalg.transpose(matrix),
                         linalg.mat_mul(gram, matrix))
    target = [[Fraction(x) for x in row] for row in chart.polarization]
    return linalg.mat_eq(lhs, target)


class TorsorPoint:
    """A base jet together with a frame change satisfying the torsor condition."""

    __slots__ = ("sigma", "matrix")

    def __init__(self, sigma, matrix):
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "matrix",
                           tuple(tuple(Fraction(x) for x in row)
                                 for row in matrix))

    def __setattr__(self, name, value):
        raise AttributeError("TorsorPoint is immutable")

    @classmethod
    def validated(cls, chart, sigma, matrix):
        if not check_fv(chart, sigma.basepoint(), matrix):
            raise ValueError("matrix does not satisfy the torsor condition")
        return cls(sigma, matrix)


class EtaWitness:
    """Return value of eta_chartlocal: a torsor point and its flag jet."""

    __slots__ = ("point", "flag")

    def __init__(self, point, flag):
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "flag", flag)

    def __setattr__(self, name, value):
        raise AttributeError("EtaWitness is immutable")


def alpha(chart, sigma, matrix, table=None):
    """Jet of the local period map: the flag of the inverse flat-frame jet.

    No torsor condition is imposed; when check_fv holds at the base point the
    resulting flag jet satisfies check_hr1 at every order.
    """
    frame = beta(chart, sigma, matrix, table=table)
    inverse = matrixjet_invert(frame)
    return flag_of_matrix(HodgeData.of_chart(chart), inverse)


def eta_chartlocal(chart, sigma, bound=6, table=None):
    """Canonical orbit witness above a base jet.

    Picks a rational matrix M* with M*^T Gram(s) M* = Q by exact congruence
    solving (closed form for alternating pairings, descent for symmetric
    pairs of size two, bounded search above) and returns the torsor point
    together with alpha at M*.  Raises NoRationalFvPoint when the search
    certifies failure or exhausts its bound.  Two jets map to the same orbit
    exactly when their witnesses differ by a symmetry of the lattice form;
    deciding that relation is out of scope here.
    """
    s = sigma.basepoint()
    chart.assert_regular(s)
    gram = chart.gram_at(s)
    target = [[int(x) for x in row] for row in chart.polarization]
    mstar = solve_congruence(gram, target, chart.weight, bound=bound)
    if mstar is None:
        raise NoRationalFvPoint(
            f"Gram at {s} is not rationally congruent to the lattice form "
            "(or the bounded search failed)")
    point = TorsorPoint(sigma, mstar)
    return EtaWitness(point, alpha(chart, sigma, mstar, table=table))


def weight1_positivity(polarization, column, tol=1e-9):
    """Floating-point positivity probe at a base point, weight one only.

    Takes a complex column spanning the deepest step and checks that
    i * Q(w, conj(w)) is positive within tolerance.  This is the only
    non-exact routine in the package and is segregated from the exact suite.
    """
    w = [complex(x) for x in column]
    value = 0j
    for i, wi in enumerate(w):
        for j, wj in enumerate(w):
            if polarization[i][j]:
                value += wi * polarization[i][j] * wj.conjugate()
    return (1j * value).real > tol
