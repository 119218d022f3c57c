"""Structures on a punctured line L minus A, all transported along charts.

``Chart(line, A, B, C)`` sends A to infinity, B to 0 and C to 1, so a point X
gets the coordinate (A,B;C,X).  Affine combinations, vector sums and scalings
are computed in a chart and pulled back; the result does not depend on the
auxiliary points, which the tests check exhaustively on small fields.
"""
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from projline.abstract_line import FiniteLine
from projline.coordinate_line import CoordinateLine, ProjPoint, det2, diagonal, horizontal, iter_points, vertical
from projline.errors import (
    MalformedTable,
    PunctureInTerms,
    TriplesNotDistinct,
    UnknownPoint,
    WeightsNotAffine,
    ZeroEqualsPuncture,
)
from projline.moebius import Matrix2, act
from projline.scalars import Scalar


def _require(line, *points):
    for P in points:
        if not line.contains(P):
            raise UnknownPoint(f"'{P}' is not a point of {line!r}.")


def default_auxiliary(line, exclude: Iterable[Hashable], count: int) -> Tuple[Hashable, ...]:
    """The first ``count`` points in enumeration order outside ``exclude``."""
    exclude = set(exclude)
    points = line.points if isinstance(line, FiniteLine) else iter_points(line.ctx)
    chosen = []
    for P in points:
        if P not in exclude:
            chosen.append(P)
            if len(chosen) == count:
                break
    return tuple(chosen)


class Chart:
    def __init__(self, line, A, B, C):
        if len({A, B, C}) != 3:
            raise TriplesNotDistinct(f"A chart needs three distinct points, got ({A}, {B}, {C}).")
        _require(line, A, B, C)
        self.line = line
        self.A, self.B, self.C = A, B, C
        self._coordinates: Optional[Dict[Hashable, Scalar]] = None
        self._points: Optional[Dict[Scalar, Hashable]] = None
        if isinstance(line, FiniteLine):
            self._tabulate()

    def _tabulate(self):
        line, A, B, C = self.line, self.A, self.B, self.C
        self._coordinates = {X: line.cross_ratio(A, B, C, X) for X in line.points if X != A}
        self._points = {t: X for X, t in self._coordinates.items()}
        if len(self._points) != len(self._coordinates):
            raise MalformedTable(f"The chart at ({A}, {B}, {C}) is not injective.")

    def __repr__(self):
        return f"Chart({self.A}, {self.B}, {self.C})"

    @property
    def ctx(self):
        return self.line.ctx

    def coordinate(self, X) -> Scalar:
        if X == self.A:
            raise PunctureInTerms(f"The puncture {X} has no coordinate.")
        _require(self.line, X)
        if self._coordinates is not None:
            return self._coordinates[X]
        return self.line.cross_ratio(self.A, self.B, self.C, X)

    __call__ = coordinate

    def point(self, t: Scalar):
        t = self.ctx.scalar(t)
        if self._points is not None:
            return self._points[t]
        # V, H, D go to A, B, C; a column of M spans each target
        a, b, c = self.A.rep, self.B.rep, self.C.rep
        lam = -det2(c, b) / det2(c, a)
        M = Matrix2(b.x1, lam * a.x1, b.x2, lam * a.x2)
        return act(M, ProjPoint.affine(t))

    def items(self) -> List[Tuple[Hashable, Scalar]]:
        assert self._coordinates is not None, "only finite lines are tabulated"
        return list(self._coordinates.items())


def chart(line, A, B, C) -> Chart:
    return Chart(line, A, B, C)


def basis_coordinate(line, A, B, C) -> Chart:
    """The isomorphism of L minus A, with zero B and basis vector C, onto (k, 0, 1)."""
    return Chart(line, A, B, C)


def affine_combine(line, A, terms: Sequence[Tuple[Scalar, Hashable]], auxiliary: Optional[Tuple] = None):
    """The point with chart coordinate sum(w * x) for weights summing to 1."""
    terms = list(terms)
    _require(line, A, *(P for _, P in terms))
    total = line.ctx.zero
    for weight, _ in terms:
        total = total + weight
    if total != line.ctx.one:
        raise WeightsNotAffine(f"Weights sum to {total}, not 1.")
    if any(P == A for _, P in terms):
        raise PunctureInTerms(f"The puncture {A} cannot appear in an affine combination.")
    B, C = auxiliary if auxiliary is not None else default_auxiliary(line, [A], 2)
    h = Chart(line, A, B, C)
    value = line.ctx.zero
    for weight, P in terms:
        value = value + weight * h.coordinate(P)
    return h.point(value)


def _vector_chart(line, A, B, C, points) -> Chart:
    if A == B:
        raise ZeroEqualsPuncture(f"The zero {B} cannot be the puncture.")
    _require(line, A, B, *points)
    if any(P == A for P in points):
        raise PunctureInTerms(f"The puncture {A} is not a vector.")
    if C is None:
        (C,) = default_auxiliary(line, [A, B], 1)
    return Chart(line, A, B, C)


def vector_add(line, A, B, X, Y, auxiliary=None):
    h = _vector_chart(line, A, B, auxiliary, [X, Y])
    return h.point(h.coordinate(X) + h.coordinate(Y))


def vector_scale(line, A, B, lam: Scalar, X, auxiliary=None):
    h = _vector_chart(line, A, B, auxiliary, [X])
    return h.point(line.ctx.scalar(lam) * h.coordinate(X))


def vector_negate(line, A, B, X, auxiliary=None):
    h = _vector_chart(line, A, B, auxiliary, [X])
    return h.point(-h.coordinate(X))


def coordinate_chart(line: CoordinateLine) -> Chart:
    """The chart (V, H, D) of P(k^2), whose coordinate of [1:x] is x."""
    return Chart(line, vertical(line.ctx), horizontal(line.ctx), diagonal(line.ctx))
