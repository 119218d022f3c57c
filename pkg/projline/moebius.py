"""Matrices acting on P(k^2): the action, matrix extraction, PGL(2,p).

Matrices act on column vectors, so [1:x] goes to M (1, x)^T and the affine
coordinate transforms as x -> (a21 + a22 x) / (a11 + a12 x).  ``f.then(g)``
is the product ``g @ f``, which makes ``induced_projectivity`` respect the
left-to-right composition used everywhere else.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from projline.abstract_line import coordinate_model, model_point
from projline.coordinate_line import ProjPoint, Vec2, det2, enumerate_points, parse_point, point_id
from projline.errors import BoundExceeded, ContextMismatch, NotAProjectivity, SingularMatrix, UsageError
from projline.fundamental import Projectivity
from projline.scalars import FieldContext, Scalar, enumerate_scalars
from projline.utils import load_config


@dataclass(frozen=True)
class Matrix2:
    a11: Scalar
    a12: Scalar
    a21: Scalar
    a22: Scalar

    def __post_init__(self):
        if len({self.a11.ctx, self.a12.ctx, self.a21.ctx, self.a22.ctx}) != 1:
            raise ContextMismatch("Matrix entries live in different fields.")
        if self.det.is_zero:
            raise SingularMatrix(f"[{self}] has determinant 0.")

    @classmethod
    def of(cls, ctx: FieldContext, a11, a12, a21, a22) -> "Matrix2":
        return cls(ctx.scalar(a11), ctx.scalar(a12), ctx.scalar(a21), ctx.scalar(a22))

    @classmethod
    def identity(cls, ctx: FieldContext) -> "Matrix2":
        return cls(ctx.one, ctx.zero, ctx.zero, ctx.one)

    @property
    def ctx(self) -> FieldContext:
        return self.a11.ctx

    @property
    def det(self) -> Scalar:
        return self.a11 * self.a22 - self.a12 * self.a21

    def entries(self) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
        return self.a11, self.a12, self.a21, self.a22

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def then(self, other: "Matrix2") -> "Matrix2":
        """First self, then other."""
        return other @ self

    def inverse(self) -> "Matrix2":
        d = self.det.inverse()
        return Matrix2(self.a22 * d, -self.a12 * d, -self.a21 * d, self.a11 * d)

    def scale(self, factor: Scalar) -> "Matrix2":
        return Matrix2(*(factor * a for a in self.entries()))

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.a11 * v.x1 + self.a12 * v.x2, self.a21 * v.x1 + self.a22 * v.x2)

    def __str__(self):
        return f"{self.a11},{self.a12};{self.a21},{self.a22}"


@dataclass(frozen=True)
class ProjMatrix:
    """A matrix up to nonzero scalars, stored with its first nonzero entry equal to 1."""

    rep: Matrix2

    def __post_init__(self):
        lead = next(a for a in self.rep.entries() if not a.is_zero)
        object.__setattr__(self, "rep", self.rep.scale(lead.inverse()))

    @property
    def ctx(self) -> FieldContext:
        return self.rep.ctx

    def then(self, other: "ProjMatrix") -> "ProjMatrix":
        return ProjMatrix(self.rep.then(other.rep))

    def inverse(self) -> "ProjMatrix":
        return ProjMatrix(self.rep.inverse())

    def __str__(self):
        return str(self.rep)


class Infinity:
    """The affine coordinate of V = [0:1]."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = Infinity()

Coordinate = Union[Scalar, Infinity]


def parse_matrix(ctx: FieldContext, text: str) -> Matrix2:
    """Read "a11,a12;a21,a22"."""
    try:
        rows = [row.split(",") for row in text.strip().split(";")]
        (a11, a12), (a21, a22) = rows
    except ValueError:
        raise UsageError(f"Cannot read a matrix from '{text}'; expected 'a11,a12;a21,a22'.")
    return Matrix2(*(Scalar.from_string(ctx, a) for a in (a11, a12, a21, a22)))


def _matrix(f) -> Matrix2:
    return f.rep if isinstance(f, ProjMatrix) else f


def act(f: Union[Matrix2, ProjMatrix], P: ProjPoint) -> ProjPoint:
    f = _matrix(f)
    if f.ctx != P.ctx:
        raise ContextMismatch(f"Cannot apply a matrix over {f.ctx} to a point over {P.ctx}.")
    return ProjPoint.span(f.apply(P.rep))


def fractional_linear(f: Union[Matrix2, ProjMatrix], x: Coordinate) -> Coordinate:
    """x -> (a21 + a22 x) / (a11 + a12 x), with INFINITY standing for V."""
    f = _matrix(f)
    if x is INFINITY:
        numerator, denominator = f.a22, f.a12
    else:
        numerator, denominator = f.a21 + f.a22 * x, f.a11 + f.a12 * x
    if denominator.is_zero:
        return INFINITY
    return numerator / denominator


def induced_projectivity(f: Union[Matrix2, ProjMatrix]) -> Projectivity:
    f = _matrix(f)
    model = coordinate_model(f.ctx.p)
    images = tuple(point_id(act(f, model_point(model, P))) for P in model.points)
    return Projectivity(model, model, images)


def matrix_of_projectivity(phi: Projectivity) -> ProjMatrix:
    """The matrix with columns a and lambda*b, where A, B, C are the images of H, V, D."""
    model = coordinate_model(phi.src.q)
    if not (model.same_structure(phi.src) and model.same_structure(phi.dst)):
        raise NotAProjectivity("Matrices track self-maps of the coordinate model only.")
    ctx = model.ctx
    a = parse_point(ctx, phi("1:0")).rep
    b = parse_point(ctx, phi("0:1")).rep
    c = parse_point(ctx, phi("1:1")).rep
    lam = -det2(c, a) / det2(c, b)
    M = Matrix2(a.x1, lam * b.x1, a.x2, lam * b.x2)
    for P in model.points:
        if point_id(act(M, model_point(model, P))) != phi(P):
            raise NotAProjectivity(f"The matrix [{M}] built from H, V, D disagrees with the map at {P}.")
    return ProjMatrix(M)


def enumerate_pgl(p: int, bound: Optional[int] = None) -> Tuple[ProjMatrix, ...]:
    """PGL(2,p) in canonical scaling: (1,b;c,d) with d != bc, then (0,1;c,d) with c != 0."""
    if bound is None:
        bound = load_config()["bounds"]["pgl_max_prime"]
    if p > bound:
        raise BoundExceeded(f"PGL(2,{p}) exceeds the enumeration bound p <= {bound}.")
    ctx = FieldContext.prime(p)
    k = enumerate_scalars(ctx)
    elements: List[ProjMatrix] = []
    for b in k:
        for c in k:
            for d in k:
                if d != b * c:
                    elements.append(ProjMatrix(Matrix2(ctx.one, b, c, d)))
    for c in k[1:]:
        for d in k:
            elements.append(ProjMatrix(Matrix2(ctx.zero, ctx.one, c, d)))
    logging.debug(f"Enumerated {len(elements)} elements of PGL(2,{p})")
    return tuple(elements)


def cayley_table(p: int, bound: Optional[int] = None) -> np.ndarray:
    """table[i, j] is the index of elements[i].then(elements[j]) in enumerate_pgl(p)."""
    if bound is None:
        bound = load_config()["bounds"]["cayley_max_prime"]
    if p > bound:
        raise BoundExceeded(f"The Cayley table of PGL(2,{p}) exceeds the bound p <= {bound}.")
    elements = enumerate_pgl(p)
    position = {g: i for i, g in enumerate(elements)}
    table = np.empty((len(elements), len(elements)), dtype=np.int64)
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            table[i, j] = position[g.then(h)]
    return table


def fixed_points(f: Union[Matrix2, ProjMatrix]) -> Tuple[ProjPoint, ...]:
    f = _matrix(f)
    return tuple(P for P in enumerate_points(f.ctx) if act(f, P) == P)
