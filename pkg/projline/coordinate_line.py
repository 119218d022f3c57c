"""The coordinate projective line P(k^2).

Points are 1-dimensional subspaces of k^2 held by a canonical spanning vector
``[1:x]`` or ``[0:1]``.  Arrows between distinct points are the projections
``(C:A->B)``; arrows from a point to itself are scalars.  Composition is read
from left to right: ``compose(f, g)`` is "first f, then g".

Every arrow ``A -> B`` is a linear map sending the canonical vector ``a`` of A
to ``rho * b`` for a unique nonzero ``rho``; ``arrow_coefficient`` returns it,
and composition multiplies coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Hashable, Iterable, Iterator, List, Optional, Tuple, Union

from projline.errors import (
    ContextMismatch,
    NotComposable,
    NotEnumerable,
    PointsNotDistinct,
    UndefinedCrossRatio,
    UsageError,
    VectorNotInSource,
    ZeroScalar,
    ZeroVector,
)
from projline.scalars import FieldContext, Scalar, enumerate_scalars


@dataclass(frozen=True)
class Vec2:
    x1: Scalar
    x2: Scalar

    def __post_init__(self):
        if self.x1.ctx != self.x2.ctx:
            raise ContextMismatch(f"Components of {self} live in different fields.")

    @classmethod
    def of(cls, ctx: FieldContext, x1, x2) -> "Vec2":
        return cls(ctx.scalar(x1), ctx.scalar(x2))

    @property
    def ctx(self) -> FieldContext:
        return self.x1.ctx

    @property
    def is_zero(self) -> bool:
        return self.x1.is_zero and self.x2.is_zero

    def scale(self, factor: Scalar) -> "Vec2":
        return Vec2(factor * self.x1, factor * self.x2)

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x1 - other.x1, self.x2 - other.x2)

    def __str__(self):
        return f"({self.x1},{self.x2})"


def det2(a: Vec2, b: Vec2) -> Scalar:
    """|a, b| = a1*b2 - a2*b1."""
    if a.ctx != b.ctx:
        raise ContextMismatch(f"Cannot take |{a}, {b}| across fields.")
    return a.x1 * b.x2 - a.x2 * b.x1


@dataclass(frozen=True)
class ProjPoint:
    rep: Vec2

    def __post_init__(self):
        x1 = self.rep.x1
        if not (x1.value == 1 or (x1.is_zero and self.rep.x2.value == 1)):
            raise UsageError(f"{self.rep} is not a canonical representative; use ProjPoint.span.")

    @classmethod
    def span(cls, v: Vec2) -> "ProjPoint":
        if v.is_zero:
            raise ZeroVector("The zero vector spans no point.")
        if v.x1.is_zero:
            return cls(Vec2(v.ctx.zero, v.ctx.one))
        return cls(Vec2(v.ctx.one, v.x2 / v.x1))

    @classmethod
    def affine(cls, x: Scalar) -> "ProjPoint":
        return cls(Vec2(x.ctx.one, x))

    @property
    def ctx(self) -> FieldContext:
        return self.rep.ctx

    @property
    def is_infinity(self) -> bool:
        return self.rep.x1.is_zero

    @property
    def coordinate(self) -> Optional[Scalar]:
        """x for [1:x]; None for V."""
        return None if self.is_infinity else self.rep.x2

    def __str__(self):
        return f"{self.rep.x1}:{self.rep.x2}"


def vertical(ctx: FieldContext) -> ProjPoint:
    return ProjPoint(Vec2(ctx.zero, ctx.one))


def horizontal(ctx: FieldContext) -> ProjPoint:
    return ProjPoint(Vec2(ctx.one, ctx.zero))


def diagonal(ctx: FieldContext) -> ProjPoint:
    return ProjPoint(Vec2(ctx.one, ctx.one))


def parse_point(ctx: FieldContext, text: str) -> ProjPoint:
    """Read "a1:a2", or the affine shorthand "x" for "1:x"."""
    text = text.strip()
    if ":" in text:
        a1, a2 = text.split(":", 1)
        return ProjPoint.span(Vec2(Scalar.from_string(ctx, a1), Scalar.from_string(ctx, a2)))
    return ProjPoint.affine(Scalar.from_string(ctx, text))


def point_id(point: ProjPoint) -> str:
    return str(point)


def enumerate_points(ctx: FieldContext) -> Tuple[ProjPoint, ...]:
    if not ctx.is_prime:
        raise NotEnumerable("P(k^2) over the rationals is infinite.")
    return (vertical(ctx),) + tuple(ProjPoint.affine(x) for x in enumerate_scalars(ctx))


def iter_points(ctx: FieldContext) -> Iterator[ProjPoint]:
    """V, then [1:0], [1:1], [1:2], ...; finite for prime fields."""
    if ctx.is_prime:
        yield from enumerate_points(ctx)
        return
    yield vertical(ctx)
    n = 0
    while True:
        yield ProjPoint.affine(ctx.scalar(n))
        n += 1


@dataclass(frozen=True)
class ScalarArrow:
    """The vertex arrow ``at -> at`` given by a nonzero scalar."""

    at: Hashable
    scalar: Scalar

    def __post_init__(self):
        if self.scalar.is_zero:
            raise ZeroScalar(f"Vertex arrows are invertible scalars; got 0 at {self.at}.")

    @property
    def src(self):
        return self.at

    @property
    def dst(self):
        return self.at

    def __str__(self):
        return f"{self.scalar}@{self.at}"


@dataclass(frozen=True)
class LabeledArrow:
    """The arrow ``(dir : src -> dst)``."""

    src: Hashable
    dst: Hashable
    dir: Hashable

    def __post_init__(self):
        if len({self.src, self.dst, self.dir}) != 3:
            raise PointsNotDistinct(
                f"A labeled arrow needs three distinct points, got ({self.dir}:{self.src}->{self.dst})."
            )

    def __str__(self):
        return f"{self.dir}|{self.src}>{self.dst}"


Arrow = Union[ScalarArrow, LabeledArrow]


def parse_arrow(text: str, read_point: Callable[[str], Hashable], read_scalar: Callable[[str], Scalar]) -> Arrow:
    """Read "lambda@A" or "C|A>B"."""
    text = text.strip()
    if "@" in text:
        lam, at = text.split("@", 1)
        return ScalarArrow(read_point(at), read_scalar(lam))
    if "|" in text and ">" in text:
        label, rest = text.split("|", 1)
        src, dst = rest.split(">", 1)
        return LabeledArrow(read_point(src), read_point(dst), read_point(label))
    raise UsageError(f"Cannot read an arrow from '{text}'; expected 'lambda@A' or 'C|A>B'.")


def arrow_coefficient(f: Arrow) -> Scalar:
    """The rho with f(a) = rho * b for the canonical vectors a, b of f.src, f.dst."""
    if isinstance(f, ScalarArrow):
        return f.scalar
    a, b, c = f.src.rep, f.dst.rep, f.dir.rep
    denominator = det2(c, b)
    assert not denominator.is_zero, "direction coincides with the target"
    return det2(c, a) / denominator


def arrow_from_coefficient(src: ProjPoint, dst: ProjPoint, rho: Scalar) -> Arrow:
    """The unique arrow src -> dst sending a to rho * b."""
    if src == dst:
        return ScalarArrow(src, rho)
    # projecting a onto B along G must land on rho*b, so G is spanned by a - rho*b
    return LabeledArrow(src, dst, ProjPoint.span(src.rep - dst.rep.scale(rho)))


def brute_force_label(src: ProjPoint, dst: ProjPoint, rho: Scalar) -> List[ProjPoint]:
    """Every label G with (G:src->dst) sending a to rho * b, found by search."""
    return [
        g
        for g in enumerate_points(src.ctx)
        if g not in (src, dst) and arrow_coefficient(LabeledArrow(src, dst, g)) == rho
    ]


def apply_arrow(f: Arrow, v: Vec2) -> Vec2:
    if v.is_zero:
        raise ZeroVector("Arrows act on nonzero vectors.")
    src = f.src
    if ProjPoint.span(v) != src:
        raise VectorNotInSource(f"{v} does not span {src}.")
    a = src.rep
    t = v.x1 / a.x1 if not a.x1.is_zero else v.x2 / a.x2
    return f.dst.rep.scale(t * arrow_coefficient(f))


def compose(f: Arrow, g: Arrow) -> Arrow:
    """First f, then g."""
    if f.dst != g.src:
        raise NotComposable(f"{f} ends at {f.dst} but {g} starts at {g.src}.")
    return arrow_from_coefficient(f.src, g.dst, arrow_coefficient(f) * arrow_coefficient(g))


def cross_ratio(A: ProjPoint, B: ProjPoint, C: ProjPoint, D: ProjPoint) -> Scalar:
    """(A,B;C,D) = |a,c||b,d| / (|a,d||b,c|), defined whenever A != D and B != C."""
    if A == D or B == C:
        raise UndefinedCrossRatio(f"({A},{B};{C},{D}) needs A != D and B != C.")
    a, b, c, d = A.rep, B.rep, C.rep, D.rep
    return det2(a, c) * det2(b, d) / (det2(a, d) * det2(b, c))


def orbit_identities(
    cross: Callable[[Hashable, Hashable, Hashable, Hashable], Scalar], A, B, C, D
) -> List[Tuple[str, Scalar, Scalar]]:
    """(law, observed, expected) for every permutation law of four distinct points."""
    mu = cross(A, B, C, D)
    one = mu.ctx.one
    if mu.is_zero or mu == one:
        return [("degenerate", mu, None)]
    return [
        ("four-group", cross(B, A, D, C), mu),
        ("four-group", cross(C, D, A, B), mu),
        ("four-group", cross(D, C, B, A), mu),
        ("inverse", cross(A, B, D, C), mu.inverse()),
        ("one-minus", cross(A, C, B, D), one - mu),
        ("one-minus", cross(A, C, D, B), (one - mu).inverse()),
        ("mu-minus-one", cross(A, D, B, C), (mu - one) / mu),
        ("mu-minus-one", cross(A, D, C, B), mu / (mu - one)),
    ]


class CoordinateLine:
    """P(k^2) with composition computed on demand; works over any FieldContext."""

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx

    def __repr__(self):
        return f"CoordinateLine({self.ctx})"

    def points(self) -> Tuple[ProjPoint, ...]:
        return enumerate_points(self.ctx)

    def iter_points(self) -> Iterator[ProjPoint]:
        return iter_points(self.ctx)

    def point(self, text: str) -> ProjPoint:
        return parse_point(self.ctx, text)

    def contains(self, point) -> bool:
        return isinstance(point, ProjPoint) and point.ctx == self.ctx

    def compose(self, f: Arrow, g: Arrow) -> Arrow:
        return compose(f, g)

    def cross_ratio(self, A, B, C, D) -> Scalar:
        return cross_ratio(A, B, C, D)

    def minus_one_square_holds(self, A: ProjPoint, B: ProjPoint, C: ProjPoint) -> bool:
        lhs = compose(LabeledArrow(A, B, C), LabeledArrow(B, C, A))
        rhs = compose(ScalarArrow(A, self.ctx.minus_one), LabeledArrow(A, C, B))
        return lhs == rhs


def distinct_tuples(points: Iterable, size: int) -> Iterator[tuple]:
    return permutations(tuple(points), size)


def cross_ratio_orbit(A, B, C, D) -> Tuple[Scalar, ...]:
    """The six values of the cross ratio of A, B, C, D over all 24 orderings."""
    return (
        cross_ratio(A, B, C, D),
        cross_ratio(A, B, D, C),
        cross_ratio(A, C, B, D),
        cross_ratio(A, C, D, B),
        cross_ratio(A, D, B, C),
        cross_ratio(A, D, C, B),
    )
