"""Cocycles of the affine-line and vector-line bundles, and the 4-point line over GF(3)."""
import itertools
import logging
import time
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence, Tuple

from tqdm import tqdm

from projline.abstract_line import FiniteLine, coordinate_model, table_from_coefficients, verify_axioms
from projline.coordinate_line import LabeledArrow
from projline.errors import BaseMismatch, PointsNotDistinct, TriplesNotDistinct, ZeroScalar
from projline.fundamental import is_functorial, iter_bijections
from projline.punctured import Chart
from projline.scalars import FieldContext, Scalar

GF3_POINTS = ("P0", "P1", "P2", "P3")


@dataclass(frozen=True)
class AffineAutomorphism:
    """x -> t + s*x, an element of k x| k*."""

    t: Scalar
    s: Scalar

    def __post_init__(self):
        if self.s.is_zero:
            raise ZeroScalar("An affine automorphism needs a nonzero slope.")
        assert self.t.ctx == self.s.ctx

    @classmethod
    def identity(cls, ctx: FieldContext) -> "AffineAutomorphism":
        return cls(ctx.zero, ctx.one)

    @classmethod
    def from_values(cls, v0: Scalar, v1: Scalar) -> "AffineAutomorphism":
        """The map with value v0 at 0 and v1 at 1."""
        return cls(v0, v1 - v0)

    @property
    def ctx(self) -> FieldContext:
        return self.t.ctx

    def apply(self, x: Scalar) -> Scalar:
        return self.t + self.s * x

    __call__ = apply

    def then(self, other: "AffineAutomorphism") -> "AffineAutomorphism":
        """First self, then other."""
        return AffineAutomorphism(other.t + other.s * self.t, other.s * self.s)

    def inverse(self) -> "AffineAutomorphism":
        s_inv = self.s.inverse()
        return AffineAutomorphism(-self.t * s_inv, s_inv)

    def values(self) -> Tuple[Scalar, Scalar]:
        return self.t, self.t + self.s

    def __str__(self):
        return f"t={self.t} s={self.s}"


def _section(A, section: Sequence[Hashable]) -> Tuple[Hashable, Hashable]:
    """(B, C) from either (B, C) or (A, B, C)."""
    section = tuple(section)
    if len(section) == 3:
        if section[0] != A:
            raise BaseMismatch(f"Section {section} is based at {section[0]}, not {A}.")
        section = section[1:]
    if len(section) != 2 or len({A, *section}) != 3:
        raise TriplesNotDistinct(f"({A}, {', '.join(map(str, section))}) is not a triple of distinct points.")
    return section


def affine_cocycle(line, A, section, section2) -> AffineAutomorphism:
    """The chart change h_{A,B,C}^{-1} followed by h_{A,B',C'}, read off its values at 0 and 1."""
    B, C = _section(A, section)
    B2, C2 = _section(A, section2)
    h = Chart(line, A, B, C)
    h2 = Chart(line, A, B2, C2)
    one = line.ctx.one
    return AffineAutomorphism.from_values(h2.coordinate(h.point(line.ctx.zero)), h2.coordinate(h.point(one)))


def affine_cocycle_closed_form(line, A, section, section2) -> AffineAutomorphism:
    """((A,B';C',B), (A,B';C',C)) as values at 0 and 1."""
    B, C = _section(A, section)
    B2, C2 = _section(A, section2)
    return AffineAutomorphism.from_values(line.cross_ratio(A, B2, C2, B), line.cross_ratio(A, B2, C2, C))


def check_affine_cocycle(
    line,
    A,
    sections: Sequence[Sequence[Hashable]],
    cocycle: Callable[..., AffineAutomorphism] = affine_cocycle,
) -> bool:
    s1, s2, s3 = sections
    return cocycle(line, A, s1, s2).then(cocycle(line, A, s2, s3)) == cocycle(line, A, s1, s3)


def line_cocycle(line, pair: Tuple[Hashable, Hashable], C, C2) -> Scalar:
    """(A,B;C,C'), the transition between the trivializations at C and C'."""
    A, B = pair
    if len({A, B, C}) != 3 or len({A, B, C2}) != 3:
        raise PointsNotDistinct(f"({A},{B},{C}) and ({A},{B},{C2}) must be distinct triples.")
    return line.cross_ratio(A, B, C, C2)


def check_line_cocycle(line, pair, C, C2, C3) -> bool:
    return line_cocycle(line, pair, C, C2) * line_cocycle(line, pair, C2, C3) == line_cocycle(line, pair, C, C3)


@dataclass(frozen=True)
class GF3Certificate:
    candidates: int
    distinct_tables: int
    passing: int
    matches_model: bool
    seconds: float

    @property
    def unique(self) -> bool:
        return self.passing == 1 and self.matches_model

    def __str__(self):
        return (
            f"{self.candidates} coefficient choices, {self.distinct_tables} distinct tables, "
            f"{self.passing} passing, matches coordinate model: {self.matches_model}"
        )


def gf3_line() -> FiniteLine:
    """The coordinate model over GF(3) with its points renamed P0..P3."""
    model = coordinate_model(3)
    return model.relabel(dict(zip(model.points, GF3_POINTS)))


def gf3_unique_structure(progress: bool = False) -> Tuple[FiniteLine, GF3Certificate]:
    """Search every torsor-compatible table on four points over GF(3); exactly one is a projective line."""
    start = time.time()
    ctx = FieldContext.prime(3)
    hom_sets = list(itertools.permutations(GF3_POINTS, 2))
    labels = {(A, B): [F for F in GF3_POINTS if F not in (A, B)] for A, B in hom_sets}
    line = gf3_line()

    seen, passing, candidates = set(), [], 0
    for choice in tqdm(itertools.product((0, 1), repeat=len(hom_sets)), total=2 ** len(hom_sets), desc="gf3", disable=not progress):
        candidates += 1
        swap = dict(zip(hom_sets, choice))

        def coefficient(f: LabeledArrow) -> Scalar:
            first, second = labels[(f.src, f.dst)]
            slot = 0 if f.dir == first else 1
            return ctx.scalar(1 + (slot ^ swap[(f.src, f.dst)]))

        candidate = table_from_coefficients(ctx, GF3_POINTS, coefficient)
        key = candidate.table.tobytes()
        if key in seen:
            continue
        seen.add(key)
        if verify_axioms(candidate, early_exit=True).passed:
            passing.append(candidate)

    certificate = GF3Certificate(
        candidates=candidates,
        distinct_tables=len(seen),
        passing=len(passing),
        matches_model=len(passing) == 1 and passing[0].same_structure(line),
        seconds=time.time() - start,
    )
    logging.info(f"GF(3) structure search: {certificate}")
    return line, certificate


def gf3_projectivity_count() -> int:
    line = gf3_line()
    return sum(is_functorial(phi) for phi in iter_bijections(line))


def gf3_all_permutations() -> bool:
    line = gf3_line()
    return all(is_functorial(phi) for phi in iter_bijections(line))
