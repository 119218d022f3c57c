"""Projectivities between finite lines.

A projectivity is a bijection of points whose induced relabeling of arrows,
``(F:A->B) -> (phi F : phi A -> phi B)`` with scalars fixed, preserves
composition.  Any two distinct triples are joined by exactly one of them;
``transport_projectivity`` builds it by matching cross ratios.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup
from tqdm import tqdm

from projline.abstract_line import FiniteLine, coordinate_model
from projline.coordinate_line import Arrow, LabeledArrow, ScalarArrow
from projline.errors import (
    BoundExceeded,
    FieldMismatch,
    NoSolution,
    PreconditionViolated,
    TriplesNotDistinct,
)
from projline.utils import load_config

# images of the first, second and third point under coordinatize
COORDINATE_TRIPLE = ("1:0", "0:1", "1:1")


@dataclass(frozen=True)
class Projectivity:
    src: FiniteLine
    dst: FiniteLine
    images: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != len(self.src.points) or len(set(self.images)) != len(self.images):
            raise PreconditionViolated("A projectivity is a bijection of the point sets.")
        self.dst._require(*self.images)
        if len(self.src.points) != len(self.dst.points):
            raise PreconditionViolated("Source and target have different numbers of points.")

    @classmethod
    def from_mapping(cls, src: FiniteLine, dst: FiniteLine, mapping: Dict[str, str]) -> "Projectivity":
        src._require(*mapping)
        return cls(src, dst, tuple(mapping[P] for P in src.points))

    @classmethod
    def identity(cls, line: FiniteLine) -> "Projectivity":
        return cls(line, line, line.points)

    @cached_property
    def mapping(self) -> Dict[str, str]:
        return dict(zip(self.src.points, self.images))

    @cached_property
    def perm(self) -> np.ndarray:
        """perm[i] is the target index of the image of src.points[i]."""
        position = self.dst.index.position
        return np.asarray([position[P] for P in self.images], dtype=np.int64)

    def __call__(self, point: str) -> str:
        self.src._require(point)
        return self.mapping[point]

    def arrow(self, f: Arrow) -> Arrow:
        if isinstance(f, ScalarArrow):
            return ScalarArrow(self(f.at), f.scalar)
        return LabeledArrow(self(f.src), self(f.dst), self(f.dir))

    def then(self, other: "Projectivity") -> "Projectivity":
        """First self, then other."""
        if not self.dst.same_structure(other.src):
            raise PreconditionViolated("The target of the first projectivity is not the source of the second.")
        return Projectivity(self.src, other.dst, tuple(other(P) for P in self.images))

    def inverse(self) -> "Projectivity":
        back = {image: P for P, image in self.mapping.items()}
        return Projectivity(self.dst, self.src, tuple(back[P] for P in self.dst.points))

    @property
    def is_identity(self) -> bool:
        return self.src.points == self.dst.points and self.images == self.src.points

    def same_map(self, other: "Projectivity") -> bool:
        return self.mapping == other.mapping

    def __str__(self):
        return "\n".join(f"{P} -> {image}" for P, image in zip(self.src.points, self.images))


def _check_same_field(L: FiniteLine, L2: FiniteLine):
    if L.ctx != L2.ctx:
        raise FieldMismatch(f"Cannot map a line over {L.ctx} to a line over {L2.ctx}.")


def _check_triples(L: FiniteLine, L2: FiniteLine, triple: Sequence[str], triple2: Sequence[str]):
    if len(triple) != 3 or len(triple2) != 3 or len(set(triple)) != 3 or len(set(triple2)) != 3:
        raise TriplesNotDistinct(f"Expected two triples of distinct points, got {tuple(triple)} and {tuple(triple2)}.")
    L._require(*triple)
    L2._require(*triple2)


def transport_projectivity(L: FiniteLine, L2: FiniteLine, triple: Sequence[str], triple2: Sequence[str]) -> Projectivity:
    """The projectivity sending triple to triple2: D goes to the D' with (A',B';C',D') = (A,B;C,D)."""
    _check_same_field(L, L2)
    _check_triples(L, L2, triple, triple2)
    if len(L.points) != len(L2.points):
        raise NoSolution("The lines have different numbers of points.")
    (A, B, C), (A2, B2, C2) = triple, triple2
    images = {A: A2, B: B2, C: C2}
    candidates = [D2 for D2 in L2.points if D2 not in triple2]
    values = {D2: L2.cross_ratio(A2, B2, C2, D2) for D2 in candidates}
    for D in L.points:
        if D in images:
            continue
        mu = L.cross_ratio(A, B, C, D)
        matches = [D2 for D2 in candidates if values[D2] == mu]
        if len(matches) != 1:
            raise NoSolution(f"{len(matches)} points D' have (A',B';C',D') = {mu}; expected exactly one.")
        images[D] = matches[0]
    if len(set(images.values())) != len(images):
        raise NoSolution("Cross-ratio transport is not injective.")
    phi = Projectivity.from_mapping(L, L2, images)
    if not is_functorial(phi):
        raise NoSolution("The cross-ratio transport does not preserve composition; the input is not a projective line.")
    return phi


def is_functorial(phi: Projectivity) -> bool:
    """Whether the induced arrow map preserves every composite."""
    src, dst = phi.src, phi.dst
    if src.ctx != dst.ctx:
        return False
    s, d = src.index, dst.index
    moved = s.arrow_map(d, phi.perm)
    following = s.out[s.dst]
    images_of_composites = moved[src.table]
    composites_of_images = dst.table[moved[:, None], d.outpos[moved[following]]]
    return bool(np.array_equal(images_of_composites, composites_of_images))


def preserves_cross_ratios(phi: Projectivity) -> bool:
    """Whether (phi A, phi B; phi C, phi D) = (A,B;C,D) for all distinct A, B, C, D."""
    if phi.src.ctx != phi.dst.ctx:
        return False
    P = phi.perm
    moved = phi.dst.cross_ratio_codes[np.ix_(P, P, P, P)]
    return bool(np.array_equal(moved, phi.src.cross_ratio_codes))


def triangle_criterion(line, E, F, G, A, B, C) -> bool:
    """(C,A;G,F).(B,A;F,E) = 1, which holds iff (E:A->B).(F:B->C) = (G:A->C)."""
    if len({A, B, C}) != 3 or E in (A, B) or F in (A, B, C) or G in (A, C):
        raise PreconditionViolated(
            f"Need A,B,C distinct, E outside {{A,B}}, F outside {{A,B,C}} and G outside {{A,C}}; "
            f"got E={E}, F={F}, G={G}, A={A}, B={B}, C={C}."
        )
    return line.cross_ratio(C, A, G, F) * line.cross_ratio(B, A, F, E) == line.ctx.one


def uniqueness_census(
    L: FiniteLine,
    L2: FiniteLine,
    triple: Sequence[str],
    triple2: Sequence[str],
    bound: Optional[int] = None,
    progress: bool = False,
) -> int:
    """Number of functorial bijections extending triple -> triple2."""
    if bound is None:
        bound = load_config()["bounds"]["census_max_prime"]
    if L.q > bound:
        raise BoundExceeded(f"Census over GF({L.q}) exceeds the bound p <= {bound}.")
    _check_same_field(L, L2)
    _check_triples(L, L2, triple, triple2)
    if len(L.points) != len(L2.points):
        return 0

    (A, B, C), (A2, B2, C2) = triple, triple2
    s, d = L.index.position, L2.index.position
    rest = [P for P in L.points if P not in triple]
    rest2 = [P for P in L2.points if P not in triple2]
    anchored = L.cross_ratio_codes[s[A], s[B], s[C], [s[D] for D in rest]]
    anchored2 = L2.cross_ratio_codes[d[A2], d[B2], d[C2]]

    count = checked = 0
    for extension in tqdm(
        itertools.permutations(rest2),
        total=math.factorial(len(rest2)),
        desc="census",
        disable=not progress,
    ):
        # a functor preserves the cross ratios anchored at the triple
        if not np.array_equal(anchored2[[d[D2] for D2 in extension]], anchored):
            continue
        checked += 1
        mapping = dict(zip(rest, extension))
        mapping.update({A: A2, B: B2, C: C2})
        if is_functorial(Projectivity.from_mapping(L, L2, mapping)):
            count += 1
    logging.info(f"Census over {L.ctx}: {count} functorial extensions, {checked} passed the anchored filter")
    return count


def coordinatize(L: FiniteLine, A: str, B: str, C: str) -> Projectivity:
    """The projectivity onto the coordinate model sending A, B, C to [1:0], [0:1], [1:1]."""
    return transport_projectivity(L, coordinate_model(L.q), (A, B, C), COORDINATE_TRIPLE)


def iter_bijections(L: FiniteLine, L2: Optional[FiniteLine] = None, bound: Optional[int] = None) -> Iterator[Projectivity]:
    L2 = L if L2 is None else L2
    if bound is None:
        bound = load_config()["bounds"]["bijection_max_prime"]
    if L.q > bound:
        raise BoundExceeded(f"Enumerating all bijections over GF({L.q}) exceeds the bound p <= {bound}.")
    for images in itertools.permutations(L2.points):
        yield Projectivity(L, L2, images)


def criteria_disagreements(
    line: FiniteLine, samples: Optional[int] = None, seed: Optional[int] = None, progress: bool = False
) -> List[Projectivity]:
    """Bijections on which preserves_cross_ratios and is_functorial differ.

    ``samples=0`` sweeps every bijection; otherwise that many are drawn with a
    seeded generator (defaults from ``sampling`` in the config).
    """
    sampling = load_config()["sampling"]
    samples = sampling["dil_samples"] if samples is None else samples
    if samples == 0:
        candidates = iter_bijections(line)
        total = math.factorial(len(line.points))
    else:
        rng = np.random.default_rng(sampling["seed"] if seed is None else seed)
        points = line.points
        candidates = (
            Projectivity(line, line, tuple(points[i] for i in rng.permutation(len(points)))) for _ in range(samples)
        )
        total = samples
    found = [
        phi
        for phi in tqdm(candidates, total=total, desc="criteria", disable=not progress)
        if preserves_cross_ratios(phi) != is_functorial(phi)
    ]
    logging.info(f"Cross-ratio and composite criteria disagree on {len(found)} of {total} bijections")
    return found


def projectivities(line: FiniteLine) -> List[Projectivity]:
    """All self-projectivities, one per image of a fixed triple."""
    A, B, C = line.points[:3]
    return [
        transport_projectivity(line, line, (A, B, C), target)
        for target in itertools.permutations(line.points, 3)
    ]


def projectivity_group(line: FiniteLine) -> PermutationGroup:
    group = PermutationGroup([Permutation([int(i) for i in phi.perm]) for phi in projectivities(line)])
    logging.info(f"Projectivity group of {line!r} has order {group.order()}")
    return group
