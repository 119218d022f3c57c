import itertools

import pytest

from projline.abstract_line import coordinate_model, verify_axioms
from projline.bundles import (
    GF3_POINTS,
    AffineAutomorphism,
    affine_cocycle,
    affine_cocycle_closed_form,
    check_affine_cocycle,
    check_line_cocycle,
    gf3_all_permutations,
    gf3_line,
    gf3_projectivity_count,
    gf3_unique_structure,
    line_cocycle,
)
from projline.coordinate_line import distinct_tuples
from projline.errors import BaseMismatch, PointsNotDistinct, TriplesNotDistinct, ZeroScalar
from projline.fundamental import projectivities
from projline.punctured import Chart

V, H, D = "0:1", "1:0", "1:1"


def sections_at(line, A):
    return list(itertools.permutations([P for P in line.points if P != A], 2))


def test_affine_automorphism_group_laws(gf5):
    f = AffineAutomorphism(gf5.scalar(2), gf5.scalar(3))
    g = AffineAutomorphism(gf5.scalar(4), gf5.scalar(2))
    identity = AffineAutomorphism.identity(gf5)
    for n in range(5):
        x = gf5.scalar(n)
        assert f.then(g)(x) == g(f(x))
    assert f.then(f.inverse()) == identity
    assert f.inverse().then(f) == identity
    assert identity.then(g) == g


def test_affine_automorphism_from_values(gf5):
    f = AffineAutomorphism.from_values(gf5.scalar(1), gf5.scalar(4))
    assert (f.t.value, f.s.value) == (1, 3)
    assert f.values() == (gf5.scalar(1), gf5.scalar(4))
    assert str(f) == "t=1 s=3"


def test_affine_automorphism_needs_nonzero_slope(gf5):
    with pytest.raises(ZeroScalar):
        AffineAutomorphism(gf5.one, gf5.zero)
    with pytest.raises(ZeroScalar):
        AffineAutomorphism.from_values(gf5.scalar(2), gf5.scalar(2))


def test_cocycle_of_a_section_with_itself_is_identity(model5):
    for A in model5.points:
        for section in sections_at(model5, A):
            assert affine_cocycle(model5, A, section, section) == AffineAutomorphism.identity(model5.ctx)


def test_same_zero_gives_pure_scaling(model5):
    A = V
    for B in [P for P in model5.points if P != A]:
        for C, C2 in itertools.permutations([P for P in model5.points if P not in (A, B)], 2):
            g = affine_cocycle(model5, A, (B, C), (B, C2))
            assert g.t == model5.ctx.zero


def test_standard_section_change(model5):
    g = affine_cocycle(model5, V, (H, D), (H, D))
    assert str(g) == "t=0 s=1"
    shifted = affine_cocycle(model5, V, (H, D), ("1:1", "1:2"))
    assert (shifted.t.value, shifted.s.value) == (4, 1)


@pytest.mark.parametrize("p", [3, 5])
def test_closed_form_matches_chart_change(p):
    line = coordinate_model(p)
    for A in line.points:
        for s1, s2 in itertools.product(sections_at(line, A), repeat=2):
            g = affine_cocycle(line, A, s1, s2)
            assert g == affine_cocycle_closed_form(line, A, s1, s2)
            h, h2 = Chart(line, A, *s1), Chart(line, A, *s2)
            for X in line.points:
                if X != A:
                    assert g(h.coordinate(X)) == h2.coordinate(X)


def test_cocycle_condition_gf3(model3):
    for A in model3.points:
        for sections in itertools.product(sections_at(model3, A), repeat=3):
            assert check_affine_cocycle(model3, A, sections)
            assert check_affine_cocycle(model3, A, sections, cocycle=affine_cocycle_closed_form)


@pytest.mark.slow
def test_cocycle_condition_gf5(model5):
    for A in model5.points:
        for sections in itertools.product(sections_at(model5, A), repeat=3):
            assert check_affine_cocycle(model5, A, sections)


def test_cocycle_condition_gf5_at_one_puncture(model5):
    for sections in itertools.product(sections_at(model5, V), repeat=3):
        assert check_affine_cocycle(model5, V, sections)


def test_mutated_cocycle_fails(model5):
    def negated(line, A, s1, s2):
        g = affine_cocycle(line, A, s1, s2)
        return AffineAutomorphism(g.t, -g.s)

    sections = sections_at(model5, V)
    assert not check_affine_cocycle(model5, V, (sections[0], sections[1], sections[2]), cocycle=negated)


def test_sections_must_share_the_base(model5):
    with pytest.raises(BaseMismatch):
        affine_cocycle(model5, V, (H, H, D), (V, H, D))
    with pytest.raises(TriplesNotDistinct):
        affine_cocycle(model5, V, (V, D), (H, D))
    assert affine_cocycle(model5, V, (V, H, D), (H, D)) == AffineAutomorphism.identity(model5.ctx)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_line_cocycle_condition(p):
    line = coordinate_model(p)
    for A, B in itertools.permutations(line.points, 2):
        rest = [P for P in line.points if P not in (A, B)]
        for C, C2, C3 in itertools.product(rest, repeat=3):
            assert check_line_cocycle(line, (A, B), C, C2, C3)


def test_line_cocycle_inverse_and_identity(model5):
    for A, B, C, C2 in distinct_tuples(model5.points, 4):
        assert line_cocycle(model5, (A, B), C, C) == model5.ctx.one
        assert line_cocycle(model5, (A, B), C, C2) * line_cocycle(model5, (A, B), C2, C) == model5.ctx.one


def test_line_cocycle_needs_distinct_points(model5):
    with pytest.raises(PointsNotDistinct):
        line_cocycle(model5, (V, H), V, D)
    with pytest.raises(PointsNotDistinct):
        line_cocycle(model5, (V, H), D, H)


def test_gf3_structure_is_unique():
    line, certificate = gf3_unique_structure()
    assert certificate.candidates == 4096
    assert certificate.distinct_tables == 512
    assert certificate.passing == 1
    assert certificate.matches_model
    assert certificate.unique
    assert line.points == GF3_POINTS


def test_gf3_line_shape():
    line = gf3_line()
    assert verify_axioms(line).passed
    for A, B in itertools.permutations(line.points, 2):
        assert len([f for f in line.arrows() if f.src == A and f.dst == B]) == 2
    for quad in distinct_tuples(line.points, 4):
        assert line.cross_ratio(*quad).value == 2


def test_gf3_every_permutation_is_a_projectivity():
    assert gf3_projectivity_count() == 24
    assert gf3_all_permutations()
    assert len(projectivities(gf3_line())) == 24
