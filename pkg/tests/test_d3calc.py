from fractions import Fraction
import random

import pytest

from oddsurg.d3calc import (
    MissingChern,
    NonTorsionChern,
    NotHalfInteger,
    boundary_homology,
    chern_square,
    d3,
    full_report,
    hopf_from_d3,
    realized_d3_values,
)
from oddsurg.exactalg import IntMatrix, solve_rational
from oddsurg.surgery import (
    SurgeryPresentation,
    framed_spine_presentation,
    legendrian_unknot_presentation,
    valid_unknots,
)

from test_exactalg import random_symmetric, random_unimodular

F = Fraction


def test_boundary_homology_examples():
    assert boundary_homology(legendrian_unknot_presentation(-4, 1)).is_trivial
    h = boundary_homology(SurgeryPresentation.from_lists([[0]]))
    assert h.torsion == () and h.free_rank == 1
    h = boundary_homology(SurgeryPresentation.from_lists([[5]]))
    assert h.torsion == (5,) and h.free_rank == 0
    h = boundary_homology(SurgeryPresentation.from_lists([[2, 0], [0, 6]]))
    assert h.torsion == (2, 6) and str(h) == "Z/2 + Z/6"


def test_boundary_homology_lens_space():
    # -p framed unknot gives a lens space with H1 = Z/p
    for p in range(2, 9):
        assert boundary_homology(SurgeryPresentation.from_lists([[-p]])).torsion == (p,)


def test_boundary_homology_of_families_is_trivial():
    for inv in valid_unknots(-8):
        assert boundary_homology(legendrian_unknot_presentation(inv.tb, inv.rot)).is_trivial
    for k in range(-10, 11):
        assert len(boundary_homology(framed_spine_presentation(k))) == 0


def test_chern_square_examples():
    assert chern_square(legendrian_unknot_presentation(-1, 0)) == 8
    assert chern_square(SurgeryPresentation.empty()) == 0
    with pytest.raises(NonTorsionChern):
        chern_square(SurgeryPresentation.from_lists([[0]], [2]))
    with pytest.raises(MissingChern):
        chern_square(framed_spine_presentation(1))


def test_chern_square_rational_value():
    # single -3 framed handle with c = 1: a = -1/3, c^2 = -1/3
    assert chern_square(SurgeryPresentation.from_lists([[-3]], [1])) == F(-1, 3)


def test_d3_examples():
    assert d3(legendrian_unknot_presentation(-1, 0)) == F(1, 2)
    assert d3(SurgeryPresentation.empty()) == F(-1, 2)
    assert d3(legendrian_unknot_presentation(-3, 2)) == F(9, 2)


def test_d3_of_single_stein_handle():
    # a single tb=-1 handle (framing -2) with rot 0 bounds a Stein filling of a
    # lens space L(2,1); d3 = (0 - 3(-1) - 2*2)/4 = -1/4
    assert d3(SurgeryPresentation.from_lists([[-2]], [0])) == F(-1, 4)


def test_hopf_examples():
    assert hopf_from_d3(F(-1, 2)) == 0
    assert hopf_from_d3(F(1, 2)) == -1
    with pytest.raises(NotHalfInteger):
        hopf_from_d3(F(0))


def test_realized_values_examples():
    assert realized_d3_values(-1) == [F(1, 2)]
    assert realized_d3_values(-2) == [F(1, 2), F(5, 2)]
    assert realized_d3_values(-3) == [F(1, 2), F(5, 2), F(9, 2)]
    with pytest.raises(ValueError):
        realized_d3_values(0)


@pytest.mark.parametrize("tb_min", [-1, -4, -9])
def test_realized_values_arithmetic_progression(tb_min):
    vals = realized_d3_values(tb_min)
    assert vals == [F(1, 2) + 2 * m for m in range(len(vals))]
    # the largest is attained at rot = -tb_min - 1
    assert vals[-1] == (-tb_min - 1) - tb_min - F(1, 2)


def test_closed_forms_over_range():
    for inv in valid_unknots(-10):
        n, r = inv.tb, inv.rot
        p = legendrian_unknot_presentation(n, r)
        assert solve_rational(p.Q, p.chern) == [r - 2 * n + 3, 2]
        assert chern_square(p) == 4 * r - 4 * n + 4
        assert d3(p) == r - n - F(1, 2)


def test_full_report_examples():
    rep = full_report(legendrian_unknot_presentation(-1, 0))
    assert (rep.euler, rep.sigma, rep.det) == (3, 0, -1)
    assert rep.h1_factors == [] and rep.chern_square == 8 and rep.d3 == F(1, 2) and rep.hopf == -1

    rep = full_report(SurgeryPresentation.empty())
    assert (rep.euler, rep.sigma, rep.det) == (1, 0, 1)
    assert rep.h1_factors == [] and rep.chern_square == 0 and rep.d3 == F(-1, 2) and rep.hopf == 0

    rep = full_report(framed_spine_presentation(7))
    assert (rep.euler, rep.sigma, rep.det) == (3, 0, -1)
    assert rep.h1_factors == [] and rep.d3 is None and rep.hopf is None
    assert rep.undefined_reason and not rep.non_torsion


def test_full_report_non_torsion():
    rep = full_report(SurgeryPresentation.from_lists([[0]], [2]))
    assert rep.non_torsion and rep.d3 is None and rep.chern_square is None
    assert rep.h1_factors == [0]
    assert "torsion" in rep.undefined_reason


def test_full_report_identity():
    rng = random.Random(17)
    for _ in range(100):
        n = rng.randint(1, 4)
        Q = random_symmetric(rng, n, -5, 5)
        c = [rng.randint(-5, 5) for _ in range(n)]
        rep = full_report(SurgeryPresentation(Q, tuple(c)))
        if rep.d3 is None:
            continue
        assert rep.d3 == (rep.chern_square - 3 * rep.sigma - 2 * rep.euler) / 4
        if rep.hopf is not None:
            assert rep.hopf == -(rep.d3 + F(1, 2))


def test_homology_sphere_with_characteristic_chern_is_half_integral():
    # c characteristic (c_i = Q_ii mod 2) on a unimodular form
    for inv in valid_unknots(-6):
        rep = full_report(legendrian_unknot_presentation(inv.tb, inv.rot))
        assert (rep.d3 + F(1, 2)).denominator == 1 and rep.hopf is not None


def test_chern_square_basis_change_invariance():
    rng = random.Random(23)
    checked = 0
    for _ in range(120):
        n = rng.randint(1, 4)
        Q = random_symmetric(rng, n, -6, 6)
        c = [rng.randint(-6, 6) for _ in range(n)]
        P = random_unimodular(rng, n)
        try:
            base = chern_square(SurgeryPresentation(Q, tuple(c)))
        except NonTorsionChern:
            continue
        moved = SurgeryPresentation(P.T @ Q @ P, tuple(P.T.apply(c)))
        assert chern_square(moved) == base
        checked += 1
    assert checked > 50


def test_chern_square_independent_of_solution_on_singular_forms():
    Q = IntMatrix.of([[1, 1, 0], [1, 1, 0], [0, 0, 2]])
    c = (3, 3, 4)
    p = SurgeryPresentation(Q, c)
    # (3, 0, 2) and (0, 3, 2) both solve Q a = c
    for a in ([3, 0, 2], [0, 3, 2], [5, -2, 2]):
        assert Q.apply(a) == list(c)
        assert sum(ci * ai for ci, ai in zip(c, a)) == chern_square(p)
