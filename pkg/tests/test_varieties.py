import numpy as np
import pytest

from addcomb.errors import UndefinedError, ValidationError
from addcomb.groups import Subset, coset, enumerate_subgroups, subgroup_closure
from addcomb.energy import energy
from addcomb.varieties import (Polynomial, Variety, estimate_dimension, line, max_coset_subgroup,
                               parabola, parabola_with_line, profile_moment,
                               shift_intersection_profile, shift_intersections, stabilizer,
                               trace_variety)

from conftest import brute_energy, grp


def test_parabola_points_by_scan():
    V = parabola(7)
    scan = [(x, y) for x in range(7) for y in range(7) if (y - x * x) % 7 == 0]
    assert sorted(V.group.label(g) for g in V.points.members) == scan
    assert V.verify_points()


def test_zero_polynomial_gives_everything():
    G = grp("additive", p=5, m=2)
    V = Variety(G, [[((0, 0), 0)]])
    assert len(V.points) == 25


def test_trace_variety_matches_scan():
    V = trace_variety(5, 3, ambient="GL2")
    scan = sum(1 for a in range(5) for b in range(5) for c in range(5) for d in range(5)
               if (a + d) % 5 == 3 and (a * d - b * c) % 5 == 1)
    assert len(V.points) == scan


def test_polynomial_evaluation_agrees():
    poly = Polynomial.from_terms([((2, 1), 3), ((0, 0), -1), ((1, 0), 4)], 7)
    rng = np.random.default_rng(1)
    pts = rng.integers(0, 7, size=(50, 2))
    vec = poly.evaluate(pts, 7)
    assert all(vec[i] == poly.evaluate_point(pts[i], 7) for i in range(50))


def test_arity_mismatch():
    with pytest.raises(ValidationError):
        Variety(grp("additive", p=5, m=2), [[((1, 0, 0), 1)]])


def test_config_round_trip():
    V = parabola(5)
    W = Variety.from_config(V.to_config())
    assert W.points == V.points


@pytest.mark.parametrize("V,d", [(parabola(101), 1), (Variety(grp("additive", p=5, m=2), []), 2),
                                 (Variety(grp("additive", p=7, m=2), [[((1, 0), 1)], [((0, 1), 1)]]), 0)])
def test_dimension_estimates(V, d):
    d_hat, ratio = estimate_dimension(V)
    assert d_hat == d and ratio == 1.0


def test_dimension_refuses_odd_counts():
    G = grp("additive", p=7, m=2)
    with pytest.raises(UndefinedError):
        estimate_dimension(Subset(G, range(20)), 7)


def test_stabilizers():
    G = grp("additive", p=7, m=2)
    P = parabola(7).points
    assert stabilizer(P).tolist() == [G.identity]
    assert len(stabilizer(Subset.whole(G))) == 49
    H = subgroup_closure(G, [G.element((1, 3))])
    assert stabilizer(coset(G, 5, H)) == H


def test_t_parameter():
    G = grp("additive", p=7, m=2)
    assert len(enumerate_subgroups(G, 2)) == 10  # {0}, 8 lines through 0, G
    assert max_coset_subgroup(parabola(7).points).t_value == 1
    assert max_coset_subgroup(line(7, 3, 2).points).t_value == 7
    assert max_coset_subgroup(Subset.whole(G)).t_value == 49
    assert max_coset_subgroup(parabola_with_line(7).points).t_value == 7


def test_t_of_planted_coset_in_sl2():
    G = grp("SL2", p=5)
    for H in enumerate_subgroups(G, 2):
        if 1 < H.order < 60:
            W = coset(G, 17, H.members)
            assert max_coset_subgroup(W).t_value == H.order


def test_shift_profile_examples():
    P = parabola(7).points
    assert shift_intersection_profile(P) == {0: 6, 1: 42, 7: 1}
    G = grp("cyclic", n=12)
    H = subgroup_closure(G, [4])
    c = shift_intersections(H)
    assert sorted(np.flatnonzero(c).tolist()) == H.tolist() and set(c[H.members]) == {3}
    one = Subset(G, [5])
    assert np.flatnonzero(shift_intersections(one)).tolist() == [G.identity]


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_parabola_energy_closed_form(p):
    P = parabola(p).points
    E = energy(P)
    assert E == 2 * p * p - p
    assert profile_moment(P, 2) == E
    prof = shift_intersection_profile(P)
    assert sum(v * c for v, c in prof.items()) == len(P) ** 2


def test_parabola_energy_brute_force():
    P = parabola(5).points
    assert energy(P) == brute_energy(P) == 45
