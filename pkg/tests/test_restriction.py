import itertools

import numpy as np
import pytest

from addcomb.energy import GroupFunction, energy
from addcomb.errors import ValidationError
from addcomb.groups import Subset, random_subset
from addcomb.restriction import (SurfaceFunction, check_double_transform, dft, extension,
                                 extension_all, line_free, lines_in, lq_surface, lr_space,
                                 measured_energy_exponent, moment4_identity_gap, restriction_ratio,
                                 restriction_trend)
from addcomb.varieties import line, parabola, parabola_with_line

from conftest import grp


def direct_dft(G, values):
    p = G.spec.p
    out = np.zeros(G.order, dtype=complex)
    for xi in range(G.order):
        for x in range(G.order):
            out[xi] += values[x] * np.exp(-2j * np.pi * int(G.rows[x] @ G.rows[xi]) / p)
    return out


def test_dft_against_direct_sum():
    G = grp("additive", p=3, m=2)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    assert np.allclose(dft(GroupFunction(G, v)).values, direct_dft(G, v))
    assert np.allclose(dft(GroupFunction.delta(G, G.identity)).values, 1)


def test_dft_of_line_lives_on_dual_line():
    p, c, b = 5, 2, 3
    V = line(p, c, b)
    ghat = dft(V.points).values
    rows = V.group.rows
    dual = (rows[:, 0] + c * rows[:, 1]) % p == 0
    assert np.allclose(np.abs(ghat), p * dual)


def test_parseval_and_double_transform():
    G = grp("additive", p=5, m=2)
    rng = np.random.default_rng(1)
    g = GroupFunction(G, rng.standard_normal(25))
    assert np.sum(np.abs(g.values) ** 2) == pytest.approx(np.sum(np.abs(dft(g).values) ** 2) / 25)
    assert check_double_transform(g) < 1e-12


def test_dft_needs_additive_group():
    with pytest.raises(ValidationError):
        dft(Subset(grp("cyclic", n=5), [1]))


def test_extension_examples():
    V = parabola(7)
    one = SurfaceFunction.ones(V)
    assert extension(one, V.group.identity) == pytest.approx(1)
    ext = extension_all(one)
    for x in range(V.group.order):
        assert ext[x] == pytest.approx(extension(one, x))
        assert abs(ext[x]) <= 1 + 1e-12
    xi0 = int(V.points.members[3])
    delta = SurfaceFunction(V, (V.points.members == xi0).astype(float))
    x = V.group.element((2, 5))
    phase = np.exp(2j * np.pi * int(V.group.rows[x] @ V.group.rows[xi0]) / 7)
    assert extension(delta, x) == pytest.approx(phase / 7)


def test_norms():
    V = parabola(5)
    assert lq_surface(SurfaceFunction.ones(V), 3.0) == pytest.approx(1.0)
    G = V.group
    assert lr_space(GroupFunction.delta(G, 4), 4) == pytest.approx(1.0)
    f = SurfaceFunction(V, np.arange(5.0))
    assert lq_surface(f, 2) == pytest.approx(np.sqrt(np.mean(np.arange(5.0) ** 2)))
    with pytest.raises(ValidationError):
        lq_surface(f, 0.5)


@pytest.mark.parametrize("p", [5, 7])
def test_moment4_identity(p):
    V = parabola(p)
    pts = V.points
    single = Subset(V.group, pts.members[:1])
    lhs, rhs, gap = moment4_identity_gap(V, single)
    assert rhs == pytest.approx(V.group.order / p**4) and gap <= 1e-8
    assert moment4_identity_gap(V, pts)[2] <= 1e-8
    assert moment4_identity_gap(V, Subset(V.group, [])) == (0.0, 0.0, 0.0)
    rng = np.random.default_rng(p)
    for _ in range(10):
        A = random_subset(V.group, rng, density=0.5, within=pts)
        assert moment4_identity_gap(V, A)[2] <= 1e-8


def test_energy_equals_difference_count():
    V = parabola(7)
    p = 7
    for A in (V.points, Subset(V.group, V.points.members[:4])):
        rows = [tuple(V.group.rows[a]) for a in A.tolist()]
        diffs = {}
        for a, b in itertools.product(rows, rows):
            d = ((a[0] - b[0]) % p, (a[1] - b[1]) % p)
            diffs[d] = diffs.get(d, 0) + 1
        assert energy(A) == sum(r * r for r in diffs.values())


def test_lines():
    assert lines_in(parabola(7)) == []
    found = lines_in(parabola_with_line(7))
    assert len(found) == 1 and len(found[0]) == 7
    assert line_free(parabola(7)) and not line_free(parabola_with_line(7))


def test_restriction_ratio_search():
    V = parabola(5)
    est = restriction_ratio(V, 2.0, search_budget=20)
    nV, N = len(V.points), V.group.order
    floor = (N * energy(V.points) / nV**4) ** 0.25
    assert est.ratio >= floor
    small = restriction_ratio(V, 2.0, search_budget=5).ratio
    big = restriction_ratio(V, 2.0, search_budget=50).ratio
    assert small <= est.ratio <= big
    again = restriction_ratio(V, 2.0, search_budget=20)
    assert again.extremizer == est.extremizer and again.ratio == est.ratio
    with pytest.raises(ValidationError):
        restriction_ratio(V, 2.0, r_exp=3)


def test_trend_rows():
    rows = restriction_trend(parabola_with_line, [5, 7, 11], search_budget=30)
    ratios = [r.ratio for r in rows]
    assert ratios == sorted(ratios) and len(set(ratios)) == 3
    assert set(rows[0].to_dict()) == {"p", "|V|", "c_meas", "ratio", "extremizer-id"}
    c = measured_energy_exponent(parabola(11), 50)
    assert c.c_meas >= 0.2
