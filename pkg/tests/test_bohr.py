import math

import numpy as np
import pytest

from addcomb.bohr import (bohr_set, bohr_size_ratio, equidistribution_gap, inverse_weyl_witness,
                          kappa_grid, max_nontrivial_ratio, regular_delta, regularity_check)
from addcomb.errors import PreconditionError, ResolutionError, ValidationError
from addcomb.groups import Subset, enumerate_subgroups, random_subset
from addcomb.spectra import irreps

from conftest import grp


def char(G, k):
    """The character at label k of a cyclic group."""
    return next(r for r in irreps(G) if int(G.label(r.rep_id)[0]) == k)


def test_bohr_examples():
    G = grp("cyclic", n=12)
    assert bohr_set(char(G, 1), 0.6).members.tolist() == [0, 1, 11]
    assert len(bohr_set(irreps(G)[0], 0.1)) == 12
    D = grp("dihedral", n=4)
    two = next(r for r in irreps(D) if r.dim == 2)
    assert len(bohr_set(two, 2.0)) == 8
    with pytest.raises(ValidationError):
        bohr_set([], 0.5)


def test_bohr_membership_by_arc_length():
    n = 101
    G = grp("cyclic", n=n)
    for delta in (0.05, 0.2, 0.7):
        scan = [x for x in range(n) if 2 * abs(math.sin(math.pi * x / n)) <= delta]
        assert bohr_set(char(G, 1), delta).members.tolist() == scan


def test_bohr_laws():
    G = grp("SL2", p=5)
    reps = [r for r in irreps(G) if not r.is_trivial]
    for r in reps:
        assert bohr_set(r, 0.3).members <= bohr_set(r, 0.6).members
        assert bohr_set(r, 0.6).verify()
    a, b = reps[0], reps[3]
    both = bohr_set([a, b], 0.5).members
    assert both == (bohr_set(a, 0.5).members & bohr_set(b, 0.5).members)


def test_regularity():
    G = grp("cyclic", n=101)
    res = regular_delta(char(G, 1), 0.3)
    assert 0.3 <= res.delta1 <= 0.6
    assert regularity_check(char(G, 1), res.delta1).regular
    triv = irreps(G)[0]
    assert regular_delta(triv, 0.2).delta1 == 0.2
    assert regularity_check(triv, 0.4).regular
    assert regularity_check(char(G, 1), 0.5, kappas=[0.0]).regular
    d4 = grp("dihedral", n=4)
    two = next(r for r in irreps(d4) if r.dim == 2)
    assert 0.4 <= regular_delta(two, 0.4).delta1 <= 0.8
    with pytest.raises(ValidationError):
        regular_delta(triv, 0.7)
    with pytest.raises(ValidationError):
        regularity_check(triv, 0.3, kappas=[0.5])
    assert len(kappa_grid(2)) == 33 and kappa_grid(2).max() == pytest.approx(1 / 400)


def test_regularity_by_hand():
    G = grp("cyclic", n=31)
    rho = char(G, 1)
    base = len(bohr_set(rho, 0.5))
    ok = all(abs(len(bohr_set(rho, (1 + k) * 0.5)) - base) <= 100 * abs(k) * base for k in kappa_grid(1))
    assert regularity_check(rho, 0.5).regular == ok


def test_resolution_error_when_grid_is_too_coarse():
    G = grp("cyclic", n=101)
    # a one-point grid sitting just above a jump of the size function
    rho = char(G, 1)
    jump = 2 * math.sin(math.pi / 101)
    with pytest.raises(ResolutionError):
        regular_delta(rho, jump * (1 + 1e-9), grid=1)


def test_size_ratios():
    G = grp("dihedral", n=4)
    for r in irreps(G):
        assert bohr_size_ratio(r, 2.0) == pytest.approx(2.0 ** (-r.dim**2))
    z = grp("cyclic", n=1009)
    assert bohr_size_ratio(char(z, 1), 0.1) == pytest.approx(1 / math.pi, rel=0.05)
    assert bohr_size_ratio(irreps(z)[0], 0.5) == pytest.approx(2.0)


def test_equidistribution():
    G = grp("cyclic", n=31)
    reps = irreps(G)
    A = Subset.whole(G)
    H = Subset(G, range(10))
    res = equidistribution_gap(A, H, Subset(G, [0]), 1.0, 0.0, reps)
    assert res.lhs == pytest.approx(0.0) and res.passed
    rng = np.random.default_rng(0)
    for _ in range(20):
        A = random_subset(G, rng, density=0.5)
        eps = max_nontrivial_ratio(A, reps)
        res = equidistribution_gap(A, H, Subset(G, range(3)), 1.0, eps, reps)
        assert res.lhs <= res.rhs
    S = grp("SL2", p=5)
    borel = Subset.from_mask(S, S.rows[:, 2] == 0)
    A = random_subset(S, rng, density=0.5)
    res = equidistribution_gap(A, borel, borel, 1.0, max_nontrivial_ratio(A), None)
    assert res.passed
    expected = 2 * len(borel) + max_nontrivial_ratio(A) * len(A) * math.sqrt(2)
    assert res.rhs == pytest.approx(expected)


def test_equidistribution_preconditions():
    G = grp("cyclic", n=31)
    A = random_subset(G, np.random.default_rng(1), density=0.5)
    with pytest.raises(PreconditionError):
        equidistribution_gap(A, Subset(G, range(5)), Subset(G, [1, 2]), 1.0, 1.0)
    with pytest.raises(PreconditionError):
        equidistribution_gap(A, Subset(G, range(5)), Subset(G, [0]), 1.0, 0.0)
    with pytest.raises(PreconditionError):
        equidistribution_gap(A, Subset(G, [0, 7, 15]), Subset(G, [0, 1, 2]), 1.0, 1.0)


def test_weyl_witness():
    G = grp("cyclic", n=101)
    rho = char(G, 1)
    B = bohr_set(rho, 0.1).members  # inside Bohr(rho, eps/4) since eps is close to 1
    eps = abs(sum(np.exp(-2j * np.pi * x / 101) for x in B.tolist())) / len(B)
    w = inverse_weyl_witness(B, rho, eps)
    assert w.count == len(B) and w.counts[G.identity] == len(B)
    ap = Subset(G, range(20))
    eps = abs(sum(np.exp(-2j * np.pi * x / 101) for x in range(20))) / 20
    w = inverse_weyl_witness(ap, rho, eps)
    assert w.count > w.expected
    brute = [len(ap & Subset(G, G.mul(bohr_set(rho, eps / 4).members.members, h))) for h in range(101)]
    assert w.count == max(brute)
    with pytest.raises(PreconditionError):
        inverse_weyl_witness(ap, rho, 1.0)
