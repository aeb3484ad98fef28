import numpy as np
import pytest

from addcomb.energy import GroupFunction, energy, t_norm_count
from addcomb.errors import CapacityError, ValidationError
from addcomb.groups import (GroupSpec, Subset, build_group, class_index, conjugacy_classes,
                            enumerate_subgroups, random_subset, subgroup_closure)
from addcomb.spectra import (convolution_identity_gap, convolve, fourier, fourier_all, hs_inner,
                             inverse_fourier, irreps, load_irreps, max_nontrivial_opnorm,
                             operator_norm, parseval_gap, save_irreps, t_norm_spectral)

from conftest import grp

GROUPS = [("cyclic", {"n": 12}), ("additive", {"p": 2, "m": 3}), ("dihedral", {"n": 4}),
          ("dihedral", {"n": 5}), ("symmetric", {"n": 3}), ("symmetric", {"n": 4}),
          ("SL2", {"p": 3}), ("SL2", {"p": 5}), ("GL2", {"p": 3}), ("borel2", {"p": 5}),
          ("heisenberg", {"p": 3}), ("product", {"factors": (GroupSpec("cyclic", n=2),
                                                             GroupSpec("symmetric", n=3))})]


def e(x):
    return np.exp(2j * np.pi * x)


@pytest.mark.parametrize("kind,kw,dims", [
    ("dihedral", {"n": 4}, [1, 1, 1, 1, 2]),
    ("symmetric", {"n": 3}, [1, 1, 2]),
    ("symmetric", {"n": 4}, [1, 1, 2, 3, 3]),
    ("SL2", {"p": 5}, [1, 2, 2, 3, 3, 4, 4, 5, 6]),
    ("heisenberg", {"p": 3}, [1] * 9 + [3, 3]),
])
def test_irrep_dimensions(kind, kw, dims):
    assert sorted(r.dim for r in irreps(grp(kind, **kw))) == dims


def test_cyclic_characters():
    G = grp("cyclic", n=9)
    reps = irreps(G)
    assert len(reps) == 9 and all(r.dim == 1 for r in reps)
    assert reps[0].is_trivial
    values = {tuple(np.round(r.character, 9)) for r in reps}
    assert values == {tuple(np.round(e(-k * np.arange(9) / 9), 9)) for k in range(9)}


@pytest.mark.parametrize("kind,kw", GROUPS)
def test_character_orthogonality(kind, kw):
    G = build_group(GroupSpec(kind, **kw))
    reps = irreps(G)
    chars = np.array([r.character for r in reps])
    gram = chars @ chars.conj().T / G.order
    assert np.allclose(gram, np.eye(len(reps)), atol=1e-8)
    assert len(reps) == len(conjugacy_classes(G))
    assert sum(r.dim**2 for r in reps) == G.order
    cls = class_index(G)
    for ch in chars:
        for c in range(cls.max() + 1):
            vals = ch[cls == c]
            assert np.allclose(vals, vals[0], atol=1e-8)


def test_fourier_examples():
    z5 = grp("cyclic", n=5)
    r1 = next(r for r in irreps(z5) if np.isclose(r.character[1], e(-1 / 5)))
    assert np.isclose(fourier(Subset(z5, [0, 1]), r1).matrix[0, 0], 1 + e(-1 / 5))
    G = grp("SL2", p=3)
    for r in irreps(G):
        assert np.allclose(fourier(GroupFunction.delta(G, G.identity), r).matrix, np.eye(r.dim))
        if not r.is_trivial:
            assert np.abs(fourier(Subset.whole(G), r).matrix).max() <= 1e-6 * G.order


def test_cyclic_fourier_matches_direct_dft():
    G = grp("cyclic", n=11)
    rng = np.random.default_rng(0)
    f = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    direct = {k: sum(f[x] * e(-k * x / 11) for x in range(11)) for k in range(11)}
    for r in irreps(G):
        k = int(G.label(r.rep_id)[0])
        assert np.isclose(fourier(GroupFunction(G, f), r).matrix[0, 0], direct[k])


def test_inverse_round_trip():
    for G in (grp("dihedral", n=4), grp("SL2", p=3)):
        rng = np.random.default_rng(1)
        f = GroupFunction(G, rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order))
        back = inverse_fourier(fourier_all(f))
        assert np.allclose(back.values, f.values, atol=1e-10)
        d = GroupFunction.delta(G, 3)
        assert np.allclose(inverse_fourier(fourier_all(d)).values, d.values, atol=1e-10)
    with pytest.raises(ValidationError):
        inverse_fourier(fourier_all(f)[1:])


def test_parseval():
    G = grp("symmetric", n=3)
    rng = np.random.default_rng(2)
    f = GroupFunction(G, rng.standard_normal(6) + 1j * rng.standard_normal(6))
    lhs, rhs, gap = parseval_gap(f)
    assert gap <= 1e-8 * lhs
    assert parseval_gap(GroupFunction(G, np.zeros(6))) == (0.0, 0.0, 0.0)
    A = Subset(G, [0, 2, 5])
    assert parseval_gap(A)[0] == 3


def test_convolution_examples(z7):
    G = grp("dihedral", n=4)
    irreps(G)
    H = subgroup_closure(G, [1])
    assert np.array_equal(convolve(H, H).values, len(H) * H.mask)
    for a in range(8):
        for b in range(8):
            got = convolve(GroupFunction.delta(G, a), GroupFunction.delta(G, b)).values
            assert np.flatnonzero(got).tolist() == [int(G.mul(a, b))]
    assert convolve(Subset(z7, [0, 1, 2]), Subset(z7, [0, 1, 2])).values.tolist() == [1, 2, 3, 2, 1, 0, 0]


def test_convolution_spectral_identity():
    G = grp("SL2", p=5)
    rng = np.random.default_rng(3)
    f = GroupFunction(G, rng.standard_normal(G.order))
    g = GroupFunction(G, rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order))
    h = convolve(f, g, check=True)
    assert convolution_identity_gap(f, g, h) <= 1e-6


def test_operator_norms():
    assert operator_norm(np.eye(4)) == pytest.approx(1.0)
    z12 = grp("cyclic", n=12)
    f = GroupFunction(z12, np.arange(12.0))
    for r in irreps(z12):
        assert operator_norm(fourier(f, r)) == pytest.approx(abs(fourier(f, r).matrix[0, 0]))
    assert max(operator_norm(fourier(Subset.whole(z12), r)) for r in irreps(z12)[1:]) < 1e-9
    H = subgroup_closure(z12, [4])
    res = max_nontrivial_opnorm(H)
    assert res.value == pytest.approx(len(H)) and res.exponent == pytest.approx(1.0)


def test_sl2_quasirandom_sets():
    G = grp("SL2", p=5)
    rng = np.random.default_rng(4)
    for _ in range(5):
        A = random_subset(G, rng, size=40)
        assert max_nontrivial_opnorm(A).value < len(A)


def test_t_norm_spectral_agrees_with_counting():
    for G in (grp("cyclic", n=12), grp("dihedral", n=4), grp("symmetric", n=3)):
        rng = np.random.default_rng(5)
        for _ in range(5):
            A = random_subset(G, rng, density=0.5)
            assert abs(t_norm_spectral([A] * 4, 2) - energy(A)) <= 1e-5 * max(1, energy(A))
        for H in enumerate_subgroups(G, 1):
            assert abs(t_norm_spectral([H.members] * 4, 2) - H.order**3) < 1e-6
    G = grp("symmetric", n=3)
    fs = [GroupFunction(G, rng.standard_normal(6) + 1j * rng.standard_normal(6)) for _ in range(4)]
    assert abs(t_norm_spectral(fs, 2) - t_norm_count(fs, 2)) < 1e-8


def test_hs_inner():
    a = np.array([[1, 2j], [0, 1]])
    assert hs_inner(a, a) == pytest.approx(6)


def test_irrep_cache_round_trip(tmp_path):
    G = grp("dihedral", n=5)
    reps = irreps(G)
    path = tmp_path / "d5.json"
    save_irreps(path, G, reps)
    loaded = load_irreps(path, G)
    assert [r.dim for r in loaded] == [r.dim for r in reps]
    for a, b in zip(loaded, reps):
        assert np.allclose(a.matrices, b.matrices)
    with pytest.raises(ValidationError):
        load_irreps(path, grp("dihedral", n=4))


def test_capacity_error():
    with pytest.raises(CapacityError):
        irreps(grp("symmetric", n=5), cap=100, seed=7)


def test_decomposition_is_seed_stable():
    G = grp("SL2", p=7)
    a = sorted(r.dim for r in irreps(G, seed=1))
    b = sorted(r.dim for r in irreps(G, seed=2))
    assert a == b and sum(d * d for d in a) == 336
