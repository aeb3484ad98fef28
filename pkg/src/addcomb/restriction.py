"""Fourier analysis on F_p^n and extension estimates for varieties.

The L^4 norm of the extension of an indicator is an energy count:
||(A dσ)^∨||_4^4 = p^n E(A) / |V|^4.  The restriction ratio search uses that
identity, and ``moment4_identity_gap`` checks it against explicit
exponential sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .energy import GroupFunction, as_function, energy
from .errors import UndefinedError, ValidationError, check_work
from .groups import FiniteGroup, Subset
from .varieties import Variety, max_coset_subgroup

POINT_CAP = 10**7
SINGLETON_CAP = 64


def _ambient_shape(G: FiniteGroup) -> tuple[int, ...]:
    if G.spec.kind != "additive":
        raise ValidationError(f"{G.spec} is not an additive group F_p^n")
    p, n = G.spec.p, G.spec.m
    if n * p**n > POINT_CAP:
        raise ValidationError(f"n q^n = {n * p**n} exceeds the {POINT_CAP} point cap")
    return (p,) * n


def dft(g) -> GroupFunction:
    """g^(ξ) = sum_x g(x) e(-x·ξ) on F_p^n, via numpy's FFT.

    Element indices enumerate F_p^n lexicographically, which is numpy's C
    order for an array of shape (p,)*n.
    """
    g = as_function(g)
    G = g.group
    shape = _ambient_shape(G)
    out = np.fft.fftn(g.values.astype(np.complex128).reshape(shape)).ravel()
    return GroupFunction(G, out)


def check_double_transform(g, rtol: float = 1e-9) -> float:
    """Max deviation of dft(dft(g)) from |G| g(-x), relative to |G| max|g|."""
    g = as_function(g)
    G = g.group
    twice = dft(dft(g)).values
    target = G.order * g.values[G.inv_table]
    scale = G.order * max(1.0, float(np.abs(g.values).max()))
    gap = float(np.abs(twice - target).max()) / scale
    assert gap <= rtol, f"double transform off by {gap:.3g}"
    return gap


def e(x: float) -> complex:
    return complex(np.exp(2j * np.pi * x))


@dataclass(frozen=True, eq=False)
class SurfaceFunction:
    """A function on the points of a variety, listed in the order of V.points."""

    variety: Variety
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (len(self.variety.points),):
            raise ValidationError("surface function needs one value per variety point")
        object.__setattr__(self, "values", vals)

    @classmethod
    def indicator(cls, V: Variety, A: Subset) -> "SurfaceFunction":
        pts = V.points
        if not A <= pts:
            raise ValidationError("A is not contained in the variety")
        return cls(V, A.mask[pts.members].astype(np.float64))

    @classmethod
    def ones(cls, V: Variety) -> "SurfaceFunction":
        return cls(V, np.ones(len(V.points)))

    def on_ambient(self) -> np.ndarray:
        G = self.variety.group
        out = np.zeros(G.order, dtype=np.complex128)
        out[self.variety.points.members] = self.values
        return out


def extension(f: SurfaceFunction, x) -> complex:
    """(f dσ)^∨(x) = (1/|V|) sum_{ξ in V} f(ξ) e(x·ξ), summed directly."""
    V = f.variety
    pts = V.points
    if len(pts) == 0:
        raise UndefinedError("extension over an empty variety")
    G = V.group
    x = np.asarray(G.label(x) if np.isscalar(x) else x, dtype=np.int64)
    phase = (G.rows[pts.members] @ x) % V.q
    return complex(np.sum(f.values * np.exp(2j * np.pi * phase / V.q)) / len(pts))


def extension_all(f: SurfaceFunction) -> np.ndarray:
    """(f dσ)^∨ at every x, through the inverse FFT."""
    V = f.variety
    if len(V.points) == 0:
        raise UndefinedError("extension over an empty variety")
    G = V.group
    shape = _ambient_shape(G)
    inv = np.fft.ifftn(f.on_ambient().reshape(shape)).ravel()
    return inv * (G.order / len(V.points))


def lq_surface(f: SurfaceFunction, q_exp: float) -> float:
    """((1/|V|) sum_{ξ in V} |f(ξ)|^q)^{1/q}."""
    if q_exp < 1:
        raise ValidationError("exponent must be >= 1")
    n = len(f.values)
    if n == 0:
        raise UndefinedError("norm over an empty variety")
    return float(np.mean(np.abs(f.values) ** q_exp) ** (1.0 / q_exp))


def lr_space(g, r_exp: float) -> float:
    """(sum_x |g(x)|^r)^{1/r}."""
    if r_exp < 1:
        raise ValidationError("exponent must be >= 1")
    vals = g.values if isinstance(g, GroupFunction) else np.asarray(g)
    return float(np.sum(np.abs(vals) ** r_exp) ** (1.0 / r_exp))


def moment4_identity_gap(V: Variety, A: Subset) -> tuple[float, float, float]:
    """||(A dσ)^∨||_4^4 by exponential sums versus p^n E(A)/|V|^4 by counting.

    Returns (lhs, rhs, relative gap).
    """
    pts = V.points
    if not A <= pts:
        raise ValidationError("A is not contained in the variety")
    if len(A) == 0:
        return 0.0, 0.0, 0.0
    ext = extension_all(SurfaceFunction.indicator(V, A))
    lhs = float(np.sum(np.abs(ext) ** 4))
    rhs = V.group.order * energy(A) / len(pts) ** 4
    return lhs, rhs, abs(lhs - rhs) / rhs


# -- restriction ratio search -----------------------------------------------


@dataclass(frozen=True)
class RestrictionEstimate:
    q_exp: Fraction | float
    r_exp: int
    ratio: float
    extremizer: str
    trials: int
    extremizer_size: int = 0
    extremizer_energy: int = 0

    def to_dict(self) -> dict:
        return {
            "q_exp": self.q_exp,
            "r_exp": self.r_exp,
            "ratio": self.ratio,
            "extremizer": self.extremizer,
            "trials": self.trials,
            "extremizer_size": self.extremizer_size,
            "extremizer_energy": self.extremizer_energy,
        }


def lines_in(V: Variety) -> list[Subset]:
    """All affine lines {x + t v} of F_p^n lying inside the variety."""
    G = V.group
    p, n = G.spec.p, G.spec.m
    pts = V.points
    check_work(len(pts) * (p**n - 1) // (p - 1) * p, "line search")
    # one direction per projective point: first nonzero coordinate equal to 1
    dirs = [d for d in product(range(p), repeat=n) if any(d) and d[next(i for i in range(n) if d[i])] == 1]
    t = np.arange(p)
    found: dict[bytes, Subset] = {}
    rows = G.rows[pts.members]
    for d in dirs:
        step = (t[:, None] * np.asarray(d)[None, :]) % p
        for base in rows:
            line_rows = (base[None, :] + step) % p
            idx = G.index_of(line_rows)
            if pts.mask[idx].all():
                L = Subset(G, idx)
                found.setdefault(np.packbits(L.mask).tobytes(), L)
    return list(found.values())


def _candidates(V: Variety, budget: int, seed: int):
    """Deterministic candidate stream; the random part is a prefix-stable sequence."""
    pts = V.points
    G = V.group
    members = pts.members
    yield "full", pts
    for i, x in enumerate(members[:SINGLETON_CAP]):
        yield f"point:{i:06d}", Subset(G, [x])
    if len(members) >= 2:
        yield "pair:000000", Subset(G, members[:2])
    rows = G.rows[members]
    for j in range(rows.shape[1]):
        for v in np.unique(rows[:, j]):
            yield f"slice:{j}:{int(v):06d}", Subset(G, members[rows[:, j] == v])
    for i, L in enumerate(lines_in(V)):
        yield f"line:{i:06d}", L
    rng = np.random.default_rng(seed)
    for i in range(budget):
        size = int(rng.integers(2, len(members) + 1)) if len(members) >= 2 else len(members)
        yield f"random:{i:06d}", Subset(G, rng.choice(members, size=size, replace=False))


def _indicator_ratio(N: int, nV: int, size: int, E: int, q_exp: float) -> float:
    ext4 = (N * E / nV**4) ** 0.25
    return ext4 / (size / nV) ** (1.0 / q_exp)


def restriction_ratio(V: Variety, q_exp, r_exp: int = 4, search_budget: int = 200,
                      seed: int = 0) -> RestrictionEstimate:
    """max over searched indicators A ⊆ V of ||(A dσ)^∨||_4 / ||A||_{L^q(V, dσ)}."""
    if r_exp != 4:
        raise ValidationError("only r = 4 is supported")
    if len(V.points) == 0:
        raise UndefinedError("restriction ratio of an empty variety")
    _ambient_shape(V.group)
    q = float(q_exp)
    if q < 1:
        raise ValidationError("q must be >= 1")
    N, nV = V.group.order, len(V.points)
    best = None
    trials = 0
    for cid, A in _candidates(V, search_budget, seed):
        trials += 1
        E = energy(A)
        r = _indicator_ratio(N, nV, len(A), E, q)
        if best is None or r > best[0] or (r == best[0] and cid < best[1]):
            best = (r, cid, len(A), E)
    r, cid, size, E = best
    return RestrictionEstimate(q_exp, 4, r, cid, trials, size, E)


@dataclass(frozen=True)
class EnergyExponent:
    c_meas: float
    max_exponent: float
    witness: str
    witness_size: int
    witness_energy: int


def measured_energy_exponent(V: Variety, search_budget: int = 200, seed: int = 0) -> EnergyExponent:
    """c_meas = 3 - max log E(A)/log|A| over searched A ⊆ V with |A| >= 2."""
    best = None
    for cid, A in _candidates(V, search_budget, seed):
        if len(A) < 2:
            continue
        E = energy(A)
        x = round(math.log(E) / math.log(len(A)), 12)
        if best is None or x > best[0] or (x == best[0] and cid < best[1]):
            best = (x, cid, len(A), E)
    if best is None:
        raise UndefinedError("variety has fewer than two points")
    x, cid, size, E = best
    return EnergyExponent(3 - x, x, cid, size, E)


@dataclass(frozen=True)
class TrendRow:
    p: int
    size: int
    c_meas: float
    ratio: float
    extremizer: str

    def to_dict(self) -> dict:
        return {"p": self.p, "|V|": self.size, "c_meas": self.c_meas, "ratio": self.ratio,
                "extremizer-id": self.extremizer}


def restriction_trend(factory, primes, search_budget: int = 200, seed: int = 0) -> list[TrendRow]:
    """Rows (p, |V|, c_meas, ratio at q = 4/(3 - c_meas), extremizer) over a prime ladder."""
    rows = []
    for p in primes:
        V = factory(p)
        ce = measured_energy_exponent(V, search_budget, seed)
        c = max(ce.c_meas, 0.0)
        est = restriction_ratio(V, 4.0 / (3.0 - c), 4, search_budget, seed)
        rows.append(TrendRow(p, len(V.points), ce.c_meas, est.ratio, est.extremizer))
    return rows


def line_free(V: Variety) -> bool:
    """True when t(V) = 1, i.e. V contains no coset of a nontrivial subgroup."""
    return max_coset_subgroup(V.points, gen_bound=V.group.spec.m or 1).t_value == 1
