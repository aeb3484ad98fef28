"""Polynomial varieties over F_p inside an enumerated ambient group.

The coordinates of an element are its canonical label: the vector for
F_p^m, the entries (a, b, c, d) for 2x2 matrix groups and (x, y, z) for the
Heisenberg group.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import UndefinedError, ValidationError
from .groups import (FiniteGroup, GroupSpec, Subset, build_group, enumerate_subgroups,
                     product_set)


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: a tuple of (exponent vector, coefficient) terms."""

    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_terms(cls, terms, p: int | None = None) -> "Polynomial":
        out: dict[tuple[int, ...], int] = {}
        arity = None
        for exps, coeff in terms:
            exps = tuple(int(e) for e in exps)
            if any(e < 0 for e in exps):
                raise ValidationError("negative exponent")
            if arity is None:
                arity = len(exps)
            elif len(exps) != arity:
                raise ValidationError("monomials of different arity in one polynomial")
            c = int(coeff)
            out[exps] = out.get(exps, 0) + c
        if p is not None:
            out = {e: c % p for e, c in out.items()}
        return cls(tuple(sorted((e, c) for e, c in out.items() if c != 0)))

    @property
    def arity(self) -> int | None:
        return len(self.terms[0][0]) if self.terms else None

    def evaluate(self, coords: np.ndarray, p: int) -> np.ndarray:
        """Values mod p at each row of ``coords``."""
        coords = np.asarray(coords, dtype=np.int64) % p
        total = np.zeros(len(coords), dtype=np.int64)
        for exps, coeff in self.terms:
            term = np.full(len(coords), coeff % p, dtype=np.int64)
            for j, e in enumerate(exps):
                for _ in range(e):
                    term = (term * coords[:, j]) % p
            total = (total + term) % p
        return total

    def evaluate_point(self, point: Sequence[int], p: int) -> int:
        total = 0
        for exps, coeff in self.terms:
            total += coeff * math.prod(pow(int(x), e, p) for x, e in zip(point, exps))
        return total % p

    def to_list(self) -> list:
        return [[list(e), int(c)] for e, c in self.terms]


def _parse_polys(raw) -> list:
    """Accept a list of polynomials, or a single polynomial given as its term list."""
    if not raw:
        return []
    first = raw[0]
    if len(first) == 2 and isinstance(first[0], (list, tuple)) and (
            not first[0] or isinstance(first[0][0], (int, np.integer))):
        return [raw]
    return list(raw)


class Variety:
    """Common zero set of ``polys`` inside the ambient group.

    ``meta_dim`` and ``meta_deg`` are caller-supplied metadata; nothing here
    computes degrees symbolically.
    """

    def __init__(self, group: FiniteGroup, polys, meta_dim: int | None = None,
                 meta_deg: int | None = None, name: str | None = None):
        if group.field_p is None:
            raise ValidationError(f"{group.spec} has no prime-field coordinates")
        self.group = group
        self.q = group.field_p
        self.n_vars = group.rows.shape[1]
        parsed = []
        for poly in polys:
            if not isinstance(poly, Polynomial):
                poly = Polynomial.from_terms(poly, self.q)
            else:
                poly = Polynomial.from_terms(poly.terms, self.q)
            if poly.arity is not None and poly.arity != self.n_vars:
                raise ValidationError(
                    f"polynomial arity {poly.arity} != {self.n_vars} coordinates of {group.spec}")
            parsed.append(poly)
        self.polys = tuple(parsed)
        self.meta_dim = meta_dim
        self.meta_deg = meta_deg
        self.name = name or "variety"

    @classmethod
    def from_config(cls, d: dict) -> "Variety":
        if "ambient" not in d or "polys" not in d:
            raise ValidationError("variety needs 'ambient' and 'polys'")
        group = build_group(GroupSpec.from_dict(d["ambient"]))
        return cls(group, _parse_polys(d["polys"]), d.get("dim"), d.get("deg"), d.get("name"))

    def to_config(self) -> dict:
        out = {"ambient": self.group.spec.to_dict(), "polys": [p.to_list() for p in self.polys]}
        if self.meta_dim is not None:
            out["dim"] = self.meta_dim
        if self.meta_deg is not None:
            out["deg"] = self.meta_deg
        out["name"] = self.name
        return out

    def contains(self, point: Sequence[int]) -> bool:
        return all(poly.evaluate_point(point, self.q) == 0 for poly in self.polys)

    @cached_property
    def points(self) -> Subset:
        return variety_points(self)

    def verify_points(self, sample: int = 1000, seed: int = 0) -> bool:
        """Re-evaluate membership pointwise (all elements when the ambient has <= 10^4)."""
        G = self.group
        if G.order <= 10_000:
            idx = range(G.order)
        else:
            idx = np.random.default_rng(seed).choice(G.order, size=sample, replace=False)
        mask = self.points.mask
        return all(self.contains(G.label(int(i))) == bool(mask[int(i)]) for i in idx)

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"Variety({self.name} in {self.group.spec}, |V|={len(self)})"


def variety_points(V: Variety) -> Subset:
    """All ambient elements whose coordinates satisfy every polynomial."""
    G = V.group
    keep = np.ones(G.order, dtype=bool)
    for poly in V.polys:
        keep &= poly.evaluate(G.rows, V.q) == 0
    return Subset.from_mask(G, keep)


def estimate_dimension(V: Variety | Subset, q: int | None = None) -> tuple[int, float]:
    """Round log_q |V| to an integer; refuse when |V| is far from q^d."""
    if isinstance(V, Variety):
        q, size = V.q, len(V.points)
    else:
        size = len(V)
        if q is None:
            q = V.group.field_p
    if size == 0:
        raise UndefinedError("dimension of an empty variety is undefined")
    d_hat = int(round(math.log(size) / math.log(q)))
    ratio = size / q**d_hat
    if abs(ratio - 1) > 0.5:
        raise UndefinedError(
            f"|V| = {size} is not close to q^d for q = {q} (ratio {ratio:.3f} at d = {d_hat}); "
            "the point count is outside the Lang-Weil band")
    return d_hat, ratio


def stabilizer(W: Subset) -> Subset:
    """{g : gW = W}, a subgroup of the ambient group."""
    G = W.group
    if len(W) == 0:
        raise ValidationError("stabilizer of an empty set")
    w0 = int(W.members[0])
    # gW = W forces g w0 in W
    cand = G.mul(W.members, G.inv(w0))
    keep = np.zeros(len(cand), dtype=bool)
    step = max(1, (1 << 22) // len(W))
    for i in range(0, len(cand), step):
        block = cand[i:i + step]
        keep[i:i + step] = W.mask[G.mul(block[:, None], W.members[None, :])].all(axis=1)
    stab = Subset(G, cand[keep])
    closed = product_set(stab, stab)
    assert closed == stab, "stabilizer is not closed under multiplication"
    return stab


@dataclass(frozen=True)
class TParameterResult:
    """Largest subgroup H (among those scanned) with a coset xH inside W."""

    t_value: int
    witness_shift: int
    witness_subgroup: tuple[int, ...]
    gen_bound_used: int
    witness_members: Subset | None = None

    def to_dict(self) -> dict:
        return {
            "t_value": self.t_value,
            "witness_shift": self.witness_shift,
            "witness_subgroup": list(self.witness_subgroup),
            "gen_bound_used": self.gen_bound_used,
        }


def max_coset_subgroup(W: Subset, gen_bound: int = 2) -> TParameterResult:
    """The parameter t(W): max |H| over scanned subgroups H and shifts x with xH in W."""
    G = W.group
    if len(W) == 0:
        raise ValidationError("t(W) of an empty set")
    subgroups = enumerate_subgroups(G, gen_bound)
    for H in sorted(subgroups, key=lambda s: -s.order):
        if H.order > len(W):
            continue
        hm = H.members.members
        step = max(1, (1 << 22) // len(hm))
        for i in range(0, len(W), step):
            xs = W.members[i:i + step]
            inside = W.mask[G.mul(xs[:, None], hm[None, :])].all(axis=1)
            hit = np.flatnonzero(inside)
            if hit.size:
                return TParameterResult(H.order, int(xs[hit[0]]), H.gens, gen_bound, H.members)
    raise AssertionError("the trivial subgroup always fits")  # pragma: no cover


def shift_intersections(V: Subset) -> np.ndarray:
    """Array c with c[g] = |V ∩ gV| for every group element g."""
    G = V.group
    counts = np.zeros(G.order, dtype=np.int64)
    if len(V) == 0:
        return counts
    inv = G.inv(V.members)
    step = max(1, (1 << 22) // len(V))
    for i in range(0, len(V), step):
        counts += np.bincount(G.mul(V.members[i:i + step, None], inv[None, :]).ravel(),
                              minlength=G.order)
    return counts


def shift_intersection_profile(V: Subset) -> dict[int, int]:
    """Histogram {value: number of g with |V ∩ gV| = value}."""
    counts = shift_intersections(V)
    total = int(counts.sum())
    assert total == len(V) ** 2, "sum of |V ∩ gV| must equal |V|^2"
    return dict(sorted(Counter(int(c) for c in counts).items()))


def profile_moment(V: Subset, k: int) -> int:
    """Sum over g of |V ∩ gV|^k, exact."""
    return sum(int(c) ** k for c in shift_intersections(V) if c)


# -- stock varieties --------------------------------------------------------


def parabola(p: int) -> Variety:
    """{(x, y) in F_p^2 : y = x^2}."""
    G = build_group(GroupSpec("additive", p=p, m=2))
    return Variety(G, [[((0, 1), 1), ((2, 0), -1)]], meta_dim=1, meta_deg=2, name=f"parabola/F_{p}")


def line(p: int, slope: int = 1, intercept: int = 0) -> Variety:
    """{(x, y) : y = slope*x + intercept}."""
    G = build_group(GroupSpec("additive", p=p, m=2))
    return Variety(G, [[((0, 1), 1), ((1, 0), -slope), ((0, 0), -intercept)]],
                   meta_dim=1, meta_deg=1, name=f"line/F_{p}")


def parabola_with_line(p: int) -> Variety:
    """{x (y - x^2) = 0}: the parabola together with the line x = 0."""
    G = build_group(GroupSpec("additive", p=p, m=2))
    return Variety(G, [[((1, 1), 1), ((3, 0), -1)]], meta_dim=1, meta_deg=3,
                   name=f"parabola+line/F_{p}")


def paraboloid(p: int, m: int = 3) -> Variety:
    """{x_m = x_1^2 + ... + x_{m-1}^2} in F_p^m."""
    G = build_group(GroupSpec("additive", p=p, m=m))
    terms = [(tuple(1 if j == m - 1 else 0 for j in range(m)), 1)]
    for i in range(m - 1):
        terms.append((tuple(2 if j == i else 0 for j in range(m)), -1))
    return Variety(G, [terms], meta_dim=m - 1, meta_deg=2, name=f"paraboloid/F_{p}^{m}")


def trace_variety(p: int, trace: int, ambient: str = "SL2") -> Variety:
    """{g : tr g = trace} inside SL2(p) (or {tr = trace, det = 1} inside GL2(p))."""
    G = build_group(GroupSpec(ambient, p=p))
    polys = [[((1, 0, 0, 0), 1), ((0, 0, 0, 1), 1), ((0, 0, 0, 0), -trace)]]
    if ambient != "SL2":
        polys.append([((1, 0, 0, 1), 1), ((0, 1, 1, 0), -1), ((0, 0, 0, 0), -1)])
    return Variety(G, polys, meta_dim=2, meta_deg=2, name=f"trace={trace % p}/{G.spec}")
