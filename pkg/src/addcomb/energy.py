"""Exact energy-type counts on finite groups.

Everything here is integer combinatorics: counts come back as Python ints
and inequalities built on them are checked without tolerance.  Complex
inputs are accepted by ``scalar_k`` and ``t_norm_count`` for cross-checks
against the spectral side.

Conventions.  E(A, B) counts a^{-1} b = a1^{-1} b1.  The fiber of A at
s = (s_1, ..., s_k) is {x : x s_1^{e_1} ... s_k^{e_k} in A for all e}, and
U^k(A) is the (non-normalized) Gowers norm, the sum of |A_s| over s in G^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .errors import UndefinedError, ValidationError, check_work
from .groups import FiniteGroup, Subset, _same_group, product_set, inverse_set

_INT64_SAFE = 2**62


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """A function G -> C stored as one value per element index."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.group.order,):
            raise ValidationError(f"expected {self.group.order} values, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def indicator(cls, A: Subset) -> "GroupFunction":
        return cls(A.group, A.mask.astype(np.int64))

    @classmethod
    def delta(cls, G: FiniteGroup, x: int) -> "GroupFunction":
        v = np.zeros(G.order, dtype=np.int64)
        v[int(x)] = 1
        return cls(G, v)

    @classmethod
    def constant(cls, G: FiniteGroup, c=1) -> "GroupFunction":
        return cls(G, np.full(G.order, c))

    @property
    def is_integral(self) -> bool:
        return np.issubdtype(self.values.dtype, np.integer)

    @property
    def is_indicator(self) -> bool:
        v = self.values
        if np.iscomplexobj(v):
            if np.any(v.imag != 0):
                return False
            v = v.real
        return bool(np.all((v == 0) | (v == 1)))

    def support(self) -> Subset:
        return Subset(self.group, np.flatnonzero(self.values != 0))

    def conj(self) -> "GroupFunction":
        return GroupFunction(self.group, np.conj(self.values) if np.iscomplexobj(self.values)
                             else self.values)

    def star(self) -> "GroupFunction":
        """x -> conj f(x^{-1}); its Fourier transform is the adjoint of f's."""
        return GroupFunction(self.group, self.conj().values[self.group.inv_table])

    def __repr__(self) -> str:
        return f"GroupFunction({self.group.spec}, dtype={self.values.dtype})"


def as_function(f) -> GroupFunction:
    if isinstance(f, GroupFunction):
        return f
    if isinstance(f, Subset):
        return GroupFunction.indicator(f)
    raise ValidationError(f"expected Subset or GroupFunction, got {type(f).__name__}")


def _power_sum(counts: np.ndarray, k: int) -> int:
    counts = counts[counts != 0]
    if counts.size == 0:
        return 0
    top = int(counts.max())
    if top**k * counts.size < _INT64_SAFE:
        return int(np.sum(counts.astype(np.int64) ** k))
    return sum(int(c) ** k for c in counts)


def _dot_exact(a: np.ndarray, b: np.ndarray) -> int:
    if a.size == 0:
        return 0
    top = int(np.abs(a).max()) * int(np.abs(b).max())
    if top * a.size < _INT64_SAFE:
        return int(np.dot(a.astype(np.int64), b.astype(np.int64)))
    return int(np.dot(a.astype(object), b.astype(object)))


def representation_counts(X: np.ndarray, Y: np.ndarray, G: FiniteGroup) -> np.ndarray:
    """r(g) = #{(x, y) in X x Y : xy = g} for index arrays X, Y."""
    counts = np.zeros(G.order, dtype=np.int64)
    if len(X) == 0 or len(Y) == 0:
        return counts
    step = max(1, (1 << 22) // len(Y))
    for i in range(0, len(X), step):
        counts += np.bincount(G.mul(X[i:i + step, None], Y[None, :]).ravel(), minlength=G.order)
    return counts


def quotient_counts(A: Subset, B: Subset) -> np.ndarray:
    """r_{A^{-1}B}(g) = #{(a, b) : a^{-1} b = g}."""
    G = _same_group(A, B)
    return representation_counts(G.inv(A.members), B.members, G)


def energy(A: Subset, B: Subset | None = None) -> int:
    """Common energy E(A, B) = #{(a, a1, b, b1) : a^{-1} b = a1^{-1} b1}."""
    if B is None:
        B = A
    return _power_sum(quotient_counts(A, B), 2)


def energy_moment_k(A: Subset, k: int, side: str = "L", _cross_check: bool = True) -> int:
    """E^L_k(A) (a_1^{-1} b_1 = ... = a_k^{-1} b_k) or E^R_k(A) (b_j a_j^{-1} all equal)."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    G = A.group
    side = side.upper()
    if side == "L":
        counts = quotient_counts(A, A)
    elif side == "R":
        counts = representation_counts(A.members, G.inv(A.members), G)
    else:
        raise ValidationError("side must be 'L' or 'R'")
    value = _power_sum(counts, k)
    if k == 2 and _cross_check and len(A) <= 2000:
        other = energy_moment_k(A, 2, "R" if side == "L" else "L", _cross_check=False)
        assert other == value, "E^L_2 and E^R_2 must coincide"
    return value


# -- fibers and Gowers norms ------------------------------------------------


def _shift_fiber_mask(G: FiniteGroup, mask: np.ndarray, s: int) -> np.ndarray:
    # {x : x in B and x s in B} for B given by mask
    return mask & mask[G.mul(G.all, int(s))]


@dataclass(frozen=True)
class FiberSpec:
    """Ordered shift vector (s_1, ..., s_k)."""

    shifts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))

    def __len__(self) -> int:
        return len(self.shifts)

    def validate(self, G: FiniteGroup) -> None:
        if any(s < 0 or s >= G.order for s in self.shifts):
            raise ValidationError(f"shift outside {G.spec}")


def fiber(A: Subset, shifts: "FiberSpec | Sequence[int]") -> Subset:
    """A_s = {x : x s_1^{e_1} ... s_k^{e_k} in A for every e in {0,1}^k}.

    Built by peeling shifts from the right: A_(s_1..s_k) = (A_{s_k})_(s_1..s_{k-1}),
    with A_s = A ∩ A s^{-1}.
    """
    G = A.group
    if not isinstance(shifts, FiberSpec):
        shifts = FiberSpec(tuple(shifts))
    shifts.validate(G)
    mask = A.mask.copy()
    for s in reversed(shifts.shifts):
        if not mask.any():
            break
        mask = _shift_fiber_mask(G, mask, s)
    return Subset.from_mask(G, mask)


def _difference_support(G: FiniteGroup, mask: np.ndarray) -> np.ndarray:
    members = np.flatnonzero(mask)
    return np.flatnonzero(representation_counts(G.inv(members), members, G))


def _energy_mask(G: FiniteGroup, mask: np.ndarray) -> int:
    members = np.flatnonzero(mask)
    return _power_sum(representation_counts(G.inv(members), members, G), 2)


def _gowers_recursive(G: FiniteGroup, mask: np.ndarray, k: int) -> int:
    size = int(np.count_nonzero(mask))
    if size == 0:
        return 0
    if k == 1:
        return size * size
    if k == 2:
        return _energy_mask(G, mask)
    total = 0
    for s in _difference_support(G, mask):
        total += _gowers_recursive(G, _shift_fiber_mask(G, mask, s), k - 1)
    return total


def _gowers_direct(A: Subset, k: int) -> int:
    G = A.group
    n = G.order
    check_work(n ** (k + 1), f"direct U^{k} on a group of order {n}",
               "use method='recursive'")
    if k == 0:
        return len(A)
    grids = np.indices((n,) * k).reshape(k, -1)
    vertices = [np.full(grids.shape[1], G.identity, dtype=np.intp)]
    for j in range(k):
        vertices = vertices + [G.mul(v, grids[j]) for v in vertices]
    mask = A.mask
    total = 0
    for x0 in range(n):
        ok = np.ones(grids.shape[1], dtype=bool)
        for v in vertices:
            ok &= mask[G.mul(x0, v)]
            if not ok.any():
                break
        total += int(np.count_nonzero(ok))
    return total


def gowers_norm(A: Subset, k: int, method: str = "recursive") -> int:
    """Non-normalized Gowers norm ||A||_{U^k}.

    ``direct`` enumerates x_0, ..., x_k literally (work-capped);
    ``recursive`` uses U^{k+1}(A) = sum over s in A^{-1}A of U^k(A_s);
    ``fibers`` sums |A_s|^2 over s in G^{k-1}.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    if method == "direct":
        return _gowers_direct(A, k)
    if method == "recursive":
        return _gowers_recursive(A.group, A.mask, k)
    if method == "fibers":
        return fiber_power_sum(A, k - 1, 2)
    raise ValidationError(f"unknown method {method!r}")


def fiber_power_sum(A: Subset, length: int, power: int) -> int:
    """Sum over all s in G^length of |A_s|^power, enumerating every shift vector.

    Independent of the A^{-1}A pruning used by the recursive routes; the
    innermost shift is vectorized.
    """
    G = A.group
    n = G.order
    check_work(n ** (length + 1), f"fiber enumeration of length {length}")
    if length == 0:
        return len(A) ** power
    table = G.mul(G.all[:, None], G.all[None, :])
    total = 0
    for outer in product(range(n), repeat=length - 1):
        mask = A.mask.copy()
        for s in reversed(outer):
            mask = mask & mask[table[:, s]]
        if not mask.any():
            continue
        # sizes[s1] = |{x : B(x) and B(x s1)}| for B = mask
        sizes = (mask[:, None] & mask[table]).sum(axis=0)
        total += _power_sum(sizes, power)
    return total


def moment_sequence(V: Subset, k: int, l: int) -> int:
    """E^{(l)}_k(V) = sum over s in G^l of |V_s|^k."""
    if k < 1 or l < 0:
        raise ValidationError("need k >= 1 and l >= 0")
    G = V.group
    check_work(len(V) ** 2 * max(1, len(V)) ** max(0, l - 1) * 2, f"moment E^({l})_{k}")

    def rec(mask: np.ndarray, depth: int) -> int:
        size = int(np.count_nonzero(mask))
        if size == 0:
            return 0
        if depth == 0:
            return size**k
        if depth == 1:
            members = np.flatnonzero(mask)
            return _power_sum(representation_counts(G.inv(members), members, G), k)
        return sum(rec(_shift_fiber_mask(G, mask, s), depth - 1)
                   for s in _difference_support(G, mask))

    return rec(V.mask, l)


# -- scalar products <f, g>_k -----------------------------------------------


def _scalar_sets(G: FiniteGroup, a: np.ndarray, b: np.ndarray, k: int) -> int:
    na, nb = int(np.count_nonzero(a)), int(np.count_nonzero(b))
    if na == 0 or nb == 0:
        return 0
    if k == 0:
        return na * nb
    am, bm = np.flatnonzero(a), np.flatnonzero(b)
    ra = representation_counts(G.inv(am), am, G)
    rb = representation_counts(G.inv(bm), bm, G)
    if k == 1:
        return _dot_exact(ra, rb)
    total = 0
    for s in np.flatnonzero((ra > 0) & (rb > 0)):
        total += _scalar_sets(G, _shift_fiber_mask(G, a, s), _shift_fiber_mask(G, b, s), k - 1)
    return total


def _scalar_general(table: np.ndarray, f: np.ndarray, g: np.ndarray, k: int):
    if k == 0:
        return f.sum() * np.conj(g.sum())
    if k == 1:
        fs = (f[:, None] * np.conj(f[table])).sum(axis=0)
        gs = (g[:, None] * np.conj(g[table])).sum(axis=0)
        return np.sum(fs * np.conj(gs))
    total = 0
    for s in range(len(f)):
        fs = f * np.conj(f[table[:, s]])
        if not fs.any():
            continue
        gs = g * np.conj(g[table[:, s]])
        if not gs.any():
            continue
        total = total + _scalar_general(table, fs, gs, k - 1)
    return total


def scalar_k(f, g, k: int):
    """<f, g>_k = sum over (s, t) and x of f_s(x) conj(g_s(x t)).

    Indicators take an exact integer path; general functions go through
    complex arithmetic.
    """
    if k < 0:
        raise ValidationError("k must be >= 0")
    f, g = as_function(f), as_function(g)
    G = f.group
    if g.group is not G:
        raise ValidationError("functions live in different groups")
    if f.is_indicator and g.is_indicator:
        a = f.values.real != 0 if np.iscomplexobj(f.values) else f.values != 0
        b = g.values.real != 0 if np.iscomplexobj(g.values) else g.values != 0
        value = _scalar_sets(G, a, b, k)
        assert value >= 0, "scalar product of indicators must be nonnegative"
        return value
    check_work(G.order ** (k + 1), f"<f,g>_{k} on general functions")
    table = G.mul(G.all[:, None], G.all[None, :])
    fv = f.values.astype(np.complex128)
    gv = g.values.astype(np.complex128)
    return complex(_scalar_general(table, fv, gv, k))


# -- convolution and T_k -----------------------------------------------------


def convolve_values(G: FiniteGroup, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(f*g)(x) = sum_y f(y) g(y^{-1} x); exact for integer inputs."""
    support = np.flatnonzero(f)
    if np.issubdtype(f.dtype, np.integer) and np.issubdtype(g.dtype, np.integer):
        bound = (int(np.abs(f).max()) if f.size else 0) * (int(np.abs(g).max()) if g.size else 0)
        dtype = np.int64 if bound * max(1, len(support)) < _INT64_SAFE else object
    else:
        dtype = np.result_type(f.dtype, g.dtype, np.float64)
    out = np.zeros(G.order, dtype=dtype)
    if len(support) == 0:
        return out
    fv = f.astype(dtype)
    gv = g.astype(dtype)
    step = max(1, (1 << 22) // G.order)
    for i in range(0, len(support), step):
        ys = support[i:i + step]
        rows = G.mul(G.inv(ys)[:, None], G.all[None, :])
        out = out + fv[ys] @ gv[rows]
    return out


def convolution_power(A, k: int) -> GroupFunction:
    """A^{(k)} = A * A * ... * A (k factors)."""
    f = as_function(A)
    out = f.values
    for _ in range(k - 1):
        out = convolve_values(f.group, out, f.values)
    return GroupFunction(f.group, out)


def _alternating_product(fs: Sequence[GroupFunction]) -> np.ndarray:
    # factor j (1-based within its block of k) is f_j^* when j is odd
    G = fs[0].group
    acc = None
    for j, f in enumerate(fs, start=1):
        vals = f.star().values if j % 2 == 1 else f.values
        acc = vals if acc is None else convolve_values(G, acc, vals)
    return acc


def t_norm_count(fs: Sequence, k: int):
    """T_k(f_1, ..., f_2k) evaluated in group space.

    Counts tuples with x_1^{-1} x_2 x_3^{-1} ... = y_1^{-1} y_2 y_3^{-1} ...
    (both sides carry the same alternation, so T_k(f) = sum |f^* f f^* ...|^2
    is nonnegative for every k), weighted by the conjugation pattern; for
    indicators this is an exact integer.
    """
    fs = [as_function(f) for f in fs]
    if k < 1 or len(fs) != 2 * k:
        raise ValidationError("t_norm_count needs 2k functions, k >= 1")
    G = _same_group(*[f.support() for f in fs]) if fs else None
    check_work(2 * k * G.order**2, f"T_{k} by convolution")
    left = _alternating_product(fs[:k])
    right = _alternating_product(fs[k:])
    if all(f.is_integral for f in fs):
        return _dot_exact(np.asarray(left), np.asarray(right))
    return complex(np.sum(left * np.conj(right)))


# -- exponent recurrence -----------------------------------------------------


@dataclass(frozen=True)
class ExponentSolution:
    """Exponents in E(A,B) <= <A,B>_0^{a_0} prod_j (U^j(A) U^j(B))^{a_j} <A,B>_k^beta."""

    k: int
    alphas: tuple[Fraction, ...]
    beta: Fraction
    xs: tuple[Fraction, ...]

    @staticmethod
    def omega(j: int) -> Fraction:
        return 3 + Fraction(1, j)

    def homogeneity_ok(self) -> bool:
        a = self.alphas
        return 2 == a[0] + sum(a[j] * 2**j for j in range(1, self.k)) + 2**self.k * self.beta

    def energy_ok(self) -> bool:
        a = self.alphas
        return 3 == 2 * a[0] + 2 * sum(a[j] * (j + 1) for j in range(1, self.k)) + (self.k + 2) * self.beta

    def recurrence_ok(self) -> bool:
        k, x = self.k, (None,) + self.xs  # 1-based
        ok = all(x[j - 1] + 2 * x[j + 1] == self.omega(j) * x[j] for j in range(2, k - 1))
        if k >= 3:
            ok = ok and x[k - 2] == self.omega(k - 1) * x[k - 1]
        return ok and all(v > 0 for v in self.xs)

    def beta_range_ok(self) -> bool:
        return Fraction(1, 4**self.k) <= self.beta <= Fraction(2, 2**self.k)

    def invariants(self) -> dict[str, bool]:
        return {
            "homogeneity": self.homogeneity_ok(),
            "energy": self.energy_ok(),
            "recurrence": self.recurrence_ok(),
            "beta_range": self.beta_range_ok(),
        }

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alphas": [str(a) for a in self.alphas],
            "beta": str(self.beta),
            "xs": [str(x) for x in self.xs],
        }


def gowers_exponents(k: int) -> ExponentSolution:
    """Exact solution of the weight recurrence, normalized by x_{k-1} = 1.

    Multiplying the inequalities <.,.>_j^{omega_j} <= <.,.>_{j-1}^2 <.,.>_{j+1}
    (U^j U^j)^{1/j} with weights x_j cancels every middle term, leaving
    <A,B>_1^{4x_1 - 2x_2} on the left.
    """
    if k < 2:
        raise ValidationError("k must be >= 2")
    om = ExponentSolution.omega
    x = {k - 1: Fraction(1)}
    if k >= 3:
        x[k - 2] = om(k - 1) * x[k - 1]
    for j in range(k - 2, 1, -1):
        x[j - 1] = om(j) * x[j] - 2 * x[j + 1]
    x1 = x[1]
    x2 = x.get(2, Fraction(0)) if k >= 3 else Fraction(0)
    lead = 4 * x1 - 2 * x2
    xs = tuple(x[j] for j in range(1, k))
    alphas = (2 * x1 / lead,) + tuple(x[j] / (j * lead) for j in range(1, k))
    return ExponentSolution(k=k, alphas=alphas, beta=x[k - 1] / lead, xs=xs)


# -- dyadic pigeonholing -----------------------------------------------------


@dataclass(frozen=True)
class DyadicLevel:
    delta: float
    level: Subset
    score: float


def dyadic_level_set(f, A: Subset) -> DyadicLevel:
    """Level {x : D < f(x) <= 2D}, D a power of two, maximizing D^2 E(A, P)."""
    f = as_function(f)
    vals = np.real(f.values).astype(np.float64)
    if np.any(vals < 0):
        raise ValidationError("dyadic_level_set needs a nonnegative function")
    pos = vals[vals > 0]
    if pos.size == 0:
        raise UndefinedError("f vanishes identically: no dyadic level")
    lo = math.floor(math.log2(pos.min())) - 1
    hi = math.ceil(math.log2(pos.max())) + 1
    best = None
    for m in range(lo, hi + 1):
        delta = 2.0**m
        mask = (vals > delta) & (vals <= 2 * delta)
        if not mask.any():
            continue
        P = Subset.from_mask(f.group, mask)
        score = delta * delta * energy(A, P)
        if best is None or score > best.score:
            best = DyadicLevel(delta, P, score)
    return best


def difference_set(A: Subset, B: Subset | None = None) -> Subset:
    """A^{-1} B."""
    return product_set(inverse_set(A), A if B is None else B)
