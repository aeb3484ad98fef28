"""Non-abelian Bohr sets, regularity scans and the equidistribution criterion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import PreconditionError, ResolutionError, ValidationError
from .groups import FiniteGroup, Subset, product_set
from .spectra import Representation, fourier, irreps, operator_norm

MEMBER_SLACK = 1e-12
KAPPA_POINTS = 33
DELTA_GRID = 64


@dataclass(frozen=True, eq=False)
class BohrSet:
    """{g : ||γ(g) - I||_o <= δ for every γ in reps}."""

    reps: tuple[Representation, ...]
    delta: float
    members: Subset

    @property
    def dimension(self) -> int:
        return len(self.reps)

    def __len__(self) -> int:
        return len(self.members)

    def verify(self, sample: int = 500, seed: int = 0) -> bool:
        """Re-check membership on a sample with a fresh SVD per element."""
        G = self.members.group
        rng = np.random.default_rng(seed)
        idx = G.all if G.order <= sample else rng.choice(G.order, size=sample, replace=False)
        for g in idx:
            inside = all(np.linalg.norm(r(g) - np.eye(r.dim), 2) <= self.delta + MEMBER_SLACK
                         for r in self.reps)
            if inside != (int(g) in self.members):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "rep_ids": [r.rep_id for r in self.reps],
            "delta": float(self.delta),
            "members": self.members.tolist(),
        }


def _bohr_mask(reps: Sequence[Representation], delta: float) -> np.ndarray:
    G = reps[0].group
    mask = np.ones(G.order, dtype=bool)
    for r in reps:
        mask &= r.identity_distance <= delta + MEMBER_SLACK
    return mask


def bohr_set(reps, delta: float) -> BohrSet:
    if isinstance(reps, Representation):
        reps = [reps]
    reps = tuple(reps)
    if not reps:
        raise ValidationError("Bohr set needs at least one representation")
    if not 0 < delta <= 2:
        raise ValidationError(f"delta must lie in (0, 2], got {delta}")
    G = reps[0].group
    members = Subset.from_mask(G, _bohr_mask(reps, delta))
    assert G.identity in members
    return BohrSet(reps, float(delta), members)


def _bohr_size(rho: Representation, delta: float) -> int:
    return int(np.count_nonzero(rho.identity_distance <= delta + MEMBER_SLACK))


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    worst_ratio: float  # max over κ != 0 of the size change over 100 d^2 |κ| |B|
    size: int


def kappa_grid(dim: int, points: int = KAPPA_POINTS) -> np.ndarray:
    bound = 1.0 / (100 * dim * dim)
    return np.linspace(-bound, bound, points)


def regularity_check(rho: Representation, delta: float, kappas=None) -> RegularityResult:
    """||B((1+κ)δ)| - |B(δ)|| <= 100 d^2 |κ| |B(δ)| on every grid κ."""
    d = rho.dim
    kappas = kappa_grid(d) if kappas is None else np.asarray(kappas, dtype=np.float64)
    bound = 1.0 / (100 * d * d)
    if np.any(np.abs(kappas) > bound * (1 + 1e-12)):
        raise ValidationError(f"kappa grid exceeds |κ| <= {bound}")
    base = _bohr_size(rho, delta)
    worst = 0.0
    ok = True
    for kappa in kappas:
        change = abs(_bohr_size(rho, (1 + kappa) * delta) - base)
        allowed = 100 * d * d * abs(kappa) * base
        if change > allowed:
            ok = False
        if kappa != 0:
            worst = max(worst, change / allowed)
        elif change:
            worst = math.inf
    return RegularityResult(ok, worst, base)


@dataclass(frozen=True)
class RegularDelta:
    delta1: float
    tried: int
    refined: bool


def regular_delta(rho: Representation, delta: float, grid: int = DELTA_GRID) -> RegularDelta:
    """Some δ1 in [δ, 2δ] for which Bohr(ρ, δ1) passes the regularity check."""
    if not 0 < delta <= 0.5:
        raise ValidationError(f"regular_delta needs 0 < δ <= 1/2, got {delta}")
    pts = np.linspace(delta, 2 * delta, grid)
    scores = []
    for i, d1 in enumerate(pts):
        res = regularity_check(rho, float(d1))
        if res.regular:
            return RegularDelta(float(d1), i + 1, False)
        scores.append(res.worst_ratio)
    # one refinement level around the least irregular grid point
    best = int(np.argmin(scores))
    lo, hi = pts[max(best - 1, 0)], pts[min(best + 1, grid - 1)]
    fine = np.linspace(lo, hi, grid)
    for i, d1 in enumerate(fine):
        res = regularity_check(rho, float(d1))
        if res.regular:
            return RegularDelta(float(d1), grid + i + 1, True)
    raise ResolutionError(
        f"no regular δ1 among {2 * grid} scanned points in [{delta}, {2 * delta}] "
        f"(least irregular ratio {min(scores):.3g} at δ1 = {pts[best]:.6g}); the grid is too coarse")


def bohr_size_ratio(rho: Representation, delta: float) -> float:
    """|Bohr(ρ, δ)| / (δ^{d^2} |G|): the implied constant c^{d^2} of the size bound."""
    if not 0 < delta <= 2:
        raise ValidationError("delta must lie in (0, 2]")
    size = _bohr_size(rho, delta)
    assert size >= 1
    ratio = size / (delta ** (rho.dim**2) * rho.group.order)
    assert ratio > 0
    return ratio


# -- equidistribution --------------------------------------------------------


@dataclass(frozen=True)
class EquidistResult:
    lhs: float
    rhs: float
    passed: bool
    spectral_ratio: float  # max nontrivial ||A^(ρ)||_o / |A|
    product_size: int

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def max_nontrivial_ratio(A: Subset, reps=None) -> float:
    reps = irreps(A.group) if reps is None else reps
    if len(A) == 0:
        return 0.0
    return max((operator_norm(fourier(A, r)) for r in reps if not r.is_trivial), default=0.0) / len(A)


def equidistribution_gap(A: Subset, H: Subset, H_star: Subset, K: float, eps: float,
                         reps=None) -> EquidistResult:
    """||A ∩ H| - |A||H|/|G|| against 2K|H_*| + ε|A| sqrt(|H|/|H_*| + K)."""
    G = A.group
    if G.identity not in H_star:
        raise PreconditionError("H_* must contain the identity")
    hh = len(product_set(H, H_star))
    if hh > len(H) + K * len(H_star):
        raise PreconditionError(f"|H H_*| = {hh} exceeds |H| + K|H_*| = {len(H) + K * len(H_star)}")
    ratio = max_nontrivial_ratio(A, reps)
    if eps < ratio * (1 - 1e-9) - 1e-12:
        raise PreconditionError(f"eps = {eps} is below max nontrivial ||A^||_o/|A| = {ratio}")
    lhs = abs(len(A & H) - len(A) * len(H) / G.order)
    rhs = 2 * K * len(H_star) + eps * len(A) * math.sqrt(len(H) / len(H_star) + K)
    passed = lhs <= rhs
    assert passed, "equidistribution bound failed on verified preconditions"
    return EquidistResult(float(lhs), float(rhs), passed, ratio, hh)


@dataclass(frozen=True)
class WeylWitness:
    h: int
    count: int
    expected: float
    excess: float
    delta: float
    bohr_size: int
    counts: np.ndarray = field(repr=False, default=None)


def inverse_weyl_witness(A: Subset, rho: Representation, eps: float) -> WeylWitness:
    """Translate h maximizing |A ∩ Bohr(ρ, ε/4) h|, for A with ||A^(ρ)||_o >= ε|A|."""
    G = A.group
    if len(A) == 0:
        raise PreconditionError("empty A")
    norm = operator_norm(fourier(A, rho))
    if norm < eps * len(A) * (1 - 1e-9) - 1e-12:
        raise PreconditionError(f"||A^(ρ)||_o = {norm:.6g} < ε|A| = {eps * len(A):.6g}")
    delta = min(eps / 4, 2.0)
    B = bohr_set([rho], delta).members
    # a in Bh  <=>  h = b^{-1} a
    counts = np.bincount(G.mul(G.inv(B.members)[:, None], A.members[None, :]).ravel(),
                         minlength=G.order)
    h = int(np.argmax(counts))
    expected = len(A) * len(B) / G.order
    return WeylWitness(h, int(counts[h]), expected, counts[h] - expected, delta, len(B), counts)
