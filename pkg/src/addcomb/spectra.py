"""Unitary irreducible representations and non-abelian Fourier analysis.

Abelian groups with cyclic coordinates get their characters in closed form.
Every other group is decomposed numerically: a random Hermitian central
element of the group algebra acts on the regular representation with one
eigenvalue per irreducible ρ (multiplicity d_ρ²), and a random Hermitian
element acting on the right then splits each isotypic block into d_ρ
copies of ρ.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from pathlib import Path
from typing import Sequence

import numpy as np

from . import canonical
from .energy import GroupFunction, as_function, convolve_values
from .errors import (CapacityError, DecompositionError, UndefinedError, ValidationError,
                     check_work)
from .groups import FiniteGroup, GroupSpec, Subset, class_index, conjugacy_classes

log = logging.getLogger(__name__)

IRREP_CAP = 1500
DEFAULT_TOL = 1e-8
MAX_TOL = 1e-6
MAX_ATTEMPTS = 5


@dataclass(eq=False)
class Representation:
    """A unitary representation given by one matrix per group element."""

    group: FiniteGroup
    dim: int
    matrices: np.ndarray  # shape (order, dim, dim)
    is_trivial: bool
    rep_id: int = 0

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[int(g)]

    @property
    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    @cached_property
    def identity_distance(self) -> np.ndarray:
        """||ρ(g) - I||_o for every element g."""
        diff = self.matrices - np.eye(self.dim)
        if self.dim == 1:
            return np.abs(diff[:, 0, 0])
        return np.linalg.svd(diff, compute_uv=False)[:, 0]

    def unitarity_error(self) -> float:
        M = self.matrices
        prod = M @ np.conj(np.swapaxes(M, 1, 2))
        return float(np.abs(prod - np.eye(self.dim)).max())

    def homomorphism_error(self, pairs: int = 10_000, seed: int = 0) -> float:
        G = self.group
        n = G.order
        if n * n <= pairs:
            a, b = np.divmod(np.arange(n * n), n)
        else:
            rng = np.random.default_rng(seed)
            a, b = rng.integers(0, n, size=(2, pairs))
        lhs = self.matrices[G.mul(a, b)]
        rhs = self.matrices[a] @ self.matrices[b]
        return float(np.abs(lhs - rhs).max())

    def irreducibility_certificate(self) -> float:
        """(1/|G|) sum |tr ρ(g)|^2, which is 1 exactly for irreducible ρ."""
        return float(np.sum(np.abs(self.character) ** 2) / self.group.order)

    def validate(self) -> None:
        if self.unitarity_error() > 1e-8:
            raise DecompositionError(f"rep {self.rep_id} is not unitary")
        if self.homomorphism_error() > 1e-7:
            raise DecompositionError(f"rep {self.rep_id} is not a homomorphism")
        if abs(self.irreducibility_certificate() - 1) > 1e-6:
            raise DecompositionError(f"rep {self.rep_id} is reducible")

    def __repr__(self) -> str:
        return f"Representation(id={self.rep_id}, dim={self.dim}, trivial={self.is_trivial})"


@dataclass(eq=False)
class FourierCoefficient:
    rep: Representation
    matrix: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.matrix)):
            raise ValidationError("Fourier coefficient has non-finite entries")


# -- decomposition ----------------------------------------------------------


def _abelian_characters(G: FiniteGroup) -> list[Representation]:
    moduli = np.asarray(G.moduli, dtype=np.float64)
    coords = G.rows.astype(np.float64)  # element coordinates
    reps = []
    for rid, k in enumerate(G.rows):
        # χ_k(x) = e(-k·x/m), so that f^(χ_k) is the usual DFT coefficient at k
        phase = (coords * (k / moduli)).sum(axis=1)
        chi = np.exp(-2j * np.pi * phase)
        reps.append(Representation(G, 1, chi.reshape(-1, 1, 1), not k.any(), rid))
    # the zero character is the first label in sorted order
    return reps


def _clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    order = np.argsort(values)
    v = values[order]
    scale = max(1.0, float(np.abs(v).max()))
    cuts = np.flatnonzero(np.diff(v) > tol * scale) + 1
    return [order[seg] for seg in np.split(np.arange(len(v)), cuts)]


def _hermitian_central(G: FiniteGroup, rng) -> np.ndarray:
    """Random class function c with c(g^{-1}) = conj c(g), as a |G| vector."""
    cls = class_index(G)
    n_cls = int(cls.max()) + 1
    vals = rng.standard_normal(n_cls) + 1j * rng.standard_normal(n_cls)
    inv_cls = np.empty(n_cls, dtype=np.intp)
    inv_cls[cls] = cls[G.inv_table]
    vals = (vals + np.conj(vals[inv_cls])) / 2
    return vals[cls]


def _hermitian_random(G: FiniteGroup, rng) -> np.ndarray:
    b = rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order)
    return (b + np.conj(b[G.inv_table])) / 2


def _decompose_once(G: FiniteGroup, rng, tol: float) -> list[Representation] | None:
    n = G.order
    T = G.mul(G.all[:, None], G.all[None, :])
    inv = G.inv_table
    n_classes = len(conjugacy_classes(G))

    # left regular action: (L(c))_{y,x} = c(y x^{-1})
    c = _hermitian_central(G, rng)
    Lc = c[T[:, inv]]
    evals, evecs = np.linalg.eigh(Lc)
    blocks = _clusters(evals, tol)
    sizes = [len(b) for b in blocks]
    if len(blocks) != n_classes or any(isqrt(s) ** 2 != s for s in sizes) or sum(sizes) != n:
        log.debug("isotypic clustering failed at tol=%g: %d blocks, sizes %s", tol, len(blocks), sizes)
        return None

    # right regular action: (R(b))_{y,x} = b(y^{-1} x), commutes with every L(g)
    b = _hermitian_random(G, rng)
    Rb = b[T[inv, :]]
    reps = []
    for block in blocks:
        d = isqrt(len(block))
        U = evecs[:, block]
        if d == 1:
            Q = U
        else:
            M = np.conj(U.T) @ Rb @ U
            w, v = np.linalg.eigh((M + np.conj(M.T)) / 2)
            parts = _clusters(w, tol)
            if len(parts) != d or any(len(p) != d for p in parts):
                log.debug("multiplicity split failed for d=%d at tol=%g", d, tol)
                return None
            Q = U @ v[:, parts[0]]
            Q, _ = np.linalg.qr(Q)
        # ρ(g) = Q^* L(g) Q and (L(g) Q)[y] = Q[g^{-1} y]
        mats = np.empty((n, d, d), dtype=np.complex128)
        Qh = np.conj(Q.T)
        for g in range(n):
            mats[g] = Qh @ Q[T[inv[g]]]
        reps.append(Representation(G, d, mats, False))
    return reps


def _finalize(reps: list[Representation]) -> list[Representation]:
    G = reps[0].group
    for r in reps:
        r.is_trivial = r.dim == 1 and bool(np.allclose(r.matrices, 1, atol=1e-8))
    reps.sort(key=lambda r: (not r.is_trivial, r.dim))
    for i, r in enumerate(reps):
        r.rep_id = i
    if sum(r.is_trivial for r in reps) != 1:
        raise DecompositionError("expected exactly one trivial representation")
    if len(reps) != len(conjugacy_classes(G)):
        raise DecompositionError("irrep count differs from class count")
    total = sum(r.dim**2 for r in reps)
    if total != G.order:
        raise DecompositionError(f"sum of d^2 = {total} != |G| = {G.order}")
    for r in reps:
        r.validate()
    return reps


def irreps(G: FiniteGroup, tol: float = DEFAULT_TOL, seed: int = 0,
           cap: int = IRREP_CAP) -> list[Representation]:
    """Complete list of irreducible unitary representations (trivial first)."""
    key = ("irreps", seed)
    if key in G._cache:
        return G._cache[key]
    if G.order > cap:
        raise CapacityError(f"irreps of {G.spec}: order {G.order} exceeds cap {cap}")
    if G.moduli is not None:
        reps = _finalize(_abelian_characters(G))
        G._cache[key] = reps
        return reps
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        t = tol
        while t <= MAX_TOL * (1 + 1e-9):
            found = _decompose_once(G, rng, t)
            if found is not None:
                reps = _finalize(found)
                log.debug("decomposed %s (seed %d, attempt %d, tol %g)", G.spec, seed, attempt, t)
                G._cache[key] = reps
                return reps
            t *= 2
    raise DecompositionError(
        f"eigenvalue clustering for {G.spec} stayed ambiguous after {MAX_ATTEMPTS} seeds; "
        "retry with a different seed")


# -- irrep cache on disk -----------------------------------------------------


def export_irreps(G: FiniteGroup, reps: Sequence[Representation], seed: int = 0) -> dict:
    return {
        "schema": "addcomb-irreps/1",
        "group": G.spec.to_dict(),
        "seed": seed,
        "reps": [{"dim": r.dim,
                  "re": r.matrices.real.ravel().tolist(),
                  "im": r.matrices.imag.ravel().tolist()} for r in reps],
    }


def import_irreps(G: FiniteGroup, data: dict) -> list[Representation]:
    if data.get("schema") != "addcomb-irreps/1":
        raise ValidationError("not an irrep table")
    if GroupSpec.from_dict(data["group"]) != G.spec:
        raise ValidationError("irrep table belongs to a different group")
    reps = []
    for entry in data["reps"]:
        d = int(entry["dim"])
        mats = (np.asarray(entry["re"]) + 1j * np.asarray(entry["im"])).reshape(G.order, d, d)
        reps.append(Representation(G, d, mats, False))
    return _finalize(reps)


def save_irreps(path, G: FiniteGroup, reps, seed: int = 0) -> None:
    Path(path).write_text(canonical.dumps(export_irreps(G, reps, seed), indent=None))


def load_irreps(path, G: FiniteGroup) -> list[Representation]:
    return import_irreps(G, json.loads(Path(path).read_text()))


# -- Fourier analysis --------------------------------------------------------


def _reps_for(G: FiniteGroup, reps) -> list[Representation]:
    return irreps(G) if reps is None else list(reps)


def fourier(f, rho: Representation) -> FourierCoefficient:
    """f^(ρ) = sum_g f(g) ρ(g)."""
    f = as_function(f)
    if f.group is not rho.group:
        raise ValidationError("function and representation live on different groups")
    return FourierCoefficient(rho, np.tensordot(f.values.astype(np.complex128), rho.matrices, axes=(0, 0)))


def fourier_all(f, reps=None) -> list[FourierCoefficient]:
    f = as_function(f)
    return [fourier(f, r) for r in _reps_for(f.group, reps)]


def inverse_fourier(coeffs: Sequence[FourierCoefficient]) -> GroupFunction:
    """f(g) = (1/|G|) sum_ρ d_ρ tr(f^(ρ) ρ(g^{-1}))."""
    if not coeffs:
        raise ValidationError("no Fourier coefficients")
    G = coeffs[0].rep.group
    dims = sum(c.rep.dim**2 for c in coeffs)
    if dims != G.order or len({c.rep.rep_id for c in coeffs}) != len(coeffs):
        raise ValidationError("incomplete set of Fourier coefficients")
    out = np.zeros(G.order, dtype=np.complex128)
    for c in coeffs:
        mats_inv = c.rep.matrices[G.inv_table]
        # tr(X Y) = sum_{ij} X_ij Y_ji
        out += c.rep.dim * np.einsum("ij,gji->g", c.matrix, mats_inv)
    return GroupFunction(G, out / G.order)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt product tr(a b^*)."""
    return complex(np.sum(a * np.conj(b)))


def parseval_gap(f, reps=None) -> tuple[float, float, float]:
    f = as_function(f)
    G = f.group
    lhs = float(np.sum(np.abs(f.values) ** 2))
    rhs = sum(c.rep.dim * float(np.sum(np.abs(c.matrix) ** 2)) for c in fourier_all(f, reps)) / G.order
    return lhs, rhs, abs(lhs - rhs)


def convolution_identity_gap(f, g, h: GroupFunction, reps=None) -> float:
    """max over ρ of ||h^(ρ) - f^(ρ) g^(ρ)|| relative to ||f^(ρ)|| ||g^(ρ)||."""
    worst = 0.0
    for r in _reps_for(h.group, reps):
        F, Gm, H = fourier(f, r).matrix, fourier(g, r).matrix, fourier(h, r).matrix
        scale = max(1.0, np.linalg.norm(F) * np.linalg.norm(Gm))
        worst = max(worst, float(np.linalg.norm(H - F @ Gm)) / scale)
    return worst


def convolve(f, g, check: bool | None = None) -> GroupFunction:
    """(f*g)(x) = sum_y f(y) g(y^{-1} x), computed exactly in group space.

    When irreps for the group are already cached (or ``check`` is true) the
    identity (f*g)^ = f^ g^ is asserted on every irrep.
    """
    f, g = as_function(f), as_function(g)
    if f.group is not g.group:
        raise ValidationError("functions live on different groups")
    G = f.group
    h = GroupFunction(G, convolve_values(G, f.values, g.values))
    if check is None:
        check = ("irreps", 0) in G._cache
    if check:
        gap = convolution_identity_gap(f, g, h)
        assert gap <= 1e-6, f"convolution spectral identity off by {gap:.3g}"
    return h


def operator_norm(c) -> float:
    """Largest singular value."""
    m = c.matrix if isinstance(c, FourierCoefficient) else np.asarray(c)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


@dataclass(frozen=True)
class OpNormResult:
    rep_id: int
    value: float
    exponent: float
    dim: int


def max_nontrivial_opnorm(A: Subset, reps=None) -> OpNormResult:
    """max over nontrivial ρ of ||A^(ρ)||_o, with exponent log(value)/log|A|."""
    if len(A) <= 1:
        raise UndefinedError("exponent undefined for |A| <= 1")
    best = None
    for r in _reps_for(A.group, reps):
        if r.is_trivial:
            continue
        v = operator_norm(fourier(A, r))
        if best is None or v > best[1]:
            best = (r.rep_id, v, r.dim)
    if best is None:
        raise UndefinedError("group has no nontrivial representation")
    rid, v, d = best
    exponent = float(np.log(v) / np.log(len(A))) if v > 0 else float("-inf")
    return OpNormResult(rid, v, exponent, d)


def t_norm_spectral(fs: Sequence, k: int, reps=None):
    """T_k via Fourier coefficients, with the adjoint on odd positions within each block of k."""
    fs = [as_function(f) for f in fs]
    if k < 1 or len(fs) != 2 * k:
        raise ValidationError("t_norm_spectral needs 2k functions, k >= 1")
    G = fs[0].group
    rep_list = _reps_for(G, reps)
    check_work(2 * k * G.order * sum(r.dim**2 for r in rep_list), f"spectral T_{k}")
    total = 0j
    for r in rep_list:
        mats = []
        for j, f in enumerate(fs):
            m = fourier(f, r).matrix
            mats.append(np.conj(m.T) if (j % k) % 2 == 0 else m)
        X = np.linalg.multi_dot(mats[:k]) if k > 1 else mats[0]
        Y = np.linalg.multi_dot(mats[k:]) if k > 1 else mats[k]
        total += r.dim * hs_inner(X, Y)
    return total / G.order
