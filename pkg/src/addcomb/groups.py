"""Finite groups with index-based arithmetic, subsets and subgroup machinery.

Every group is enumerated up front.  Elements are the integers ``0..order-1``
assigned by sorting canonical labels (tuples of small integers: residues,
matrix entries in row-major order, permutation images), so outputs are
deterministic across runs.  Multiplication is a dense lookup table up to
``TABLE_CAP`` elements and is recomputed from labels above it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapacityError, ValidationError

TABLE_CAP = 5040
MAX_ORDER = 100_000

_KIND_ALIASES = {
    "cyclic": "cyclic",
    "z": "cyclic",
    "additive": "additive",
    "fp": "additive",
    "dihedral": "dihedral",
    "symmetric": "symmetric",
    "sl2": "SL2",
    "gl2": "GL2",
    "borel2": "borel2",
    "borel": "borel2",
    "heisenberg": "heisenberg",
    "product": "product",
    "direct-product": "product",
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class GroupSpec:
    """Recipe for a built-in group family.

    ``kind`` is one of cyclic(n), additive(p, m) = (F_p^m, +), dihedral(n) of
    order 2n, symmetric(n), SL2(p), GL2(p), borel2(p) (upper-triangular part
    of SL2), heisenberg(p) (3x3 unitriangular) or product(factors).
    """

    kind: str
    n: int | None = None
    p: int | None = None
    m: int | None = None
    factors: tuple["GroupSpec", ...] = ()

    def __post_init__(self):
        kind = _KIND_ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise ValidationError(f"unknown group kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "factors", tuple(self.factors))
        if kind in ("cyclic", "dihedral", "symmetric"):
            if self.n is None or int(self.n) < 1:
                raise ValidationError(f"{kind} needs a positive integer n")
        if kind in ("additive", "SL2", "GL2", "borel2", "heisenberg"):
            if self.p is None or not is_prime(int(self.p)):
                raise ValidationError(f"{kind} needs a prime p, got {self.p!r}")
        if kind == "additive" and (self.m is None or int(self.m) < 1):
            object.__setattr__(self, "m", 1)
        if kind == "product" and len(self.factors) < 1:
            raise ValidationError("product needs at least one factor")

    @classmethod
    def from_dict(cls, d: dict) -> "GroupSpec":
        if isinstance(d, GroupSpec):
            return d
        if not isinstance(d, dict) or "kind" not in d:
            raise ValidationError(f"group spec must be an object with 'kind': {d!r}")
        factors = tuple(cls.from_dict(f) for f in d.get("factors", ()))
        unknown = set(d) - {"kind", "n", "p", "m", "factors"}
        if unknown:
            raise ValidationError(f"unknown group spec keys {sorted(unknown)}")
        return cls(kind=d["kind"], n=d.get("n"), p=d.get("p"), m=d.get("m"), factors=factors)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        for key in ("n", "p", "m"):
            val = getattr(self, key)
            if val is not None:
                out[key] = int(val)
        if self.factors:
            out["factors"] = [f.to_dict() for f in self.factors]
        return out

    def expected_order(self) -> int:
        k = self.kind
        if k == "cyclic":
            return self.n
        if k == "additive":
            return self.p**self.m
        if k == "dihedral":
            return 2 * self.n
        if k == "symmetric":
            return math.factorial(self.n)
        if k == "SL2":
            return self.p * (self.p**2 - 1)
        if k == "GL2":
            return (self.p**2 - 1) * (self.p**2 - self.p)
        if k == "borel2":
            return self.p * (self.p - 1)
        if k == "heisenberg":
            return self.p**3
        return math.prod(f.expected_order() for f in self.factors)

    def __str__(self) -> str:
        k = self.kind
        if k == "cyclic":
            return f"Z_{self.n}"
        if k == "additive":
            return f"F_{self.p}^{self.m}"
        if k == "dihedral":
            return f"D_{self.n}"
        if k == "symmetric":
            return f"S_{self.n}"
        if k in ("SL2", "GL2"):
            return f"{k}({self.p})"
        if k == "borel2":
            return f"B({self.p})"
        if k == "heisenberg":
            return f"Heis({self.p})"
        return " x ".join(str(f) for f in self.factors)


@dataclass
class _Law:
    rows: np.ndarray
    identity: np.ndarray
    compose: Callable[[np.ndarray, np.ndarray], np.ndarray]
    invert: Callable[[np.ndarray], np.ndarray]
    moduli: tuple[int, ...] | None  # set for products of cyclic coordinates
    field_p: int | None
    abelian: bool


def _cyclic_law(n: int) -> _Law:
    return _Law(
        rows=np.arange(n, dtype=np.int64)[:, None],
        identity=np.zeros(1, dtype=np.int64),
        compose=lambda x, y: (x + y) % n,
        invert=lambda x: (-x) % n,
        moduli=(n,),
        field_p=n if is_prime(n) else None,
        abelian=True,
    )


def _additive_law(p: int, m: int) -> _Law:
    rows = np.array(list(itertools.product(range(p), repeat=m)), dtype=np.int64).reshape(-1, m)
    return _Law(
        rows=rows,
        identity=np.zeros(m, dtype=np.int64),
        compose=lambda x, y: (x + y) % p,
        invert=lambda x: (-x) % p,
        moduli=(p,) * m,
        field_p=p,
        abelian=True,
    )


def _dihedral_law(n: int) -> _Law:
    # (a, b) stands for r^a s^b
    rows = np.array([(a, b) for a in range(n) for b in range(2)], dtype=np.int64)

    def compose(x, y):
        sign = 1 - 2 * x[..., 1]
        return np.stack([(x[..., 0] + sign * y[..., 0]) % n, (x[..., 1] + y[..., 1]) % 2], axis=-1)

    def invert(x):
        a = np.where(x[..., 1] == 0, (-x[..., 0]) % n, x[..., 0])
        return np.stack([a, x[..., 1]], axis=-1)

    return _Law(rows, np.zeros(2, dtype=np.int64), compose, invert, None, None, n <= 2)


def _symmetric_law(n: int) -> _Law:
    rows = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)

    def compose(x, y):
        # (xy)(i) = x(y(i))
        x, y = np.broadcast_arrays(x, y)
        return np.take_along_axis(x, y, axis=-1)

    def invert(x):
        return np.argsort(x, axis=-1)

    return _Law(rows, np.arange(n, dtype=np.int64), compose, invert, None, None, n <= 2)


def _matrix_law(p: int, kind: str) -> _Law:
    grid = np.array(list(itertools.product(range(p), repeat=4)), dtype=np.int64)
    a, b, c, d = grid.T
    det = (a * d - b * c) % p
    if kind == "SL2":
        keep = det == 1
    elif kind == "GL2":
        keep = det != 0
    else:
        keep = (det == 1) & (c == 0)
    rows = grid[keep]
    inv_mod = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)

    def compose(x, y):
        x0, x1, x2, x3 = (x[..., i] for i in range(4))
        y0, y1, y2, y3 = (y[..., i] for i in range(4))
        return np.stack(
            [(x0 * y0 + x1 * y2) % p, (x0 * y1 + x1 * y3) % p,
             (x2 * y0 + x3 * y2) % p, (x2 * y1 + x3 * y3) % p],
            axis=-1,
        )

    def invert(x):
        x0, x1, x2, x3 = (x[..., i] for i in range(4))
        di = inv_mod[(x0 * x3 - x1 * x2) % p]
        return np.stack([(di * x3) % p, (-di * x1) % p, (-di * x2) % p, (di * x0) % p], axis=-1)

    abelian = kind == "borel2" and p == 2
    return _Law(rows, np.array([1, 0, 0, 1], dtype=np.int64), compose, invert, None, p, abelian)


def _heisenberg_law(p: int) -> _Law:
    # (x, y, z) is [[1, x, z], [0, 1, y], [0, 0, 1]]
    rows = np.array(list(itertools.product(range(p), repeat=3)), dtype=np.int64)

    def compose(u, v):
        return np.stack(
            [(u[..., 0] + v[..., 0]) % p, (u[..., 1] + v[..., 1]) % p,
             (u[..., 2] + v[..., 2] + u[..., 0] * v[..., 1]) % p],
            axis=-1,
        )

    def invert(u):
        return np.stack(
            [(-u[..., 0]) % p, (-u[..., 1]) % p, (-u[..., 2] + u[..., 0] * u[..., 1]) % p], axis=-1
        )

    return _Law(rows, np.zeros(3, dtype=np.int64), compose, invert, None, p, False)


def _product_law(laws: Sequence[_Law]) -> _Law:
    widths = [law.rows.shape[1] for law in laws]
    cuts = np.cumsum([0] + widths)
    rows = laws[0].rows
    for law in laws[1:]:
        rows = np.concatenate(
            [np.repeat(rows, len(law.rows), axis=0), np.tile(law.rows, (len(rows), 1))], axis=1
        )

    def split(x):
        return [x[..., cuts[i]:cuts[i + 1]] for i in range(len(laws))]

    def compose(x, y):
        return np.concatenate(
            [law.compose(xi, yi) for law, xi, yi in zip(laws, split(x), split(y))], axis=-1
        )

    def invert(x):
        return np.concatenate([law.invert(xi) for law, xi in zip(laws, split(x))], axis=-1)

    moduli = None
    if all(law.moduli is not None for law in laws):
        moduli = tuple(itertools.chain.from_iterable(law.moduli for law in laws))
    ps = {law.field_p for law in laws}
    field_p = ps.pop() if len(ps) == 1 else None
    return _Law(
        rows,
        np.concatenate([law.identity for law in laws]),
        compose,
        invert,
        moduli,
        field_p,
        all(law.abelian for law in laws),
    )


def _law_for(spec: GroupSpec) -> _Law:
    k = spec.kind
    if k == "cyclic":
        return _cyclic_law(spec.n)
    if k == "additive":
        return _additive_law(spec.p, spec.m)
    if k == "dihedral":
        return _dihedral_law(spec.n)
    if k == "symmetric":
        return _symmetric_law(spec.n)
    if k in ("SL2", "GL2", "borel2"):
        return _matrix_law(spec.p, k)
    if k == "heisenberg":
        return _heisenberg_law(spec.p)
    return _product_law([_law_for(f) for f in spec.factors])


class FiniteGroup:
    """An enumerated finite group.

    ``mul`` and ``inv`` accept integers or integer arrays (broadcasting like
    numpy) and return element indices.  Instances are immutable after
    construction and safe to share.
    """

    def __init__(self, spec: GroupSpec, law: _Law, table_cap: int = TABLE_CAP):
        rows = np.asarray(law.rows, dtype=np.int64)
        radix = rows.max(axis=0) + 1 if len(rows) else np.ones(rows.shape[1], dtype=np.int64)
        self._weights = np.ones(rows.shape[1], dtype=np.int64)
        for i in range(rows.shape[1] - 2, -1, -1):
            self._weights[i] = self._weights[i + 1] * radix[i + 1]
        order_idx = np.lexsort(rows.T[::-1])
        rows = rows[order_idx]
        rows.setflags(write=False)
        self.spec = spec
        self.rows = rows
        self._codes = rows @ self._weights
        if np.any(np.diff(self._codes) <= 0):
            raise ValidationError(f"duplicate element labels in {spec}")
        self._law = law
        self.order = len(rows)
        self.field_p = law.field_p
        self.moduli = law.moduli
        self.identity = int(self.index_of(law.identity))
        self._table = None
        self.inv_table = self.index_of(law.invert(rows))
        self.inv_table.setflags(write=False)
        if self.order <= table_cap:
            dtype = np.int16 if self.order < 2**15 else np.int32
            table = np.empty((self.order, self.order), dtype=dtype)
            for i in range(self.order):
                table[i] = self.index_of(law.compose(rows[i][None, :], rows))
            table.setflags(write=False)
            self._table = table
        self._abelian = self._compute_abelian(law)
        self._cache: dict = {}
        self._check_invariants()

    # -- element arithmetic -------------------------------------------------

    @property
    def dense(self) -> bool:
        return self._table is not None

    def index_of(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        codes = rows @ self._weights
        pos = np.searchsorted(self._codes, codes)
        pos = np.clip(pos, 0, self.order - 1)
        if not np.all(self._codes[pos] == codes):
            raise ValidationError(f"rows are not elements of {self.spec}")
        return pos.astype(np.intp)

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self._table is not None:
            out = self._table[a, b].astype(np.intp)
        else:
            out = self.index_of(self._law.compose(self.rows[a], self.rows[b]))
        return int(out) if out.ndim == 0 else out

    def inv(self, a):
        out = self.inv_table[np.asarray(a)]
        return int(out) if np.ndim(out) == 0 else out

    def label(self, i: int) -> tuple:
        return tuple(int(v) for v in self.rows[i])

    @property
    def labels(self) -> list[tuple]:
        return [tuple(int(v) for v in row) for row in self.rows]

    def element(self, label: Sequence[int]) -> int:
        return int(self.index_of(np.asarray(label, dtype=np.int64)))

    def power(self, x: int, e: int) -> int:
        e = int(e)
        if e < 0:
            x, e = self.inv(x), -e
        result, base = self.identity, int(x)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def element_order(self, x: int) -> int:
        y, k = int(x), 1
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    @property
    def is_abelian(self) -> bool:
        return self._abelian

    def _compute_abelian(self, law: _Law) -> bool:
        if self._table is not None:
            return bool(np.array_equal(self._table, self._table.T))
        return law.abelian

    @property
    def all(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.intp)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.spec}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def _check_invariants(self) -> None:
        everything = self.all
        e = self.identity
        if not (np.array_equal(self.mul(e, everything), everything)
                and np.array_equal(self.mul(everything, e), everything)):
            raise ValidationError(f"identity law fails in {self.spec}")
        if not np.all(self.mul(everything, self.inv_table) == e):
            raise ValidationError(f"inverse law fails in {self.spec}")
        n = self.order
        if n <= 256 and self._table is not None:
            t = self._table.astype(np.intp)
            for a in range(n):
                if not np.array_equal(t[t[a]], t[a][t]):
                    raise ValidationError(f"associativity fails in {self.spec}")
        else:
            rng = np.random.default_rng(0)
            x, y, z = rng.integers(0, n, size=(3, 10_000))
            if not np.array_equal(self.mul(self.mul(x, y), z), self.mul(x, self.mul(y, z))):
                raise ValidationError(f"associativity fails in {self.spec}")


@lru_cache(maxsize=64)
def _build_cached(spec: GroupSpec, table_cap: int) -> FiniteGroup:
    return FiniteGroup(spec, _law_for(spec), table_cap=table_cap)


def build_group(spec, *, table_cap: int = TABLE_CAP, max_order: int = MAX_ORDER) -> FiniteGroup:
    """Build (and cache) the group described by ``spec`` (a GroupSpec or dict)."""
    if not isinstance(spec, GroupSpec):
        spec = GroupSpec.from_dict(spec)
    order = spec.expected_order()
    if order > max_order:
        raise CapacityError(f"{spec} has order {order} > cap {max_order}")
    group = _build_cached(spec, table_cap)
    if group.order != order:
        raise ValidationError(f"{spec}: enumerated {group.order} elements, expected {order}")
    return group


# -- subsets ----------------------------------------------------------------


class Subset:
    """A set of elements of one group, stored as a sorted index array."""

    __slots__ = ("group", "members", "_mask")

    def __init__(self, group: FiniteGroup, members: Iterable[int] = ()):
        arr = np.unique(np.asarray(list(members) if not isinstance(members, np.ndarray) else members,
                                   dtype=np.intp))
        if arr.size and (arr[0] < 0 or arr[-1] >= group.order):
            raise ValidationError("subset indices out of range")
        arr.setflags(write=False)
        self.group = group
        self.members = arr
        self._mask = None

    @classmethod
    def from_mask(cls, group: FiniteGroup, mask: np.ndarray) -> "Subset":
        return cls(group, np.flatnonzero(mask))

    @classmethod
    def from_labels(cls, group: FiniteGroup, labels: Iterable[Sequence[int]]) -> "Subset":
        labels = list(labels)
        if not labels:
            return cls(group)
        return cls(group, group.index_of(np.asarray(labels, dtype=np.int64)))

    @classmethod
    def whole(cls, group: FiniteGroup) -> "Subset":
        return cls(group, group.all)

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.group.order, dtype=bool)
            m[self.members] = True
            m.setflags(write=False)
            self._mask = m
        return self._mask

    def indicator(self) -> np.ndarray:
        return self.mask.astype(np.float64)

    def tolist(self) -> list[int]:
        return [int(x) for x in self.members]

    def __len__(self) -> int:
        return int(self.members.size)

    def __iter__(self):
        return (int(x) for x in self.members)

    def __contains__(self, x) -> bool:
        return 0 <= int(x) < self.group.order and bool(self.mask[int(x)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subset):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((id(self.group), self.members.tobytes()))

    def __le__(self, other: "Subset") -> bool:
        _same_group(self, other)
        return bool(np.all(other.mask[self.members]))

    def __and__(self, other: "Subset") -> "Subset":
        _same_group(self, other)
        return Subset.from_mask(self.group, self.mask & other.mask)

    def __or__(self, other: "Subset") -> "Subset":
        _same_group(self, other)
        return Subset.from_mask(self.group, self.mask | other.mask)

    def __repr__(self) -> str:
        head = self.tolist()[:8]
        more = "..." if len(self) > 8 else ""
        return f"Subset({self.group.spec}, {head}{more}, size={len(self)})"


def _same_group(*sets: Subset) -> FiniteGroup:
    group = sets[0].group
    for s in sets[1:]:
        if s.group is not group:
            raise ValidationError("subsets live in different groups")
    return group


def product_set(A: Subset, B: Subset) -> Subset:
    """The product set AB = {ab : a in A, b in B}."""
    G = _same_group(A, B)
    mask = np.zeros(G.order, dtype=bool)
    if len(A) and len(B):
        step = max(1, (1 << 22) // len(B))
        for i in range(0, len(A), step):
            mask[G.mul(A.members[i:i + step, None], B.members[None, :]).ravel()] = True
    return Subset.from_mask(G, mask)


def inverse_set(A: Subset) -> Subset:
    return Subset(A.group, A.group.inv_table[A.members])


def left_translate(x: int, A: Subset) -> Subset:
    return Subset(A.group, A.group.mul(x, A.members))


def right_translate(A: Subset, x: int) -> Subset:
    return Subset(A.group, A.group.mul(A.members, x))


def _closure_mask(G: FiniteGroup, gens, start: np.ndarray | None = None) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    if start is not None:
        mask |= start
    gens = np.unique(np.asarray(list(gens), dtype=np.intp))
    if gens.size == 0:
        return mask
    frontier = np.flatnonzero(mask)
    while frontier.size:
        prod = G.mul(frontier[:, None], gens[None, :]).ravel()
        new = np.unique(prod[~mask[prod]])
        mask[new] = True
        frontier = new
    return mask


def subgroup_closure(G: FiniteGroup, gens: Iterable[int]) -> Subset:
    """Smallest subgroup of G containing ``gens``."""
    return Subset.from_mask(G, _closure_mask(G, gens))


def coset(G: FiniteGroup, x: int, H: Subset) -> Subset:
    """The left coset xH."""
    return Subset(G, G.mul(int(x), H.members))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup found by closure, with a generating list."""

    members: Subset
    gens: tuple[int, ...] = field(default=())

    @property
    def order(self) -> int:
        return len(self.members)


def cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All cyclic subgroups, one entry each, sorted by (order, members)."""
    if "cyclic" in G._cache:
        return G._cache["cyclic"]
    done = np.zeros(G.order, dtype=bool)
    found = []
    for x in range(G.order):
        if done[x]:
            continue
        powers = [G.identity]
        y = x
        while y != G.identity:
            powers.append(y)
            y = G.mul(y, x)
        k = len(powers)
        for e in range(1, k):
            if math.gcd(e, k) == 1:
                done[powers[e]] = True
        found.append(Subgroup(Subset(G, powers), (x,) if x != G.identity else ()))
    found.sort(key=lambda s: (s.order, s.members.tolist()))
    G._cache["cyclic"] = found
    return found


def _join(G: FiniteGroup, H: Subgroup, C: Subgroup) -> Subgroup:
    gens = H.gens + C.gens
    inter = int(np.count_nonzero(H.members.mask & C.members.mask))
    if H.order * C.order // inter * 2 > G.order:
        # |HC| > |G|/2 forces <H, C> = G by Lagrange
        return Subgroup(Subset.whole(G), gens)
    return Subgroup(Subset.from_mask(G, _closure_mask(G, gens, start=H.members.mask)), gens)


def enumerate_subgroups(G: FiniteGroup, gen_bound: int = 2) -> list[Subgroup]:
    """All subgroups generated by at most ``gen_bound`` elements, plus {1} and G.

    Complete whenever every subgroup of G is ``gen_bound``-generated.
    """
    if gen_bound < 1:
        raise ValidationError("gen_bound must be >= 1")
    key = ("subgroups", gen_bound)
    if key in G._cache:
        return list(G._cache[key])
    cyclic = cyclic_subgroups(G)
    seen: dict[bytes, Subgroup] = {}
    for C in cyclic:
        seen.setdefault(np.packbits(C.members.mask).tobytes(), C)
    level = list(seen.values())
    for _ in range(2, gen_bound + 1):
        fresh = {}
        for H in level:
            for C in cyclic:
                if C.order == 1 or np.all(H.members.mask[C.members.members]):
                    continue
                K = _join(G, H, C)
                k = np.packbits(K.members.mask).tobytes()
                if k not in seen:
                    seen[k] = K
                    fresh[k] = K
        level = list(fresh.values())
        if not level:
            break
    whole = Subset.whole(G)
    seen.setdefault(np.packbits(whole.mask).tobytes(), Subgroup(whole, ()))
    out = sorted(seen.values(), key=lambda s: (s.order, s.members.tolist()))
    G._cache[key] = out
    return list(out)


def conjugacy_class(G: FiniteGroup, x: int) -> Subset:
    """{g x g^-1 : g in G}."""
    everything = G.all
    return Subset(G, G.mul(G.mul(everything, int(x)), G.inv_table))


def conjugacy_classes(G: FiniteGroup) -> list[Subset]:
    """Partition of G into conjugacy classes, ordered by smallest member."""
    if "classes" in G._cache:
        return G._cache["classes"]
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for x in range(G.order):
        if seen[x]:
            continue
        cls = conjugacy_class(G, x)
        seen[cls.members] = True
        classes.append(cls)
    G._cache["classes"] = classes
    return classes


def class_index(G: FiniteGroup) -> np.ndarray:
    """Array mapping each element to the index of its conjugacy class."""
    if "class_index" not in G._cache:
        idx = np.empty(G.order, dtype=np.intp)
        for i, cls in enumerate(conjugacy_classes(G)):
            idx[cls.members] = i
        G._cache["class_index"] = idx
    return G._cache["class_index"]


def random_subset(G: FiniteGroup, rng: np.random.Generator, density: float | None = None,
                  size: int | None = None, within: Subset | None = None) -> Subset:
    """Uniform random subset of G (or of ``within``) of a given size or density."""
    pool = within.members if within is not None else G.all
    if size is None:
        if density is None:
            raise ValidationError("random_subset needs size or density")
        size = int(round(density * len(pool)))
    size = max(0, min(int(size), len(pool)))
    return Subset(G, rng.choice(pool, size=size, replace=False))
