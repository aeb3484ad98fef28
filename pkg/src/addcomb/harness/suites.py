"""Named, runnable checks.

Each suite turns a config into a Report.  Exact suites compare integers
(or rationals) and fail on any violation.  Numeric suites compare floats
at a stated relative tolerance.  Measured suites record exponents and
ratios as NA instances, then add aggregate instances that assert a bounded
or monotone trend over the whole ladder.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import __version__
from ..bohr import (bohr_set, bohr_size_ratio, equidistribution_gap, max_nontrivial_ratio,
                    regular_delta)
from ..energy import (GroupFunction, convolution_power, difference_set, dyadic_level_set, energy,
                      energy_moment_k, fiber, fiber_power_sum, gowers_exponents, gowers_norm,
                      scalar_k, t_norm_count)
from ..errors import (AddcombError, CapacityError, PreconditionError, ResolutionError,
                      ValidationError)
from ..groups import (FiniteGroup, GroupSpec, Subset, build_group, conjugacy_classes, coset,
                      enumerate_subgroups, inverse_set, is_prime, left_translate, random_subset,
                      right_translate)
from ..restriction import (dft, moment4_identity_gap, measured_energy_exponent, restriction_ratio)
from ..spectra import (convolution_identity_gap, convolve, irreps, max_nontrivial_opnorm,
                       parseval_gap, t_norm_spectral)
from ..varieties import (Variety, estimate_dimension, max_coset_subgroup, parabola,
                         parabola_with_line, paraboloid, line, profile_moment,
                         shift_intersection_profile, stabilizer, trace_variety)
from .config import SuiteConfig, resolve_sets
from .report import Report

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240601


# -- shared plumbing ----------------------------------------------------------


STOCK_VARIETIES = {
    "parabola": lambda d: parabola(d["p"]),
    "line": lambda d: line(d["p"], d.get("slope", 1), d.get("intercept", 0)),
    "parabola-with-line": lambda d: parabola_with_line(d["p"]),
    "paraboloid": lambda d: paraboloid(d["p"], d.get("m", 3)),
    "trace": lambda d: trace_variety(d["p"], d["trace"], d.get("ambient", "SL2")),
}


def make_variety(d: dict) -> Variety:
    """A stock variety ({"stock": name, "p": ...}) or an explicit polynomial system."""
    if "stock" in d:
        name = d["stock"]
        if name not in STOCK_VARIETIES:
            raise ValidationError(f"unknown stock variety {name!r}; choose from {sorted(STOCK_VARIETIES)}")
        return STOCK_VARIETIES[name](d)
    return Variety.from_config(d)


def set_inputs(A: Subset, **more) -> dict:
    return {"group": A.group.spec.to_dict(), "set": A.tolist(), **more}


def log_ratio(x: float, base: float) -> float | None:
    if x <= 0 or base <= 1:
        return None
    return math.log(x) / math.log(base)


@dataclass
class Context:
    cfg: SuiteConfig
    params: dict
    seed: int
    report: Report
    gen_bound_used: list = field(default_factory=list)

    def rng(self, *keys: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, *keys])

    def groups(self, default: list[dict]) -> list[FiniteGroup]:
        specs = [self.cfg.group] if self.cfg.group is not None else self.params.get("groups", default)
        return [build_group(GroupSpec.from_dict(s)) for s in specs]

    def varieties(self, default: dict) -> list[Variety]:
        base = self.cfg.variety if self.cfg.variety is not None else self.params.get("variety", default)
        primes = self.params.get("primes")
        if primes and "stock" in base:
            return [make_variety({**base, "p": p}) for p in primes]
        return [make_variety(base)]

    def random_sets(self, G: FiniteGroup, count: int, key: int, within: Subset | None = None,
                    min_size: int = 1) -> list[Subset]:
        """``count`` random sets with a density drawn per set from params['density'] = [lo, hi]."""
        if self.cfg.sets is not None:
            return resolve_sets(self.cfg.sets, G, within)
        lo, hi = self.params.get("density", [0.05, 0.4])
        rng = self.rng(key)
        pool = len(within) if within is not None else G.order
        out = []
        for _ in range(count):
            size = max(min_size, int(round(rng.uniform(lo, hi) * pool)))
            out.append(random_subset(G, rng, size=min(size, pool), within=within))
        return out


@dataclass(frozen=True)
class Suite:
    name: str
    check: str
    kind: str
    defaults: dict
    runner: Callable[[Context], None]


SUITES: dict[str, Suite] = {}


def suite(name: str, check: str, kind: str, **defaults):
    def wrap(fn):
        SUITES[name] = Suite(name, check, kind, defaults, fn)
        return fn
    return wrap


def run_suite(cfg: SuiteConfig, seed: int | None = None) -> Report:
    """Run one suite; ``seed`` (the global override) wins over the config's seed."""
    if cfg.suite not in SUITES:
        raise ValidationError(f"unknown suite {cfg.suite!r}; see `addcomb list`")
    s = SUITES[cfg.suite]
    params = {**s.defaults, **cfg.params}
    used_seed = seed if seed is not None else (cfg.seed if cfg.seed is not None else DEFAULT_SEED)
    report = Report(s.name, s.check, s.kind)
    ctx = Context(cfg, params, used_seed, report)
    try:
        s.runner(ctx)
    except CapacityError as exc:
        # instances already recorded stay; the rest of the suite is reported as one NA
        report.add("capacity", {"suite": s.name, "params": params}, reason=f"capacity: {exc}")
    report.provenance = {
        "config": cfg.to_dict(),
        "params": params,
        "seed": used_seed,
        "version": __version__,
        "gen_bound_used": ctx.gen_bound_used,
    }
    return report


# -- energy and norm identities ----------------------------------------------


ABELIAN_LADDER = [
    {"kind": "cyclic", "n": 31},
    {"kind": "additive", "p": 2, "m": 5},
    {"kind": "additive", "p": 3, "m": 3},
    {"kind": "additive", "p": 5, "m": 2},
    {"kind": "cyclic", "n": 12},
]

IDENTITY_GROUPS = [
    {"kind": "cyclic", "n": 101},
    {"kind": "dihedral", "n": 4},
    {"kind": "symmetric", "n": 3},
    {"kind": "SL2", "p": 5},
]


@suite("energy-cs", "E(A,B) |A^{-1}B| >= |A|^2 |B|^2 (Cauchy-Schwarz), exact", "exact",
       groups=[{"kind": "cyclic", "n": 101}], count=200, density=[0.02, 0.4])
def _energy_cs(ctx: Context) -> None:
    for gi, G in enumerate(ctx.groups([])):
        sets = ctx.random_sets(G, 2 * ctx.params["count"], gi)
        for i in range(0, len(sets) - 1, 2):
            A, B = sets[i], sets[i + 1]
            lhs = len(A) ** 2 * len(B) ** 2
            rhs = energy(A, B) * len(difference_set(A, B))
            ctx.report.add(f"{G.spec}/pair-{i // 2}", {"A": set_inputs(A), "B": B.tolist()},
                           lhs=lhs, rhs=rhs, relation="<=", ok=lhs <= rhs)


@suite("t2-equals-e", "T_2(A) = E(A), by counting and by Fourier coefficients", "numeric",
       groups=[{"kind": "dihedral", "n": 4}], count=50, tol=1e-5)
def _t2_equals_e(ctx: Context) -> None:
    tol = ctx.params["tol"]
    for gi, G in enumerate(ctx.groups([])):
        reps = irreps(G)
        for i, A in enumerate(ctx.random_sets(G, ctx.params["count"], gi)):
            E = energy(A)
            count = t_norm_count([A] * 4, 2)
            spec = t_norm_spectral([A] * 4, 2, reps)
            ctx.report.add(f"{G.spec}/count-{i}", set_inputs(A, route="count"),
                           lhs=count, rhs=E, relation="==", ok=count == E)
            ctx.report.add(f"{G.spec}/spectral-{i}", set_inputs(A, route="spectral"),
                           lhs=float(spec.real), rhs=E, relation="~=", tol=tol,
                           ok=abs(spec - E) <= tol * max(E, 1), imag=float(spec.imag))


def _independent_gowers(A: Subset, k: int, params: dict) -> tuple[int, str]:
    """U^k(A) by the cheapest route that does not use the A^{-1}A recursion."""
    n = A.group.order
    if n ** (k + 1) <= params["direct_cap"]:
        return gowers_norm(A, k, "direct"), "direct"
    if n**k <= params["fiber_cap"]:
        return gowers_norm(A, k, "fibers"), "fibers"
    return gowers_norm(A, k, "recursive"), "recursive"


@suite("gowers-identities",
       "U^2 = E, U^{k+1}(A) = sum_s U^k(A_s), U^{k+1} = sum |A_s|^2, U^k(A^{-1}) = U^k(gA) = U^k(Ag) = U^k(A)",
       "exact", groups=IDENTITY_GROUPS, count=25, ks=[1, 2], density=[0.05, 0.35],
       direct_cap=2_000_000, fiber_cap=4_000_000)
def _gowers_identities(ctx: Context) -> None:
    rep = ctx.report
    for gi, G in enumerate(ctx.groups(IDENTITY_GROUPS)):
        rng = ctx.rng(gi, 99)
        for i, A in enumerate(ctx.random_sets(G, ctx.params["count"], gi)):
            tag = f"{G.spec}/set-{i}"
            E = energy(A)
            U2 = gowers_norm(A, 2)
            rep.add(f"{tag}/U2=E", set_inputs(A, check="U2=E"), lhs=U2, rhs=E, relation="==", ok=U2 == E)
            for k in ctx.params["ks"]:
                try:
                    lhs, route = _independent_gowers(A, k + 1, ctx.params)
                except CapacityError as exc:
                    rep.add(f"{tag}/U{k + 1}=sum_s U{k}(A_s)", set_inputs(A, check="fiber-sum", k=k),
                            reason=f"capacity: {exc}")
                    continue
                rhs = sum(gowers_norm(fiber(A, [s]), k) for s in range(G.order))
                rep.add(f"{tag}/U{k + 1}=sum_s U{k}(A_s)", set_inputs(A, check="fiber-sum", k=k),
                        lhs=lhs, rhs=rhs, relation="==", ok=lhs == rhs, route=route)
                Uk = gowers_norm(A, k)
                Uinv = gowers_norm(inverse_set(A), k)
                rep.add(f"{tag}/U{k}(A^-1)", set_inputs(A, check="inverse", k=k),
                        lhs=Uinv, rhs=Uk, relation="==", ok=Uinv == Uk)
                g = int(rng.integers(G.order))
                left = gowers_norm(left_translate(g, A), k)
                right = gowers_norm(right_translate(A, g), k)
                rep.add(f"{tag}/U{k}(gA),U{k}(Ag)", set_inputs(A, check="translate", k=k, g=g),
                        lhs=[left, right], rhs=Uk, relation=None, ok=left == right == Uk)


@suite("gowers-chain", "U^{k+1}(A)^{k-1} U^{k-1}(A)^{2k} >= U^k(A)^{3k-2} on abelian groups, exact",
       "exact", groups=ABELIAN_LADDER, count=40, ks=[2, 3], density=[0.1, 0.5])
def _gowers_chain(ctx: Context) -> None:
    for gi, G in enumerate(ctx.groups(ABELIAN_LADDER)):
        if not G.is_abelian:
            raise ValidationError(f"gowers-chain runs on abelian groups; {G.spec} is not")
        for i, A in enumerate(ctx.random_sets(G, ctx.params["count"], gi)):
            U = {j: gowers_norm(A, j) for j in range(1, max(ctx.params["ks"]) + 2)}
            for k in ctx.params["ks"]:
                lhs = U[k] ** (3 * k - 2)
                rhs = U[k + 1] ** (k - 1) * U[k - 1] ** (2 * k)
                rep_exp = log_ratio(U[k + 1], len(A)) if len(A) > 1 else None
                ctx.report.add(f"{G.spec}/set-{i}/k={k}", set_inputs(A, k=k), lhs=lhs, rhs=rhs,
                               relation="<=", ok=lhs <= rhs, measured_exponent=rep_exp)


@suite("scalar-chain",
       "<A,B>_k^{3k+1} <= (<A,B>_{k-1}^2 <A,B>_{k+1})^k U^k(A) U^k(B) on abelian groups, exact",
       "exact", groups=ABELIAN_LADDER, count=40, ks=[1, 2], density=[0.1, 0.5])
def _scalar_chain(ctx: Context) -> None:
    for gi, G in enumerate(ctx.groups(ABELIAN_LADDER)):
        if not G.is_abelian:
            raise ValidationError(f"scalar-chain runs on abelian groups; {G.spec} is not")
        sets = ctx.random_sets(G, 2 * ctx.params["count"], gi)
        for i in range(0, len(sets) - 1, 2):
            A, B = sets[i], sets[i + 1]
            top = max(ctx.params["ks"]) + 1
            sp = {j: scalar_k(A, B, j) for j in range(0, top + 1)}
            for k in ctx.params["ks"]:
                lhs = sp[k] ** (3 * k + 1)
                rhs = (sp[k - 1] ** 2 * sp[k + 1]) ** k * gowers_norm(A, k) * gowers_norm(B, k)
                ctx.report.add(f"{G.spec}/pair-{i // 2}/k={k}", {"A": set_inputs(A), "B": B.tolist(), "k": k},
                               lhs=lhs, rhs=rhs, relation="<=", ok=lhs <= rhs)


@suite("tk-product",
       "T_k(f_1..f_2k)^{2k} <= prod T_k(f_j) (Hoelder-type product bound) and E(A,A^{-1}) <= E(A)",
       "numeric", groups=[{"kind": "dihedral", "n": 4}, {"kind": "cyclic", "n": 12}], count=50, k=2,
       tol=1e-5, density=[0.1, 0.6])
def _tk_product(ctx: Context) -> None:
    k, tol = ctx.params["k"], ctx.params["tol"]
    for gi, G in enumerate(ctx.groups([])):
        reps = irreps(G)
        sets = ctx.random_sets(G, 2 * k * ctx.params["count"], gi)
        for i in range(ctx.params["count"]):
            fs = sets[2 * k * i: 2 * k * (i + 1)]
            if len(fs) < 2 * k:
                break
            inputs = {"group": G.spec.to_dict(), "sets": [f.tolist() for f in fs], "k": k}
            exact_l = t_norm_count(fs, k) ** (2 * k)
            exact_r = math.prod(t_norm_count([f] * (2 * k), k) for f in fs)
            ctx.report.add(f"{G.spec}/tuple-{i}/count", {**inputs, "route": "count"},
                           lhs=exact_l, rhs=exact_r, relation="<=", ok=exact_l <= exact_r)
            spec_l = abs(t_norm_spectral(fs, k, reps)) ** (2 * k)
            spec_r = math.prod(t_norm_spectral([f] * (2 * k), k, reps).real for f in fs)
            ctx.report.add(f"{G.spec}/tuple-{i}/spectral", {**inputs, "route": "spectral"},
                           lhs=spec_l, rhs=spec_r, relation="<=",
                           ok=spec_l <= spec_r * (1 + tol) + tol)
            A = fs[0]
            e_inv, e = energy(A, inverse_set(A)), energy(A)
            ctx.report.add(f"{G.spec}/tuple-{i}/E(A,A^-1)", set_inputs(A, check="E(A,A^-1)"),
                           lhs=e_inv, rhs=e, relation="<=", ok=e_inv <= e)


@suite("exponents", "weight recurrence solution: homogeneity, energy, recurrence, beta range; exact rationals",
       "exact", ks=list(range(2, 11)))
def _exponents(ctx: Context) -> None:
    for k in ctx.params["ks"]:
        sol = gowers_exponents(k)
        for name, ok in sol.invariants().items():
            ctx.report.add(f"k={k}/{name}", {"k": k, "invariant": name}, ok=ok, relation=None,
                           lhs=sol.to_dict()["beta"], solution=sol.to_dict())
        if k == 2:
            ctx.report.add("k=2/beta=1/4", {"k": 2, "invariant": "beta-value"}, lhs=sol.beta,
                           rhs="1/4", ok=str(sol.beta) == "1/4")


# -- varieties ---------------------------------------------------------------


def _brute_energy(V: Subset) -> int:
    """#{(a, b, c, d) in V^4 : a^{-1} b = c^{-1} d} by enumerating (a, b, c)."""
    G = V.group
    m = V.members
    total = 0
    for a in m:
        # d = c a^{-1} b for every (b, c)
        d = G.mul(G.mul(m[None, :], G.inv(int(a))), m[:, None])
        total += int(np.count_nonzero(V.mask[d]))
    return total


def _stock_expectations(V: Variety, cfg_variety: dict | None) -> dict:
    name = (cfg_variety or {}).get("stock", "parabola")
    if name == "parabola":
        p = V.q
        return {"size": p, "t": 1, "energy": 2 * p * p - p, "stabilizer": 1}
    return {}


@suite("variety-profile", "point count, t(V), stabilizer, E(V) closed form vs brute force, shift profile sum",
       "exact", variety={"stock": "parabola"}, primes=[7], gen_bound=2)
def _variety_profile(ctx: Context) -> None:
    rep = ctx.report
    base = ctx.cfg.variety if ctx.cfg.variety is not None else ctx.params["variety"]
    for V in ctx.varieties(base):
        P = V.points
        expect = {**_stock_expectations(V, base), **ctx.params.get("expect", {})}
        inputs = {"variety": V.to_config()}
        tag = V.name
        rep.add(f"{tag}/membership", {**inputs, "check": "membership"}, ok=V.verify_points())
        if "size" in expect:
            rep.add(f"{tag}/size", {**inputs, "check": "size"}, lhs=len(P), rhs=expect["size"],
                    relation="==", ok=len(P) == expect["size"])
        tres = max_coset_subgroup(P, ctx.params["gen_bound"])
        ctx.gen_bound_used.append({"variety": tag, "gen_bound": tres.gen_bound_used})
        if "t" in expect:
            rep.add(f"{tag}/t", {**inputs, "check": "t"}, lhs=tres.t_value, rhs=expect["t"],
                    relation="==", ok=tres.t_value == expect["t"], witness=tres.to_dict())
        E = energy(P)
        brute = _brute_energy(P)
        rep.add(f"{tag}/energy-brute", {**inputs, "check": "energy-brute"}, lhs=E, rhs=brute,
                relation="==", ok=E == brute)
        if "energy" in expect:
            rep.add(f"{tag}/energy-closed-form", {**inputs, "check": "energy-closed"}, lhs=E,
                    rhs=expect["energy"], relation="==", ok=E == expect["energy"])
        prof = shift_intersection_profile(P)
        total = sum(v * c for v, c in prof.items())
        rep.add(f"{tag}/profile-sum", {**inputs, "check": "profile-sum"}, lhs=total, rhs=len(P) ** 2,
                relation="==", ok=total == len(P) ** 2, profile={str(k): v for k, v in prof.items()})
        pm = profile_moment(P, 2)
        rep.add(f"{tag}/profile-moment", {**inputs, "check": "profile-moment"}, lhs=pm,
                rhs=energy_moment_k(P, 2, "R"), relation="==", ok=pm == energy_moment_k(P, 2, "R"))
        stab = stabilizer(P)
        if "stabilizer" in expect:
            rep.add(f"{tag}/stabilizer", {**inputs, "check": "stabilizer"}, lhs=len(stab),
                    rhs=expect["stabilizer"], relation="==", ok=len(stab) == expect["stabilizer"])
        try:
            d_hat, ratio = estimate_dimension(V)
            rep.add(f"{tag}/dimension", {**inputs, "check": "dimension"}, lhs=d_hat, rhs=V.meta_dim,
                    relation="==" if V.meta_dim is not None else None,
                    ok=(d_hat == V.meta_dim) if V.meta_dim is not None else None, ratio=ratio)
        except AddcombError as exc:
            rep.add(f"{tag}/dimension", {**inputs, "check": "dimension"}, reason=str(exc))


PRIME_LADDER = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
                89, 97, 101]


@suite("variety-energy", "E_k(V) / (|V|^{k+1}/q^{k-1} + t|V|^k) stays bounded along a prime ladder",
       "measured", variety={"stock": "parabola"}, primes=PRIME_LADDER, k=2, bound=4.0, gen_bound=2)
def _variety_energy(ctx: Context) -> None:
    k = ctx.params["k"]
    rows = []
    for V in ctx.varieties(ctx.params["variety"]):
        P = V.points
        t = max_coset_subgroup(P, ctx.params["gen_bound"]).t_value
        Ek = energy_moment_k(P, k)
        denom = len(P) ** (k + 1) / V.q ** (k - 1) + t * len(P) ** k
        ratio = Ek / denom
        rows.append({"p": V.q, "|V|": len(P), "t": t, "E_k": Ek, "ratio": ratio})
        ctx.report.add(f"{V.name}/ratio", {"variety": V.to_config(), "k": k}, lhs=Ek, rhs=denom,
                       measured_exponent=log_ratio(Ek, len(P)), ratio=ratio, t=t)
    worst = max(r["ratio"] for r in rows)
    ctx.report.add("trend/bounded", {"rows": len(rows), "bound": ctx.params["bound"]},
                   lhs=worst, rhs=ctx.params["bound"], relation="<=", ok=worst <= ctx.params["bound"])
    ctx.report.table = rows
    ctx.report.table_columns = ["p", "|V|", "t", "E_k", "ratio"]


@suite("subset-energy", "A in V with dim 1: E(A) <= C t |A|^2 exactly; higher dimension: measured exponent",
       "exact", variety={"stock": "parabola"}, primes=[13, 31], count=100, C=3, gen_bound=2)
def _subset_energy(ctx: Context) -> None:
    C = ctx.params["C"]
    worst_c = 0.0
    for vi, V in enumerate(ctx.varieties(ctx.params["variety"])):
        P = V.points
        t = max_coset_subgroup(P, ctx.params["gen_bound"]).t_value
        d = V.meta_dim
        rng = ctx.rng(vi)
        for i in range(ctx.params["count"]):
            size = int(rng.integers(1, len(P) + 1))
            A = random_subset(V.group, rng, size=size, within=P)
            E = gowers_norm(A, 2)
            expo = log_ratio(E, len(A))
            inputs = set_inputs(A, variety=V.name)
            if d == 1:
                lhs, rhs = E, C * t * len(A) ** 2
                worst_c = max(worst_c, E / (t * len(A) ** 2))
                ctx.report.add(f"{V.name}/set-{i}", inputs, lhs=lhs, rhs=rhs, relation="<=",
                               ok=lhs <= rhs, measured_exponent=expo)
            else:
                gamma = 1.0 / (2 ** (d + 1) - d - 5) if 2 ** (d + 1) - d - 5 > 0 else None
                shape = len(A) ** 3 * (t / len(A)) ** gamma if gamma else None
                ctx.report.add(f"{V.name}/set-{i}", inputs, lhs=E, rhs=shape, measured_exponent=expo)
    ctx.report.add("summary/max E/(t|A|^2)", {"C": C}, lhs=worst_c, rhs=C, relation="<=",
                   ok=worst_c <= C)


@suite("tk-growth", "T_{k+1}(A) against |A|^2 T_k(A) for A in V, with the dyadic level of A^(k); measured",
       "measured", variety={"stock": "parabola"}, primes=[13], ks=[2, 3], count=20)
def _tk_growth(ctx: Context) -> None:
    for vi, V in enumerate(ctx.varieties(ctx.params["variety"])):
        P = V.points
        rng = ctx.rng(vi)
        for i in range(ctx.params["count"]):
            A = random_subset(V.group, rng, size=int(rng.integers(2, len(P) + 1)), within=P)
            n = len(A)
            for k in ctx.params["ks"]:
                Tk = t_norm_count([A] * (2 * k), k)
                Tk1 = t_norm_count([A] * (2 * k + 2), k + 1)
                level = dyadic_level_set(convolution_power(A, k), A)
                saving_growth = log_ratio(n * n * Tk / Tk1, n)
                saving_tk = (2 * k - 1) - log_ratio(Tk, n)
                ctx.report.add(f"{V.name}/set-{i}/k={k}", set_inputs(A, k=k), lhs=Tk1, rhs=n * n * Tk,
                               measured_exponent=log_ratio(Tk1, n), saving_growth=saving_growth,
                               saving_tk=saving_tk, dyadic_delta=level.delta, dyadic_size=len(level.level),
                               dyadic_score=level.score)
                # T_{k+1} <= |A|^2 T_k always holds (fix the last two coordinates)
                ctx.report.add(f"{V.name}/set-{i}/k={k}/trivial", set_inputs(A, k=k, check="trivial"),
                               lhs=Tk1, rhs=n * n * Tk, relation="<=", ok=Tk1 <= n * n * Tk)


@suite("max-subgroup", "t(W) equals the order of a planted subgroup coset in W, exact", "exact",
       groups=[{"kind": "additive", "p": 5, "m": 2}, {"kind": "additive", "p": 7, "m": 2},
               {"kind": "dihedral", "n": 6}, {"kind": "symmetric", "n": 4}, {"kind": "SL2", "p": 5}],
       per_group=6, extra_points=4, gen_bound=2)
def _max_subgroup(ctx: Context) -> None:
    gb = ctx.params["gen_bound"]
    for gi, G in enumerate(ctx.groups([])):
        subs = enumerate_subgroups(G, gb)
        ctx.gen_bound_used.append({"group": str(G.spec), "gen_bound": gb})
        orders = sorted({H.order for H in subs})
        proper = [H for H in subs if 1 < H.order < G.order]
        rng = ctx.rng(gi)
        for i in range(min(ctx.params["per_group"], len(proper))):
            H = proper[int(rng.integers(len(proper)))]
            bigger = [o for o in orders if o > H.order]
            room = bigger[0] - H.order - 1 if bigger else 0
            x = int(rng.integers(G.order))
            base = coset(G, x, H.members)
            rest = Subset.from_mask(G, ~base.mask)
            extra = random_subset(G, rng, size=min(room, ctx.params["extra_points"], len(rest)), within=rest)
            W = base | extra
            res = max_coset_subgroup(W, gb)
            ctx.report.add(f"{G.spec}/plant-{i}", set_inputs(W, planted=H.members.tolist(), x=x),
                           lhs=res.t_value, rhs=H.order, relation="==", ok=res.t_value == H.order,
                           witness=res.to_dict())


@suite("conjugacy", "E(A) for A inside conjugacy classes of SL2(p); measured exponents", "measured",
       primes=[5, 7, 11], subsets=3, density=0.5, gen_bound=2, gen_bound_large=1, large_order=500)
def _conjugacy(ctx: Context) -> None:
    exps = []
    for pi, p in enumerate(ctx.params["primes"]):
        G = build_group(GroupSpec("SL2", p=p))
        gb = ctx.params["gen_bound"] if G.order <= ctx.params["large_order"] else ctx.params["gen_bound_large"]
        ctx.gen_bound_used.append({"group": str(G.spec), "gen_bound": gb})
        rng = ctx.rng(pi)
        for ci, C in enumerate(conjugacy_classes(G)):
            if len(C) <= 2:
                continue
            tres = max_coset_subgroup(C, gb)
            label = G.label(int(C.members[0]))
            sets = [C] + [random_subset(G, rng, density=ctx.params["density"], within=C)
                          for _ in range(ctx.params["subsets"])]
            for si, A in enumerate(sets):
                if len(A) < 2:
                    continue
                E = energy(A)
                expo = log_ratio(E, len(A))
                if si == 0 and tres.t_value < len(C):
                    exps.append(expo)
                ctx.report.add(f"{G.spec}/class-{ci}/set-{si}", set_inputs(A, representative=list(label)),
                               lhs=E, rhs=len(A) ** 3, measured_exponent=expo, class_size=len(C),
                               t_class=tres.t_value, gen_bound=gb)
    worst = max(exps) if exps else 0.0
    ctx.report.add("summary/full classes below 3", {"primes": ctx.params["primes"]}, lhs=worst, rhs=3.0,
                   relation="<=", ok=worst < 3.0)


@suite("chevalley", "max nontrivial ||A^(rho)||_o / |A| < 1 and measured exponent for random large A in SL2(5)",
       "measured", group={"kind": "SL2", "p": 5}, count=20, size=[40, 80], threshold=0.95,
       fraction=0.9)
def _chevalley(ctx: Context) -> None:
    G = build_group(GroupSpec.from_dict(ctx.cfg.group or ctx.params["group"]))
    reps = irreps(G)
    borel = Subset.from_mask(G, G.rows[:, 2] == 0) if G.spec.kind in ("SL2", "GL2") else None
    cosets = []
    if borel is not None:
        for x in range(G.order):
            cosets.append(coset(G, x, borel).mask)
            cosets.append(right_translate(borel, x).mask)
    rng = ctx.rng(0)
    ratios, exps = [], []
    lo, hi = ctx.params["size"]
    made = 0
    while made < ctx.params["count"]:
        A = random_subset(G, rng, size=int(rng.integers(lo, hi + 1)))
        if any(np.all(A.mask[m]) for m in cosets):
            continue  # contains a full Borel coset
        res = max_nontrivial_opnorm(A, reps)
        ratio = res.value / len(A)
        ratios.append(ratio)
        exps.append(res.exponent)
        ctx.report.add(f"{G.spec}/set-{made}", set_inputs(A), lhs=res.value, rhs=len(A),
                       measured_exponent=res.exponent, rep_id=res.rep_id, rep_dim=res.dim, ratio=ratio)
        made += 1
    ctx.report.add("summary/ratio<1", {"count": made}, lhs=max(ratios), rhs=1.0, relation="<=",
                   ok=max(ratios) < 1)
    frac = float(np.mean(np.asarray(exps) < ctx.params["threshold"]))
    ctx.report.add("summary/fraction exponent<threshold", {"count": made, "threshold": ctx.params["threshold"]},
                   lhs=ctx.params["fraction"], rhs=frac, relation="<=", ok=frac >= ctx.params["fraction"])


# -- appendix: equidistribution and Bohr sets ----------------------------------


@suite("equidist", "||A∩H| - |A||H|/|G|| <= 2K|H_*| + eps|A| sqrt(|H|/|H_*| + K) on verified preconditions",
       "exact", primes=[31, 61, 101], per_prime=15, sl2_primes=[5], per_group=15, density=[0.1, 0.6])
def _equidist(ctx: Context) -> None:
    lo, hi = ctx.params["density"]
    for pi, p in enumerate(ctx.params["primes"]):
        G = build_group(GroupSpec("cyclic", n=p))
        reps = irreps(G)
        rng = ctx.rng(1, pi)
        for i in range(ctx.params["per_prime"]):
            A = random_subset(G, rng, density=rng.uniform(lo, hi))
            L = int(rng.integers(2, p // 2))
            m = int(rng.integers(1, L + 1))
            H, Hs = Subset(G, range(L)), Subset(G, range(m))
            _equidist_instance(ctx, f"{G.spec}/interval-{i}", A, H, Hs, 1.0, reps)
    for gi, p in enumerate(ctx.params["sl2_primes"]):
        G = build_group(GroupSpec("SL2", p=p))
        reps = irreps(G)
        subs = [H for H in enumerate_subgroups(G, 2) if 1 < H.order < G.order]
        borel = Subset.from_mask(G, G.rows[:, 2] == 0)
        rng = ctx.rng(2, gi)
        for i in range(ctx.params["per_group"]):
            A = random_subset(G, rng, density=rng.uniform(lo, hi))
            H = borel if i % 2 == 0 else subs[int(rng.integers(len(subs)))].members
            _equidist_instance(ctx, f"{G.spec}/subgroup-{i}", A, H, H, 1.0, reps)


def _equidist_instance(ctx, label, A, H, Hs, K, reps) -> None:
    eps = max_nontrivial_ratio(A, reps)
    inputs = {**set_inputs(A), "H": H.tolist(), "H_star": Hs.tolist(), "K": K}
    try:
        res = equidistribution_gap(A, H, Hs, K, eps, reps)
    except PreconditionError as exc:
        ctx.report.add(label, inputs, reason=f"precondition: {exc}")
        return
    ctx.report.add(label, inputs, lhs=res.lhs, rhs=res.rhs, relation="<=", ok=res.passed, eps=eps)


BOHR_GROUPS = [{"kind": "cyclic", "n": 31}, {"kind": "cyclic", "n": 101}, {"kind": "dihedral", "n": 4},
               {"kind": "symmetric", "n": 3}, {"kind": "SL2", "p": 5}]


@suite("bohr", "regular delta_1 in [delta, 2 delta] found by scan; Bohr monotonicity and intersection laws",
       "exact", groups=BOHR_GROUPS, deltas=[0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
       max_reps=6, fraction=0.95)
def _bohr(ctx: Context) -> None:
    found = total = 0
    for gi, G in enumerate(ctx.groups(BOHR_GROUPS)):
        reps = irreps(G)
        rng = ctx.rng(gi)
        nontrivial = [r for r in reps if not r.is_trivial]
        pick = nontrivial if len(nontrivial) <= ctx.params["max_reps"] else [
            nontrivial[int(j)] for j in sorted(rng.choice(len(nontrivial), ctx.params["max_reps"], replace=False))]
        for r in pick:
            for delta in ctx.params["deltas"]:
                total += 1
                inputs = {"group": G.spec.to_dict(), "rep": r.rep_id, "dim": r.dim, "delta": delta}
                ratio = bohr_size_ratio(r, delta)
                try:
                    res = regular_delta(r, delta)
                except ResolutionError as exc:
                    ctx.report.add(f"{G.spec}/rep-{r.rep_id}/delta={delta}", inputs,
                                   reason=f"resolution: {exc}", size_ratio=ratio)
                    continue
                found += 1
                ok = delta <= res.delta1 <= 2 * delta
                ctx.report.add(f"{G.spec}/rep-{r.rep_id}/delta={delta}", inputs, lhs=res.delta1,
                               rhs=2 * delta, relation="<=", ok=ok, size_ratio=ratio, refined=res.refined)
            small = bohr_set([r], 0.3).members
            large = bohr_set([r], 0.6).members
            ctx.report.add(f"{G.spec}/rep-{r.rep_id}/monotone", {"group": G.spec.to_dict(), "rep": r.rep_id,
                                                                 "check": "monotone"},
                           ok=small <= large)
            B = bohr_set([r], 0.6)
            ctx.report.add(f"{G.spec}/rep-{r.rep_id}/membership", {"group": G.spec.to_dict(), "rep": r.rep_id,
                                                                   "check": "membership"}, ok=B.verify())
        for j in range(min(3, len(pick) - 1)):
            a, b = pick[j], pick[j + 1]
            joint = bohr_set([a, b], 0.5).members
            meet = bohr_set([a], 0.5).members & bohr_set([b], 0.5).members
            ctx.report.add(f"{G.spec}/intersection-{a.rep_id}-{b.rep_id}",
                           {"group": G.spec.to_dict(), "reps": [a.rep_id, b.rep_id], "check": "intersection"},
                           ok=joint == meet)
        trivial = reps[0]
        whole = bohr_set([trivial], 0.1).members
        ctx.report.add(f"{G.spec}/trivial-rep", {"group": G.spec.to_dict(), "check": "trivial"},
                       lhs=len(whole), rhs=G.order, relation="==", ok=len(whole) == G.order)
    frac = found / total if total else 1.0
    ctx.report.add("summary/regular witness fraction", {"total": total}, lhs=ctx.params["fraction"], rhs=frac,
                   relation="<=", ok=frac >= ctx.params["fraction"], found=found, total=total)


# -- restriction ----------------------------------------------------------------


def _difference_energy(A: Subset) -> int:
    """sum_x r_{A-A}(x)^2 with differences taken on coordinates mod p."""
    G = A.group
    p = G.spec.p
    rows = G.rows[A.members]
    diffs = (rows[:, None, :] - rows[None, :, :]) % p
    codes = diffs.reshape(-1, rows.shape[1]) @ (p ** np.arange(rows.shape[1])[::-1])
    r = np.bincount(codes, minlength=G.order)
    return int(np.sum(r.astype(np.int64) ** 2))


@suite("restriction", "L^4 extension identity and the restriction-ratio trend table", "measured",
       identity_primes=[5, 7], identity_count=50, trend_primes=[5, 7, 11, 13], budget=200, c_floor=0.2)
def _restriction(ctx: Context) -> None:
    rep = ctx.report
    for pi, p in enumerate(ctx.params["identity_primes"]):
        V = parabola(p)
        P = V.points
        rng = ctx.rng(pi)
        g = GroupFunction(V.group, rng.standard_normal(V.group.order))
        dd = dft(dft(g)).values
        gap = float(np.abs(dd - V.group.order * g.values[V.group.inv_table]).max())
        rep.add(f"{V.name}/double-dft", {"p": p, "check": "double-dft"}, lhs=gap, rhs=1e-9 * V.group.order,
                relation="<=", ok=gap <= 1e-9 * V.group.order)
        for i in range(ctx.params["identity_count"]):
            A = random_subset(V.group, rng, size=int(rng.integers(0, len(P) + 1)), within=P)
            lhs, rhs, rel = moment4_identity_gap(V, A)
            rep.add(f"{V.name}/moment4-{i}", set_inputs(A), lhs=lhs, rhs=rhs, relation="~=", tol=1e-8,
                    ok=rel <= 1e-8)
            if len(A):
                e1, e2 = energy(A), _difference_energy(A)
                rep.add(f"{V.name}/energy-cross-{i}", set_inputs(A, check="cross"), lhs=e1, rhs=e2,
                        relation="==", ok=e1 == e2)
    rows = []
    series = {}
    for name, factory in (("parabola", parabola), ("parabola-with-line", parabola_with_line)):
        for p in ctx.params["trend_primes"]:
            V = factory(p)
            ce = measured_energy_exponent(V, ctx.params["budget"], ctx.seed)
            q_exp = 4.0 / (3.0 - max(ce.c_meas, 0.0))
            est = restriction_ratio(V, q_exp, 4, ctx.params["budget"], ctx.seed)
            rows.append({"variety": name, "p": p, "|V|": len(V.points), "c_meas": ce.c_meas,
                         "ratio": est.ratio, "extremizer-id": est.extremizer})
            series.setdefault(name, []).append((p, ce.c_meas, est.ratio))
            rep.add(f"{name}/p={p}", {"variety": name, "p": p, "budget": ctx.params["budget"]},
                    lhs=est.ratio, measured_exponent=ce.max_exponent, c_meas=ce.c_meas, q_exp=q_exp,
                    extremizer=est.extremizer, trials=est.trials)
    line_ratios = [r for _, _, r in series["parabola-with-line"]]
    increasing = all(b > a for a, b in zip(line_ratios, line_ratios[1:]))
    rep.add("trend/line-variety ratio increasing", {"primes": ctx.params["trend_primes"]},
            lhs=line_ratios, ok=increasing)
    c_min = min(c for _, c, _ in series["parabola"])
    rep.add("trend/parabola c_meas floor", {"primes": ctx.params["trend_primes"]}, lhs=ctx.params["c_floor"],
            rhs=c_min, relation="<=", ok=c_min >= ctx.params["c_floor"])
    rep.table = rows
    rep.table_columns = ["variety", "p", "|V|", "c_meas", "ratio", "extremizer-id"]


# -- spectral machinery ------------------------------------------------------------


SPECTRAL_GROUPS = [
    {"kind": "cyclic", "n": 101}, {"kind": "additive", "p": 3, "m": 2}, {"kind": "dihedral", "n": 4},
    {"kind": "dihedral", "n": 6}, {"kind": "symmetric", "n": 3}, {"kind": "symmetric", "n": 4},
    {"kind": "symmetric", "n": 5}, {"kind": "SL2", "p": 3}, {"kind": "SL2", "p": 5}, {"kind": "SL2", "p": 7},
    {"kind": "GL2", "p": 3}, {"kind": "borel2", "p": 5}, {"kind": "borel2", "p": 7},
    {"kind": "heisenberg", "p": 3}, {"kind": "heisenberg", "p": 5},
    {"kind": "product", "factors": [{"kind": "cyclic", "n": 2}, {"kind": "symmetric", "n": 3}]},
]


def supported_groups(max_order: int) -> list[dict]:
    """Every built-in family member of order <= max_order, plus two small products."""
    specs = [GroupSpec("cyclic", n=n) for n in range(1, max_order + 1)]
    specs += [GroupSpec("dihedral", n=n) for n in range(1, max_order // 2 + 1)]
    specs += [GroupSpec("symmetric", n=n) for n in range(1, 8)]
    primes = [p for p in range(2, max_order + 1) if is_prime(p)]
    specs += [GroupSpec(k, p=p) for k in ("SL2", "GL2", "borel2", "heisenberg") for p in primes[:12]]
    specs += [GroupSpec("additive", p=p, m=m) for p in primes for m in range(1, 10)]
    specs += [GroupSpec.from_dict(d) for d in (
        {"kind": "product", "factors": [{"kind": "cyclic", "n": 2}, {"kind": "symmetric", "n": 3}]},
        {"kind": "product", "factors": [{"kind": "dihedral", "n": 4}, {"kind": "cyclic", "n": 3}]})]
    return [s.to_dict() for s in specs if s.expected_order() <= max_order]


@suite("spectral", "irrep count = class count, sum d^2 = |G|, Parseval and convolution identities",
       "numeric", groups=SPECTRAL_GROUPS, functions=20, convolutions=5, max_order=None)
def _spectral(ctx: Context) -> None:
    rep = ctx.report
    groups = SPECTRAL_GROUPS
    if ctx.params["max_order"] and ctx.cfg.group is None and "groups" not in ctx.cfg.params:
        ctx.params["groups"] = groups = supported_groups(int(ctx.params["max_order"]))
    for gi, G in enumerate(ctx.groups(groups)):
        reps = irreps(G)
        g_in = {"group": G.spec.to_dict()}
        rep.add(f"{G.spec}/count", {**g_in, "check": "count"}, lhs=len(reps),
                rhs=len(conjugacy_classes(G)), relation="==", ok=len(reps) == len(conjugacy_classes(G)))
        sq = sum(r.dim**2 for r in reps)
        rep.add(f"{G.spec}/sum-d2", {**g_in, "check": "sum-d2"}, lhs=sq, rhs=G.order, relation="==",
                ok=sq == G.order, dims=[r.dim for r in reps])
        rng = ctx.rng(gi)
        for i in range(ctx.params["functions"]):
            f = GroupFunction(G, rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order))
            lhs, rhs, gap = parseval_gap(f, reps)
            rep.add(f"{G.spec}/parseval-{i}", {**g_in, "check": "parseval", "i": i}, lhs=lhs, rhs=rhs,
                    relation="~=", tol=1e-8, ok=gap <= 1e-8 * lhs)
        for i in range(ctx.params["convolutions"]):
            f = GroupFunction(G, rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order))
            g = GroupFunction(G, rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order))
            h = convolve(f, g, check=False)
            gap = convolution_identity_gap(f, g, h, reps)
            rep.add(f"{G.spec}/convolution-{i}", {**g_in, "check": "convolution", "i": i}, lhs=gap,
                    rhs=1e-6, relation="<=", ok=gap <= 1e-6)
