"""The association scheme on maximal totally isotropic flats.

Relations are indexed by (i, xi): i = nu - dim of the direction
intersection, xi = 0 when the cosets meet and 1 when they are disjoint
((nu, 1) never occurs).  Eigenspaces carry the same index family.  All
eigenvalue, valency, and multiplicity tables come from closed forms;
constructed adjacency matrices and idempotents serve purely as
verification artifacts, so a disagreement is loud.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from . import exact
from .field import binomial2, e_power, e_power_frac, gauss_binomial
from .flats import Flat, enumerate_flats, flat_meet
from .geometry import (
    SpaceConfig,
    enumerate_isotropic,
    is_totally_isotropic,
    reduce_mod,
    sum_subspace,
)

RelIndex = tuple[int, int]


class _InfiniteValuation:
    """Distinguished valuation of a zero eigenvalue (never a sentinel number)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Infinity"


INFINITY = _InfiniteValuation()


def relation_indices(nu: int) -> list[RelIndex]:
    """(0,0),(0,1),...,(nu-1,0),(nu-1,1),(nu,0) in canonical order."""
    out = []
    for i in range(nu):
        out += [(i, 0), (i, 1)]
    out.append((nu, 0))
    return out


def _code(nu: int, idx: RelIndex) -> int:
    i, xi = idx
    if not (0 <= i <= nu and xi in (0, 1) and (i, xi) != (nu, 1)):
        raise ValueError(f"invalid index {idx} for nu={nu}")
    return 2 * i + xi


# ---------------------------------------------------------------------------
# closed forms: dual polar layer

def _case_e2(case: str) -> int:
    from .geometry import E2
    if case not in E2:
        raise ValueError(f"unknown case {case!r}")
    return E2[case]


def _qpow2(case: str, q: int, twice: int) -> int:
    cfg = _formal_config(case, q)
    return e_power(cfg, twice)


def _qpow2_frac(case: str, q: int, twice: int) -> Fraction:
    cfg = _formal_config(case, q)
    return e_power_frac(cfg, twice)


class _FormalConfig:
    """Carrier of (case, q, q0) for formula evaluation without geometry."""

    def __init__(self, case: str, q: int):
        self.case = case
        self.q = q
        if case == "unitary":
            from math import isqrt
            q0 = isqrt(q)
            if q0 * q0 != q:
                raise ValueError(f"unitary case needs square q, got {q}")
            self.q0 = q0
        else:
            self.q0 = None


@lru_cache(maxsize=None)
def _formal_config(case: str, q: int) -> _FormalConfig:
    return _FormalConfig(case, q)


def dual_polar_size(case: str, q: int, nu2: int) -> int:
    n = 1
    for t in range(1, nu2 + 1):
        n *= _qpow2(case, q, 2 * t + _case_e2(case) - 2) + 1
    return n


def dual_polar_eigenvalue(case: str, q: int, nu2: int, i: int, j: int) -> int:
    """Eigenvalue of the i-th relation on the j-th eigenspace (exact integer).

    The alternating sum over s; an empty range yields 0, which also covers
    i > nu2 as needed by the disjoint-coset branch of the flat scheme.
    """
    if not (0 <= j <= nu2) or i < 0:
        raise ValueError(f"indices out of range: i={i}, j={j}, nu'={nu2}")
    e2 = _case_e2(case)
    total = 0
    for s in range(max(0, j - i), min(j, nu2 - i) + 1):
        sign = -1 if (j + s) % 2 else 1
        twice = e2 * (i + s - j) + 2 * binomial2(j - s) + 2 * binomial2(i + s - j)
        total += (sign * gauss_binomial(j, s, q)
                  * gauss_binomial(nu2 - j, nu2 - i - s, q)
                  * _qpow2(case, q, twice))
    return total


def dual_polar_valency(case: str, q: int, nu2: int, i: int) -> int:
    twice = i * (i - 1) + _case_e2(case) * i
    return _qpow2(case, q, twice) * gauss_binomial(nu2, i, q)


def dual_polar_multiplicity(case: str, q: int, nu2: int, j: int) -> int:
    """Dimension of the j-th eigenspace; exact (rational arithmetic must cancel)."""
    if not 0 <= j <= nu2:
        raise ValueError(f"j={j} out of range 0..{nu2}")
    e2 = _case_e2(case)
    m = Fraction(q) ** j * gauss_binomial(nu2, j, q)
    m *= (_qpow2_frac(case, q, 2 * nu2 + e2 - 4 * j) + 1)
    m /= (_qpow2_frac(case, q, 2 * nu2 + e2 - 2 * j) + 1)
    for s in range(1, j + 1):
        m *= _qpow2_frac(case, q, 2 * nu2 + e2 - 2 * s) + 1
        m /= _qpow2_frac(case, q, 2 * s - e2) + 1
    if m.denominator != 1:
        raise ArithmeticError(f"non-integral multiplicity {m} at {case} q={q} nu'={nu2} j={j}")
    return int(m)


# ---------------------------------------------------------------------------
# closed forms: flat scheme layer

def complete_graph_eigenvalue(ell: int, q: int, xi: int, eta: int) -> int:
    """First-eigenmatrix entry of the complete graph on q^ell vertices."""
    return [[1, q**ell - 1], [1, -1]][eta][xi]


def valency(config: SpaceConfig, rel: RelIndex) -> int:
    i, xi = rel
    _code(config.nu, rel)
    v = config.q**i * dual_polar_valency(config.case, config.q, config.nu, i)
    if xi == 1:
        v *= config.q ** (config.nu - i) - 1
    return v


def scheme_eigenvalue(config: SpaceConfig, rel: RelIndex, eig: RelIndex) -> int:
    """p_rel(eig) = q^i * c(xi,eta) * (dual polar eigenvalue one level down for eta=1)."""
    i, xi = rel
    j, eta = eig
    _code(config.nu, rel)
    _code(config.nu, eig)
    c = complete_graph_eigenvalue(config.nu - i, config.q, xi, eta)
    return config.q**i * c * dual_polar_eigenvalue(config.case, config.q,
                                                   config.nu - eta, i, j)


def scheme_multiplicity(config: SpaceConfig, eig: RelIndex) -> int:
    j, eta = eig
    _code(config.nu, eig)
    if eta == 0:
        return dual_polar_multiplicity(config.case, config.q, config.nu, j)
    factor = (config.q**config.nu - 1) * (e_power(config, 2 * config.nu + config.e2 - 2) + 1)
    return factor * dual_polar_multiplicity(config.case, config.q, config.nu - 1, j)


@dataclass(frozen=True)
class SchemeTables:
    """Closed-form eigen data of the flat scheme for one configuration."""

    config: SpaceConfig
    rels: tuple[RelIndex, ...]
    eigs: tuple[RelIndex, ...]
    size: int
    valencies: dict[RelIndex, int]
    multiplicities: dict[RelIndex, int]
    P: dict[tuple[RelIndex, RelIndex], int]          # P[rel, eig]
    Q: dict[tuple[RelIndex, RelIndex], Fraction]     # Q[eig, rel]

    def p(self, rel: RelIndex, eig: RelIndex) -> int:
        return self.P[rel, eig]

    def q_entry(self, eig: RelIndex, rel: RelIndex) -> Fraction:
        return self.Q[eig, rel]


@lru_cache(maxsize=None)
def scheme_tables(config: SpaceConfig) -> SchemeTables:
    rels = tuple(relation_indices(config.nu))
    size = config.q**config.nu * dual_polar_size(config.case, config.q, config.nu)
    vals = {r: valency(config, r) for r in rels}
    mults = {e: scheme_multiplicity(config, e) for e in rels}
    P = {(r, e): scheme_eigenvalue(config, r, e) for r in rels for e in rels}
    Q = {(e, r): Fraction(mults[e] * P[r, e], vals[r]) for e in rels for r in rels}
    if sum(vals.values()) != size or sum(mults.values()) != size:
        raise ArithmeticError(f"valency/multiplicity totals disagree with |X|={size}")
    return SchemeTables(config, rels, rels, size, vals, mults, P, Q)


def check_pq_identity(tables: SchemeTables) -> bool:
    """P Q == |X| I exactly."""
    rels = tables.rels
    for a in rels:
        for b in rels:
            s = sum(tables.P[a, e] * tables.Q[e, b] for e in rels)
            if s != (tables.size if a == b else 0):
                return False
    return True


def check_column_sums(tables: SchemeTables) -> bool:
    """sum over relations of p_rel(eig) is |X| at (0,0) and 0 elsewhere."""
    for e in tables.rels:
        s = sum(tables.P[r, e] for r in tables.rels)
        if s != (tables.size if e == (0, 0) else 0):
            return False
    return True


# ---------------------------------------------------------------------------
# constructed relations / adjacency

def relation_of(config: SpaceConfig, f1: Flat, f2: Flat) -> RelIndex:
    """(i, xi) for a pair of maximal totally isotropic flats."""
    for f in (f1, f2):
        if f.dim != config.nu or not is_totally_isotropic(config, f.direction):
            raise ValueError("relation defined only on maximal totally isotropic flats")
    total = sum_subspace(config, f1.direction, f2.direction)
    dim_int = 2 * config.nu - total.dim
    i = config.nu - dim_int
    xi = 0 if flat_meet(config, f1, f2) is not None else 1
    return (i, xi)


@lru_cache(maxsize=None)
def relation_matrix(config: SpaceConfig) -> np.ndarray:
    """Relation codes (2i + xi) for all ordered pairs of maximal flats."""
    flats = enumerate_flats(config, config.nu)
    dirs = enumerate_isotropic(config, config.nu)
    n = len(flats)
    per = config.q**config.nu  # cosets per direction, contiguous in id order
    assert n == per * len(dirs)
    fld = config.field
    R = np.zeros((n, n), dtype=np.int8)
    reps = [f.rep for f in flats]
    q = config.q
    for a, da in enumerate(dirs):
        for b in range(a, len(dirs)):
            db = dirs[b]
            total = sum_subspace(config, da, db)
            i = config.nu - (2 * config.nu - total.dim)
            keys_a = np.array([_encode(reduce_mod(fld, total, r), q)
                               for r in reps[a * per:(a + 1) * per]])
            if b == a:
                keys_b = keys_a
            else:
                keys_b = np.array([_encode(reduce_mod(fld, total, r), q)
                                   for r in reps[b * per:(b + 1) * per]])
            eq = np.equal.outer(keys_a, keys_b)
            block = np.where(eq, 2 * i, 2 * i + 1).astype(np.int8)
            R[a * per:(a + 1) * per, b * per:(b + 1) * per] = block
            if b != a:
                R[b * per:(b + 1) * per, a * per:(a + 1) * per] = block.T
    R.flags.writeable = False
    return R


def _encode(v, q: int) -> int:
    n = 0
    for c in v:
        n = n * q + c
    return n


@lru_cache(maxsize=None)
def adjacency_matrix(config: SpaceConfig, rel: RelIndex) -> np.ndarray:
    code = _code(config.nu, rel)
    A = (relation_matrix(config) == code).astype(np.int64)
    A.flags.writeable = False
    return A


@lru_cache(maxsize=None)
def idempotent_int(config: SpaceConfig, eig: RelIndex) -> tuple[int, np.ndarray]:
    """(L, B) with the primitive idempotent equal to B / L exactly."""
    tables = scheme_tables(config)
    coeffs = {r: tables.Q[eig, r] / tables.size for r in tables.rels}
    L = lcm(*(c.denominator for c in coeffs.values()))
    n = tables.size
    B = np.zeros((n, n), dtype=np.int64)
    for r in tables.rels:
        c = int(coeffs[r] * L)
        if c:
            B += c * adjacency_matrix(config, r)
    B.flags.writeable = False
    return L, B


def idempotent(config: SpaceConfig, eig: RelIndex) -> exact.RationalMatrix:
    """The primitive idempotent as an exact rational matrix."""
    L, B = idempotent_int(config, eig)
    return exact.RationalMatrix(tuple(
        tuple(Fraction(int(x), L) for x in row) for row in B
    ))


def check_eigen_system(config: SpaceConfig) -> dict[str, bool]:
    """Full exact verification of A E = p E, E^2 = E, orthogonality, traces, sum."""
    tables = scheme_tables(config)
    rels = tables.rels
    Ls, Bs = {}, {}
    for e in rels:
        Ls[e], Bs[e] = idempotent_int(config, e)
    ok_eigen = True
    for r in rels:
        A = adjacency_matrix(config, r)
        for e in rels:
            lhs = exact.int_matmul(A, Bs[e])
            if not (lhs == tables.P[r, e] * Bs[e]).all():
                ok_eigen = False
    ok_idem = all((exact.int_matmul(Bs[e], Bs[e]) == Ls[e] * Bs[e]).all() for e in rels)
    ok_orth = True
    for a in range(len(rels)):
        for b in range(a + 1, len(rels)):
            prod = exact.int_matmul(Bs[rels[a]], Bs[rels[b]])
            if prod.any():
                ok_orth = False
    ok_trace = all(int(np.trace(Bs[e])) == Ls[e] * tables.multiplicities[e] for e in rels)
    Lc = lcm(*Ls.values())
    total = sum((Lc // Ls[e]) * Bs[e] for e in rels)
    ok_sum = bool((total == Lc * np.eye(tables.size, dtype=np.int64)).all())
    return {"eigen": ok_eigen, "idempotent": ok_idem, "orthogonal": ok_orth,
            "trace": ok_trace, "sum": ok_sum}


def check_eigen_system_probes(config: SpaceConfig, seed: int = 0,
                              count: int = 100) -> dict[str, bool]:
    """Probe-based eigen checks (matrix against probe block) for large schemes."""
    tables = scheme_tables(config)
    rels = tables.rels
    rng = random.Random(("eigenprobe", config.key(), seed).__repr__())
    n = tables.size
    Ls, Bs = {}, {}
    for e in rels:
        Ls[e], Bs[e] = idempotent_int(config, e)
    V = np.array([[rng.randrange(-4, 5) for _ in range(count)] for _ in range(n)],
                 dtype=np.int64)
    ok_eigen = ok_idem = True
    Lc = lcm(*Ls.values())
    acc = np.zeros((n, count), dtype=object)
    for e in rels:
        BV = exact.int_matmul(Bs[e], V)
        for r in rels:
            lhs = exact.int_matmul(adjacency_matrix(config, r), BV)
            if not (lhs == tables.P[r, e] * BV).all():
                ok_eigen = False
        if not (exact.int_matmul(Bs[e], BV) == Ls[e] * BV).all():
            ok_idem = False
        acc = acc + (Lc // Ls[e]) * BV.astype(object)
    ok_sum = bool((acc == Lc * V).all())
    ok_trace = all(int(np.trace(Bs[e])) == Ls[e] * tables.multiplicities[e] for e in rels)
    return {"eigen": ok_eigen, "idempotent": ok_idem, "trace": ok_trace, "sum": ok_sum}


# ---------------------------------------------------------------------------
# inner distributions

@dataclass(frozen=True)
class InnerDistribution:
    """Relation frequencies of a subset, with the derived eigenspace profile."""

    u: dict[RelIndex, Fraction]
    uQ: dict[RelIndex, Fraction]


def inner_distribution(config: SpaceConfig, ids) -> InnerDistribution:
    ids = sorted(ids)
    if not ids:
        raise ValueError("inner distribution of the empty set is undefined")
    tables = scheme_tables(config)
    R = relation_matrix(config)
    sub = R[np.ix_(ids, ids)]
    counts = np.bincount(sub.reshape(-1), minlength=2 * config.nu + 1)
    u = {}
    for rel in tables.rels:
        u[rel] = Fraction(int(counts[_code(config.nu, rel)]), len(ids))
    uQ = {}
    for e in tables.rels:
        uQ[e] = sum((u[r] * tables.Q[e, r] for r in tables.rels), Fraction(0))
    return InnerDistribution(u, uQ)


# ---------------------------------------------------------------------------
# q-valuations

def q_valuation(case: str, q: int, nu2: int, i: int, j: int):
    """Exact q-adic valuation of the evaluated eigenvalue (ground truth).

    Unitary valuations count powers of q0 and halve, so half-integers
    appear; a zero eigenvalue yields the INFINITY marker.
    """
    value = dual_polar_eigenvalue(case, q, nu2, i, j)
    if value == 0:
        return INFINITY
    base = _formal_config(case, q).q0 if case == "unitary" else q
    k = 0
    while value % base == 0:
        value //= base
        k += 1
    return Fraction(k, 2) if case == "unitary" else Fraction(k)


def phi_piecewise(case: str, nu2: int, i: int, j: int):
    """The stated three-regime piecewise exponent (q-independent form).

    Returns a Fraction, INFINITY, or None when (i, j) is outside the
    stated domain (j >= 2 requires i >= 2).
    """
    e2 = _case_e2(case)
    e = Fraction(e2, 2)
    if j == 0:
        return binomial2(i) + e * i
    if j == 1:
        return binomial2(i - 1) + e * (i - 1)
    if i < 2 or j > nu2 or i > nu2:
        return None
    mid4 = 4 * j - 2 * i - e2  # 4*(j - i/2 - e/2)
    if mid4 < 0:
        return binomial2(i) + (j - i) * (j - e)
    if mid4 > 4 * (nu2 - i):
        return (j - e - nu2 + 1) * (j - nu2 + i - 1) + binomial2(i - 1) + e * (i - 1)
    if case == "orthogonal":
        if i % 2 == 0:
            return Fraction(i * (i - 2), 4)
        return INFINITY if 2 * j == nu2 else Fraction((i - 1) ** 2, 4)
    if case == "unitary":
        return Fraction(i * (i - 1), 4)
    if i % 2 == 0:
        # the middle branch's infinity chain, read as a conjunction
        if 2 * (j - 1) == nu2 and 2 * i == nu2 and nu2 % 4 == 0:
            return INFINITY
        return Fraction(i * i, 4)
    return Fraction(i * i - 1, 4)


@dataclass(frozen=True)
class ValuationMismatch:
    case: str
    q: int
    nu2: int
    i: int
    j: int
    direct: object
    piecewise: object


def valuation_report(case: str, q: int, nu_max: int) -> list[ValuationMismatch]:
    """Disagreements between the piecewise form and the direct valuation."""
    out = []
    for nu2 in range(2, nu_max + 1):
        for i in range(2, nu2 + 1):
            for j in range(2, nu2 + 1):
                direct = q_valuation(case, q, nu2, i, j)
                stated = phi_piecewise(case, nu2, i, j)
                if stated is not None and direct != stated:
                    out.append(ValuationMismatch(case, q, nu2, i, j, direct, stated))
    return out


# ---------------------------------------------------------------------------
# column uniqueness of the disjoint-parallel eigenvalue

@dataclass(frozen=True)
class UniquenessResult:
    rel: RelIndex
    unique: bool
    duplicates: tuple[RelIndex, ...]
    predicted_exception: str | None
    matches_prediction: bool


def predicted_uniqueness_exception(case: str, nu: int, rel: RelIndex) -> str | None:
    """The stated exception list; (c) is scoped to the orthogonal case.

    The exception catalogue: (a) the parallel relation at nu >= 2,
    (b) the trivial-intersection relation at nu >= 2, (c) even i with
    2 <= i <= nu-1.  As stated, (c) carries no case restriction, but the
    derivation behind it collides values only when e = 0; the scan
    confirms symplectic/unitary rows with even i are in fact unique.
    """
    i, xi = rel
    if nu >= 2 and rel == (0, 1):
        return "a"
    if nu >= 2 and rel == (nu, 0):
        return "b"
    if case == "orthogonal" and i % 2 == 0 and 2 <= i <= nu - 1:
        return "c"
    return None


def column_uniqueness(config: SpaceConfig, rel: RelIndex) -> UniquenessResult:
    """Scan the closed-form row of eigenvalues for duplicates of p_rel(0,1)."""
    if rel == (0, 0):
        raise ValueError("the identity relation is excluded")
    tables = scheme_tables(config)
    target = tables.P[rel, (0, 1)]
    dups = tuple(e for e in tables.eigs
                 if e != (0, 1) and tables.P[rel, e] == target)
    predicted = predicted_uniqueness_exception(config.case, config.nu, rel)
    return UniquenessResult(rel, not dups, dups, predicted,
                            (not dups) == (predicted is None))


# ---------------------------------------------------------------------------
# axiom verification

EXHAUSTIVE_TRIPLE_BOUND = 120


@dataclass(frozen=True)
class SchemeReport:
    partition_ok: bool
    symmetry_ok: bool
    diagonal_ok: bool
    intersection_ok: bool
    pairs_checked: int
    mode: str
    seed: int

    @property
    def ok(self) -> bool:
        return (self.partition_ok and self.symmetry_ok and self.diagonal_ok
                and self.intersection_ok)


def verify_scheme(config: SpaceConfig, seed: int = 0, samples: int = 10_000) -> SchemeReport:
    """Brute-force the scheme axioms on the constructed relations."""
    R = relation_matrix(config)
    n = R.shape[0]
    d = 2 * config.nu
    codes = np.unique(R)
    partition_ok = codes.min() >= 0 and codes.max() <= d and len(codes) == d + 1
    symmetry_ok = bool((R == R.T).all())
    diagonal_ok = bool((np.diag(R) == 0).all()) and bool(((R == 0) == np.eye(n, dtype=bool)).all())

    # intersection-number constancy per relation class
    reference: dict[int, np.ndarray] = {}
    intersection_ok = True
    if n <= EXHAUSTIVE_TRIPLE_BOUND:
        mode = "exhaustive"
        pair_iter = ((x, y) for x in range(n) for y in range(n))
        pairs_checked = n * n
    else:
        mode = "sampled"
        rng = random.Random(("scheme-axioms", config.key(), seed).__repr__())
        pair_iter = ((rng.randrange(n), rng.randrange(n)) for _ in range(samples))
        pairs_checked = samples
    width = d + 1
    for x, y in pair_iter:
        k = int(R[x, y])
        hist = np.bincount(R[x, :].astype(np.int64) * width + R[:, y].astype(np.int64),
                           minlength=width * width)
        if k in reference:
            if not (reference[k] == hist).all():
                intersection_ok = False
        else:
            reference[k] = hist
    return SchemeReport(partition_ok, symmetry_ok, diagonal_ok, intersection_ok,
                        pairs_checked, mode, seed)
