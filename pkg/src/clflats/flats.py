"""Flats (cosets of subspaces), their lattice operations, and incidence.

A flat is a direction subspace plus the unique coset representative with
zero coordinates at the direction's pivot columns.  Enumeration of the
type-(m,0) flats orders them by (direction canonical index, representative
lexicographic), which fixes the FlatId used by every set type downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod

import numpy as np

from . import exact
from .field import e_power, gauss_binomial
from .geometry import (
    SpaceConfig,
    Subspace,
    Vector,
    all_vectors,
    canonicalize,
    contains_subspace,
    contains_vector,
    enumerate_isotropic,
    gram_rank,
    intersect_subspace,
    point_graph,
    reduce_mod,
    span_points,
    sum_subspace,
    vec_add,
    vec_sub,
)

FLAT_ENUM_BOUND = 10**5


@dataclass(frozen=True)
class Flat:
    """A coset direction + x with the canonical representative."""

    direction: Subspace
    rep: Vector

    @property
    def dim(self) -> int:
        return self.direction.dim


def flat_make(config: SpaceConfig, direction: Subspace, x) -> Flat:
    """The flat direction + x, with x reduced to the canonical representative."""
    x = tuple(x)
    if len(x) != config.dim:
        raise ValueError("representative has wrong length")
    return Flat(direction, reduce_mod(config.field, direction, x))


def flat_points(config: SpaceConfig, f: Flat) -> list[Vector]:
    fld = config.field
    return [vec_add(fld, p, f.rep) for p in span_points(config, f.direction)]


def flat_contains_point(config: SpaceConfig, f: Flat, v: Vector) -> bool:
    return contains_vector(config.field, f.direction,
                           vec_sub(config.field, v, f.rep))


def flat_contains_flat(config: SpaceConfig, big: Flat, small: Flat) -> bool:
    return (contains_subspace(config.field, big.direction, small.direction)
            and flat_contains_point(config, big, small.rep))


def solve_field_system(config: SpaceConfig, rows: list[list[int]],
                       rhs: list[int]) -> list[int] | None:
    """Solve rows @ y = rhs over F_q; None when inconsistent."""
    fld = config.field
    add, mul, neg, inv = fld.add_table, fld.mul_table, fld.neg_table, fld.inv_table
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, m) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        piv_inv = inv[aug[r][c]]
        if piv_inv != 1:
            mrow = mul[piv_inv]
            aug[r] = [mrow[a] for a in aug[r]]
        for i in range(m):
            f = aug[i][c]
            if i != r and f:
                fr = mul[f]
                aug[i] = [add[a][neg[fr[b]]] for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(aug[i][ncols] for i in range(r, m)):
        return None
    y = [0] * ncols
    for i, pc in enumerate(pivots):
        y[pc] = aug[i][ncols]
    return y


def flat_meet(config: SpaceConfig, f1: Flat, f2: Flat) -> Flat | None:
    """Intersection flat, or None when the cosets are disjoint."""
    fld = config.field
    diff = vec_sub(fld, f2.rep, f1.rep)
    total = sum_subspace(config, f1.direction, f2.direction)
    if not contains_vector(fld, total, diff):
        return None
    # coefficients (a | b) with a.B1 - b.B2 = rep2 - rep1
    b1, b2 = f1.direction.basis, f2.direction.basis
    neg = fld.neg_table
    columns = [list(r) for r in b1] + [[neg[c] for c in r] for r in b2]
    eqs = [list(coord) for coord in zip(*columns)] if columns else []
    if eqs:
        y = solve_field_system(config, eqs, list(diff))
        assert y is not None
        common = f1.rep
        for coeff, row in zip(y[:len(b1)], b1):
            if coeff:
                mr = fld.mul_table[coeff]
                common = tuple(fld.add(a, mr[b]) for a, b in zip(common, row))
    else:
        common = f1.rep
    inter = intersect_subspace(config, f1.direction, f2.direction)
    return flat_make(config, inter, common)


def flat_join(config: SpaceConfig, f1: Flat, f2: Flat) -> Flat:
    """The minimal flat containing both cosets."""
    fld = config.field
    diff = vec_sub(fld, f2.rep, f1.rep)
    direction = canonicalize(
        config, list(f1.direction.basis) + list(f2.direction.basis) + [diff])
    return flat_make(config, direction, f1.rep)


# ---------------------------------------------------------------------------
# enumeration

def coset_representatives(config: SpaceConfig, direction: Subspace) -> list[Vector]:
    """Canonical representatives (zero at pivot columns), lexicographic."""
    n = config.dim
    free = [j for j in range(n) if j not in direction.pivots]
    reps = []
    for vals in product(range(config.q), repeat=len(free)):
        v = [0] * n
        for j, c in zip(free, vals):
            v[j] = c
        reps.append(tuple(v))
    return reps


def count_flats(config: SpaceConfig, m: int) -> int:
    """Closed-form size of the set of type-(m,0) flats."""
    q, nu, e2 = config.q, config.nu, config.e2
    n = q ** (2 * nu - m) * gauss_binomial(nu, m, q)
    for t in range(nu - m + 1, nu + 1):
        n *= _qh_plus_one(config, t)
    return n


def count_flats_through(config: SpaceConfig, i: int, j: int) -> int:
    """Closed-form size of the pencil of type-(j,0) flats over a type-(i,0) flat."""
    n = gauss_binomial(config.nu - i, j - i, config.q)
    for t in range(config.nu - j + 1, config.nu - i + 1):
        n *= _qh_plus_one(config, t)
    return n


def _qh_plus_one(config: SpaceConfig, t: int) -> int:
    # q^(t+e-1) + 1 with the doubled-exponent convention
    return e_power(config, 2 * t + config.e2 - 2) + 1


@lru_cache(maxsize=None)
def enumerate_flats(config: SpaceConfig, m: int) -> tuple[Flat, ...]:
    """All type-(m,0) flats; index in this tuple is the flat's stable id."""
    expected = count_flats(config, m)
    if expected > FLAT_ENUM_BOUND:
        raise ValueError(f"flat enumeration bound exceeded: {expected} > {FLAT_ENUM_BOUND}")
    out = []
    for direction in enumerate_isotropic(config, m):
        for rep in coset_representatives(config, direction):
            out.append(Flat(direction, rep))
    return tuple(out)


@lru_cache(maxsize=None)
def flat_ids(config: SpaceConfig) -> dict[Flat, int]:
    """Flat -> id lookup for the maximal totally isotropic flats."""
    return {f: i for i, f in enumerate(enumerate_flats(config, config.nu))}


def flats_through(config: SpaceConfig, f: Flat, j: int) -> list[Flat]:
    """All type-(j,0) flats containing f (f of smaller or equal type)."""
    if j < f.dim:
        raise ValueError("pencil dimension below the base flat's")
    return [g for g in enumerate_flats(config, j) if flat_contains_flat(config, g, f)]


def flats_in(config: SpaceConfig, big: Flat) -> list[Flat]:
    """Members of the maximal-flat family lying inside a container flat."""
    _check_container(config, big)
    return [g for g in enumerate_flats(config, config.nu)
            if flat_contains_flat(config, big, g)]


def _check_container(config: SpaceConfig, big: Flat) -> int:
    """Validate type (nu+i, 2i) for some 1 <= i < nu; returns i."""
    i = big.dim - config.nu
    if not 1 <= i < config.nu:
        raise ValueError(f"container dimension {big.dim} not in range")
    if gram_rank(config, big.direction) != 2 * i:
        raise ValueError("container direction does not have Gram rank 2i")
    return i


def container_flats(config: SpaceConfig, s: Flat, i: int) -> list[Flat]:
    """All type-(nu+i, 2i) flats containing the maximal flat s."""
    if not 1 <= i < config.nu:
        raise ValueError(f"i={i} out of range")
    if not is_totally_isotropic_flat(config, s) or s.dim != config.nu:
        raise ValueError("base flat must be maximal totally isotropic")
    fld = config.field
    layer = {s.direction}
    for _ in range(i):
        nxt = set()
        for sub in layer:
            for v in _complement_vectors(config, sub):
                nxt.add(canonicalize(config, list(sub.basis) + [v]))
        layer = nxt
    out = [flat_make(config, sub, s.rep) for sub in sorted(layer, key=Subspace.flat_key)
           if gram_rank(config, sub) == 2 * i]
    assert all(flat_contains_flat(config, t, s) for t in out)
    return out


def _complement_vectors(config: SpaceConfig, sub: Subspace):
    fld = config.field
    for v in all_vectors(config):
        if any(v) and not contains_vector(fld, sub, v):
            yield v


def is_totally_isotropic_flat(config: SpaceConfig, f: Flat) -> bool:
    return gram_rank(config, f.direction) == 0


# ---------------------------------------------------------------------------
# incidence

@dataclass(frozen=True)
class IncidenceMatrix:
    """0/1 incidence of points (rows) against flats (columns)."""

    points: tuple[Vector, ...]
    flats: tuple[Flat, ...]
    matrix: np.ndarray  # int64, read-only

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@lru_cache(maxsize=None)
def incidence_matrix(config: SpaceConfig) -> IncidenceMatrix:
    """Full point vs maximal-flat incidence (rows in point-index order)."""
    flats = enumerate_flats(config, config.nu)
    pts = all_vectors(config)
    M = np.zeros((len(pts), len(flats)), dtype=np.int64)
    for col, f in enumerate(flats):
        for p in flat_points(config, f):
            M[_point_idx(config, p), col] = 1
    M.flags.writeable = False
    return IncidenceMatrix(tuple(pts), flats, M)


def _point_idx(config: SpaceConfig, v: Vector) -> int:
    idx = 0
    for c in v:
        idx = idx * config.q + c
    return idx


def incidence_matrix_in(config: SpaceConfig, big: Flat) -> IncidenceMatrix:
    """Incidence of the container's points against its interior maximal flats."""
    _check_container(config, big)
    members = flats_in(config, big)
    pts = sorted(flat_points(config, big))
    pt_index = {p: i for i, p in enumerate(pts)}
    M = np.zeros((len(pts), len(members)), dtype=np.int64)
    for col, f in enumerate(members):
        for p in flat_points(config, f):
            M[pt_index[p], col] = 1
    M.flags.writeable = False
    return IncidenceMatrix(tuple(pts), tuple(members), M)


@lru_cache(maxsize=None)
def gram_identity_terms(config: SpaceConfig) -> tuple[int, int]:
    """(point multiplier, neighbour multiplier) of the M M^T decomposition."""
    a = prod(_qh_plus_one(config, t) for t in range(1, config.nu + 1))
    b = prod(_qh_plus_one(config, t) for t in range(1, config.nu))
    return a, b


def check_gram_identity(config: SpaceConfig) -> bool:
    """M M^T == a*I + b*A exactly, with A the point-graph adjacency."""
    M = incidence_matrix(config).matrix
    a, b = gram_identity_terms(config)
    N = exact.int_matmul(M, M.T)
    A = point_graph(config)
    expected = a * np.eye(M.shape[0], dtype=np.int64) + b * A
    return bool((N == expected).all())


@lru_cache(maxsize=None)
def incidence_rank(config: SpaceConfig) -> int:
    """Exact rank of the incidence matrix (fraction-free elimination)."""
    return exact.rank(incidence_matrix(config).matrix)


def incidence_rank_closed_form(config: SpaceConfig) -> int:
    q, nu = config.q, config.nu
    return (q**nu - 1) * (e_power(config, 2 * nu - 2 + config.e2) + 1) + 1
