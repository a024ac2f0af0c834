"""Spreads and switching sets of maximal totally isotropic flats.

A full spread partitions the scope's points into q^nu flats.  Two
constructive families exist: type I (all cosets of one maximal totally
isotropic subspace) and, for nu >= 2, type II (mix the cosets of two
distinct maximal totally isotropic subspaces inside a common
type-(nu+1, 2) subspace).  Members are stored as sorted global FlatIds;
a container scope is recorded alongside.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import exact
from .field import e_power
from .flats import (
    Flat,
    coset_representatives,
    enumerate_flats,
    flat_ids,
    flat_make,
    flat_points,
    flats_in,
    incidence_matrix,
)
from .geometry import (
    SpaceConfig,
    Subspace,
    all_vectors,
    canonicalize,
    contains_subspace,
    contains_vector,
    enumerate_isotropic,
    gram_rank,
    is_totally_isotropic,
    span_points,
)
from .scheme import idempotent_int, scheme_tables

EXHAUSTIVE_POINT_BOUND = 32


@dataclass(frozen=True)
class Spread:
    """A set of pairwise disjoint maximal flats, scoped to a flat or the space."""

    members: tuple[int, ...]          # sorted global FlatIds
    scope: Flat | None = None         # None = full space
    tag: str = "other"                # "I", "II", or "other"


def _member_flats(config: SpaceConfig, spread: Spread) -> list[Flat]:
    flats = enumerate_flats(config, config.nu)
    return [flats[i] for i in spread.members]


def spread_type_I(config: SpaceConfig, direction: Subspace) -> Spread:
    """All q^nu cosets of one maximal totally isotropic subspace."""
    if direction.dim != config.nu or not is_totally_isotropic(config, direction):
        raise ValueError("type-I spreads need a maximal totally isotropic direction")
    ids = flat_ids(config)
    members = sorted(ids[flat_make(config, direction, rep)]
                     for rep in coset_representatives(config, direction))
    return Spread(tuple(members), None, "I")


def spread_type_II(config: SpaceConfig, container: Subspace,
                   p1: Subspace, p2: Subspace, shift=None) -> Spread:
    """Cosets of p1 inside a coset of the container, cosets of p2 outside it.

    The base construction uses the container subspace itself; an optional
    shift translates the split, which is how the affine group moves these
    spreads around (translates are genuinely new once q > 2).
    """
    if config.nu < 2:
        raise ValueError("type-II spreads need nu >= 2")
    if container.dim != config.nu + 1 or gram_rank(config, container) != 2:
        raise ValueError("container must be a type-(nu+1, 2) subspace")
    if p1 == p2:
        raise ValueError("the two directions must be distinct")
    for p in (p1, p2):
        if p.dim != config.nu or not is_totally_isotropic(config, p):
            raise ValueError("directions must be maximal totally isotropic")
        if not contains_subspace(config.field, container, p):
            raise ValueError("directions must lie inside the container")
    fld = config.field
    ids = flat_ids(config)
    if shift is None:
        inside = span_points(config, container)
    else:
        from .geometry import vec_add
        inside = {vec_add(fld, y, tuple(shift)) for y in span_points(config, container)}
    members = {ids[flat_make(config, p1, y)] for y in inside}
    members |= {ids[flat_make(config, p2, y)] for y in all_vectors(config)
                if y not in inside}
    return Spread(tuple(sorted(members)), None, "II")


@lru_cache(maxsize=None)
def list_type_I(config: SpaceConfig) -> tuple[Spread, ...]:
    return tuple(spread_type_I(config, d)
                 for d in enumerate_isotropic(config, config.nu))


@lru_cache(maxsize=None)
def type_II_components(config: SpaceConfig) -> tuple[tuple[Subspace, tuple[Subspace, ...]], ...]:
    """All type-(nu+1,2) subspaces with their interior maximal isotropics."""
    maxes = enumerate_isotropic(config, config.nu)
    fld = config.field
    containers: set[Subspace] = set()
    for p in maxes:
        for v in all_vectors(config):
            if not any(v) or contains_vector(fld, p, v):
                continue
            q_sub = canonicalize(config, list(p.basis) + [v])
            if gram_rank(config, q_sub) == 2:
                containers.add(q_sub)
    expected_interior = e_power(config, config.e2) + 1
    out = []
    for q_sub in sorted(containers, key=Subspace.flat_key):
        interior = tuple(p for p in maxes if contains_subspace(fld, q_sub, p))
        if len(interior) != expected_interior:
            raise AssertionError(
                f"container with {len(interior)} interior maximals, expected {expected_interior}")
        out.append((q_sub, interior))
    return tuple(out)


@lru_cache(maxsize=None)
def list_type_II(config: SpaceConfig) -> tuple[Spread, ...]:
    """Every type-II spread: containers, ordered direction pairs, all shifts.

    Shifts range over coset representatives of the container, closing the
    family under the affine group (needed for the span results).
    """
    from .geometry import reduce_mod
    fld = config.field
    seen: dict[tuple[int, ...], Spread] = {}
    for q_sub, interior in type_II_components(config):
        shifts = sorted({reduce_mod(fld, q_sub, v) for v in all_vectors(config)})
        for p1 in interior:
            for p2 in interior:
                if p1 == p2:
                    continue
                for shift in shifts:
                    s = spread_type_II(config, q_sub, p1, p2, shift)
                    seen.setdefault(s.members, s)
    return tuple(seen[m] for m in sorted(seen))


# ---------------------------------------------------------------------------
# classification

def coverage(config: SpaceConfig, member_ids) -> np.ndarray:
    M = incidence_matrix(config).matrix
    ids = sorted(member_ids)
    if not ids:
        return np.zeros(M.shape[0], dtype=np.int64)
    return M[:, ids].sum(axis=1)


def classify_set(config: SpaceConfig, member_ids, scope: Flat | None = None) -> str:
    """'partial_spread', 'full_spread', or 'neither' by point-set checks."""
    cov = coverage(config, member_ids)
    if scope is None:
        if cov.max(initial=0) > 1:
            return "neither"
        return "full_spread" if member_ids and cov.min(initial=1) == 1 else "partial_spread"
    from .flats import _point_idx
    scope_idx = sorted(_point_idx(config, p) for p in flat_points(config, scope))
    outside = np.ones(cov.shape[0], dtype=bool)
    outside[scope_idx] = False
    if cov[outside].max(initial=0) > 0:
        return "neither"
    inside = cov[scope_idx]
    if inside.max(initial=0) > 1:
        return "neither"
    return "full_spread" if member_ids and inside.min(initial=1) == 1 else "partial_spread"


def is_switching_pair(config: SpaceConfig, first, second,
                      scope: Flat | None = None) -> bool:
    """Disjoint partial spreads covering exactly the same points."""
    a, b = set(first), set(second)
    if a & b:
        return False
    if classify_set(config, a, scope) == "neither":
        return False
    if classify_set(config, b, scope) == "neither":
        return False
    return bool((coverage(config, a) == coverage(config, b)).all())


# ---------------------------------------------------------------------------
# exhaustive search

@dataclass(frozen=True)
class SpreadSearch:
    spreads: tuple[Spread, ...]
    exhaustive: bool


def enumerate_spreads(config: SpaceConfig, scope: Flat | None = None) -> SpreadSearch:
    """All spreads of the scope by backtracking over the least uncovered point.

    Bounded at 32 scope points; beyond the bound the constructive
    type-I-within-scope family is returned with exhaustive=False.
    """
    from .flats import _point_idx
    if scope is None:
        scope_points = list(range(config.num_points))
        candidates = list(range(len(enumerate_flats(config, config.nu))))
        tagger = _full_space_tag(config)
    else:
        scope_points = sorted(_point_idx(config, p) for p in flat_points(config, scope))
        candidates = [flat_ids(config)[f] for f in flats_in(config, scope)]
        tagger = None
    if len(scope_points) > EXHAUSTIVE_POINT_BOUND:
        if scope is None:
            raise ValueError(
                f"exhaustive search bound exceeded ({len(scope_points)} points)")
        return SpreadSearch(_scope_type_I_family(config, scope), exhaustive=False)

    M = incidence_matrix(config).matrix
    pos = {p: k for k, p in enumerate(scope_points)}
    flat_masks = {}
    for fid in candidates:
        pts = np.flatnonzero(M[:, fid])
        mask = 0
        for p in pts:
            mask |= 1 << pos[int(p)]
        flat_masks[fid] = mask
    full_mask = (1 << len(scope_points)) - 1
    # candidates that can cover a given least-uncovered point
    contains_point: dict[int, list[int]] = {k: [] for k in range(len(scope_points))}
    for fid in candidates:
        m = flat_masks[fid]
        k = 0
        mm = m
        while mm:
            if mm & 1:
                contains_point[k].append(fid)
            mm >>= 1
            k += 1
    solutions: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def backtrack(covered: int) -> None:
        if covered == full_mask:
            solutions.append(tuple(sorted(chosen)))
            return
        low = ((~covered) & full_mask)
        low = (low & -low).bit_length() - 1
        for fid in contains_point[low]:
            m = flat_masks[fid]
            if m & covered:
                continue
            chosen.append(fid)
            backtrack(covered | m)
            chosen.pop()

    backtrack(0)
    spreads = tuple(Spread(members, scope, tagger(members) if tagger else _scope_tag(config, members))
                    for members in sorted(set(solutions)))
    return SpreadSearch(spreads, exhaustive=True)


def _full_space_tag(config: SpaceConfig):
    type1 = {s.members for s in list_type_I(config)}
    type2 = {s.members for s in list_type_II(config)} if config.nu >= 2 else set()

    def tag(members: tuple[int, ...]) -> str:
        if members in type1:
            return "I"
        if members in type2:
            return "II"
        return "other"

    return tag


def _scope_tag(config: SpaceConfig, members: tuple[int, ...]) -> str:
    flats = enumerate_flats(config, config.nu)
    dirs = {flats[i].direction for i in members}
    return "I" if len(dirs) == 1 else "other"


def _scope_type_I_family(config: SpaceConfig, scope: Flat) -> tuple[Spread, ...]:
    """One spread per maximal totally isotropic subspace of the scope direction."""
    fld = config.field
    ids = flat_ids(config)
    members_sets = []
    for p in enumerate_isotropic(config, config.nu):
        if not contains_subspace(fld, scope.direction, p):
            continue
        members = sorted({ids[flat_make(config, p, y)] for y in flat_points(config, scope)})
        members_sets.append(tuple(members))
    return tuple(Spread(m, scope, "I") for m in sorted(members_sets))


# ---------------------------------------------------------------------------
# span checks

@dataclass(frozen=True)
class SpanReport:
    family: str
    count: int
    rank: int
    expected_rank: int
    vanishing_ok: bool       # projections that the construction forces to zero
    nonvanishing_ok: bool    # projections that must stay nonzero per spread
    rank_method: str

    @property
    def ok(self) -> bool:
        return (self.rank == self.expected_rank and self.vanishing_ok
                and self.nonvanishing_ok)


def _stack(config: SpaceConfig, spreads) -> np.ndarray:
    n = len(enumerate_flats(config, config.nu))
    S = np.zeros((len(spreads), n), dtype=np.int64)
    for r, s in enumerate(spreads):
        S[r, list(s.members)] = 1
    return S


BARE_RANK_LIMIT = 120_000  # rows*cols budget for direct fraction-free rank


def _stack_rank(config: SpaceConfig, stack: np.ndarray, expected: int,
                upper_bound_proven: bool) -> tuple[int, str]:
    """Exact stack rank; Bareiss when small, certified bounds otherwise."""
    if stack.shape[0] * stack.shape[1] <= BARE_RANK_LIMIT:
        return exact.rank(stack), "bareiss"
    lb = 0
    for p in exact.MODULAR_PRIMES:
        lb = max(lb, exact.modular_rank(stack, p))
        if lb == expected:
            break
    ub = min(stack.shape) if not upper_bound_proven else expected
    if lb == ub == expected:
        return expected, "certified"
    return lb, "modular-lower-bound-only"


def _nonzero_projections(config: SpaceConfig, eig, stack: np.ndarray,
                         seed: int = 0) -> bool:
    """Whether every stack row has a nonzero projection under the idempotent.

    A seeded random functional of the idempotent witnesses nonzeroness in
    one pass; rows it fails to witness get the exact full-column check.
    """
    _, B = idempotent_int(config, eig)
    rng = random.Random(("witness", config.key(), eig, seed).__repr__())
    r = np.array([rng.randrange(1, 64) for _ in range(B.shape[0])], dtype=np.int64)
    witness = exact.int_matmul(exact.int_matmul(r.reshape(1, -1), B), stack.T)
    for idx in np.flatnonzero(witness.reshape(-1) == 0):
        col = exact.int_matmul(B, stack[int(idx)].reshape(-1, 1))
        if not col.any():
            return False
    return True


def typeI_span_check(config: SpaceConfig) -> SpanReport:
    """Type-I characteristic vectors: independent, orthogonal to every eta=1 space."""
    spreads = list_type_I(config)
    stack = _stack(config, spreads)
    tables = scheme_tables(config)
    vanishing_ok = True
    for j in range(config.nu):
        _, B = idempotent_int(config, (j, 1))
        if exact.int_matmul(B, stack.T).any():
            vanishing_ok = False
    nonvanishing_ok = all(_nonzero_projections(config, (j, 0), stack)
                          for j in range(config.nu + 1))
    expected = sum(tables.multiplicities[(j, 0)] for j in range(config.nu + 1))
    rank, method = _stack_rank(config, stack, expected, upper_bound_proven=vanishing_ok)
    return SpanReport("I", len(spreads), rank, expected, vanishing_ok,
                      nonvanishing_ok, method)


def typeII_span_check(config: SpaceConfig) -> SpanReport:
    """Type-II characteristic vectors: span the parallel-class complement."""
    if config.nu < 2:
        raise ValueError("type-II span check needs nu >= 2")
    spreads = list_type_II(config)
    stack = _stack(config, spreads)
    tables = scheme_tables(config)
    vanishing_ok = True
    _, B01 = idempotent_int(config, (0, 1))
    if exact.int_matmul(B01, stack.T).any():
        vanishing_ok = False
    nonvanishing_ok = all(_nonzero_projections(config, eig, stack)
                          for eig in tables.eigs if eig[0] != 0)
    expected = tables.size - tables.multiplicities[(0, 1)]
    rank, method = _stack_rank(config, stack, expected, upper_bound_proven=vanishing_ok)
    return SpanReport("II", len(spreads), rank, expected, vanishing_ok,
                      nonvanishing_ok, method)
