"""Cameron-Liebler sets of maximal totally isotropic flats.

A set's parameter is its size divided by the product (q^(t+e-1) + 1),
t = 1..nu, kept as an exact rational (integrality is observed, never
assumed).  The membership test has several equivalent routes: image of
the transposed incidence matrix, orthogonality to its kernel, spectral
support in the two trivial eigenspaces, the shifted spectral variant,
and the two-relation neighbour counts.  All routes are exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import exact
from .field import e_power, gauss_binomial
from .flats import (
    Flat,
    container_flats,
    enumerate_flats,
    flat_ids,
    flat_make,
    incidence_matrix,
    incidence_matrix_in,
)
from .geometry import (
    Isometry,
    SpaceConfig,
    Vector,
    enumerate_isotropic,
    is_isotropic,
    vec_sub,
)
from .scheme import (
    adjacency_matrix,
    idempotent_int,
    relation_matrix,
    scheme_tables,
)
from .spreads import enumerate_spreads, list_type_I, list_type_II


def set_denominator(config: SpaceConfig, levels: int | None = None) -> int:
    """prod over t = 1..levels of (q^(t+e-1) + 1); levels defaults to nu."""
    levels = config.nu if levels is None else levels
    d = 1
    for t in range(1, levels + 1):
        d *= e_power(config, 2 * t + config.e2 - 2) + 1
    return d


@dataclass(frozen=True)
class FlatSet:
    """A subset of the maximal totally isotropic flats, by sorted ids."""

    config: SpaceConfig
    ids: tuple[int, ...]

    def __post_init__(self):
        if list(self.ids) != sorted(set(self.ids)):
            object.__setattr__(self, "ids", tuple(sorted(set(self.ids))))
        n = len(enumerate_flats(self.config, self.config.nu))
        if self.ids and not (0 <= self.ids[0] and self.ids[-1] < n):
            raise ValueError("flat id out of range")

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def x(self) -> Fraction:
        return Fraction(self.size, set_denominator(self.config))

    def chi(self) -> np.ndarray:
        n = len(enumerate_flats(self.config, self.config.nu))
        v = np.zeros(n, dtype=np.int64)
        v[list(self.ids)] = 1
        return v

    def complement(self) -> "FlatSet":
        n = len(enumerate_flats(self.config, self.config.nu))
        return FlatSet(self.config, tuple(sorted(set(range(n)) - set(self.ids))))

    def __contains__(self, fid: int) -> bool:
        return fid in set(self.ids)


def cl_parameter(flat_set: FlatSet) -> Fraction:
    return flat_set.x


def full_set(config: SpaceConfig) -> FlatSet:
    return FlatSet(config, tuple(range(len(enumerate_flats(config, config.nu)))))


def empty_set(config: SpaceConfig) -> FlatSet:
    return FlatSet(config, ())


def apply_isometry(flat_set: FlatSet, iso: Isometry) -> FlatSet:
    """Relabel the set by an affine isometry of the space."""
    config = flat_set.config
    flats = enumerate_flats(config, config.nu)
    ids = flat_ids(config)
    out = []
    for fid in flat_set.ids:
        f = flats[fid]
        direction = iso.apply_subspace(config, f.direction)
        rep = iso.apply_vector(config, f.rep)
        out.append(ids[flat_make(config, direction, rep)])
    return FlatSet(config, tuple(sorted(out)))


# ---------------------------------------------------------------------------
# cached per-configuration machinery

@lru_cache(maxsize=None)
def _image_solver(config: SpaceConfig) -> exact.EchelonSolver:
    return exact.EchelonSolver(incidence_matrix(config).matrix.T)


@lru_cache(maxsize=None)
def _kernel_basis(config: SpaceConfig) -> np.ndarray:
    return exact.nullspace_int(incidence_matrix(config).matrix)


# ---------------------------------------------------------------------------
# single-set tests (characterisations of membership)

def test_image(flat_set: FlatSet) -> bool:
    """Solvability route and kernel-orthogonality route; both must agree."""
    config = flat_set.config
    chi = flat_set.chi()
    by_solve = _image_solver(config).solvable([int(c) for c in chi])
    kernel = _kernel_basis(config)
    by_kernel = not exact.int_matmul(kernel, chi.reshape(-1, 1)).any() \
        if kernel.shape[0] else True
    if by_solve != by_kernel:
        raise AssertionError("image and kernel membership routes disagree")
    return by_solve


def image_certificate(flat_set: FlatSet):
    """An exact point weighting y with M^T y = chi, or None."""
    config = flat_set.config
    return _image_solver(config).solve([int(c) for c in flat_set.chi()])


def test_spectrum(flat_set: FlatSet) -> bool:
    """Spectral support only on the all-one and parallel-class eigenspaces."""
    config = flat_set.config
    chi = flat_set.chi().reshape(-1, 1)
    tables = scheme_tables(config)
    for eig in tables.eigs:
        if eig in ((0, 0), (0, 1)):
            continue
        _, B = idempotent_int(config, eig)
        if exact.int_matmul(B, chi).any():
            return False
    # the all-one projection is size/|X| times the all-one vector, always
    total = int(chi.sum())
    L00, B00 = idempotent_int(config, (0, 0))
    proj = exact.int_matmul(B00, chi)
    if not (proj * tables.size == L00 * total * np.ones_like(proj)).all():
        raise AssertionError("all-one projection identity violated")
    return True


def test_shifted_spectrum(flat_set: FlatSet) -> bool:
    """The shifted vector q^nu*D*chi - |L|*j must lie in the parallel eigenspace."""
    config = flat_set.config
    D = set_denominator(config)
    qnu = config.q**config.nu
    chi = flat_set.chi()
    v = (D * qnu) * chi - flat_set.size * np.ones_like(chi)
    tables = scheme_tables(config)
    for eig in tables.eigs:
        if eig == (0, 1):
            continue
        _, B = idempotent_int(config, eig)
        if exact.int_matmul(B, v.reshape(-1, 1)).any():
            return False
    return True


def _count_coefficients(config: SpaceConfig, i: int) -> tuple[int, int]:
    """(fixed term scale a_i, parameter scale b_i) of the neighbour-count law."""
    a = (e_power(config, i * (i + 1) + config.e2 * i)
         * gauss_binomial(config.nu - 1, i, config.q))
    b = (e_power(config, i * (i - 1) + config.e2 * i)
         * gauss_binomial(config.nu - 1, i - 1, config.q))
    return a, b


def lemma_counts(flat_set: FlatSet, rel) -> bool:
    """Neighbour-count law for one relation, exact at rational parameter."""
    config = flat_set.config
    i, xi = rel
    a, b = _count_coefficients(config, i)
    A = adjacency_matrix(config, rel)
    chi = flat_set.chi()
    counts = exact.int_matmul(A, chi.reshape(-1, 1)).reshape(-1)
    D = set_denominator(config)
    size = flat_set.size
    if xi == 0:
        expected = D * a * chi + size * b
    else:
        expected = size * a - D * a * chi
    return bool((D * counts == expected).all())


def test_counts(flat_set: FlatSet) -> bool:
    """The two-relation neighbour-count characterisation (i = 1 rows).

    At nu = 1 the disjoint row is vacuous (its coefficient vanishes), so
    only the meeting row constrains.
    """
    ok = lemma_counts(flat_set, (1, 0))
    if flat_set.config.nu >= 2:
        ok = ok and lemma_counts(flat_set, (1, 1))
    return ok


def test_all_counts(flat_set: FlatSet) -> bool:
    """The neighbour-count law across every relation index."""
    tables = scheme_tables(flat_set.config)
    return all(lemma_counts(flat_set, rel) for rel in tables.rels if rel != (0, 0))


@dataclass(frozen=True)
class SpreadTestReport:
    constant: bool            # equal intersection with every family member
    value_matches: bool       # the constant equals the set's parameter
    conclusive: bool          # family was exhaustive for the scope
    family: str
    intersections: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.constant and self.value_matches


def test_spreads(flat_set: FlatSet, family: str = "auto") -> SpreadTestReport:
    """Intersection counts against a spread family.

    family: 'typeI', 'typeII', 'constructive' (both), 'exhaustive', or
    'auto' (exhaustive when the point bound allows, else constructive).
    Necessary-condition mode unless the family is exhaustive.
    """
    config = flat_set.config
    conclusive = False
    if family == "auto":
        family = "exhaustive" if config.num_points <= 32 else "constructive"
    if family == "exhaustive":
        search = enumerate_spreads(config)
        spreads = search.spreads
        conclusive = search.exhaustive
    elif family == "typeI":
        spreads = list_type_I(config)
    elif family == "typeII":
        spreads = list_type_II(config)
    elif family == "constructive":
        spreads = list_type_I(config) + (list_type_II(config) if config.nu >= 2 else ())
    else:
        raise ValueError(f"unknown family {family!r}")
    member = set(flat_set.ids)
    inter = tuple(len(member.intersection(s.members)) for s in spreads)
    constant = len(set(inter)) <= 1
    value_matches = constant and (not inter or Fraction(inter[0]) == flat_set.x)
    return SpreadTestReport(constant, value_matches, conclusive, family, inter)


def switching_pair_balanced(flat_set: FlatSet, first, second) -> bool:
    """Equal intersection with the two halves of a switching pair."""
    member = set(flat_set.ids)
    return len(member.intersection(first)) == len(member.intersection(second))


def is_cameron_liebler(flat_set: FlatSet, method: str = "kernel") -> bool:
    """Membership verdict by the chosen route (kernel is the cheap default)."""
    if method in ("kernel", "image", "auto"):
        return test_image(flat_set)
    if method == "spectrum":
        return test_spectrum(flat_set)
    if method == "shifted":
        return test_shifted_spectrum(flat_set)
    if method == "counts":
        return test_counts(flat_set)
    if method == "spreads":
        return test_spreads(flat_set).passed
    raise ValueError(f"unknown method {method!r}")


def battery(flat_set: FlatSet) -> dict[str, bool]:
    """All routes at once; the equivalent ones must agree."""
    verdicts = {
        "image": test_image(flat_set),
        "spectrum": test_spectrum(flat_set),
        "shifted": test_shifted_spectrum(flat_set),
        "counts": test_counts(flat_set),
    }
    if len(set(verdicts.values())) != 1:
        raise AssertionError(f"equivalent membership routes disagree: {verdicts}")
    report = test_spreads(flat_set)
    verdicts["spreads"] = report.passed
    if report.conclusive and report.passed != verdicts["image"]:
        raise AssertionError("exhaustive spread route disagrees with image route")
    return verdicts


# ---------------------------------------------------------------------------
# batch verdicts (for large randomized agreement sweeps)

def batch_verdicts(config: SpaceConfig, chi_matrix: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorised exact verdicts for many characteristic columns at once.

    chi_matrix has one subset per column.  Returns boolean arrays for the
    five equivalent routes; all arithmetic stays integral.
    """
    tables = scheme_tables(config)
    D = set_denominator(config)
    qnu = config.q**config.nu
    sizes = chi_matrix.sum(axis=0).astype(np.int64)

    solver = _image_solver(config)
    if solver._null_rows is not None and solver._null_rows.size:
        image = ~exact.int_matmul(solver._null_rows, chi_matrix).any(axis=0)
    else:
        image = np.ones(chi_matrix.shape[1], dtype=bool)

    kernel_rows = _kernel_basis(config)
    if kernel_rows.shape[0]:
        kernel = ~exact.int_matmul(kernel_rows, chi_matrix).any(axis=0)
    else:
        kernel = np.ones(chi_matrix.shape[1], dtype=bool)

    spectrum = np.ones(chi_matrix.shape[1], dtype=bool)
    for eig in tables.eigs:
        if eig in ((0, 0), (0, 1)):
            continue
        _, B = idempotent_int(config, eig)
        spectrum &= ~exact.int_matmul(B, chi_matrix).any(axis=0)

    shifted_mat = (D * qnu) * chi_matrix - np.ones_like(chi_matrix) * sizes
    shifted = np.ones(chi_matrix.shape[1], dtype=bool)
    for eig in tables.eigs:
        if eig == (0, 1):
            continue
        _, B = idempotent_int(config, eig)
        shifted &= ~exact.int_matmul(B, shifted_mat).any(axis=0)

    counts = np.ones(chi_matrix.shape[1], dtype=bool)
    a, b = _count_coefficients(config, 1)
    for xi in ((0, 1) if config.nu >= 2 else (0,)):
        A = adjacency_matrix(config, (1, xi))
        got = D * exact.int_matmul(A, chi_matrix)
        if xi == 0:
            want = D * a * chi_matrix + b * np.ones_like(chi_matrix) * sizes
        else:
            want = a * np.ones_like(chi_matrix) * sizes - D * a * chi_matrix
        counts &= (got == want).all(axis=0)

    return {"image": image, "kernel": kernel, "spectrum": spectrum,
            "shifted": shifted, "counts": counts}


def random_subset_matrix(config: SpaceConfig, count: int, seed: int) -> np.ndarray:
    """Seeded 0/1 matrix of random subsets (uniform size), one per column."""
    rng = random.Random(("subsets", config.key(), seed).__repr__())
    n = len(enumerate_flats(config, config.nu))
    cols = np.zeros((n, count), dtype=np.int64)
    for c in range(count):
        size = rng.randint(0, n)
        for fid in rng.sample(range(n), size):
            cols[fid, c] = 1
    return cols


# ---------------------------------------------------------------------------
# constructions and closure algebra

def construct_pencil(config: SpaceConfig, point: Vector) -> FlatSet:
    """All maximal totally isotropic flats through one point."""
    ids = flat_ids(config)
    out = [ids[flat_make(config, p, point)] for p in enumerate_isotropic(config, config.nu)]
    return FlatSet(config, tuple(sorted(out)))


def pencils_disjoint(config: SpaceConfig, a: Vector, b: Vector) -> bool:
    """Pencils at two points share no flat iff the difference is non-isotropic."""
    return not is_isotropic(config, vec_sub(config.field, a, b))


def combine(first: FlatSet, second: FlatSet | None, mode: str) -> FlatSet:
    """Closure algebra: complement, disjoint_union, difference."""
    config = first.config
    if mode == "complement":
        return first.complement()
    if second is None or second.config is not config:
        raise ValueError("second operand missing or from another configuration")
    a, b = set(first.ids), set(second.ids)
    if mode == "disjoint_union":
        if a & b:
            raise ValueError("operands are not disjoint")
        return FlatSet(config, tuple(sorted(a | b)))
    if mode == "difference":
        if not b <= a:
            raise ValueError("difference requires containment")
        return FlatSet(config, tuple(sorted(a - b)))
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# nu = 1 exhaustive classification

EXHAUSTIVE_SUBSET_BOUND = 24


def classify_nu1(config: SpaceConfig) -> list[tuple[FlatSet, Fraction]]:
    """Every Cameron-Liebler set at nu = 1, by exhaustive subset sweep.

    Each hit is cross-checked against the spread-selection description:
    constant intersection with the (q^e + 1) parallel classes, and the
    set is the union of those selections.
    """
    if config.nu != 1:
        raise ValueError("classification sweep is for nu = 1")
    n = len(enumerate_flats(config, 1))
    if n > EXHAUSTIVE_SUBSET_BOUND:
        raise ValueError(f"too many flats for exhaustive sweep: {n}")
    kernel = _kernel_basis(config)
    spreads = list_type_I(config)
    out = []
    for mask in range(1 << n):
        ids = tuple(i for i in range(n) if mask >> i & 1)
        chi = np.zeros((n, 1), dtype=np.int64)
        chi[list(ids), 0] = 1
        if kernel.shape[0] and exact.int_matmul(kernel, chi).any():
            continue
        fs = FlatSet(config, ids)
        x = fs.x
        selections = [len(set(ids) & set(s.members)) for s in spreads]
        if len(set(selections)) > 1 or (selections and Fraction(selections[0]) != x):
            raise AssertionError("classified set fails the spread-selection description")
        out.append((fs, x))
    return out


# ---------------------------------------------------------------------------
# intersecting families

@dataclass(frozen=True)
class IntersectingReport:
    is_intersecting: bool
    is_maximum: bool
    bound: int
    clique_coclique_ok: bool


def intersecting_check(flat_set: FlatSet) -> IntersectingReport:
    """Pairwise meeting family test plus the size bound.

    Also verifies, on this configuration, the product-bound instance:
    a pencil (clique) and a type-I spread (coclique) multiply to the
    total number of flats and meet in exactly one member.
    """
    config = flat_set.config
    R = relation_matrix(config)
    ids = list(flat_set.ids)
    sub = R[np.ix_(ids, ids)]
    intersecting = bool((sub % 2 == 0).all())  # even codes = meeting cosets
    bound = set_denominator(config)
    pencil = construct_pencil(config, (0,) * config.dim)
    product_ok = pencil.size * config.q**config.nu == len(enumerate_flats(config, config.nu))
    for s in list_type_I(config):
        if len(set(pencil.ids) & set(s.members)) != 1:
            product_ok = False
    return IntersectingReport(intersecting, intersecting and flat_set.size == bound,
                              bound, product_ok)


# ---------------------------------------------------------------------------
# restriction to container flats

@dataclass(frozen=True)
class Restriction:
    container: Flat
    i: int
    member_ids: tuple[int, ...]   # global ids of the members inside the container
    x_f: Fraction
    in_container_image: bool
    integral: bool
    within_bounds: bool

    @property
    def ok(self) -> bool:
        return self.in_container_image and self.integral and self.within_bounds


def restrict_cl(flat_set: FlatSet, container: Flat) -> Restriction:
    """Restrict to the members inside a type-(nu+i, 2i) container flat."""
    config = flat_set.config
    inc = incidence_matrix_in(config, container)
    i = container.dim - config.nu
    ids = flat_ids(config)
    local_of_global = {ids[f]: col for col, f in enumerate(inc.flats)}
    members = tuple(sorted(set(flat_set.ids) & set(local_of_global)))
    chi_local = np.zeros((len(inc.flats), 1), dtype=np.int64)
    chi_local[[local_of_global[g] for g in members], 0] = 1
    solver = exact.EchelonSolver(np.asarray(inc.matrix).T)
    in_image = solver.solvable([int(c) for c in chi_local[:, 0]])
    x_f = Fraction(len(members), set_denominator(config, i))
    integral = x_f.denominator == 1
    within = 0 <= x_f <= min(flat_set.x, Fraction(config.q**i))
    return Restriction(container, i, members, x_f, in_image, integral, within)


def degree_identity(flat_set: FlatSet, base_id: int, i: int) -> bool:
    """The container-sum identity for a member of the set.

    x equals (sum of container parameters) / [nu-1 choose nu-i]_q
    minus (q^nu - 1)/(q^i - 1) plus 1, exactly.
    """
    config = flat_set.config
    if base_id not in set(flat_set.ids):
        raise ValueError("base flat must belong to the set")
    base = enumerate_flats(config, config.nu)[base_id]
    containers = container_flats(config, base, i)
    expected_count = gauss_binomial(config.nu, config.nu - i, config.q)
    if len(containers) != expected_count:
        raise AssertionError(f"container count {len(containers)} != {expected_count}")
    total = Fraction(0)
    for t in containers:
        total += restrict_cl(flat_set, t).x_f
    q = config.q
    lhs = flat_set.x
    rhs = (total / gauss_binomial(config.nu - 1, config.nu - i, q)
           - Fraction(q**config.nu - 1, q**i - 1) + 1)
    return lhs == rhs


@dataclass(frozen=True)
class PencilProfile:
    """Distribution of container parameters over the containers of one member."""

    base_id: int
    i: int
    x: Fraction
    container_parameters: tuple[Fraction, ...]
    histogram: dict[int, int]          # theta -> |T_theta|, theta = 1..min(x, q^i)
    count_identity_ok: bool
    weighted_identity_ok: bool
    bound_ok: bool
    case: str                          # 'equality' or 'strict' (empty if x < 2)
    case_detail_ok: bool


def pencil_distribution(flat_set: FlatSet, base_id: int, i: int) -> PencilProfile:
    config = flat_set.config
    if base_id not in set(flat_set.ids):
        raise ValueError("base flat must belong to the set")
    base = enumerate_flats(config, config.nu)[base_id]
    containers = container_flats(config, base, i)
    params = tuple(restrict_cl(flat_set, t).x_f for t in containers)
    q = config.q
    x = flat_set.x
    cap = min(x, Fraction(q**i))
    if any(p.denominator != 1 for p in params):
        raise AssertionError("non-integral container parameter")
    hist: dict[int, int] = {}
    for p in params:
        hist[int(p)] = hist.get(int(p), 0) + 1
    if any(theta < 1 or theta > cap for theta in hist):
        raise AssertionError(f"container parameter outside 1..{cap}: {sorted(hist)}")
    total_containers = gauss_binomial(config.nu, config.nu - i, q)
    smaller = gauss_binomial(config.nu - 1, config.nu - i, q)
    count_ok = sum(hist.values()) == total_containers
    weighted_ok = sum((theta - 1) * c for theta, c in hist.items()) == (x - 1) * smaller

    if x < 2:
        return PencilProfile(base_id, i, x, params, hist, count_ok, weighted_ok,
                             True, "", True)
    cap_i = int(cap)
    t1 = hist.get(1, 0)
    bound = total_containers - Fraction(x - 1, cap_i - 1) * smaller
    bound_ok = t1 <= bound
    if Fraction(t1) == bound:
        case = "equality"
        top = hist.get(cap_i, 0)
        detail = (Fraction(top) == Fraction(x - 1, cap_i - 1) * smaller
                  and all(hist.get(theta, 0) == 0 for theta in range(2, cap_i)))
    else:
        case = "strict"
        # locate the bracketing index and check the parameter lower bound;
        # the stated window on ell itself is vacuous once x is large
        ell = t1 // smaller + 1
        detail = (1 <= ell
                  and (ell - 1) * smaller <= t1 < ell * smaller
                  and x >= Fraction(q**config.nu - 1, q**i - 1) - ell + 2)
    return PencilProfile(base_id, i, x, params, hist, count_ok, weighted_ok,
                         bound_ok, case, detail)


# ---------------------------------------------------------------------------
# search

def search_cl(config: SpaceConfig, x_target: Fraction | int, strategy: str,
              seed: int = 0, tries: int = 200) -> list[FlatSet]:
    """Sets with the target parameter passing the full battery.

    exhaustive: complete sweep (small flat counts only).
    pencil_closure: pencils, complements, and disjoint pencil unions.
    seeded_random: random subsets of the right size (rarely fruitful).
    """
    x_target = Fraction(x_target)
    n = len(enumerate_flats(config, config.nu))
    D = set_denominator(config)
    target_size = x_target * D
    found: dict[tuple[int, ...], FlatSet] = {}

    def consider(fs: FlatSet) -> None:
        if fs.x == x_target and fs.ids not in found and is_cameron_liebler(fs):
            battery(fs)
            found[fs.ids] = fs

    if strategy == "exhaustive":
        if n > EXHAUSTIVE_SUBSET_BOUND:
            raise ValueError(f"too many flats for exhaustive search: {n}")
        if target_size.denominator != 1:
            return []
        for ids in itertools.combinations(range(n), int(target_size)):
            consider(FlatSet(config, ids))
    elif strategy == "pencil_closure":
        from .geometry import all_vectors
        pencils = [construct_pencil(config, pt) for pt in all_vectors(config)]
        for p in pencils:
            consider(p)
            consider(p.complement())
        consider(full_set(config))
        consider(empty_set(config))
        limit = int(x_target) if x_target.denominator == 1 else 0
        if limit >= 2:
            _disjoint_unions(config, pencils, limit, consider)
    elif strategy == "seeded_random":
        rng = random.Random(("search", config.key(), seed).__repr__())
        if target_size.denominator == 1 and 0 <= target_size <= n:
            for _ in range(tries):
                ids = tuple(sorted(rng.sample(range(n), int(target_size))))
                consider(FlatSet(config, ids))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return [found[k] for k in sorted(found)]


def _disjoint_unions(config: SpaceConfig, pencils, limit: int, consider) -> None:
    from .geometry import all_vectors
    pts = all_vectors(config)
    by_point = dict(zip(pts, pencils))

    def grow(chosen_pts, start):
        if 2 <= len(chosen_pts) <= limit:
            union = set()
            for pt in chosen_pts:
                union |= set(by_point[pt].ids)
            if len(chosen_pts) <= limit:
                consider(FlatSet(config, tuple(sorted(union))))
        if len(chosen_pts) == limit:
            return
        for k in range(start, len(pts)):
            cand = pts[k]
            if all(pencils_disjoint(config, cand, p) for p in chosen_pts):
                grow(chosen_pts + [cand], k + 1)

    for k in range(len(pts)):
        grow([pts[k]], k + 1)
