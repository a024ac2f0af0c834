"""Spaces, forms, canonical subspaces, isotropic enumeration, isometries."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clflats.field import e_power
from clflats.geometry import (
    POINT_GRAPH_BOUND,
    all_vectors,
    canonicalize,
    enumerate_isotropic,
    form_value,
    is_isotropic,
    isotropic_brute_force,
    point_graph,
    random_isometry,
    space_config,
    subspace_type,
    unit_vector,
    zero_subspace,
)

GRID = (("symplectic", 2, 1), ("symplectic", 3, 1), ("symplectic", 2, 2),
        ("symplectic", 3, 2), ("symplectic", 2, 3),
        ("unitary", 4, 1), ("unitary", 4, 2),
        ("orthogonal", 3, 1), ("orthogonal", 5, 1), ("orthogonal", 3, 2))


def test_config_guards():
    with pytest.raises(ValueError):
        space_config("orthogonal", 2, 2)
    with pytest.raises(ValueError):
        space_config("unitary", 3, 1)
    with pytest.raises(ValueError):
        space_config("symplectic", 2, 0)
    with pytest.raises(ValueError):
        space_config("hermitian", 2, 1)


def test_form_values_spot():
    s = space_config("symplectic", 2, 1)
    e1, e2 = unit_vector(s, 0), unit_vector(s, 1)
    assert form_value(s, e1, e2) == 1
    for v in all_vectors(s):
        assert form_value(s, v, v) == 0  # alternating
    o = space_config("orthogonal", 3, 1)
    assert form_value(o, unit_vector(o, 0), unit_vector(o, 0)) == 0
    assert form_value(o, unit_vector(o, 0), unit_vector(o, 1)) == 1
    with pytest.raises(ValueError):
        form_value(s, (1, 0, 0), e1)


def test_unitary_form_conjugates_right_argument():
    u = space_config("unitary", 4, 1)
    fld = u.field
    omega = 2  # generator of F4
    x = (omega, 0)
    y = (0, omega)
    # x H conj(y)^T = omega * conj(omega) = omega^3 = 1
    assert form_value(u, x, y) == fld.mul(omega, fld.conj(omega)) == 1


def test_canonicalize_row_space_invariance():
    cfg = space_config("symplectic", 2, 2)
    rows = [(1, 1, 0, 0), (0, 1, 0, 0)]
    a = canonicalize(cfg, rows)
    b = canonicalize(cfg, [rows[1], rows[0]])
    c = canonicalize(cfg, [rows[0], (1, 0, 0, 0)])
    assert a == b == c
    assert a.basis == ((1, 0, 0, 0), (0, 1, 0, 0))
    assert canonicalize(cfg, [(0, 0, 0, 0)]).dim == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.data())
def test_canonicalize_invariant_under_row_operations(q, data):
    cfg = space_config("symplectic", q, 1)
    fld = cfg.field
    rows = data.draw(st.lists(
        st.tuples(*[st.integers(0, q - 1)] * 2), min_size=1, max_size=3))
    sub = canonicalize(cfg, rows)
    # scale a row and add it to another; the row space is unchanged
    scaled = [list(r) for r in rows]
    c = data.draw(st.integers(1, q - 1))
    i = data.draw(st.integers(0, len(rows) - 1))
    j = data.draw(st.integers(0, len(rows) - 1))
    scaled[i] = [fld.add(a, fld.mul(c, b)) for a, b in zip(scaled[i], scaled[j])] \
        if i != j else [fld.mul(c, a) for a in scaled[i]]
    assert canonicalize(cfg, scaled) == sub


def test_subspace_types():
    cfg = space_config("symplectic", 2, 2)
    assert subspace_type(cfg, zero_subspace(cfg)) == (0, 0)
    e = lambda j: unit_vector(cfg, j)
    assert subspace_type(cfg, canonicalize(cfg, [e(0), e(1)])) == (2, 0)
    assert subspace_type(cfg, canonicalize(cfg, [e(0), e(2)])) == (2, 2)


@pytest.mark.parametrize("case,q,nu", GRID)
def test_maximal_isotropic_count(case, q, nu):
    cfg = space_config(case, q, nu)
    subs = enumerate_isotropic(cfg, nu)
    expected = 1
    for t in range(1, nu + 1):
        expected *= e_power(cfg, 2 * t + cfg.e2 - 2) + 1
    assert len(subs) == expected
    assert len(set(subs)) == len(subs)
    assert all(subspace_type(cfg, s) == (nu, 0) for s in subs)


@pytest.mark.parametrize("case,q,nu", [("symplectic", 2, 2), ("symplectic", 3, 2),
                                       ("unitary", 4, 1), ("unitary", 4, 2),
                                       ("orthogonal", 3, 2)])
def test_enumeration_matches_bruteforce(case, q, nu):
    cfg = space_config(case, q, nu)
    for m in (1, 2):
        if m > nu:
            continue
        assert enumerate_isotropic(cfg, m) == isotropic_brute_force(cfg, m)


def test_unitary_isotropic_lines():
    cfg = space_config("unitary", 4, 1)
    iso_vectors = [v for v in all_vectors(cfg) if any(v) and is_isotropic(cfg, v)]
    assert len(iso_vectors) == 9
    assert len(enumerate_isotropic(cfg, 1)) == 3


def test_enumerate_isotropic_range_check():
    cfg = space_config("symplectic", 2, 2)
    with pytest.raises(ValueError):
        enumerate_isotropic(cfg, 3)


@pytest.mark.parametrize("case,q,nu", [("symplectic", 2, 2), ("orthogonal", 3, 2),
                                       ("unitary", 4, 1)])
def test_random_isometry_properties(case, q, nu):
    cfg = space_config(case, q, nu)
    assert random_isometry(cfg, 5) == random_isometry(cfg, 5)
    assert random_isometry(cfg, 5) != random_isometry(cfg, 6)
    maxes = enumerate_isotropic(cfg, nu)
    index = set(maxes)
    for seed in range(50):
        iso = random_isometry(cfg, seed)
        for i in range(cfg.dim):
            for j in range(cfg.dim):
                assert form_value(cfg, iso.T[i], iso.T[j]) == cfg.form[i][j]
        images = {iso.apply_subspace(cfg, s) for s in maxes}
        assert images == index  # induced permutation of the maximal isotropics


def test_isometry_preserves_type_many_seeds(s22):
    sub = enumerate_isotropic(s22, 2)[0]
    for seed in range(100):
        img = random_isometry(s22, seed).apply_subspace(s22, sub)
        assert subspace_type(s22, img) == (2, 0)


@pytest.mark.parametrize("case,q,nu", [("symplectic", 2, 1), ("symplectic", 2, 2),
                                       ("symplectic", 3, 1)])
def test_point_graph_symplectic_complete(case, q, nu):
    cfg = space_config(case, q, nu)
    A = point_graph(cfg)
    n = q ** (2 * nu)
    assert (A == 1 - np.eye(n, dtype=np.int64)).all()


@pytest.mark.parametrize("case,q,nu,params", [
    ("orthogonal", 3, 1, (9, 4, 1, 2)),
    ("unitary", 4, 1, (16, 9, 4, 6)),
])
def test_point_graph_srg_parameters(case, q, nu, params):
    cfg = space_config(case, q, nu)
    A = point_graph(cfg)
    n, k, lam, mu = params
    assert A.shape == (n, n)
    assert set(A.sum(axis=1).tolist()) == {k}
    A2 = A @ A
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            assert A2[x, y] == (lam if A[x, y] else mu)


def test_point_graph_degree_closed_form():
    for case, q, nu in GRID:
        cfg = space_config(case, q, nu)
        if cfg.num_points > 300:
            continue
        A = point_graph(cfg)
        if case == "symplectic":
            expected = q ** (2 * nu) - 1
        else:
            expected = (q**nu - 1) * (e_power(cfg, 2 * nu + cfg.e2 - 2) + 1)
        assert set(A.sum(axis=1).tolist()) == {expected}


def test_point_graph_bound():
    cfg = space_config("symplectic", 7, 3)
    assert cfg.num_points > POINT_GRAPH_BOUND
    with pytest.raises(ValueError):
        point_graph(cfg)
