"""Spread constructions, exhaustive searches, switching sets, span results."""

import numpy as np
import pytest

from clflats import exact
from clflats.field import e_power
from clflats.flats import enumerate_flats, incidence_matrix
from clflats.geometry import (
    canonicalize,
    enumerate_isotropic,
    space_config,
    unit_vector,
    zero_vector,
)
from clflats.scheme import scheme_tables
from clflats.spreads import (
    classify_set,
    coverage,
    enumerate_spreads,
    is_switching_pair,
    list_type_I,
    spread_type_I,
    spread_type_II,
    type_II_components,
    typeI_span_check,
    typeII_span_check,
)


def test_type_I_construction(medium_config):
    cfg = medium_config
    family = list_type_I(cfg)
    assert len(family) == len(enumerate_isotropic(cfg, cfg.nu))
    n_members = cfg.q**cfg.nu
    for s in family:
        assert len(s.members) == n_members
        assert classify_set(cfg, s.members) == "full_spread"
    # distinct type-I spreads never share a flat
    seen = set()
    for s in family:
        assert not (seen & set(s.members))
        seen |= set(s.members)
    assert len(seen) == len(enumerate_flats(cfg, cfg.nu))


def test_type_I_rejects_bad_direction(s22):
    with pytest.raises(ValueError):
        spread_type_I(s22, canonicalize(s22, [unit_vector(s22, 0)]))
    with pytest.raises(ValueError):
        spread_type_I(s22, canonicalize(s22, [unit_vector(s22, 0), unit_vector(s22, 2)]))


def test_type_II_spec_example(s22):
    e = lambda j: unit_vector(s22, j)
    q_sub = canonicalize(s22, [e(0), e(1), e(3)])
    p1 = canonicalize(s22, [e(0), e(1)])
    p2 = canonicalize(s22, [e(0), e(3)])
    s = spread_type_II(s22, q_sub, p1, p2)
    assert len(s.members) == 4
    assert classify_set(s22, s.members) == "full_spread"
    flats = enumerate_flats(s22, 2)
    directions = [flats[i].direction for i in s.members]
    assert directions.count(p1) == 2 and directions.count(p2) == 2
    swapped = spread_type_II(s22, q_sub, p2, p1)
    assert swapped.members != s.members
    assert (coverage(s22, s.members) == coverage(s22, swapped.members)).all()


def test_type_II_interior_count(s22, o32):
    for cfg in (s22, o32, space_config("unitary", 4, 2)):
        comps = type_II_components(cfg)
        expected = e_power(cfg, cfg.e2) + 1
        assert comps
        assert all(len(interior) == expected for _, interior in comps)


def test_type_II_guards(s22, s21):
    e = lambda j: unit_vector(s22, j)
    q_sub = canonicalize(s22, [e(0), e(1), e(3)])
    p1 = canonicalize(s22, [e(0), e(1)])
    p2 = canonicalize(s22, [e(0), e(3)])
    with pytest.raises(ValueError):
        spread_type_II(s22, q_sub, p1, p1)
    with pytest.raises(ValueError):
        spread_type_II(s22, p1, p1, p2)
    other = canonicalize(s22, [e(1), e(2)])
    with pytest.raises(ValueError):
        spread_type_II(s22, q_sub, p1, other)
    with pytest.raises(ValueError):
        spread_type_II(s21, canonicalize(s21, [unit_vector(s21, 0), unit_vector(s21, 1)]),
                       canonicalize(s21, [unit_vector(s21, 0)]),
                       canonicalize(s21, [unit_vector(s21, 1)]))


def test_classify_and_switching(s22):
    t1 = list_type_I(s22)
    assert classify_set(s22, t1[0].members[:2]) == "partial_spread"
    assert classify_set(s22, ()) == "partial_spread"
    overlapping = (0, 1, 2)  # cosets of one direction plus something sharing points
    # two flats through a common point
    from clflats.cl import construct_pencil
    pencil = construct_pencil(s22, zero_vector(s22))
    assert classify_set(s22, pencil.ids[:2]) == "neither"
    a, b = set(t1[0].members), set(t1[1].members)
    assert is_switching_pair(s22, a, b)
    assert not is_switching_pair(s22, a, a)
    assert not is_switching_pair(s22, pencil.ids[:2], pencil.ids[2:4])


def test_switching_pairs_from_full_spreads(s22):
    search = enumerate_spreads(s22)
    spreads = search.spreads[:12]
    for i, s1 in enumerate(spreads):
        for s2 in spreads[i + 1:]:
            first = set(s1.members) - set(s2.members)
            second = set(s2.members) - set(s1.members)
            if first:
                assert is_switching_pair(s22, first, second)


@pytest.mark.parametrize("case,q,nu,count", [
    ("symplectic", 2, 1, 3), ("symplectic", 3, 1, 4),
    ("orthogonal", 3, 1, 2), ("orthogonal", 5, 1, 2), ("unitary", 4, 1, 3)])
def test_exhaustive_nu1_all_type_I(case, q, nu, count):
    cfg = space_config(case, q, nu)
    search = enumerate_spreads(cfg)
    assert search.exhaustive
    assert len(search.spreads) == count == len(list_type_I(cfg))
    assert all(s.tag == "I" for s in search.spreads)


def test_exhaustive_s22_tags(s22):
    search = enumerate_spreads(s22)
    assert search.exhaustive
    tags = [s.tag for s in search.spreads]
    assert tags.count("I") == 15 and tags.count("II") == 90
    assert len(search.spreads) == 105
    for s in search.spreads:
        assert classify_set(s22, s.members) == "full_spread"


def test_exhaustive_bound(o32):
    with pytest.raises(ValueError):
        enumerate_spreads(o32)  # 81 points exceed the backtracking bound


def test_container_scope_spreads(s22):
    from clflats.flats import container_flats
    base = enumerate_flats(s22, 2)[0]
    scope = container_flats(s22, base, 1)[0]
    search = enumerate_spreads(s22, scope)
    assert search.exhaustive
    assert len(search.spreads) == 3
    for s in search.spreads:
        assert len(s.members) == 2
        assert s.tag == "I"
        assert classify_set(s22, s.members, scope) == "full_spread"


def test_spread_differences_in_kernel(s22):
    M = incidence_matrix(s22).matrix
    spreads = enumerate_spreads(s22).spreads[:20]
    chi = np.zeros((M.shape[1], len(spreads)), dtype=np.int64)
    for c, s in enumerate(spreads):
        chi[list(s.members), c] = 1
    for c in range(1, len(spreads)):
        diff = chi[:, [0]] - chi[:, [c]]
        assert not exact.int_matmul(M, diff).any()


@pytest.mark.parametrize("case,q,nu", [("symplectic", 2, 1), ("symplectic", 2, 2),
                                       ("orthogonal", 3, 2), ("unitary", 4, 1)])
def test_type_I_span(case, q, nu):
    cfg = space_config(case, q, nu)
    report = typeI_span_check(cfg)
    assert report.ok
    tables = scheme_tables(cfg)
    assert report.expected_rank == sum(tables.multiplicities[(j, 0)]
                                       for j in range(nu + 1))
    assert report.count == report.expected_rank


def test_type_II_span_s22(s22):
    report = typeII_span_check(s22)
    assert report.ok and report.rank == 45 and report.rank_method == "bareiss"
    assert report.count == 90


def test_type_II_span_o32(o32):
    report = typeII_span_check(o32)
    tables = scheme_tables(o32)
    assert report.ok
    assert report.rank == tables.size - tables.multiplicities[(0, 1)]


def test_type_II_needs_nu2(s21):
    with pytest.raises(ValueError):
        typeII_span_check(s21)
