import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from frozen import LATTICE_SIZES, MODULAR
from sigmaforge import DomainError, Permutation, ScaleError, catalog
from sigmaforge.groups import is_normal, normal_subgroups
from sigmaforge.lattice import (build_lattice, interval, is_modular_element, is_modular_lattice, is_submodular,
                                kurosh_witness, maximal_subgroups, to_dot)


def P(text, degree):
    return Permutation.parse(text, degree)


def test_small_counts(L):
    assert len(L("S3")) == 6
    assert len(L("C7")) == 2
    q8 = L("Q8")
    assert len(q8) == 6
    assert sorted(h.order for h in q8.nodes) == [1, 2, 4, 4, 4, 8]


@pytest.mark.parametrize("name", sorted(LATTICE_SIZES))
def test_counts_match_frozen_oracle(name, L):
    assert len(L(name)) == LATTICE_SIZES[name]


@pytest.mark.parametrize("name, count", [("A5", 59), ("SL2_5", 76), ("S5", 156), ("A5xC2", 164)])
def test_larger_counts(name, count, L):
    assert len(L(name)) == count


def test_lattice_cap(monkeypatch):
    monkeypatch.setenv("SIGMAFORGE_LATTICE_CAP", "20")
    with pytest.raises(ScaleError):
        build_lattice(catalog.build("S4"))


@pytest.mark.parametrize("name", ["S4", "D24", "SL2_3", "C2xC2xC2xC2", "A5"])
def test_join_meet_tables(name, L):
    lat = L(name)
    lat.verify_joins()
    n = len(lat)
    rng = np.random.default_rng(7)
    for _ in range(200):
        i, j = rng.integers(n, size=2)
        a, b = lat.nodes[i], lat.nodes[j]
        assert lat.nodes[lat.meet[i, j]] == a.meet(b)
        assert lat.nodes[lat.join[i, j]] == a.join(b)


def test_modular_elements_examples(G, L):
    s3, s4 = G("S3"), G("S4")
    assert is_modular_element(s3.subgroup([P("(0 1)", 3)]), L("S3"))
    t = s4.subgroup([P("(0 1)", 4)])
    assert not is_modular_element(t, L("S4"))
    w = kurosh_witness(t, L("S4"))
    assert w is not None
    with pytest.raises(DomainError):
        is_modular_element(catalog.build("S3").whole, L("S4"))


@pytest.mark.parametrize("name", ["S4", "D8", "SL2_3", "A4xC2", "C5:C4", "S3xC3", "Dic16"])
def test_normal_implies_modular(name, G, L):
    lat = L(name)
    for n in normal_subgroups(G(name)):
        assert is_modular_element(n, lat)


@pytest.mark.parametrize("name", ["S3", "S4", "D8", "D12", "SL2_3", "C5:C4", "Q8", "A4", "C4:C4", "S3xC2"])
def test_modular_table_matches_set_oracle(name, G, L):
    lat = L(name)
    ref = oracles.SetLattice([e.images for e in G(name).elements])
    ids = [ref.pos[frozenset(e.images for e in h.elements)] for h in lat.nodes]
    for i, k in [(i, k) for k in range(len(lat)) for i in lat.below(k).tolist()]:
        assert bool(lat.modular_table[i, k]) == ref.modular_in(ids[i], ids[k])


def test_modular_lattice_examples(L):
    assert is_modular_lattice(L("C2xC2xC2xC2"))
    assert is_modular_lattice(L("S3"))
    assert not is_modular_lattice(L("S4"))
    assert L("S4").pentagon() is not None
    assert L("Q8").pentagon() is None


@pytest.mark.parametrize("name", sorted(MODULAR))
def test_modular_lattice_matches_frozen(name, L):
    assert is_modular_lattice(L(name)) == MODULAR[name]


@pytest.mark.parametrize("name", ["S3", "S4", "D8", "Q8", "C5:C4", "D12"])
def test_modular_lattice_iff_all_modular(name, L):
    lat = L(name)
    assert is_modular_lattice(lat) == all(is_modular_element(h, lat) for h in lat.nodes)


def test_maximal_subgroups_of_s3(L):
    assert sorted(h.order for h in maximal_subgroups(L("S3"))) == [2, 2, 2, 3]


def test_intervals(G, L):
    lat = L("S4")
    whole = interval(lat, lat.bottom, lat.top)
    assert len(whole) == len(lat)
    s4 = G("S4")
    v4 = s4.subgroup([P("(0 1)(2 3)", 4), P("(0 2)(1 3)", 4)])
    above = interval(lat, v4, lat.top)
    # containment scan: V4, three D8, A4, S4
    assert sorted(h.order for h in above.nodes) == [4, 8, 8, 8, 12, 24]
    assert len(above) == sum(v4 <= h for h in lat.nodes)
    with pytest.raises(DomainError):
        interval(lat, lat.top, v4)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S4", "D24", "SL2_3"]), st.data())
def test_interval_preserves_join_and_meet(name, data):
    from conftest import cached_lattice
    lat = cached_lattice(name)
    n = len(lat)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.sampled_from(lat.above(a).tolist()))
    sub = interval(lat, lat.nodes[a], lat.nodes[b])
    for i in range(len(sub)):
        for j in range(len(sub)):
            x, y = sub.nodes[i], sub.nodes[j]
            assert sub.nodes[sub.join[i, j]] == lat.node_join(x, y)
            assert sub.nodes[sub.meet[i, j]] == lat.node_meet(x, y)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S4", "C5:C4", "D12", "A4xC2"]), st.data())
def test_lattice_axioms(name, data):
    from conftest import cached_lattice
    lat = cached_lattice(name)
    n = len(lat)
    i, j, k = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    J, M = lat.join, lat.meet
    assert J[i, j] == J[j, i] and M[i, j] == M[j, i]
    assert J[J[i, j], k] == J[i, J[j, k]]
    assert M[M[i, j], k] == M[i, M[j, k]]
    assert J[i, M[i, j]] == i and M[i, J[i, j]] == i
    assert lat.leq[i, j] == (J[i, j] == j)


def test_submodular(G, L):
    s3 = G("S3")
    assert is_submodular(s3.subgroup([P("(0 1)", 3)]), L("S3"))
    assert is_submodular(s3.whole, L("S3"))
    s4 = G("S4")
    lat = L("S4")
    v4 = s4.subgroup([P("(0 1)(2 3)", 4), P("(0 2)(1 3)", 4)])
    # subnormal: <(0 1)(2 3)> in V4 in S4
    assert is_submodular(s4.subgroup([P("(0 1)(2 3)", 4)]), lat)
    assert is_normal(v4, s4)


def test_dot_export(L):
    from sigmaforge.sigma import SigmaPartition
    text = to_dot(L("S3"), SigmaPartition.coarsest(), name="S3")
    assert text.startswith("digraph")
    assert text.count("->") == 8  # covers: four atoms below, four coatoms above
    assert "|H|=6" in text
    assert to_dot(L("S3"), name="S3") == to_dot(L("S3"), name="S3")
