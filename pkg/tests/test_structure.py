import pytest

import oracles
from frozen import QSIGMAT, SIGMAS
from sigmaforge import DomainError, catalog
from sigmaforge.groups import center, frattini, is_normal, normal_subgroups, quotient
from sigmaforge.report import PropertyReport
from sigmaforge.sigma import SigmaPartition, parse_sigma_spec, sigma_quasinormal_db
from sigmaforge.structure import (RobinsonComplex, admissible_pairs, check_theorem_C, check_theorem_E,
                                  check_theorem_F, detect_p_group, detect_p_star_group, find_robinson_complex,
                                  is_QsigmaT_bruteforce, maximal_qn_dichotomy, satisfies_M_pq, satisfies_Np,
                                  satisfies_Pp, satisfies_Q_sigma_pq, satisfies_Q_sigmaP, theorem_B_violations,
                                  verify_theorem_B)

FINEST = SigmaPartition.finest()
COARSEST = SigmaPartition.coarsest()


def test_detect_p_group():
    shape = detect_p_group(catalog.build("S3"))
    assert (shape.p, shape.q) == (3, 2)
    assert shape.A.order == 3 and shape.closure_is_whole
    for name in ["C6", "Q8", "A4", "S3xC2", "D8"]:
        assert detect_p_group(catalog.build(name)) is None
    shape = detect_p_group(catalog.build("C7:C3"))
    assert (shape.p, shape.q) == (7, 3)


@pytest.mark.parametrize("name", ["S3", "C7:C3", "D10", "D14"])
def test_p_group_subgroups_modular_and_quasinormal_below_base(name, G, L):
    # in a P-group every subgroup is modular; proper subgroups of the base
    # permute with everything only when the base is not all of the group
    g, lat = G(name), L(name)
    shape = detect_p_group(g)
    assert shape is not None
    assert all(lat.modular_table[i, lat.top_index] for i in range(len(lat)))
    ref = oracles.SetLattice([e.images for e in g.elements])
    for h in lat.nodes:
        if h < shape.A:
            i = ref.pos[frozenset(e.images for e in h.elements)]
            assert ref.quasinormal_in(i, ref.top) == h.is_trivial


def test_detect_p_star():
    s = detect_p_star_group(catalog.build("S3"))
    assert s is not None and s.n == 1
    s = detect_p_star_group(catalog.build("C3:C4"))
    assert s is not None and (s.p, s.r, s.n) == (3, 2, 2)
    assert all(s.consequences.values())
    assert detect_p_star_group(catalog.build("A4")) is None


def test_p_star_center_is_frattini():
    g = catalog.build("C3:C4")
    z = center(g)
    assert z.order == 2 and frattini(g) == z


def test_robinson_a5():
    rc = find_robinson_complex(catalog.build("A5"))
    assert isinstance(rc, RobinsonComplex)
    assert rc.D.order == 60 and rc.Z.is_trivial and rc.k == 1


def test_robinson_sl25():
    g = catalog.build("SL2_5")
    rc = find_robinson_complex(g)
    assert isinstance(rc, RobinsonComplex)
    assert rc.D.is_whole and rc.Z.order == 2
    assert rc.Z == center(g) == frattini(g)


def test_robinson_wreath_fails_at_base():
    g = catalog.build("A5wrC2")
    res = find_robinson_complex(g)
    assert isinstance(res, PropertyReport) and res.verdict is False
    assert "minimal normal subgroup" in res.note
    roles = [w for w in res.witnesses if w["role"].startswith("minimal normal")]
    assert [w["subgroup"]["order"] for w in roles] == [3600]


def test_robinson_soluble():
    res = find_robinson_complex(catalog.build("S4"))
    assert isinstance(res, PropertyReport) and not res.verdict


@pytest.mark.parametrize("name", ["A5", "SL2_5", "S5", "A5xC2"])
def test_robinson_center_primes(name):
    rc = find_robinson_complex(catalog.build(name))
    assert isinstance(rc, RobinsonComplex)
    assert set(oracles.prime_factors(rc.Z.order)) <= {2, 3}


def test_np_examples():
    assert satisfies_Np(catalog.build("S3"), 3).verdict
    rep = satisfies_Np(catalog.build("S4"), 2)
    assert not rep.verdict
    (elt,) = [w for w in rep.witnesses if w["role"] == "p'-element"]
    assert "(" in elt["element"]
    assert satisfies_Np(catalog.build("C5"), 2).verdict


def test_pp_examples():
    assert satisfies_Pp(catalog.build("C2xC6"), 2).verdict
    assert satisfies_Pp(catalog.build("Q8"), 2).verdict
    assert not satisfies_Pp(catalog.build("S4"), 2).verdict


def test_admissible_pairs():
    assert admissible_pairs([2, 3]) == [(3, 2)]
    assert admissible_pairs([2, 3, 5, 7]) == [(3, 2), (5, 2), (7, 2), (7, 3)]


def test_q_sigma_pq():
    assert satisfies_M_pq(catalog.build("S3"), 3, 2).verdict
    # the S3 factor is a normal P-subgroup whose reflections are not modular in S3 x C2
    assert not satisfies_M_pq(catalog.build("S3xC2"), 3, 2).verdict
    with pytest.raises(DomainError):
        satisfies_Q_sigma_pq(catalog.build("S3"), FINEST, 3, 3)
    # different classes: nothing sigma-primary of that type
    rep = satisfies_Q_sigma_pq(catalog.build("S3xC2"), FINEST, 3, 2)
    assert rep.verdict and rep.note
    assert satisfies_Q_sigmaP(catalog.build("C5"), COARSEST).verdict


def test_s3xc2_p_subgroup_by_lattice_scan(G, L):
    g, lat = G("S3xC2"), L("S3xC2")
    ps = [n for n in normal_subgroups(g) if n.order == 6 and detect_p_group(n) is not None]
    assert ps
    top = lat.top_index
    scan = all(lat.modular_table[i, top] for p in ps for i in lat.below(lat.index_of(p)).tolist())
    assert scan == satisfies_M_pq(g, 3, 2).verdict


def test_bruteforce_examples(G, L):
    for spec in SIGMAS:
        assert is_QsigmaT_bruteforce(G("C2xC6"), parse_sigma_spec(spec), L("C2xC6")).verdict
    assert is_QsigmaT_bruteforce(G("Q8"), FINEST, L("Q8")).verdict
    rep = is_QsigmaT_bruteforce(G("SL2_3"), FINEST, L("SL2_3"))
    assert not rep.verdict and rep.consistent
    lat = L("SL2_3")
    q8 = [n for n in lat.nodes if n.order == 8][0]
    by_desc = {tuple(n.descriptor()): n for n in lat.nodes}
    assert rep.witnesses
    for w in rep.witnesses:
        h = by_desc[tuple(w["subgroup"]["elements"])]
        assert h < q8 and h.order == 4


@pytest.mark.parametrize("name", ["S4", "D12", "C5:C4", "SL2_3", "S3xC3"])
def test_bruteforce_matches_frozen(name, G, L):
    got = tuple(is_QsigmaT_bruteforce(G(name), parse_sigma_spec(s), L(name)).verdict for s in SIGMAS)
    assert got == QSIGMAT[name]


def test_theorem_c_examples(G, L):
    rep = check_theorem_C(G("S3"), FINEST, L("S3"))
    assert rep.verdict and rep.all_consistent()
    rep = check_theorem_C(G("SL2_3"), FINEST, L("SL2_3"))
    assert not rep.verdict
    assert rep.find("C(i)").verdict is False
    assert check_theorem_C(G("C12"), FINEST, L("C12")).verdict
    rep = check_theorem_C(G("A5"), FINEST, L("A5"))
    assert rep.status == "not-applicable"


def test_theorem_e_examples(G, L):
    rep = check_theorem_E(G("A5"), parse_sigma_spec("pi:2,3"), L("A5"))
    assert rep.verdict and rep.all_consistent()
    rep = check_theorem_E(G("SL2_5"), FINEST, L("SL2_5"))
    assert rep.verdict == QSIGMAT["SL2_5"][0] and rep.all_consistent()
    # soluble input reduces to the soluble criterion
    assert check_theorem_E(G("S3"), FINEST, L("S3")).verdict


def test_theorem_f_examples(G, L):
    assert check_theorem_F(G("S3"), L("S3")).verdict
    assert check_theorem_F(G("Q8"), L("Q8")).verdict
    assert not check_theorem_F(G("S4"), L("S4")).verdict


def test_theorem_b_abelian_and_s3(G, L):
    assert verify_theorem_B(G("C2xC6"), FINEST, L("C2xC6")).verdict
    lat = L("S3")
    db = sigma_quasinormal_db(G("S3"), COARSEST, lat)
    for a in db.qn_in_top():
        assert theorem_B_violations(a, lat.top, COARSEST, lat) == []


def test_theorem_b_hall_permutability_by_product_sets(G, L):
    # conclusion (i) cross-checked with element sets in S4 under pi:2,3 and finest
    g, lat = G("S4"), L("S4")
    ref = oracles.SetLattice([e.images for e in g.elements])
    key = lambda h: ref.pos[frozenset(e.images for e in h.elements)]
    from sigmaforge.sigma import hall_subgroups, sigma_of
    for spec in ["finest", "onepi:2,3"]:
        sigma = parse_sigma_spec(spec)
        for a in sigma_quasinormal_db(g, sigma, lat).qn_in_top():
            for label in sigma_of(g.order, sigma):
                for h in hall_subgroups(g, label, lat, sigma):
                    assert ref.permutes(key(a), key(h))


@pytest.mark.parametrize("name", ["S3", "S4", "SL2_3", "A5", "C5:C4", "D12"])
@pytest.mark.parametrize("spec", SIGMAS)
def test_dichotomy(name, spec, G, L):
    rep = maximal_qn_dichotomy(G(name), parse_sigma_spec(spec), L(name))
    assert rep.verdict, rep.to_text()


def test_dichotomy_s3_finest(G, L):
    # A3 is the only maximal sigma-quasinormal subgroup; S3/A3 is simple
    rep = maximal_qn_dichotomy(G("S3"), FINEST, L("S3"))
    assert rep.note.startswith("1 ")
    a3 = [h for h in L("S3").nodes if h.order == 3][0]
    assert is_normal(a3, G("S3")) and quotient(G("S3"), a3).group.order == 2
