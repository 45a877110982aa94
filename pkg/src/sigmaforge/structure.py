"""Structural detectors, the named quotient properties, and theorem verifiers.

Each ``check_theorem_*`` evaluates the structural side of a characterization
literally and, independently, the definitional brute force built from
:func:`sigmaforge.sigma.sigma_quasinormal_db`.  The report's ``consistent``
flag records whether the two sides agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, prod

from .errors import DomainError, ScaleError
from .groups import (PermGroup, Subgroup, _sub, center, chief_factors_below, chief_series,
                     closure_mask, conjugacy_classes, cyclic_subgroup, derived_subgroup, frattini,
                     induces_power_automorphism, is_abelian, is_normal, is_perfect, is_prime, is_soluble,
                     largest_normal_p_subgroup, normal_closure, normal_subgroups, prime_factors, quotient,
                     residual, section_centralizer, sylow_subgroups)
from .lattice import SubgroupLattice, build_lattice, is_modular_lattice
from .report import PropertyReport
from .sigma import (SigmaPartition, hall_subgroups, is_quasinormal, is_sigma_nilpotent, is_sigma_primary,
                    is_sigma_seminormal, largest_normal_sigma_subgroup, permutes, quotient_is_sigma_nilpotent,
                    sigma_nilpotent_residual, sigma_of, sigma_quasinormal_db)

COARSEST = SigmaPartition.coarsest()


def is_elementary_abelian(h: Subgroup, p: int) -> bool:
    orders = h.ambient.element_orders[h.indices]
    return is_abelian(h) and bool(((orders == 1) | (orders == p)).all())


def _centralizes(x: int, a: Subgroup) -> bool:
    amb = a.ambient
    return all(amb.conj(x, y) == y for y in a.gens)


def _first_of_order(g: Subgroup, n: int) -> int | None:
    orders = g.ambient.element_orders
    for x in g.indices.tolist():
        if orders[x] == n:
            return x
    return None


# P-groups and P*-groups

@dataclass
class PGroupShape:
    p: int
    q: int
    A: Subgroup
    t_gen: Subgroup
    closure_is_whole: bool = True  # the complement's normal closure is the group


def detect_p_group(g) -> PGroupShape | None:
    """Non-abelian A ⋊ <t>: A elementary abelian p, |t| = q prime, t a non-trivial power map on A."""
    g = _sub(g)
    n = g.order
    primes = prime_factors(n)
    if len(primes) != 2:
        return None
    amb = g.ambient
    for p, q in (primes, primes[::-1]):
        if n % (q * q) == 0:
            continue
        a = largest_normal_p_subgroup(g, p)
        if a.order * q != n or not is_elementary_abelian(a, p):
            continue
        t = _first_of_order(g, q)
        if not induces_power_automorphism(t, a) or _centralizes(t, a):
            continue
        tg = cyclic_subgroup(amb, t)
        return PGroupShape(p, q, a, tg, closure_is_whole=normal_closure(tg, g) == g)
    return None


@dataclass
class PStarShape:
    p: int  # prime of A
    r: int  # prime of the acting element
    n: int  # |t| = r**n
    A: Subgroup
    T: Subgroup
    consequences: dict = field(default_factory=dict)


def detect_p_star_group(g, lat: SubgroupLattice | None = None) -> PStarShape | None:
    """A ⋊ <t> with A elementary abelian, |t| a prime power, t a power map of prime order on A.

    A found shape also records whether Z(G) = Phi(G) = <t^r>, whether G/Z(G) is
    a non-abelian P-group and whether the subgroup lattice is modular.
    """
    g = _sub(g)
    order = g.order
    primes = prime_factors(order)
    if len(primes) != 2:
        return None
    amb = g.ambient
    for p, r in (primes, primes[::-1]):
        a = largest_normal_p_subgroup(g, p)
        rn = order // a.order
        if a.is_trivial or prime_factors(rn) != [r] or not is_elementary_abelian(a, p):
            continue
        t = _first_of_order(g, rn)
        if t is None or not induces_power_automorphism(t, a):
            continue
        tr = amb.mul(t, t) if r == 2 else _power(amb, t, r)
        if _centralizes(t, a) or not _centralizes(tr, a):
            continue
        n = 1
        while r ** n < rn:
            n += 1
        shape = PStarShape(p, r, n, a, cyclic_subgroup(amb, t))
        z = center(g)
        sub_lat = lat if lat is not None and lat.top == g else build_lattice(g)
        q = quotient(g, z).group
        shape.consequences = {
            "center_is_t_power": z == cyclic_subgroup(amb, tr),
            "frattini_is_center": frattini(g, sub_lat) == z,
            "central_quotient_is_p_group": detect_p_group(q) is not None,
            "modular_lattice": is_modular_lattice(sub_lat),
        }
        return shape
    return None


def _power(amb: PermGroup, x: int, k: int) -> int:
    y = 0
    for _ in range(k):
        y = amb.mul(y, x)
    return y


# Robinson complexes

@dataclass
class RobinsonComplex:
    D: Subgroup
    Z: Subgroup
    factors: list  # the U_i, normal in G, Z < U_i <= D

    @property
    def k(self) -> int:
        return len(self.factors)


def _simple_nonabelian_over(u: Subgroup, z: Subgroup) -> bool:
    """Is u/z simple and non-abelian (z normal in u)?"""
    if u == z or derived_subgroup(u) <= z:
        return False
    amb = u.ambient
    zg = list(z.gens)
    for cls in conjugacy_classes(u):
        if z.mask >> cls[0] & 1:
            continue
        if closure_mask(amb, cls + zg) != u.mask:
            return False
    return True


def find_robinson_complex(g) -> RobinsonComplex | PropertyReport:
    """Robinson complex with D the soluble residual, or a failing report naming the reason."""
    g = _sub(g)
    fail = PropertyReport("robinson", False)
    d = residual(g, "soluble")
    if d.is_trivial:
        fail.note = "group is soluble (trivial soluble residual)"
        return fail
    if not is_perfect(d) or not is_normal(d, g):  # pragma: no cover - residuals are perfect and normal
        raise AssertionError("soluble residual is not a perfect normal subgroup")
    fail.witness("D", d)
    z = center(d)
    cands = [n for n in normal_subgroups(g) if z < n <= d]
    mins = [n for n in cands if not any(m < n for m in cands)]
    bad = [u for u in mins if not _simple_nonabelian_over(u, z)]
    if bad:
        for u in bad:
            fail.witness("minimal normal subgroup above Z(D) with non-simple factor", u)
        fail.note = (f"a minimal normal subgroup of order {bad[0].order} over Z(D) does not give a "
                     "simple chief factor")
        return fail
    qz = d.order // z.order
    joined = z
    for u in mins:
        joined = joined.join(u)
    if prod(u.order // z.order for u in mins) != qz or joined != d:
        fail.note = "D/Z(D) is not the direct product of the chief factors U_i/Z(D)"
        return fail
    for lower, upper in chief_factors_below(g, z):
        if not is_prime(upper.order // lower.order):
            fail.witness("non-cyclic chief factor below Z(D)", upper)
            fail.note = "a chief factor below Z(D) is not of prime order"
            return fail
    if frattini(d) != z:
        fail.witness("Z(D)", z)
        fail.note = "Z(D) differs from the Frattini subgroup of D"
        return fail
    return RobinsonComplex(d, z, mins)


def robinson_report(g) -> PropertyReport:
    found = find_robinson_complex(g)
    if isinstance(found, PropertyReport):
        return found
    rep = PropertyReport("robinson", True, note=f"k = {found.k}")
    rep.witness("D", found.D)
    rep.witness("Z(D)", found.Z)
    for u in found.factors:
        rep.witness("U", u)
    return rep


# properties over soluble normal subgroups

def soluble_normal_subgroups(g) -> list[Subgroup]:
    return [n for n in normal_subgroups(g) if is_soluble(n)]


def _image_indices(q, g: Subgroup):
    return q._coset_to_element[q.coset_of[g.indices]]


def satisfies_Np(g, p: int) -> PropertyReport:
    """p'-elements of every G/N (N soluble normal) act as power maps on O_p(G/N)."""
    g = _sub(g)
    rep = PropertyReport(f"N_{p}", True)
    orders = g.ambient.element_orders
    pprime = [x for x in g.indices.tolist() if orders[x] % p]
    for n in soluble_normal_subgroups(g):
        q = quotient(g, n)
        o = largest_normal_p_subgroup(q.group, p)
        if o.is_trivial:
            continue
        seen = set()
        for x in pprime:
            xi = q.image_index(x)
            if xi in seen:
                continue
            seen.add(xi)
            if not induces_power_automorphism(xi, o):
                rep.verdict = False
                rep.witness("N", n)
                rep.witness("preimage of O_p(G/N)", q.preimage(o))
                rep.witness("p'-element", g.ambient.element(x))
                return rep
    return rep


def satisfies_Pp(g, p: int) -> PropertyReport:
    """Every subgroup of O_p(G/N) permutes with all subgroups of each Sylow p-subgroup of G/N."""
    g = _sub(g)
    rep = PropertyReport(f"P_{p}", True)
    for n in soluble_normal_subgroups(g):
        q = quotient(g, n)
        o = largest_normal_p_subgroup(q.group, p)
        if o.is_trivial:
            continue
        for s in sylow_subgroups(q.group, p):
            lat_s = build_lattice(s)
            for x in lat_s.below(lat_s.index_of(o)).tolist():
                h = lat_s.nodes[x]
                if not is_quasinormal(h, s, lat_s):
                    rep.verdict = False
                    rep.witness("N", n)
                    rep.witness("preimage of subgroup of O_p(G/N)", q.preimage(h))
                    rep.witness("preimage of Sylow subgroup", q.preimage(s))
                    return rep
    return rep


def admissible_pairs(primes) -> list[tuple[int, int]]:
    """Ordered (p, q) with q | p - 1: the types a P-group can have."""
    primes = sorted(set(primes))
    return [(p, q) for p in primes for q in primes if p != q and (p - 1) % q == 0]


def satisfies_Q_sigma_pq(g, sigma: SigmaPartition, p: int, q: int, check: str | None = None) -> PropertyReport:
    """Every normal sigma-primary P-subgroup of type (p, q) of G/N has only modular subgroups in G/N."""
    if p == q:
        raise DomainError("p and q must be distinct primes")
    if not (is_prime(p) and is_prime(q)):
        raise DomainError("p and q must be primes")
    g = _sub(g)
    rep = PropertyReport(check or f"Q_sigma({p},{q})", True, sigma=sigma.spec)
    if sigma.class_of(p) != sigma.class_of(q):
        rep.note = "p and q lie in different classes; no sigma-primary P-subgroup of this type"
        return rep
    for n in soluble_normal_subgroups(g):
        qt = quotient(g, n)
        qg = qt.group
        lat_q = None
        for pn in normal_subgroups(qg):
            if pn.order % q or pn.order % (q * q) == 0 or prime_factors(pn.order) != sorted({p, q}):
                continue
            shape = detect_p_group(pn)
            if shape is None or (shape.p, shape.q) != (p, q):
                continue
            if lat_q is None:
                lat_q = build_lattice(qg)
            top = lat_q.top_index
            for x in lat_q.below(lat_q.index_of(pn)).tolist():
                if not lat_q.is_modular_in(x, top):
                    rep.verdict = False
                    rep.witness("N", n)
                    rep.witness("preimage of P", qt.preimage(pn))
                    rep.witness("preimage of non-modular subgroup", qt.preimage(lat_q.nodes[x]))
                    return rep
    return rep


def satisfies_M_pq(g, p: int, q: int) -> PropertyReport:
    return satisfies_Q_sigma_pq(g, COARSEST, p, q, check=f"M_({p},{q})")


def satisfies_Q_sigmaP(g, sigma: SigmaPartition) -> PropertyReport:
    g = _sub(g)
    rep = PropertyReport("Q_sigmaP", True, sigma=sigma.spec)
    for p, q in admissible_pairs(prime_factors(g.order)):
        sub = rep.add(satisfies_Q_sigma_pq(g, sigma, p, q))
        rep.verdict = rep.verdict and sub.verdict
    return rep


# brute force

def is_QsigmaT_bruteforce(g, sigma: SigmaPartition, lat: SubgroupLattice | None = None) -> PropertyReport:
    """sigma-quasinormality is transitive iff every sigma-subquasinormal subgroup is sigma-quasinormal.

    The literal triple search over H <= K <= G is carried as a second route.
    """
    g = _sub(g)
    db = sigma_quasinormal_db(g, sigma, lat)
    bad = db.violations()
    rep = PropertyReport("qsigmat-bruteforce", not bad, sigma=sigma.spec)
    for h in bad:
        rep.witness("sigma-subquasinormal, not sigma-quasinormal", h)
    fails = db.transitivity_failures
    trans = rep.add(PropertyReport("transitivity-triples", not fails, sigma=sigma.spec))
    if fails:
        h, k, _ = fails[0]
        trans.witness("H", db.lattice.nodes[h])
        trans.witness("K", db.lattice.nodes[k])
    rep.consistent = trans.verdict == rep.verdict
    return rep


def _scale_guard(check: str, sigma, fn):
    try:
        return fn()
    except ScaleError as exc:
        return PropertyReport(check, None, sigma=getattr(sigma, "spec", sigma),
                              status="inconclusive-at-scale", note=str(exc))


# soluble criterion

def check_theorem_C(g, sigma: SigmaPartition, lat: SubgroupLattice | None = None) -> PropertyReport:
    return _scale_guard("theorem-c", sigma, lambda: _theorem_C(_sub(g), sigma, lat))


def _theorem_C(g: Subgroup, sigma: SigmaPartition, lat) -> PropertyReport:
    sigma.check_defined(g.order)
    rep = PropertyReport("theorem-c", None, sigma=sigma.spec)
    if not is_soluble(g):
        rep.status = "not-applicable"
        rep.note = "group is not soluble"
        return rep
    if lat is None or lat.top != g:
        lat = build_lattice(g)
    amb = g.ambient
    d = sigma_nilpotent_residual(g, sigma)
    rep.witness("D", d)

    c1 = rep.add(PropertyReport("C(i)", True))
    index = g.order // d.order
    if not is_abelian(d):
        c1.verdict = False
        c1.witness("D is not abelian", d)
    if d.order % 2 == 0:
        c1.verdict = False
        c1.witness("D has even order", d)
    if gcd(d.order, index) != 1:
        c1.verdict = False
        c1.witness("D is not a Hall subgroup", d)
    if c1.verdict:
        complement = None
        for i in range(len(lat)):
            m = lat.nodes[i]
            if lat.orders[i] != index or not (m.mask & d.mask) == 1:
                continue
            if is_sigma_nilpotent(m, sigma) and is_modular_lattice(lat.sublattice(m)):
                complement = m
                break
        if complement is None:
            c1.verdict = False
            c1.note = "no sigma-nilpotent M-group complement to D"
        else:
            c1.witness("M", complement)

    c2 = rep.add(PropertyReport("C(ii)", True))
    for x in g.indices.tolist():
        if not induces_power_automorphism(x, d):
            c2.verdict = False
            c2.witness("element not inducing a power automorphism on D", amb.element(x))
            break

    c3 = rep.add(PropertyReport("C(iii)", True))
    for label in sorted(sigma_of(g.order, sigma)):
        o = largest_normal_sigma_subgroup(d, sigma, label)
        ok = False
        for h in hall_subgroups(g, label, lat, sigma):
            if not o <= h:
                continue
            for n in normal_subgroups(h):
                if n.order * o.order == h.order and (n.mask & o.mask) == 1:
                    ok = True
                    break
            if ok:
                break
        if not ok:
            c3.verdict = False
            c3.witness(f"O_sigma(D) without normal complement, class {label}", o)
    rep.verdict = c1.verdict and c2.verdict and c3.verdict
    brute = rep.add(is_QsigmaT_bruteforce(g, sigma, lat))
    rep.consistent = rep.verdict == brute.verdict
    return rep


# general criteria

def check_theorem_E(g, sigma: SigmaPartition, lat: SubgroupLattice | None = None) -> PropertyReport:
    return _scale_guard("theorem-e", sigma, lambda: _general(_sub(g), sigma, lat, "theorem-e"))


def check_theorem_F(g, lat: SubgroupLattice | None = None) -> PropertyReport:
    return _scale_guard("theorem-f", COARSEST, lambda: _general(_sub(g), COARSEST, lat, "theorem-f"))


def _factor_targets(g: Subgroup, rc: RobinsonComplex):
    """G together with G/U'_{i1}...U'_{ir} for every index set of size 1 <= r < k."""
    derived = [derived_subgroup(u) for u in rc.factors]
    out = [("G", g)]
    for r in range(1, rc.k):
        for idx in combinations(range(rc.k), r):
            n = g.ambient.trivial
            for i in idx:
                n = n.join(derived[i])
            label = "G/" + "".join(f"U{i + 1}'" for i in idx)
            try:
                out.append((label, quotient(g, n).group.whole))
            except ScaleError as exc:
                raise ScaleError(f"quotient {label}: {exc}") from None
    return out


def _general(g: Subgroup, sigma: SigmaPartition, lat, check: str) -> PropertyReport:
    sigma.check_defined(g.order)
    rep = PropertyReport(check, None, sigma=sigma.spec)
    tag = "E" if check == "theorem-e" else "F"
    d = residual(g, "soluble")
    rep.witness("D", d)

    gd = quotient(g, d).group
    if tag == "E":
        c1 = check_theorem_C(gd, sigma)
        c1.check = "E(i)"
    else:
        c1 = PropertyReport("F(i)", is_modular_lattice(build_lattice(gd)), note="G/D has a modular lattice")
    rep.add(c1)

    rc = None
    if d.is_trivial:
        c2 = PropertyReport(f"{tag}(ii)", True, note="D = 1")
    else:
        found = find_robinson_complex(g)
        if isinstance(found, PropertyReport):
            c2 = found
            c2.check = f"{tag}(ii)"
        else:
            rc = found
            c2 = robinson_report(g)
            c2.check = f"{tag}(ii)"
    rep.add(c2)

    c3 = rep.add(PropertyReport(f"{tag}(iii)", True))
    if rc is not None:
        z_primes = [p for p in (2, 3) if rc.Z.order % p == 0]
        d_primes = prime_factors(d.order)
        pairs = [(p, q) for p, q in admissible_pairs(prime_factors(g.order)) if p in d_primes or q in d_primes]
        for label, target in _factor_targets(g, rc):
            sub = c3.add(PropertyReport(label, True))
            results = [satisfies_Np(target, p) for p in z_primes]
            results += [satisfies_Pp(target, p) for p in d_primes]
            if tag == "E":
                results += [satisfies_Q_sigma_pq(target, sigma, p, q) for p, q in pairs]
            else:
                results += [satisfies_M_pq(target, p, q) for p, q in pairs]
            for r in results:
                sub.add(r)
                sub.verdict = sub.verdict and r.verdict
            c3.verdict = c3.verdict and sub.verdict
    elif not d.is_trivial:
        c3.verdict = None
        c3.note = "not evaluated without a Robinson complex"

    rep.verdict = bool(c1.verdict) and bool(c2.verdict) and c3.verdict is not False
    brute = rep.add(is_QsigmaT_bruteforce(g, sigma, lat if lat is not None and lat.top == g else None))
    rep.consistent = rep.verdict == brute.verdict
    if tag == "F" and d.is_trivial:
        m = rep.add(PropertyReport("modular-lattice", is_modular_lattice(
            lat if lat is not None and lat.top == g else build_lattice(g))))
        rep.consistent = rep.consistent and m.verdict == brute.verdict
    return rep


# post-hoc verifier for sigma-quasinormal subgroups

def verify_theorem_B(g, sigma: SigmaPartition, lat: SubgroupLattice | None = None) -> PropertyReport:
    return _scale_guard("theorem-b", sigma, lambda: _theorem_B(_sub(g), sigma, lat))


def _union_primary(labels) -> bool:
    return len(labels) <= 1


def theorem_B_violations(a: Subgroup, g: Subgroup, sigma: SigmaPartition, lat: SubgroupLattice) -> list[str]:
    """Which of the five conclusions fail for the sigma-quasinormal subgroup a."""
    out = []
    for label in sorted(sigma_of(g.order, sigma)):
        if not all(permutes(a, h) for h in hall_subgroups(g, label, lat, sigma)):
            out.append("i")
            break
    ag = normal_closure(a, g)
    a_g = _core(a, g)
    c = section_centralizer(g, ag, a_g)
    if not (quotient_is_sigma_nilpotent(ag, a_g, sigma) and quotient_is_sigma_nilpotent(g, c, sigma)):
        out.append("ii")
    chain = chief_series(g, a_g, ag)
    for lower, upper in zip(chain, chain[1:]):
        cc = section_centralizer(g, upper, lower)
        if not _union_primary(sigma_of(upper.order // lower.order, sigma) | sigma_of(g.order // cc.order, sigma)):
            out.append("iii")
            break
    if not sigma_of(g.order // c.order, sigma) <= sigma_of(ag.order // a_g.order, sigma):
        out.append("iv")
    if not is_sigma_seminormal(a, g, sigma):
        out.append("v")
    return out


def _core(a: Subgroup, g: Subgroup) -> Subgroup:
    from .groups import core
    return core(a, g)


def _theorem_B(g: Subgroup, sigma: SigmaPartition, lat) -> PropertyReport:
    sigma.check_defined(g.order)
    if lat is None or lat.top != g:
        lat = build_lattice(g)
    db = sigma_quasinormal_db(g, sigma, lat)
    rep = PropertyReport("theorem-b", True, sigma=sigma.spec)
    checked = 0
    for a in db.qn_in_top():
        checked += 1
        bad = theorem_B_violations(a, g, sigma, lat)
        if bad:
            rep.verdict = False
            rep.witness("violates (" + ",".join(bad) + ")", a)
    rep.note = f"{checked} sigma-quasinormal subgroups checked"
    return rep


# maximal sigma-quasinormal subgroups

def maximal_qn_dichotomy(g, sigma: SigmaPartition, lat: SubgroupLattice | None = None) -> PropertyReport:
    """Maximal proper sigma-quasinormal subgroups versus the normal/order-pq dichotomy.

    Forward: each maximal one is normal with simple quotient, or has
    core < A with G/core a sigma-primary non-abelian group of order pq.
    Converse: each proper subgroup of either shape is maximal sigma-quasinormal.
    """
    g = _sub(g)
    sigma.check_defined(g.order)
    if lat is None or lat.top != g:
        lat = build_lattice(g)
    db = sigma_quasinormal_db(g, sigma, lat)
    top = lat.top_index
    qn = [i for i in range(len(lat)) if db.qn[i, top] and i != top]
    maximal = {i for i in qn if not any(j != i and lat.leq[i, j] for j in qn)}
    rep = PropertyReport("maximal-qn-dichotomy", True, sigma=sigma.spec)
    forward = rep.add(PropertyReport("forward", True))
    converse = rep.add(PropertyReport("converse", True))
    for i in range(len(lat)):
        if i == top:
            continue
        a = lat.nodes[i]
        shape = _dichotomy_shape(a, g, sigma)
        if i in maximal and shape is None:
            forward.verdict = False
            forward.witness("maximal sigma-quasinormal outside both shapes", a)
        if shape is not None and i not in maximal:
            converse.verdict = False
            converse.witness(f"{shape} shape but not maximal sigma-quasinormal", a)
    rep.verdict = forward.verdict and converse.verdict
    rep.note = f"{len(maximal)} maximal sigma-quasinormal subgroups"
    return rep


def _dichotomy_shape(a: Subgroup, g: Subgroup, sigma: SigmaPartition) -> str | None:
    if is_normal(a, g):
        above = [n for n in normal_subgroups(g) if a <= n]
        return "normal-simple-quotient" if len(above) == 2 else None
    c = _core(a, g)
    qo = g.order // c.order
    fs = prime_factors(qo)
    if len(fs) != 2 or fs[0] * fs[1] != qo or not is_sigma_primary(qo, sigma):
        return None
    return "order-pq" if not is_abelian(quotient(g, c).group) else None
