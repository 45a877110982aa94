"""Sigma-partitions of the primes and the sigma-relative subgroup properties.

A :class:`SigmaPartition` lists some disjoint prime classes and optionally a
default class ``rest`` holding every unlisted prime.  Two shapes are
infinite by nature and stored symbolically: ``finest`` (one class per prime)
and ``coarsest`` (a single class).  Class labels are strings so that
reports sort deterministically.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import DomainError, SigmaError
from .groups import (PermGroup, Subgroup, _sub, conjugates, is_normal, is_prime, normal_closure,
                     normal_subgroups, part, prime_factors, residual)
from .lattice import SubgroupLattice, build_lattice


@dataclass(frozen=True)
class SigmaPartition:
    kind: str  # "finest" | "coarsest" | "classes"
    classes: tuple[frozenset, ...] = ()
    rest: bool = False
    name: str | None = None

    def __post_init__(self):
        if self.kind not in ("finest", "coarsest", "classes"):
            raise SigmaError(f"unknown partition kind {self.kind!r}")
        seen = set()
        for cls in self.classes:
            if not cls:
                raise SigmaError("empty prime class")
            for p in cls:
                if not is_prime(p):
                    raise SigmaError(f"{p} is not a prime")
                if p in seen:
                    raise SigmaError(f"prime {p} listed in two classes")
                seen.add(p)

    # constructors for the four standard regimes
    @classmethod
    def finest(cls) -> SigmaPartition:
        return cls("finest", name="finest")

    @classmethod
    def coarsest(cls) -> SigmaPartition:
        return cls("coarsest", name="coarsest")

    @classmethod
    def pi_split(cls, primes: Iterable[int]) -> SigmaPartition:
        primes = sorted(set(primes))
        return cls("classes", (frozenset(primes),), rest=True, name="pi:" + ",".join(map(str, primes)))

    @classmethod
    def one_pi(cls, primes: Iterable[int]) -> SigmaPartition:
        primes = sorted(set(primes))
        return cls("classes", tuple(frozenset([p]) for p in primes), rest=True,
                   name="onepi:" + ",".join(map(str, primes)))

    @property
    def spec(self) -> str:
        if self.name:
            return self.name
        if self.kind != "classes":
            return self.kind
        body = "".join("[" + ",".join(map(str, sorted(c))) + "]" for c in self.classes)
        return "classes:" + body + ("rest" if self.rest else "")

    def __str__(self):
        return self.spec

    def class_of(self, p: int) -> str:
        """Label of the class holding the prime p."""
        if self.kind == "finest":
            return f"{{{p}}}"
        if self.kind == "coarsest":
            return "P"
        for cls in self.classes:
            if p in cls:
                return "{" + ",".join(map(str, sorted(cls))) + "}"
        if self.rest:
            return "rest"
        raise SigmaError(f"prime {p} is not assigned to any class of {self.spec}")

    def check_defined(self, n: int):
        for p in prime_factors(n):
            self.class_of(p)

    def primes_in(self, label: str, n: int) -> list[int]:
        """Primes of n that lie in the class ``label``."""
        return [p for p in prime_factors(n) if self.class_of(p) == label]

    def refines(self, other: SigmaPartition, primes: Iterable[int]) -> bool:
        """Every class of self (restricted to ``primes``) lies inside one class of other."""
        primes = list(primes)
        groups: dict[str, set] = {}
        for p in primes:
            groups.setdefault(self.class_of(p), set()).add(other.class_of(p))
        return all(len(v) == 1 for v in groups.values())


_CLASS_RE = re.compile(r"\[([^\[\]]*)\]")


def _prime_list(body: str, spec: str) -> list[int]:
    toks = [t.strip() for t in body.split(",")]
    if not body.strip() or any(not t for t in toks):
        raise SigmaError(f"empty prime list in {spec!r}")
    out = []
    for t in toks:
        if not t.isdigit() or not is_prime(int(t)):
            raise SigmaError(f"{t!r} is not a prime in {spec!r}")
        if int(t) in out:
            raise SigmaError(f"prime {t} repeated in {spec!r}")
        out.append(int(t))
    return out


def parse_sigma_spec(text: str) -> SigmaPartition:
    """Parse ``finest | coarsest | pi:P | onepi:P | classes:[..][..]...[rest]``."""
    spec = text.strip()
    if spec in ("finest", "coarsest"):
        return SigmaPartition(spec, name=spec)
    head, sep, body = spec.partition(":")
    if not sep:
        raise SigmaError(f"unrecognized sigma spec {text!r}")
    if head == "pi":
        return SigmaPartition.pi_split(_prime_list(body, spec))
    if head == "onepi":
        return SigmaPartition.one_pi(_prime_list(body, spec))
    if head == "classes":
        pos, classes = 0, []
        body = body.replace(" ", "")
        while pos < len(body) and body[pos] == "[":
            m = _CLASS_RE.match(body, pos)
            if m is None:
                raise SigmaError(f"unbalanced bracket in {spec!r}")
            classes.append(frozenset(_prime_list(m.group(1), spec)))
            pos = m.end()
        tail = body[pos:]
        if tail not in ("", "rest"):
            raise SigmaError(f"unexpected {tail!r} in {spec!r}")
        if not classes:
            raise SigmaError(f"no classes in {spec!r}")
        return SigmaPartition("classes", tuple(classes), rest=tail == "rest", name=None)
    raise SigmaError(f"unrecognized sigma spec {text!r}")


BUILTIN_SPECS = ("finest", "coarsest", "pi:2,3", "onepi:2,3")


def _order(x) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x)
    return _sub(x).order


def sigma_of(n, sigma: SigmaPartition) -> frozenset:
    """Labels of the classes meeting pi(n); n may be an integer or a group."""
    return frozenset(sigma.class_of(p) for p in prime_factors(_order(n)))


def sigma_part(n: int, sigma: SigmaPartition, label: str) -> int:
    return part(n, sigma.primes_in(label, n))


def is_sigma_primary(g, sigma: SigmaPartition) -> bool:
    return len(sigma_of(g, sigma)) <= 1


def is_sigma_nilpotent(g, sigma: SigmaPartition) -> bool:
    """Every class meeting |g| has a normal Hall subgroup."""
    g = _sub(g)
    return quotient_is_sigma_nilpotent(g, g.ambient.trivial, sigma)


def quotient_is_sigma_nilpotent(g, n: Subgroup, sigma: SigmaPartition) -> bool:
    """Is g/n sigma-nilpotent?  Normal subgroups of g/n are the normal M >= n of g."""
    g = _sub(g)
    q = g.order // n.order
    labels = sigma_of(q, sigma)
    if len(labels) <= 1:
        return True
    above = [m for m in normal_subgroups(g) if n <= m]
    for label in labels:
        want = sigma_part(q, sigma, label) * n.order
        if not any(m.order == want for m in above):
            return False
    return True


def sigma_nilpotent_residual(g, sigma: SigmaPartition) -> Subgroup:
    return residual(g, "sigma-nilpotent", sigma)


def hall_subgroups(g, label: str, lat: SubgroupLattice, sigma: SigmaPartition) -> list[Subgroup]:
    """Subgroups of g with order the sigma_i-part of |g| (possibly none)."""
    g = _sub(g)
    want = sigma_part(g.order, sigma, label)
    return [lat.nodes[i] for i in lat.below(lat.index_of(g)) if lat.orders[i] == want]


def largest_normal_sigma_subgroup(g, sigma: SigmaPartition, label: str) -> Subgroup:
    """O_{sigma_i}(g), the join of all normal sigma_i-subgroups."""
    from .groups import largest_normal_pi_subgroup
    g = _sub(g)
    return largest_normal_pi_subgroup(g, sigma.primes_in(label, g.order))


def is_subnormal(a: Subgroup, b) -> bool:
    """Subnormality via the descending series b, a^b, a^(a^b), ... ."""
    b = _sub(b)
    if not a <= b:
        raise DomainError("is_subnormal requires a <= b")
    cur = b
    while cur != a:
        nxt = normal_closure(a, cur)
        if nxt == cur:
            return False
        cur = nxt
    return True


def is_sigma_seminormal(a: Subgroup, g, sigma: SigmaPartition) -> bool:
    """Every x with sigma(|x|) disjoint from sigma(a) normalizes a."""
    from .groups import normalizes
    g = _sub(g)
    if not a <= g:
        raise DomainError("is_sigma_seminormal requires a <= g")
    amb = g.ambient
    sa = sigma_of(a.order, sigma)
    orders = amb.element_orders
    for x in g.indices.tolist():
        if sigma_of(int(orders[x]), sigma) & sa:
            continue
        if not normalizes(x, a):
            return False
    return True


@dataclass
class SigmaQuasinormalDB:
    """sigma-subnormality, modularity and sigma-quasinormality over all comparable node pairs.

    ``step[h, k]``: h normal in k, or k/core_k(h) sigma-primary.
    ``sn[h, k]``: h sigma-subnormal in k.  ``qn = sn & modular``.
    ``subqn``: nodes joined to the top by a chain of qn steps.
    """

    lattice: SubgroupLattice
    sigma: SigmaPartition
    step: np.ndarray
    sn: np.ndarray
    modular: np.ndarray
    qn: np.ndarray
    subqn: np.ndarray = field(repr=False)

    @property
    def top(self) -> int:
        return self.lattice.top_index

    def qn_in_top(self) -> list[Subgroup]:
        return [self.lattice.nodes[i] for i in np.flatnonzero(self.qn[:, self.top])]

    def subqn_nodes(self) -> list[Subgroup]:
        return [self.lattice.nodes[i] for i in np.flatnonzero(self.subqn)]

    def violations(self) -> list[Subgroup]:
        """sigma-subquasinormal nodes that are not sigma-quasinormal in the top."""
        bad = self.subqn & ~self.qn[:, self.top]
        return [self.lattice.nodes[i] for i in np.flatnonzero(bad)]

    @cached_property
    def transitivity_failures(self) -> list[tuple[int, int, int]]:
        """Triples h <= k <= top with qn(h,k), qn(k,top) but not qn(h,top)."""
        t = self.top
        out = []
        for k in np.flatnonzero(self.qn[:, t]).tolist():
            for h in np.flatnonzero(self.qn[:, k]).tolist():
                if not self.qn[h, t]:
                    out.append((h, k, t))
        return out


def step_table(lat: SubgroupLattice, sigma: SigmaPartition) -> np.ndarray:
    """step[h, k] for h <= k: h normal in k or k/core_k(h) sigma-primary."""
    n = len(lat)
    out = np.zeros((n, n), dtype=bool)
    for k in range(n):
        K = lat.nodes[k]
        primary_k = is_sigma_primary(K.order, sigma)
        for h in lat.below(k).tolist():
            if primary_k or h == k:
                out[h, k] = True
                continue
            H = lat.nodes[h]
            if is_normal(H, K):
                out[h, k] = True
                continue
            mask = H.mask
            for c in conjugates(H, K):
                mask &= c.mask
            out[h, k] = is_sigma_primary(K.order // mask.bit_count(), sigma)
    return out


def reachable_below(step: np.ndarray, lat: SubgroupLattice, k: int) -> np.ndarray:
    """Nodes h <= k joined to k by a chain of ``step`` relations.

    Nodes are sorted by order, so every strict upper bound of h has a larger
    index; one descending sweep settles each node after all of its supergroups.
    """
    marked = np.zeros(len(lat), dtype=bool)
    marked[k] = True
    for h in lat.below(k)[::-1].tolist():
        if h != k:
            marked[h] = bool((step[h] & marked).any())
    return marked


def sigma_quasinormal_db(g, sigma: SigmaPartition, lat: SubgroupLattice | None = None) -> SigmaQuasinormalDB:
    g = _sub(g)
    sigma.check_defined(g.order)
    if lat is None:
        lat = build_lattice(g)
    if lat.top != g:
        lat = lat.sublattice(g)
    key = ("qndb", sigma)
    cache = lat.__dict__.setdefault("_db_cache", {})
    if key in cache:
        return cache[key]
    n = len(lat)
    step = step_table(lat, sigma)
    sn = np.zeros((n, n), dtype=bool)
    for k in range(n):
        sn[:, k] = reachable_below(step, lat, k)
    modular = lat.modular_table
    qn = sn & modular
    subqn = reachable_below(qn, lat, lat.top_index)
    db = SigmaQuasinormalDB(lat, sigma, step, sn, modular, qn, subqn)
    cache[key] = db
    return db


def _pair(a: Subgroup, b, lat: SubgroupLattice | None):
    b = _sub(b)
    if not a <= b:
        raise DomainError("expected a <= b")
    if lat is None:
        lat = build_lattice(b)
    return b, lat, lat.index_of(a), lat.index_of(b)


def is_sigma_subnormal(a: Subgroup, b, sigma: SigmaPartition, lat: SubgroupLattice | None = None) -> bool:
    b, lat, i, j = _pair(a, b, lat)
    sigma.check_defined(b.order)
    return bool(sigma_quasinormal_db(lat.top, sigma, lat).sn[i, j])


def is_sigma_quasinormal(a: Subgroup, b, sigma: SigmaPartition, lat: SubgroupLattice | None = None) -> bool:
    b, lat, i, j = _pair(a, b, lat)
    sigma.check_defined(b.order)
    return bool(sigma_quasinormal_db(lat.top, sigma, lat).qn[i, j])


def is_quasinormal(a: Subgroup, b, lat: SubgroupLattice | None = None) -> bool:
    """a permutes with every subgroup H of b.

    aH = Ha exactly when aH is a subgroup, i.e. when |<a, H>| = |a||H|/|a ∩ H|.
    """
    b, lat, i, j = _pair(a, b, lat)
    A = lat.nodes[i]
    for h in lat.below(j).tolist():
        H = lat.nodes[h]
        inter = lat.orders[lat.meet[i, h]]
        if lat.orders[lat.join[i, h]] * inter != A.order * H.order:
            return False
    return True


def permutes(a: Subgroup, h: Subgroup) -> bool:
    """AH = HA, decided by orders within the ambient group."""
    j = a.join(h)
    return j.order * a.meet(h).order == a.order * h.order
