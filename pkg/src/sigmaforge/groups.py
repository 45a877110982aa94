"""Permutation-group engine.

A :class:`PermGroup` materializes its elements (breadth-first closure over the
generators) and indexes them in lexicographic order, so the identity is
always index 0.  Subgroups live inside a fixed ambient group and are stored as
Python-int bitmasks over element indices; equality is element-set equality
within one ambient.  Small groups also get a numpy multiplication table.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ScaleError, SigmaError
from .perm import Permutation, format_group_text

DEFAULT_ORDER_CAP = 10_000
TABLE_LIMIT = 1500


def order_cap() -> int:
    """Element-count cap; overridable with ``SIGMAFORGE_CAP``."""
    raw = os.environ.get("SIGMAFORGE_CAP")
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise SigmaError(f"SIGMAFORGE_CAP must be an integer, got {raw!r}") from None
        if cap < 1:
            raise SigmaError("SIGMAFORGE_CAP must be >= 1")
        return cap
    return DEFAULT_ORDER_CAP


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def part(n: int, primes: Iterable[int]) -> int:
    """Largest divisor of ``n`` whose prime factors all lie in ``primes``."""
    out = 1
    for p in primes:
        while n % p == 0:
            n //= p
            out *= p
    return out


def is_p_power(n: int, p: int) -> bool:
    return part(n, [p]) == n


def _mask_from_indices(idx, n: int) -> int:
    arr = np.zeros(n, dtype=bool)
    arr[np.asarray(idx, dtype=np.int64)] = True
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def _indices_from_mask(mask: int, n: int) -> np.ndarray:
    raw = mask.to_bytes((n + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n]
    return np.flatnonzero(bits)


class PermGroup:
    """A finite permutation group with a materialized element list."""

    def __init__(self, generators: Iterable[Permutation | Sequence[int]], degree: int | None = None,
                 *, cap: int | None = None, name: str | None = None):
        gens = [g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in generators]
        if degree is None:
            if not gens:
                raise DomainError("degree is required for a group without generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DomainError(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = tuple(gens)
        self.name = name
        self.cap = order_cap() if cap is None else cap
        self._enumerate()
        self._cache: dict = {}

    def _enumerate(self):
        ident = tuple(range(self.degree))
        gens = [g.images for g in self.generators if not g.is_identity()]
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = tuple(x[j] for j in s)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > self.cap:
                            raise ScaleError(f"group order exceeds cap {self.cap}")
            frontier = nxt
        perms = sorted(seen)
        self._perms = perms
        self._index = {p: i for i, p in enumerate(perms)}
        self.order = len(perms)
        self._arr = np.array(perms, dtype=np.int32).reshape(self.order, self.degree)
        inv = np.empty_like(self._arr)
        rows = np.arange(self.order)[:, None]
        inv[rows, self._arr] = np.arange(self.degree)[None, :]
        self._inv = np.array([self._index[tuple(r)] for r in inv.tolist()], dtype=np.int64)
        self.gen_indices = tuple(self._index[g.images] for g in self.generators)
        self._table = self._build_table() if self.order <= TABLE_LIMIT else None

    def _build_table(self) -> np.ndarray:
        n = self.order
        keys = {p.tobytes(): i for i, p in enumerate(self._arr)}
        table = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            prods = self._arr[i][self._arr]
            table[i] = [keys[r.tobytes()] for r in prods]
        return table

    def __repr__(self):
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} order={self.order}>"

    def __len__(self):
        return self.order

    # element arithmetic on indices
    def index(self, p: Permutation | Sequence[int]) -> int:
        key = p.images if isinstance(p, Permutation) else tuple(p)
        try:
            return self._index[key]
        except KeyError:
            raise DomainError(f"{p} is not an element of {self!r}") from None

    def element(self, i: int) -> Permutation:
        return Permutation(self._perms[i])

    @property
    def elements(self) -> tuple[Permutation, ...]:
        return tuple(Permutation(p) for p in self._perms)

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        a, b = self._perms[i], self._perms[j]
        return self._index[tuple(a[k] for k in b)]

    def inv(self, i: int) -> int:
        return int(self._inv[i])

    def conj(self, x: int, h: int) -> int:
        """Index of x h x^-1."""
        return self.mul(self.mul(x, h), self.inv(x))

    def conj_many(self, x: int, hs) -> np.ndarray:
        hs = np.asarray(hs, dtype=np.int64)
        if self._table is not None:
            return self._table[self._table[x, hs], self._inv[x]]
        return np.array([self.conj(x, int(h)) for h in hs.tolist()], dtype=np.int64)

    def mul_many(self, xs, g: int) -> np.ndarray:
        """Indices of x*g for each x in ``xs``."""
        xs = np.asarray(xs, dtype=np.int64)
        if self._table is not None:
            return self._table[xs, g]
        s = self._perms[g]
        return np.array([self._index[tuple(self._perms[int(x)][k] for k in s)] for x in xs], dtype=np.int64)

    def lmul_many(self, g: int, xs) -> np.ndarray:
        """Indices of g*x for each x in ``xs``."""
        xs = np.asarray(xs, dtype=np.int64)
        if self._table is not None:
            return self._table[g, xs]
        a = self._perms[g]
        return np.array([self._index[tuple(a[k] for k in self._perms[int(x)])] for x in xs], dtype=np.int64)

    @cached_property
    def element_orders(self) -> np.ndarray:
        return np.array([Permutation(p).order for p in self._perms], dtype=np.int64)

    # subgroups
    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, (1 << self.order) - 1, gens=self.gen_indices)

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup(self, 1, gens=())

    def subgroup(self, seed: Iterable[Permutation]) -> Subgroup:
        return generate(self, seed)

    def subgroup_from_indices(self, idx: Iterable[int]) -> Subgroup:
        idx = list(idx)
        return Subgroup(self, closure_mask(self, idx), gens=tuple(i for i in idx if i != 0))

    def to_text(self) -> str:
        return format_group_text(self.degree, self.generators or [Permutation.identity(self.degree)])


def closure_mask(ambient: PermGroup, seed: Iterable[int]) -> int:
    """Bitmask of the subgroup generated by the element indices in ``seed``."""
    gens = sorted({int(s) for s in seed if int(s) != 0})
    n = ambient.order
    if not gens:
        return 1
    if ambient._table is not None:
        table = ambient._table
        known = np.zeros(n, dtype=bool)
        known[0] = True
        frontier = np.array([0], dtype=np.int64)
        g = np.array(gens, dtype=np.int64)
        while frontier.size:
            cand = np.unique(table[np.ix_(frontier, g)].ravel())
            cand = cand[~known[cand]]
            known[cand] = True
            frontier = cand
        return int.from_bytes(np.packbits(known, bitorder="little").tobytes(), "little")
    # add generators one at a time; seeds already inside the closure cost nothing
    known = {0}
    used: list[int] = []
    for s in gens:
        if s in known:
            continue
        used.append(s)
        frontier = [y for y in ambient.mul_many(sorted(known), s).tolist() if y not in known]
        known.update(frontier)
        while frontier:
            nxt = []
            for t in used:
                for y in ambient.mul_many(frontier, t).tolist():
                    if y not in known:
                        known.add(y)
                        nxt.append(y)
            frontier = nxt
    return _mask_from_indices(sorted(known), n)


def reduce_gens(ambient: PermGroup, seeds: Iterable[int], mask: int) -> tuple[int, ...]:
    """Keep only the seeds that enlarge the running closure, stopping at ``mask``."""
    chosen, cur = [], 1
    for s in seeds:
        if cur == mask:
            break
        s = int(s)
        if not cur >> s & 1:
            chosen.append(s)
            cur = closure_mask(ambient, chosen)
    return tuple(chosen)


class Subgroup:
    """A subgroup of a fixed ambient :class:`PermGroup`, stored as a bitmask."""

    def __init__(self, ambient: PermGroup, mask: int, gens: Sequence[int] | None = None):
        self.ambient = ambient
        self.mask = mask
        self._gens = None if gens is None else tuple(int(g) for g in gens if int(g) != 0)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ambient is other.ambient and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.ambient), self.mask))

    def _same(self, other: Subgroup):
        if self.ambient is not other.ambient:
            raise DomainError("subgroups of different ambient groups are never compared")

    def __le__(self, other: Subgroup) -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: Subgroup) -> bool:
        return other <= self

    def __gt__(self, other: Subgroup) -> bool:
        return other < self

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        i = x if isinstance(x, (int, np.integer)) else self.ambient.index(x)
        return bool(self.mask >> int(i) & 1)

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.ambient!r}>"

    @cached_property
    def order(self) -> int:
        return self.mask.bit_count()

    @cached_property
    def indices(self) -> np.ndarray:
        return _indices_from_mask(self.mask, self.ambient.order)

    @property
    def elements(self) -> list[Permutation]:
        return [self.ambient.element(int(i)) for i in self.indices]

    @property
    def is_trivial(self) -> bool:
        return self.mask == 1

    @property
    def is_whole(self) -> bool:
        return self.order == self.ambient.order

    @property
    def gens(self) -> tuple[int, ...]:
        """A small generating set (element indices)."""
        if self._gens is None:
            amb = self.ambient
            orders = amb.element_orders[self.indices]
            ranked = [int(i) for _, i in sorted(zip((-orders).tolist(), self.indices.tolist()))]
            chosen, cur = [], 1
            for i in ranked:
                if cur == self.mask:
                    break
                if not cur >> i & 1:
                    chosen.append(i)
                    cur = closure_mask(amb, chosen)
            self._gens = tuple(chosen)
        return self._gens

    def descriptor(self) -> list[str]:
        """Sorted cycle-notation element list; stable across lattice builds."""
        return sorted(str(e) for e in self.elements)

    def as_group(self, name: str | None = None) -> PermGroup:
        gens = [self.ambient.element(i) for i in self.gens]
        return PermGroup(gens, self.ambient.degree, cap=self.ambient.cap, name=name)

    def meet(self, other: Subgroup) -> Subgroup:
        self._same(other)
        return Subgroup(self.ambient, self.mask & other.mask)

    def join(self, other: Subgroup) -> Subgroup:
        self._same(other)
        if self <= other:
            return other
        if other <= self:
            return self
        g = self.gens + other.gens
        mask = closure_mask(self.ambient, g)
        return Subgroup(self.ambient, mask, gens=g if len(g) <= 8 else reduce_gens(self.ambient, g, mask))


def _sub(g) -> Subgroup:
    if isinstance(g, PermGroup):
        return g.whole
    if isinstance(g, Subgroup):
        return g
    raise TypeError(f"expected PermGroup or Subgroup, got {type(g).__name__}")


def _cached(g: Subgroup, key, fn):
    cache = g.ambient._cache
    k = (key, g.mask)
    if k not in cache:
        cache[k] = fn()
    return cache[k]


def generate(ambient: PermGroup | Subgroup, seed: Iterable[Permutation | int]) -> Subgroup:
    """Smallest subgroup of ``ambient`` containing ``seed``."""
    h = _sub(ambient)
    amb = h.ambient
    idx = []
    for s in seed:
        i = int(s) if isinstance(s, (int, np.integer)) else amb.index(s)
        if not h.mask >> i & 1:
            raise DomainError(f"{amb.element(i)} is not in the ambient group")
        idx.append(i)
    return Subgroup(amb, closure_mask(amb, idx), gens=idx)


def cyclic_subgroup(ambient: PermGroup, x: int) -> Subgroup:
    cache = ambient._cache.setdefault("cyclic", {})
    if x not in cache:
        pts, y = [0], x
        while y != 0:
            pts.append(y)
            y = ambient.mul(y, x)
        cache[x] = Subgroup(ambient, _mask_from_indices(pts, ambient.order), gens=(x,))
    return cache[x]


def conjugate(a: Subgroup, x: int) -> Subgroup:
    """x a x^-1."""
    amb = a.ambient
    img = amb.conj_many(x, a.indices)
    gens = None if a._gens is None else tuple(amb.conj(x, g) for g in a._gens)
    return Subgroup(amb, _mask_from_indices(img, amb.order), gens=gens)


def normalizes(x: int, a: Subgroup) -> bool:
    amb = a.ambient
    return all(a.mask >> amb.conj(x, t) & 1 for t in a.gens)


def is_normal(a: Subgroup, b: PermGroup | Subgroup) -> bool:
    """True iff ``a`` is normal in ``b``; requires a <= b."""
    b = _sub(b)
    if not a <= b:
        raise DomainError("is_normal requires a <= b")
    return all(normalizes(x, a) for x in b.gens)


def normalizer(a: Subgroup, g: PermGroup | Subgroup) -> Subgroup:
    g = _sub(g)
    idx = [int(x) for x in g.indices if normalizes(int(x), a)]
    return Subgroup(g.ambient, _mask_from_indices(idx, g.ambient.order))


def centralizer(xs: Iterable[int] | Subgroup, g: PermGroup | Subgroup) -> Subgroup:
    """Elements of ``g`` commuting with every x in ``xs`` (or with a subgroup's generators)."""
    g = _sub(g)
    amb = g.ambient
    xs = list(xs.gens) if isinstance(xs, Subgroup) else [int(x) for x in xs]
    idx = [int(y) for y in g.indices if all(amb.mul(int(y), x) == amb.mul(x, int(y)) for x in xs)]
    return Subgroup(amb, _mask_from_indices(idx, amb.order))


def conjugacy_class(x: int, g: PermGroup | Subgroup) -> list[int]:
    g = _sub(g)
    amb = g.ambient
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for s in g.gens:
            for y in amb.conj_many(s, frontier).tolist():
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def conjugacy_classes(g: PermGroup | Subgroup) -> list[list[int]]:
    g = _sub(g)

    def compute():
        remaining = g.mask
        out = []
        for i in g.indices.tolist():
            if remaining >> i & 1:
                cls = conjugacy_class(i, g)
                for c in cls:
                    remaining &= ~(1 << c)
                out.append(cls)
        return out

    return _cached(g, "classes", compute)


def conjugates(a: Subgroup, g: PermGroup | Subgroup) -> list[Subgroup]:
    """The orbit of ``a`` under conjugation by ``g``."""
    g = _sub(g)
    seen = {a.mask: a}
    frontier = [a]
    while frontier:
        nxt = []
        for h in frontier:
            for s in g.gens:
                c = conjugate(h, s)
                if c.mask not in seen:
                    seen[c.mask] = c
                    nxt.append(c)
        frontier = nxt
    return [seen[m] for m in sorted(seen)]


def core(a: Subgroup, g: PermGroup | Subgroup) -> Subgroup:
    """Largest normal subgroup of ``g`` contained in ``a``."""
    g = _sub(g)
    if not a <= g:
        raise DomainError("core requires a <= g")
    mask = a.mask
    for c in conjugates(a, g):
        mask &= c.mask
    return Subgroup(a.ambient, mask)


def normal_closure(a: Subgroup | Iterable[int], g: PermGroup | Subgroup) -> Subgroup:
    """Smallest normal subgroup of ``g`` containing ``a``."""
    g = _sub(g)
    if isinstance(a, Subgroup):
        if not a <= g:
            raise DomainError("normal_closure requires a <= g")
        seeds = a.gens
    else:
        seeds = [int(x) for x in a]
    amb = g.ambient
    pts = set()
    for t in seeds:
        pts.update(conjugacy_class(t, g))
    mask = closure_mask(amb, pts)
    order = [int(t) for t in seeds] + sorted(pts)
    return Subgroup(amb, mask, gens=reduce_gens(amb, order, mask))


def commutator_subgroup(a: Subgroup, b: Subgroup) -> Subgroup:
    """[A, B] = <[x, y] : x in A, y in B>, for A, B normalizing each other."""
    amb = a.ambient
    comms = set()
    for x in a.gens:
        for y in b.gens:
            comms.add(amb.mul(amb.mul(x, y), amb.mul(amb.inv(x), amb.inv(y))))
    return normal_closure(list(comms), a.join(b))


def derived_subgroup(g: PermGroup | Subgroup) -> Subgroup:
    g = _sub(g)
    return _cached(g, "derived", lambda: commutator_subgroup(g, g))


def derived_series(g: PermGroup | Subgroup) -> list[Subgroup]:
    cur = _sub(g)
    out = [cur]
    while True:
        nxt = derived_subgroup(cur)
        if nxt == cur:
            return out
        out.append(nxt)
        cur = nxt


def lower_central_series(g: PermGroup | Subgroup) -> list[Subgroup]:
    g = _sub(g)
    out = [g]
    while True:
        nxt = commutator_subgroup(out[-1], g)
        if nxt == out[-1]:
            return out
        out.append(nxt)


def center(g: PermGroup | Subgroup) -> Subgroup:
    g = _sub(g)
    return _cached(g, "center", lambda: centralizer(g, g))


def is_abelian(g: PermGroup | Subgroup) -> bool:
    g = _sub(g)
    amb = g.ambient
    return all(amb.mul(x, y) == amb.mul(y, x) for x in g.gens for y in g.gens)


def is_soluble(g: PermGroup | Subgroup) -> bool:
    return derived_series(g)[-1].is_trivial


def is_perfect(g: PermGroup | Subgroup) -> bool:
    g = _sub(g)
    return derived_subgroup(g) == g


def is_nilpotent(g: PermGroup | Subgroup) -> bool:
    return lower_central_series(g)[-1].is_trivial


def normal_subgroups(g: PermGroup | Subgroup) -> list[Subgroup]:
    """All normal subgroups of ``g``: joins of normal closures of conjugacy classes.

    Sorted by (order, mask) for determinism.
    """
    g = _sub(g)

    def compute():
        amb = g.ambient
        atoms = {}
        for cls in conjugacy_classes(g):
            if cls == [0]:
                continue
            mask = closure_mask(amb, cls)
            n = Subgroup(amb, mask, gens=reduce_gens(amb, cls, mask))
            atoms.setdefault(n.mask, n)
        found = {1: amb.trivial}
        found.update(atoms)
        frontier = list(found.values())
        atom_list = list(atoms.values())
        while frontier:
            nxt = []
            for n in frontier:
                for a in atom_list:
                    if a.mask & ~n.mask == 0:
                        continue
                    j = n.join(a)
                    if j.mask not in found:
                        found[j.mask] = j
                        nxt.append(j)
            frontier = nxt
        return sorted(found.values(), key=lambda s: (s.order, s.mask))

    return _cached(g, "normals", compute)


def is_simple(g: PermGroup | Subgroup) -> bool:
    g = _sub(g)
    return g.order > 1 and len(normal_subgroups(g)) == 2


def minimal_normal_subgroups(g: PermGroup | Subgroup) -> list[Subgroup]:
    g = _sub(g)
    nontriv = [n for n in normal_subgroups(g) if not n.is_trivial]
    return [n for n in nontriv if not any(m < n for m in nontriv)]


def chief_series(g: PermGroup | Subgroup, lower: Subgroup, upper: Subgroup) -> list[Subgroup]:
    """A chain lower = N_0 < ... < N_r = upper of normal subgroups of ``g`` with G-chief factors."""
    g = _sub(g)
    normals = normal_subgroups(g)
    if lower not in normals or upper not in normals:
        raise DomainError("chief_series endpoints must be normal in g")
    if not lower <= upper:
        raise DomainError("chief_series requires lower <= upper")
    chain = [lower]
    while chain[-1] != upper:
        cur = chain[-1]
        above = [n for n in normals if cur < n <= upper]
        nxt = min(above, key=lambda s: (s.order, s.mask))
        chain.append(nxt)
    return chain


def chief_factors_below(g: PermGroup | Subgroup, z: Subgroup) -> list[tuple[Subgroup, Subgroup]]:
    """Consecutive (K, H) pairs of a chief series of ``g`` running from 1 up to ``z``."""
    g = _sub(g)
    if not z <= g or not is_normal(z, g):
        raise DomainError("chief_factors_below requires z normal in g")
    chain = chief_series(g, g.ambient.trivial, z)
    return list(zip(chain, chain[1:]))


def is_cyclic_factor(lower: Subgroup, upper: Subgroup) -> bool:
    """A chief factor is cyclic iff its order is prime."""
    return is_prime(upper.order // lower.order)


def largest_normal_pi_subgroup(g: PermGroup | Subgroup, primes: Iterable[int]) -> Subgroup:
    """O_pi(g): join of all normal pi-subgroups."""
    g = _sub(g)
    primes = sorted(set(primes))
    out = g.ambient.trivial
    for n in normal_subgroups(g):
        if part(n.order, primes) == n.order:
            out = out.join(n)
    return out


def largest_normal_p_subgroup(g: PermGroup | Subgroup, p: int) -> Subgroup:
    return largest_normal_pi_subgroup(g, [p])


def fitting_subgroup(g: PermGroup | Subgroup) -> Subgroup:
    g = _sub(g)
    out = g.ambient.trivial
    for p in prime_factors(g.order):
        out = out.join(largest_normal_p_subgroup(g, p))
    return out


def sylow_subgroup(g: PermGroup | Subgroup, p: int) -> Subgroup:
    """One Sylow p-subgroup, grown one Cauchy step at a time inside normalizers."""
    g = _sub(g)
    amb = g.ambient
    target = part(g.order, [p])
    cur = amb.trivial
    while cur.order < target:
        nrm = normalizer(cur, g)
        for x in nrm.indices.tolist():
            if cur.mask >> x & 1:
                continue
            xp = x
            for _ in range(p - 1):
                xp = amb.mul(xp, x)
            if cur.mask >> xp & 1:
                cur = cur.join(cyclic_subgroup(amb, x))
                break
        else:  # pragma: no cover - Sylow theory guarantees a step
            raise AssertionError("no Cauchy step found")
    return cur


def sylow_subgroups(g: PermGroup | Subgroup, p: int) -> list[Subgroup]:
    return conjugates(sylow_subgroup(g, p), g)


def induces_power_automorphism(x: int | Permutation, a: Subgroup) -> bool:
    """True iff conjugation by x maps every y in a into <y>."""
    amb = a.ambient
    xi = amb.index(x) if isinstance(x, Permutation) else int(x)
    if not normalizes(xi, a):
        raise DomainError(f"{amb.element(xi)} does not normalize the subgroup")
    for y in a.indices.tolist():
        if not cyclic_subgroup(amb, y).mask >> amb.conj(xi, y) & 1:
            return False
    return True


def section_centralizer(g: PermGroup | Subgroup, upper: Subgroup, lower: Subgroup) -> Subgroup:
    """C_g(upper/lower) for normal subgroups lower <= upper of g."""
    g = _sub(g)
    amb = g.ambient
    idx = []
    for x in g.indices.tolist():
        ok = True
        for h in upper.gens:
            c = amb.mul(amb.conj(x, h), amb.inv(h))
            if not lower.mask >> c & 1:
                ok = False
                break
        if ok:
            idx.append(x)
    return Subgroup(amb, _mask_from_indices(idx, amb.order))


RESIDUAL_KINDS = ("abelian", "derived-series-limit", "soluble", "nilpotent", "sigma-nilpotent")


def residual(g: PermGroup | Subgroup, kind: str, sigma=None) -> Subgroup:
    """Smallest normal subgroup N of g with g/N in the named class.

    ``abelian`` is the derived subgroup; ``soluble`` (alias ``derived-series-limit``)
    is the last term of the derived series; ``nilpotent`` is the last term of the
    lower central series; ``sigma-nilpotent`` intersects all normal N whose
    quotient has a normal Hall sigma_i-subgroup for every class.
    """
    g = _sub(g)
    if kind == "abelian":
        return derived_subgroup(g)
    if kind in ("soluble", "derived-series-limit"):
        return derived_series(g)[-1]
    if kind == "nilpotent":
        return lower_central_series(g)[-1]
    if kind == "sigma-nilpotent":
        if sigma is None:
            raise SigmaError("sigma-nilpotent residual needs a sigma-partition")
        from .sigma import quotient_is_sigma_nilpotent
        sigma.check_defined(g.order)
        mask = g.mask
        for n in normal_subgroups(g):
            if quotient_is_sigma_nilpotent(g, n, sigma):
                mask &= n.mask
        return Subgroup(g.ambient, mask)
    raise DomainError(f"unknown residual class {kind!r}; expected one of {RESIDUAL_KINDS}")


def frattini(g: PermGroup | Subgroup, lat=None) -> Subgroup:
    """Intersection of the maximal subgroups of g.

    Phi(g) lies in the Fitting subgroup F, so F = 1 forces Phi = 1; for perfect g
    every central subgroup is a non-generator, so F = Z(g) forces Phi = Z(g).
    Otherwise the subgroup lattice of g is built.
    """
    g = _sub(g)

    def compute():
        if g.is_trivial:
            return g
        fit = fitting_subgroup(g)
        if fit.is_trivial:
            return fit
        if is_perfect(g) and fit == center(g):
            return fit
        from .lattice import build_lattice
        sub_lat = build_lattice(g) if lat is None or lat.top != g else lat
        mask = g.mask
        for m in sub_lat.maximal_subgroups():
            mask &= m.mask
        return Subgroup(g.ambient, mask)

    return _cached(g, "frattini", compute)


@dataclass(eq=False)
class QuotientGroup:
    """source/kernel realized as the action of source on the cosets of kernel."""

    source: Subgroup
    kernel: Subgroup
    group: PermGroup
    coset_of: np.ndarray  # ambient element index -> coset index (-1 outside source)
    _coset_to_element: np.ndarray  # coset index -> element index in ``group``

    def image_index(self, x: int) -> int:
        c = int(self.coset_of[x])
        if c < 0:
            raise DomainError("element is outside the quotient's source")
        return int(self._coset_to_element[c])

    def coset_map(self, x: Permutation | int) -> Permutation:
        i = x if isinstance(x, (int, np.integer)) else self.source.ambient.index(x)
        return self.group.element(self.image_index(int(i)))

    def image(self, sub: Subgroup) -> Subgroup:
        if not sub <= self.source:
            raise DomainError("image requires a subgroup of the source")
        cos = np.unique(self.coset_of[sub.indices])
        return Subgroup(self.group, _mask_from_indices(self._coset_to_element[cos], self.group.order))

    def preimage(self, sub: Subgroup) -> Subgroup:
        if sub.ambient is not self.group:
            raise DomainError("preimage requires a subgroup of the quotient group")
        inv = np.full(self.group.order, -1, dtype=np.int64)
        inv[self._coset_to_element] = np.arange(len(self._coset_to_element))
        wanted = np.zeros(len(self._coset_to_element), dtype=bool)
        wanted[inv[sub.indices]] = True
        src = self.source.indices
        keep = src[wanted[self.coset_of[src]]]
        return Subgroup(self.source.ambient, _mask_from_indices(keep, self.source.ambient.order))


def quotient(g: PermGroup | Subgroup, n: Subgroup) -> QuotientGroup:
    """g/n via the action of g on the cosets of the normal subgroup n."""
    g = _sub(g)
    if not n <= g or not is_normal(n, g):
        raise DomainError("quotient requires a normal subgroup")
    key = ("quotient", g.mask, n.mask)
    cache = g.ambient._cache
    if key in cache:
        return cache[key]
    amb = g.ambient
    coset_of = np.full(amb.order, -1, dtype=np.int64)
    if n.is_trivial:
        grp = amb if g.is_whole else g.as_group()
        src = g.indices
        coset_of[src] = np.arange(len(src))
        to_elem = np.array([grp.index(amb.element(int(i))) for i in src], dtype=np.int64)
        q = QuotientGroup(g, n, grp, coset_of, to_elem)
        cache[key] = q
        return q
    reps = []
    nidx = n.indices
    for h in g.indices.tolist():
        if coset_of[h] < 0:
            coset_of[amb.lmul_many(h, nidx)] = len(reps)
            reps.append(h)
    reps_arr = np.array(reps, dtype=np.int64)
    k = len(reps)

    def action(x: int) -> Permutation:
        return Permutation(tuple(coset_of[amb.lmul_many(x, reps_arr)].tolist()))

    gens = [action(s) for s in g.gens]
    grp = PermGroup(gens, degree=k, cap=amb.cap)
    if grp.order != k:
        raise AssertionError("coset action is not regular")
    # cosets are labeled so that each quotient element is determined by where it sends coset 0
    to_elem = np.empty(k, dtype=np.int64)
    for e in range(grp.order):
        to_elem[grp._perms[e][0]] = e
    q = QuotientGroup(g, n, grp, coset_of, to_elem)
    cache[key] = q
    return q
