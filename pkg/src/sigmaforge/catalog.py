"""Named constructions of permutation groups.

Names are case-sensitive tokens joined by ``x`` for direct products::

    C6  D8  S4  A5  Q8  Dic12  SL2_3  SL2_5  C7:C3  A5wrC2  S3xC2  V4

``Dn`` is the dihedral group of *order* n; ``Dicn`` the dicyclic group of order n;
``Cn:Cm`` a semidirect product where the C_m generator acts on C_n by
multiplication with a unit whose order is the largest divisor of m available.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial, gcd
from typing import Callable

from .errors import DomainError
from .groups import PermGroup
from .perm import Permutation


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise DomainError("cyclic order must be positive")
    if n == 1:
        return PermGroup([], degree=1, name="C1")
    return PermGroup([Permutation(tuple(list(range(1, n)) + [0]))], name=f"C{n}")


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise DomainError("symmetric degree must be positive")
    if n == 1:
        return PermGroup([], degree=1, name="S1")
    gens = [Permutation.from_cycles([(0, 1)], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([tuple(range(n))], n))
    return PermGroup(gens, name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 1:
        raise DomainError("alternating degree must be positive")
    if n < 3:
        return PermGroup([], degree=n, name=f"A{n}")
    gens = [Permutation.from_cycles([(0, 1, i)], n) for i in range(2, n)]
    return PermGroup(gens, name=f"A{n}")


def dihedral(order: int) -> PermGroup:
    """Dihedral group of the given order (D4 is the Klein four-group)."""
    if order < 2 or order % 2:
        raise DomainError("dihedral order must be even and >= 2")
    n = order // 2
    if n == 1:
        return PermGroup([Permutation((1, 0))], name="D2")
    if n == 2:
        return PermGroup([Permutation((1, 0, 3, 2)), Permutation((2, 3, 0, 1))], name="D4")
    rot = Permutation(tuple((i + 1) % n for i in range(n)))
    ref = Permutation(tuple((-i) % n for i in range(n)))
    return PermGroup([rot, ref], name=f"D{order}")


def regular_representation(elements: list, mul: Callable, generators: list, name: str | None = None) -> PermGroup:
    """Left regular action of an abstractly given group on its own elements."""
    pos = {e: i for i, e in enumerate(elements)}
    gens = [Permutation(tuple(pos[mul(g, e)] for e in elements)) for g in generators]
    return PermGroup(gens, degree=len(elements), name=name)


def dicyclic(order: int) -> PermGroup:
    """Dic_{4n} = <a, x | a^{2n} = 1, x^2 = a^n, x a x^-1 = a^-1>; Dic8 = Q8."""
    if order < 4 or order % 4:
        raise DomainError("dicyclic order must be a multiple of 4")
    n = order // 4
    m = 2 * n
    elements = [(k, e) for e in (0, 1) for k in range(m)]

    def mul(u, v):
        (k1, e1), (k2, e2) = u, v
        if e1 == 0:
            return ((k1 + k2) % m, e2)
        # x a^k2 = a^-k2 x,  x x = a^n
        if e2 == 0:
            return ((k1 - k2) % m, 1)
        return ((k1 - k2 + n) % m, 0)

    return regular_representation(elements, mul, [(1, 0), (0, 1)], name=f"Dic{order}")


def quaternion8() -> PermGroup:
    g = dicyclic(8)
    g.name = "Q8"
    return g


def special_linear_2(p: int) -> PermGroup:
    """SL(2, p) acting on the non-zero vectors of F_p^2."""
    vectors = [(x, y) for x in range(p) for y in range(p) if (x, y) != (0, 0)]
    pos = {v: i for i, v in enumerate(vectors)}

    def act(m):
        a, b, c, d = m
        return Permutation(tuple(pos[((a * x + b * y) % p, (c * x + d * y) % p)] for x, y in vectors))

    gens = [act((1, 1, 0, 1)), act((0, p - 1, 1, 0))]
    return PermGroup(gens, name=f"SL2_{p}")


def unit_of_order(n: int, m: int) -> int:
    """Smallest unit r mod n whose multiplicative order is the largest divisor of m attainable."""
    best, best_ord = 1, 1
    for r in range(2, n):
        if gcd(r, n) != 1:
            continue
        k, y = 1, r % n
        while y != 1:
            y = y * r % n
            k += 1
        if m % k == 0 and k > best_ord:
            best, best_ord = r, k
    return best


def semidirect_cyclic(n: int, m: int, r: int | None = None) -> PermGroup:
    """C_n ⋊ C_m with the C_m generator acting as multiplication by r."""
    if r is None:
        r = unit_of_order(n, m)
    if gcd(r, n) != 1 or pow(r, m, n) != 1 % n:
        raise DomainError(f"{r} does not define an action of C{m} on C{n}")
    deg = n + m
    a = Permutation(tuple([(i + 1) % n for i in range(n)] + list(range(n, deg))))
    b = Permutation(tuple([(r * i) % n for i in range(n)] + [n + (j + 1) % m for j in range(m)]))
    return PermGroup([a, b], name=f"C{n}:C{m}")


def direct_product(*groups: PermGroup) -> PermGroup:
    degree = sum(g.degree for g in groups)
    gens, off = [], 0
    for g in groups:
        for s in g.generators:
            imgs = list(range(degree))
            for i, j in enumerate(s.images):
                imgs[off + i] = off + j
            gens.append(Permutation(tuple(imgs)))
        off += g.degree
    name = "x".join(g.name or "G" for g in groups)
    return PermGroup(gens, degree=degree, name=name)


def wreath_alternating_cyclic(n: int = 5, p: int = 2) -> PermGroup:
    """A_n wr C_p: p copies of A_n on disjoint blocks, permuted cyclically."""
    base = alternating(n)
    degree = n * p
    gens = []
    for s in base.generators:
        imgs = list(range(degree))
        for i, j in enumerate(s.images):
            imgs[i] = j
        gens.append(Permutation(tuple(imgs)))
    gens.append(Permutation(tuple((i + n) % degree for i in range(degree))))
    return PermGroup(gens, degree=degree, name=f"A{n}wrC{p}")


@dataclass(frozen=True)
class CatalogEntry:
    """A parameterized family: token pattern, builder, and textbook order."""

    name: str
    pattern: re.Pattern
    constructor: Callable[..., PermGroup]
    order: Callable[..., int]

    def match(self, token: str):
        m = self.pattern.fullmatch(token)
        return None if m is None else tuple(int(x) for x in m.groups())


CATALOG = [
    CatalogEntry("semidirect Cn:Cm", re.compile(r"C(\d+):C(\d+)"), semidirect_cyclic, lambda n, m: n * m),
    CatalogEntry("wreath AnwrCp", re.compile(r"A(\d+)wrC(\d+)"), wreath_alternating_cyclic,
                 lambda n, p: (factorial(n) // 2) ** p * p),
    CatalogEntry("cyclic Cn", re.compile(r"C(\d+)"), cyclic, lambda n: n),
    CatalogEntry("dicyclic Dicn", re.compile(r"Dic(\d+)"), dicyclic, lambda n: n),
    CatalogEntry("dihedral Dn", re.compile(r"D(\d+)"), dihedral, lambda n: n),
    CatalogEntry("symmetric Sn", re.compile(r"S(\d+)"), symmetric, lambda n: factorial(n)),
    CatalogEntry("alternating An", re.compile(r"A(\d+)"), alternating, lambda n: max(1, factorial(n) // 2)),
    CatalogEntry("special linear SL2_p", re.compile(r"SL2_(\d+)"), special_linear_2, lambda p: p * (p * p - 1)),
    CatalogEntry("quaternion Q8", re.compile(r"Q8"), quaternion8, lambda: 8),
    CatalogEntry("Klein V4", re.compile(r"V4"), lambda: _renamed(dihedral(4), "V4"), lambda: 4),
]


def _renamed(g: PermGroup, name: str) -> PermGroup:
    g.name = name
    return g


def lookup(token: str) -> tuple[CatalogEntry, tuple[int, ...]]:
    for entry in CATALOG:
        args = entry.match(token)
        if args is not None:
            return entry, args
    raise DomainError(f"unknown catalog group {token!r}")


def expected_order(name: str) -> int:
    """Order predicted by the family formulas, without building the group."""
    out = 1
    for tok in _tokens(name):
        entry, args = lookup(tok)
        out *= entry.order(*args)
    return out


def _tokens(name: str) -> list[str]:
    name = name.strip()
    if name.startswith("catalog:"):
        name = name[len("catalog:"):]
    # 'x' separates direct factors; 'wr' never contains a bare 'x'
    return [t for t in name.split("x")]


def build(name: str) -> PermGroup:
    """Construct a catalog group from its name, e.g. ``S3xC2``."""
    toks = _tokens(name)
    if not all(toks):
        raise DomainError(f"malformed catalog name {name!r}")
    factors = []
    for tok in toks:
        entry, args = lookup(tok)
        factors.append(entry.constructor(*args))
    g = factors[0] if len(factors) == 1 else direct_product(*factors)
    g.name = "x".join(toks)
    return g
