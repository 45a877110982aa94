"""Subgroup lattices: construction, join/meet tables, Kurosh modularity.

Nodes are indexed by position in ``lat.nodes`` (sorted by order, then mask);
``join`` and ``meet`` are integer tables over those positions.  "Modular in K"
always means modular as an element of the lattice of K itself.
"""
from __future__ import annotations

import os
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import DomainError, ScaleError
from .groups import PermGroup, Subgroup, _sub, closure_mask, cyclic_subgroup, is_normal

DEFAULT_LATTICE_CAP = 720


def lattice_cap() -> int:
    raw = os.environ.get("SIGMAFORGE_LATTICE_CAP")
    return int(raw) if raw else DEFAULT_LATTICE_CAP


class SubgroupLattice:
    """All subgroups of ``top`` (a subgroup of some ambient group)."""

    def __init__(self, nodes: list[Subgroup], leq: np.ndarray, join: np.ndarray, meet: np.ndarray):
        self.nodes = nodes
        self.ambient = nodes[0].ambient
        self.index = {h.mask: i for i, h in enumerate(nodes)}
        self.orders = np.array([h.order for h in nodes], dtype=np.int64)
        self.leq = leq
        self.join = join
        self.meet = meet
        self.bottom_index = 0
        self.top_index = len(nodes) - 1
        self._modular_cache: dict[tuple[int, int], tuple | None] = {}

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"<SubgroupLattice of order-{self.top.order} group, {len(self)} nodes>"

    @property
    def top(self) -> Subgroup:
        return self.nodes[self.top_index]

    @property
    def bottom(self) -> Subgroup:
        return self.nodes[0]

    def index_of(self, h: Subgroup) -> int:
        if h.ambient is not self.top.ambient:
            raise DomainError("subgroup belongs to a different group than the lattice")
        try:
            return self.index[h.mask]
        except KeyError:
            raise DomainError("subgroup is not a node of this lattice") from None

    def node_join(self, a: Subgroup, b: Subgroup) -> Subgroup:
        return self.nodes[self.join[self.index_of(a), self.index_of(b)]]

    def node_meet(self, a: Subgroup, b: Subgroup) -> Subgroup:
        return self.nodes[self.meet[self.index_of(a), self.index_of(b)]]

    def below(self, k: int) -> np.ndarray:
        """Indices of nodes contained in node k."""
        return np.flatnonzero(self.leq[:, k])

    def above(self, h: int) -> np.ndarray:
        return np.flatnonzero(self.leq[h, :])

    def maximal_subgroups(self) -> list[Subgroup]:
        return [self.nodes[i] for i in self.coatoms()]

    def coatoms(self) -> list[int]:
        top = self.top_index
        cov = self.covers
        return [i for i in range(len(self)) if cov[i, top]]

    @cached_property
    def covers(self) -> np.ndarray:
        """covers[i, j] iff node i is a maximal proper subgroup of node j."""
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        s = strict.astype(np.int32)
        return strict & ~((s @ s) > 0)

    def interval(self, a: Subgroup, b: Subgroup) -> SubgroupLattice:
        """Sublattice {H : a <= H <= b}."""
        ia, ib = self.index_of(a), self.index_of(b)
        if not self.leq[ia, ib]:
            raise DomainError("interval requires a <= b")
        return self._restrict(np.flatnonzero(self.leq[ia, :] & self.leq[:, ib]))

    def _restrict(self, sel: np.ndarray) -> SubgroupLattice:
        remap = np.full(len(self), -1, dtype=np.int64)
        remap[sel] = np.arange(len(sel))
        grid = np.ix_(sel, sel)
        return SubgroupLattice([self.nodes[i] for i in sel], self.leq[grid].copy(),
                               remap[self.join[grid]], remap[self.meet[grid]])

    def sublattice(self, k: Subgroup) -> SubgroupLattice:
        """The full lattice of the node k."""
        return self.interval(self.bottom, k)

    def verify_joins(self):
        """Check every table join against closure of the union; raise on mismatch."""
        amb = self.ambient
        n = len(self)
        for i in range(n):
            for j in range(i + 1, n):
                mask = closure_mask(amb, self.nodes[i].gens + self.nodes[j].gens)
                if mask != self.nodes[self.join[i, j]].mask:
                    raise AssertionError(f"join table wrong at ({i}, {j})")

    # Kurosh modularity
    def kurosh_violation(self, m: int, k: int | None = None):
        """First failing instance of the Kurosh conditions for node m in the lattice of node k.

        Returns None when m is modular, else ``(condition, x, z)`` with node indices.
        """
        if k is None:
            k = self.top_index
        key = (m, k)
        if key in self._modular_cache:
            return self._modular_cache[key]
        if not self.leq[m, k]:
            raise DomainError("modularity in K requires M <= K")
        S = self.below(k)
        J, M, L = self.join, self.meet, self.leq
        leq_ss = L[np.ix_(S, S)]
        # (1) <X, M ∩ Z> = <X, M> ∩ Z for X <= Z
        lhs = J[np.ix_(S, M[m, S])]
        rhs = M[np.ix_(J[S, m], S)]
        bad = (lhs != rhs) & leq_ss
        result = None
        if bad.any():
            x, z = np.argwhere(bad)[0]
            result = (1, int(S[x]), int(S[z]))
        else:
            # (2) <M, Y ∩ Z> = <M, Y> ∩ Z for M <= Z
            lhs = J[m][M[np.ix_(S, S)]]
            rhs = M[np.ix_(J[m, S], S)]
            bad = (lhs != rhs) & L[m, S][None, :]
            if bad.any():
                y, z = np.argwhere(bad)[0]
                result = (2, int(S[y]), int(S[z]))
        self._modular_cache[key] = result
        return result

    def is_modular_in(self, m: int, k: int) -> bool:
        return self.kurosh_violation(m, k) is None

    @cached_property
    def modular_table(self) -> np.ndarray:
        """modular_table[h, k] iff h <= k and h is modular in k."""
        n = len(self)
        out = np.zeros((n, n), dtype=bool)
        for k in range(n):
            for h in self.below(k):
                out[h, k] = self.kurosh_violation(int(h), k) is None
        return out

    def pentagon(self, k: int | None = None):
        """A failure (a, x, b) of the modular law a <= b => a∨(x∧b) = (a∨x)∧b, or None."""
        if k is None:
            k = self.top_index
        S = self.below(k)
        J, M = self.join, self.meet
        Mss = M[np.ix_(S, S)]
        for ai in range(len(S)):
            a = S[ai]
            lhs = J[a][Mss]  # [x, b]
            rhs = M[np.ix_(J[a, S], S)]
            bad = (lhs != rhs) & self.leq[a, S][None, :]
            if bad.any():
                x, b = np.argwhere(bad)[0]
                return (int(a), int(S[x]), int(S[b]))
        return None


def build_lattice(g: PermGroup | Subgroup, *, cap: int | None = None, verify: bool = False) -> SubgroupLattice:
    """All subgroups of g: cyclic subgroups closed under pairwise join.

    Every subgroup is the join of its cyclic subgroups, so extending each known
    node by each cyclic subgroup reaches the whole lattice.
    """
    g = _sub(g)
    cap = lattice_cap() if cap is None else cap
    if g.order > cap:
        raise ScaleError(f"lattice of a group of order {g.order} exceeds lattice cap {cap}")
    cache_key = ("lattice", g.mask)
    amb = g.ambient
    if cache_key in amb._cache and not verify:
        return amb._cache[cache_key]
    cyclics: dict[int, Subgroup] = {}
    for x in g.indices.tolist():
        c = cyclic_subgroup(amb, x)
        cyclics.setdefault(c.mask, c)
    cyc = sorted(cyclics.values(), key=lambda s: (s.order, s.mask))
    found = {amb.trivial.mask: amb.trivial}
    for c in cyc:
        found.setdefault(c.mask, c)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for h in frontier:
            for c in cyc:
                if c.mask & ~h.mask == 0:
                    continue
                j = h.join(c)
                if j.mask not in found:
                    found[j.mask] = j
                    nxt.append(j)
        frontier = nxt
    nodes = sorted(found.values(), key=lambda s: (s.order, s.mask))
    lat = _tabulate(nodes)
    if lat.top != g:
        raise AssertionError("lattice top differs from the group")
    if verify:
        lat.verify_joins()
    amb._cache[cache_key] = lat
    return lat


def _tabulate(nodes: list[Subgroup]) -> SubgroupLattice:
    n = len(nodes)
    masks = [h.mask for h in nodes]
    index = {m: i for i, m in enumerate(masks)}
    leq = np.zeros((n, n), dtype=bool)
    for i, mi in enumerate(masks):
        for j in range(i, n):
            if mi & ~masks[j] == 0:
                leq[i, j] = True
    meet = np.empty((n, n), dtype=np.int64)
    for i, mi in enumerate(masks):
        for j in range(i, n):
            try:
                meet[i, j] = meet[j, i] = index[mi & masks[j]]
            except KeyError:
                raise AssertionError("node set is not closed under intersection") from None
    orders = np.array([h.order for h in nodes], dtype=np.int64)
    big = np.iinfo(np.int64).max
    join = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        common = leq[i][None, :] & leq  # [j, k]: k above both i and j
        weighted = np.where(common, orders[None, :], big)
        best = weighted.argmin(axis=1)
        # least upper bound must lie below every common upper bound
        if (common & ~leq[best]).any():
            raise AssertionError("node set is not a lattice under inclusion")
        join[i] = best
    return SubgroupLattice(nodes, leq, join, meet)


def is_modular_element(m: Subgroup, lat: SubgroupLattice) -> bool:
    return lat.kurosh_violation(lat.index_of(m)) is None


def kurosh_witness(m: Subgroup, lat: SubgroupLattice):
    """None when m is modular in lat.top, else (condition, X, Z) as subgroups."""
    v = lat.kurosh_violation(lat.index_of(m))
    if v is None:
        return None
    cond, x, z = v
    return cond, lat.nodes[x], lat.nodes[z]


def is_modular_in(h: Subgroup, k: Subgroup, lat: SubgroupLattice) -> bool:
    """h modular as an element of the lattice of k (k a node of lat)."""
    return lat.is_modular_in(lat.index_of(h), lat.index_of(k))


def is_modular_lattice(lat: SubgroupLattice) -> bool:
    return lat.pentagon() is None


def maximal_subgroups(lat: SubgroupLattice) -> list[Subgroup]:
    return lat.maximal_subgroups()


def interval(lat: SubgroupLattice, a: Subgroup, b: Subgroup) -> SubgroupLattice:
    return lat.interval(a, b)


def submodular_nodes(lat: SubgroupLattice) -> np.ndarray:
    """Boolean mask of nodes reachable from the top by modular-in steps."""
    n = len(lat)
    mod = lat.modular_table
    marked = np.zeros(n, dtype=bool)
    marked[lat.top_index] = True
    for h in range(n - 1, -1, -1):
        if not marked[h]:
            marked[h] = bool((mod[h] & marked).any())
    return marked


def is_submodular(a: Subgroup, lat: SubgroupLattice) -> bool:
    return bool(submodular_nodes(lat)[lat.index_of(a)])


def to_dot(lat: SubgroupLattice, sigma=None, name: str = "lattice") -> str:
    """Hasse diagram in DOT: nodes labeled by order plus flags, edges are covers.

    Flags: N normal, M modular, Q sigma-quasinormal (only when ``sigma`` is given).
    """
    top = lat.top
    qn = None
    if sigma is not None:
        from .sigma import sigma_quasinormal_db
        db = sigma_quasinormal_db(top, sigma, lat)
        qn = db.qn[:, lat.top_index]
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, h in enumerate(lat.nodes):
        flags = []
        if is_normal(h, top):
            flags.append("N")
        if lat.is_modular_in(i, lat.top_index):
            flags.append("M")
        if qn is not None and qn[i]:
            flags.append("Q")
        label = f"|H|={h.order}" + (" " + ",".join(flags) if flags else "")
        lines.append(f'  n{i} [label="{label}"];')
    cov = lat.covers
    for i, j in np.argwhere(cov):
        lines.append(f"  n{int(i)} -> n{int(j)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(name: str) -> str:
    clean = "".join(ch if ch.isalnum() else "_" for ch in name)
    return clean if clean and not clean[0].isdigit() else "g_" + clean


def nodes_with_order(lat: SubgroupLattice, order: int, within: Iterable[int] | None = None) -> list[int]:
    sel = range(len(lat)) if within is None else within
    return [int(i) for i in sel if lat.orders[i] == order]
