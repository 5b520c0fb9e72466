"""Polynomial invariants of arrow presentations, packaged presentations and
multigraphs.

The central object is the five-weight polynomial of a packaged presentation:
the unique map satisfying, for any edge e,

    Q = a_e*Q(delete) + b_e*Q(contract) + c_e*Q(penrose)
        + x_e*Q(merge-delete) + y_e*Q(merge-contract)

with value alpha^{#circles} * beta^{#vertex classes} * gamma^{#boundary
classes} on edgeless presentations.  Everything else here (the two-weight
specialisation, its boundary-partition-free variants, the transition
polynomial, the one- and multivariate Bollobas-Riordan forms, and the
Whitney-rank Tutte polynomials of abstract multigraphs) is either a
specialisation or an independent subset expansion used as an oracle.

Isolated circles split off multiplicatively (one alpha each, a beta/gamma
when their class dies with them); the recursions strip them eagerly, which
changes no value and keeps intermediate presentations small.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .arrow import (
    ArrowPresentation,
    boundary_components,
    contract_edge,
    delete_edge,
    edge_cap,
    penrose_contract_edge,
    surface_stats,
)
from .errors import SizeLimitExceeded
from .packaged import EdgeOpKind, PackagedPresentation, Partition, apply_edge_op
from .poly import MultiPoly, VarRegistry, standard_registry

OP_ORDER = (
    EdgeOpKind.DELETE,
    EdgeOpKind.CONTRACT,
    EdgeOpKind.PENROSE,
    EdgeOpKind.MERGE_DELETE,
    EdgeOpKind.MERGE_CONTRACT,
)

# A five-colouring assigns one of the five operations to every edge; state
# sums iterate over all of them.
FiveColoring = Mapping[str, EdgeOpKind]


class WeightSystem:
    """Per-edge quintuples (a_e, b_e, c_e, x_e, y_e) of polynomial weights."""

    def __init__(self, registry: VarRegistry, lookup: Callable[[str], tuple]):
        self.registry = registry
        self._lookup = lookup

    def for_edge(self, label: str) -> tuple:
        return self._lookup(label)

    @classmethod
    def global_weights(cls, registry: VarRegistry, names=("a", "b", "c", "x", "y")):
        """Every edge carries the same five global variables (zeros allowed
        via the name ``None``)."""
        weights = tuple(
            MultiPoly.zero(registry) if n is None else MultiPoly.var(registry, n)
            for n in names
        )
        return cls(registry, lambda label: weights)

    @classmethod
    def per_edge(cls, registry: VarRegistry):
        def lookup(label):
            return tuple(
                MultiPoly.var(registry, f"{stem}_{label}")
                for stem in ("a", "b", "c", "x", "y")
            )

        return cls(registry, lookup)

    @classmethod
    def from_mapping(cls, registry: VarRegistry, mapping: Mapping[str, tuple]):
        return cls(registry, lambda label: mapping[label])


def _strip_isolated(pg: PackagedPresentation):
    """Remove edgeless circles; return the exponent they contribute.

    Each removed circle contributes one alpha; a vertex class consisting
    entirely of removed circles contributes one beta, and a boundary class
    consisting entirely of their bare boundaries one gamma.
    """
    empties = [ci for ci, circ in enumerate(pg.ap.circles) if not circ]
    if not empties:
        return pg, (0, 0, 0)
    empty_set = set(empties)
    bds = boundary_components(pg.ap)
    bare_ids = {bd.id for bd in bds if bd.circle in empty_set}
    da = len(empties)
    db = sum(1 for blk in pg.vparts.blocks if blk <= empty_set)
    dc = sum(1 for blk in pg.bparts.blocks if blk <= bare_ids)

    keep = [ci for ci in range(len(pg.ap.circles)) if ci not in empty_set]
    cmap = {ci: i for i, ci in enumerate(keep)}
    new_ap = ArrowPresentation(
        tuple(pg.ap.circles[ci] for ci in keep), pg.ap.edges
    )
    # Token boundaries keep their canonical ids (they precede bare ones and
    # circle reindexing is monotone); bare boundaries of removed circles drop.
    bmap = {bd.id: bd.id for bd in bds if bd.id not in bare_ids}
    vblocks = [
        frozenset(cmap[x] for x in blk if x in cmap)
        for blk in pg.vparts.blocks
        if not blk <= empty_set
    ]
    bblocks = [
        frozenset(bmap[x] for x in blk if x in bmap)
        for blk in pg.bparts.blocks
        if not blk <= bare_ids
    ]
    stripped = PackagedPresentation(
        new_ap,
        Partition(frozenset(vblocks), frozenset(cmap.values())),
        Partition(frozenset(bblocks), frozenset(bmap.values())),
    )
    return stripped, (da, db, dc)


def _edge_chooser(order: Optional[Sequence[str]]):
    if order is None:
        return lambda edges: min(edges)
    priority = {label: i for i, label in enumerate(order)}
    return lambda edges: min(edges, key=lambda l: (priority.get(l, len(priority)), l))


def q_multivariate(
    pg: PackagedPresentation,
    w: Optional[WeightSystem] = None,
    order: Optional[Sequence[str]] = None,
) -> MultiPoly:
    """The five-weight polynomial, by deletion-style recursion.

    ``order`` overrides the default least-label-first edge choice; the result
    is independent of it.
    """
    if w is None:
        w = WeightSystem.per_edge(standard_registry(pg.ap.edges))
    registry = w.registry
    choose = _edge_chooser(order)
    alpha = MultiPoly.var(registry, "alpha")
    beta = MultiPoly.var(registry, "beta")
    gamma = MultiPoly.var(registry, "gamma")

    memo: dict = {}

    def rec(pg):
        pg, (da, db, dc) = _strip_isolated(pg)
        factor = MultiPoly.monomial(registry, {"alpha": da, "beta": db, "gamma": dc})
        if not pg.ap.edges:
            return factor
        cached = memo.get(pg)
        if cached is None:
            e = choose(pg.ap.edges)
            cached = MultiPoly.zero(registry)
            for weight, kind in zip(w.for_edge(e), OP_ORDER):
                if weight.is_zero():
                    continue
                cached = cached + weight * rec(apply_edge_op(pg, e, kind))
            memo[pg] = cached
        return factor * cached

    return rec(pg)


def q_poly(pg: PackagedPresentation, registry: Optional[VarRegistry] = None) -> MultiPoly:
    """Five-weight polynomial with the global weights a, b, c, x, y."""
    registry = registry or standard_registry()
    return q_multivariate(pg, WeightSystem.global_weights(registry))


def z_poly(pg: PackagedPresentation, registry: Optional[VarRegistry] = None) -> MultiPoly:
    """Two-weight specialisation: c = x = y = 0."""
    registry = registry or standard_registry()
    return q_multivariate(
        pg, WeightSystem.global_weights(registry, ("a", "b", None, None, None))
    )


def zhat_poly(vg: PackagedPresentation, registry: Optional[VarRegistry] = None) -> MultiPoly:
    """Boundary-partition-free form of :func:`z_poly` (gamma set to 1).

    The attached boundary partition of ``vg`` does not influence the value.
    """
    return z_poly(vg, registry).set_to_one("gamma")


def qhat_poly(vg: PackagedPresentation, registry: Optional[VarRegistry] = None) -> MultiPoly:
    """Four-weight, boundary-partition-free form: y = 0 and gamma = 1."""
    registry = registry or standard_registry()
    p = q_multivariate(
        vg, WeightSystem.global_weights(registry, ("a", "b", "c", "x", None))
    )
    return p.set_to_one("gamma")


def state_sum_oracle(
    pg: PackagedPresentation,
    w: Optional[WeightSystem] = None,
    cap: Optional[int] = None,
) -> MultiPoly:
    """Direct sum over all five-colourings of the edge set.

    Independent of the recursion: every colouring is applied operation by
    operation (fixed label order, no stripping) and contributes its weight
    monomial times the base value of the fully resolved presentation.
    """
    cap = edge_cap(12) if cap is None else cap
    if len(pg.ap.edges) > cap:
        raise SizeLimitExceeded(
            f"state sum capped at {cap} edges, got {len(pg.ap.edges)}"
        )
    if w is None:
        w = WeightSystem.per_edge(standard_registry(pg.ap.edges))
    registry = w.registry
    labels = sorted(pg.ap.edges)
    total = MultiPoly.zero(registry)

    def rec(pg, depth, weight):
        nonlocal total
        if depth == len(labels):
            base = MultiPoly.monomial(
                registry,
                {
                    "alpha": len(pg.ap.circles),
                    "beta": len(pg.vparts),
                    "gamma": len(pg.bparts),
                },
            )
            total = total + weight * base
            return
        e = labels[depth]
        for wpoly, kind in zip(w.for_edge(e), OP_ORDER):
            rec(apply_edge_op(pg, e, kind), depth + 1, weight * wpoly)

    rec(pg, 0, MultiPoly.const(registry, 1))
    return total


# --------------------------------------------------------------------------
# numeric evaluation (used heavily by the identity verifier)


def q_value(
    pg: PackagedPresentation,
    weights: Mapping[str, tuple],
    alpha: Fraction,
    beta: Fraction,
    gamma: Fraction,
) -> Fraction:
    """Exact value of the five-weight polynomial at a rational point."""
    memo: dict = {}

    def rec(pg):
        pg, (da, db, dc) = _strip_isolated(pg)
        factor = alpha**da * beta**db * gamma**dc
        if not pg.ap.edges:
            return factor
        cached = memo.get(pg)
        if cached is None:
            e = min(pg.ap.edges)
            cached = Fraction(0)
            for value, kind in zip(weights[e], OP_ORDER):
                if value == 0:
                    continue
                cached += value * rec(apply_edge_op(pg, e, kind))
            memo[pg] = cached
        return factor * cached

    return rec(pg)


@lru_cache(maxsize=16)
def q_state_table(pg: PackagedPresentation):
    """All resolutions of ``pg``: (labels, entries).

    Each entry is ``(ops, va, vb, vc)`` where ``ops[i]`` indexes the
    operation applied to ``labels[i]`` and the exponents give the base value
    alpha^va * beta^vb * gamma^vc of that resolution.  Collected once, a
    table supports cheap evaluation at many points.
    """
    labels = sorted(pg.ap.edges)
    entries = []

    def rec(pg, depth, ops, da, db, dc):
        pg, (sa, sb, sc) = _strip_isolated(pg)
        da, db, dc = da + sa, db + sb, dc + sc
        if depth == len(labels):
            entries.append((tuple(ops), da, db, dc))
            return
        e = labels[depth]
        for idx, kind in enumerate(OP_ORDER):
            ops.append(idx)
            rec(apply_edge_op(pg, e, kind), depth + 1, ops, da, db, dc)
            ops.pop()

    rec(pg, 0, [], 0, 0, 0)
    return tuple(labels), tuple(entries)


def q_table_value(table, weights, alpha, beta, gamma) -> Fraction:
    labels, entries = table
    pows_a: dict = {}
    pows_b: dict = {}
    pows_c: dict = {}
    total = Fraction(0)
    for ops, da, db, dc in entries:
        term = Fraction(1)
        for label, op in zip(labels, ops):
            value = weights[label][op]
            if value == 0:
                term = Fraction(0)
                break
            term *= value
        if term == 0:
            continue
        if da not in pows_a:
            pows_a[da] = alpha**da
        if db not in pows_b:
            pows_b[db] = beta**db
        if dc not in pows_c:
            pows_c[dc] = gamma**dc
        total += term * pows_a[da] * pows_b[db] * pows_c[dc]
    return total


# --------------------------------------------------------------------------
# transition polynomial


def transition_poly(
    ap: ArrowPresentation,
    w: Optional[Mapping[str, tuple]] = None,
    registry: Optional[VarRegistry] = None,
) -> MultiPoly:
    """Transition polynomial of a bare arrow presentation.

    Recursion a_e*(contract) + b_e*(delete) + c_e*(penrose), value t^p on an
    edgeless presentation with p circles.  Note the contract weight comes
    first.  ``w`` maps labels to weight triples; per-edge variables
    (a_l, b_l, c_l) by default.
    """
    registry = registry or standard_registry(ap.edges)
    if w is None:
        w = {
            label: tuple(
                MultiPoly.var(registry, f"{stem}_{label}") for stem in ("a", "b", "c")
            )
            for label in ap.edges
        }

    def rec(ap):
        bare = sum(1 for circ in ap.circles if not circ)
        if bare:
            ap = ArrowPresentation(
                tuple(c for c in ap.circles if c), ap.edges
            )
        factor = MultiPoly.var(registry, "t", bare) if bare else MultiPoly.const(registry, 1)
        if not ap.edges:
            return factor
        e = min(ap.edges)
        wa, wb, wc = w[e]
        acc = MultiPoly.zero(registry)
        for weight, op in ((wa, contract_edge), (wb, delete_edge), (wc, penrose_contract_edge)):
            if not weight.is_zero():
                acc = acc + weight * rec(op(ap, e))
        return factor * acc

    return rec(ap)


@lru_cache(maxsize=32)
def transition_state_table(ap: ArrowPresentation):
    """Resolutions of the 3-way transition recursion: (labels, entries) with
    entries ``(ops, circle_count)`` and op order (contract, delete, penrose)."""
    labels = sorted(ap.edges)
    ops_fns = (contract_edge, delete_edge, penrose_contract_edge)
    entries = []

    def rec(ap, depth, ops, acc):
        bare = sum(1 for circ in ap.circles if not circ)
        if bare:
            ap = ArrowPresentation(tuple(c for c in ap.circles if c), ap.edges)
            acc += bare
        if depth == len(labels):
            entries.append((tuple(ops), acc))
            return
        e = labels[depth]
        for idx, fn in enumerate(ops_fns):
            ops.append(idx)
            rec(fn(ap, e), depth + 1, ops, acc)
            ops.pop()

    rec(ap, 0, [], 0)
    return tuple(labels), tuple(entries)


def transition_table_value(table, weights, t: Fraction) -> Fraction:
    labels, entries = table
    pows: dict = {}
    total = Fraction(0)
    for ops, count in entries:
        term = Fraction(1)
        for label, op in zip(labels, ops):
            value = weights[label][op]
            if value == 0:
                term = Fraction(0)
                break
            term *= value
        if term == 0:
            continue
        if count not in pows:
            pows[count] = t**count
        total += term * pows[count]
    return total


# --------------------------------------------------------------------------
# subset expansions over spanning sub-presentations


def _spanning(ap: ArrowPresentation, subset) -> ArrowPresentation:
    subset = frozenset(subset)
    return ArrowPresentation.from_circles(
        (tuple(o for o in circ if o.label in subset) for circ in ap.circles),
        subset,
    )


def _check_cap(ap, cap, default, what):
    cap = edge_cap(default) if cap is None else cap
    if len(ap.edges) > cap:
        raise SizeLimitExceeded(f"{what} capped at {cap} edges, got {len(ap.edges)}")


def mv_br_registry(ap: ArrowPresentation) -> VarRegistry:
    return VarRegistry(("a", "c") + tuple(f"b_{l}" for l in sorted(ap.edges)))


def mv_br_poly(
    ap: ArrowPresentation,
    registry: Optional[VarRegistry] = None,
    cap: Optional[int] = None,
) -> MultiPoly:
    """Multivariate Bollobas-Riordan polynomial.

    Sum over spanning sub-presentations A of
    a^{k(A)} * (prod of b_e over A) * c^{b(A)}.
    """
    _check_cap(ap, cap, 16, "subset expansion")
    registry = registry or mv_br_registry(ap)
    labels = sorted(ap.edges)
    total = MultiPoly.zero(registry)
    for bits in itertools.product((0, 1), repeat=len(labels)):
        subset = [l for l, bit in zip(labels, bits) if bit]
        sub = _spanning(ap, subset)
        stats = surface_stats(sub)
        powers = {"a": stats.k, "c": stats.b}
        for l in subset:
            powers[f"b_{l}"] = 1
        total = total + MultiPoly.monomial(registry, powers)
    return total


def mv_br_value(ap, a: Fraction, b_by_label: Mapping[str, Fraction], c: Fraction) -> Fraction:
    """Exact point value of :func:`mv_br_poly` (no cap; used pointwise)."""
    labels = sorted(ap.edges)
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=len(labels)):
        subset = [l for l, bit in zip(labels, bits) if bit]
        sub = _spanning(ap, subset)
        stats = surface_stats(sub)
        term = a**stats.k * c**stats.b
        for l in subset:
            term *= b_by_label[l]
        total += term
    return total


def br_poly(ap: ArrowPresentation, cap: Optional[int] = None) -> MultiPoly:
    """Bollobas-Riordan polynomial over (x, y, z).

    Sum over spanning sub-presentations of
    (x-1)^{r(E)-r(A)} * y^{|A|-r(A)} * z^{genus(A)} with r(A) = v - k(A) and
    genus the Euler genus, expanded into integer powers of x, y, z.
    """
    _check_cap(ap, cap, 16, "subset expansion")
    registry = VarRegistry(("x", "y", "z"))
    labels = sorted(ap.edges)
    v = len(ap.circles)
    r_full = v - _spanning_k(ap, labels)
    x = MultiPoly.var(registry, "x")
    one = MultiPoly.const(registry, 1)
    total = MultiPoly.zero(registry)
    for bits in itertools.product((0, 1), repeat=len(labels)):
        subset = [l for l, bit in zip(labels, bits) if bit]
        sub = _spanning(ap, subset)
        stats = surface_stats(sub)
        r_a = v - stats.k
        term = (x - one) ** (r_full - r_a)
        term = term * MultiPoly.monomial(
            registry, {"y": len(subset) - r_a, "z": stats.euler_genus}
        )
        total = total + term
    return total


def _spanning_k(ap, subset):
    return surface_stats(_spanning(ap, subset)).k


# --------------------------------------------------------------------------
# abstract multigraphs (embedding forgotten)


@dataclass(frozen=True)
class Multigraph:
    """Vertices 0..n-1 with a tuple of (u, v) edges; loops and parallels
    allowed."""

    n: int
    edge_list: tuple

    @classmethod
    def make(cls, n: int, edges: Iterable) -> "Multigraph":
        return cls(n, tuple((min(u, v), max(u, v)) for u, v in edges))

    @property
    def m(self) -> int:
        return len(self.edge_list)

    def components(self, subset: Optional[Iterable[int]] = None) -> int:
        idx = range(self.m) if subset is None else subset
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in idx:
            u, v = self.edge_list[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru
        return len({find(i) for i in range(self.n)})

    def rank(self, subset: Optional[Iterable[int]] = None) -> int:
        return self.n - self.components(subset)

    def delete(self, i: int) -> "Multigraph":
        return Multigraph(self.n, self.edge_list[:i] + self.edge_list[i + 1 :])

    def contract(self, i: int) -> "Multigraph":
        u, v = self.edge_list[i]
        if u == v:
            return self.delete(i)
        remap = {}
        nxt = 0
        for w in range(self.n):
            if w == v:
                continue
            remap[w] = nxt
            nxt += 1
        remap[v] = remap[u]
        edges = [
            (remap[a], remap[b])
            for j, (a, b) in enumerate(self.edge_list)
            if j != i
        ]
        return Multigraph.make(self.n - 1, edges)

    def is_loop(self, i: int) -> bool:
        u, v = self.edge_list[i]
        return u == v


def graph_of_presentation(ap: ArrowPresentation) -> Multigraph:
    """Forget the embedding: circles become vertices, labels edges."""
    edges = []
    for label in sorted(ap.edges):
        (c1, _), (c2, _) = ap.occurrences(label)
        edges.append((c1, c2))
    return Multigraph.make(len(ap.circles), edges)


def zdot_tutte(g: Multigraph, cap: Optional[int] = None) -> MultiPoly:
    """Subset expansion over (a, b, c): a^{k(A)} b^{|A|} c^{|E-A|}."""
    cap = edge_cap(16) if cap is None else cap
    if g.m > cap:
        raise SizeLimitExceeded(f"subset expansion capped at {cap} edges, got {g.m}")
    registry = VarRegistry(("a", "b", "c"))
    total = MultiPoly.zero(registry)
    for bits in itertools.product((0, 1), repeat=g.m):
        subset = [i for i, bit in enumerate(bits) if bit]
        total = total + MultiPoly.monomial(
            registry,
            {"a": g.components(subset), "b": len(subset), "c": g.m - len(subset)},
        )
    return total


def tutte_poly(g: Multigraph, cap: Optional[int] = None) -> MultiPoly:
    """Whitney-rank expansion of the Tutte polynomial, expanded in x and y."""
    cap = edge_cap(16) if cap is None else cap
    if g.m > cap:
        raise SizeLimitExceeded(f"subset expansion capped at {cap} edges, got {g.m}")
    registry = VarRegistry(("x", "y"))
    x = MultiPoly.var(registry, "x")
    y = MultiPoly.var(registry, "y")
    one = MultiPoly.const(registry, 1)
    r_full = g.rank()
    total = MultiPoly.zero(registry)
    for bits in itertools.product((0, 1), repeat=g.m):
        subset = [i for i, bit in enumerate(bits) if bit]
        r_a = g.rank(subset)
        total = total + (x - one) ** (r_full - r_a) * (y - one) ** (len(subset) - r_a)
    return total


def zdot_value(g: Multigraph, a: Fraction, b: Fraction, c: Fraction) -> Fraction:
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=g.m):
        subset = [i for i, bit in enumerate(bits) if bit]
        total += a ** g.components(subset) * b ** len(subset) * c ** (g.m - len(subset))
    return total


def tutte_value(g: Multigraph, x: Fraction, y: Fraction) -> Fraction:
    r_full = g.rank()
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=g.m):
        subset = [i for i, bit in enumerate(bits) if bit]
        r_a = g.rank(subset)
        total += (x - 1) ** (r_full - r_a) * (y - 1) ** (len(subset) - r_a)
    return total


def graph_two_sum(g: Multigraph, i: int, h: Multigraph, j: int, flip: bool = False) -> Multigraph:
    """Identify edge i of g with edge j of h and delete it.

    Endpoints are matched in order, or crosswise when ``flip``.  The Tutte
    polynomial does not depend on that choice.
    """
    u, v = g.edge_list[i]
    s, t = h.edge_list[j]
    if flip:
        s, t = t, s
    remap = {}
    nxt = g.n
    for w in range(h.n):
        if w == s:
            remap[w] = u
        elif w == t:
            remap[w] = v
        else:
            remap[w] = nxt
            nxt += 1
    edges = [e for k, e in enumerate(g.edge_list) if k != i]
    edges += [
        (remap[a], remap[b]) for k, (a, b) in enumerate(h.edge_list) if k != j
    ]
    return Multigraph.make(nxt, edges)


def graph_tensor(g: Multigraph, h: Multigraph, j: int, flips: Optional[Sequence[bool]] = None) -> Multigraph:
    """2-sum a copy of h (along its edge j) onto every edge of g."""
    result = g
    flips = flips or [False] * g.m
    for _ in range(g.m):
        # After each 2-sum the remaining original edges of g sit first.
        result = graph_two_sum(result, 0, h, j, flips[_])
    return result
