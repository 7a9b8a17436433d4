"""Exact coloring counts for labelings, and their minima over labelings.

``count_colorings`` is a plain backtracking counter. The minimizers
(``dp_color_function`` and friends) walk the tree-normalized,
conjugation-deduplicated labeling stream and score each labeling against
a precomputed table: for every free edge slot and every candidate
permutation, the set of grid colorings satisfying that constraint, stored
as a Python int bitset. A labeling's count is then the popcount of an AND.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .graphs import Multigraph, SpanningTree, spanning_forest, tree_from_edges
from .labelings import (
    PermSet,
    SignedGraph,
    SLabeling,
    count_slot_choices,
    free_slots,
    identity,
    labeling_from_choice,
    perm_set,
    signed_colors,
)

DEFAULT_BUDGET = 10**9
# largest coloring grid (palette_size ** n) scored with bitsets
MASK_LIMIT = 1 << 22


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"search needs ~{needed} steps, budget is {budget}")
        self.needed = needed
        self.budget = budget


@dataclass
class CountReport:
    value: int
    witness: object = None
    labelings_examined: int = 0
    labelings_total: int = 0
    dedup_factor: int = 1
    partial: bool = False
    mode: str = ""
    k: int = 0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        from .labelings import format_labeling

        w = self.witness
        if isinstance(w, SLabeling):
            w = format_labeling(w)
        elif isinstance(w, SignedGraph):
            w = [[u, v, s] for (u, v, _), s in zip(w.graph.edges, w.signs)]
        return {
            "mode": self.mode,
            "k": self.k,
            "value": self.value,
            "partial": self.partial,
            "labelings_examined": self.labelings_examined,
            "labelings_total": self.labelings_total,
            "dedup_factor": self.dedup_factor,
            "witness": w,
        }


# -- single labeling ---------------------------------------------------------------

def _vertex_order(g: Multigraph) -> list[int]:
    return [v for comp in g.components for v in comp]


def count_colorings(L: SLabeling, palette: Sequence[int] | None = None, limit: int | None = None) -> int:
    """Number of proper colorings with colors from ``palette`` (default: all k).

    Vertices are colored in BFS order; each colored neighbour forbids one
    color per tuple component, through pi on out-arcs of the neighbour and
    pi^-1 on its in-arcs. With ``limit`` the count stops once it reaches
    that value.
    """
    g = L.graph
    k = L.k
    palette = list(range(k)) if palette is None else list(palette)
    if any(not 0 <= c < k for c in palette):
        raise ValueError("palette color outside the labeling's color set")
    order = _vertex_order(g)
    pos = {v: i for i, v in enumerate(order)}
    # back[i]: (earlier vertex, map from its color to the forbidden color)
    back: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in order]
    for t, h, perms in L.arcs:
        for p in perms:
            if pos[t] < pos[h]:
                back[pos[h]].append((t, p))
            else:
                inv = [0] * k
                for x, y in enumerate(p):
                    inv[y] = x
                back[pos[t]].append((h, tuple(inv)))
    n = len(order)
    color = [0] * g.n
    pal = set(palette)
    npal = len(palette)

    def rec(i: int) -> int:
        v = order[i]
        forbidden = {p[color[u]] for u, p in back[i]}
        if i == n - 1:
            return npal - len(forbidden & pal)
        total = 0
        for c in palette:
            if c not in forbidden:
                color[v] = c
                total += rec(i + 1)
                if limit is not None and total >= limit:
                    return total
        return total

    if n == 0:
        return 1
    return rec(0)


def is_colorable(L: SLabeling, palette=None) -> bool:
    return count_colorings(L, palette, limit=1) > 0


# -- chromatic polynomial oracle ---------------------------------------------------

@lru_cache(maxsize=None)
def _chromatic_coeffs(n: int, edges: frozenset) -> tuple[int, ...]:
    if not edges:
        return tuple([0] * n + [1])
    e = min(edges)
    rest = edges - {e}
    deleted = _chromatic_coeffs(n, rest)
    u, v = e
    # contract v into u, then renumber to close the gap at v
    merged = set()
    for a, b in rest:
        a = u if a == v else a
        b = u if b == v else b
        if a == b:
            continue
        a = a - 1 if a > v else a
        b = b - 1 if b > v else b
        merged.add((min(a, b), max(a, b)))
    contracted = _chromatic_coeffs(n - 1, frozenset(merged))
    out = list(deleted)
    for i, c in enumerate(contracted):
        out[i] -= c
    return tuple(out)


def chromatic_polynomial(g: Multigraph) -> tuple[int, ...]:
    """Coefficients (constant term first) by deletion-contraction."""
    return _chromatic_coeffs(g.n, frozenset((u, v) for u, v, _ in g.edges))


def chromatic_by_deletion_contraction(g: Multigraph, k: int) -> int:
    return sum(c * k**i for i, c in enumerate(chromatic_polynomial(g)))


def chromatic_value(g: Multigraph, k: int) -> int:
    """P(G, k) as the coloring count of the all-identity labeling."""
    if not g.simple:
        raise ValueError("graph must be simple")
    from .labelings import identity_labeling

    return count_colorings(identity_labeling(g, k))


# -- minimization over labelings --------------------------------------------------

class _Search:
    """Minimum (or colorability) over the normalized labelings of a
    connected graph."""

    def __init__(self, g: Multigraph, tree: SpanningTree, S: PermSet, palette, dedup: bool):
        self.g, self.tree, self.S = g, tree, S
        self.palette = list(palette)
        self.dedup = dedup and S.is_group
        self.slots = free_slots(g, tree)
        self.total_choices = count_slot_choices(S, len(self.slots), self.dedup)
        self.grid = len(self.palette) ** g.n
        self._masks = None

    def _build_masks(self):
        g, S = self.g, self.S
        cols = np.array(list(itertools.product(self.palette, repeat=g.n)), dtype=np.int64)
        if g.n == 0:
            cols = np.zeros((1, 0), dtype=np.int64)
        perms = np.array(S.elements, dtype=np.int64)
        ident = np.arange(S.k)
        free = set(self.slots)
        base = np.ones(len(cols), dtype=bool)
        for i, (u, v, c) in enumerate(g.edges):
            for j in range(c):
                if (i, j) not in free:
                    base &= ident[cols[:, u]] != cols[:, v]
        slot_masks = []
        for i, _ in self.slots:
            u, v, _ = g.edges[i]
            ok = perms[:, cols[:, u]] != cols[None, :, v]
            packed = np.packbits(ok, axis=1, bitorder="little")
            slot_masks.append([int.from_bytes(row.tobytes(), "little") for row in packed])
        packed = np.packbits(base, bitorder="little")
        self._masks = (int.from_bytes(packed.tobytes(), "little"), slot_masks)

    def run(self, decide: bool = False, max_leaves: int | None = None, first: int | None = None):
        """Walk the labeling stream in order.

        Returns (value, choice, examined). In ``decide`` mode value is 1 if
        every labeling is colorable, else 0 with the first failing choice.
        ``first`` restricts the walk to one top-level branch.
        """
        if self.grid <= MASK_LIMIT:
            return self._run_masks(decide, max_leaves, first)
        return self._run_backtrack(decide, max_leaves, first)

    def _run_masks(self, decide, max_leaves, first):
        if self._masks is None:
            self._build_masks()
        base, slot_masks = self._masks
        S = self.S
        nslots = len(self.slots)
        start = S.full_group if self.dedup else S.trivial_group
        if nslots == 0:
            c = base.bit_count()
            return (int(c > 0) if decide else c), (), 1
        best = [None, None]
        examined = [0]
        prefix: list[int] = []
        last = nslots - 1
        limit = max_leaves if max_leaves is not None else -1

        class _Stop(Exception):
            pass

        def rec(level, group, acc):
            reps = S.orbit_reps(group)
            if level == 0 and first is not None:
                reps = [r for r in reps if r[0] == first]
            masks = slot_masks[level]
            if level == last:
                for s, _ in reps:
                    if examined[0] == limit:
                        raise _Stop
                    examined[0] += 1
                    m = acc & masks[s]
                    if decide:
                        if not m:
                            best[0], best[1] = 0, tuple(prefix) + (s,)
                            raise _Stop
                        continue
                    c = m.bit_count()
                    if best[0] is None or c < best[0]:
                        best[0], best[1] = c, tuple(prefix) + (s,)
                        if c == 0:
                            raise _Stop
                return
            for s, cent in reps:
                prefix.append(s)
                rec(level + 1, cent, acc & masks[s])
                prefix.pop()

        try:
            rec(0, start, base)
        except _Stop:
            pass
        if decide and best[0] is None:
            best[0] = 1
        return best[0], best[1], examined[0]

    def _run_backtrack(self, decide, max_leaves, first):
        from .labelings import slot_choices

        best_v, best_c, examined = None, None, 0
        for choice in slot_choices(self.S, len(self.slots), self.dedup):
            if first is not None and choice and choice[0] != first:
                continue
            if max_leaves is not None and examined == max_leaves:
                break
            examined += 1
            L = labeling_from_choice(self.g, self.slots, self.S, choice)
            if decide:
                if count_colorings(L, self.palette, limit=1) == 0:
                    return 0, choice, examined
                continue
            c = count_colorings(L, self.palette)
            if best_v is None or c < best_v:
                best_v, best_c = c, choice
                if c == 0:
                    break
        if decide:
            return 1, None, examined
        return best_v, best_c, examined

    def labeling(self, choice) -> SLabeling:
        return labeling_from_choice(self.g, self.slots, self.S, choice)


def _branch_worker(args):
    g, tree_edges, set_spec, palette, dedup, decide, first = args
    S = set_spec if isinstance(set_spec, PermSet) else perm_set(*set_spec)
    search = _Search(g, tree_from_edges(g, tree_edges), S, palette, dedup)
    return search.run(decide=decide, first=first)


def _run_parallel(search: _Search, set_spec, decide: bool, jobs: int):
    S = search.S
    start = S.full_group if search.dedup else S.trivial_group
    firsts = [s for s, _ in S.orbit_reps(start)]
    args = [
        (search.g, sorted(search.tree.edges), set_spec, search.palette, search.dedup, decide, f)
        for f in firsts
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_branch_worker, args))
    # combine in stream order so the outcome matches a sequential walk
    best_v, best_c, examined = None, None, 0
    for v, c, ex in results:
        examined += ex
        if decide:
            if v == 0:
                return 0, c, examined
            continue
        if v is not None and (best_v is None or v < best_v):
            best_v, best_c = v, c
            if v == 0:
                return best_v, best_c, examined
    if decide:
        return 1, None, examined
    return best_v, best_c, examined


def _components(g: Multigraph, tree_edges=None):
    """(subgraph, spanning tree, vertex map) per connected component."""
    out = []
    for comp in g.components:
        sub, verts = g.subgraph(comp)
        if tree_edges is not None:
            pos = {v: i for i, v in enumerate(verts)}
            mine = [(pos[u], pos[v]) for u, v in tree_edges if u in pos and v in pos]
            tree = tree_from_edges(sub, mine)
        else:
            tree = spanning_forest(sub)
        out.append((sub, tree, verts))
    return out


def _lift_witness(g: Multigraph, parts, k: int) -> SLabeling:
    """Reassemble per-component labelings into one labeling of ``g``."""
    by_pair = {}
    for L, verts in parts:
        for t, h, perms in L.arcs:
            by_pair[frozenset((verts[t], verts[h]))] = (verts[t], verts[h], perms)
    arcs = tuple(by_pair[frozenset((u, v))] for u, v, _ in g.edges)
    return SLabeling(g, arcs, k)


def _gauge_ok(S: PermSet, palette) -> bool:
    """Tree normalization needs a group whose elements all map the palette
    onto itself; otherwise a gauge would move the allowed colors."""
    if not S.is_group:
        return False
    if len(palette) == S.k:
        return True
    pal = set(palette)
    return all({p[b] for b in pal} == pal for p in S.elements)


def minimize_over_labelings(
    g: Multigraph,
    S: PermSet | str,
    k: int | None = None,
    *,
    palette=None,
    dedup: bool = True,
    budget: int | None = DEFAULT_BUDGET,
    jobs: int = 1,
    tree_edges=None,
    mode: str = "",
) -> CountReport:
    """min over S-labelings of the number of proper colorings from ``palette``.

    Per component: identity on a BFS spanning tree, free permutations on
    every other edge slot, one representative per simultaneous-conjugation
    class when S is a group and ``dedup`` is on. The result multiplies over
    components. When the search would exceed ``budget`` elementary steps
    (labelings x grid colorings) only a prefix of the stream is examined and
    the report is flagged partial; its value is then an upper bound.
    """
    set_spec = S
    if isinstance(S, str):
        if k is None:
            raise ValueError("k required with a named permutation set")
        set_spec = (S, k)
        S = perm_set(S, k)
    k = S.k
    palette = list(range(k)) if palette is None else sorted(palette)
    gauged = _gauge_ok(S, palette)
    if not gauged:
        # no tree normalization to lean on
        tree_edges = []
        dedup = False
    value = 1
    examined = total_choices = 0
    partial = False
    parts = []
    remaining = budget
    for sub, tree, verts in _components(g, tree_edges if gauged else None):
        if not gauged:
            tree = SpanningTree(frozenset(), tuple([-1] * sub.n), tuple(range(sub.n)))
        search = _Search(sub, tree, S, palette, dedup)
        total_choices += search.total_choices
        need = search.total_choices * search.grid
        max_leaves = None
        if remaining is not None and need > remaining:
            max_leaves = max(1, remaining // search.grid)
            partial = True
        if jobs > 1 and max_leaves is None and search.slots:
            v, choice, ex = _run_parallel(search, set_spec, False, jobs)
        else:
            v, choice, ex = search.run(max_leaves=max_leaves)
        if remaining is not None:
            remaining = max(0, remaining - ex * search.grid)
        examined += ex
        value *= v
        parts.append((search.labeling(choice), verts))
    witness = _lift_witness(g, parts, k)
    n_fixed = g.n - len(g.components)
    return CountReport(
        value=value,
        witness=witness,
        labelings_examined=examined,
        labelings_total=len(S) ** g.m,
        dedup_factor=(len(S) ** n_fixed * (len(S) if dedup else 1)) if gauged else 1,
        partial=partial,
        mode=mode or S.name,
        k=k,
    )


def dp_color_function(g: Multigraph, k: int, **kw) -> CountReport:
    """P_DP(G, k): minimum over all S_k-labelings."""
    if k < 1:
        raise ValueError("k must be positive")
    return minimize_over_labelings(g, "dp", k, mode="dp", **kw)


def linear_color_function(g: Multigraph, k: int, **kw) -> CountReport:
    """Minimum over labelings by affine permutations of GF(k)."""
    return minimize_over_labelings(g, "linear", k, mode="linear", **kw)


def s_colorable(
    g: Multigraph,
    S: PermSet | str,
    k: int | None = None,
    *,
    palette=None,
    dedup: bool = True,
    budget: int | None = DEFAULT_BUDGET,
    jobs: int = 1,
) -> bool:
    """True iff every S-labeling of ``g`` has a proper coloring."""
    set_spec = S
    if isinstance(S, str):
        set_spec = (S, k)
        S = perm_set(S, k)
    palette = list(range(S.k)) if palette is None else sorted(palette)
    gauged = _gauge_ok(S, palette)
    dedup = dedup and gauged
    for sub, tree, _ in _components(g):
        if not gauged:
            tree = SpanningTree(frozenset(), tuple([-1] * sub.n), tuple(range(sub.n)))
        search = _Search(sub, tree, S, palette, dedup)
        need = search.total_choices * search.grid
        if budget is not None and need > budget:
            raise BudgetExceeded(need, budget)
        if jobs > 1 and search.slots:
            ok, _, _ = _run_parallel(search, set_spec, True, jobs)
        else:
            ok, _, _ = search.run(decide=True)
        if not ok:
            return False
    return True


def dp_chromatic_leq(g: Multigraph, k: int, **kw) -> bool:
    """chi_DP(G) <= k, decided by exhausting labelings (multigraphs allowed)."""
    return s_colorable(g, "dp", k, **kw)


# -- signed graphs -----------------------------------------------------------------

def signed_count(sg: SignedGraph, k: int) -> int:
    """Colorings kappa: V -> M_k with kappa(v) != sign(uv) * kappa(u)."""
    g = sg.graph
    colors = signed_colors(k)
    order = _vertex_order(g)
    pos = {v: i for i, v in enumerate(order)}
    back: list[list[tuple[int, int]]] = [[] for _ in order]
    for (u, v, _), s in zip(g.edges, sg.signs):
        a, b = (u, v) if pos[u] < pos[v] else (v, u)
        back[pos[b]].append((a, s))
    kappa = [0] * g.n
    n = len(order)
    if n == 0:
        return 1

    def rec(i: int) -> int:
        forbidden = {s * kappa[a] for a, s in back[i]}
        if i == n - 1:
            return k - len(forbidden & set(colors))
        total = 0
        for c in colors:
            if c not in forbidden:
                kappa[order[i]] = c
                total += rec(i + 1)
        return total

    return rec(0)


def switching_representatives(g: Multigraph):
    """Sign patterns positive on a BFS spanning forest, all-positive first;
    one per switching class."""
    tree = spanning_forest(g)
    nontree = [i for i, (u, v, _) in enumerate(g.edges) if (u, v) not in tree.edges]
    for signs in itertools.product((1, -1), repeat=len(nontree)):
        full = [1] * len(g.edges)
        for i, s in zip(nontree, signs):
            full[i] = s
        yield SignedGraph(g, tuple(full))


def signed_color_function(g: Multigraph, k: int) -> CountReport:
    """P_+-(G, k): minimum signed coloring count over switching classes."""
    if not g.simple:
        raise ValueError("graph must be simple")
    best, witness, examined = None, None, 0
    for sg in switching_representatives(g):
        examined += 1
        c = signed_count(sg, k)
        if best is None or c < best:
            best, witness = c, sg
    return CountReport(
        value=best,
        witness=witness,
        labelings_examined=examined,
        labelings_total=2 ** g.m,
        dedup_factor=2 ** (g.n - len(g.components)),
        mode="signed",
        k=k,
    )


def signed_colorable(g: Multigraph, k: int) -> bool:
    """chi_+-(G) <= k."""
    return all(signed_count(sg, k) > 0 for sg in switching_representatives(g))


def tree_count(n: int, k: int) -> int:
    return k * (k - 1) ** (n - 1)


__all__ = [name for name in dir() if not name.startswith("_") and name not in {"annotations", "np", "itertools", "math"}]
