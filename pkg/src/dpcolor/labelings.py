"""S-labelings and the gauge transformations that preserve coloring counts.

Permutations are tuples in one-line notation: ``p[x]`` is the image of
``x``, so ``(2, 0, 1, 3)`` is written ``2013``. Composition follows the
usual convention, ``compose(a, b)(x) == a(b(x))``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .field import FieldSpec, field_of_order, is_prime_power
from .graphs import Multigraph, SpanningTree, canonical_orientation

Perm = tuple[int, ...]


# -- permutations ----------------------------------------------------------------

def identity(k: int) -> Perm:
    return tuple(range(k))


def compose(a: Perm, b: Perm) -> Perm:
    return tuple(a[x] for x in b)


def inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for x, y in enumerate(a):
        out[y] = x
    return tuple(out)


def is_permutation(a: Sequence[int]) -> bool:
    return sorted(a) == list(range(len(a)))


def parse_perm(text: str) -> Perm:
    """``"2013"`` for k <= 10, otherwise dot-separated images (``"0.11.2..."``)."""
    text = text.strip()
    if "." in text:
        p = tuple(int(t) for t in text.split("."))
    else:
        p = tuple(int(ch) for ch in text)
    if not is_permutation(p):
        raise ValueError(f"{text!r} is not a permutation")
    return p


def format_perm(p: Perm) -> str:
    if len(p) <= 10:
        return "".join(str(x) for x in p)
    return ".".join(str(x) for x in p)


def conjugate_perm(p: Perm, alpha: Perm) -> Perm:
    """alpha^-1 . p . alpha"""
    return compose(inverse(alpha), compose(p, alpha))


# -- permutation sets ----------------------------------------------------------------

class PermSet:
    """A finite set S of permutations of {0..k-1}, elements sorted in
    lexicographic one-line order.

    When ``is_group`` holds, tree normalization stays inside S and the
    residual gauge freedom is simultaneous conjugation by S itself.
    """

    def __init__(self, k: int, perms, name: str = "explicit", is_group: bool | None = None):
        elems = sorted(set(tuple(p) for p in perms))
        if not elems:
            raise ValueError("permutation set must be nonempty")
        for p in elems:
            if len(p) != k or not is_permutation(p):
                raise ValueError(f"{p} is not a permutation of {k} colors")
        self.k = k
        self.name = name
        self.elements: list[Perm] = elems
        self.index = {p: i for i, p in enumerate(elems)}
        if is_group is None:
            is_group = self._closed()
        self.is_group = is_group
        self._arr = np.array(elems, dtype=np.int64)
        self._codes = self._arr @ (k ** np.arange(k - 1, -1, -1, dtype=np.int64))
        self._conj_rows: dict[int, tuple[int, ...]] = {}
        self._reps_cache: dict[tuple[int, ...], list[tuple[int, tuple[int, ...]]]] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.index

    def __repr__(self) -> str:
        return f"PermSet({self.name!r}, k={self.k}, size={len(self)})"

    def _closed(self) -> bool:
        ident = identity(self.k)
        if ident not in self.index:
            return False
        return all(compose(a, b) in self.index for a in self.elements for b in self.elements)

    def closed_under_inverse(self) -> bool:
        return all(inverse(p) in self.index for p in self.elements)

    def conj_row(self, g: int) -> tuple[int, ...]:
        """Indices of g^-1 . s . g for every s in S (requires S closed under
        conjugation by g)."""
        row = self._conj_rows.get(g)
        if row is None:
            ga = self._arr[g]
            ginv = np.argsort(ga)
            imgs = ginv[self._arr[:, ga]]
            codes = imgs @ (self.k ** np.arange(self.k - 1, -1, -1, dtype=np.int64))
            pos = np.searchsorted(self._codes, codes)
            if np.any(pos >= len(self)) or np.any(self._codes[np.minimum(pos, len(self) - 1)] != codes):
                raise ValueError("set is not closed under this conjugation")
            row = tuple(int(x) for x in pos)
            self._conj_rows[g] = row
        return row

    def orbit_reps(self, group: tuple[int, ...]) -> list[tuple[int, tuple[int, ...]]]:
        """Orbit representatives of S under conjugation by ``group`` (indices
        into S), each the lexicographically smallest member of its orbit,
        paired with its centralizer in ``group``."""
        cached = self._reps_cache.get(group)
        if cached is not None:
            return cached
        if len(group) == 1:
            out = [(s, group) for s in range(len(self))]
        else:
            rows = [self.conj_row(g) for g in group]
            out = []
            for s in range(len(self)):
                images = [row[s] for row in rows]
                if min(images) == s:
                    cent = tuple(g for g, img in zip(group, images) if img == s)
                    out.append((s, cent))
        self._reps_cache[group] = out
        return out

    @property
    def full_group(self) -> tuple[int, ...]:
        return tuple(range(len(self)))

    @property
    def trivial_group(self) -> tuple[int, ...]:
        return (0,)


def symmetric_group(k: int) -> PermSet:
    return PermSet(k, itertools.permutations(range(k)), name="symmetric", is_group=True)


def affine_perm(field: FieldSpec, a: int, b: int) -> Perm:
    """x -> a*x + b over the field."""
    x = np.arange(field.k)
    return tuple(int(v) for v in field.add(field.mul(a, x), b))


def affine_group(field: FieldSpec) -> PermSet:
    perms = [affine_perm(field, a, b) for a in range(1, field.k) for b in range(field.k)]
    return PermSet(field.k, perms, name="linear", is_group=True)


def identity_set(k: int) -> PermSet:
    return PermSet(k, [identity(k)], name="identity", is_group=True)


def signed_involution(k: int) -> Perm:
    """Negation for odd prime powers, x -> x + 1 in characteristic 2."""
    if not is_prime_power(k):
        raise ValueError(f"{k} is not a prime power")
    f = field_of_order(k)
    if f.p == 2:
        return tuple(int(v) for v in f.add(np.arange(k), 1))
    return tuple(int(v) for v in f.neg(np.arange(k)))


def signed_set(k: int) -> PermSet:
    return PermSet(k, [identity(k), signed_involution(k)], name="signed", is_group=True)


def perm_set(name: str, k: int) -> PermSet:
    """Named sets: ``dp`` (all of S_k), ``linear``, ``signed``, ``classical``."""
    if name in ("dp", "symmetric"):
        return symmetric_group(k)
    if name == "linear":
        if not is_prime_power(k):
            raise ValueError(f"{k} is not a prime power")
        return affine_group(field_of_order(k))
    if name == "signed":
        return signed_set(k)
    if name in ("classical", "identity"):
        return identity_set(k)
    raise ValueError(f"unknown permutation set {name!r}")


# -- labelings -------------------------------------------------------------------

@dataclass(frozen=True)
class SLabeling:
    """An orientation of every adjacent pair plus a permutation tuple per arc.

    ``arcs[i]`` belongs to ``graph.edges[i]`` and is ``(tail, head, perms)``
    with ``len(perms)`` equal to that pair's multiplicity.
    """

    graph: Multigraph
    arcs: tuple[tuple[int, int, tuple[Perm, ...]], ...]
    k: int

    def __post_init__(self):
        if len(self.arcs) != len(self.graph.edges):
            raise ValueError("one arc record per adjacent pair required")
        for (u, v, mult), (t, h, perms) in zip(self.graph.edges, self.arcs):
            if {t, h} != {u, v}:
                raise ValueError(f"arc {(t, h)} does not match edge {(u, v)}")
            if len(perms) != mult:
                raise ValueError(f"edge {(u, v)} needs {mult} permutations, got {len(perms)}")
            for p in perms:
                if len(p) != self.k or not is_permutation(p):
                    raise ValueError(f"{p} is not a permutation of {self.k} colors")

    @property
    def orientation(self) -> tuple[tuple[int, int], ...]:
        return tuple((t, h) for t, h, _ in self.arcs)

    @cached_property
    def constraints(self) -> tuple[tuple[int, int, Perm], ...]:
        """Flattened (tail, head, perm) list, one entry per tuple component."""
        return tuple((t, h, p) for t, h, perms in self.arcs for p in perms)

    def is_proper(self, coloring: Sequence[int]) -> bool:
        return all(p[coloring[t]] != coloring[h] for t, h, p in self.constraints)

    def __str__(self) -> str:
        return format_labeling(self)


def uniform_labeling(g: Multigraph, perm: Perm) -> SLabeling:
    arcs = tuple((u, v, (perm,) * c) for u, v, c in g.edges)
    return SLabeling(g, arcs, len(perm))


def identity_labeling(g: Multigraph, k: int) -> SLabeling:
    return uniform_labeling(g, identity(k))


def labeling_from_perms(g: Multigraph, perms: Sequence, k: int | None = None) -> SLabeling:
    """Canonically oriented labeling; ``perms[i]`` is a Perm or a tuple of
    Perms for ``g.edges[i]``."""
    arcs = []
    for (u, v, c), p in zip(g.edges, perms):
        if p and isinstance(p[0], int):
            p = (tuple(p),)
        arcs.append((u, v, tuple(tuple(x) for x in p)))
    if k is None:
        k = len(arcs[0][2][0]) if arcs else 1
    return SLabeling(g, tuple(arcs), k)


def apply_gauge(L: SLabeling, taus: Sequence[Perm]) -> SLabeling:
    """Replace each pi on arc (t, h) by tau_h . pi . tau_t^-1."""
    if len(taus) != L.graph.n:
        raise ValueError("one gauge permutation per vertex required")
    for t in taus:
        if len(t) != L.k:
            raise ValueError("gauge permutation acts on the wrong color set")
    invs = [inverse(t) for t in taus]
    arcs = tuple(
        (t, h, tuple(compose(taus[h], compose(p, invs[t])) for p in perms))
        for t, h, perms in L.arcs
    )
    return SLabeling(L.graph, arcs, L.k)


def gauge_at_vertex(L: SLabeling, u: int, alpha: Perm) -> SLabeling:
    taus = [identity(L.k)] * L.graph.n
    taus[u] = tuple(alpha)
    return apply_gauge(L, taus)


def conjugate(L: SLabeling, alpha: Perm) -> SLabeling:
    """Simultaneous conjugation sigma(e) -> alpha^-1 . sigma(e) . alpha."""
    return apply_gauge(L, [inverse(tuple(alpha))] * L.graph.n)


def reorient(L: SLabeling, orientation) -> SLabeling:
    """Flip arcs to match ``orientation``; flipped arcs carry inverses."""
    want = {frozenset(a): a for a in orientation}
    arcs = []
    for t, h, perms in L.arcs:
        nt, nh = want.get(frozenset((t, h)), (t, h))
        if (nt, nh) == (t, h):
            arcs.append((t, h, perms))
        else:
            arcs.append((nt, nh, tuple(inverse(p) for p in perms)))
    return SLabeling(L.graph, tuple(arcs), L.k)


def normalization_gauge(L: SLabeling, T: SpanningTree) -> list[Perm]:
    """Vertex gauges that turn the first component on every tree edge into
    the identity, assigned in BFS order from each root."""
    k = L.k
    arc_of = {frozenset((t, h)): (t, h, perms) for t, h, perms in L.arcs}
    taus: list[Perm | None] = [None] * L.graph.n
    for w in T.order:
        u = T.parent[w]
        if u < 0:
            taus[w] = identity(k)
            continue
        t, h, perms = arc_of[frozenset((u, w))]
        pi = perms[0]
        if (t, h) == (u, w):
            taus[w] = compose(taus[u], inverse(pi))
        else:
            taus[w] = compose(taus[u], pi)
    return taus  # type: ignore[return-value]


def normalize_tree(L: SLabeling, T: SpanningTree) -> SLabeling:
    """Equivalent labeling with identity on every edge of T."""
    if not L.graph.connected:
        raise ValueError("graph is disconnected")
    return apply_gauge(L, normalization_gauge(L, T))


def canonical_conjugate(perms: Sequence[Perm]) -> tuple[Perm, ...]:
    """Lexicographically smallest simultaneous conjugate over all of S_k."""
    perms = tuple(tuple(p) for p in perms)
    if not perms:
        raise ValueError("empty tuple")
    k = len(perms[0])
    best = None
    for alpha in itertools.permutations(range(k)):
        cand = tuple(conjugate_perm(p, alpha) for p in perms)
        if best is None or cand < best:
            best = cand
    return best


# -- enumeration -----------------------------------------------------------------

def free_slots(g: Multigraph, T: SpanningTree) -> list[tuple[int, int]]:
    """(edge index, component) pairs not pinned to the identity by T."""
    slots = []
    for i, (u, v, c) in enumerate(g.edges):
        first = 1 if (u, v) in T.edges else 0
        slots.extend((i, j) for j in range(first, c))
    return slots


def slot_choices(S: PermSet, nslots: int, dedup: bool) -> Iterator[tuple[int, ...]]:
    """Index tuples in lexicographic order; with ``dedup`` only the
    lexicographically least member of each simultaneous-conjugation orbit."""
    if dedup and not S.is_group:
        raise ValueError("dedup requires a permutation group")
    start = S.full_group if dedup else S.trivial_group
    if nslots == 0:
        yield ()
        return
    prefix: list[int] = []

    def rec(level: int, group: tuple[int, ...]):
        for s, cent in S.orbit_reps(group):
            prefix.append(s)
            if level + 1 == nslots:
                yield tuple(prefix)
            else:
                yield from rec(level + 1, cent)
            prefix.pop()

    yield from rec(0, start)


def count_slot_choices(S: PermSet, nslots: int, dedup: bool) -> int:
    """Length of ``slot_choices`` without walking it."""
    memo: dict[tuple[int, tuple[int, ...]], int] = {}

    def rec(level: int, group: tuple[int, ...]) -> int:
        if level == nslots:
            return 1
        if len(group) == 1:
            return len(S) ** (nslots - level)
        key = (level, group)
        if key not in memo:
            memo[key] = sum(rec(level + 1, cent) for _, cent in S.orbit_reps(group))
        return memo[key]

    return rec(0, S.full_group if dedup else S.trivial_group)


def labeling_from_choice(
    g: Multigraph, slots, S: PermSet, choice: Sequence[int]
) -> SLabeling:
    ident = identity(S.k)
    comps = [[ident] * c for _, _, c in g.edges]
    for (i, j), s in zip(slots, choice):
        comps[i][j] = S.elements[s]
    arcs = tuple((u, v, tuple(c)) for (u, v, _), c in zip(g.edges, comps))
    return SLabeling(g, arcs, S.k)


def enumerate_normalized_labelings(
    g: Multigraph, T: SpanningTree, S: PermSet, dedup: bool = True
) -> Iterator[SLabeling]:
    """Every S-labeling with identity on T (canonical orientation), or one
    per simultaneous-conjugation class when ``dedup`` is set."""
    slots = free_slots(g, T)
    for choice in slot_choices(S, len(slots), dedup):
        yield labeling_from_choice(g, slots, S, choice)


def enumerate_all_labelings(g: Multigraph, S: PermSet) -> Iterator[SLabeling]:
    """Every canonically oriented S-labeling, no normalization."""
    slots = [(i, j) for i, (_, _, c) in enumerate(g.edges) for j in range(c)]
    for choice in itertools.product(range(len(S)), repeat=len(slots)):
        yield labeling_from_choice(g, slots, S, choice)


# -- signed graphs ---------------------------------------------------------------

@dataclass(frozen=True)
class SignedGraph:
    graph: Multigraph
    signs: tuple[int, ...]  # aligned with graph.edges

    def __post_init__(self):
        if not self.graph.simple:
            raise ValueError("signed graphs are simple")
        if len(self.signs) != len(self.graph.edges):
            raise ValueError("one sign per edge required")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    def switch(self, v: int) -> "SignedGraph":
        return SignedGraph(
            self.graph,
            tuple(-s if v in (a, b) else s for (a, b, _), s in zip(self.graph.edges, self.signs)),
        )


def signed_colors(k: int) -> list[int]:
    """M_k: {0, +-1, ..., +-t} for k = 2t+1, {+-1, ..., +-t} for k = 2t."""
    t = k // 2
    out = [0] if k % 2 else []
    for i in range(1, t + 1):
        out.extend((i, -i))
    return out


def signed_color_map(k: int) -> dict[int, int]:
    """Bijection M_k -> field elements carrying signed negation to the
    designated involution of ``signed_involution(k)``."""
    f = field_of_order(k)
    t = k // 2
    if f.p == 2:
        # +i -> 2(i-1), -i -> 2(i-1)+1; adding 1 flips the constant bit
        return {s: 2 * (abs(s) - 1) + (s < 0) for s in signed_colors(k)}
    positives = [a for a in range(1, k) if a < f.neg(a)][:t]
    out = {0: 0}
    for i, a in enumerate(positives, 1):
        out[i] = a
        out[-i] = f.neg(a)
    return out


def signed_to_labeling(sg: SignedGraph, k: int) -> SLabeling:
    pi = signed_involution(k)
    ident = identity(k)
    arcs = tuple(
        (u, v, (ident if s == 1 else pi,)) for (u, v, _), s in zip(sg.graph.edges, sg.signs)
    )
    return SLabeling(sg.graph, arcs, k)


# -- literal format --------------------------------------------------------------

def parse_labeling(text: str, g: Multigraph | None = None) -> SLabeling:
    """Lines ``u v : perm[,perm...]``; arcs oriented u -> v as written.

    Without ``g`` the graph is read off the lines (multiplicity = number of
    permutations listed).
    """
    recs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(f"line {lineno}: expected 'u v : perm[,perm...]'")
        left, right = line.split(":", 1)
        u, v = (int(x) for x in left.split())
        perms = tuple(parse_perm(p) for p in right.split(","))
        recs.append((u, v, perms))
    if g is None:
        n = 1 + max((max(u, v) for u, v, _ in recs), default=-1)
        g = Multigraph.from_pairs(n, [(u, v, len(p)) for u, v, p in recs])
    by_pair = {frozenset((u, v)): (u, v, p) for u, v, p in recs}
    if len(by_pair) != len(recs):
        raise ValueError("each pair may appear on one line only")
    arcs = []
    for u, v, _ in g.edges:
        try:
            arcs.append(by_pair[frozenset((u, v))])
        except KeyError:
            raise ValueError(f"no permutations given for edge {(u, v)}") from None
    k = len(arcs[0][2][0]) if arcs else 1
    return SLabeling(g, tuple(arcs), k)


def format_labeling(L: SLabeling) -> str:
    return "\n".join(
        f"{t} {h} : " + ",".join(format_perm(p) for p in perms) for t, h, perms in L.arcs
    )

