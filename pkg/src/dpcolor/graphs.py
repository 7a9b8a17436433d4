"""Multigraphs, spanning trees and graph input formats."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

GRAPH6_HEADER = ">>graph6<<"


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Multigraph:
    """Loopless multigraph on vertices 0..n-1.

    ``edges`` holds one ``(u, v, multiplicity)`` record per adjacent pair,
    with ``u < v``, sorted.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v, mult in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge record {(u, v)} for n={self.n}")
            if mult < 1:
                raise ValueError("edge multiplicity must be >= 1")
            if (u, v) in seen:
                raise ValueError(f"duplicate record for pair {(u, v)}")
            seen.add((u, v))

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Multigraph":
        """Build from an iterable of (u, v) or (u, v, mult); repeats accumulate."""
        mult: dict[tuple[int, int], int] = {}
        for rec in pairs:
            u, v = int(rec[0]), int(rec[1])
            c = int(rec[2]) if len(rec) > 2 else 1
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u < 0 or v < 0:
                raise ValueError("negative vertex index")
            key = (min(u, v), max(u, v))
            mult[key] = mult.get(key, 0) + c
        return cls(n, tuple(sorted((u, v, c) for (u, v), c in mult.items())))

    @property
    def m(self) -> int:
        return sum(c for _, _, c in self.edges)

    @property
    def max_multiplicity(self) -> int:
        return max((c for _, _, c in self.edges), default=0)

    @property
    def simple(self) -> bool:
        return all(c == 1 for _, _, c in self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def multiplicity(self, u: int, v: int) -> int:
        a, b = min(u, v), max(u, v)
        for x, y, c in self.edges:
            if (x, y) == (a, b):
                return c
        return 0

    def underlying(self) -> "Multigraph":
        return Multigraph(self.n, tuple((u, v, 1) for u, v, _ in self.edges))

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Vertex sets of the connected components, each in BFS order from its
        smallest vertex; components ordered by smallest vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            order, queue = [], deque([s])
            while queue:
                u = queue.popleft()
                order.append(u)
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(tuple(order))
        return tuple(comps)

    @property
    def connected(self) -> bool:
        return len(self.components) <= 1

    @property
    def cycle_rank(self) -> int:
        return self.m - self.n + len(self.components)

    def subgraph(self, vertices) -> tuple["Multigraph", list[int]]:
        """Induced subgraph relabelled to 0..len-1 in sorted vertex order;
        returns it with the list mapping new index -> old vertex."""
        keep = sorted(vertices)
        pos = {v: i for i, v in enumerate(keep)}
        edges = tuple(
            (pos[u], pos[v], c) for u, v, c in self.edges if u in pos and v in pos
        )
        return Multigraph(len(keep), edges), keep


@dataclass(frozen=True)
class SpanningTree:
    """BFS spanning tree (or forest) of the underlying simple graph."""

    edges: frozenset[tuple[int, int]]
    parent: tuple[int, ...]  # -1 at roots
    order: tuple[int, ...]

    def __contains__(self, pair) -> bool:
        u, v = pair
        return (min(u, v), max(u, v)) in self.edges


def spanning_forest(g: Multigraph) -> SpanningTree:
    parent = [-1] * g.n
    edges = set()
    order: list[int] = []
    for comp in g.components:
        order.extend(comp)
        seen = {comp[0]}
        queue = deque([comp[0]])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    edges.add((min(u, w), max(u, w)))
                    queue.append(w)
    return SpanningTree(frozenset(edges), tuple(parent), tuple(order))


def spanning_tree(g: Multigraph) -> SpanningTree:
    """BFS tree from vertex 0, neighbours visited in increasing order."""
    if not g.connected:
        raise ValueError("graph is disconnected")
    return spanning_forest(g)


def tree_from_edges(g: Multigraph, pairs) -> SpanningTree:
    """Validate a caller-supplied edge set as a spanning tree of ``g``."""
    pairs = {(min(u, v), max(u, v)) for u, v in pairs}
    present = {(u, v) for u, v, _ in g.edges}
    if not pairs <= present:
        raise ValueError(f"tree edges {sorted(pairs - present)} are not edges of the graph")
    t = Multigraph(g.n, tuple(sorted((u, v, 1) for u, v in pairs)))
    if len(pairs) != g.n - 1 or not t.connected:
        raise ValueError("edge set is not a spanning tree")
    bfs = spanning_forest(t)
    return SpanningTree(frozenset(pairs), bfs.parent, bfs.order)


def check_spanning_tree(g: Multigraph, t: SpanningTree) -> None:
    tree_from_edges(g, t.edges)


def canonical_orientation(g: Multigraph) -> tuple[tuple[int, int], ...]:
    """Every adjacent pair oriented low index -> high index."""
    return tuple((u, v) for u, v, _ in g.edges)


def add_parallel_edges(g: Multigraph, t: SpanningTree, extra: int) -> Multigraph:
    """Give every non-tree edge multiplicity ``1 + extra``."""
    if not g.simple:
        raise ValueError("graph must be simple")
    if extra < 0:
        raise ValueError("extra must be nonnegative")
    check_spanning_tree(g, t)
    return Multigraph(
        g.n,
        tuple((u, v, 1 if (u, v) in t.edges else 1 + extra) for u, v, _ in g.edges),
    )


# -- graph6 -----------------------------------------------------------------

def _g6_n(data: bytes) -> tuple[int, int]:
    if not data:
        raise GraphFormatError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise GraphFormatError("truncated graph6 size field")
        val = 0
        for b in data[2:8]:
            val = (val << 6) | (b - 63)
        return val, 8
    if len(data) < 4:
        raise GraphFormatError("truncated graph6 size field")
    val = 0
    for b in data[1:4]:
        val = (val << 6) | (b - 63)
    return val, 4


def parse_graph6(text: str) -> Multigraph:
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    elif s.startswith(">>"):
        raise GraphFormatError("malformed header")
    try:
        data = s.encode("ascii")
    except UnicodeEncodeError as exc:
        raise GraphFormatError("non-ASCII byte in graph6 string") from exc
    for b in data:
        if not 63 <= b <= 126:
            raise GraphFormatError(f"byte {b!r} out of graph6 range")
    n, pos = _g6_n(data)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) < need:
        raise GraphFormatError("graph6 string too short")
    if len(body) > need:
        raise GraphFormatError("trailing characters after graph6 data")
    bits = []
    for b in body:
        x = b - 63
        bits.extend((x >> (5 - i)) & 1 for i in range(6))
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j, 1))
            idx += 1
    return Multigraph(n, tuple(sorted(edges)))


def encode_graph6(g: Multigraph) -> str:
    if not g.simple:
        raise ValueError("graph6 encodes simple graphs only")
    n = g.n
    if n < 63:
        head = [n + 63]
    elif n < 258048:
        head = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        head = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    present = {(u, v) for u, v, _ in g.edges}
    bits = [1 if (i, j) in present else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = [
        sum(bit << (5 - t) for t, bit in enumerate(bits[i : i + 6])) + 63
        for i in range(0, len(bits), 6)
    ]
    return bytes(head + body).decode("ascii")


# -- edge lists ---------------------------------------------------------------

def parse_edge_list(text: str, n: int | None = None) -> Multigraph:
    """Lines ``u v [mult]``, 0-based; ``#`` starts a comment.

    The vertex count is ``n`` when given, otherwise one more than the
    largest index seen.
    """
    pairs = []
    top = -1
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.replace(",", " ").split()
        if len(tok) not in (2, 3):
            raise GraphFormatError(f"line {lineno}: expected 'u v [mult]'")
        try:
            vals = [int(t) for t in tok]
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: non-integer token") from exc
        u, v = vals[0], vals[1]
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex index")
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop at vertex {u}")
        if len(vals) == 3 and vals[2] < 1:
            raise GraphFormatError(f"line {lineno}: multiplicity must be >= 1")
        top = max(top, u, v)
        pairs.append(tuple(vals))
    if n is None:
        n = top + 1
    elif top >= n:
        raise GraphFormatError(f"vertex {top} out of range for n={n}")
    return Multigraph.from_pairs(n, pairs)


def format_edge_list(g: Multigraph) -> str:
    return "\n".join(f"{u} {v}" if c == 1 else f"{u} {v} {c}" for u, v, c in g.edges)


def read_graph(text: str) -> Multigraph:
    """Sniff the format: a single token of graph6 characters is graph6."""
    s = text.strip()
    if s.startswith(">>graph6<<") or (s and " " not in s and "\n" not in s and not s.isdigit()):
        return parse_graph6(s)
    return parse_edge_list(s)


# -- small named graphs, used throughout the tests ----------------------------

def path_graph(n: int) -> Multigraph:
    return Multigraph.from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Multigraph:
    return Multigraph.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Multigraph:
    return Multigraph.from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
