"""Polynomials over GF(k) whose nonzeros are proper colorings of a labeling.

A permutation pi is covered by f(x, y) when f(c, pi(c)) = 0 for every c.
The per-edge covers here are products of L-polynomials, the degree-one
polynomials vanishing on the line through two points of the graph of pi.
Whole-graph covers stay factored: each factor is a bivariate polynomial
bound to the (tail, head) variables of one edge.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import BoundValue, alon_furedi_weak
from .field import FieldSpec, field_of_order
from .graphs import Multigraph, SpanningTree, spanning_forest
from .labelings import Perm, SLabeling, identity, inverse

DEFAULT_GRID_BUDGET = 10**8


class BivariatePoly:
    """f(x, y) = sum c[a][b] x^a y^b with a, b <= k - 1."""

    def __init__(self, field: FieldSpec, coeffs):
        self.field = field
        k = field.k
        c = np.zeros((k, k), dtype=np.int64)
        coeffs = np.asarray(coeffs, dtype=np.int64)
        c[: coeffs.shape[0], : coeffs.shape[1]] = coeffs
        if c.min() < 0 or c.max() >= k:
            raise ValueError("coefficients must be field element indices")
        self.coeffs = c
        self.coeffs.setflags(write=False)
        nz = np.argwhere(c != 0)
        self.degree = int(nz.sum(axis=1).max()) if len(nz) else -1
        self._table = None

    @classmethod
    def linear(cls, field: FieldSpec, const: int, cx: int, cy: int) -> "BivariatePoly":
        c = np.zeros((2, 2), dtype=np.int64)
        c[0, 0], c[1, 0], c[0, 1] = const, cx, cy
        return cls(field, c)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BivariatePoly)
            and self.field is other.field
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self) -> str:
        terms = []
        for a, b in np.argwhere(self.coeffs != 0):
            terms.append(f"{self.coeffs[a, b]}*x^{a}*y^{b}")
        return f"BivariatePoly({' + '.join(terms) or '0'} over GF({self.field.k}))"

    def value_table(self) -> np.ndarray:
        """table[x, y] = f(x, y) for all field elements."""
        if self._table is None:
            F = self.field
            k = F.k
            xs = np.arange(k)
            powers = np.zeros((k, k), dtype=np.int64)  # powers[a, x] = x^a
            powers[0] = 1
            for a in range(1, k):
                powers[a] = F.mul(powers[a - 1], xs)
            out = np.zeros((k, k), dtype=np.int64)
            for a, b in np.argwhere(self.coeffs != 0):
                mono = F.mul(powers[a][:, None], powers[b][None, :])
                out = F.add(out, F.mul(int(self.coeffs[a, b]), mono))
            out.setflags(write=False)
            self._table = out
        return self._table

    def __call__(self, x, y):
        return self.field._ret(self.value_table()[x, y])

    def mul(self, other: "BivariatePoly") -> "BivariatePoly":
        """Product reduced with x^k = x, y^k = y, keeping exponents <= k-1."""
        F = self.field
        k = F.k
        out = np.zeros((k, k), dtype=np.int64)

        def red(e):
            return e if e < k else ((e - 1) % (k - 1)) + 1

        for a1, b1 in np.argwhere(self.coeffs != 0):
            for a2, b2 in np.argwhere(other.coeffs != 0):
                a, b = red(a1 + a2), red(b1 + b2)
                term = F.mul(int(self.coeffs[a1, b1]), int(other.coeffs[a2, b2]))
                out[a, b] = F.add(int(out[a, b]), term)
        return BivariatePoly(F, out)


@dataclass(frozen=True)
class LPolynomialFactor:
    i: int
    j: int
    perm: Perm
    poly: BivariatePoly

    @property
    def degree(self) -> int:
        return self.poly.degree


def l_polynomial(F: FieldSpec, pi: Perm, i: int, j: int) -> LPolynomialFactor:
    """(j - i)(y - pi(i)) - (pi(j) - pi(i))(x - i)."""
    dj = F.sub(j, i)
    dp = F.sub(pi[j], pi[i])
    const = F.sub(F.mul(dp, i), F.mul(dj, pi[i]))
    return LPolynomialFactor(i, j, tuple(pi), BivariatePoly.linear(F, const, F.neg(dp), dj))


def corresponding_permutation(F: FieldSpec, pi: Perm, i: int, j: int) -> Perm:
    """The affine map whose graph is the zero line of the L-polynomial."""
    if i == j:
        raise ValueError("need i != j")
    slope = F.div(F.sub(pi[j], pi[i]), F.sub(j, i))
    xs = np.arange(F.k)
    return tuple(int(v) for v in F.add(F.mul(slope, F.sub(xs, i)), pi[i]))


def _slope(F: FieldSpec, pi: Perm, a: int, b: int) -> int:
    return F.div(F.sub(pi[b], pi[a]), F.sub(b, a))


def cover_halfk(F: FieldSpec, pi: Perm) -> list[LPolynomialFactor]:
    """floor(k/2) L-factors whose product vanishes on the graph of pi."""
    k = F.k
    if k < 2:
        raise ValueError("need k >= 2")
    if k % 2 == 0:
        return [l_polynomial(F, pi, 2 * s, 2 * s + 1) for s in range(k // 2)]
    # odd k: some a sees two others along the same slope, so one line takes
    # three points; scan a, then the first b whose slope repeats
    for a in range(k):
        seen: dict[int, int] = {}
        hit = None
        for b in range(k):
            if b == a:
                continue
            s = _slope(F, pi, a, b)
            if s in seen:
                hit = (seen[s], b)
                break
            seen[s] = b
        if hit is not None:
            b1, b2 = hit
            break
    else:  # pragma: no cover
        raise AssertionError("no repeated slope found")
    rest = [c for c in range(k) if c not in (a, b1, b2)]
    factors = [l_polynomial(F, pi, a, b1)]
    factors += [l_polynomial(F, pi, rest[2 * s], rest[2 * s + 1]) for s in range(len(rest) // 2)]
    return factors


def cover_km2_anchored(F: FieldSpec, pi: Perm, a: int, b: int) -> list[LPolynomialFactor]:
    """k-2 L-factors vanishing on the graph of pi and nonzero at (a, b)."""
    k = F.k
    if k < 3:
        raise ValueError("need k >= 3")
    if pi[a] == b:
        raise ValueError("anchor lies on the graph of pi")
    if k == 3:
        for i, j in itertools.combinations(range(k), 2):
            f = l_polynomial(F, pi, i, j)
            if all(f.poly(c, pi[c]) == 0 for c in range(k)) and f.poly(a, b) != 0:
                return [f]
        raise AssertionError("no single-factor cover")  # pragma: no cover
    c = inverse(pi)[b]
    s, t = [x for x in range(k) if x not in (a, c)][:2]
    factors = [l_polynomial(F, pi, a, s), l_polynomial(F, pi, c, t)]
    factors += [l_polynomial(F, pi, a, j) for j in range(k) if j not in (s, t, a, c)]
    return factors


def covers(poly: BivariatePoly, pi: Perm) -> bool:
    return all(poly(c, pi[c]) == 0 for c in range(len(pi)))


def product_value(F: FieldSpec, factors: Sequence[LPolynomialFactor], x: int, y: int) -> int:
    out = 1
    for f in factors:
        out = F.mul(out, f.poly(x, y))
    return out


# -- whole-graph covers ----------------------------------------------------------------

@dataclass
class CoverPolynomial:
    field: FieldSpec
    labeling: SLabeling
    factors: list[tuple[int, int, BivariatePoly]]
    mode: str
    edge_factors: dict = field(default_factory=dict)

    @property
    def graph(self) -> Multigraph:
        return self.labeling.graph

    @property
    def n(self) -> int:
        return self.labeling.graph.n

    @property
    def degree(self) -> int:
        return sum(p.degree for _, _, p in self.factors)

    def evaluate(self, point: Sequence[int]) -> int:
        F = self.field
        out = 1
        for t, h, p in self.factors:
            out = F.mul(out, p(point[t], point[h]))
        return out

    def nonzero_mask(self, cols: np.ndarray) -> np.ndarray:
        """Rows of ``cols`` (one coloring per row) where the product is nonzero."""
        ok = np.ones(len(cols), dtype=bool)
        for t, h, p in self.factors:
            ok &= p.value_table()[cols[:, t], cols[:, h]] != 0
        return ok


def _check_normalized(L: SLabeling, tree: SpanningTree) -> None:
    ident = identity(L.k)
    for t, h, perms in L.arcs:
        if (min(t, h), max(t, h)) in tree.edges and any(p != ident for p in perms):
            raise ValueError(f"labeling is not the identity on tree edge {(t, h)}")


def graph_cover_polynomial(
    L: SLabeling,
    mode: str = "halfk",
    kappa: Sequence[int] | None = None,
    tree: SpanningTree | None = None,
) -> CoverPolynomial:
    """Tree edges give x_tail - x_head; every other edge component pi gives
    ``cover_halfk(pi)`` or, in anchored mode, ``cover_km2_anchored`` at
    (kappa(tail), kappa(head))."""
    g = L.graph
    if not g.simple:
        raise ValueError("cover polynomials are built for simple graphs")
    F = field_of_order(L.k)
    tree = tree if tree is not None else spanning_forest(g)
    _check_normalized(L, tree)
    if mode not in ("halfk", "anchored"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "anchored":
        if kappa is None:
            raise ValueError("anchored mode needs a coloring")
        if not L.is_proper(kappa):
            raise ValueError("anchor coloring is not proper for the labeling")
    tree_poly = BivariatePoly.linear(F, 0, 1, F.neg(1))
    factors = []
    edge_factors = {}
    for t, h, perms in L.arcs:
        if (min(t, h), max(t, h)) in tree.edges:
            factors.append((t, h, tree_poly))
            continue
        for idx, pi in enumerate(perms):
            if mode == "halfk":
                fs = cover_halfk(F, pi)
            else:
                fs = cover_km2_anchored(F, pi, kappa[t], kappa[h])
            edge_factors[(t, h, idx)] = fs
            factors.extend((t, h, f.poly) for f in fs)
    return CoverPolynomial(F, L, factors, mode, edge_factors)


def expected_cover_degree(n: int, m: int, k: int, mode: str, components: int = 1) -> int:
    per_edge = k // 2 if mode == "halfk" else k - 2
    return per_edge * (m - n + components) + n - components


def derived_multigraph_labeling(L: SLabeling, tree: SpanningTree | None = None) -> SLabeling:
    """Labeling of the multigraph with each non-tree edge repeated once per
    half-k factor, carrying the permutations matching those factors."""
    g = L.graph
    if not g.simple:
        raise ValueError("input graph must be simple")
    F = field_of_order(L.k)
    tree = tree if tree is not None else spanning_forest(g)
    _check_normalized(L, tree)
    arcs = []
    mult = {}
    for t, h, perms in L.arcs:
        if (min(t, h), max(t, h)) in tree.edges:
            arcs.append((t, h, perms))
            mult[(min(t, h), max(t, h))] = 1
            continue
        (pi,) = perms
        tup = tuple(corresponding_permutation(F, pi, f.i, f.j) for f in cover_halfk(F, pi))
        arcs.append((t, h, tup))
        mult[(min(t, h), max(t, h))] = len(tup)
    gp = Multigraph(g.n, tuple((u, v, mult[(u, v)]) for u, v, _ in g.edges))
    return SLabeling(gp, tuple(arcs), L.k)


def grid_colorings(n: int, k: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows are colorings in lexicographic order (vertex 0 most significant)."""
    stop = k**n if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    cols = np.empty((len(idx), n), dtype=np.int64)
    for v in range(n - 1, -1, -1):
        cols[:, v] = idx % k
        idx //= k
    return cols


def count_nonzeros(f: CoverPolynomial, budget: int | None = DEFAULT_GRID_BUDGET, chunk: int = 1 << 18) -> int:
    k, n = f.field.k, f.n
    total = k**n
    if budget is not None and total > budget:
        from .counting import BudgetExceeded

        raise BudgetExceeded(total, budget)
    count = 0
    for s in range(0, total, chunk):
        count += int(f.nonzero_mask(grid_colorings(n, k, s, min(total, s + chunk))).sum())
    return count


# -- Alon-Furedi ------------------------------------------------------------------------

def alon_furedi_exact(sizes: Sequence[int], d: int) -> int:
    """min prod q_i over 1 <= q_i <= sizes[i] with sum q_i >= sum(sizes) - d.

    Greedy: every q_i starts at 1 and the required surplus is poured into
    the largest sides first, each filled to capacity.
    """
    sizes = list(sizes)
    if any(s < 1 for s in sizes):
        raise ValueError("sizes must be positive")
    need = sum(sizes) - d - len(sizes)
    if need <= 0:
        return 1
    prod = 1
    for s in sorted(sizes, reverse=True):
        add = min(s - 1, need)
        prod *= 1 + add
        need -= add
    return prod


def alon_furedi_exhaustive(sizes: Sequence[int], d: int) -> int:
    target = sum(sizes) - d
    best = None
    for qs in itertools.product(*(range(1, s + 1) for s in sizes)):
        if sum(qs) >= target:
            p = 1
            for q in qs:
                p *= q
            if best is None or p < best:
                best = p
    return 1 if best is None else best


def cover_bound_chain(f: CoverPolynomial) -> tuple[int, BoundValue]:
    """(exact Alon-Furedi minimum, weak bound) for the full grid GF(k)^n."""
    k, n = f.field.k, f.n
    return alon_furedi_exact([k] * n, f.degree), alon_furedi_weak(n, k * n, k, f.degree)
