"""Minimal degree of polynomials over GF(k) vanishing on the graph of a
permutation, optionally required to be nonzero at one extra point.

Polynomials live in the space spanned by x^a y^b with a, b <= k-1, where a
nonzero coefficient vector is a nonzero function on GF(k)^2. Existence of a
cover of degree <= d is a rank question about the matrix evaluating those
monomials at the k graph points.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .covering import BivariatePoly, LPolynomialFactor, l_polynomial
from .field import FieldSpec, make_field
from .labelings import Perm, affine_group, compose

DEFAULT_SEARCH_BUDGET = 10**7


@dataclass
class DegreeSearchResult:
    perm: Perm
    degree: int
    mode: str  # general | anchored | product-of-L | product-of-L-anchored
    anchor: tuple[int, int] | None = None
    witness: object = None  # BivariatePoly, or a list of LPolynomialFactor
    extra: dict = field(default_factory=dict)

    def witness_poly(self, F: FieldSpec) -> BivariatePoly:
        if isinstance(self.witness, BivariatePoly):
            return self.witness
        out = BivariatePoly(F, [[1]])
        for f in self.witness:
            out = out.mul(f.poly)
        return out

    def to_dict(self) -> dict:
        from .labelings import format_perm

        d = {
            "mode": self.mode,
            "perm": format_perm(self.perm),
            "anchor": list(self.anchor) if self.anchor else None,
            "degree": self.degree,
        }
        if isinstance(self.witness, BivariatePoly):
            d["witness"] = [[int(a), int(b), int(self.witness.coeffs[a, b])] for a, b in np.argwhere(self.witness.coeffs != 0)]
        elif self.witness is not None:
            d["witness"] = [[f.i, f.j] for f in self.witness]
        d.update(self.extra)
        return d


# -- linear algebra over GF(k) --------------------------------------------------------

def rref(F: FieldSpec, A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; the pivot in each column is the first
    nonzero entry at or below the current row."""
    A = np.array(A, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = F.mul(F.inv(int(A[r, c])), A[r])
        col = A[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            A[hit] = F.sub(A[hit], F.mul(col[hit][:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: FieldSpec, A) -> int:
    return len(rref(F, A)[1])


def nullspace(F: FieldSpec, A) -> list[np.ndarray]:
    A = np.asarray(A, dtype=np.int64)
    R, pivots = rref(F, A)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(int(R[i, f]))
        basis.append(v)
    return basis


# -- monomial evaluation ----------------------------------------------------------------

def monomials(k: int, d: int) -> list[tuple[int, int]]:
    """x^a y^b with a, b <= k-1 and a + b <= d, by total degree then a."""
    return [(a, t - a) for t in range(d + 1) for a in range(t + 1) if a < k and t - a < k]


def _powers(F: FieldSpec) -> np.ndarray:
    k = F.k
    pw = np.zeros((k, k), dtype=np.int64)  # pw[a, x] = x^a
    pw[0] = 1
    xs = np.arange(k)
    for a in range(1, k):
        pw[a] = F.mul(pw[a - 1], xs)
    return pw


def evaluation_matrix(F: FieldSpec, points, mons) -> np.ndarray:
    pw = _powers(F)
    xs = np.array([p[0] for p in points], dtype=np.int64)
    ys = np.array([p[1] for p in points], dtype=np.int64)
    A = np.array([a for a, _ in mons], dtype=np.int64)
    B = np.array([b for _, b in mons], dtype=np.int64)
    return F.mul(pw[A][:, xs].T, pw[B][:, ys].T)


def _poly_from_vector(F: FieldSpec, mons, v) -> BivariatePoly:
    c = np.zeros((F.k, F.k), dtype=np.int64)
    for (a, b), x in zip(mons, v):
        c[a, b] = x
    return BivariatePoly(F, c)


def _graph_points(pi: Perm) -> list[tuple[int, int]]:
    return [(c, pi[c]) for c in range(len(pi))]


def _has_cover(F, pi, d, anchor):
    mons = monomials(F.k, d)
    E = evaluation_matrix(F, _graph_points(pi), mons)
    if anchor is None:
        return rank(F, E) < len(mons)
    Ea = np.vstack([E, evaluation_matrix(F, [anchor], mons)])
    return rank(F, Ea) > rank(F, E)


def _search(F: FieldSpec, pi: Perm, anchor) -> tuple[int, BivariatePoly]:
    k = F.k
    if len(pi) != k:
        raise ValueError("permutation size does not match the field")
    # y - p(x) with p interpolating pi always works at degree k - 1
    lo, hi = 1, max(1, k - 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_cover(F, pi, mid, anchor):
            hi = mid
        else:
            lo = mid + 1
    mons = monomials(k, lo)
    E = evaluation_matrix(F, _graph_points(pi), mons)
    basis = nullspace(F, E)
    if anchor is not None:
        ev = evaluation_matrix(F, [anchor], mons)[0]
        basis = [v for v in basis if _dot(F, ev, v) != 0]
    if not basis:
        raise AssertionError("no witness in the kernel")  # pragma: no cover
    return lo, _poly_from_vector(F, mons, basis[0])


def _dot(F: FieldSpec, a, b) -> int:
    out = 0
    for x in F.mul(a, b):
        out = F.add(out, int(x))
    return out


def min_cover_degree(F: FieldSpec, pi: Perm) -> DegreeSearchResult:
    d, w = _search(F, tuple(pi), None)
    return DegreeSearchResult(tuple(pi), d, "general", None, w)


def min_cover_degree_anchored(F: FieldSpec, pi: Perm, a: int, b: int) -> DegreeSearchResult:
    if pi[a] == b:
        raise ValueError("anchor lies on the graph of pi")
    d, w = _search(F, tuple(pi), (a, b))
    return DegreeSearchResult(tuple(pi), d, "anchored", (a, b), w)


def check_witness(F: FieldSpec, res: DegreeSearchResult) -> bool:
    """Re-evaluate the witness: vanishes on the graph, nonzero at the anchor,
    degree as reported."""
    poly = res.witness_poly(F)
    if any(poly(c, res.perm[c]) != 0 for c in range(F.k)):
        return False
    if res.anchor is not None and poly(*res.anchor) == 0:
        return False
    if isinstance(res.witness, BivariatePoly):
        return poly.degree == res.degree
    return len(res.witness) == res.degree and poly.degree <= res.degree


# -- products of L-polynomials -----------------------------------------------------------

def candidate_lines(F: FieldSpec, pi: Perm, anchor=None) -> list[tuple[frozenset, LPolynomialFactor]]:
    """Distinct lines through two graph points, as (covered points, factor),
    skipping lines through the anchor."""
    seen = {}
    for i, j in itertools.combinations(range(F.k), 2):
        f = l_polynomial(F, pi, i, j)
        pts = frozenset(c for c in range(F.k) if f.poly(c, pi[c]) == 0)
        if pts in seen:
            continue
        if anchor is not None and f.poly(*anchor) == 0:
            continue
        seen[pts] = f
    return list(seen.items())


def min_cover_degree_product_of_L(F: FieldSpec, pi: Perm, anchor=None) -> DegreeSearchResult:
    """Fewest L-factors covering the graph of pi (branch and bound set cover)."""
    pi = tuple(pi)
    k = F.k
    if anchor is not None and pi[anchor[0]] == anchor[1]:
        raise ValueError("anchor lies on the graph of pi")
    lines = candidate_lines(F, pi, anchor)
    by_point = {c: sorted((ln for ln in lines if c in ln[0]), key=lambda ln: -len(ln[0])) for c in range(k)}
    biggest = max(len(p) for p, _ in lines)
    best: list = [k + 1, None]

    def rec(uncovered: frozenset, chosen: list):
        if not uncovered:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        if len(chosen) + math.ceil(len(uncovered) / biggest) >= best[0]:
            return
        c = min(uncovered)
        for pts, f in by_point[c]:
            chosen.append(f)
            rec(uncovered - pts, chosen)
            chosen.pop()

    rec(frozenset(range(k)), [])
    mode = "product-of-L" if anchor is None else "product-of-L-anchored"
    return DegreeSearchResult(pi, best[0], mode, anchor, best[1])


# -- sweeps over permutations -------------------------------------------------------------

def affine_orbit_reps(F: FieldSpec) -> list[Perm]:
    """One permutation per orbit of pi -> lam . pi . mu, lam and mu affine;
    representatives are lexicographically least."""
    aff = list(affine_group(F))
    seen: set[Perm] = set()
    reps = []
    for pi in itertools.permutations(range(F.k)):
        if pi in seen:
            continue
        reps.append(pi)
        for lam in aff:
            left = compose(lam, pi)
            for mu in aff:
                seen.add(compose(left, mu))
    return reps


def remark_family_perm(p: int) -> Perm:
    """1 0 2 3 ... (p-1): the transposition of 0 and 1."""
    return (1, 0) + tuple(range(2, p))


def _worst_for(args):
    p, r, pi, anchored = args
    F = make_field(p, r)
    if not anchored:
        return min_cover_degree(F, pi).degree, [(pi, None)]
    best, arg = -1, []
    for a in range(F.k):
        for b in range(F.k):
            if pi[a] == b:
                continue
            d = min_cover_degree_anchored(F, pi, a, b).degree
            if d > best:
                best, arg = d, [(pi, (a, b))]
            elif d == best:
                arg.append((pi, (a, b)))
    return best, arg


def worst_case_degree(F: FieldSpec, anchored: bool = False, *, dedup: bool = True, jobs: int = 1, budget: int | None = DEFAULT_SEARCH_BUDGET):
    """max over permutations (and anchors) of the minimal cover degree.

    Returns (max degree, list of (perm, anchor) attaining it). With dedup the
    sweep runs over affine double-coset representatives only.
    """
    k = F.k
    cost = math.factorial(k) * ((k * k - k) if anchored else 1)
    if budget is not None and cost > budget:
        from .counting import BudgetExceeded

        raise BudgetExceeded(cost, budget)
    perms = affine_orbit_reps(F) if dedup else list(itertools.permutations(range(k)))
    args = [(F.p, F.r, pi, anchored) for pi in perms]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worst_for, args, chunksize=16))
    else:
        results = [_worst_for(a) for a in args]
    best, arg = -1, []
    for d, witnesses in results:
        if d > best:
            best, arg = d, list(witnesses)
        elif d == best:
            arg.extend(witnesses)
    return best, arg
