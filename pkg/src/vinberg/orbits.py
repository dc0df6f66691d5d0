"""Reflection representation: generators, relations, orbit balls, tilings.

Each facet pair (a_s, v_s) gives the projective reflection

    sigma_s = Id - v_s (x) a_s,        sigma_s[i][j] = delta_ij - v_s[i] a_s[j],

which fixes ker a_s pointwise and maps v_s to -v_s.  The group generated by
the sigma_s acts on the fundamental cone; the orbit of the cone tiles an
invariant convex domain.  Everything here is built by breadth-first search
over reduced words with exact (or quantized) matrix deduplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import ratlin
from .cartan import NEGATIVE, irreducible_components, witness_vector
from .polytope import CoxeterPolytope, _rank, enumerate_faces
from .scalars import EXACT, InputError

DEFAULT_MAX_ELEMENTS = 300000


@dataclass(frozen=True)
class OrbitBall:
    """Ball of radius `depth` in the generated group, as matrices.

    elements[i] acts on column vectors; words[i] is the generating word read
    left to right (elements[i] = sigma_{w0} ... sigma_{wk}); inverses[i] is
    the index of elements[i]^{-1} within the ball (balls are symmetric)."""

    elements: tuple
    words: tuple
    depths: tuple
    inverses: tuple
    depth: int

    def __len__(self):
        return len(self.elements)

    def count_at(self, depth):
        return sum(1 for d in self.depths if d == depth)


@dataclass(frozen=True)
class RepresentationReport:
    reduced: bool
    dual_reduced: bool
    cartan_irreducible: bool
    cartan_rank: int
    irreducible: bool


def _mat_mul(a, b):
    n = len(a)
    m = len(b[0])
    k = len(b)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def _mat_vec(m, v):
    return tuple(sum(r * x for r, x in zip(row, v)) for row in m)


def _vec_mat(v, m):
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def _identity(n, exact):
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def _key(m, exact):
    if exact:
        return m
    return tuple(tuple(round(float(x), 9) for x in row) for row in m)


def reflection(P: CoxeterPolytope, s: int):
    """Matrix of the reflection attached to facet s (columns convention)."""
    if not 0 <= s < P.n:
        raise InputError(f"facet index {s} out of range")
    dim = P.dim + 1
    v = P.polars[s]
    a = P.alphas[s]
    one = Fraction(1) if P.mode == EXACT else 1.0
    return tuple(
        tuple((one if i == j else 0 * one) - v[i] * a[j] for j in range(dim))
        for i in range(dim)
    )


def generators(P: CoxeterPolytope):
    return tuple(reflection(P, s) for s in range(P.n))


@dataclass(frozen=True)
class RelationCheck:
    s: int
    t: int
    order: float
    holds: bool | None  # None when the order is infinite (nothing to check)
    residual: float


def check_relations(P: CoxeterPolytope, tol=None):
    """Verify sigma_s^2 = Id and (sigma_s sigma_t)^{m_st} = Id for finite
    orders.  Exact mode compares matrices exactly; approx mode reports the
    max-norm residual against `tol` (default: the polytope's eps)."""
    if tol is None:
        tol = 0.0 if P.mode == EXACT else P.eps * 100
    gens = generators(P)
    ident = _identity(P.dim + 1, P.mode == EXACT)
    out = []
    for s in range(P.n):
        sq = _mat_mul(gens[s], gens[s])
        res = _residual(sq, ident)
        out.append(RelationCheck(s, s, 1, res <= tol, res))
    for s in range(P.n):
        for t in range(s + 1, P.n):
            m = P.cartan.orders[s][t]
            if m == math.inf:
                out.append(RelationCheck(s, t, math.inf, None, 0.0))
                continue
            prod = _mat_mul(gens[s], gens[t])
            power = ident
            for _ in range(int(m)):
                power = _mat_mul(power, prod)
            res = _residual(power, ident)
            out.append(RelationCheck(s, t, m, res <= tol, res))
    return out


def _residual(a, b):
    return max(abs(float(x - y)) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def expand_orbit(P: CoxeterPolytope, depth: int, max_elements=DEFAULT_MAX_ELEMENTS):
    """Breadth-first ball of the generated group up to word length `depth`.

    New elements are found by right-multiplication, so each element's word is
    reduced-on-the-right as visited; duplicate matrices are pruned, which
    quotients by all relations automatically."""
    exact = P.mode == EXACT
    gens = generators(P)
    ident = _identity(P.dim + 1, exact)
    elements = [ident]
    words = [()]
    depths = [0]
    seen = {_key(ident, exact): 0}
    frontier = [0]
    for level in range(1, depth + 1):
        nxt = []
        for idx in frontier:
            g = elements[idx]
            w = words[idx]
            for s in range(P.n):
                if w and w[-1] == s:
                    continue  # sigma_s^2 = Id: never extend by the same letter
                h = _mat_mul(g, gens[s])
                k = _key(h, exact)
                if k in seen:
                    continue
                if len(elements) >= max_elements:
                    raise InputError(
                        f"orbit ball exceeded {max_elements} elements at depth {level}"
                    )
                seen[k] = len(elements)
                elements.append(h)
                words.append(w + (s,))
                depths.append(level)
                nxt.append(len(elements) - 1)
        frontier = nxt
        if not frontier:
            break  # the whole group is finite and already enumerated
    inverses = []
    for w in words:
        inv = ident
        for s in reversed(w):
            inv = _mat_mul(inv, gens[s])
        inverses.append(seen.get(_key(inv, exact), -1))
    return OrbitBall(
        tuple(elements), tuple(words), tuple(depths), tuple(inverses), depth
    )


# ---------------------------------------------------------------------------
# invariant bilinear form


def invariant_form(P: CoxeterPolytope):
    """Symmetric bilinear form G with sigma_s^T G sigma_s = G for all s,
    normalized so the first nonzero entry is positive, or None.

    The compatibility constraints are G v_s = a_s^T for every facet (after
    scaling each a_s so a_s(v_s) = 2, as validated at build time); for a
    simplex with symmetric Cartan matrix the solution is alphas^T . V^{-1}.
    """
    dim = P.dim + 1
    # Unknown symmetric G, entries g_ij (i <= j); constraints G v_s = a_s^T.
    idx = {}
    for i in range(dim):
        for j in range(i, dim):
            idx[(i, j)] = len(idx)
    rows = []
    rhs = []
    exact = P.mode == EXACT
    for s in range(P.n):
        v = P.polars[s]
        a = P.alphas[s]
        for i in range(dim):
            row = [Fraction(0) if exact else 0.0] * len(idx)
            for j in range(dim):
                key = (i, j) if i <= j else (j, i)
                row[idx[key]] += v[j]
            rows.append(row)
            rhs.append(a[i])
    if exact:
        sol = ratlin.solve(rows, list(rhs))
    else:
        import numpy as np

        arr = np.array(rows, dtype=float)
        b = np.array(rhs, dtype=float)
        sol, res, rank, _ = np.linalg.lstsq(arr, b, rcond=None)
        if float(np.linalg.norm(arr @ sol - b)) > P.eps * 100:
            sol = None
        else:
            sol = list(sol)
    if sol is None:
        return None
    G = [[None] * dim for _ in range(dim)]
    for (i, j), k in idx.items():
        G[i][j] = sol[k]
        G[j][i] = sol[k]
    if all(abs(float(x)) == 0 for row in G for x in row):
        return None
    # Normalize the overall sign: prefer more positive than negative
    # directions (Lorentzian forms come out as (d, 1)); on a tie make the
    # first nonzero entry positive.
    pos, neg, _ = form_signature(G, eps=P.eps)
    flip = neg > pos
    if pos == neg:
        lead = next(x for row in G for x in row if abs(float(x)) > 0)
        flip = float(lead) < 0
    if flip:
        G = [[-x for x in row] for row in G]
    return tuple(tuple(row) for row in G)


def form_signature(G, eps=1e-9):
    """Signature (n_plus, n_minus, n_zero) by congruence diagonalization."""
    n = len(G)
    m = [list(row) for row in G]
    exact = all(isinstance(x, (int, Fraction)) for row in m for x in row)
    tol = 0 if exact else eps

    def nonzero(x):
        return abs(float(x)) > tol

    pos = neg = zero = 0
    live = list(range(n))
    while live:
        p = next((i for i in live if nonzero(m[i][i])), None)
        if p is None:
            # all live diagonal entries vanish; find an off-diagonal hyperbolic pair
            pair = next(
                (
                    (i, j)
                    for i in live
                    for j in live
                    if i < j and nonzero(m[i][j])
                ),
                None,
            )
            if pair is None:
                zero += len(live)
                break
            i, j = pair
            # congruence by adding row/col j to i produces a nonzero diagonal
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            continue
        d = m[p][p]
        if float(d) > 0:
            pos += 1
        else:
            neg += 1
        live.remove(p)
        for i in live:
            f = m[i][p] / d
            if f == 0:
                continue
            for k in range(n):
                m[i][k] -= f * m[p][k]
            for k in range(n):
                m[k][i] -= m[k][p] * f
    return (pos, neg, zero)


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class DomainApprox:
    ball: OrbitBall
    base_vertices: tuple  # vertex rays of the fundamental cone, cyclic order
    tiles: tuple  # per group element: tuple of image rays (cone vectors)
    covectors: tuple  # per group element: the pushed-forward supporting covector
    ell0: tuple  # base supporting covector (row), negative on every tile


def supporting_covector(P: CoxeterPolytope):
    """A covector ell0 = sum mu_s a_s with mu > 0 and mu^T A < 0.

    Exists precisely in negative type (mu is a positivity witness of A^T);
    by duality its orbit under the group stays in the dual cone, so each
    ell0 . gamma is <= 0 on every tile."""
    At = [[P.cartan.entries[t][s] for t in range(P.n)] for s in range(P.n)]
    from .cartan import CartanMatrix, classify_type

    AT = CartanMatrix(
        tuple(tuple(row) for row in At),
        P.cartan.orders,
        P.cartan.mode,
        P.cartan.eps,
        P.cartan.labels,
    )
    tt = classify_type(AT)
    if tt.overall != NEGATIVE:
        raise InputError(
            "a strictly supporting covector needs negative type "
            f"(got {tt.overall})"
        )
    w = witness_vector(AT, tt)
    mu = w.x
    ell = [sum(mu[s] * P.alphas[s][i] for s in range(P.n)) for i in range(P.dim + 1)]
    return tuple(ell), tuple(mu)


def _cone_vertices(P: CoxeterPolytope):
    """Vertex rays of the fundamental cone in a deterministic cyclic order
    (2D: by angle in the affine chart ell0 = -1; higher dim: lex order)."""
    verts = [f.witness for f in enumerate_faces(P) if f.dim == 0 and f.subset]
    if P.dim == 2 and len(verts) >= 3:
        ell, _ = supporting_covector(P)
        pts = []
        for w in verts:
            t = sum(float(l) * float(x) for l, x in zip(ell, w))
            pts.append(tuple(float(x) / (-t) for x in w))
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        order = sorted(
            range(len(verts)),
            key=lambda i: math.atan2(pts[i][1] - cy, pts[i][0] - cx),
        )
        verts = [verts[i] for i in order]
    return tuple(verts)


def domain_approx(P: CoxeterPolytope, depth: int, max_elements=DEFAULT_MAX_ELEMENTS):
    """Orbit tiling at the given depth together with pushed covectors.

    Each returned tile is the image of the fundamental cone's vertex rays;
    the covector ell0 . gamma^{-1} supports the image tile, and the whole
    family outer-approximates the invariant domain.  As a runtime guard every
    covector is checked nonpositive on every tile ray."""
    ball = expand_orbit(P, depth, max_elements)
    ell0, _ = supporting_covector(P)
    base = _cone_vertices(P)
    tiles = []
    covs = []
    for i, g in enumerate(ball.elements):
        tiles.append(tuple(_mat_vec(g, v) for v in base))
        inv = ball.inverses[i]
        covs.append(_vec_mat(ell0, ball.elements[inv]))
    import numpy as np

    rays = np.array(
        [[float(x) for x in ray] for tile in tiles for ray in tile], dtype=float
    ).T  # dim x (tiles * verts)
    tol = 1e-12 if P.mode == EXACT else 1e-7
    cov_arr = np.array([[float(c) for c in cov] for cov in covs], dtype=float)
    scale = np.maximum(1.0, np.abs(cov_arr).max(axis=1))
    for start in range(0, len(covs), 256):
        block = cov_arr[start : start + 256]
        vals = block @ rays
        if (vals > tol * scale[start : start + 256, None]).any():
            raise ArithmeticError(
                "pushed covector fails to support the tiling; duality guard tripped"
            )
    return DomainApprox(ball, base, tuple(tiles), tuple(covs), ell0)


def representation_report(P: CoxeterPolytope) -> RepresentationReport:
    dim = P.dim + 1
    reduced = _rank(list(P.alphas), P.mode, P.eps) == dim
    dual_reduced = _rank(list(P.polars), P.mode, P.eps) == dim
    comps = irreducible_components(P.cartan)
    cr = _rank(P.cartan.rows(), P.mode, P.eps)
    irreducible = len(comps) == 1 and cr == dim and reduced and dual_reduced
    return RepresentationReport(reduced, dual_reduced, len(comps) == 1, cr, irreducible)


def check_properness(P: CoxeterPolytope, depth=6, max_elements=DEFAULT_MAX_ELEMENTS):
    """(flag, worst): the supporting covector must be strictly negative on
    every orbit image of the interior point; `worst` is the max value seen
    (properness evidence when < 0)."""
    ball = expand_orbit(P, depth, max_elements)
    ell0, _ = supporting_covector(P)
    worst = -math.inf
    for g in ball.elements:
        x = _mat_vec(g, P.interior)
        val = float(sum(l * xi for l, xi in zip(ell0, x)))
        worst = max(worst, val)
    return (worst < 0, worst)
