"""Coxeter polytopes: facet covector / polar pairs and their face lattice.

A Coxeter polytope is a projective polytope P = P(D), D = {x : a_s(x) <= 0},
together with one polar v_s per facet with a_s(v_s) = 2, such that the
pairing matrix A_st = a_s(v_t) is a valid Cartan matrix.  The preferred lift
D is a sharp convex cone in V = R^(d+1); faces are encoded by the set of
facets containing them.

A subset S' of facets defines a face exactly when the system

    a_s(x) = 0 (s in S'),   a_s(x) < 0 (s not in S')

has a solution; feasibility is decided by exact rational LP (approx mode
runs the same pivoting over floats and re-verifies the witness).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ratlin
from .cartan import (
    CartanMatrix,
    MIXED,
    NEGATIVE,
    POSITIVE,
    TypeTag,
    ZERO,
    classify_type,
    irreducible_components,
    restrict,
    validate_cartan,
)
from .linprog import OPTIMAL, maximize_with_free_vars
from .scalars import APPROX, DEFAULT_EPS, EXACT, InputError, all_exact

DEFAULT_MAX_FACETS = 16


class PolytopeError(InputError):
    pass


class NotReducedError(PolytopeError):
    pass


class EmptyInteriorError(PolytopeError):
    pass


class RedundantFacetError(PolytopeError):
    pass


@dataclass(frozen=True)
class CoxeterPolytope:
    alphas: tuple  # facet covectors, rows of length d+1
    polars: tuple  # polar vectors
    cartan: CartanMatrix
    mode: str
    eps: float
    labels: tuple
    interior: tuple  # cached interior point of the preferred lift

    @property
    def n(self):
        return len(self.alphas)

    @property
    def dim(self):
        return len(self.alphas[0]) - 1


@dataclass(frozen=True)
class FaceDescriptor:
    subset: tuple  # facet indices whose hyperplanes contain the face
    dim: int  # projective dimension; d for the interior, -1 for the empty face
    witness: tuple | None  # cone point with active set exactly `subset`
    link_cartan: CartanMatrix
    link_type: TypeTag


@dataclass(frozen=True)
class FaceClass:
    tag: str  # positive | zero | negative | mixed
    parabolic: bool | None
    loxodromic: bool | None
    link_dim: int
    cartan_rank: int


@dataclass(frozen=True)
class JoinStructure:
    factors: tuple  # CoxeterPolytope per block
    blocks: tuple  # facet index tuples per factor
    basis: tuple  # columns spanning each factor subspace, concatenated


# ---------------------------------------------------------------------------
# mode-generic linear algebra


def _kernel(rows, mode, eps):
    if not rows:
        return None  # full space
    if mode == EXACT:
        return ratlin.kernel_basis([list(r) for r in rows])
    a = np.array(rows, dtype=float)
    _, s, vh = np.linalg.svd(a)
    tol = max(a.shape) * (s[0] if len(s) else 0.0) * 1e-13 + eps
    null = [vh[i] for i in range(vh.shape[0]) if i >= len(s) or s[i] <= tol]
    return [list(v) for v in null]


def _rank(rows, mode, eps):
    if not rows:
        return 0
    if mode == EXACT:
        return ratlin.rank([list(r) for r in rows])
    a = np.array(rows, dtype=float)
    s = np.linalg.svd(a, compute_uv=False)
    if len(s) == 0 or s[0] == 0.0:
        return 0
    tol = max(a.shape) * s[0] * 1e-13 + eps
    return int((s > tol).sum())


def _dot(row, vec):
    return sum(a * b for a, b in zip(row, vec))


# ---------------------------------------------------------------------------
# face feasibility LP


def face_witness(alphas, subset, mode, eps):
    """Solve the defining system for `subset`; returns a cone point with
    active set exactly `subset`, or None.  Standalone so that it can be
    cross-checked against brute-force cone enumeration."""
    n = len(alphas)
    subset = frozenset(subset)
    strict = [s for s in range(n) if s not in subset]
    kernel = _kernel([alphas[s] for s in subset], mode, eps)
    if kernel is None:
        dim = len(alphas[0])
        kernel = ratlin.identity(dim) if mode == EXACT else [list(r) for r in np.eye(dim)]
    if not kernel:
        return None
    k = len(kernel)
    # Reduced system: beta rows act on kernel coordinates z.
    beta = [[_dot(alphas[s], kv) for kv in kernel] for s in strict]
    tol = 0.0 if mode == EXACT else eps
    for row in beta:
        if all(abs(float(x)) <= tol for x in row):
            return None  # this covector vanishes on the whole kernel
    # maximize t subject to beta.z <= -t, |z_i| <= 1, t <= 1  (z free, t >= 0)
    nv = k + 1
    a_ub = []
    b_ub = []
    for row in beta:
        a_ub.append(list(row) + [1])
        b_ub.append(0)
    for i in range(k):
        e = [0] * nv
        e[i] = 1
        a_ub.append(list(e))
        b_ub.append(1)
        a_ub.append([-x for x in e])
        b_ub.append(1)
    a_ub.append([0] * k + [1])
    b_ub.append(1)
    c = [0] * k + [1]
    lp_tol = None if mode == EXACT else eps * 1e-3
    status, x, value = maximize_with_free_vars(c, a_ub, b_ub, [], [], nv, tol=lp_tol)
    if status != OPTIMAL or value is None or not value > tol:
        return None
    z = x[:k]
    point = [sum(kernel[j][i] * z[j] for j in range(k)) for i in range(len(alphas[0]))]
    # Re-verify the witness by substitution (meaningful in approx mode).
    for s in strict:
        if not float(_dot(alphas[s], point)) < -tol:
            return None
    return point


# ---------------------------------------------------------------------------
# construction


def build_polytope(pairs, labels=None, mode=None, eps=DEFAULT_EPS):
    """Build and validate a Coxeter polytope from (covector, polar) pairs.

    Checks: a_s(v_s) = 2, the pairing is a valid Cartan matrix, the cone has
    nonempty interior, no covector is redundant, and the representation is
    reduced (the covectors span the dual space).
    """
    alphas = [list(a) for a, _ in pairs]
    polars = [list(v) for _, v in pairs]
    n = len(alphas)
    if n == 0:
        raise PolytopeError("a polytope needs at least one facet")
    dim = len(alphas[0])
    for vec in alphas + polars:
        if len(vec) != dim:
            raise PolytopeError("inconsistent vector lengths")

    exact = all_exact(alphas) and all_exact(polars)
    if mode is None:
        mode = EXACT if exact else APPROX
    if mode == EXACT and not exact:
        raise PolytopeError("exact mode requested but coordinates are not rational")
    if mode == EXACT:
        alphas = [[Fraction(x) for x in row] for row in alphas]
        polars = [[Fraction(x) for x in row] for row in polars]
    else:
        alphas = [[float(x) for x in row] for row in alphas]
        polars = [[float(x) for x in row] for row in polars]

    pairing = [[_dot(alphas[s], polars[t]) for t in range(n)] for s in range(n)]
    tol = 0.0 if mode == EXACT else eps
    for s in range(n):
        if abs(float(pairing[s][s] - 2)) > tol:
            raise PolytopeError(f"a_s(v_s) = {pairing[s][s]} != 2 at facet {s}")
    A = validate_cartan(pairing, labels=labels, mode=mode, eps=eps)

    if _rank(alphas, mode, eps) != dim:
        raise NotReducedError(
            "covectors do not span the dual space (representation not reduced)"
        )
    interior = face_witness(alphas, (), mode, eps)
    if interior is None:
        raise EmptyInteriorError("the cone {a_s <= 0} has empty interior")
    for s in range(n):
        if face_witness(alphas, (s,), mode, eps) is None:
            raise RedundantFacetError(f"covector {s} does not define a facet")

    return CoxeterPolytope(
        tuple(tuple(r) for r in alphas),
        tuple(tuple(r) for r in polars),
        A,
        mode,
        eps,
        A.labels,
        tuple(interior),
    )


def tits_polytope(A: CartanMatrix) -> CoxeterPolytope:
    """Canonical simplex of a Cartan matrix: covectors the dual canonical
    basis of R^S, polars the columns of A."""
    n = A.n
    one = Fraction(1) if A.mode == EXACT else 1.0
    zero = Fraction(0) if A.mode == EXACT else 0.0
    pairs = []
    for s in range(n):
        alpha = [one if i == s else zero for i in range(n)]
        polar = [A.entries[i][s] for i in range(n)]
        pairs.append((alpha, polar))
    return build_polytope(pairs, labels=A.labels, mode=A.mode, eps=A.eps)


# ---------------------------------------------------------------------------
# faces


def defines_face(P: CoxeterPolytope, subset) -> FaceDescriptor | None:
    """Face descriptor for the facet subset, or None if it defines no face.

    The empty set describes the interior; the full set always describes the
    empty face (dimension -1).
    """
    subset = tuple(sorted(set(subset)))
    for s in subset:
        if not 0 <= s < P.n:
            raise InputError(f"facet index {s} out of range")
    link_cartan = restrict(P.cartan, subset)
    link_type = classify_type(link_cartan)
    if len(subset) == P.n:
        return FaceDescriptor(subset, -1, None, link_cartan, link_type)
    if not subset:
        return FaceDescriptor(subset, P.dim, P.interior, link_cartan, link_type)
    witness = face_witness(P.alphas, subset, P.mode, P.eps)
    if witness is None:
        return None
    r = _rank([P.alphas[s] for s in subset], P.mode, P.eps)
    return FaceDescriptor(subset, P.dim - r, tuple(witness), link_cartan, link_type)


def enumerate_faces(P: CoxeterPolytope, max_facets=DEFAULT_MAX_FACETS):
    """All proper faces plus the interior, ordered by (size, lex).

    The empty face is implicit except in the degenerate d = 0 case, where it
    is the only other stratum and is reported for visibility.
    """
    if P.n > max_facets:
        raise PolytopeError(
            f"face enumeration over {P.n} facets exceeds the cap {max_facets}"
        )
    out = [defines_face(P, ())]
    indices = range(P.n)
    for size in range(1, P.n):
        for subset in itertools.combinations(indices, size):
            desc = defines_face(P, subset)
            if desc is not None:
                out.append(desc)
    if P.dim == 0:
        out.append(defines_face(P, tuple(indices)))
    return out


def classify_face(P: CoxeterPolytope, subset) -> FaceClass:
    """Elliptic / parabolic / loxodromic trichotomy of a face's link."""
    subset = tuple(sorted(set(subset)))
    link_cartan = restrict(P.cartan, subset)
    tt = classify_type(link_cartan)
    link_dim = _rank([P.alphas[s] for s in subset], P.mode, P.eps) - 1
    cr = _rank(link_cartan.rows(), P.mode, P.eps)
    parabolic = (cr == link_dim) if tt.overall == ZERO else None
    loxodromic = (cr == link_dim + 1) if tt.overall == NEGATIVE else None
    return FaceClass(tt.overall, parabolic, loxodromic, link_dim, cr)


def link(P: CoxeterPolytope, subset) -> CoxeterPolytope:
    """Link polytope of the face defined by `subset`, in V / span(face).

    Coordinates on the quotient are the values of a maximal independent
    family of the face's covectors; in those coordinates the new polars are
    columns of the restricted Cartan matrix.
    """
    subset = tuple(sorted(set(subset)))
    desc = defines_face(P, subset)
    if desc is None:
        raise PolytopeError(f"{subset} does not define a face")
    if not subset:
        return P
    rows = [list(P.alphas[s]) for s in subset]
    if P.mode == EXACT:
        _, pivots = ratlin.rref(ratlin.transpose(rows))
        basis_idx = pivots  # indices into `subset` of independent covectors
    else:
        a = np.array(rows, dtype=float).T
        q, r, piv = _qr_pivot(a)
        basis_idx = piv
    basis_rows = [rows[i] for i in basis_idx]
    pairs = []
    for pos, s in enumerate(subset):
        if P.mode == EXACT:
            coeff = ratlin.solve(ratlin.transpose(basis_rows), list(P.alphas[s]))
        else:
            coeff, *_ = np.linalg.lstsq(
                np.array(basis_rows, dtype=float).T, np.array(P.alphas[s], dtype=float),
                rcond=None,
            )
            coeff = list(coeff)
        if coeff is None:
            raise PolytopeError("face covector outside the span of the basis")
        polar = [_dot(basis_rows[j], P.polars[s]) for j in range(len(basis_rows))]
        pairs.append((coeff, polar))
    return build_polytope(
        pairs,
        labels=[P.labels[s] for s in subset],
        mode=P.mode,
        eps=P.eps,
    )


def _qr_pivot(a):
    """Column-pivoted Gram-Schmidt returning independent column indices."""
    a = a.copy()
    m, n = a.shape
    piv = []
    used = np.zeros(n, dtype=bool)
    basis = []
    for _ in range(min(m, n)):
        norms = [
            (np.linalg.norm(a[:, j]), j) for j in range(n) if not used[j]
        ]
        norm, j = max(norms)
        if norm < 1e-12:
            break
        used[j] = True
        piv.append(j)
        q = a[:, j] / norm
        basis.append(q)
        for jj in range(n):
            if not used[jj]:
                a[:, jj] -= q * (q @ a[:, jj])
    return basis, a, piv


# ---------------------------------------------------------------------------
# the bigger-face lemma


def bigger_face(P: CoxeterPolytope, t1, t2):
    """Given disjoint T1, T2 with T1 orthogonal to T2 and T1 u T2 a face,
    return descriptors for T1 u T2^0, T1 u T2^0 u T2^+, T1 u T2^0 u T2^-.

    These are guaranteed faces; the LP re-derives each witness, and a
    failure is a hard error (it would falsify the lemma)."""
    t1 = tuple(sorted(set(t1)))
    t2 = tuple(sorted(set(t2)))
    if set(t1) & set(t2):
        raise InputError("T1 and T2 must be disjoint")
    tol = 0.0 if P.mode == EXACT else P.eps
    for s in t1:
        for t in t2:
            if abs(float(P.cartan.entry(s, t))) > tol:
                raise InputError("T1 must be orthogonal to T2")
    if defines_face(P, t1 + t2) is None:
        raise InputError("T1 u T2 does not define a face")
    sub = restrict(P.cartan, t2)
    tt = classify_type(sub)
    parts = {POSITIVE: [], ZERO: [], NEGATIVE: []}
    for block in tt.blocks:
        parts[block.tag].extend(t2[i] for i in block.indices)
    zero = tuple(sorted(set(t1) | set(parts[ZERO])))
    plus = tuple(sorted(set(zero) | set(parts[POSITIVE])))
    minus = tuple(sorted(set(zero) | set(parts[NEGATIVE])))
    out = []
    for cand in (zero, plus, minus):
        desc = defines_face(P, cand)
        if desc is None:
            raise ArithmeticError(
                f"bigger-face candidate {cand} failed the face LP; "
                "lemma and solver disagree"
            )
        out.append(desc)
    return tuple(out)


# ---------------------------------------------------------------------------
# joins


def join(P: CoxeterPolytope, Q: CoxeterPolytope) -> CoxeterPolytope:
    """Join of two Coxeter polytopes on the direct sum of their spaces."""
    if P.mode != Q.mode:
        raise InputError("cannot join polytopes of different modes")
    dp = P.dim + 1
    dq = Q.dim + 1
    zero = Fraction(0) if P.mode == EXACT else 0.0
    pairs = []
    for s in range(P.n):
        pairs.append(
            (list(P.alphas[s]) + [zero] * dq, list(P.polars[s]) + [zero] * dq)
        )
    for s in range(Q.n):
        pairs.append(
            ([zero] * dp + list(Q.alphas[s]), [zero] * dp + list(Q.polars[s]))
        )
    labels = [f"L.{x}" for x in P.labels] + [f"R.{x}" for x in Q.labels]
    return build_polytope(pairs, labels=labels, mode=P.mode, eps=max(P.eps, Q.eps))


def decompose(P: CoxeterPolytope):
    """Split P as a join along the finest block decomposition of its Cartan
    matrix, or return None when the subspaces do not decompose.

    For each Cartan block S_i the only candidate subspace is
    W_i = the common kernel of the other blocks' covectors; the polars of S_i
    always lie in W_i, so P is a join exactly when the W_i sum to V.
    """
    comps = irreducible_components(P.cartan)
    if len(comps) <= 1:
        return None
    dim = P.dim + 1
    bases = []
    for comp in comps:
        others = [P.alphas[s] for s in range(P.n) if s not in comp]
        basis = _kernel(others, P.mode, P.eps)
        bases.append(basis if basis is not None else [])
    if sum(len(b) for b in bases) != dim:
        return None
    # Change of basis: columns are the W_i bases in block order.
    cols = [vec for basis in bases for vec in basis]
    T = [[cols[j][i] for j in range(dim)] for i in range(dim)]
    if _rank(T, P.mode, P.eps) != dim:
        return None  # subspaces overlap: the sum is not direct
    if P.mode == EXACT:
        Tinv = ratlin.inverse(T)
    else:
        Tinv = np.linalg.inv(np.array(T, dtype=float)).tolist()
    factors = []
    offset = 0
    tol = 0.0 if P.mode == EXACT else 1e-8
    for comp, basis in zip(comps, bases):
        k = len(basis)
        pairs = []
        for s in comp:
            alpha_t = [_dot(P.alphas[s], col) for col in cols]
            polar_t = [_dot(row, P.polars[s]) for row in Tinv]
            for j, val in enumerate(alpha_t):
                if not offset <= j < offset + k and abs(float(val)) > tol:
                    raise ArithmeticError("covector support leaks across blocks")
            for j, val in enumerate(polar_t):
                if not offset <= j < offset + k and abs(float(val)) > tol:
                    raise ArithmeticError("polar support leaks across blocks")
            pairs.append(
                (alpha_t[offset : offset + k], polar_t[offset : offset + k])
            )
        factors.append(
            build_polytope(
                pairs,
                labels=[P.labels[s] for s in comp],
                mode=P.mode,
                eps=P.eps,
            )
        )
        offset += k
    return JoinStructure(tuple(factors), tuple(comps), tuple(tuple(c) for c in cols))


# ---------------------------------------------------------------------------
# perfection predicates


def _vertices(P: CoxeterPolytope, max_facets=DEFAULT_MAX_FACETS):
    return [f for f in enumerate_faces(P, max_facets) if f.dim == 0 and f.subset]


def is_perfect(P: CoxeterPolytope, max_facets=DEFAULT_MAX_FACETS):
    """(flag, offending vertices): perfect when every vertex link is of
    positive type (elliptic)."""
    bad = tuple(
        v for v in _vertices(P, max_facets) if v.link_type.overall != POSITIVE
    )
    return (not bad, bad)


def is_quasiperfect(P: CoxeterPolytope, max_facets=DEFAULT_MAX_FACETS):
    """(flag, offending vertices): vertices must be elliptic or parabolic."""
    bad = []
    for v in _vertices(P, max_facets):
        if v.link_type.overall == POSITIVE:
            continue
        fc = classify_face(P, v.subset)
        if fc.tag == ZERO and fc.parabolic:
            continue
        bad.append(v)
    return (not bad, tuple(bad))


def is_2perfect(P: CoxeterPolytope, max_facets=DEFAULT_MAX_FACETS):
    """(flag, offending vertices): every vertex link must be perfect."""
    bad = []
    for v in _vertices(P, max_facets):
        link_poly = link(P, v.subset)
        ok, _ = is_perfect(link_poly, max_facets)
        if not ok:
            bad.append(v)
    return (not bad, tuple(bad))
