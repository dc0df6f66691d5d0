"""Hilbert metric, Finsler norm, Busemann density, Monte-Carlo volumes.

All geometry happens in an affine chart {ell = -1} of the projective space:
a properly convex domain becomes a bounded open convex body, chords of the
body give the Hilbert distance via the cross-ratio, and the Busemann volume
integrates the reciprocal Lebesgue measure of the Finsler unit balls.

Bodies come in two boundary representations — halfspace lists (polytopes,
orbit hulls, outer cut systems) and quadrics (invariant-form conics) — plus
intersections of those.  Everything is vectorized over sample points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orbits import DomainApprox, domain_approx, invariant_form, form_signature, supporting_covector
from .polytope import CoxeterPolytope, enumerate_faces
from .scalars import InputError

_UNIT_BALL_VOLUME = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}
_HIT_CHUNK = 1024


class GeometryError(InputError):
    pass


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class Chart:
    """Affine chart {x : ell(x) = -1} with coordinates along `basis`."""

    ell: np.ndarray  # (d+1,)
    origin: np.ndarray  # (d+1,), ell(origin) = -1
    basis: np.ndarray  # (d+1, d), columns span ker ell

    @property
    def dim(self):
        return self.basis.shape[1]

    def to_chart(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        denom = -(pts @ self.ell)
        if (denom <= 0).any():
            raise GeometryError("point outside the chart (ell >= 0)")
        affine = pts / denom[:, None] - self.origin
        sol, *_ = np.linalg.lstsq(self.basis, affine.T, rcond=None)
        out = sol.T
        return out if np.asarray(points).ndim > 1 else out[0]

    def from_chart(self, coords):
        U = np.atleast_2d(np.asarray(coords, dtype=float))
        out = self.origin[None, :] + U @ self.basis.T
        return out if np.asarray(coords).ndim > 1 else out[0]

    def halfspace(self, covector):
        """Chart form of the cone halfspace {covector <= 0}: (a, b) with
        a . u <= b."""
        cov = np.asarray([float(c) for c in covector])
        a = self.basis.T @ cov
        b = -float(cov @ self.origin)
        return a, b


def witness_chart(P: CoxeterPolytope) -> Chart:
    """Chart of the supporting covector; defined on every orbit tile."""
    ell, _ = supporting_covector(P)
    return _chart_from(ell, P.interior)


def _chart_from(ell, interior):
    ell = np.asarray([float(x) for x in ell])
    x0 = np.asarray([float(x) for x in interior])
    val = float(ell @ x0)
    if val >= 0:
        raise GeometryError("interior point is outside the chart")
    origin = x0 / (-val)
    _, _, vh = np.linalg.svd(ell[None, :])
    basis = vh[1:].T
    return Chart(ell, origin, basis)


def klein_chart(P: CoxeterPolytope, G=None) -> Chart:
    """Chart adapted to a Lorentzian invariant form: the conic becomes the
    unit sphere and the interior point the origin."""
    if G is None:
        G = invariant_form(P)
    if G is None:
        raise GeometryError("no invariant form; use witness_chart instead")
    d = P.dim
    sig = form_signature(G, eps=P.eps)
    if sig[:2] != (d, 1):
        raise GeometryError(f"invariant form has signature {sig}, not ({d}, 1)")
    Gf = np.asarray([[float(x) for x in row] for row in G])
    x0 = np.asarray([float(x) for x in P.interior])
    q0 = float(x0 @ Gf @ x0)
    if q0 >= 0:
        raise GeometryError("interior point is not timelike for the form")
    x0 = x0 / math.sqrt(-q0)
    ell = Gf @ x0  # ell(x0) = -1
    # G-orthonormal basis of the spacelike complement of x0
    cand = np.eye(d + 1)
    basis = []
    for v in cand:
        w = v + (v @ Gf @ x0) * x0  # project G-orthogonally to x0
        for u in basis:
            w = w - (w @ Gf @ u) * u
        norm2 = float(w @ Gf @ w)
        if norm2 > 1e-12:
            basis.append(w / math.sqrt(norm2))
        if len(basis) == d:
            break
    if len(basis) != d:
        raise GeometryError("failed to orthonormalize the spacelike complement")
    return Chart(ell, x0, np.stack(basis, axis=1))


# ---------------------------------------------------------------------------
# convex bodies in a chart


class HalfspaceBody:
    """Bounded intersection {u : A u <= b} with known vertex list."""

    def __init__(self, A, b, vertices=None):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.b = np.asarray(b, dtype=float)
        self.vertices = None if vertices is None else np.atleast_2d(
            np.asarray(vertices, dtype=float)
        )

    @property
    def dim(self):
        return self.A.shape[1]

    def contains(self, U, tol=1e-12):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        return ((U @ self.A.T) <= self.b[None, :] + tol).all(axis=1)

    def hits(self, U, E):
        """Ray parameters: for each point u and direction e, the boundary
        hits t- < 0 < t+ of the line u + t e (u must be interior)."""
        U = np.atleast_2d(np.asarray(U, dtype=float))
        E = np.atleast_2d(np.asarray(E, dtype=float))
        AU = U @ self.A.T  # (n, K)
        AE = E @ self.A.T  # (m, K)
        slack = self.b[None, :] - AU  # (n, K), > 0 inside
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = slack[:, None, :] / AE[None, :, :]  # (n, m, K)
        pos = AE[None, :, :] > 1e-14
        neg = AE[None, :, :] < -1e-14
        tp = np.where(pos, ratio, np.inf).min(axis=2)
        tm = np.where(neg, ratio, -np.inf).max(axis=2)
        return tp, tm

    def bbox(self):
        if self.vertices is None:
            raise GeometryError("halfspace body without vertex list has no bbox")
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


class QuadricBody:
    """{u : q(u) < 0} for a quadratic q that is convex on the chart."""

    def __init__(self, Q2, q1, q0):
        self.Q2 = np.asarray(Q2, dtype=float)
        self.q1 = np.asarray(q1, dtype=float)
        self.q0 = float(q0)

    @property
    def dim(self):
        return self.Q2.shape[0]

    def value(self, U):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        return (U * (U @ self.Q2)).sum(axis=1) + 2.0 * (U @ self.q1) + self.q0

    def contains(self, U, tol=1e-12):
        return self.value(U) < -tol

    def hits(self, U, E):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        E = np.atleast_2d(np.asarray(E, dtype=float))
        a = (E * (E @ self.Q2)).sum(axis=1)  # (m,)
        if (a <= 0).any():
            raise GeometryError("quadric body is unbounded in a ray direction")
        bq = (U @ self.Q2) @ E.T + self.q1 @ E.T  # (n, m)
        c = self.value(U)  # (n,) < 0 inside
        disc = bq * bq - a[None, :] * c[:, None]
        disc = np.maximum(disc, 0.0)
        root = np.sqrt(disc)
        tp = (-bq + root) / a[None, :]
        tm = (-bq - root) / a[None, :]
        return tp, tm

    def bbox(self):
        # bounding box of the ellipsoid q < 0: center + semiaxis extents
        center = np.linalg.solve(self.Q2, -self.q1)
        level = -(self.value(center[None, :])[0])
        inv = np.linalg.inv(self.Q2)
        ext = np.sqrt(np.maximum(level * np.diag(inv), 0.0))
        return center - ext, center + ext


class IntersectionBody:
    def __init__(self, parts):
        self.parts = list(parts)

    @property
    def dim(self):
        return self.parts[0].dim

    def contains(self, U, tol=1e-12):
        mask = self.parts[0].contains(U, tol)
        for p in self.parts[1:]:
            mask = mask & p.contains(U, tol)
        return mask

    def hits(self, U, E):
        tp, tm = self.parts[0].hits(U, E)
        for p in self.parts[1:]:
            tp2, tm2 = p.hits(U, E)
            tp = np.minimum(tp, tp2)
            tm = np.maximum(tm, tm2)
        return tp, tm

    def bbox(self):
        los, his = zip(*(p.bbox() for p in self.parts if _has_bbox(p)))
        return np.max(los, axis=0), np.min(his, axis=0)


def _has_bbox(p):
    try:
        p.bbox()
        return True
    except GeometryError:
        return False


def unit_disk(d=2):
    return QuadricBody(np.eye(d), np.zeros(d), -1.0)


# ---------------------------------------------------------------------------
# metric quantities


def hilbert_distance(body, x, y):
    """Half the log cross-ratio along the chord through x and y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not body.contains(x[None, :])[0] or not body.contains(y[None, :])[0]:
        raise GeometryError("hilbert_distance needs interior points")
    e = y - x
    if float(np.abs(e).max()) == 0.0:
        return 0.0
    tp, tm = body.hits(x[None, :], e[None, :])
    tp, tm = float(tp[0, 0]), float(tm[0, 0])
    if not (tm < 0.0 < 1.0 < tp):
        raise GeometryError("chord parameters out of order; point on boundary?")
    return 0.5 * math.log((tp / (tp - 1.0)) * ((1.0 - tm) / (-tm)))


def finsler_norm(body, x, w):
    """F(x, w) = (1/t+ + 1/t-) / 2 with t the boundary hits along +-w."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if not body.contains(x[None, :])[0]:
        raise GeometryError("finsler_norm needs an interior point")
    if float(np.abs(w).max()) == 0.0:
        return 0.0
    tp, tm = body.hits(x[None, :], w[None, :])
    tp, tm = float(tp[0, 0]), float(tm[0, 0])
    if not tm < 0.0 < tp:
        raise GeometryError("point is not interior along the given direction")
    return 0.5 * (1.0 / tp + 1.0 / (-tm))


def _sphere_grid(d, angular):
    """Quadrature nodes and weights for integrating r^d over directions.

    d=2: trapezoid on the half circle (the Finsler ball is symmetric);
    d=3: Gauss-Legendre in the polar cosine x trapezoid in azimuth."""
    if d == 1:
        return np.array([[1.0]]), np.array([1.0])
    if d == 2:
        m = angular
        theta = np.arange(m) * (math.pi / m)
        E = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        w = np.full(m, math.pi / m)
        return E, w
    if d == 3:
        n1 = max(4, angular // 16)
        n2 = angular
        nodes, wts = np.polynomial.legendre.leggauss(n1)
        theta = np.arange(n2) * (2.0 * math.pi / n2)
        ct = np.cos(theta)
        st = np.sin(theta)
        E = []
        W = []
        for c, wc in zip(nodes, wts):
            s = math.sqrt(max(0.0, 1.0 - c * c))
            for j in range(n2):
                E.append((s * ct[j], s * st[j], c))
                W.append(wc * (2.0 * math.pi / n2))
        return np.asarray(E), np.asarray(W)
    raise GeometryError("quadrature implemented for d <= 3 only")


def busemann_densities(body, U, angular=256):
    """Busemann density sigma_d / Leb(B_u) at each chart point (vectorized).

    The Finsler unit ball B_u is measured in polar coordinates with the
    closed-form boundary radius r(e) = 1/F(u, e)."""
    U = np.atleast_2d(np.asarray(U, dtype=float))
    d = U.shape[1]
    if d == 1:
        tp, tm = body.hits(U, np.array([[1.0]]))
        width = 1.0 / tp[:, 0] + 1.0 / (-tm[:, 0])
        return width / 2.0  # sigma_1 / (t+ + t-) with Leb(B) = 2/(...)
    E, W = _sphere_grid(d, angular)
    out = np.empty(U.shape[0])
    for start in range(0, U.shape[0], _HIT_CHUNK):
        block = U[start : start + _HIT_CHUNK]
        tp, tm = body.hits(block, E)
        F = 0.5 * (1.0 / tp + 1.0 / (-tm))
        r = 1.0 / np.maximum(F, 1e-300)
        if d == 2:
            # area = 1/2 int_0^2pi r^2; F is symmetric, so the half-circle
            # grid integrates r^2 over [0, pi), which equals the area
            ball = (r * r) @ W
        else:
            ball = (r ** 3) @ W / 3.0  # full-sphere grid
        out[start : start + _HIT_CHUNK] = _UNIT_BALL_VOLUME[d] / ball
    return out


def busemann_density(body, x, angular=256):
    x = np.asarray(x, dtype=float)
    if not body.contains(x[None, :])[0]:
        raise GeometryError("busemann_density needs an interior point")
    return float(busemann_densities(body, x[None, :], angular)[0])


# ---------------------------------------------------------------------------
# Monte-Carlo volume


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    stderr: float
    samples: int
    depth: int | None
    seed: int
    outside: int  # target samples where the domain oracle failed


def _strata(bbox_lo, bbox_hi, samples):
    d = len(bbox_lo)
    k = max(1, int(round((samples / 64.0) ** (1.0 / d))))
    edges = [np.linspace(bbox_lo[i], bbox_hi[i], k + 1) for i in range(d)]
    cells = []
    for idx in np.ndindex(*(k,) * d):
        lo = np.array([edges[i][idx[i]] for i in range(d)])
        hi = np.array([edges[i][idx[i] + 1] for i in range(d)])
        cells.append((lo, hi))
    per = int(math.ceil(samples / len(cells)))
    return cells, per


def _sample_cell(seed, cell_index, lo, hi, count):
    rng = np.random.Generator(np.random.Philox(key=[seed, cell_index]))
    pts = rng.random((count, len(lo)))
    return lo[None, :] + pts * (hi - lo)[None, :]


def estimate_volume(
    domain, target, samples, seed, angular=256, depth=None, bbox=None
):
    """Busemann volume of `target` inside `domain` by stratified Monte-Carlo.

    `domain` may be a chart body or a DomainApprox+Chart pair prepared with
    `inner_hull_body`.  Deterministic in (seed, samples): the sampler is a
    counter-based generator keyed by (seed, stratum)."""
    ests = paired_volumes([domain], target, samples, seed, angular, bbox=bbox)
    est = ests[0]
    return VolumeEstimate(est.value, est.stderr, est.samples, depth, seed, est.outside)


def paired_volumes(
    domains, target, samples, seed, angular=256, bbox=None, nesting=None
):
    """Volume estimates for several domains sharing identical sample points.

    nesting="increasing" asserts the domains are nested increasingly (so
    densities must not increase along the list); "decreasing" the reverse.
    Violations beyond tolerance raise, as they expose an input bug."""
    ests, _, _ = _paired_mc(domains, target, samples, seed, angular, bbox, nesting)
    return ests


def _paired_mc(domains, target, samples, seed, angular, bbox, nesting):
    if bbox is None:
        lo, hi = target.bbox()
    else:
        lo, hi = (np.asarray(bbox[0], float), np.asarray(bbox[1], float))
    cells, per = _strata(lo, hi, samples)
    nb = len(domains)
    totals = np.zeros(nb)
    variances = np.zeros(nb)
    diff_totals = np.zeros(max(nb - 1, 0))
    diff_variances = np.zeros(max(nb - 1, 0))
    outside = np.zeros(nb, dtype=int)
    total_samples = 0
    cell_vol = float(np.prod(cells[0][1] - cells[0][0]))
    dens_buf = np.zeros((nb, per))
    ok_buf = np.zeros((nb, per), dtype=bool)
    for ci, (clo, chi) in enumerate(cells):
        pts = _sample_cell(seed, ci, clo, chi, per)
        total_samples += per
        mask = target.contains(pts)
        dens_buf[:] = 0.0
        ok_buf[:] = False
        if mask.any():
            inside_pts = pts[mask]
            for bi, dom in enumerate(domains):
                ok = dom.contains(inside_pts)
                vals = np.zeros(inside_pts.shape[0])
                if ok.any():
                    vals[ok] = busemann_densities(dom, inside_pts[ok], angular)
                outside[bi] += int((~ok).sum())
                dens_buf[bi][mask] = vals
                ok_buf[bi][mask] = ok
        if nesting in ("increasing", "decreasing") and nb > 1:
            order = range(nb) if nesting == "increasing" else range(nb - 1, -1, -1)
            order = list(order)
            for small, big in zip(order[:-1], order[1:]):
                # the bigger domain must contain every sample the smaller
                # does, with pointwise smaller densities
                if (ok_buf[small] & ~ok_buf[big]).any():
                    raise GeometryError("domain nesting violated at a sample point")
                both = ok_buf[small] & ok_buf[big]
                bad = both & (
                    dens_buf[big] > dens_buf[small] * (1 + 1e-6) + 1e-9
                )
                if bad.any():
                    raise GeometryError("domain nesting violated at a sample point")
        m = dens_buf.mean(axis=1)
        v = dens_buf.var(axis=1, ddof=1) if per > 1 else np.zeros(nb)
        totals += cell_vol * m
        variances += (cell_vol ** 2) * v / per
        if nb > 1:
            deltas = dens_buf[1:] - dens_buf[:-1]  # per-sample paired diffs
            diff_totals += cell_vol * deltas.mean(axis=1)
            dv = deltas.var(axis=1, ddof=1) if per > 1 else np.zeros(nb - 1)
            diff_variances += (cell_vol ** 2) * dv / per
    ests = [
        VolumeEstimate(
            float(totals[bi]),
            float(math.sqrt(variances[bi])),
            total_samples,
            None,
            seed,
            int(outside[bi]),
        )
        for bi in range(nb)
    ]
    return (
        ests,
        [float(x) for x in diff_totals],
        [float(math.sqrt(x)) for x in diff_variances],
    )


def monotonicity_probe(domain_small, domain_big, target, samples, seed, angular=256):
    """(estimate in the bigger domain, estimate in the smaller domain) with
    shared samples; Hilbert volumes shrink as the domain grows."""
    est_small, est_big = paired_volumes(
        [domain_small, domain_big],
        target,
        samples,
        seed,
        angular,
        nesting="increasing",
    )
    return est_big, est_small


# ---------------------------------------------------------------------------
# bodies from orbit tilings


def _hull_2d(points):
    """Andrew monotone chain; returns hull vertices counterclockwise."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        raise GeometryError("hull needs at least 3 distinct points")

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.asarray(lower[:-1] + upper[:-1])


def _polygon_halfspaces(verts):
    """CCW polygon vertices -> (A, b) rows with A u <= b inside."""
    n = len(verts)
    A = np.zeros((n, 2))
    b = np.zeros(n)
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        e = q - p
        normal = np.array([e[1], -e[0]])  # outward for ccw
        A[i] = normal
        b[i] = normal @ p
    return A, b


def polygon_body(vertices):
    verts = np.atleast_2d(np.asarray(vertices, dtype=float))
    hull = _hull_2d(verts)
    A, b = _polygon_halfspaces(hull)
    return HalfspaceBody(A, b, vertices=hull)


def clip_halfplanes(A, b, pad_lo, pad_hi):
    """Intersect halfplanes {a u <= b} with a padding box; returns the
    polygon vertices, raising if the region still touches the pad box
    (i.e. the cuts do not bound it)."""
    poly = [
        np.array([pad_lo[0], pad_lo[1]]),
        np.array([pad_hi[0], pad_lo[1]]),
        np.array([pad_hi[0], pad_hi[1]]),
        np.array([pad_lo[0], pad_hi[1]]),
    ]
    for a, bb in zip(A, b):
        new = []
        n = len(poly)
        if n == 0:
            break
        prev = poly[-1]
        pv = float(a @ prev - bb)
        for cur in poly:
            cv = float(a @ cur - bb)
            if pv <= 0:
                new.append(prev)
                if cv > 0:
                    t = pv / (pv - cv)
                    new.append(prev + t * (cur - prev))
            elif cv <= 0:
                t = pv / (pv - cv)
                new.append(prev + t * (cur - prev))
            prev, pv = cur, cv
        poly = new
    if not poly:
        raise GeometryError("cut system is empty")
    arr = np.asarray(poly)
    margin = 1e-9 * (np.asarray(pad_hi) - np.asarray(pad_lo)).max()
    if (arr <= np.asarray(pad_lo)[None, :] + margin).any() or (
        arr >= np.asarray(pad_hi)[None, :] - margin
    ).any():
        raise GeometryError("cut system does not bound the domain (pad box hit)")
    return arr


def inner_hull_body(dom: DomainApprox, chart: Chart, max_depth=None):
    """Convex hull of the orbit tile rays in the chart (inner approximation
    of the invariant domain)."""
    pts = []
    for i, tile in enumerate(dom.tiles):
        if max_depth is not None and dom.ball.depths[i] > max_depth:
            continue
        for ray in tile:
            pts.append(chart.to_chart([float(x) for x in ray]))
    pts = np.asarray(pts)
    if chart.dim != 2:
        raise GeometryError("inner hull bodies implemented in dimension 2")
    return polygon_body(pts)


def outer_cut_body(dom: DomainApprox, chart: Chart, max_depth=None, pad=1e3):
    """Intersection of the pushed supporting halfspaces (outer approximation
    of the invariant domain); must come out bounded."""
    if chart.dim != 2:
        raise GeometryError("outer cut bodies implemented in dimension 2")
    rows = []
    offs = []
    for i, cov in enumerate(dom.covectors):
        if max_depth is not None and dom.ball.depths[i] > max_depth:
            continue
        a, b = chart.halfspace(cov)
        scale = max(abs(float(a[0])), abs(float(a[1])), abs(float(b)), 1e-300)
        rows.append(a / scale)
        offs.append(b / scale)
    lo = np.full(2, -pad)  # the chart origin is interior to every cut
    hi = np.full(2, pad)
    verts = clip_halfplanes(rows, offs, lo, hi)
    A, b = _polygon_halfspaces(verts)
    return HalfspaceBody(A, b, vertices=verts)


def fundamental_target(P: CoxeterPolytope, chart: Chart):
    """The fundamental polytope as a chart body (halfspaces + vertices)."""
    A = []
    b = []
    for alpha in P.alphas:
        a, bb = chart.halfspace(alpha)
        A.append(a)
        b.append(bb)
    verts = [
        chart.to_chart([float(x) for x in f.witness])
        for f in enumerate_faces(P)
        if f.dim == 0 and f.subset
    ]
    if len(verts) < P.dim + 1:
        raise GeometryError("fundamental polytope has too few vertices to box")
    return HalfspaceBody(np.asarray(A), np.asarray(b), vertices=np.asarray(verts))


def conic_body(P: CoxeterPolytope, chart: Chart, G=None):
    """The invariant-form conic as a chart body (exact boundary of the
    invariant domain for the triangle-group cases)."""
    if G is None:
        G = invariant_form(P)
    if G is None:
        raise GeometryError("polytope has no invariant form")
    Gf = np.asarray([[float(x) for x in row] for row in G])
    Bmat = chart.basis
    o = chart.origin
    Q2 = Bmat.T @ Gf @ Bmat
    q1 = Bmat.T @ (Gf @ o)
    q0 = float(o @ Gf @ o)
    if q0 >= 0:
        Q2, q1, q0 = -Q2, -q1, -q0
    return QuadricBody(Q2, q1, q0)


# ---------------------------------------------------------------------------
# volume sequences along orbit depth


@dataclass(frozen=True)
class VolumeSequence:
    side: str  # "inner" | "outer"
    depths: tuple
    estimates: tuple  # VolumeEstimate per depth
    diffs: tuple  # successive differences (paired)
    diff_stderrs: tuple


def volume_sequence(P, depths, samples, seed, side="inner", angular=256):
    """Paired volume estimates of the fundamental polytope against orbit
    approximations of increasing depth.

    side="inner": hulls of tile rays; domains grow with depth, so the
    estimates must not increase (they plateau at the true volume).
    side="outer": pushed-covector cuts; domains shrink with depth, so the
    estimates must not decrease — they grow without bound exactly when the
    true volume is infinite."""
    depths = sorted(depths)
    dom = domain_approx(P, max(depths))
    chart = witness_chart(P)
    target = fundamental_target(P, chart)
    bodies = []
    for N in depths:
        if side == "inner":
            bodies.append(inner_hull_body(dom, chart, max_depth=N))
        elif side == "outer":
            bodies.append(outer_cut_body(dom, chart, max_depth=N))
        else:
            raise InputError(f"unknown side {side!r}")
    nesting = "increasing" if side == "inner" else "decreasing"
    ests, diffs, dstd = _paired_mc(
        bodies, target, samples, seed, angular, None, nesting
    )
    ests = [
        VolumeEstimate(e.value, e.stderr, e.samples, N, seed, e.outside)
        for e, N in zip(ests, depths)
    ]
    return VolumeSequence(
        side, tuple(depths), tuple(ests), tuple(diffs), tuple(dstd)
    )


# ---------------------------------------------------------------------------
# join divergence probe


@dataclass(frozen=True)
class SlabReport:
    slab_estimates: tuple
    partial_sums: tuple
    stderrs: tuple


def join_divergence_probe(
    omega_body,
    chart: Chart,
    e1_mask,
    target: HalfspaceBody,
    slabs,
    samples,
    seed,
    angular=128,
):
    """Slab volumes of target \\ h(target) iterates for the contraction h
    that doubles the E1 coordinates (cone level) and fixes the rest.

    The Hilbert volume is h-invariant, so the slab estimates agree up to
    Monte-Carlo error and the partial sums grow linearly — the numerical
    signature of infinite volume."""
    e1_mask = np.asarray(e1_mask, dtype=bool)
    dim = len(e1_mask)
    hmat = np.diag(np.where(e1_mask, 2.0, 1.0))
    hinv = np.linalg.inv(hmat)

    def slab_index(U):
        # largest k with h^-k(lift(u)) still in the target (capped)
        k = np.full(U.shape[0], -1, dtype=int)
        alive = np.flatnonzero(target.contains(U))
        k[alive] = 0
        cur = chart.from_chart(U[alive])
        for step in range(1, slabs + 1):
            if alive.size == 0:
                break
            cur = cur @ hinv.T
            coords = chart.to_chart(cur)
            inside = target.contains(coords)
            k[alive[inside]] = step
            alive = alive[inside]
            cur = cur[inside]
        return k

    lo, hi = target.bbox()
    cells, per = _strata(lo, hi, samples)
    cell_vol = float(np.prod(cells[0][1] - cells[0][0]))
    sums = np.zeros(slabs)
    variances = np.zeros(slabs)
    for ci, (clo, chi) in enumerate(cells):
        pts = _sample_cell(seed, ci, clo, chi, per)
        k = slab_index(pts)
        dens = np.zeros(per)
        sel = k >= 0
        if sel.any():
            dens[sel] = busemann_densities(omega_body, pts[sel], angular)
        for slab in range(slabs):
            vals = np.where((k == slab) & sel, dens, 0.0)
            m = vals.mean()
            v = vals.var(ddof=1) if per > 1 else 0.0
            sums[slab] += cell_vol * m
            variances[slab] += (cell_vol ** 2) * v / per
    partial = np.cumsum(sums)
    return SlabReport(
        tuple(float(x) for x in sums),
        tuple(float(x) for x in partial),
        tuple(float(math.sqrt(v)) for v in variances),
    )
