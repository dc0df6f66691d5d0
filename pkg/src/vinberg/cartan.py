"""Cartan matrices for projective reflection groups and their type trichotomy.

A Cartan matrix here is a square matrix A with A_ss = 2, nonpositive
off-diagonal entries, zeros occurring symmetrically, and every off-diagonal
product A_st * A_ts either >= 4 or equal to 4cos^2(pi/k) for an integer
k >= 2.  The product encodes the dihedral order m_st of the pairwise
reflection subgroup (m = k, or infinity when the product is >= 4).

Each irreducible component is classified as positive, zero or negative type
by the sign of 2 - rho(2I - A), decided in exact mode by principal-minor
criteria for Z-matrices and in approx mode by power iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import ratlin
from .scalars import (
    APPROX,
    DEFAULT_EPS,
    EXACT,
    INFINITY,
    InputError,
    RATIONAL_COS_PRODUCTS,
    all_exact,
    is_exact,
    parse_scalar,
    sign_of,
)

POSITIVE = "positive"
ZERO = "zero"
NEGATIVE = "negative"
MIXED = "mixed"

_POWER_CAP = 100000


class CartanValidationError(InputError):
    """Raised with the list of axiom violations found."""

    def __init__(self, violations):
        self.violations = violations
        lines = "; ".join(f"{rule} at {pos}: {detail}" for rule, pos, detail in violations)
        super().__init__(f"invalid Cartan matrix: {lines}")


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple
    orders: tuple  # Coxeter orders m_st; m_ss = 1, INFINITY for products >= 4
    mode: str
    eps: float
    labels: tuple

    @property
    def n(self):
        return len(self.entries)

    def entry(self, s, t):
        return self.entries[s][t]

    def rows(self):
        return [list(r) for r in self.entries]

    def is_symmetric(self):
        return all(
            self.entries[s][t] == self.entries[t][s]
            for s in range(self.n)
            for t in range(s + 1, self.n)
        )


@dataclass(frozen=True)
class BlockType:
    indices: tuple
    tag: str
    lam: float  # numeric Perron-Frobenius evidence for 2 - rho(2I - A)
    margin: float


@dataclass(frozen=True)
class TypeTag:
    overall: str
    blocks: tuple
    warnings: tuple = ()


@dataclass(frozen=True)
class WitnessVector:
    x: tuple
    image: tuple  # A x
    tag: str
    margin: float


def _pair_order(product, mode, eps):
    """Coxeter order m_st from the off-diagonal product, or None if invalid."""
    if mode == EXACT:
        if product >= 4:
            return INFINITY
        if product in RATIONAL_COS_PRODUCTS:
            return RATIONAL_COS_PRODUCTS[product]
        return None
    p = float(product)
    if p >= 4.0 - eps:
        return INFINITY
    if abs(p) <= eps:
        return 2
    if p < 0:
        return None
    # p = 4cos^2(pi/k) ==> k = pi / acos(sqrt(p)/2)
    k_guess = math.pi / math.acos(math.sqrt(p) / 2.0)
    for k in {round(k_guess), round(k_guess) - 1, round(k_guess) + 1}:
        if k >= 2 and abs(p - 4.0 * math.cos(math.pi / k) ** 2) <= eps:
            return k
    return None


def validate_cartan(rows, labels=None, mode=None, eps=DEFAULT_EPS):
    """Check the Cartan axioms and build a CartanMatrix, or raise with the
    full list of violations."""
    n = len(rows)
    violations = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InputError(f"matrix is not square: row {i} has length {len(row)}")
    rows = [[parse_scalar(x) for x in row] for row in rows]

    exact_entries = all_exact(rows)
    if mode is None:
        mode = EXACT if exact_entries else APPROX
    elif mode == EXACT and not exact_entries:
        raise InputError("exact mode requested but the matrix has irrational entries")
    if mode not in (EXACT, APPROX):
        raise InputError(f"unknown mode {mode!r}")

    if mode == EXACT:
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
    else:
        entries = tuple(tuple(float(x) for x in row) for row in rows)

    tol = 0.0 if mode == EXACT else eps
    orders = [[1] * n for _ in range(n)]
    for s in range(n):
        two = entries[s][s] - 2
        if sign_of(two, tol) != 0:
            violations.append(("diagonal", (s, s), f"A_ss = {entries[s][s]}"))
    for s in range(n):
        for t in range(s + 1, n):
            a, b = entries[s][t], entries[t][s]
            sa, sb = sign_of(a, tol), sign_of(b, tol)
            if sa > 0 or sb > 0:
                violations.append(("nonpositive", (s, t), f"({a}, {b})"))
                continue
            if (sa == 0) != (sb == 0):
                violations.append(("zero-symmetry", (s, t), f"({a}, {b})"))
                continue
            if sa == 0:
                orders[s][t] = orders[t][s] = 2
                continue
            m = _pair_order(a * b, mode, eps)
            if m is None:
                violations.append(
                    ("product", (s, t), f"A_st*A_ts = {a * b} is not 4cos^2(pi/k) or >= 4")
                )
            else:
                orders[s][t] = orders[t][s] = m
    if violations:
        raise CartanValidationError(violations)
    if labels is None:
        labels = tuple(f"s{i+1}" for i in range(n))
    else:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise InputError("labels length does not match matrix size")
    return CartanMatrix(entries, tuple(tuple(r) for r in orders), mode, eps, labels)


def irreducible_components(A):
    """Connected components of the support graph, as sorted index tuples."""
    n = A.n
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            s = stack.pop()
            comp.append(s)
            for t in range(n):
                if not seen[t] and t != s and sign_of(A.entry(s, t), A.eps if A.mode == APPROX else 0.0) != 0:
                    seen[t] = True
                    stack.append(t)
        comps.append(tuple(sorted(comp)))
    return comps


def restrict(A, subset):
    """Principal submatrix on the given indices (a valid Cartan matrix)."""
    subset = tuple(subset)
    entries = tuple(tuple(A.entries[s][t] for t in subset) for s in subset)
    orders = tuple(tuple(A.orders[s][t] for t in subset) for s in subset)
    labels = tuple(A.labels[s] for s in subset)
    return CartanMatrix(entries, orders, A.mode, A.eps, labels)


def _power_lambda(rows, eps):
    """Numeric 2 - rho(2I - A) for an irreducible block, by power iteration.

    Iterates on 3I - A, which is nonnegative with positive diagonal, hence
    primitive on an irreducible block; the unshifted 2I - A can have paired
    extremal eigenvalues and a non-converging Rayleigh quotient.
    """
    n = len(rows)
    m = [[(3.0 if i == j else 0.0) - float(rows[i][j]) for j in range(n)] for i in range(n)]
    v = [1.0] * n
    lam = 0.0
    for _ in range(_POWER_CAP):
        w = [sum(m[i][j] * v[j] for j in range(n)) for i in range(n)]
        num = sum(wi * vi for wi, vi in zip(w, v))
        den = sum(vi * vi for vi in v)
        new = num / den
        norm = sum(abs(x) for x in w)
        v = [x / norm for x in w]
        if abs(new - lam) < eps / 10.0:
            lam = new
            break
        lam = new
    return 3.0 - lam, v


def _is_nonsingular_m_matrix(rows):
    """Exact test: all leading principal minors positive."""
    return all(d > 0 for d in ratlin.leading_principal_minors(rows))


def _classify_block_exact(rows):
    if _is_nonsingular_m_matrix(rows):
        return POSITIVE
    n = len(rows)
    if ratlin.det(rows) == 0:
        # Irreducible singular M-matrix test: every single-index deletion must
        # be a nonsingular M-matrix; then all principal minors are >= 0.
        for i in range(n):
            sub = [[rows[r][c] for c in range(n) if c != i] for r in range(n) if r != i]
            if not _is_nonsingular_m_matrix(sub):
                return NEGATIVE
        return ZERO
    return NEGATIVE


def classify_type(A):
    """Type trichotomy per irreducible component, with Perron evidence."""
    blocks = []
    warnings = []
    for comp in irreducible_components(A):
        rows = [[A.entries[s][t] for t in comp] for s in comp]
        lam, _ = _power_lambda(rows, A.eps)
        if A.mode == EXACT:
            tag = _classify_block_exact(rows)
            margin = abs(lam)
        else:
            margin = abs(lam)
            if margin <= A.eps:
                tag = ZERO
                warnings.append(
                    f"block {comp}: |lambda| = {margin:.3e} within eps of zero"
                )
            else:
                tag = POSITIVE if lam > 0 else NEGATIVE
            if A.eps < margin < 10 * A.eps:
                warnings.append(f"block {comp}: margin {margin:.3e} below 10*eps")
        blocks.append(BlockType(comp, tag, lam, margin))
    if not blocks:
        overall = POSITIVE  # empty matrix convention
    else:
        tags = {b.tag for b in blocks}
        overall = tags.pop() if len(tags) == 1 else MIXED
    return TypeTag(overall, tuple(blocks), tuple(warnings))


def _canonical_positive(vec):
    """Scale an all-positive rational vector to coprime positive integers."""
    lcm = 1
    for x in vec:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [Fraction(x // g) for x in ints]


def _exact_block_witness(rows, tag):
    n = len(rows)
    if tag == POSITIVE:
        # A^{-1} is entrywise positive on an irreducible nonsingular M-matrix,
        # so X = A^{-1} * ones satisfies X > 0 and A X = ones > 0.
        x = ratlin.mat_vec(ratlin.inverse(rows), [Fraction(1)] * n)
        return _canonical_positive(x)
    if tag == ZERO:
        basis = ratlin.kernel_basis(rows)
        if len(basis) != 1:
            raise ArithmeticError("zero-type block with kernel dimension != 1")
        vec = basis[0]
        if any(x == 0 for x in vec):
            raise ArithmeticError("zero-type kernel vector with zero entry")
        if vec[0] < 0:
            vec = [-x for x in vec]
        if any(x < 0 for x in vec):
            raise ArithmeticError("zero-type kernel vector not of one sign")
        return _canonical_positive(vec)
    # Negative type: no rational Perron vector in general.  Run the power
    # iteration in exact arithmetic on 3I - A until the sign certificate
    # sign(A X) < 0 holds exactly.
    m = [[(Fraction(3) if i == j else Fraction(0)) - rows[i][j] for j in range(n)] for i in range(n)]
    v = [Fraction(1)] * n
    for _ in range(10000):
        av = ratlin.mat_vec(rows, v)
        if all(x < 0 for x in av):
            return _canonical_positive(v)
        v = ratlin.mat_vec(m, v)
        top = max(abs(x) for x in v)
        v = [x / top for x in v]
        v = [Fraction(x).limit_denominator(10**12) for x in v]
        if any(x <= 0 for x in v):
            raise ArithmeticError("power iterate left the positive cone")
    raise ArithmeticError("no exact sign certificate after iteration cap")


def witness_vector(A, tag=None):
    """X > 0 with sign(A X) matching the type, blockwise; exact certificates
    in exact mode.  Requires a non-mixed type."""
    tt = tag or classify_type(A)
    if tt.overall == MIXED:
        raise InputError("witness_vector needs a uniform (non-mixed) type")
    n = A.n
    if n == 0:
        return WitnessVector((), (), tt.overall, math.inf)
    x = [None] * n
    if A.mode == EXACT:
        for block in tt.blocks:
            rows = [[A.entries[s][t] for t in block.indices] for s in block.indices]
            bx = _exact_block_witness(rows, block.tag)
            for idx, val in zip(block.indices, bx):
                x[idx] = val
    else:
        for block in tt.blocks:
            rows = [[A.entries[s][t] for t in block.indices] for s in block.indices]
            _, v = _power_lambda(rows, A.eps)
            for idx, val in zip(block.indices, v):
                x[idx] = val
    image = [sum(A.entries[s][t] * x[t] for t in range(n)) for s in range(n)]
    want = {POSITIVE: 1, ZERO: 0, NEGATIVE: -1}[tt.overall]
    tol = 0.0 if A.mode == EXACT else A.eps
    for s in range(n):
        if sign_of(image[s], tol) != want:
            raise ArithmeticError(
                f"witness image sign mismatch at index {s}: {image[s]}"
            )
    if tt.overall == ZERO:
        margin = math.inf if A.mode == EXACT else min(A.eps - abs(float(v)) for v in image)
    else:
        margin = min(abs(float(v)) for v in image)
    return WitnessVector(tuple(x), tuple(image), tt.overall, margin)


def split_by_type(A):
    """Group irreducible components by type and restrict to each group.

    Returns {tag: (indices, CartanMatrix)} with only the tags present.
    """
    tt = classify_type(A)
    groups = {}
    for block in tt.blocks:
        groups.setdefault(block.tag, []).extend(block.indices)
    return {
        tag: (tuple(sorted(idx)), restrict(A, sorted(idx)))
        for tag, idx in groups.items()
    }
