"""Exact integer linear algebra on arbitrary-precision numpy object arrays.

Everything downstream (fans, cohomology, deformations, lifting) reduces to
the primitives here: Hermite and Smith normal forms with unimodular
transforms, saturated kernel bases, cokernel presentations, exact linear
solves, one-line nonnegative solving, and small Fourier-Motzkin utilities
for bounded lattice-point enumeration. No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .kernels import matrix_rank


def ivec(entries) -> np.ndarray:
    """1-D integer vector with arbitrary-precision entries."""
    v = np.empty(len(entries), dtype=object)
    for i, x in enumerate(entries):
        v[i] = int(x)
    return v


def imat(rows, cols: int | None = None) -> np.ndarray:
    """2-D integer matrix with arbitrary-precision entries.

    Args:
        rows: iterable of equal-length row iterables.
        cols: column count, required when ``rows`` is empty.
    """
    rows = [list(r) for r in rows]
    if not rows:
        if cols is None:
            raise ValueError("empty matrix needs an explicit column count")
        return np.empty((0, cols), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged rows")
    m = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            m[i, j] = int(x)
    return m


def identity(n: int) -> np.ndarray:
    m = imat([[0] * n for _ in range(n)], cols=n)
    for i in range(n):
        m[i, i] = 1
    return m


def rational_rank(a) -> int:
    """Rank of an integer matrix over the rationals (exact)."""
    a = np.asarray(a, dtype=object)
    if a.ndim != 2:
        raise ValueError("rank needs a 2-D matrix")
    return matrix_rank(a)


def determinant(a) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    a = np.asarray(a, dtype=object)
    n, ncols = a.shape
    if n != ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    rows = [[int(x) for x in r] for r in a]
    sign = 1
    prev = 1
    for col in range(n):
        piv_row = next((r for r in range(col, n) if rows[r][col] != 0), -1)
        if piv_row < 0:
            return 0
        if piv_row != col:
            rows[col], rows[piv_row] = rows[piv_row], rows[col]
            sign = -sign
        piv = rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col]
            for j in range(col + 1, n):
                num = piv * rows[r][j] - factor * rows[col][j]
                assert num % prev == 0
                rows[r][j] = num // prev
            rows[r][col] = 0
        prev = piv
    return sign * rows[n - 1][n - 1]


def hermite_normal_form(a) -> tuple[np.ndarray, np.ndarray]:
    """Row-style Hermite normal form.

    Returns:
        (H, U) with U unimodular, U @ a = H, pivots positive, entries above
        each pivot reduced into [0, pivot), zero rows last.
    """
    a = np.asarray(a, dtype=object)
    h = imat([list(r) for r in a], cols=a.shape[1])
    m, n = h.shape
    u = identity(m)
    row = 0
    for col in range(n):
        if row >= m:
            break
        # Clear below (row, col) by gcd-style row operations.
        while True:
            nz = [r for r in range(row, m) if h[r, col] != 0]
            if not nz:
                break
            piv_row = min(nz, key=lambda r: abs(h[r, col]))
            if piv_row != row:
                h[[row, piv_row]] = h[[piv_row, row]]
                u[[row, piv_row]] = u[[piv_row, row]]
            done = True
            for r in range(row + 1, m):
                if h[r, col] != 0:
                    q = h[r, col] // h[row, col]
                    h[r] = h[r] - q * h[row]
                    u[r] = u[r] - q * u[row]
                    if h[r, col] != 0:
                        done = False
            if done:
                break
        if h[row, col] == 0:
            continue
        if h[row, col] < 0:
            h[row] = -h[row]
            u[row] = -u[row]
        piv = h[row, col]
        for r in range(row):
            q = h[r, col] // piv  # floor: reduces into [0, piv)
            if q != 0:
                h[r] = h[r] - q * h[row]
                u[r] = u[r] - q * u[row]
        row += 1
    return h, u


@dataclass(frozen=True)
class SNFResult:
    """Smith decomposition U @ A @ V = S with U, V unimodular."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        k = min(self.s.shape)
        return [int(self.s[i, i]) for i in range(k)]


def smith_normal_form(a) -> SNFResult:
    """Smith normal form with transforms; diagonal entries divide successors."""
    a = np.asarray(a, dtype=object)
    s = imat([list(r) for r in a], cols=a.shape[1])
    m, n = s.shape
    u = identity(m)
    v = identity(n)
    for t in range(min(m, n)):
        while True:
            # Move a minimal-magnitude nonzero of the trailing block to (t, t).
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if s[i, j] != 0 and (best is None or abs(s[i, j]) < abs(s[best[0], best[1]])):
                        best = (i, j)
            if best is None:
                break
            bi, bj = best
            if bi != t:
                s[[t, bi]] = s[[bi, t]]
                u[[t, bi]] = u[[bi, t]]
            if bj != t:
                s[:, [t, bj]] = s[:, [bj, t]]
                v[:, [t, bj]] = v[:, [bj, t]]
            piv = s[t, t]
            dirty = False
            for r in range(t + 1, m):
                if s[r, t] != 0:
                    q = s[r, t] // piv
                    s[r] = s[r] - q * s[t]
                    u[r] = u[r] - q * u[t]
                    if s[r, t] != 0:
                        dirty = True
            for c in range(t + 1, n):
                if s[t, c] != 0:
                    q = s[t, c] // piv
                    s[:, c] = s[:, c] - q * s[:, t]
                    v[:, c] = v[:, c] - q * v[:, t]
                    if s[t, c] != 0:
                        dirty = True
            if dirty:
                continue
            # Enforce divisibility of the trailing block by the pivot.
            witness = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if s[i, j] % piv != 0:
                        witness = i
                        break
                if witness is not None:
                    break
            if witness is None:
                break
            s[t] = s[t] + s[witness]
            u[t] = u[t] + u[witness]
        if s[t, t] < 0:
            s[t] = -s[t]
            u[t] = -u[t]
    return SNFResult(u=u, s=s, v=v)


def kernel_basis(a) -> list[np.ndarray]:
    """Basis of the saturated integer kernel lattice {x : a @ x = 0}.

    The basis is canonicalized by row-style HNF, so results are
    deterministic and primitive as a lattice basis.
    """
    a = np.asarray(a, dtype=object)
    m, n = a.shape
    if n == 0:
        return []
    snf = smith_normal_form(a)
    zero_cols = [j for j in range(n) if j >= min(m, n) or snf.s[j, j] == 0]
    if not zero_cols:
        return []
    rows = imat([list(snf.v[:, j]) for j in zero_cols], cols=n)
    h, _ = hermite_normal_form(rows)
    return [h[i].copy() for i in range(len(zero_cols))]


def cokernel_map(a) -> tuple[np.ndarray, list[int]]:
    """Presentation of coker(a) = Z^m / column-span(a).

    Returns:
        (grading, invariants): ``grading`` stacks a basis of the free part
        (HNF-canonical rows) over one row per finite invariant factor > 1;
        ``invariants`` lists those torsion orders in divisibility order.
        ``grading @ a`` has zero rows on the free block and rows divisible
        by the matching invariant on the torsion block.
    """
    a = np.asarray(a, dtype=object)
    m, n = a.shape
    snf = smith_normal_form(a)
    diag = [int(snf.s[i, i]) if i < min(m, n) else 0 for i in range(m)]
    free_rows = [i for i in range(m) if diag[i] == 0]
    torsion_rows = [i for i in range(m) if abs(diag[i]) > 1]
    free = imat([list(snf.u[i]) for i in free_rows], cols=m)
    if len(free_rows):
        free, _ = hermite_normal_form(free)
    torsion = imat([list(snf.u[i]) for i in torsion_rows], cols=m)
    grading = np.vstack([free, torsion]) if torsion.shape[0] else free
    invariants = [abs(diag[i]) for i in torsion_rows]
    return grading, invariants


def solve_int(a, b) -> np.ndarray | None:
    """Some integer solution x of a @ x = b, or None if there is none."""
    status, x = _solve_status(a, b)
    return x if status == "ok" else None


def _solve_status(a, b) -> tuple[str, np.ndarray | None]:
    """Solve a @ x = b over Z; status in {ok, no_integral, no_rational}."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    m, n = a.shape
    snf = smith_normal_form(a)
    c = snf.u @ b
    y = ivec([0] * n)
    rational = True
    integral = True
    for i in range(m):
        d = int(snf.s[i, i]) if i < min(m, n) else 0
        if d == 0:
            if c[i] != 0:
                rational = False
        else:
            if c[i] % d != 0:
                integral = False
            elif i < n:
                y[i] = c[i] // d
    if not rational:
        return "no_rational", None
    if not integral:
        return "no_integral", None
    return "ok", snf.v @ y


def _ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


def solve_nonneg_line(a, e, k) -> np.ndarray | None:
    """Nonnegative integer solution of a @ x = e on the line x0 + t*k.

    Args:
        a: integer matrix; k: generator of ker(a) (zero vector if trivial).
        e: right-hand side.

    Returns:
        The solution with minimal feasible t, or None when no nonnegative
        integer solution exists.

    Raises:
        ValueError: "no rational solution" when e is not in im(a) over Q.
    """
    a = np.asarray(a, dtype=object)
    e = np.asarray(e, dtype=object)
    k = np.asarray(k, dtype=object)
    if not all(x == 0 for x in a @ k):
        raise ValueError("k is not in the kernel of a")
    status, x0 = _solve_status(a, e)
    if status == "no_rational":
        raise ValueError("no rational solution")
    if status != "ok":
        return None
    lo, hi = None, None  # None encodes the unbounded side
    for i in range(len(x0)):
        ki = int(k[i])
        xi = int(x0[i])
        if ki == 0:
            if xi < 0:
                return None
        elif ki > 0:
            t = _ceil_div(-xi, ki)
            lo = t if lo is None else max(lo, t)
        else:
            t = xi // (-ki)
            hi = t if hi is None else min(hi, t)
    if lo is None and hi is None:
        t = 0
    elif lo is None:
        t = hi
    else:
        if hi is not None and lo > hi:
            return None
        t = lo
    x = x0 + t * k
    assert all(xi >= 0 for xi in x) and all(v == 0 for v in a @ x - e)
    return x


def lattice_equal(rows_a, rows_b) -> bool:
    """Whether two row lists generate the same integer lattice."""
    rows_a = np.asarray(rows_a, dtype=object)
    rows_b = np.asarray(rows_b, dtype=object)
    if rows_a.shape[1] != rows_b.shape[1]:
        return False
    ha, _ = hermite_normal_form(rows_a)
    hb, _ = hermite_normal_form(rows_b)
    ha = [list(r) for r in ha if any(x != 0 for x in r)]
    hb = [list(r) for r in hb if any(x != 0 for x in r)]
    return ha == hb


# -- Fourier-Motzkin helpers (exact, Fraction coefficients) -----------------
#
# Systems are lists of (coeffs, rhs) encoding sum(coeffs[i] * x[i]) >= rhs.


def _fm_eliminate(ineqs, var):
    pos = [q for q in ineqs if q[0][var] > 0]
    neg = [q for q in ineqs if q[0][var] < 0]
    out = [q for q in ineqs if q[0][var] == 0]
    for cp, rp in pos:
        for cn, rn in neg:
            s, t = -cn[var], cp[var]
            coeffs = tuple(s * a + t * b for a, b in zip(cp, cn))
            out.append((coeffs, s * rp + t * rn))
    return out


def _fm_chain(a, b):
    """Eliminated systems: chain[v] involves variables 0..v-1 only."""
    n = len(a[0]) if a else 0
    sys_full = [
        (tuple(Fraction(int(c)) for c in row), Fraction(int(r)))
        for row, r in zip(a, b)
    ]
    chain = [None] * (n + 1)
    chain[n] = sys_full
    for v in range(n, 0, -1):
        chain[v - 1] = _fm_eliminate(chain[v], v - 1)
    return chain


def rational_polyhedron_nonempty(a, b) -> bool:
    """Whether {x in Q^n : a @ x >= b} is nonempty (exact FM elimination)."""
    a = [list(map(int, r)) for r in np.asarray(a, dtype=object)]
    b = [int(x) for x in b]
    if not a:
        return all(x <= 0 for x in b)
    chain = _fm_chain(a, b)
    return all(rhs <= 0 for _, rhs in chain[0])


def polyhedron_lattice_points(a, b) -> list[tuple[int, ...]]:
    """All integer points of the bounded polyhedron {x : a @ x >= b}.

    Raises:
        ValueError: when the feasible region is unbounded.
    """
    a = [list(map(int, r)) for r in np.asarray(a, dtype=object)]
    b = [int(x) for x in b]
    if not a:
        raise ValueError("polyhedron is unbounded")
    n = len(a[0])
    chain = _fm_chain(a, b)
    if any(rhs > 0 for _, rhs in chain[0]):
        return []
    points: list[tuple[int, ...]] = []

    def rec(prefix: list[int]):
        v = len(prefix)
        if v == n:
            points.append(tuple(prefix))
            return
        lo, hi = None, None
        feasible = True
        for coeffs, rhs in chain[v + 1]:
            c = coeffs[v]
            const = rhs - sum(coeffs[i] * prefix[i] for i in range(v))
            if c == 0:
                if const > 0:
                    feasible = False
                    break
            elif c > 0:
                bound = const / c
                lo = bound if lo is None else max(lo, bound)
            else:
                bound = const / c
                hi = bound if hi is None else min(hi, bound)
        if not feasible:
            return
        if lo is None or hi is None:
            raise ValueError("polyhedron is unbounded")
        t0 = _ceil_div(lo.numerator, lo.denominator)
        t1 = hi.numerator // hi.denominator
        for t in range(t0, t1 + 1):
            rec(prefix + [t])

    rec([])
    return points
