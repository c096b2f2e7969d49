"""One-parameter deformation data attached to an admissible triple.

Given a smooth complete fan and an admissible triple (m, rho, C), this
module builds the full deformation package: the splitting of N induced by
m with section gamma(-1) = v_rho, the index sets U1..U4 classifying rays by
the sign of a_i = m(v_i) and membership in C, the block matrix P whose
columns span the ambient fan, the trinomial Cox equation of the total
space, the exponent maps psi / nu between Cox rings, the eta substitution
onto the central fiber, and the verification that the fiber over 0 is the
variety we started from.

Index conventions: ray indices are 0-based everywhere; printed labels
(T1, T(2,1), S1, ...) are 1-based to match the usual matrix notation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intlin
from .fan import Fan, validate
from .triples import AdmissibleTriple, admissible_components, marker_graph, pairing


@dataclass(frozen=True)
class Splitting:
    """Splitting of 0 -> K -> N -m-> Z -> 0 by the section with gamma(-1) = v_rho.

    Attributes:
        m: the degree (row functional on N).
        rho: ray index with m(v_rho) = -1.
        k_basis: rows form a basis of ker m (saturated, HNF-canonical).
        gamma: the vector gamma(-1) = v_rho; gamma(t) = -t * v_rho.
        proj: (n-1) x n matrix of v -> v - gamma(m(v)) in k_basis coordinates.
    """

    m: tuple[int, ...]
    rho: int
    k_basis: tuple[tuple[int, ...], ...]
    gamma: tuple[int, ...]
    proj: np.ndarray


def build_splitting(fan: Fan, m, rho: int) -> Splitting:
    m = tuple(int(x) for x in m)
    v_rho = fan.rays[rho]
    if pairing(m, v_rho) != -1:
        raise ValueError("splitting needs m(v_rho) = -1")
    kb = intlin.kernel_basis(intlin.imat([list(m)]))
    k_rows = intlin.imat([list(v) for v in kb], cols=fan.dim)
    n = fan.dim
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        w = intlin.ivec([e[i] + m[j] * v_rho[i] for i in range(n)])
        c = intlin.solve_int(k_rows.T, w)
        assert c is not None  # w lies in ker m and the basis is saturated
        cols.append(c)
    proj = np.stack(cols, axis=1)  # ((n-1), n), possibly zero rows
    return Splitting(
        m=m,
        rho=rho,
        k_basis=tuple(tuple(int(x) for x in v) for v in kb),
        gamma=v_rho,
        proj=proj,
    )


@dataclass(frozen=True)
class UIndex:
    """Blocks of (block, ray) pairs splitting the rays by sign of a_i.

    rho appears in both u2 and u3 (it has a_rho = -1 and is not in C).
    """

    u1: tuple[tuple[int, int], ...]
    u2: tuple[tuple[int, int], ...]
    u3: tuple[tuple[int, int], ...]
    u4: tuple[tuple[int, int], ...]

    @property
    def all_pairs(self) -> tuple[tuple[int, int], ...]:
        return self.u1 + self.u2 + self.u3 + self.u4


def build_u_index(a, rho: int, component) -> UIndex:
    comp = set(component)
    u1 = tuple((1, i) for i, ai in enumerate(a) if ai > 0)
    u2 = tuple((2, i) for i, ai in enumerate(a) if ai < 0 and (i in comp or i == rho))
    u3 = tuple((3, i) for i, ai in enumerate(a) if ai < 0 and i not in comp)
    u4 = tuple((4, i) for i, ai in enumerate(a) if ai == 0)
    return UIndex(u1=u1, u2=u2, u3=u3, u4=u4)


@dataclass(frozen=True)
class Trinomial:
    """T1 * prod(U1) - prod(U2) + prod(U3) as signed exponent vectors.

    Each term is (coefficient, exponent tuple over the full column order
    of P, T1 first).
    """

    terms: tuple[tuple[int, tuple[int, ...]], ...]
    labels: tuple[str, ...]

    def rendered(self) -> str:
        pieces = []
        for coeff, exps in self.terms:
            factors = [
                f"{label}^{e}" if e > 1 else label
                for label, e in zip(self.labels, exps)
                if e
            ]
            mono = "*".join(factors) if factors else "1"
            pieces.append(("- " if coeff < 0 else "+ ") + mono)
        out = " ".join(pieces)
        return out[2:] if out.startswith("+ ") else out


@dataclass(frozen=True)
class DeformationData:
    """Everything attached to one admissible triple."""

    triple: AdmissibleTriple
    u: UIndex
    P: np.ndarray
    Ptilde: np.ndarray
    ambient_cones: tuple[tuple[int, ...], ...]
    trinomial: Trinomial
    psi: np.ndarray
    nu: np.ndarray
    Qtilde: np.ndarray
    splitting: Splitting
    a: tuple[int, ...]
    column_labels: tuple[str, ...]

    @property
    def u_columns(self) -> tuple[tuple[int, int], ...]:
        return self.u.all_pairs

    def column_of(self, pair) -> int:
        """Index of a (block, ray) pair in the full P column order."""
        return 1 + self.u.all_pairs.index(tuple(pair))


def _column_label(pair) -> str:
    k, i = pair
    return f"T({k},{i + 1})"


def build_deformation(fan: Fan, t: AdmissibleTriple) -> DeformationData:
    """Construct the deformation package of an admissible triple.

    Raises:
        ValueError: when the triple is not admissible for the fan.
    """
    comp = tuple(sorted(int(i) for i in t.component))
    g = marker_graph(fan, t.m, t.rho)
    if comp not in admissible_components(g):
        raise ValueError(
            f"component {comp} is not a proper connected component for "
            f"m={tuple(t.m)}, rho={t.rho}"
        )
    t = AdmissibleTriple(m=tuple(int(x) for x in t.m), rho=int(t.rho), component=comp)
    n, r = fan.dim, fan.n_rays
    a = tuple(pairing(t.m, fan.rays[i]) for i in range(r))
    split = build_splitting(fan, t.m, t.rho)
    u = build_u_index(a, t.rho, comp)
    pairs = u.all_pairs
    labels = ("T1",) + tuple(_column_label(p) for p in pairs)
    width = 1 + len(pairs)

    p = intlin.imat([[0] * width for _ in range(n + 2)], cols=width)
    p[0, 0] = 1
    p[1, 0] = 1
    p[n + 1, 0] = 1
    for c, (k, i) in enumerate(pairs, start=1):
        if k in (1, 2):
            p[0, c] = a[i]
        if k in (1, 3):
            p[1, c] = a[i]
        pi = split.proj @ intlin.ivec(fan.rays[i])
        for row in range(n - 1):
            p[2 + row, c] = pi[row]
    ptilde = p[: n + 1, 1:]

    term1 = [0] * width
    term1[0] = 1
    for c, (k, i) in enumerate(pairs, start=1):
        if k == 1:
            term1[c] = a[i]
    term2 = [0] * width
    term3 = [0] * width
    for c, (k, i) in enumerate(pairs, start=1):
        if k == 2:
            term2[c] = -a[i]
        elif k == 3:
            term3[c] = -a[i]
    trinomial = Trinomial(
        terms=((1, tuple(term1)), (-1, tuple(term2)), (1, tuple(term3))),
        labels=labels,
    )

    col_of = {pair: c for c, pair in enumerate(pairs)}
    gamma_minus_c = {i for i in g.vertices if i not in set(comp)}
    psi = intlin.imat([[0] * r for _ in range(len(pairs))], cols=r)
    for j in range(r):
        if a[j] > 0:
            psi[col_of[(1, j)], j] = 1
        elif a[j] == 0:
            psi[col_of[(4, j)], j] = 1
        elif j == t.rho:
            psi[col_of[(2, t.rho)], j] = 1
            psi[col_of[(3, t.rho)], j] += 1
        elif j in set(comp):
            psi[col_of[(2, j)], j] = 1
            psi[col_of[(3, t.rho)], j] += -a[j]
        else:
            assert j in gamma_minus_c
            psi[col_of[(3, j)], j] = 1
            psi[col_of[(2, t.rho)], j] += -a[j]
    nu = psi.T

    qtilde, torsion = intlin.cokernel_map(ptilde.T)
    assert not torsion  # ambient class group of an admissible package is free

    delta = intlin.ivec(
        [t2 - t3 for t2, t3 in zip(trinomial.terms[1][1], trinomial.terms[2][1])]
    )
    assert all(x == 0 for x in nu @ delta[1:])  # binomial difference kills nu

    cones = []
    comp_set = set(comp)
    for sigma in fan.max_cones:
        idx = {0}
        for c, (k, i) in enumerate(pairs, start=1):
            if i in sigma:
                idx.add(c)
        extra = (2, t.rho) if not (set(sigma) & comp_set) else (3, t.rho)
        idx.add(1 + col_of[extra])
        cones.append(tuple(sorted(idx)))

    return DeformationData(
        triple=t,
        u=u,
        P=p,
        Ptilde=ptilde,
        ambient_cones=tuple(cones),
        trinomial=trinomial,
        psi=psi,
        nu=nu,
        Qtilde=qtilde,
        splitting=split,
        a=a,
        column_labels=labels,
    )


def kernel_binomial(d: DeformationData) -> np.ndarray:
    """Exponent difference of the two binomial terms, over P-tilde columns."""
    t2 = d.trinomial.terms[1][1]
    t3 = d.trinomial.terms[2][1]
    return intlin.ivec([x - y for x, y in zip(t2, t3)])[1:]


def eta_map(d: DeformationData) -> dict:
    """Substitution table of the central-fiber ring map.

    T1 goes to 0; every other variable goes to the monomial in S_1..S_r
    whose exponent vector is the matching column of nu.
    """
    table: dict[str, dict[str, int] | None] = {"T1": None}
    for c, pair in enumerate(d.u.all_pairs):
        col = d.nu[:, c]
        table[_column_label(pair)] = {
            f"S{i + 1}": int(col[i]) for i in range(len(col)) if col[i] != 0
        }
    return table


def ambient_fan(d: DeformationData) -> Fan:
    """The toric ambient: rays are the columns of P, cones the sigma-tilde.

    Raises:
        RuntimeError: if some ambient cone fails to be smooth (cannot
            happen for data built from an admissible triple; indicates an
            internal construction error).
    """
    rays = tuple(tuple(int(x) for x in d.P[:, j]) for j in range(d.P.shape[1]))
    fan = Fan(dim=d.P.shape[0], rays=rays, max_cones=d.ambient_cones)
    rep = validate(fan)
    if not rep["smooth"]:
        raise RuntimeError("ambient cones are not unimodular; construction is broken")
    return fan


def _iota_matrix(fan: Fan, d: DeformationData) -> np.ndarray:
    """(n+2) x n matrix of v -> [m(v), m(v), proj(v), 0]."""
    n = fan.dim
    rows = [list(d.triple.m), list(d.triple.m)]
    for i in range(n - 1):
        rows.append([int(x) for x in d.splitting.proj[i]])
    rows.append([0] * n)
    return intlin.imat(rows, cols=n)


def verify_central_fiber(fan: Fan, d: DeformationData) -> dict:
    """Check that the fiber over 0 of the family is the starting variety.

    Returns a report {"passes": bool, "checks": {name: {"ok": bool,
    "witness": ...}}} with these named checks:

    * cone_membership: iota of every ray of every maximal cone is a
      nonnegative integer combination of its sigma-tilde columns,
    * lattice_identification: iota embeds N onto the sublattice cut out by
      the binomial character u and the last coordinate,
    * diagram_commutes: Ptilde composed with psi equals iota (truncated)
      composed with the ray matrix,
    * cox_cone_mapping: psi sends each Cox cone of the base into the
      matching ambient Cox cone,
    * fiber_fan_roundtrip: pulling each sigma-tilde back through iota
      recovers exactly the original maximal cone.
    """
    n = fan.dim
    iota = _iota_matrix(fan, d)
    checks: dict[str, dict] = {}

    witness = None
    for ci, (sigma, st) in enumerate(zip(fan.max_cones, d.ambient_cones)):
        b = d.P[:, list(st)]
        for j in sigma:
            x = intlin.solve_int(b, iota @ intlin.ivec(fan.rays[j]))
            if x is None or any(v < 0 for v in x):
                witness = {"cone": ci, "ray": j}
                break
        if witness:
            break
    checks["cone_membership"] = {"ok": witness is None, "witness": witness}

    delta_full = intlin.ivec(
        [t2 - t3 for t2, t3 in zip(d.trinomial.terms[1][1], d.trinomial.terms[2][1])]
    )
    uvec = intlin.solve_int(d.P.T, delta_full)
    if uvec is None:
        checks["lattice_identification"] = {
            "ok": False,
            "witness": {"reason": "binomial character does not lift"},
        }
    else:
        e_last = [0] * (n + 2)
        e_last[n + 1] = 1
        n0 = intlin.kernel_basis(intlin.imat([list(uvec), e_last]))
        iota_cols = [[int(iota[i, j]) for i in range(n + 2)] for j in range(n)]
        same = len(n0) == n and intlin.lattice_equal(
            intlin.imat([list(v) for v in n0], cols=n + 2),
            intlin.imat(iota_cols, cols=n + 2),
        )
        injective = intlin.rational_rank(iota) == n
        checks["lattice_identification"] = {
            "ok": bool(same and injective),
            "witness": None if same and injective else {"u": [int(x) for x in uvec]},
        }

    lhs = d.Ptilde @ d.psi
    rhs = iota[: n + 1] @ fan.ray_matrix()
    ok = lhs.shape == rhs.shape and all(
        int(x) == int(y) for x, y in zip(np.ravel(lhs), np.ravel(rhs))
    )
    checks["diagram_commutes"] = {
        "ok": ok,
        "witness": None if ok else {"lhs": lhs.tolist(), "rhs": rhs.tolist()},
    }

    witness = None
    for ci, (sigma, st) in enumerate(zip(fan.max_cones, d.ambient_cones)):
        st_set = set(st)
        for j in sigma:
            support = {1 + c for c in range(d.psi.shape[0]) if d.psi[c, j] != 0}
            if not support <= st_set:
                witness = {"cone": ci, "ray": j}
                break
        if witness:
            break
    checks["cox_cone_mapping"] = {"ok": witness is None, "witness": witness}

    checks["fiber_fan_roundtrip"] = _roundtrip_check(fan, d, iota)

    return {"passes": all(c["ok"] for c in checks.values()), "checks": checks}


def _roundtrip_check(fan: Fan, d: DeformationData, iota) -> dict:
    """Pull each sigma-tilde back through iota; the result must be sigma.

    Containment of sigma is implied by cone_membership; the reverse
    containment is a rational infeasibility statement checked exactly.
    """
    n = fan.dim
    eye = intlin.identity(n + 2)
    for ci, (sigma, st) in enumerate(zip(fan.max_cones, d.ambient_cones)):
        b = d.P[:, list(st)]
        binv_cols = [intlin.solve_int(b, eye[:, k]) for k in range(n + 2)]
        if any(c is None for c in binv_cols):
            return {"ok": False, "witness": {"cone": ci, "reason": "non-unimodular"}}
        binv = np.stack(binv_cols, axis=1)
        pull = binv @ iota  # (n+2) x n: rows are the pulled-back inequalities
        bs = fan.cone_matrix(sigma)
        dual_cols = [intlin.solve_int(bs, intlin.ivec([1 if k == i else 0 for k in range(n)])) for i in range(n)]
        dual = np.stack(dual_cols, axis=1)  # rows are the dual basis functionals
        for i in range(n):
            # feasible point would satisfy pull*v >= 0 and dual_i*v <= -1
            ineq_rows = [[int(x) for x in row] for row in pull]
            rhs = [0] * (n + 2)
            ineq_rows.append([-int(x) for x in dual[i]])
            rhs.append(1)
            if intlin.rational_polyhedron_nonempty(
                intlin.imat(ineq_rows, cols=n), intlin.ivec(rhs)
            ):
                return {"ok": False, "witness": {"cone": ci, "functional": i}}
    return {"ok": True, "witness": None}


def ambient_irrelevant_primes(d: DeformationData) -> tuple[tuple[int, ...], ...]:
    """Minimal prime components of the ambient irrelevant ideal.

    These are the minimal transversals (hitting sets) of the family of
    sigma-tilde complements, as sorted tuples of P column indices.
    """
    width = d.P.shape[1]
    complements = [
        frozenset(range(width)) - frozenset(st) for st in d.ambient_cones
    ]
    return _minimal_hitting_sets(complements, width)


def _minimal_hitting_sets(sets, ground: int) -> tuple[tuple[int, ...], ...]:
    sets = [set(s) for s in sets]
    results: list[set] = []

    def rec(chosen: set, remaining: list[set]):
        if any(chosen >= r for r in results):
            return
        uncovered = [s for s in remaining if not (s & chosen)]
        if not uncovered:
            results.append(set(chosen))
            return
        pivot = min(uncovered, key=len)
        for x in sorted(pivot):
            rec(chosen | {x}, uncovered)

    rec(set(), sets)
    minimal = [
        s for s in results if not any(other < s for other in results)
    ]
    dedup = {tuple(sorted(s)) for s in minimal}
    return tuple(sorted(dedup))
