"""One-parameter deformation packages built from admissible triples.

Golden oracle: the Hirzebruch family. For the fan with rays
(1,0),(0,1),(-1,n),(0,-1) and the triple m=(-alpha,-1), rho=1, C={0}
(0 < alpha < n), the block data is known in closed form:

  a = (-alpha, -1, alpha-n, 1)
  columns: T1, T(1,4), T(2,1), T(2,2), T(3,2), T(3,3)
  Ptilde  = [[1,-alpha,-1,0,0],[1,0,0,-1,alpha-n],[0,1,0,0,-1]]
  nu      = [[0,1,0,alpha,0],[0,0,1,1,0],[0,0,n-alpha,0,1],[1,0,0,0,0]]
  trinomial  T1*T(1,4) - T(2,1)^alpha*T(2,2) + T(3,2)*T(3,3)^(n-alpha)

The central-fiber verification is proved to hold for every admissible
triple, so it doubles as a property check across whole enumerations.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from toric_deform import intlin
from toric_deform.deform import (
    DeformationData,
    _iota_matrix,
    ambient_fan,
    ambient_irrelevant_primes,
    build_deformation,
    build_splitting,
    build_u_index,
    eta_map,
    kernel_binomial,
    verify_central_fiber,
)
from toric_deform.fan import Fan, hirzebruch, product_of_lines, validate
from toric_deform.triples import AdmissibleTriple, enumerate_triples


def scroll_210_fan() -> Fan:
    """The projectivized bundle fan for twists (2,1,0), written out by hand."""
    return Fan(
        dim=3,
        rays=((1, 0, 0), (-1, 2, 1), (0, 1, 0), (0, 0, 1), (0, -1, -1)),
        max_cones=((0, 2, 3), (0, 2, 4), (0, 3, 4), (1, 2, 3), (1, 2, 4), (1, 3, 4)),
    )


def hirzebruch_package(n: int, alpha: int) -> DeformationData:
    fan = hirzebruch(n)
    t = AdmissibleTriple(m=(-alpha, -1), rho=1, component=(0,))
    return build_deformation(fan, t)


GOLDEN_PARAMS = [(2, 1), (3, 1), (3, 2), (5, 2)]


class TestGoldenHirzebruch:
    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_column_labels(self, n, alpha):
        d = hirzebruch_package(n, alpha)
        assert d.column_labels == (
            "T1",
            "T(1,4)",
            "T(2,1)",
            "T(2,2)",
            "T(3,2)",
            "T(3,3)",
        )

    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_a_values(self, n, alpha):
        d = hirzebruch_package(n, alpha)
        assert d.a == (-alpha, -1, alpha - n, 1)

    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_ptilde_matrix(self, n, alpha):
        d = hirzebruch_package(n, alpha)
        expected = [
            [1, -alpha, -1, 0, 0],
            [1, 0, 0, -1, alpha - n],
            [0, 1, 0, 0, -1],
        ]
        assert d.Ptilde.tolist() == expected

    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_full_p_matrix(self, n, alpha):
        d = hirzebruch_package(n, alpha)
        expected = [
            [1, 1, -alpha, -1, 0, 0],
            [1, 1, 0, 0, -1, alpha - n],
            [0, 0, 1, 0, 0, -1],
            [1, 0, 0, 0, 0, 0],
        ]
        assert d.P.tolist() == expected

    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_nu_matrix(self, n, alpha):
        d = hirzebruch_package(n, alpha)
        expected = [
            [0, 1, 0, alpha, 0],
            [0, 0, 1, 1, 0],
            [0, 0, n - alpha, 0, 1],
            [1, 0, 0, 0, 0],
        ]
        assert d.nu.tolist() == expected
        assert d.psi.tolist() == np.array(expected).T.tolist()

    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_trinomial_exponents(self, n, alpha):
        d = hirzebruch_package(n, alpha)
        (c1, t1), (c2, t2), (c3, t3) = d.trinomial.terms
        assert (c1, c2, c3) == (1, -1, 1)
        assert t1 == (1, 1, 0, 0, 0, 0)
        assert t2 == (0, 0, alpha, 1, 0, 0)
        assert t3 == (0, 0, 0, 0, 1, n - alpha)

    def test_trinomial_rendering(self):
        d = hirzebruch_package(2, 1)
        assert d.trinomial.rendered() == "T1*T(1,4) - T(2,1)*T(2,2) + T(3,2)*T(3,3)"
        d = hirzebruch_package(5, 2)
        assert (
            d.trinomial.rendered()
            == "T1*T(1,4) - T(2,1)^2*T(2,2) + T(3,2)*T(3,3)^3"
        )

    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_kernel_binomial(self, n, alpha):
        d = hirzebruch_package(n, alpha)
        assert kernel_binomial(d).tolist() == [0, alpha, 1, -1, -(n - alpha)]

    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_iota_of_second_ray(self, n, alpha):
        fan = hirzebruch(n)
        d = hirzebruch_package(n, alpha)
        iota = _iota_matrix(fan, d)
        assert (iota @ intlin.ivec([0, 1])).tolist() == [-1, -1, 0, 0]

    def test_diagram_on_fourth_ray(self):
        # both paths around the square, evaluated on the last basis vector
        d = hirzebruch_package(2, 1)
        image = d.Ptilde @ (-d.psi[:, 3])
        assert image.tolist() == [-1, -1, 0]

    def test_ambient_cone_indices(self):
        d = hirzebruch_package(2, 1)
        # cone {2,3} misses C={0}, so the rho column used is the block-2 one
        by_cone = dict(zip(hirzebruch(2).max_cones, d.ambient_cones))
        assert by_cone[(2, 3)] == (
            0,
            d.column_of((1, 3)),
            d.column_of((2, 1)),
            d.column_of((3, 2)),
        )
        # cone {0,1} meets C, so rho contributes through its block-3 column,
        # which ray 1 already provides
        assert by_cone[(0, 1)] == tuple(
            sorted(
                (
                    0,
                    d.column_of((2, 0)),
                    d.column_of((2, 1)),
                    d.column_of((3, 1)),
                )
            )
        )
        for st in d.ambient_cones:
            assert 0 in st
            assert len(st) == 4


class TestUIndexAndSplitting:
    def test_u_partition(self):
        u = build_u_index((-1, -1, -1, 1), rho=1, component=(0,))
        assert u.u1 == ((1, 3),)
        assert u.u2 == ((2, 0), (2, 1))
        assert u.u3 == ((3, 1), (3, 2))
        assert u.u4 == ()

    def test_zero_values_land_in_u4(self):
        u = build_u_index((0, -1, 2, 0), rho=1, component=(3,))
        assert u.u1 == ((1, 2),)
        assert u.u2 == ((2, 1),)
        assert u.u3 == ((3, 1),)
        assert u.u4 == ((4, 0), (4, 3))

    def test_rho_appears_in_both_negative_blocks(self):
        for fan in [hirzebruch(2), hirzebruch(4), scroll_210_fan()]:
            for t in enumerate_triples(fan):
                d = build_deformation(fan, t)
                assert (2, t.rho) in d.u.u2
                assert (3, t.rho) in d.u.u3

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_splitting_identities(self, n):
        fan = hirzebruch(n)
        m = (-1, -1)
        s = build_splitting(fan, m, rho=1)
        v_rho = intlin.ivec(fan.rays[1])
        # the section hits the marked ray and projects to zero
        assert intlin.ivec(m) @ v_rho == -1
        assert all(x == 0 for x in s.proj @ v_rho)
        basis = intlin.imat([list(b) for b in s.k_basis], cols=fan.dim)
        for ray in fan.rays:
            v = intlin.ivec(ray)
            value = int(intlin.ivec(m) @ v)
            recovered = basis.T @ (s.proj @ v)
            shifted = v + value * v_rho
            assert recovered.tolist() == shifted.tolist()


class TestBuildValidation:
    def test_rejects_component_union(self):
        fan = hirzebruch(2)
        t = AdmissibleTriple(m=(-1, -1), rho=1, component=(0, 2))
        with pytest.raises(ValueError, match="not a proper connected component"):
            build_deformation(fan, t)

    def test_rejects_vertex_not_in_graph(self):
        fan = hirzebruch(2)
        t = AdmissibleTriple(m=(-1, -1), rho=1, component=(3,))
        with pytest.raises(ValueError, match="not a proper connected component"):
            build_deformation(fan, t)

    def test_rejects_wrong_rho(self):
        fan = hirzebruch(2)
        t = AdmissibleTriple(m=(-1, -1), rho=3, component=(0,))
        with pytest.raises(ValueError, match="expected -1"):
            build_deformation(fan, t)


def all_packages():
    fans = [hirzebruch(2), hirzebruch(3), hirzebruch(4), scroll_210_fan()]
    out = []
    for fan in fans:
        for t in enumerate_triples(fan):
            out.append((fan, build_deformation(fan, t)))
    return out


class TestStructuralInvariants:
    def test_enumerations_are_nonempty(self):
        assert len(all_packages()) >= 8

    def test_matrix_shapes(self):
        for fan, d in all_packages():
            n, r = fan.dim, fan.n_rays
            width = len(d.u.all_pairs)
            assert d.P.shape == (n + 2, 1 + width)
            assert d.Ptilde.shape == (n + 1, width)
            assert d.psi.shape == (width, r)
            assert d.nu.shape == (r, width)
            assert width == r + 1  # every ray once, rho twice

    def test_first_column_and_bottom_row(self):
        for fan, d in all_packages():
            n = fan.dim
            first = [0] * (n + 2)
            first[0] = first[1] = first[n + 1] = 1
            assert d.P[:, 0].tolist() == first
            bottom = [0] * d.P.shape[1]
            bottom[0] = 1
            assert d.P[n + 1, :].tolist() == bottom

    def test_binomial_spans_kernel_of_nu(self):
        for _, d in all_packages():
            b = kernel_binomial(d)
            assert all(x == 0 for x in d.nu @ b)
            rows = intlin.kernel_basis(d.nu)
            assert len(rows) == 1
            got = list(rows[0])
            want = b.tolist()
            assert got == want or got == [-x for x in want]

    def test_binomial_killed_by_ambient_grading(self):
        for _, d in all_packages():
            assert all(x == 0 for x in d.Qtilde @ kernel_binomial(d))

    def test_ambient_grading_is_free(self):
        for _, d in all_packages():
            grading, invariants = intlin.cokernel_map(d.Ptilde.T)
            assert not invariants
            assert grading.tolist() == d.Qtilde.tolist()

    def test_base_variable_has_degree_zero(self):
        # the full exponent-to-class map must kill the first column
        for _, d in all_packages():
            grading, invariants = intlin.cokernel_map(d.P.T)
            assert not invariants
            assert all(x == 0 for x in grading[:, 0])

    def test_induced_class_group_map_is_iso(self):
        from toric_deform.fan import cox_data

        for fan, d in all_packages():
            q_x = cox_data(fan).grading
            width = d.Qtilde.shape[1]
            # well defined: the composite kills relations of the ambient
            assert np.count_nonzero(q_x @ d.nu @ d.Ptilde.T) == 0
            cl = d.Qtilde.shape[0]
            eye = intlin.identity(cl)
            right = [intlin.solve_int(d.Qtilde, eye[:, k]) for k in range(cl)]
            assert all(col is not None for col in right)
            r_mat = np.stack(right, axis=1)
            nbar = q_x @ d.nu @ r_mat
            assert nbar.shape == (q_x.shape[0], cl)
            assert abs(intlin.determinant(nbar)) == 1


class TestEtaMap:
    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_golden_substitutions(self, n, alpha):
        table = eta_map(hirzebruch_package(n, alpha))
        assert table["T1"] is None
        assert table["T(1,4)"] == {"S4": 1}
        assert table["T(2,1)"] == {"S1": 1}
        assert table["T(2,2)"] == {"S2": 1, "S3": n - alpha}
        assert table["T(3,2)"] == {"S1": alpha, "S2": 1}
        assert table["T(3,3)"] == {"S3": 1}

    def test_non_marked_variables_restrict_to_identity(self):
        for _, d in all_packages():
            table = eta_map(d)
            rho = d.triple.rho
            for k, i in d.u.all_pairs:
                if i == rho:
                    continue
                assert table[f"T({k},{i + 1})"] == {f"S{i + 1}": 1}

    def test_binomial_terms_have_equal_images(self):
        for _, d in all_packages():
            _, t2 = d.trinomial.terms[1]
            _, t3 = d.trinomial.terms[2]
            img2 = d.nu @ intlin.ivec(list(t2)[1:])
            img3 = d.nu @ intlin.ivec(list(t3)[1:])
            assert img2.tolist() == img3.tolist()


class TestCentralFiber:
    @pytest.mark.parametrize("n,alpha", GOLDEN_PARAMS)
    def test_golden_cases_verify(self, n, alpha):
        fan = hirzebruch(n)
        report = verify_central_fiber(fan, hirzebruch_package(n, alpha))
        assert report["passes"], report
        assert set(report["checks"]) == {
            "cone_membership",
            "lattice_identification",
            "diagram_commutes",
            "cox_cone_mapping",
            "fiber_fan_roundtrip",
        }

    def test_every_enumerated_triple_verifies(self):
        for fan, d in all_packages():
            report = verify_central_fiber(fan, d)
            assert report["passes"], (d.triple, report)

    def test_product_of_lines_has_no_triples(self):
        fan = product_of_lines(3)
        assert enumerate_triples(fan) == []


class TestAmbientFan:
    def test_hirzebruch_ambient_shape(self):
        d = hirzebruch_package(2, 1)
        af = ambient_fan(d)
        assert af.dim == 4
        assert af.n_rays == 6
        assert len(af.max_cones) == 4
        assert all(len(c) == 4 for c in af.max_cones)
        assert validate(af)["smooth"]

    def test_ambient_rays_are_p_columns(self):
        for _, d in all_packages():
            af = ambient_fan(d)
            for j in range(d.P.shape[1]):
                assert tuple(int(x) for x in d.P[:, j]) == af.rays[j]

    def test_ambient_fans_are_smooth(self):
        for _, d in all_packages():
            assert validate(ambient_fan(d))["smooth"]


class TestIrrelevantPrimes:
    def brute_minimal_hitting_sets(self, complements, width):
        hits = []
        for size in range(width + 1):
            for cand in itertools.combinations(range(width), size):
                s = set(cand)
                if all(s & c for c in complements):
                    hits.append(s)
        minimal = [s for s in hits if not any(o < s for o in hits)]
        return tuple(sorted(tuple(sorted(s)) for s in minimal))

    def test_matches_brute_force(self):
        for _, d in all_packages():
            width = d.P.shape[1]
            complements = [set(range(width)) - set(st) for st in d.ambient_cones]
            expected = self.brute_minimal_hitting_sets(complements, width)
            assert ambient_irrelevant_primes(d) == expected

    def test_primes_avoid_the_base_column(self):
        # every ambient cone contains column 0, so no prime needs it
        for _, d in all_packages():
            for prime in ambient_irrelevant_primes(d):
                assert 0 not in prime
