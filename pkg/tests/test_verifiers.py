import numpy as np
import pytest

from strongprops.errors import InputError
from strongprops.numerics import fro
from strongprops.patterns import Graph, SignPattern, edge_span_basis
from strongprops.verifiers import (
    verify_nssp,
    verify_property,
    verify_sap,
    verify_smp,
    verify_ssp,
)

from conftest import (
    adjacency,
    random_graph,
    random_in_graph_class,
    random_square_with_zeros,
)

ALL_SYMMETRIC = (verify_ssp, verify_smp, verify_sap)


class TestSSP:
    def test_complete_graph_trivial(self):
        rng = np.random.default_rng(20)
        for n in (2, 3, 5):
            g = Graph.complete(n)
            report = verify_ssp(random_in_graph_class(rng, g), g)
            assert report.holds
            assert report.nullspace_dim == 0
            assert np.isinf(report.smallest_structural_singular_value)

    def test_zero_matrix_empty_graph_fails(self):
        g = Graph.empty(2)
        report = verify_ssp(np.zeros((2, 2)), g)
        assert not report.holds
        # the only constrained direction is the off-diagonal pair
        expected = np.array([[0.0, 1.0], [1.0, 0.0]]) / np.sqrt(2.0)
        assert np.allclose(np.abs(report.witness), expected)
        assert abs(fro(report.witness) - 1.0) <= 1e-12

    def test_path3_brute_force_oracle(self):
        # constrained subspace of P3 is 1-dimensional: span{(e02+e20)/sqrt 2};
        # its commutator with the adjacency is nonzero, so X = O is forced
        g = Graph.path(3)
        a = adjacency(g)
        basis = edge_span_basis(g.complement())
        assert basis.dim == 1
        x = basis.matrices[0]
        assert fro(a @ x - x @ a) > 0.5
        report = verify_ssp(a, g)
        assert report.holds and report.nullspace_dim == 0

    def test_rejects_matrix_outside_class(self):
        with pytest.raises(InputError):
            verify_ssp(np.eye(3), Graph.path(3))

    def test_rejects_size_mismatch(self):
        with pytest.raises(InputError):
            verify_ssp(np.zeros((2, 2)), Graph.path(3))


class TestSMP:
    def test_ssp_implies_smp(self, twisted_c4, c4):
        assert verify_ssp(twisted_c4, c4).holds
        assert verify_smp(twisted_c4, c4).holds

    def test_c4_adjacency_routes_agree(self, c4):
        # the verifier hard-errors on primal/dual disagreement, so a clean
        # return already certifies agreement
        report = verify_smp(adjacency(c4), c4)
        assert report.holds == report.dual_verdict
        assert report.q_used == 3

    def test_zero_matrix_empty_graph_fails(self):
        report = verify_smp(np.zeros((2, 2)), Graph.empty(2))
        assert not report.holds
        assert report.q_used == 1
        assert report.witness is not None

    def test_ambiguous_clustering_reports_alternatives(self):
        # one gap lands between the clustering threshold and twice the
        # threshold: both q candidates' verdicts are reported
        g = Graph.empty(3)
        a = np.diag([0.0, 1.5e-6, 1.0])
        report = verify_smp(a, g)
        assert report.q_used == 3
        alt_qs = [q for q, _ in report.q_alternatives]
        assert 2 in alt_qs


class TestSAP:
    def test_invertible_holds(self):
        g = Graph.path(3)
        a = adjacency(g) + np.diag([3.0, -4.0, 5.0])
        assert abs(np.linalg.det(a)) > 1.0
        assert verify_sap(a, g).holds

    def test_zero_matrix_fails(self):
        assert not verify_sap(np.zeros((2, 2)), Graph.empty(2)).holds

    def test_example15_sign_pattern_irrelevant_here(self, twisted_c4, c4):
        # SSP implies SAP
        assert verify_sap(twisted_c4, c4).holds


class TestNSSP:
    def test_full_matrix_holds(self):
        rng = np.random.default_rng(21)
        a = rng.normal(size=(3, 3))
        a[np.abs(a) < 0.1] = 0.5
        report = verify_nssp(a)
        assert report.holds
        assert np.isinf(report.smallest_structural_singular_value)

    def test_example15_holds(self, example15, example15_pattern):
        assert verify_nssp(example15).holds
        assert verify_nssp(example15, pattern=example15_pattern).holds

    def test_zero_matrix_fails(self):
        report = verify_nssp(np.zeros((2, 2)))
        assert not report.holds and report.witness is not None

    def test_jordan_block_hand_solved(self):
        # X supported on the zero cells of J2(0) with [A, X^T] = O is the
        # two-parameter family [[x, 0], [y, x]]: dimension 2, nSSP fails
        report = verify_nssp(np.array([[0.0, 1.0], [0.0, 0.0]]))
        assert not report.holds
        assert report.nullspace_dim == 2

    def test_pattern_membership_checked(self):
        p = SignPattern.from_rows([[1, 1], [1, 1]])
        with pytest.raises(InputError):
            verify_nssp(np.array([[1.0, -1.0], [1.0, 1.0]]), pattern=p)


class TestCrossProperties:
    def _sym_corpus(self, count=40, max_n=5, seed=22):
        rng = np.random.default_rng(seed)
        out = []
        for _ in range(count):
            n = int(rng.integers(2, max_n + 1))
            g = random_graph(rng, n)
            out.append((random_in_graph_class(rng, g), g))
        return out

    def test_duality_and_implications(self):
        for a, g in self._sym_corpus():
            ssp = verify_ssp(a, g)
            smp = verify_smp(a, g)
            sap = verify_sap(a, g)
            for report in (ssp, smp, sap):
                assert report.holds == report.dual_verdict
                # nullspace and dual span measure the same subspace sum
                assert report.ambient_dim - report.dual_span_dim == report.nullspace_dim
            if ssp.holds:
                assert smp.holds
            if smp.holds:
                assert sap.holds

    def test_nssp_duality(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            n = int(rng.integers(2, 6))
            a = random_square_with_zeros(rng, n)
            report = verify_nssp(a)
            assert report.holds == report.dual_verdict
            assert report.ambient_dim - report.dual_span_dim == report.nullspace_dim

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(24)
        for _ in range(15):
            n = int(rng.integers(2, 6))
            g = random_graph(rng, n)
            a = random_in_graph_class(rng, g)
            perm = list(rng.permutation(n))
            p = np.zeros((n, n))
            for v, image in enumerate(perm):
                p[image, v] = 1.0
            g2 = g.permuted(perm)
            a2 = p @ a @ p.T
            assert verify_ssp(a, g).holds == verify_ssp(a2, g2).holds
            assert verify_smp(a, g).holds == verify_smp(a2, g2).holds
            assert verify_sap(a, g).holds == verify_sap(a2, g2).holds

    def test_scaling_invariance(self):
        rng = np.random.default_rng(25)
        for _ in range(8):
            n = int(rng.integers(2, 5))
            g = random_graph(rng, n)
            a = random_in_graph_class(rng, g)
            base = (
                verify_ssp(a, g).holds,
                verify_smp(a, g).holds,
                verify_sap(a, g).holds,
            )
            for c in (2.0, -3.0, 1e-6, 1e6):
                assert (
                    verify_ssp(c * a, g).holds,
                    verify_smp(c * a, g).holds,
                    verify_sap(c * a, g).holds,
                ) == base
        b = random_square_with_zeros(rng, 4)
        base = verify_nssp(b).holds
        for c in (2.0, -3.0, 1e-6, 1e6):
            assert verify_nssp(c * b).holds == base

    def test_witness_validity(self):
        # deliberately degenerate fixtures (failures are non-generic):
        # repeated diagonal on the empty graph kills the SSP; a doubled path
        # component with identical spectrum kills it with a cross-component
        # witness; a singular all-ones block plus an isolated vertex kills
        # the SAP.
        doubled_p2 = np.zeros((4, 4))
        doubled_p2[0, 1] = doubled_p2[1, 0] = 1.0
        doubled_p2[2, 3] = doubled_p2[3, 2] = 1.0
        union_p2 = Graph.from_edges(4, [(0, 1), (2, 3)])
        ones_block = np.zeros((3, 3))
        ones_block[:2, :2] = 1.0
        k2_plus_k1 = Graph.from_edges(3, [(0, 1)])
        fixtures = [
            (verify_ssp, np.zeros((2, 2)), Graph.empty(2)),
            (verify_sap, np.zeros((2, 2)), Graph.empty(2)),
            (verify_ssp, np.diag([1.0, 1.0]), Graph.empty(2)),
            (verify_smp, np.diag([2.0, 2.0, 5.0]), Graph.empty(3)),
            (verify_ssp, doubled_p2, union_p2),
            (verify_sap, ones_block, k2_plus_k1),
        ]
        equations = {
            "ssp": lambda m, x: m @ x - x @ m,
            "smp": lambda m, x: m @ x - x @ m,
            "sap": lambda m, x: m @ x,
        }
        for verifier, a, g in fixtures:
            report = verifier(a, g)
            assert not report.holds
            x = report.witness
            assert x is not None
            assert abs(fro(x) - 1.0) <= 1e-10
            # witness lives in the constrained subspace exactly
            assert np.max(np.abs(np.diag(x))) <= 1e-12
            for i, j in g.edges:
                assert abs(x[i, j]) <= 1e-12
            residual = fro(equations[report.property_name](a, x))
            assert residual <= 1e-8 * max(fro(a), 1.0) * fro(x)

    def test_dispatch(self, c4, twisted_c4):
        assert verify_property("ssp", twisted_c4, graph=c4).holds
        assert verify_property("nssp", np.eye(2) + 1.0).holds
        with pytest.raises(InputError):
            verify_property("xyz", twisted_c4, graph=c4)
        with pytest.raises(InputError):
            verify_property("ssp", twisted_c4)
