import numpy as np
import pytest

from asymkit import (
    FiniteGroup,
    FormatError,
    SU2Group,
    U1Group,
    check_group_axioms,
    conjugacy_classes,
    haar_average,
    inverse,
    multiply,
    builtin_group,
    cyclic_group,
)
from asymkit.groups import (
    QUAT_IDENTITY,
    quat_conjugate,
    quat_from_axis_angle,
    quat_multiply,
)
from asymkit.catalog import symmetric_group_s3
from asymkit.reps import spin_generators, su2_rotation


class TestGroupAxioms:
    def test_z2_table_is_a_group(self):
        assert check_group_axioms([[0, 1], [1, 0]])

    def test_non_latin_square_rejected(self):
        assert not check_group_axioms([[0, 1], [1, 1]])

    def test_s3_table_from_permutation_composition(self):
        # independent construction: compose permutations directly
        from itertools import permutations

        perms = list(permutations(range(3)))
        index = {p: i for i, p in enumerate(perms)}
        table = [
            [index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms
        ]
        assert check_group_axioms(table)

    def test_malformed_tables_raise_format_error(self):
        with pytest.raises(FormatError):
            check_group_axioms([[0, 1]])
        with pytest.raises(FormatError):
            check_group_axioms([[0, 5], [5, 0]])

    def test_missing_identity_rejected(self):
        # Latin square without a two-sided identity
        assert not check_group_axioms([[1, 2, 0], [0, 1, 2], [2, 0, 1]])


class TestMultiplication:
    def test_cyclic_arithmetic(self):
        z3 = cyclic_group(3)
        assert multiply(z3, 1, 1) == 2
        assert inverse(z3, 1) == 2
        assert inverse(z3, z3.identity) == z3.identity

    def test_z4_inverse(self):
        z4 = cyclic_group(4)
        assert inverse(z4, 1) == 3

    def test_u1_angle_addition_wraps(self):
        u1 = U1Group(2)
        assert multiply(u1, 3 * np.pi / 2, 3 * np.pi / 2) == pytest.approx(np.pi)
        assert inverse(u1, 1.0) == pytest.approx(2 * np.pi - 1.0)

    def test_su2_quaternion_inverse(self):
        su2 = SU2Group(2)
        q = quat_from_axis_angle([1.0, 2.0, -1.0], 0.77)
        assert np.allclose(multiply(su2, q, inverse(su2, q)), QUAT_IDENTITY, atol=1e-12)

    def test_kind_mismatch_raises_type_error(self):
        z3 = cyclic_group(3)
        with pytest.raises(TypeError):
            multiply(z3, 0.5, 1)
        u1 = U1Group(1)
        with pytest.raises(TypeError):
            multiply(u1, np.array([1.0, 0, 0, 0]), 0.1)

    def test_quaternion_matches_spin_half_matrices(self):
        # the quaternion product must compose the same way the unitaries do
        jx, jy, jz = spin_generators(1)
        qa = quat_from_axis_angle([0, 0, 1], 1.1)
        qb = quat_from_axis_angle([1, 1, 0], 0.6)
        ua = su2_rotation(jx, jy, jz, qa)
        ub = su2_rotation(jx, jy, jz, qb)
        uab = su2_rotation(jx, jy, jz, quat_multiply(qa, qb))
        assert np.allclose(ua @ ub, uab, atol=1e-12)


class TestHaarAverage:
    def test_z2_average_projects_onto_invariants(self):
        z2 = cyclic_group(2)
        mats = [np.eye(2), np.diag([1.0, -1.0])]
        avg = haar_average(z2, lambda i: mats[i])
        assert np.allclose(avg, np.diag([1.0, 0.0]), atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_u1_nonzero_frequency_averages_to_zero(self, n):
        u1 = U1Group(2)
        avg = haar_average(u1, lambda th: np.array([[np.exp(1j * n * th)]]))
        assert abs(avg[0, 0]) <= 1e-14

    def test_u1_zero_frequency_averages_to_one(self):
        u1 = U1Group(2)
        avg = haar_average(u1, lambda th: np.array([[1.0 + 0j]]))
        assert avg[0, 0] == pytest.approx(1.0)

    def test_su2_wigner_matrix_averages_to_zero(self):
        su2 = SU2Group(2)
        jx, jy, jz = spin_generators(1)
        avg = haar_average(su2, lambda q: su2_rotation(jx, jy, jz, q), band_limit=1)
        assert np.max(np.abs(avg)) <= 1e-12

    def test_left_and_right_invariance(self, rng):
        g, table = builtin_group("S3")
        ir = table["standard"]
        h = int(rng.integers(0, g.order))
        base = haar_average(g, lambda i: ir.matrices[i])
        left = haar_average(g, lambda i: ir.matrices[g.multiply(h, i)])
        right = haar_average(g, lambda i: ir.matrices[g.multiply(i, h)])
        assert np.max(np.abs(left - base)) <= 1e-12
        assert np.max(np.abs(right - base)) <= 1e-12

    def test_u1_invariance_under_shift(self, rng):
        u1 = U1Group(3)
        shift = float(rng.uniform(0, 2 * np.pi))
        f = lambda th: np.array([[np.exp(2j * th)], [np.exp(-3j * th)]])
        base = haar_average(u1, f)
        shifted = haar_average(u1, lambda th: f(u1.multiply(shift, th)))
        assert np.max(np.abs(shifted - base)) <= 1e-10

    def test_su2_invariance_under_shift(self, rng):
        su2 = SU2Group(1)
        jx, jy, jz = spin_generators(1)
        h = quat_from_axis_angle(rng.standard_normal(3), float(rng.uniform(0, np.pi)))
        f = lambda q: su2_rotation(jx, jy, jz, q)
        base = haar_average(su2, f, band_limit=1)
        shifted = haar_average(su2, lambda q: f(quat_multiply(h, q)), band_limit=1)
        assert np.max(np.abs(shifted - base)) <= 1e-10

    def test_finite_schur_orthogonality(self, group_and_table):
        group, table = group_and_table
        for mu in table:
            for nu in table:
                # <[U_mu]_ij, [U_nu]_kl> = delta_{mu nu} delta_ik delta_jl / d_mu
                inner = np.einsum("gij,gkl->ijkl", mu.matrices.conj(), nu.matrices) / group.order
                if mu.label != nu.label:
                    assert np.max(np.abs(inner)) <= 1e-12
                else:
                    d = mu.dim
                    expected = np.einsum("ik,jl->ijkl", np.eye(d), np.eye(d)) / d
                    assert np.max(np.abs(inner - expected)) <= 1e-12

    def test_su2_quadrature_schur_orthogonality(self):
        # all Wigner matrix elements up to the configured max spin, pairwise
        su2 = SU2Group(4)  # spins up to 2
        quats, weights = su2.haar_quadrature()
        gens = {tj: spin_generators(tj) for tj in range(5)}
        tables = {
            tj: np.array([su2_rotation(*gens[tj], q) for q in quats]) for tj in gens
        }
        for tj_a in gens:
            for tj_b in gens:
                da, db = tj_a + 1, tj_b + 1
                inner = np.einsum(
                    "g,gij,gkl->ijkl", weights, tables[tj_a].conj(), tables[tj_b]
                )
                if tj_a != tj_b:
                    assert np.max(np.abs(inner)) <= 1e-10
                else:
                    expected = np.einsum("ik,jl->ijkl", np.eye(da), np.eye(db)) / da
                    assert np.max(np.abs(inner - expected)) <= 1e-10

    def test_quadrature_capacity_is_enforced(self):
        from asymkit import ConfigurationError

        with pytest.raises(ConfigurationError):
            haar_average(U1Group(2), lambda th: np.array([[1.0]]), band_limit=5)
        with pytest.raises(ConfigurationError):
            haar_average(SU2Group(1), lambda q: np.eye(1), band_limit=3)


class TestConjugacyClasses:
    def test_cyclic_groups_have_singleton_classes(self):
        z6 = cyclic_group(6)
        classes = conjugacy_classes(z6)
        assert len(classes) == 6
        assert all(len(c) == 1 for c in classes)

    def test_s3_class_sizes(self):
        # exhaustive conjugation over the composed table
        s3 = symmetric_group_s3()
        sizes = sorted(len(c) for c in conjugacy_classes(s3))
        assert sizes == [1, 2, 3]

    def test_d4_has_five_classes(self):
        g, _ = builtin_group("D4")
        assert len(conjugacy_classes(g)) == 5

    def test_classes_closed_under_conjugation(self, group_and_table):
        group, _ = group_and_table
        t = group.mult_table
        inv = group.inverse_table
        for cls in conjugacy_classes(group):
            members = set(cls)
            for g in cls:
                for h in group.elements():
                    assert int(t[t[h, g], inv[h]]) in members


class TestFiniteGroupConstruction:
    def test_labels_must_match_table(self):
        with pytest.raises(FormatError):
            FiniteGroup(["e"], [[0, 1], [1, 0]])

    def test_inverse_table_consistency(self, group_and_table):
        group, _ = group_and_table
        for i in group.elements():
            assert group.multiply(i, group.inverse(i)) == group.identity_index

    def test_quaternion_group_relations(self):
        q8, _ = builtin_group("Q8")
        i, j, k = q8.index_of("i"), q8.index_of("j"), q8.index_of("k")
        minus = q8.index_of("-1")
        assert q8.multiply(i, j) == k
        assert q8.multiply(i, i) == minus
        assert q8.multiply(j, j) == minus
