import numpy as np
import pytest

from asymkit import (
    DecompositionError,
    FiniteRep,
    SU2Group,
    SU2Rep,
    U1Group,
    U1Rep,
    ValidationError,
    builtin_group,
    char_fn,
    check_representation,
    cyclic_group,
    cyclic_irreps,
    decompose,
    direct_sum_rep,
    embed_state,
    invariant_unitary,
    isotypic_projector,
    regular_representation,
    spin_generators,
    tensor_rep,
)
from asymkit._linalg import dagger, random_unitary
from asymkit.reps import IrrepTable

from helpers import rand_state, random_rep


class TestCheckRepresentation:
    def test_regular_rep_of_z3_is_valid(self):
        z3 = cyclic_group(3)
        rep = regular_representation(z3)
        chk = check_representation(rep)
        assert chk.ok and chk.max_violation <= 1e-12

    def test_corrupted_pair_is_located(self):
        z3 = cyclic_group(3)
        rep = regular_representation(z3)
        mats = rep.matrices.copy()
        mats[2] = np.eye(3)  # breaks U(g1)U(g1) = U(g2)
        chk = check_representation(FiniteRep(z3, mats))
        assert not chk.ok
        assert "U(g)U(h) != U(gh)" in chk.detail or "unitary" in chk.detail

    def test_spin_one_generators_satisfy_commutators(self):
        jx, jy, jz = spin_generators(2)
        assert np.linalg.norm(jx @ jy - jy @ jx - 1j * jz) <= 1e-12
        rep = SU2Rep(SU2Group(2), jx, jy, jz)
        chk = check_representation(rep)
        assert chk.ok

    def test_u1_charges_must_be_integers(self):
        with pytest.raises(ValidationError):
            U1Rep(U1Group(2), [0.5, 1])

    def test_u1_charges_respect_band_limit(self):
        with pytest.raises(ValidationError):
            U1Rep(U1Group(1), [0, 3])

    def test_broken_su2_commutators_detected(self):
        jx, jy, jz = spin_generators(1)
        chk = check_representation(SU2Rep(SU2Group(1), jx, jy, 2 * jz))
        assert not chk.ok


class TestIsotypicProjector:
    def test_trivial_projector_counts_plus_one_eigenvectors(self):
        z2, table = builtin_group("Z2")
        mats = np.stack([np.eye(4), np.diag([1.0, -1.0, 1.0, 1.0])]).astype(complex)
        rep = FiniteRep(z2, mats)
        proj = isotypic_projector(rep, table["chi0"])
        # oracle: dimension of the +1 eigenspace of U(g1)
        plus_dim = int(np.sum(np.isclose(np.linalg.eigvalsh(mats[1].real), 1.0)))
        assert np.linalg.matrix_rank(proj, tol=1e-9) == plus_dim == 3
        assert np.allclose(proj @ proj, proj, atol=1e-12)
        assert np.allclose(proj, dagger(proj), atol=1e-12)

    def test_absent_irrep_gives_zero_projector(self):
        s3, table = builtin_group("S3")
        trivial_rep = FiniteRep(s3, np.ones((6, 1, 1), dtype=complex))
        proj = isotypic_projector(trivial_rep, table["standard"])
        assert np.max(np.abs(proj)) <= 1e-12

    def test_u1_charge_projector_is_diagonal_indicator(self):
        rep = U1Rep(U1Group(2), [0, 1, 1])
        table = IrrepTable.for_u1(rep.group)
        proj = isotypic_projector(rep, table["1"])
        assert np.allclose(proj, np.diag([0.0, 1.0, 1.0]), atol=1e-14)

    def test_su2_absent_spin_gives_zero(self, spin_half):
        table = IrrepTable.for_su2(SU2Group(2))
        proj = isotypic_projector(spin_half, table["1"])
        assert np.max(np.abs(proj)) <= 1e-12


class TestDecompose:
    def test_s3_regular_rep_multiplicities_match_characters(self):
        s3, table = builtin_group("S3")
        reg = regular_representation(s3)
        decomp = decompose(reg, table)
        # oracle: <chi_reg, chi_mu> = d_mu
        reg_char = np.einsum("gii->g", reg.matrices)
        for ir in table:
            chars = np.array([ir.character(i) for i in s3.elements()])
            mult = (chars.conj() @ reg_char / s3.order).real
            assert decomp.blocks[ir.label].multiplicity == round(mult) == ir.dim
        decomp.validate(tol=1e-9)

    def test_u1_charge_counting(self):
        rep = U1Rep(U1Group(2), [0, 1, 1])
        decomp = decompose(rep)
        assert decomp.multiplicities() == {"0": 1, "1": 2}

    def test_two_spin_halves_give_singlet_and_triplet(self, spin_half):
        pair = tensor_rep(spin_half, spin_half)
        decomp = decompose(pair)
        assert decomp.multiplicities() == {"1": 1, "0": 1}
        decomp.validate(tol=1e-9)

    def test_three_spin_halves(self, spin_half):
        triple = tensor_rep(tensor_rep(spin_half, spin_half), spin_half)
        decomp = decompose(triple)
        assert decomp.multiplicities() == {"3/2": 1, "1/2": 2}
        decomp.validate(tol=1e-9)

    def test_decomposition_validates_on_random_reps(self, group_and_table, rng):
        group, table = group_and_table
        rep, copies = random_rep(group, table, rng)
        decomp = decompose(rep, table)
        assert decomp.multiplicities() == {
            lab: m for lab, m in copies.items() if m > 0
        }
        decomp.validate(tol=1e-9)

    def test_coverage_failure_reports_residual_dimension(self):
        z4 = cyclic_group(4)
        partial = IrrepTable(z4, list(cyclic_irreps(z4))[:2])
        rep = regular_representation(z4)
        with pytest.raises(DecompositionError) as err:
            decompose(rep, partial)
        assert err.value.residual_dim == 2

    def test_conjugated_rep_has_conjugated_projectors(self, rng):
        d4, table = builtin_group("D4")
        rep, _ = random_rep(d4, table, rng, conjugate=False)
        w = random_unitary(rep.dim, rng)
        conj = FiniteRep(d4, np.einsum("ab,gbc,dc->gad", w, rep.matrices, w.conj()))
        dec_a = decompose(rep, table)
        dec_b = decompose(conj, table)
        for lab, blk in dec_a.blocks.items():
            expected = w @ blk.projector @ dagger(w)
            assert np.max(np.abs(dec_b.blocks[lab].projector - expected)) <= 1e-9


class TestInvariantUnitary:
    def test_identity_blocks_give_identity(self):
        s3, table = builtin_group("S3")
        reg = regular_representation(s3)
        decomp = decompose(reg, table)
        blocks = {lab: np.eye(b.multiplicity) for lab, b in decomp.blocks.items()}
        assert np.allclose(invariant_unitary(decomp, blocks), np.eye(6), atol=1e-10)

    def test_phase_block_acts_as_phase_on_subspace(self):
        z2, table = builtin_group("Z2")
        rep = FiniteRep(z2, np.stack([np.eye(2), np.diag([1.0, -1.0])]).astype(complex))
        decomp = decompose(rep, table)
        alpha = 0.37
        blocks = {
            "chi0": np.array([[np.exp(1j * alpha)]]),
            "chi1": np.eye(1),
        }
        v = invariant_unitary(decomp, blocks)
        p0 = decomp.blocks["chi0"].projector
        assert np.allclose(v @ p0, np.exp(1j * alpha) * p0, atol=1e-12)

    def test_random_blocks_commute_with_rep(self, rng):
        z3 = cyclic_group(3)
        table = cyclic_irreps(z3)
        reg = regular_representation(z3)
        decomp = decompose(reg, table)
        blocks = {lab: random_unitary(b.multiplicity, rng) for lab, b in decomp.blocks.items()}
        v = invariant_unitary(decomp, blocks)
        worst = max(
            np.linalg.norm(v @ reg.matrices[i] - reg.matrices[i] @ v)
            for i in z3.elements()
        )
        assert worst <= 1e-9
        assert np.allclose(dagger(v) @ v, np.eye(3), atol=1e-10)

    def test_non_unitary_block_rejected(self):
        z2, table = builtin_group("Z2")
        rep = FiniteRep(z2, np.stack([np.eye(2), np.diag([1.0, -1.0])]).astype(complex))
        decomp = decompose(rep, table)
        with pytest.raises(ValidationError):
            invariant_unitary(decomp, {"chi0": np.array([[2.0]]), "chi1": np.eye(1)})

    def test_multiplicities_stable_under_invariant_conjugation(self, rng):
        q8, table = builtin_group("Q8")
        rep, copies = random_rep(q8, table, rng, conjugate=False)
        decomp = decompose(rep, table)
        blocks = {lab: random_unitary(b.multiplicity, rng) for lab, b in decomp.blocks.items()}
        v = invariant_unitary(decomp, blocks)
        conj = FiniteRep(q8, np.einsum("ab,gbc,dc->gad", v, rep.matrices, v.conj()))
        assert decompose(conj, table).multiplicities() == decomp.multiplicities()


class TestRepCombinators:
    def test_finite_tensor_of_signs(self):
        z2, _ = builtin_group("Z2")
        rep = FiniteRep(z2, np.stack([np.eye(2), np.diag([1.0, -1.0])]).astype(complex))
        t = tensor_rep(rep, rep)
        assert np.allclose(t.matrices[1], np.diag([1.0, -1.0, -1.0, 1.0]), atol=1e-14)

    def test_u1_tensor_adds_charges(self):
        rep = U1Rep(U1Group(1), [0, 1])
        t = tensor_rep(rep, rep)
        assert t.charges.tolist() == [0, 1, 1, 2]

    def test_su2_tensor_satisfies_algebra(self, spin_half):
        pair = tensor_rep(spin_half, spin_half)
        assert check_representation(pair).ok

    def test_direct_sum_dimensions(self):
        a = U1Rep(U1Group(2), [0, 1])
        b = U1Rep(U1Group(2), [2, 0, 1])
        s = direct_sum_rep(a, b)
        assert s.dim == 5 and s.charges.tolist() == [0, 1, 2, 0, 1]

    def test_embedding_preserves_norm_and_charfn(self, rng):
        s3, table = builtin_group("S3")
        rep_a, _ = random_rep(s3, table, rng, max_copies=1)
        rep_b = regular_representation(s3)
        both = direct_sum_rep(rep_a, rep_b)
        psi = rand_state(rep_a.dim, rng)
        embedded = embed_state(psi, both.dim, 0)
        assert np.linalg.norm(embedded.amplitudes) == pytest.approx(1.0)
        chi_own = char_fn(psi, rep_a)
        chi_emb = char_fn(embedded, both)
        assert np.max(np.abs(chi_own.values - chi_emb.values)) <= 1e-12

    def test_group_mismatch_raises(self):
        a = U1Rep(U1Group(1), [0])
        z2, _ = builtin_group("Z2")
        b = FiniteRep(z2, np.stack([np.eye(1), np.eye(1)]).astype(complex))
        with pytest.raises(TypeError):
            tensor_rep(a, b)


class TestGaugeDeterminism:
    def test_decompose_is_reproducible(self, rng):
        d4, table = builtin_group("D4")
        rep, _ = random_rep(d4, table, rng)
        dec1 = decompose(rep, table)
        dec2 = decompose(rep, table)
        for lab in dec1.blocks:
            assert np.array_equal(dec1.blocks[lab].isometry, dec2.blocks[lab].isometry)
