"""Independent brute-force and constructive verifiers.

Everything here deliberately avoids the irrep decomposition where it can:
orbit Grams are computed from raw matrix action, and witness verification
evaluates functions pointwise.  Deciders are cross-checked against these
second computational paths in the test suite.
"""

from __future__ import annotations

import numpy as np

from ._linalg import dagger, min_eig_hermitian, polar_unitary, random_unitary
from .charfn import CharFn, PureState
from .grids import grid_for
from .reps import IsotypicDecomposition, UnitaryRep, invariant_unitary


def orbit_gram(state: PureState, rep: UnitaryRep, elements=None) -> np.ndarray:
    """Gram matrix of the orbit {U(g)|psi>} over the elements (or standard grid).

    Uses the representation matrices directly; no isotypic data involved.
    """
    if elements is None:
        elements = grid_for(rep.group)
    orbit = np.array([rep.evaluate(g) @ state.amplitudes for g in elements])
    return orbit.conj() @ orbit.T


def gram_orbit_equality(psi: PureState, phi: PureState, rep: UnitaryRep,
                        tol: float = 1e-8, elements=None) -> tuple[bool, float]:
    """Compare the orbit Grams of two states entrywise."""
    if elements is None:
        elements = grid_for(rep.group)
    ga = orbit_gram(psi, rep, elements)
    gb = orbit_gram(phi, rep, elements)
    dev = float(np.max(np.abs(ga - gb)))
    return dev <= tol, dev


def construct_invariant_unitary_witness(psi: PureState, phi: PureState,
                                        decomp: IsotypicDecomposition,
                                        tol: float = 1e-8) -> np.ndarray | None:
    """A commuting unitary V with V|psi> = |phi>, or None if none exists.

    Per isotypic block the multiplicity-space components Y and Z of the two
    states satisfy Y W = Z for the polar unitary W of Y^dag Z whenever the
    reductions Y Y^dag and Z Z^dag agree; the polar step also fixes the
    completion gauge deterministically when the components do not span the
    whole multiplicity space.
    """
    blocks = {}
    for lab, blk in decomp.blocks.items():
        y = blk.component(psi.amplitudes)
        z = blk.component(phi.amplitudes)
        if np.max(np.abs(y @ dagger(y) - z @ dagger(z))) > tol:
            return None
        w = polar_unitary(dagger(y) @ z)
        # invariant_unitary applies blocks on the multiplicity index as Y V^T
        blocks[lab] = w.T
    return invariant_unitary(decomp, blocks)


def random_invariant_unitary(decomp: IsotypicDecomposition, seed: int) -> np.ndarray:
    """A commuting unitary with Haar-random multiplicity blocks (seed-deterministic)."""
    rng = np.random.default_rng(seed)
    blocks = {
        lab: random_unitary(decomp.blocks[lab].multiplicity, rng)
        for lab in sorted(decomp.blocks)
    }
    return invariant_unitary(decomp, blocks)


def verify_pd_witness(f, chi_psi: CharFn, chi_phi: CharFn,
                      tol_eq: float = 1e-8, tol_psd: float = 1e-9,
                      elements=None) -> tuple[bool, dict]:
    """Re-check a conversion witness without touching the decider's Fourier route.

    `f` must expose ``evaluate(g)``.  Verifies chi_psi = chi_phi * f
    pointwise and positive-definiteness of f through its Gram matrix on the
    element set.
    """
    group = chi_psi.group
    if elements is None:
        elements = grid_for(group)
    vals_psi = chi_psi.sample(elements)
    vals_phi = chi_phi.sample(elements)
    vals_f = np.array([f.evaluate(g) for g in elements])
    eq_residual = float(np.max(np.abs(vals_psi - vals_phi * vals_f)))
    gram = np.array(
        [[f.evaluate(group.multiply(group.inverse(a), b)) for b in elements]
         for a in elements]
    )
    min_eig = min_eig_hermitian(gram)
    ok = eq_residual <= tol_eq and min_eig >= -tol_psd
    return ok, {"equality_residual": eq_residual, "gram_min_eigenvalue": float(min_eig)}
