"""Shared construction helpers for the test suite."""

import numpy as np

from asymkit import FiniteRep, PureState, tensor_rep
from asymkit._linalg import random_state, random_unitary


def rand_state(dim, rng):
    return PureState(random_state(dim, rng))


def random_rep(group, table, rng, max_copies=2, conjugate=True):
    """A rep with random multiplicities (>=1) of every irrep, in a random basis."""
    copies = {ir.label: int(rng.integers(1, max_copies + 1)) for ir in table}
    blocks = []
    for i in group.elements():
        mats = []
        for ir in table:
            for _ in range(copies[ir.label]):
                mats.append(ir.matrices[i])
        blocks.append(_block_diag(mats))
    mats = np.stack(blocks)
    if conjugate:
        w = random_unitary(mats.shape[1], rng)
        mats = np.einsum("ab,gbc,dc->gad", w, mats, w.conj())
    return FiniteRep(group, mats), copies


def _block_diag(mats):
    dim = sum(m.shape[0] for m in mats)
    out = np.zeros((dim, dim), dtype=complex)
    k = 0
    for m in mats:
        d = m.shape[0]
        out[k : k + d, k : k + d] = m
        k += d
    return out


def diag_cyclic_rep(group, charges):
    """Diagonal rep of Z_n with the given integer charges."""
    n = group.order
    charges = np.asarray(charges)
    mats = np.stack([np.diag(np.exp(2j * np.pi * charges * k / n)) for k in range(n)])
    return FiniteRep(group, mats)


def rep_tensor_power(rep, n):
    out = rep
    for _ in range(n - 1):
        out = tensor_rep(out, rep)
    return out
