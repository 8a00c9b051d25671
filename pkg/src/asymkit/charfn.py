"""Characteristic functions, irrep reductions, and symmetry subgroups.

The characteristic function of a pure state is g -> <psi|U(g)|psi>.  Its
Fourier dual is the family of matrices obtained by projecting the state
onto each isotypic subspace and tracing out the multiplicity factor; both
determine the same equivalence data and this module converts between them.

For finite groups a characteristic function is stored as a value table.
For U(1) and SU(2) it is stored as its (finite, exact) irrep reduction and
evaluated pointwise on demand, which keeps downstream comparisons free of
grid-resolution tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import dagger, min_eig_hermitian
from .errors import UnsupportedGroupError, ValidationError
from .grids import grid_for, su2_grid
from .groups import FiniteGroup, SU2Group, U1Group
from .reps import (
    FiniteRep,
    IrrepTable,
    IsotypicDecomposition,
    SU2Rep,
    U1Rep,
    UnitaryRep,
    decompose,
)

STATE_NORM_TOL = 1e-10


class PureState:
    """A unit-norm complex amplitude vector."""

    def __init__(self, amplitudes) -> None:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValidationError(f"state norm {norm} differs from 1 beyond {STATE_NORM_TOL}")
        self.amplitudes = amps
        self.amplitudes.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"


def tensor_state(a: PureState, b: PureState) -> PureState:
    return PureState(np.kron(a.amplitudes, b.amplitudes))


def state_power(state: PureState, n: int) -> PureState:
    out = state
    for _ in range(n - 1):
        out = tensor_state(out, state)
    return out


def embed_state(state: PureState, total_dim: int, offset: int) -> PureState:
    """Zero-pad a sector state into a direct-sum space."""
    if offset < 0 or offset + state.dim > total_dim:
        raise ValidationError("embedding window does not fit the target dimension")
    amps = np.zeros(total_dim, dtype=complex)
    amps[offset : offset + state.dim] = state.amplitudes
    return PureState(amps)


class IrrepReduction:
    """Per-irrep matrices: PSD blocks whose traces sum to one."""

    def __init__(self, blocks: dict[str, np.ndarray]) -> None:
        self.blocks = {str(k): np.asarray(v, dtype=complex) for k, v in blocks.items()}

    def __getitem__(self, label) -> np.ndarray:
        return self.blocks[str(label)]

    def __contains__(self, label) -> bool:
        return str(label) in self.blocks

    @property
    def labels(self) -> list[str]:
        return list(self.blocks)

    def total_trace(self) -> float:
        return float(sum(np.trace(b).real for b in self.blocks.values()))

    def min_eigenvalue(self) -> float:
        return min(min_eig_hermitian(b) for b in self.blocks.values())

    def validate(self, tol_psd: float = 1e-10, tol_trace: float = 1e-9) -> None:
        if self.min_eigenvalue() < -tol_psd:
            raise ValidationError("reduction block has a negative eigenvalue")
        if abs(self.total_trace() - 1.0) > tol_trace:
            raise ValidationError(f"reduction traces sum to {self.total_trace()}, not 1")

    def max_difference(self, other: "IrrepReduction") -> float:
        """Entrywise sup-distance, treating absent blocks as zero."""
        worst = 0.0
        for lab in set(self.blocks) | set(other.blocks):
            a = self.blocks.get(lab)
            b = other.blocks.get(lab)
            if a is None:
                worst = max(worst, float(np.max(np.abs(b))))
            elif b is None:
                worst = max(worst, float(np.max(np.abs(a))))
            else:
                worst = max(worst, float(np.max(np.abs(a - b))))
        return worst

    def __repr__(self) -> str:
        return f"IrrepReduction({{{', '.join(self.labels)}}})"


class CharFn:
    """The function g -> <psi|U(g)|psi>, tabulated or Fourier-backed."""

    def __init__(self, group, values=None, reduction=None, table=None):
        self.group = group
        self.values = None if values is None else np.asarray(values, dtype=complex)
        self.reduction = reduction
        self.table = table
        if (self.values is None) == (self.reduction is None):
            raise ValidationError("CharFn needs exactly one of a value table or a reduction")
        if self.reduction is not None and table is None:
            raise ValidationError("a reduction-backed CharFn needs an irrep table")

    @property
    def kind(self) -> str:
        return self.group.kind

    def evaluate(self, element) -> complex:
        if self.values is not None:
            return complex(self.values[int(element)])
        total = 0.0 + 0.0j
        for lab, block in self.reduction.blocks.items():
            total += np.trace(block @ self.table[lab].matrix(element))
        return complex(total)

    def sample(self, elements) -> np.ndarray:
        return np.array([self.evaluate(g) for g in elements])

    def at_identity(self) -> complex:
        if self.values is not None:
            return complex(self.values[self.group.identity_index])
        return complex(sum(np.trace(b) for b in self.reduction.blocks.values()))

    def gram(self, elements=None) -> np.ndarray:
        """Matrix F[i, j] = chi(g_i^-1 g_j); PSD for genuine characteristic functions."""
        if elements is None:
            elements = grid_for(self.group)
        vals = np.array(
            [[self.evaluate(self.group.multiply(self.group.inverse(a), b)) for b in elements]
             for a in elements]
        )
        return vals

    def validate(self, tol_identity: float = 1e-10, tol_bound: float = 1e-10,
                 tol_psd: float = 1e-9) -> None:
        if abs(self.at_identity() - 1.0) > tol_identity:
            raise ValidationError("characteristic function is not 1 at the identity")
        grid = grid_for(self.group)
        vals = self.sample(grid)
        if np.max(np.abs(vals)) > 1.0 + tol_bound:
            raise ValidationError("characteristic function exceeds modulus 1")
        if min_eig_hermitian(self.gram(grid)) < -tol_psd:
            raise ValidationError("characteristic-function Gram matrix is not PSD")

    def max_difference(self, other: "CharFn", elements=None) -> float:
        """Pointwise sup-distance on the full group (finite) or the standard grid."""
        if elements is None:
            elements = grid_for(self.group)
        return float(np.max(np.abs(self.sample(elements) - other.sample(elements))))


def char_fn(state: PureState, rep: UnitaryRep,
            decomp: IsotypicDecomposition | None = None) -> CharFn:
    """Characteristic function of a state under a representation.

    Finite groups tabulate all values directly.  U(1) reads the charge
    weights off the amplitudes; SU(2) stores the reduction obtained from
    the (exact) highest-weight decomposition.
    """
    if state.dim != rep.dim:
        raise ValidationError(f"state dim {state.dim} does not match rep dim {rep.dim}")
    psi = state.amplitudes
    if isinstance(rep, FiniteRep):
        values = np.einsum("i,gij,j->g", psi.conj(), rep.matrices, psi)
        return CharFn(rep.group, values=values)
    if isinstance(rep, U1Rep):
        table = decomp.table if decomp is not None else IrrepTable.for_u1(rep.group)
        blocks = {}
        for n in sorted(set(rep.charges.tolist())):
            w = float(np.sum(np.abs(psi[rep.charges == n]) ** 2))
            blocks[str(n)] = np.array([[w]], dtype=complex)
        return CharFn(rep.group, reduction=IrrepReduction(blocks), table=table)
    if isinstance(rep, SU2Rep):
        if decomp is None:
            decomp = decompose(rep)
        red = reduction(state, decomp)
        return CharFn(rep.group, reduction=red, table=decomp.table)
    raise TypeError(f"unsupported rep type {type(rep).__name__}")


def reduction(state: PureState, decomp: IsotypicDecomposition) -> IrrepReduction:
    """Project onto each isotypic subspace and trace out the multiplicity factor."""
    if state.dim != decomp.rep.dim:
        raise ValidationError("state dimension does not match the decomposition")
    blocks = {}
    for lab, blk in decomp.blocks.items():
        y = blk.component(state.amplitudes)
        blocks[lab] = y @ dagger(y)
    return IrrepReduction(blocks)


def charfn_from_reduction(red: IrrepReduction, table: IrrepTable) -> CharFn:
    """Synthesize chi(g) = sum_mu tr(rho_mu U_mu(g)) from reduction data."""
    for lab in red.labels:
        table[lab]  # raises UnknownIrrepError if missing
    group = table.group
    if isinstance(group, FiniteGroup):
        values = np.zeros(group.order, dtype=complex)
        for lab, block in red.blocks.items():
            ir = table[lab]
            values += np.einsum("ab,gba->g", block, ir.matrices)
        return CharFn(group, values=values)
    return CharFn(group, reduction=red, table=table)


def reduction_from_charfn(chi: CharFn, table: IrrepTable,
                          drop_below: float = 1e-12) -> IrrepReduction:
    """Invert the Fourier pair: rho_mu = d_mu * average of chi(g^-1) U_mu(g).

    Supported for finite groups and (band-limited) U(1); SU(2) reductions
    should be computed from the decomposition via `reduction` instead.
    Blocks that vanish within `drop_below` are omitted.
    """
    group = table.group
    if isinstance(group, SU2Group):
        raise UnsupportedGroupError(
            "inverting an SU(2) characteristic function is not supported; "
            "compute the reduction from the isotypic decomposition instead"
        )
    blocks = {}
    if isinstance(group, FiniteGroup):
        inv_vals = np.array([chi.evaluate(group.inverse(g)) for g in group.elements()])
        for ir in table:
            acc = (ir.dim / group.order) * np.einsum("g,gab->ab", inv_vals, ir.matrices)
            if np.max(np.abs(acc)) > drop_below:
                blocks[ir.label] = acc
        return IrrepReduction(blocks)
    if isinstance(group, U1Group):
        band = max(abs(ir.charge) for ir in table)
        n_nodes = 2 * band + 1
        thetas = np.arange(n_nodes) * (2.0 * np.pi / n_nodes)
        vals = np.array([chi.evaluate(float(-t % (2.0 * np.pi))) for t in thetas])
        for ir in table:
            coeff = np.mean(vals * np.exp(1j * ir.charge * thetas))
            if abs(coeff) > drop_below:
                blocks[ir.label] = np.array([[coeff]])
        return IrrepReduction(blocks)
    raise TypeError(f"unsupported group type {type(group).__name__}")


# ---------------------------------------------------------------------------
# symmetry subgroups
# ---------------------------------------------------------------------------

@dataclass
class FiniteSymmetry:
    """Elements with |chi| = 1 (within tol); verified closed under the product."""

    group: FiniteGroup
    indices: frozenset[int]

    @property
    def labels(self) -> list[str]:
        return [self.group.label(i) for i in sorted(self.indices)]

    def is_full(self) -> bool:
        return len(self.indices) == self.group.order

    def matches(self, other: "FiniteSymmetry", tol: float = 1e-8) -> bool:
        return isinstance(other, FiniteSymmetry) and self.indices == other.indices


@dataclass
class U1Symmetry:
    """Stabilizer inside U(1): the whole circle, a cyclic Z_k, or trivial."""

    kind: str          # "full" | "cyclic" | "trivial"
    order: int | None  # k for cyclic, else None

    def matches(self, other: "U1Symmetry", tol: float = 1e-8) -> bool:
        return (
            isinstance(other, U1Symmetry)
            and self.kind == other.kind
            and self.order == other.order
        )


@dataclass
class SU2Symmetry:
    """Coarse stabilizer descriptor inside SU(2).

    "full" for rotation-invariant states, "axial" (with the rotation axis)
    when the state is an eigenvector of some n.J, otherwise "sampled":
    just the stabilizing elements found on the standard grid.
    """

    kind: str                      # "full" | "axial" | "sampled"
    axis: np.ndarray | None
    sampled_indices: frozenset[int]

    def matches(self, other: "SU2Symmetry", tol: float = 1e-8) -> bool:
        if not isinstance(other, SU2Symmetry) or self.kind != other.kind:
            return False
        if self.kind == "axial":
            # n and -n generate the same one-parameter subgroup
            if abs(abs(float(np.dot(self.axis, other.axis))) - 1.0) > 1e-6:
                return False
        return self.sampled_indices == other.sampled_indices


SymmetrySubgroup = FiniteSymmetry | U1Symmetry | SU2Symmetry


def sym_group(state: PureState, rep: UnitaryRep, tol: float = 1e-8) -> SymmetrySubgroup:
    """Subgroup of elements leaving the state invariant up to a phase.

    Detection is via |chi(g)| = 1, which holds exactly on stabilizer
    elements.  Finite groups return the verified-closed element set; U(1)
    classifies via the charge support; SU(2) reports the coarse descriptor.
    """
    chi = char_fn(state, rep)
    if isinstance(rep, FiniteRep):
        group = rep.group
        mods = np.abs(chi.values)
        members = np.flatnonzero(mods >= 1.0 - tol)
        member_set = frozenset(int(i) for i in members)
        for a in member_set:
            for b in member_set:
                if group.mult_table[a, b] not in member_set:
                    boundary = [
                        group.label(int(i))
                        for i in np.flatnonzero(np.abs(mods - (1.0 - tol)) < 10 * tol)
                    ]
                    raise ValidationError(
                        "symmetry set is not closed at this tolerance; boundary "
                        f"elements {boundary}; try a tighter tol"
                    )
        return FiniteSymmetry(group, member_set)
    if isinstance(rep, U1Rep):
        weights = np.abs(state.amplitudes) ** 2
        support = sorted({int(n) for n, w in zip(rep.charges, weights) if w > tol})
        diffs = [n - support[0] for n in support[1:]]
        if not diffs:
            return U1Symmetry("full", None)
        k = 0
        for d in diffs:
            k = math.gcd(k, d)
        if k == 1:
            return U1Symmetry("trivial", None)
        return U1Symmetry("cyclic", k)
    if isinstance(rep, SU2Rep):
        decomp = decompose(rep)
        red = reduction(state, decomp)
        spin_weights = {lab: float(np.trace(b).real) for lab, b in red.blocks.items()}
        grid = su2_grid()
        chi_vals = chi.sample(grid)
        sampled = frozenset(
            int(i) for i in np.flatnonzero(np.abs(np.abs(chi_vals) - 1.0) <= tol)
        )
        nontrivial = {lab: w for lab, w in spin_weights.items() if lab != "0" and w > tol}
        if not nontrivial:
            return SU2Symmetry("full", None, sampled)
        axis = _common_rotation_axis(state, rep, tol)
        if axis is not None:
            return SU2Symmetry("axial", axis, sampled)
        return SU2Symmetry("sampled", None, sampled)
    raise TypeError(f"unsupported rep type {type(rep).__name__}")


def _common_rotation_axis(state: PureState, rep: SU2Rep, tol: float) -> np.ndarray | None:
    """Axis n such that the state is an eigenvector of n.J, if one exists."""
    psi = state.amplitudes
    cols = np.column_stack([rep.jx @ psi, rep.jy @ psi, rep.jz @ psi, psi])
    real_stack = np.vstack([cols.real, cols.imag])
    _, s, vh = np.linalg.svd(real_stack)
    s_full = np.zeros(4)
    s_full[: s.size] = s
    scale = max(1.0, s_full[0])
    for k in range(3, -1, -1):
        if s_full[k] > np.sqrt(tol) * scale:
            break
        candidate = vh[k]
        n = candidate[:3]
        if np.linalg.norm(n) > 1e-6:
            n = n / np.linalg.norm(n)
            resid = np.linalg.norm(
                (n[0] * rep.jx + n[1] * rep.jy + n[2] * rep.jz) @ psi
                - (psi.conj() @ (n[0] * rep.jx + n[1] * rep.jy + n[2] * rep.jz) @ psi) * psi
            )
            if resid <= np.sqrt(tol):
                return n
    return None
