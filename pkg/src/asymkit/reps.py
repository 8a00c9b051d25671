"""Unitary representations, irrep tables, and isotypic decompositions.

A representation is held in the form natural to its group: explicit
matrices per element (finite groups), an integer charge list (U(1), always
diagonal in the computational basis), or three Hermitian generators
(SU(2)).  ``decompose`` produces, per occurring irrep, an isometry whose
columns carry the tensor structure (irrep space) x (multiplicity space),
with the group acting as U_mu(g) (x) I.

The multiplicity-space basis is a gauge choice; this module fixes it
deterministically (eigenvalue order plus a largest-entry phase convention)
so decompositions are reproducible, but downstream comparisons should only
rely on gauge-invariant data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import (
    dagger,
    expm_hermitian,
    fix_phase,
    is_unitary,
    kernel_columns,
)
from .errors import (
    DecompositionError,
    FormatError,
    UnknownIrrepError,
    ValidationError,
)
from .groups import (
    FiniteGroup,
    Group,
    SU2Group,
    U1Group,
    quat_to_axis_angle,
)


# ---------------------------------------------------------------------------
# spin algebra
# ---------------------------------------------------------------------------

def spin_generators(two_j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Standard spin-j generators (Jx, Jy, Jz) in the basis m = j, j-1, ..., -j."""
    if two_j < 0:
        raise ValidationError("two_j must be >= 0")
    j = two_j / 2.0
    m = j - np.arange(two_j + 1)
    jz = np.diag(m).astype(complex)
    # raising: |j,m> -> sqrt(j(j+1) - m(m+1)) |j,m+1>; target sits one row up
    coef = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jp = np.zeros((two_j + 1, two_j + 1), dtype=complex)
    jp[np.arange(two_j), np.arange(1, two_j + 1)] = coef
    jm = dagger(jp)
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    return jx, jy, jz


def su2_rotation(jx: np.ndarray, jy: np.ndarray, jz: np.ndarray, q: np.ndarray) -> np.ndarray:
    """exp(-i * angle * n.J) for the rotation encoded by unit quaternion q."""
    axis, angle = quat_to_axis_angle(q)
    h = axis[0] * jx + axis[1] * jy + axis[2] * jz
    return expm_hermitian(h, scale=-1j * angle)


def spin_label(two_j: int) -> str:
    return str(two_j // 2) if two_j % 2 == 0 else f"{two_j}/2"


# ---------------------------------------------------------------------------
# irreps
# ---------------------------------------------------------------------------

class Irrep:
    """One irreducible unitary representation.

    Exactly one of `matrices` (finite group), `charge` (U(1)), or `two_j`
    (SU(2), standard Wigner generators) is set.
    """

    def __init__(self, label, dim, matrices=None, charge=None, two_j=None):
        self.label = str(label)
        self.dim = int(dim)
        self.matrices = None
        self.charge = None
        self.two_j = None
        if matrices is not None:
            mats = np.asarray(matrices, dtype=complex)
            if mats.ndim != 3 or mats.shape[1:] != (self.dim, self.dim):
                raise FormatError(f"irrep {label}: matrices must be (n, {dim}, {dim})")
            self.matrices = mats
        elif charge is not None:
            if self.dim != 1:
                raise FormatError("u1 irreps are one-dimensional")
            self.charge = int(charge)
        elif two_j is not None:
            if self.dim != int(two_j) + 1:
                raise FormatError("su2 irrep dim must be two_j + 1")
            self.two_j = int(two_j)
            self._gens = spin_generators(self.two_j)
            self._cache: dict[bytes, np.ndarray] = {}
        else:
            raise FormatError("irrep needs matrices, a charge, or a spin")

    @property
    def kind(self) -> str:
        if self.matrices is not None:
            return "finite"
        return "u1" if self.charge is not None else "su2"

    def matrix(self, element) -> np.ndarray:
        """U_mu(g) for a group element of the matching kind."""
        if self.matrices is not None:
            return self.matrices[int(element)]
        if self.charge is not None:
            return np.array([[np.exp(1j * self.charge * float(element))]])
        q = np.asarray(element, dtype=float)
        key = q.tobytes()
        hit = self._cache.get(key)
        if hit is None:
            hit = su2_rotation(*self._gens, q)
            if len(self._cache) < 4096:
                self._cache[key] = hit
        return hit

    def character(self, element) -> complex:
        return complex(np.trace(self.matrix(element)))

    def __repr__(self) -> str:
        return f"Irrep({self.label!r}, dim={self.dim})"


class IrrepTable:
    """The irreps of a group, keyed by label.

    For finite groups the table should be complete (sum of squared dims
    equal to the group order) for Fourier inversion and the Bochner test to
    be available; `validate` reports the deficit if not.
    """

    def __init__(self, group: Group, irreps: list[Irrep]):
        self.group = group
        self.irreps = list(irreps)
        labels = [ir.label for ir in self.irreps]
        if len(set(labels)) != len(labels):
            raise FormatError("irrep labels must be distinct")
        self._by_label = {ir.label: ir for ir in self.irreps}

    @classmethod
    def for_u1(cls, group: U1Group) -> "IrrepTable":
        irreps = [
            Irrep(str(n), 1, charge=n)
            for n in range(-group.band_limit, group.band_limit + 1)
        ]
        return cls(group, irreps)

    @classmethod
    def for_su2(cls, group: SU2Group) -> "IrrepTable":
        irreps = [
            Irrep(spin_label(two_j), two_j + 1, two_j=two_j)
            for two_j in range(group.two_j_max + 1)
        ]
        return cls(group, irreps)

    def __contains__(self, label) -> bool:
        return str(label) in self._by_label

    def __getitem__(self, label) -> Irrep:
        try:
            return self._by_label[str(label)]
        except KeyError:
            raise UnknownIrrepError(f"irrep {label!r} not in table") from None

    def __iter__(self):
        return iter(self.irreps)

    def __len__(self) -> int:
        return len(self.irreps)

    @property
    def labels(self) -> list[str]:
        return [ir.label for ir in self.irreps]

    def one_dim(self) -> list[Irrep]:
        return [ir for ir in self.irreps if ir.dim == 1]

    def is_complete(self) -> bool:
        if not isinstance(self.group, FiniteGroup):
            return True
        return sum(ir.dim**2 for ir in self.irreps) == self.group.order

    def validate(self, tol: float = 1e-9) -> None:
        """Check homomorphism/unitarity, irreducibility, and inequivalence."""
        g = self.group
        for ir in self.irreps:
            if ir.kind != g.kind:
                raise ValidationError(f"irrep {ir.label} kind does not match group")
            if ir.matrices is not None:
                rep = FiniteRep(g, ir.matrices)
                chk = check_representation(rep)
                if not chk.ok:
                    raise ValidationError(f"irrep {ir.label}: {chk.detail}")
                if _commutant_dimension(ir.matrices, tol) != 1:
                    raise ValidationError(f"irrep {ir.label} is reducible")
        if isinstance(g, FiniteGroup):
            chars = np.array(
                [[ir.character(i) for i in g.elements()] for ir in self.irreps]
            )
            gram = chars @ chars.conj().T / g.order
            if np.max(np.abs(gram - np.eye(len(self.irreps)))) > tol:
                raise ValidationError("irrep characters are not orthonormal (duplicate or non-irreducible entry)")
            if not self.is_complete():
                deficit = g.order - sum(ir.dim**2 for ir in self.irreps)
                raise ValidationError(
                    f"irrep table incomplete: squared dims fall short of |G| by {deficit}"
                )


def _commutant_dimension(mats: np.ndarray, tol: float = 1e-9) -> int:
    """Dimension of {X : U X = X U for all U} via a stacked kernel problem."""
    d = mats.shape[1]
    rows = []
    eye = np.eye(d)
    for u in mats:
        # U X - X U = 0  <=>  (U (x) I - I (x) U^T) vec(X) = 0  (row-major vec)
        rows.append(np.kron(u, eye) - np.kron(eye, u.T))
    stack = np.vstack(rows)
    return kernel_columns(stack, tol).shape[1]


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

class FiniteRep:
    """Matrices, one per group element, indexed like the group."""

    def __init__(self, group: FiniteGroup, matrices):
        if not isinstance(group, FiniteGroup):
            raise TypeError("FiniteRep requires a FiniteGroup")
        mats = np.asarray(matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[0] != group.order or mats.shape[1] != mats.shape[2]:
            raise FormatError("matrices must have shape (|G|, d, d)")
        self.group = group
        self.matrices = mats
        self.dim = mats.shape[1]

    def evaluate(self, element) -> np.ndarray:
        return self.matrices[group_index(self.group, element)]


def group_index(group: FiniteGroup, element) -> int:
    if isinstance(element, (bool, float)):
        raise TypeError("finite group elements are integer indices")
    return group._check(element)


class U1Rep:
    """Diagonal U(1) action: U(theta) = diag(exp(i * n_k * theta))."""

    def __init__(self, group: U1Group, charges):
        if not isinstance(group, U1Group):
            raise TypeError("U1Rep requires a U1Group")
        ch = np.asarray(charges)
        if not np.all(ch == np.round(ch)):
            raise ValidationError("u1 charges must be integers")
        ch = ch.astype(int)
        if ch.ndim != 1 or ch.size == 0:
            raise FormatError("charges must be a non-empty vector")
        if np.max(np.abs(ch)) > group.band_limit:
            raise ValidationError(
                f"charge magnitude {np.max(np.abs(ch))} exceeds the group band limit "
                f"{group.band_limit}"
            )
        self.group = group
        self.charges = ch
        self.dim = ch.size

    def evaluate(self, element) -> np.ndarray:
        theta = float(element)
        return np.diag(np.exp(1j * self.charges * theta))


class SU2Rep:
    """SU(2) action generated by three Hermitian matrices (Jx, Jy, Jz)."""

    def __init__(self, group: SU2Group, jx, jy, jz):
        if not isinstance(group, SU2Group):
            raise TypeError("SU2Rep requires an SU2Group")
        jx, jy, jz = (np.asarray(a, dtype=complex) for a in (jx, jy, jz))
        d = jx.shape[0]
        for a in (jx, jy, jz):
            if a.shape != (d, d):
                raise FormatError("generators must be square matrices of equal size")
        self.group = group
        self.jx, self.jy, self.jz = jx, jy, jz
        self.dim = d

    def evaluate(self, element) -> np.ndarray:
        return su2_rotation(self.jx, self.jy, self.jz, np.asarray(element, dtype=float))

    def generators(self) -> list[np.ndarray]:
        return [self.jx, self.jy, self.jz]


UnitaryRep = FiniteRep | U1Rep | SU2Rep


@dataclass
class RepCheck:
    ok: bool
    max_violation: float
    detail: str = ""


def check_representation(rep: UnitaryRep, tol: float = 1e-10) -> RepCheck:
    """Verify the homomorphism/unitarity (or algebra) invariants of a rep.

    Returns the worst violation found and, when the check fails, where.
    """
    if isinstance(rep, FiniteRep):
        g, mats = rep.group, rep.matrices
        worst, detail = 0.0, ""
        eye = np.eye(rep.dim)
        v = np.linalg.norm(mats[g.identity_index] - eye)
        if v > worst:
            worst, detail = v, "U(e) differs from the identity"
        for i in range(g.order):
            v = np.linalg.norm(dagger(mats[i]) @ mats[i] - eye)
            if v > worst:
                worst, detail = v, f"U({g.label(i)}) is not unitary"
        prods = np.einsum("iab,jbc->ijac", mats, mats)
        target = mats[g.mult_table]
        viol = np.linalg.norm(prods - target, axis=(2, 3))
        if viol.max() > worst:
            i, j = np.unravel_index(np.argmax(viol), viol.shape)
            worst = float(viol.max())
            detail = f"U(g)U(h) != U(gh) at (g, h) = ({g.label(int(i))}, {g.label(int(j))})"
        return RepCheck(worst <= tol, float(worst), detail if worst > tol else "")
    if isinstance(rep, U1Rep):
        # integrality and the band bound are enforced at construction
        return RepCheck(True, 0.0)
    if isinstance(rep, SU2Rep):
        jx, jy, jz = rep.jx, rep.jy, rep.jz
        worst, detail = 0.0, ""
        for name, a in (("Jx", jx), ("Jy", jy), ("Jz", jz)):
            v = np.linalg.norm(a - dagger(a))
            if v > worst:
                worst, detail = v, f"{name} is not Hermitian"
        pairs = [(jx, jy, jz, "[Jx,Jy]-iJz"), (jy, jz, jx, "[Jy,Jz]-iJx"), (jz, jx, jy, "[Jz,Jx]-iJy")]
        for a, b, c, name in pairs:
            v = np.linalg.norm(a @ b - b @ a - 1j * c)
            if v > worst:
                worst, detail = v, f"commutation relation {name} violated"
        evals = np.linalg.eigvalsh(0.5 * (jz + dagger(jz)))
        v = float(np.max(np.abs(evals - np.round(2 * evals) / 2)))
        if v > worst:
            worst, detail = v, "Jz eigenvalues are not half-integers"
        return RepCheck(worst <= tol, float(worst), detail if worst > tol else "")
    raise TypeError(f"unsupported rep type {type(rep).__name__}")


# ---------------------------------------------------------------------------
# isotypic decomposition
# ---------------------------------------------------------------------------

@dataclass
class IsotypicBlock:
    """One isotypic component: columns of `isometry` are ordered so that
    column (i, a) = i * multiplicity + a pairs irrep index i with
    multiplicity index a, i.e. the group acts as U_mu(g) (x) I."""

    irrep: Irrep
    multiplicity: int
    isometry: np.ndarray

    @property
    def projector(self) -> np.ndarray:
        return self.isometry @ dagger(self.isometry)

    def component(self, amplitudes: np.ndarray) -> np.ndarray:
        """The (d_mu, m_mu) coefficient matrix of a state on this block."""
        y = dagger(self.isometry) @ amplitudes
        return y.reshape(self.irrep.dim, self.multiplicity)


class IsotypicDecomposition:
    """Isotypic decomposition of a representation; blocks keyed by irrep label."""

    def __init__(self, rep: UnitaryRep, table: IrrepTable, blocks: dict[str, IsotypicBlock]):
        self.rep = rep
        self.table = table
        self.blocks = dict(blocks)

    @property
    def labels(self) -> list[str]:
        return list(self.blocks)

    def block(self, label) -> IsotypicBlock:
        try:
            return self.blocks[str(label)]
        except KeyError:
            raise UnknownIrrepError(f"irrep {label!r} does not occur in this decomposition") from None

    def multiplicities(self) -> dict[str, int]:
        return {lab: blk.multiplicity for lab, blk in self.blocks.items()}

    def validate(self, tol: float = 1e-9, elements=None) -> None:
        """Assert completeness, orthogonality, and the intertwining property."""
        dim = self.rep.dim
        total = sum(b.irrep.dim * b.multiplicity for b in self.blocks.values())
        if total != dim:
            raise ValidationError(f"blocks span {total} of {dim} dimensions")
        ident = np.zeros((dim, dim), dtype=complex)
        for b in self.blocks.values():
            ident += b.projector
        if np.max(np.abs(ident - np.eye(dim))) > tol:
            raise ValidationError("projectors do not sum to the identity")
        for lab_a, a in self.blocks.items():
            for lab_b, b in self.blocks.items():
                if lab_a < lab_b:
                    if np.max(np.abs(dagger(a.isometry) @ b.isometry)) > tol:
                        raise ValidationError(f"blocks {lab_a} and {lab_b} are not orthogonal")
        for g in _sample_elements(self.rep, elements):
            u = self.rep.evaluate(g)
            for lab, blk in self.blocks.items():
                lhs = dagger(blk.isometry) @ u @ blk.isometry
                rhs = np.kron(blk.irrep.matrix(g), np.eye(blk.multiplicity))
                if np.max(np.abs(lhs - rhs)) > tol:
                    raise ValidationError(f"block {lab} does not intertwine as U_mu (x) I")


def _sample_elements(rep: UnitaryRep, elements):
    if elements is not None:
        return elements
    if isinstance(rep, FiniteRep):
        return list(rep.group.elements())
    if isinstance(rep, U1Rep):
        return list(rep.group.haar_nodes(max(1, rep.group.band_limit)))
    quats, _ = rep.group.haar_quadrature(rep.group.two_j_max)
    step = max(1, len(quats) // 16)
    return [quats[i] for i in range(0, len(quats), step)]


def decompose(rep: UnitaryRep, table: IrrepTable | None = None, tol: float = 1e-9) -> IsotypicDecomposition:
    """Split a representation into isotypic blocks with explicit isometries.

    Finite groups use matrix units built by character-weighted averaging;
    U(1) reads the blocks off the charge list; SU(2) extracts highest-weight
    chains from Jz and the ladder operators (no quadrature involved).
    """
    if isinstance(rep, FiniteRep):
        if table is None:
            raise ValidationError("decomposing a finite-group rep requires an irrep table")
        return _decompose_finite(rep, table, tol)
    if isinstance(rep, U1Rep):
        table = table or IrrepTable.for_u1(rep.group)
        return _decompose_u1(rep, table)
    if isinstance(rep, SU2Rep):
        table = table or IrrepTable.for_su2(rep.group)
        return _decompose_su2(rep, table, tol)
    raise TypeError(f"unsupported rep type {type(rep).__name__}")


def _decompose_finite(rep: FiniteRep, table: IrrepTable, tol: float) -> IsotypicDecomposition:
    g = rep.group
    mats = rep.matrices
    blocks: dict[str, IsotypicBlock] = {}
    covered = 0
    for ir in table:
        if ir.matrices is None:
            raise ValidationError("irrep table kind does not match a finite group")
        chars = np.einsum("gii->g", ir.matrices)
        mult = np.einsum("g,g->", chars.conj(), np.einsum("gii->g", mats)) / g.order
        m = int(np.round(mult.real))
        if abs(mult - m) > 1e-6:
            raise DecompositionError(
                f"non-integer multiplicity {mult:.3g} for irrep {ir.label}; "
                "rep and table are inconsistent"
            )
        if m == 0:
            continue
        d = ir.dim
        # matrix units E_{i1} = d/|G| sum_g conj(U_mu(g)_{i1}) U(g)
        units = [
            (d / g.order) * np.einsum("g,gab->ab", ir.matrices[:, i, 0].conj(), mats)
            for i in range(d)
        ]
        e11 = units[0]
        w, v = np.linalg.eigh(0.5 * (e11 + dagger(e11)))
        top = np.argsort(w)[::-1][:m]
        if w[top[-1]] < 0.5:
            raise DecompositionError(f"rank of E_11 for irrep {ir.label} is below multiplicity")
        mult_vecs = [fix_phase(v[:, k]) for k in top]
        cols = np.empty((rep.dim, d * m), dtype=complex)
        for i in range(d):
            for a, wvec in enumerate(mult_vecs):
                cols[:, i * m + a] = units[i] @ wvec
        blocks[ir.label] = IsotypicBlock(ir, m, cols)
        covered += d * m
    if covered != rep.dim:
        raise DecompositionError(
            f"irrep table covers only {covered} of {rep.dim} dimensions",
            residual_dim=rep.dim - covered,
        )
    return IsotypicDecomposition(rep, table, blocks)


def _decompose_u1(rep: U1Rep, table: IrrepTable) -> IsotypicDecomposition:
    blocks: dict[str, IsotypicBlock] = {}
    for n in sorted(set(rep.charges.tolist())):
        label = str(n)
        if label not in table:
            raise DecompositionError(
                f"charge {n} not covered by the irrep table",
                residual_dim=int(np.sum(rep.charges == n)),
            )
        positions = np.flatnonzero(rep.charges == n)
        iso = np.zeros((rep.dim, positions.size), dtype=complex)
        iso[positions, np.arange(positions.size)] = 1.0
        blocks[label] = IsotypicBlock(table[label], positions.size, iso)
    return IsotypicDecomposition(rep, table, blocks)


def _decompose_su2(rep: SU2Rep, table: IrrepTable, tol: float) -> IsotypicDecomposition:
    jz = 0.5 * (rep.jz + dagger(rep.jz))
    jp = rep.jx + 1j * rep.jy
    jm = dagger(jp)
    evals, evecs = np.linalg.eigh(jz)
    two_m = np.round(2 * evals).astype(int)
    if np.max(np.abs(evals - two_m / 2)) > 1e-8:
        raise ValidationError("Jz eigenvalues are not half-integers; not an SU(2) rep")
    blocks: dict[str, IsotypicBlock] = {}
    covered = 0
    for tm in sorted(set(two_m.tolist()), reverse=True):
        if tm < 0:
            break
        vm = evecs[:, two_m == tm]
        lifted = jp @ vm
        kern = kernel_columns(lifted, tol)
        if kern.shape[1] == 0:
            continue
        highest = vm @ kern
        j = tm / 2.0
        d = tm + 1
        m_count = highest.shape[1]
        label = spin_label(tm)
        if label not in table:
            raise DecompositionError(
                f"spin {label} not covered by the irrep table",
                residual_dim=d * m_count,
            )
        chains = []
        for a in range(m_count):
            vec = fix_phase(highest[:, a])
            chain = [vec]
            m_cur = j
            for _ in range(tm):
                coef = np.sqrt(j * (j + 1) - m_cur * (m_cur - 1))
                vec = (jm @ vec) / coef
                chain.append(vec)
                m_cur -= 1
            chains.append(chain)
        cols = np.empty((rep.dim, d * m_count), dtype=complex)
        for i in range(d):
            for a in range(m_count):
                cols[:, i * m_count + a] = chains[a][i]
        blocks[label] = IsotypicBlock(table[label], m_count, cols)
        covered += d * m_count
    if covered != rep.dim:
        raise DecompositionError(
            f"highest-weight chains cover only {covered} of {rep.dim} dimensions",
            residual_dim=rep.dim - covered,
        )
    return IsotypicDecomposition(rep, table, blocks)


def isotypic_projector(rep: UnitaryRep, irrep, table: IrrepTable | None = None) -> np.ndarray:
    """Orthogonal projector onto the isotypic subspace of one irrep.

    `irrep` may be an Irrep or a label resolved against `table`.  Returns
    the zero matrix when the irrep does not occur in the rep.
    """
    if not isinstance(irrep, Irrep):
        if table is None:
            raise UnknownIrrepError("a label requires an irrep table to resolve against")
        irrep = table[irrep]
    if isinstance(rep, FiniteRep):
        mats = rep.matrices
        chars = np.array([irrep.character(i) for i in rep.group.elements()])
        return (irrep.dim / rep.group.order) * np.einsum("g,gab->ab", chars.conj(), mats)
    if isinstance(rep, U1Rep):
        if irrep.charge is None:
            raise UnknownIrrepError("irrep kind does not match a U(1) rep")
        return np.diag((rep.charges == irrep.charge).astype(complex))
    if isinstance(rep, SU2Rep):
        if irrep.two_j is None:
            raise UnknownIrrepError("irrep kind does not match an SU(2) rep")
        max_tm = int(np.round(2 * np.max(np.abs(np.linalg.eigvalsh(rep.jz)))))
        cap = max(rep.group.two_j_max, max_tm, 1)
        table = IrrepTable.for_su2(SU2Group(cap))
        decomp = decompose(rep, table)
        label = spin_label(irrep.two_j)
        if label not in decomp.blocks:
            return np.zeros((rep.dim, rep.dim), dtype=complex)
        return decomp.block(label).projector
    raise TypeError(f"unsupported rep type {type(rep).__name__}")


def invariant_unitary(decomp: IsotypicDecomposition, blocks: dict) -> np.ndarray:
    """Assemble sum_mu B_mu (I (x) V_mu) B_mu^dag from multiplicity-space unitaries.

    One unitary block of size m_mu x m_mu is required per occurring irrep.
    """
    dim = decomp.rep.dim
    out = np.zeros((dim, dim), dtype=complex)
    supplied = {str(k) for k in blocks}
    occurring = set(decomp.blocks)
    if supplied != occurring:
        missing = occurring - supplied
        extra = supplied - occurring
        raise ValidationError(
            f"blocks must match occurring irreps exactly (missing {sorted(missing)}, "
            f"extra {sorted(extra)})"
        )
    for lab, blk in decomp.blocks.items():
        v = np.asarray(blocks[lab], dtype=complex)
        if v.shape != (blk.multiplicity, blk.multiplicity):
            raise ValidationError(
                f"block {lab} must be {blk.multiplicity}x{blk.multiplicity}"
            )
        if not is_unitary(v, 1e-9):
            raise ValidationError(f"block {lab} is not unitary")
        out += blk.isometry @ np.kron(np.eye(blk.irrep.dim), v) @ dagger(blk.isometry)
    return out


# ---------------------------------------------------------------------------
# rep combinators
# ---------------------------------------------------------------------------

def tensor_rep(a: UnitaryRep, b: UnitaryRep) -> UnitaryRep:
    """Tensor product of two reps of the same group."""
    _require_same_group(a, b)
    if isinstance(a, FiniteRep):
        mats = np.stack([np.kron(a.matrices[i], b.matrices[i]) for i in a.group.elements()])
        return FiniteRep(a.group, mats)
    if isinstance(a, U1Rep):
        charges = (a.charges[:, None] + b.charges[None, :]).reshape(-1)
        band = max(1, int(np.max(np.abs(charges)))) if charges.size else 1
        return U1Rep(U1Group(max(band, a.group.band_limit, b.group.band_limit)), charges)
    ia, ib = np.eye(a.dim), np.eye(b.dim)
    return SU2Rep(
        SU2Group(a.group.two_j_max + b.group.two_j_max),
        np.kron(a.jx, ib) + np.kron(ia, b.jx),
        np.kron(a.jy, ib) + np.kron(ia, b.jy),
        np.kron(a.jz, ib) + np.kron(ia, b.jz),
    )


def direct_sum_rep(a: UnitaryRep, b: UnitaryRep) -> UnitaryRep:
    """Block-diagonal rep on the direct sum; sector states embed by zero-padding."""
    _require_same_group(a, b)
    if isinstance(a, FiniteRep):
        n, da, db = a.group.order, a.dim, b.dim
        mats = np.zeros((n, da + db, da + db), dtype=complex)
        mats[:, :da, :da] = a.matrices
        mats[:, da:, da:] = b.matrices
        return FiniteRep(a.group, mats)
    if isinstance(a, U1Rep):
        charges = np.concatenate([a.charges, b.charges])
        return U1Rep(U1Group(max(a.group.band_limit, b.group.band_limit)), charges)
    z_ab = np.zeros((a.dim, b.dim))
    def blockdiag(x, y):
        return np.block([[x, z_ab], [z_ab.T, y]])
    return SU2Rep(
        SU2Group(max(a.group.two_j_max, b.group.two_j_max)),
        blockdiag(a.jx, b.jx),
        blockdiag(a.jy, b.jy),
        blockdiag(a.jz, b.jz),
    )


def _require_same_group(a: UnitaryRep, b: UnitaryRep) -> None:
    if type(a) is not type(b) or not a.group.compatible(b.group):
        raise TypeError("representations are over different groups")


def rep_power(rep: UnitaryRep, n: int) -> UnitaryRep:
    """n-fold tensor power of a rep."""
    if n < 1:
        raise ValidationError("tensor power requires n >= 1")
    out = rep
    for _ in range(n - 1):
        out = tensor_rep(out, rep)
    return out
