"""Necessary conditions for reversible asymptotic interconversion.

For many-copy conversion at rate R between states of a compact Lie group
representation, three conditions are necessary: equal stabilizer
subgroups, proportional covariance matrices of the Lie-algebra generators
(with ratio R), and conservation of generator expectations along the
commutator subalgebra.  Sufficiency is conjectured, not established, and
the report says so explicitly: a passing report never claims
convertibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import dagger, expm_hermitian
from .charfn import PureState, sym_group
from .errors import ConfigurationError, UnsupportedGroupError, ValidationError
from .reps import SU2Rep, U1Rep, UnitaryRep

RATE_RESIDUAL_TOL = 1e-6

SUFFICIENCY_NOTE = (
    "necessary conditions only; their sufficiency is conjectured for "
    "connected groups and is not assumed here"
)


class LieAlgebraBasis:
    """A basis of Hermitian generators closed under -i[.,.]."""

    def __init__(self, generators, tol_herm: float = 1e-10, tol_closure: float = 1e-9):
        gens = [np.asarray(g, dtype=complex) for g in generators]
        if not gens:
            raise ValidationError("at least one generator is required")
        d = gens[0].shape[0]
        for g in gens:
            if g.shape != (d, d):
                raise ValidationError("generators must share one square shape")
            if np.linalg.norm(g - dagger(g)) > tol_herm:
                raise ValidationError("generators must be Hermitian (tol 1e-10)")
        self.generators = gens
        self.dim = d
        self._check_closure(tol_closure)

    @classmethod
    def from_rep(cls, rep: UnitaryRep) -> "LieAlgebraBasis":
        if isinstance(rep, U1Rep):
            return cls([np.diag(rep.charges.astype(complex))])
        if isinstance(rep, SU2Rep):
            return cls(rep.generators())
        raise UnsupportedGroupError("Lie-algebra data exists only for U(1) and SU(2) reps")

    def __len__(self) -> int:
        return len(self.generators)

    def _real_stack(self, mats) -> np.ndarray:
        flat = np.array([m.reshape(-1) for m in mats])
        return np.hstack([flat.real, flat.imag])

    def _commutators(self) -> list[np.ndarray]:
        out = []
        for k in range(len(self.generators)):
            for l in range(k + 1, len(self.generators)):
                a, b = self.generators[k], self.generators[l]
                out.append(-1j * (a @ b - b @ a))
        return out

    def _check_closure(self, tol: float) -> None:
        comms = self._commutators()
        if not comms:
            return
        basis_rows = self._real_stack(self.generators)
        for c in comms:
            row = self._real_stack([c])[0]
            coef, res, *_ = np.linalg.lstsq(basis_rows.T, row, rcond=None)
            resid = np.linalg.norm(basis_rows.T @ coef - row)
            if resid > tol * max(1.0, np.linalg.norm(row)):
                raise ValidationError("generator set is not closed under -i[.,.]")

    def structure_constants(self) -> np.ndarray:
        """c[k, l, m] with -i[L_k, L_l] = sum_m c[k,l,m] L_m."""
        k = len(self.generators)
        out = np.zeros((k, k, k))
        basis_rows = self._real_stack(self.generators)
        for a in range(k):
            for b in range(k):
                if a == b:
                    continue
                c = -1j * (self.generators[a] @ self.generators[b]
                           - self.generators[b] @ self.generators[a])
                row = self._real_stack([c])[0]
                coef, *_ = np.linalg.lstsq(basis_rows.T, row, rcond=None)
                out[a, b] = coef
        return out

    def commutator_subalgebra(self, tol: float = 1e-9) -> list[np.ndarray]:
        """Orthonormal (Hilbert-Schmidt) basis of span{-i[L_k, L_l]}.

        Empty for abelian algebras; the whole algebra for su(2); excludes
        any central directions (e.g. the identity inside u(2)).
        """
        comms = self._commutators()
        if not comms:
            return []
        rows = self._real_stack(comms)
        u, s, vh = np.linalg.svd(rows, full_matrices=False)
        rank = int(np.sum(s > tol * max(1.0, s[0])))
        d = self.dim
        out = []
        for i in range(rank):
            vec = vh[i]
            mat = vec[: d * d].reshape(d, d) + 1j * vec[d * d :].reshape(d, d)
            out.append(0.5 * (mat + dagger(mat)))
        return out


def _generators_of(basis) -> list[np.ndarray]:
    return basis.generators if isinstance(basis, LieAlgebraBasis) else [np.asarray(g) for g in basis]


def generator_expectations(state: PureState, basis) -> np.ndarray:
    """<psi|L_k|psi> per generator; real by Hermiticity."""
    psi = state.amplitudes
    vals = np.array([psi.conj() @ (g @ psi) for g in _generators_of(basis)])
    if np.max(np.abs(vals.imag)) > 1e-12:
        raise ValidationError("generator expectation has an imaginary part; generator not Hermitian?")
    return vals.real


def covariance(state: PureState, basis) -> np.ndarray:
    """Symmetrized second moments minus first-moment products; real PSD."""
    psi = state.amplitudes
    gens = _generators_of(basis)
    if state.dim != gens[0].shape[0]:
        raise ValidationError("state and generators act on different dimensions")
    vecs = [g @ psi for g in gens]
    k = len(gens)
    means = generator_expectations(state, basis)
    cov = np.empty((k, k))
    for a in range(k):
        for b in range(a, k):
            second = 0.5 * (vecs[a].conj() @ vecs[b] + vecs[b].conj() @ vecs[a]).real
            cov[a, b] = cov[b, a] = second - means[a] * means[b]
    return cov


def commutator_subalgebra(basis: LieAlgebraBasis, tol: float = 1e-9) -> list[np.ndarray]:
    return basis.commutator_subalgebra(tol)


@dataclass
class AsymptoticReport:
    """Condition-by-condition record of the necessary-condition check."""

    sym_equal: bool
    rate_from_covariance: float | None
    covariance_consistency_residual: float
    momentum_condition: dict = field(default_factory=dict)
    overall: str = "fail"            # "necessary-conditions-hold" | "fail"
    first_violated: str | None = None
    rate_note: str = ""
    disclaimer: str = SUFFICIENCY_NOTE

    @property
    def holds(self) -> bool:
        return self.overall == "necessary-conditions-hold"


def check_reversible_asymptotic(psi: PureState, phi: PureState, rep: UnitaryRep,
                                basis: LieAlgebraBasis | None = None,
                                sym_tol: float = 1e-8,
                                rate_tol: float = RATE_RESIDUAL_TOL) -> AsymptoticReport:
    """Evaluate the three necessary conditions and extract the candidate rate.

    (i) equal stabilizers; (ii) covariance proportionality C(psi) = R C(phi)
    fitted by least squares with a relative-residual gate; (iii) generator
    expectations conserved at rate R along the commutator subalgebra
    (vacuous for U(1) and reported as such).  Defined for U(1) and SU(2)
    representations only.
    """
    if not isinstance(rep, (U1Rep, SU2Rep)):
        raise UnsupportedGroupError(
            "asymptotic rate conditions are stated for compact Lie groups (U(1), SU(2))"
        )
    if basis is None:
        basis = LieAlgebraBasis.from_rep(rep)

    sym_a = sym_group(psi, rep, tol=sym_tol)
    sym_b = sym_group(phi, rep, tol=sym_tol)
    sym_equal = sym_a.matches(sym_b)

    cov_a = covariance(psi, basis)
    cov_b = covariance(phi, basis)
    scale_a = float(np.max(np.abs(cov_a)))
    scale_b = float(np.max(np.abs(cov_b)))
    tiny = 1e-12
    rate = None
    rate_note = ""
    cov_residual = 0.0
    cond_ii = False
    if scale_b <= tiny and scale_a <= tiny:
        cond_ii = True
        rate_note = "both covariance matrices vanish; the rate is unconstrained by (ii)"
    elif scale_b <= tiny or scale_a <= tiny:
        cov_residual = max(scale_a, scale_b)
    else:
        fit = float(np.sum(cov_a * cov_b) / np.sum(cov_b * cov_b))
        cov_residual = float(np.max(np.abs(cov_a - fit * cov_b)) / scale_a)
        if fit > tiny and cov_residual <= rate_tol:
            cond_ii = True
            rate = fit

    momentum = _momentum_condition(psi, phi, basis, rate, rate_tol)

    first = None
    if not sym_equal:
        first = "i"
    elif not cond_ii:
        first = "ii"
    elif momentum["holds"] is False:
        first = "iii"
    overall = "necessary-conditions-hold" if first is None else "fail"
    return AsymptoticReport(
        sym_equal=sym_equal,
        rate_from_covariance=rate,
        covariance_consistency_residual=cov_residual,
        momentum_condition=momentum,
        overall=overall,
        first_violated=first,
        rate_note=rate_note,
    )


def _momentum_condition(psi, phi, basis, rate, rate_tol) -> dict:
    sub = basis.commutator_subalgebra()
    if not sub:
        return {"holds": None, "residual": 0.0, "vacuous": True,
                "note": "commutator subalgebra is trivial (abelian group); condition vacuous"}
    pa = generator_expectations(psi, sub)
    pb = generator_expectations(phi, sub)
    scale = max(1.0, float(np.max(np.abs(pa))), float(np.max(np.abs(pb))))
    if rate is None:
        # (ii) left the rate unconstrained; check proportionality on its own
        if np.max(np.abs(pb)) <= 1e-12:
            resid = float(np.max(np.abs(pa))) / scale
            return {"holds": resid <= rate_tol, "residual": resid, "vacuous": False}
        fit = float(pa @ pb / (pb @ pb))
        resid = float(np.max(np.abs(pa - fit * pb))) / scale
        return {"holds": resid <= rate_tol, "residual": resid, "vacuous": False,
                "fitted_rate": fit}
    resid = float(np.max(np.abs(pa - rate * pb))) / scale
    return {"holds": resid <= rate_tol, "residual": resid, "vacuous": False}


def charfn_hessian_check(psi: PureState, basis: LieAlgebraBasis, step: float) -> float:
    """Finite-difference Hessian of -log|chi(exp(-i t.L))| at t = 0 vs covariance.

    The characteristic function along one-parameter subgroups falls off
    quadratically away from the identity with curvature given by the
    covariance matrix; this check returns the maximal entrywise deviation
    between the second-order stencil and the closed form, which scales as
    O(step^2).
    """
    if not 0.0 < step <= 1e-2:
        raise ValidationError("step must lie in (0, 1e-2]")
    psi_vec = psi.amplitudes
    gens = _generators_of(basis)
    if psi.dim != gens[0].shape[0]:
        raise ValidationError("state and generators act on different dimensions")

    def neg_log_chi(t: np.ndarray) -> float:
        h = sum(float(c) * g for c, g in zip(t, gens))
        val = psi_vec.conj() @ (expm_hermitian(h, scale=-1j) @ psi_vec)
        mag = abs(val)
        if mag < 1e-12:
            raise ConfigurationError(
                "characteristic function vanished inside the stencil; use a smaller step"
            )
        return -np.log(mag)

    k = len(gens)
    hess = np.empty((k, k))
    for a in range(k):
        e_a = np.zeros(k)
        e_a[a] = step
        hess[a, a] = (neg_log_chi(e_a) + neg_log_chi(-e_a)) / step**2
        for b in range(a + 1, k):
            e_b = np.zeros(k)
            e_b[b] = step
            val = (
                neg_log_chi(e_a + e_b)
                - neg_log_chi(e_a - e_b)
                - neg_log_chi(-e_a + e_b)
                + neg_log_chi(-e_a - e_b)
            ) / (4.0 * step**2)
            hess[a, b] = hess[b, a] = val
    return float(np.max(np.abs(hess - covariance(psi, basis))))
