"""Finite groups and the two supported compact Lie groups, U(1) and SU(2).

Group elements are plain values: an ``int`` index for finite groups, a
``float`` angle in [0, 2pi) for U(1), and a unit quaternion ``(w, x, y, z)``
as a length-4 ndarray for SU(2).  The quaternion convention matches the
spin-1/2 matrix ``w*I - i*(x*sx + y*sy + z*sz)``, so quaternion products
compose the same way the unitaries do.

Haar averaging is exact for every integrand this package produces: plain
summation for finite groups, equispaced sampling for U(1) (all integrands
are trigonometric polynomials), and an Euler-angle product rule for SU(2)
that integrates Wigner matrix elements exactly up to a configured spin.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, FormatError, ValidationError

TWO_PI = 2.0 * np.pi

#: Exhaustive associativity checking is O(n^3); above this order we spot-check.
EXHAUSTIVE_ORDER_LIMIT = 64
_SPOT_CHECK_TRIPLES = 10_000


# ---------------------------------------------------------------------------
# quaternion helpers (SU(2) elements)
# ---------------------------------------------------------------------------

QUAT_IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])
QUAT_MINUS_IDENTITY = np.array([-1.0, 0.0, 0.0, 0.0])


def quat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    w1, v1 = a[0], a[1:]
    w2, v2 = b[0], b[1:]
    out = np.empty(4)
    out[0] = w1 * w2 - v1 @ v2
    out[1:] = w1 * v2 + w2 * v1 + np.cross(v1, v2)
    return out / np.linalg.norm(out)


def quat_conjugate(a: np.ndarray) -> np.ndarray:
    out = a.copy()
    out[1:] = -out[1:]
    return out


def quat_from_axis_angle(axis: Sequence[float], angle: float) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    out = np.empty(4)
    out[0] = np.cos(angle / 2.0)
    out[1:] = np.sin(angle / 2.0) * n
    return out


def quat_from_euler_zyz(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Quaternion of Rz(alpha) Ry(beta) Rz(gamma)."""
    qa = quat_from_axis_angle([0.0, 0.0, 1.0], alpha)
    qb = quat_from_axis_angle([0.0, 1.0, 0.0], beta)
    qc = quat_from_axis_angle([0.0, 0.0, 1.0], gamma)
    return quat_multiply(quat_multiply(qa, qb), qc)


def quat_to_axis_angle(q: np.ndarray) -> tuple[np.ndarray, float]:
    """Rotation axis and angle in [0, 2pi] such that q = (cos a/2, sin a/2 * n)."""
    w = float(np.clip(q[0], -1.0, 1.0))
    half = np.arccos(w)
    s = np.sin(half)
    if s < 1e-14:
        # +/- identity: any axis works (the induced unitary is axis-independent)
        return np.array([0.0, 0.0, 1.0]), 2.0 * half
    return q[1:] / s, 2.0 * half


def _check_quaternion(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise TypeError("SU(2) element must be a length-4 quaternion")
    if abs(np.linalg.norm(q) - 1.0) > 1e-12:
        raise ValidationError("SU(2) quaternion must have unit norm (tol 1e-12)")
    return q


# ---------------------------------------------------------------------------
# group axiom checking
# ---------------------------------------------------------------------------

def check_group_axioms(table, rng_seed: int = 0) -> bool:
    """True iff an index matrix is the Cayley table of a group.

    Checks Latin-square structure, a two-sided identity, inverses, and
    associativity (exhaustive up to order 64, then 10^4 random triples).
    Malformed input (non-square, out-of-range entries) raises FormatError.
    """
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise FormatError("Cayley table must be a non-empty square matrix")
    if not np.issubdtype(t.dtype, np.integer):
        if not np.all(t == np.round(t)):
            raise FormatError("Cayley table entries must be integers")
        t = t.astype(int)
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise FormatError("Cayley table entries must be indices in [0, n)")

    idx = np.arange(n)
    if not (np.all(np.sort(t, axis=1) == idx) and np.all(np.sort(t, axis=0) == idx[:, None])):
        return False
    if _find_identity(t) is None:
        return False
    if n <= EXHAUSTIVE_ORDER_LIMIT:
        left = t[t, :]        # left[i,j,k]  = t[t[i,j], k]
        right = t[:, t]       # right[i,j,k] = t[i, t[j,k]]
        if not np.array_equal(left, right):
            return False
    else:
        rng = np.random.default_rng(rng_seed)
        trip = rng.integers(0, n, size=(_SPOT_CHECK_TRIPLES, 3))
        i, j, k = trip.T
        if not np.array_equal(t[t[i, j], k], t[i, t[j, k]]):
            return False
    # Latin square + associativity + identity already force inverses,
    # but verify explicitly so the failure mode is visible.
    e = _find_identity(t)
    return all(np.any(t[i] == e) for i in range(n))


def _find_identity(t: np.ndarray) -> int | None:
    n = t.shape[0]
    idx = np.arange(n)
    for i in range(n):
        if np.array_equal(t[i], idx) and np.array_equal(t[:, i], idx):
            return i
    return None


# ---------------------------------------------------------------------------
# group classes
# ---------------------------------------------------------------------------

class FiniteGroup:
    """A finite group presented by element labels and a Cayley table.

    ``mult_table[i, j]`` is the index of ``g_i * g_j``.  Elements are the
    integer indices themselves.
    """

    kind = "finite"

    def __init__(self, element_labels: Sequence[str], mult_table) -> None:
        table = np.asarray(mult_table, dtype=int)
        labels = tuple(str(s) for s in element_labels)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise FormatError("Cayley table must be square")
        if len(labels) != table.shape[0]:
            raise FormatError("label count does not match table size")
        if len(set(labels)) != len(labels):
            raise FormatError("element labels must be distinct")
        if not check_group_axioms(table):
            raise ValidationError("table does not satisfy the group axioms")
        self.element_labels = labels
        self.mult_table = table
        self.mult_table.setflags(write=False)
        self.identity_index = _find_identity(table)
        inv = np.empty(self.order, dtype=int)
        for i in range(self.order):
            inv[i] = int(np.flatnonzero(table[i] == self.identity_index)[0])
        self.inverse_table = inv
        self.inverse_table.setflags(write=False)

    @property
    def order(self) -> int:
        return len(self.element_labels)

    @property
    def identity(self) -> int:
        return self.identity_index

    def elements(self) -> range:
        return range(self.order)

    def multiply(self, a: int, b: int) -> int:
        return int(self.mult_table[self._check(a), self._check(b)])

    def inverse(self, a: int) -> int:
        return int(self.inverse_table[self._check(a)])

    def label(self, a: int) -> str:
        return self.element_labels[self._check(a)]

    def index_of(self, label: str) -> int:
        return self.element_labels.index(label)

    def _check(self, a) -> int:
        if isinstance(a, (bool, float, np.floating)) or not isinstance(a, (int, np.integer)):
            raise TypeError(f"finite group element must be an index, got {type(a).__name__}")
        if not 0 <= int(a) < self.order:
            raise ValidationError(f"element index {a} out of range for group of order {self.order}")
        return int(a)

    def compatible(self, other) -> bool:
        return (
            isinstance(other, FiniteGroup)
            and self.element_labels == other.element_labels
            and np.array_equal(self.mult_table, other.mult_table)
        )

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


class U1Group:
    """The circle group; elements are angles in [0, 2pi).

    ``band_limit`` bounds the charges of every representation used with this
    group, which makes equispaced sampling an exact quadrature.
    """

    kind = "u1"

    def __init__(self, band_limit: int) -> None:
        if band_limit < 0:
            raise ValidationError("u1 band limit must be >= 0")
        self.band_limit = int(band_limit)

    identity = 0.0

    def multiply(self, a: float, b: float) -> float:
        return float((self._check(a) + self._check(b)) % TWO_PI)

    def inverse(self, a: float) -> float:
        return float((-self._check(a)) % TWO_PI)

    @staticmethod
    def _check(a) -> float:
        if isinstance(a, (np.ndarray, list, tuple)):
            raise TypeError("U(1) element must be a scalar angle")
        return float(a)

    def haar_nodes(self, band_limit: int | None = None) -> np.ndarray:
        b = self._resolve_band(band_limit)
        n = 2 * b + 1
        return np.arange(n) * (TWO_PI / n)

    def _resolve_band(self, band_limit: int | None) -> int:
        # Pair products of in-band integrands reach 2 * band_limit; that is
        # the default capacity and the hard cap for explicit requests.
        cap = 2 * self.band_limit
        if band_limit is None:
            return cap
        if band_limit > cap:
            raise ConfigurationError(
                f"integrand band limit {band_limit} exceeds quadrature capacity {cap} "
                f"(group configured with band_limit={self.band_limit})"
            )
        return int(band_limit)

    def compatible(self, other) -> bool:
        return isinstance(other, U1Group)

    def __repr__(self) -> str:
        return f"U1Group(band_limit={self.band_limit})"


class SU2Group:
    """SU(2); elements are unit quaternions.

    ``two_j_max`` is twice the largest spin of any representation used with
    this group; the default quadrature integrates products of two Wigner
    matrix elements of such spins exactly.
    """

    kind = "su2"

    def __init__(self, two_j_max: int) -> None:
        if two_j_max < 1:
            raise ValidationError("su2 quadrature order (two_j_max) must be >= 1")
        self.two_j_max = int(two_j_max)

    identity = QUAT_IDENTITY

    def multiply(self, a, b) -> np.ndarray:
        return quat_multiply(_check_quaternion(a), _check_quaternion(b))

    def inverse(self, a) -> np.ndarray:
        return quat_conjugate(_check_quaternion(a))

    def haar_quadrature(self, two_j_limit: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Nodes (quaternions) and weights exact for Wigner elements up to the limit."""
        two_s = self._resolve_degree(two_j_limit)
        return su2_quadrature(two_s)

    def _resolve_degree(self, two_j_limit: int | None) -> int:
        cap = 2 * self.two_j_max
        if two_j_limit is None:
            return cap
        if two_j_limit > cap:
            raise ConfigurationError(
                f"integrand spin budget 2j={two_j_limit} exceeds quadrature capacity {cap} "
                f"(group configured with two_j_max={self.two_j_max})"
            )
        return int(two_j_limit)

    def compatible(self, other) -> bool:
        return isinstance(other, SU2Group)

    def __repr__(self) -> str:
        return f"SU2Group(two_j_max={self.two_j_max})"


Group = FiniteGroup | U1Group | SU2Group


def su2_quadrature(two_s: int) -> tuple[np.ndarray, np.ndarray]:
    """Euler-angle product quadrature on SU(2).

    Exact for every Wigner matrix element D^j_{mn} with 2j <= two_s: the
    alpha/gamma sums (uniform over a 4pi period, so half-integer frequencies
    are resolved) annihilate m != 0 or n != 0 terms exactly, and what
    survives is a Legendre polynomial in cos(beta), handled by Gauss-Legendre.
    """
    n_angle = two_s + 1
    n_leg = (two_s + 2 + 3) // 4  # 2L-1 >= two_s/2
    angles = np.arange(n_angle) * (4.0 * np.pi / n_angle)
    x, w_leg = np.polynomial.legendre.leggauss(n_leg)
    betas = np.arccos(x)
    quats = np.empty((n_angle * n_leg * n_angle, 4))
    weights = np.empty(n_angle * n_leg * n_angle)
    k = 0
    for alpha in angles:
        for beta, wb in zip(betas, w_leg):
            for gamma in angles:
                quats[k] = quat_from_euler_zyz(alpha, beta, gamma)
                weights[k] = wb
                k += 1
    weights /= weights.sum()
    return quats, weights


# ---------------------------------------------------------------------------
# group-level operations
# ---------------------------------------------------------------------------

def multiply(group: Group, a, b):
    """Group product of two elements."""
    return group.multiply(a, b)


def inverse(group: Group, a):
    """Group inverse of an element."""
    return group.inverse(a)


def haar_average(group: Group, f: Callable, band_limit: int | None = None) -> np.ndarray:
    """Average a matrix-valued function over the group with Haar weight.

    Finite groups sum exactly.  For U(1) the integrand must be a
    trigonometric polynomial; `band_limit` declares its maximal |frequency|
    (default: the capacity 2 * group.band_limit).  For SU(2), `band_limit`
    declares the maximal 2j in the integrand's Wigner expansion.  Requests
    beyond the group's configured capacity raise ConfigurationError.
    """
    if isinstance(group, FiniteGroup):
        acc = None
        for i in group.elements():
            val = np.asarray(f(i))
            acc = val.astype(complex) if acc is None else acc + val
        return acc / group.order
    if isinstance(group, U1Group):
        nodes = group.haar_nodes(band_limit)
        acc = None
        for theta in nodes:
            val = np.asarray(f(float(theta)))
            acc = val.astype(complex) if acc is None else acc + val
        return acc / len(nodes)
    if isinstance(group, SU2Group):
        quats, weights = group.haar_quadrature(band_limit)
        acc = None
        for q, w in zip(quats, weights):
            val = np.asarray(f(q)) * w
            acc = val.astype(complex) if acc is None else acc + val
        return acc
    raise TypeError(f"unsupported group type {type(group).__name__}")


def conjugacy_classes(group: FiniteGroup) -> list[tuple[int, ...]]:
    """Partition of element indices into conjugacy classes.

    Classes are sorted by (size, smallest member) for reproducibility.
    """
    if not isinstance(group, FiniteGroup):
        raise TypeError("conjugacy classes are defined here for finite groups only")
    t = group.mult_table
    inv = group.inverse_table
    remaining = set(range(group.order))
    classes = []
    while remaining:
        g = min(remaining)
        orbit = {int(t[t[h, g], inv[h]]) for h in range(group.order)}
        classes.append(tuple(sorted(orbit)))
        remaining -= orbit
    classes.sort(key=lambda c: (len(c), c[0]))
    return classes
