"""Built-in finite groups with complete irrep tables.

The deciders need explicit irreps, and computing character tables for
arbitrary finite groups is out of scope; this catalog provides cyclic
groups Z_n (n <= 24), the symmetric group S3, the dihedral group D4, and
the quaternion group Q8.  User-supplied groups must bring their own tables.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .errors import ValidationError
from .groups import FiniteGroup
from .reps import FiniteRep, Irrep, IrrepTable

MAX_CYCLIC_ORDER = 24


def cyclic_group(n: int) -> FiniteGroup:
    if not 1 <= n <= MAX_CYCLIC_ORDER:
        raise ValidationError(f"cyclic order must be in [1, {MAX_CYCLIC_ORDER}]")
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    labels = [f"g{k}" for k in range(n)]
    labels[0] = "e"
    return FiniteGroup(labels, table)


def cyclic_irreps(group: FiniteGroup) -> IrrepTable:
    n = group.order
    irreps = []
    for k in range(n):
        mats = np.exp(2j * np.pi * k * np.arange(n) / n).reshape(n, 1, 1)
        irreps.append(Irrep(f"chi{k}", 1, matrices=mats))
    return IrrepTable(group, irreps)


def symmetric_group_s3() -> FiniteGroup:
    perms = _s3_permutations()
    n = len(perms)
    index = {p: i for i, p in enumerate(perms)}
    table = np.empty((n, n), dtype=int)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[_compose(p, q)]
    return FiniteGroup([_perm_label(p) for p in perms], table)


def _s3_permutations():
    # identity first, then transpositions, then 3-cycles; fixed order
    ordered = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    assert sorted(ordered) == sorted(permutations(range(3)))
    return ordered


def _compose(p, q):
    """(p o q)(x) = p(q(x))"""
    return tuple(p[q[x]] for x in range(len(p)))


def _perm_label(p) -> str:
    if p == (0, 1, 2):
        return "e"
    moved = [x for x in range(3) if p[x] != x]
    if len(moved) == 2:
        return f"({moved[0]+1}{moved[1]+1})"
    start = 0
    cyc = [start, p[start], p[p[start]]]
    return "(" + "".join(str(x + 1) for x in cyc) + ")"


def s3_irreps(group: FiniteGroup) -> IrrepTable:
    perms = _s3_permutations()
    n = len(perms)
    trivial = np.ones((n, 1, 1), dtype=complex)
    sign = np.array([_perm_sign(p) for p in perms], dtype=complex).reshape(n, 1, 1)
    # standard 2-d irrep: permutation action restricted to the plane orthogonal
    # to (1,1,1), in the orthonormal basis below (matrices come out real).
    basis = np.array([[1, -1, 0] / np.sqrt(2), [1, 1, -2] / np.sqrt(6)]).T
    std = np.empty((n, 2, 2), dtype=complex)
    for i, p in enumerate(perms):
        pm = np.zeros((3, 3))
        for x in range(3):
            pm[p[x], x] = 1.0
        std[i] = basis.T @ pm @ basis
    return IrrepTable(
        group,
        [
            Irrep("trivial", 1, matrices=trivial),
            Irrep("sign", 1, matrices=sign),
            Irrep("standard", 2, matrices=std),
        ],
    )


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def dihedral_group_d4() -> FiniteGroup:
    # elements r^a s^b with s r = r^-1 s; index = a + 4*b
    def mul(x, y):
        a, b = x % 4, x // 4
        c, d = y % 4, y // 4
        a_new = (a + (c if b == 0 else -c)) % 4
        return a_new + 4 * ((b + d) % 2)

    table = np.array([[mul(x, y) for y in range(8)] for x in range(8)])
    labels = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"]
    return FiniteGroup(labels, table)


def d4_irreps(group: FiniteGroup) -> IrrepTable:
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    ref = np.array([[1.0, 0.0], [0.0, -1.0]])
    two_d = np.empty((8, 2, 2), dtype=complex)
    one_d = {name: np.empty((8, 1, 1), dtype=complex) for name in ("trivial", "sign_s", "sign_r", "sign_rs")}
    for x in range(8):
        a, b = x % 4, x // 4
        two_d[x] = np.linalg.matrix_power(rot, a) @ (ref if b else np.eye(2))
        one_d["trivial"][x] = 1.0
        one_d["sign_s"][x] = (-1.0) ** b            # -1 on reflections
        one_d["sign_r"][x] = (-1.0) ** a            # -1 on odd rotations
        one_d["sign_rs"][x] = (-1.0) ** (a + b)
    irreps = [Irrep(name, 1, matrices=m) for name, m in one_d.items()]
    irreps.append(Irrep("planar", 2, matrices=two_d))
    return IrrepTable(group, irreps)


def quaternion_group_q8() -> FiniteGroup:
    # index = 2*u + s where u in {1=0, i=1, j=2, k=3} and s = 0 for +, 1 for -
    units = {0: (1, 0), 1: (1, 1), 2: (1, 2), 3: (1, 3)}

    def unit_mul(u, v):
        # returns (sign, unit) for e_u * e_v with e_0 = 1
        if u == 0:
            return 1, v
        if v == 0:
            return 1, u
        if u == v:
            return -1, 0
        # i*j=k, j*k=i, k*i=j and anticommute
        order = {(1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2)}
        if (u, v) in order:
            return order[(u, v)]
        s, w = order[(v, u)]
        return -s, w

    def mul(x, y):
        u, su = x // 2, x % 2
        v, sv = y // 2, y % 2
        s, w = unit_mul(u, v)
        neg = (su + sv + (1 if s < 0 else 0)) % 2
        return 2 * w + neg

    table = np.array([[mul(x, y) for y in range(8)] for x in range(8)])
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return FiniteGroup(labels, table)


def q8_irreps(group: FiniteGroup) -> IrrepTable:
    u2 = {
        0: np.eye(2, dtype=complex),
        1: np.array([[1j, 0], [0, -1j]]),
        2: np.array([[0, 1], [-1, 0]], dtype=complex),
        3: np.array([[0, 1j], [1j, 0]]),
    }
    two_d = np.empty((8, 2, 2), dtype=complex)
    one_d = {name: np.empty((8, 1, 1), dtype=complex) for name in ("trivial", "sign_i", "sign_j", "sign_k")}
    signs = {"trivial": (1, 1, 1), "sign_i": (1, -1, -1), "sign_j": (-1, 1, -1), "sign_k": (-1, -1, 1)}
    for x in range(8):
        u, s = x // 2, x % 2
        two_d[x] = (-1.0) ** s * u2[u]
        for name, (si, sj, sk) in signs.items():
            val = {0: 1, 1: si, 2: sj, 3: sk}[u]
            one_d[name][x] = val  # the sign s acts trivially (factors through Q8 / {+-1})
    irreps = [Irrep(name, 1, matrices=m) for name, m in one_d.items()]
    irreps.append(Irrep("spinor", 2, matrices=two_d))
    return IrrepTable(group, irreps)


_BUILTINS = {
    "S3": (symmetric_group_s3, s3_irreps),
    "D4": (dihedral_group_d4, d4_irreps),
    "Q8": (quaternion_group_q8, q8_irreps),
}


def builtin_group(name: str) -> tuple[FiniteGroup, IrrepTable]:
    """Group and complete irrep table by catalog name: Zn (n <= 24), S3, D4, Q8."""
    key = name.strip()
    upper = key.upper()
    if upper.startswith("Z") and upper[1:].isdigit():
        g = cyclic_group(int(upper[1:]))
        return g, cyclic_irreps(g)
    if upper in _BUILTINS:
        make_group, make_irreps = _BUILTINS[upper]
        g = make_group()
        return g, make_irreps(g)
    raise ValidationError(f"unknown builtin group {name!r} (expected Zn, S3, D4, or Q8)")


def builtin_names() -> list[str]:
    return [f"Z{n}" for n in range(1, MAX_CYCLIC_ORDER + 1)] + sorted(_BUILTINS)


def regular_representation(group: FiniteGroup) -> FiniteRep:
    """Left regular representation: permutation matrices of left multiplication."""
    n = group.order
    mats = np.zeros((n, n, n), dtype=complex)
    for g in range(n):
        for h in range(n):
            mats[g, group.mult_table[g, h], h] = 1.0
    return FiniteRep(group, mats)
