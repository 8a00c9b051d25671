"""File formats and canonical JSON rendering.

All complex numbers serialize as [re, im] pairs; all floats render with 17
significant digits, so parsing an emitted report and re-rendering it is
byte-identical.  One file holds one object (group, rep, or state) so
fixtures compose across commands.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .catalog import builtin_group
from .charfn import PureState
from .errors import FormatError
from .groups import FiniteGroup, SU2Group, U1Group
from .reps import FiniteRep, Irrep, IrrepTable, SU2Rep, U1Rep


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------

def _render(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format(float(obj), ".17g"))
    elif isinstance(obj, (complex, np.complexfloating)):
        _render([obj.real, obj.imag], out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _render(obj.tolist(), out)
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _render(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj, key=str)):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _render(obj[key], out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_dumps(obj) -> str:
    """Deterministic JSON: sorted keys, 17-significant-digit floats."""
    out: list[str] = []
    _render(obj, out)
    return "".join(out)


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def vector_to_json(v) -> list:
    return [complex_to_json(z) for z in np.asarray(v).reshape(-1)]


def matrix_to_json(m) -> list:
    m = np.asarray(m)
    return [[complex_to_json(z) for z in row] for row in m]


def _key(data: dict, name: str, context: str):
    if name not in data:
        raise FormatError(f"missing field {context}.{name}")
    return data[name]


def json_to_complex(pair, context: str) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise FormatError(f"{context}: complex numbers serialize as [re, im]")
    return complex(float(pair[0]), float(pair[1]))


def json_to_vector(data, context: str) -> np.ndarray:
    return np.array([json_to_complex(p, context) for p in data])


def json_to_matrix(data, context: str) -> np.ndarray:
    return np.array([[json_to_complex(p, context) for p in row] for row in data])


# ---------------------------------------------------------------------------
# object files
# ---------------------------------------------------------------------------

def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be a JSON object")
    return data


def load_group(path) -> tuple[object, IrrepTable | None]:
    """Load a group file; returns (group, irrep table or None).

    Finite groups may name a builtin (irreps included) or carry an explicit
    Cayley table with an optional inline "irreps" list.
    """
    data = load_json(path)
    kind = _key(data, "kind", "group")
    if kind == "finite":
        if "name" in data:
            return builtin_group(data["name"])
        elements = _key(data, "elements", "group")
        table = _key(data, "table", "group")
        group = FiniteGroup(elements, table)
        irreps = None
        if "irreps" in data:
            irreps = parse_irrep_table(group, data["irreps"])
        return group, irreps
    if kind == "u1":
        group = U1Group(int(_key(data, "band_limit", "group")))
        return group, IrrepTable.for_u1(group)
    if kind == "su2":
        group = SU2Group(int(_key(data, "max_spin_times_two", "group")))
        return group, IrrepTable.for_su2(group)
    raise FormatError(f"group.kind must be finite, u1, or su2 (got {kind!r})")


def parse_irrep_table(group: FiniteGroup, entries) -> IrrepTable:
    irreps = []
    for k, entry in enumerate(entries):
        ctx = f"irreps[{k}]"
        label = _key(entry, "label", ctx)
        dim = int(_key(entry, "dim", ctx))
        mats_by_label = _key(entry, "matrices", ctx)
        mats = np.empty((group.order, dim, dim), dtype=complex)
        for i, elem_label in enumerate(group.element_labels):
            if elem_label not in mats_by_label:
                raise FormatError(f"missing field {ctx}.matrices.{elem_label}")
            mats[i] = json_to_matrix(mats_by_label[elem_label], ctx)
        irreps.append(Irrep(label, dim, matrices=mats))
    return IrrepTable(group, irreps)


def irrep_table_to_json(table: IrrepTable) -> list:
    group = table.group
    out = []
    for ir in table:
        if ir.matrices is None:
            raise FormatError("only finite-group irrep tables serialize explicitly")
        out.append({
            "label": ir.label,
            "dim": ir.dim,
            "matrices": {
                group.label(i): matrix_to_json(ir.matrices[i])
                for i in group.elements()
            },
        })
    return out


def load_rep(path, group):
    """Load a representation file against an already-loaded group."""
    data = load_json(path)
    if isinstance(group, FiniteGroup):
        mats_by_label = _key(data, "matrices", "rep")
        dim = int(data.get("dim", 0)) or None
        first = None
        mats = []
        for label in group.element_labels:
            if label not in mats_by_label:
                raise FormatError(f"missing field rep.matrices.{label}")
            m = json_to_matrix(mats_by_label[label], "rep.matrices")
            if first is None:
                first = m.shape[0]
            mats.append(m)
        if dim is not None and first != dim:
            raise FormatError("rep.dim does not match the matrices")
        return FiniteRep(group, np.stack(mats))
    if isinstance(group, U1Group):
        return U1Rep(group, _key(data, "charges", "rep"))
    if isinstance(group, SU2Group):
        gens = _key(data, "generators", "rep")
        return SU2Rep(
            group,
            json_to_matrix(_key(gens, "Jx", "rep.generators"), "rep.generators.Jx"),
            json_to_matrix(_key(gens, "Jy", "rep.generators"), "rep.generators.Jy"),
            json_to_matrix(_key(gens, "Jz", "rep.generators"), "rep.generators.Jz"),
        )
    raise TypeError(f"unsupported group type {type(group).__name__}")


def rep_to_json(rep) -> dict:
    if isinstance(rep, FiniteRep):
        return {
            "dim": rep.dim,
            "matrices": {
                rep.group.label(i): matrix_to_json(rep.matrices[i])
                for i in rep.group.elements()
            },
        }
    if isinstance(rep, U1Rep):
        return {"charges": [int(n) for n in rep.charges]}
    return {"generators": {
        "Jx": matrix_to_json(rep.jx),
        "Jy": matrix_to_json(rep.jy),
        "Jz": matrix_to_json(rep.jz),
    }}


def load_state(path) -> PureState:
    data = load_json(path)
    amps = json_to_vector(_key(data, "amplitudes", "state"), "state.amplitudes")
    return PureState(amps)


def state_to_json(state: PureState) -> dict:
    return {"amplitudes": vector_to_json(state.amplitudes)}


def group_to_json(group, table: IrrepTable | None = None) -> dict:
    if isinstance(group, FiniteGroup):
        out = {
            "kind": "finite",
            "elements": list(group.element_labels),
            "table": [[int(x) for x in row] for row in group.mult_table],
        }
        if table is not None:
            out["irreps"] = irrep_table_to_json(table)
        return out
    if isinstance(group, U1Group):
        return {"kind": "u1", "band_limit": group.band_limit}
    return {"kind": "su2", "max_spin_times_two": group.two_j_max}


# ---------------------------------------------------------------------------
# verdicts and witnesses
# ---------------------------------------------------------------------------

def witness_to_json(witness) -> dict | None:
    # imported lazily: deciders depends on lower layers only
    from .deciders import OneDimRep, PDFunction

    if witness is None:
        return None
    if isinstance(witness, np.ndarray):
        return {"type": "invariant_unitary", "matrix": matrix_to_json(witness)}
    if isinstance(witness, OneDimRep):
        out = {"type": "one_dim_rep", "label": witness.label}
        if witness.values is not None:
            out["values"] = vector_to_json(witness.values)
        if witness.charge is not None:
            out["charge"] = int(witness.charge)
        return out
    if isinstance(witness, PDFunction):
        out = {"type": "pd_function"}
        if witness.values is not None:
            out["values"] = vector_to_json(witness.values)
        elif isinstance(witness.group, U1Group):
            out["fourier"] = {str(n): float(np.real(c)) for n, c in witness.fourier.items()}
        else:
            out["fourier"] = {lab: matrix_to_json(b) for lab, b in witness.fourier.items()}
        return out
    raise TypeError(f"cannot serialize witness of type {type(witness).__name__}")


def witness_from_json(data: dict, group, table: IrrepTable | None = None):
    from .deciders import OneDimRep, PDFunction

    kind = _key(data, "type", "witness")
    if kind == "invariant_unitary":
        return json_to_matrix(_key(data, "matrix", "witness"), "witness.matrix")
    if kind == "one_dim_rep":
        values = json_to_vector(data["values"], "witness.values") if "values" in data else None
        charge = int(data["charge"]) if "charge" in data else None
        return OneDimRep(group, _key(data, "label", "witness"), values=values, charge=charge)
    if kind == "pd_function":
        if "values" in data:
            return PDFunction(group, values=json_to_vector(data["values"], "witness.values"))
        fourier_raw = _key(data, "fourier", "witness")
        if isinstance(group, U1Group):
            return PDFunction(group, fourier={int(n): float(c) for n, c in fourier_raw.items()})
        fourier = {lab: json_to_matrix(m, "witness.fourier") for lab, m in fourier_raw.items()}
        if table is None:
            from .reps import IrrepTable as _Table
            cap = max(
                (int(lab[:-2]) if lab.endswith("/2") else 2 * int(lab) for lab in fourier),
                default=1,
            )
            table = _Table.for_su2(SU2Group(max(cap, 1)))
        return PDFunction(group, fourier=fourier, table=table)
    raise FormatError(f"unknown witness type {kind!r}")


def _jsonable(value):
    """Recursively coerce report payloads into canonical-serializable data."""
    if isinstance(value, (complex, np.complexfloating)):
        return complex_to_json(value)
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def verdict_to_json(verdict) -> dict:
    return {
        "outcome": verdict.outcome,
        "witness": witness_to_json(verdict.witness),
        "certificate": _jsonable(verdict.certificate),
        "reason": verdict.reason,
        "residuals": _jsonable(verdict.residuals),
    }
