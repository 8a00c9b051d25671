"""Command-line interface.

Subcommands: charfn, decompose, equiv, convert, asymptotic, sym, verify.
Exit codes are a stable contract: 0 yes/success, 1 no, 2 parse error,
3 validation error, 4 undecided.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from ._linalg import dagger
from .asymptotic import LieAlgebraBasis, check_reversible_asymptotic
from .charfn import FiniteSymmetry, SU2Symmetry, U1Symmetry, char_fn, sym_group
from .deciders import OneDimRep, PDFunction, convertible, g_equiv, unitary_g_equiv
from .errors import (
    AsymkitError,
    FormatError,
    UnsupportedGroupError,
    ValidationError,
)
from .grids import grid_for, su2_grid, u1_grid
from .groups import FiniteGroup, SU2Group, U1Group
from .oracle import verify_pd_witness
from .reps import FiniteRep, decompose
from .serialize import (
    canonical_dumps,
    complex_to_json,
    json_to_matrix,
    load_group,
    load_json,
    load_rep,
    load_state,
    matrix_to_json,
    verdict_to_json,
    witness_from_json,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_UNDECIDED = 4

TOLERANCE_NAMES = ("equality", "zero", "sym", "psd", "rate")


@dataclass
class RunConfig:
    """Per-invocation settings: tolerance overrides, seed, output format."""

    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    fmt: str = "json"
    out: str | None = None

    def tol(self, name: str, default: float) -> float:
        return self.tolerances.get(name, default)


def _parse_tolerances(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise FormatError(f"--tol expects NAME=VALUE, got {pair!r}")
        name, _, value = pair.partition("=")
        if name not in TOLERANCE_NAMES:
            raise FormatError(f"unknown tolerance {name!r} (known: {', '.join(TOLERANCE_NAMES)})")
        try:
            val = float(value)
        except ValueError:
            raise FormatError(f"tolerance {name} value {value!r} is not a number") from None
        if not 0.0 < val < 1e-2:
            raise ValidationError(f"tolerance {name}={val} must lie in (0, 1e-2)")
        out[name] = val
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asymkit",
        description="Classify and decide interconvertibility of pure states under symmetric dynamics.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help="override a named tolerance (equality, zero, sym, psd, rate)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized subroutines")
    common.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")
    common.add_argument("--irreps", metavar="PATH",
                        help="irrep table file for finite groups (overrides the group file)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charfn", parents=[common], help="characteristic function of a state")
    p.add_argument("group"); p.add_argument("rep"); p.add_argument("state")

    p = sub.add_parser("decompose", parents=[common], help="isotypic decomposition of a rep")
    p.add_argument("group"); p.add_argument("rep")

    p = sub.add_parser("equiv", parents=[common], help="decide equivalence of two states")
    p.add_argument("group"); p.add_argument("rep")
    p.add_argument("state_a"); p.add_argument("state_b")
    p.add_argument("--mode", choices=("unitary", "gcov"), required=True)

    p = sub.add_parser("convert", parents=[common], help="decide one-way convertibility")
    p.add_argument("group"); p.add_argument("rep")
    p.add_argument("state_a"); p.add_argument("state_b")

    p = sub.add_parser("asymptotic", parents=[common],
                       help="necessary conditions for reversible asymptotic conversion")
    p.add_argument("group"); p.add_argument("rep")
    p.add_argument("state_a"); p.add_argument("state_b")
    p.add_argument("--generators", metavar="PATH",
                   help="JSON file with explicit Lie-algebra generators")

    p = sub.add_parser("sym", parents=[common], help="symmetry subgroup of a state")
    p.add_argument("group"); p.add_argument("rep"); p.add_argument("state")

    p = sub.add_parser("verify", parents=[common], help="re-check a saved verdict's witness")
    p.add_argument("group"); p.add_argument("rep")
    p.add_argument("state_a"); p.add_argument("state_b")
    p.add_argument("verdict")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            tolerances=_parse_tolerances(args.tol),
            seed=args.seed,
            fmt=args.fmt,
            out=args.out,
        )
        return _dispatch(args, config)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, UnsupportedGroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except AsymkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def _dispatch(args, config: RunConfig) -> int:
    handler = {
        "charfn": _cmd_charfn,
        "decompose": _cmd_decompose,
        "equiv": _cmd_equiv,
        "convert": _cmd_convert,
        "asymptotic": _cmd_asymptotic,
        "sym": _cmd_sym,
        "verify": _cmd_verify,
    }[args.command]
    return handler(args, config)


def _load_context(args, need_table: bool = False):
    group, table = load_group(args.group)
    if getattr(args, "irreps", None):
        if not isinstance(group, FiniteGroup):
            raise ValidationError("--irreps applies to finite groups only")
        from .serialize import parse_irrep_table
        table = parse_irrep_table(group, load_json(args.irreps).get("irreps", []))
    rep = load_rep(args.rep, group)
    if need_table and table is None:
        raise ValidationError(
            "this command needs irreps for the finite group; supply them inline "
            "in the group file or via --irreps"
        )
    return group, table, rep


def _emit(report: dict, text_lines, config: RunConfig) -> None:
    if config.fmt == "json":
        payload = canonical_dumps(report) + "\n"
    else:
        payload = "\n".join(text_lines) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_charfn(args, config: RunConfig) -> int:
    group, table, rep = _load_context(args)
    state = load_state(args.state)
    chi = char_fn(state, rep)
    if isinstance(group, FiniteGroup):
        report = {
            "kind": "finite",
            "values": {group.label(i): complex_to_json(chi.values[i]) for i in group.elements()},
        }
        text = ["characteristic function:"] + [
            f"  {group.label(i):>8s}  {chi.values[i].real:+.12f} {chi.values[i].imag:+.12f}i"
            for i in group.elements()
        ]
    else:
        if isinstance(group, U1Group):
            samples = [float(t) for t in u1_grid(8)]
        else:
            samples = [q.tolist() for q in su2_grid(8)]
        report = {
            "kind": group.kind,
            "reduction": {lab: matrix_to_json(b) for lab, b in chi.reduction.blocks.items()},
            "samples": [
                {"element": s, "value": complex_to_json(chi.evaluate(np.asarray(s) if group.kind == "su2" else s))}
                for s in samples
            ],
        }
        text = ["characteristic function (reduction-backed):"] + [
            f"  irrep {lab}: trace {np.trace(b).real:.12f}"
            for lab, b in chi.reduction.blocks.items()
        ]
    _emit(report, text, config)
    return EXIT_YES


def _cmd_decompose(args, config: RunConfig) -> int:
    group, table, rep = _load_context(args)
    if isinstance(group, FiniteGroup) and table is None:
        raise ValidationError(
            "decomposition needs irreps for the finite group; supply them inline "
            "in the group file or via --irreps"
        )
    decomp = decompose(rep, table)
    blocks = [
        {"irrep": lab, "irrep_dim": blk.irrep.dim, "multiplicity": blk.multiplicity}
        for lab, blk in decomp.blocks.items()
    ]
    report = {"dim": rep.dim, "blocks": blocks}
    text = [f"dim {rep.dim}; isotypic blocks:"] + [
        f"  {b['irrep']:>10s}  d={b['irrep_dim']}  m={b['multiplicity']}" for b in blocks
    ]
    _emit(report, text, config)
    return EXIT_YES


def _verdict_exit(verdict) -> int:
    return {"yes": EXIT_YES, "no": EXIT_NO, "undecided": EXIT_UNDECIDED}[verdict.outcome]


def _verdict_text(verdict) -> list[str]:
    lines = [f"outcome: {verdict.outcome}"]
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    for name, value in verdict.residuals.items():
        lines.append(f"residual {name}: {value}")
    return lines


def _cmd_equiv(args, config: RunConfig) -> int:
    group, table, rep = _load_context(args, need_table=True)
    psi = load_state(args.state_a)
    phi = load_state(args.state_b)
    decomp = decompose(rep, table)
    tol = config.tol("equality", 1e-8)
    if args.mode == "unitary":
        verdict = unitary_g_equiv(psi, phi, rep, decomp, tol=tol)
    else:
        verdict = g_equiv(psi, phi, rep, decomp, tol=tol, zero_tol=config.tol("zero", 1e-10))
    _emit(verdict_to_json(verdict), _verdict_text(verdict), config)
    return _verdict_exit(verdict)


def _cmd_convert(args, config: RunConfig) -> int:
    group, table, rep = _load_context(args, need_table=True)
    psi = load_state(args.state_a)
    phi = load_state(args.state_b)
    verdict = convertible(
        psi, phi, rep, table,
        tol=config.tol("equality", 1e-8),
        zero_tol=config.tol("zero", 1e-10),
    )
    _emit(verdict_to_json(verdict), _verdict_text(verdict), config)
    return _verdict_exit(verdict)


def _cmd_asymptotic(args, config: RunConfig) -> int:
    group, table, rep = _load_context(args)
    if isinstance(group, FiniteGroup):
        raise UnsupportedGroupError(
            "asymptotic rate conditions are stated for compact Lie groups; "
            "finite groups are not supported"
        )
    psi = load_state(args.state_a)
    phi = load_state(args.state_b)
    basis = None
    if args.generators:
        gens_data = load_json(args.generators)
        mats = [json_to_matrix(m, "generators") for m in gens_data.get("generators", [])]
        basis = LieAlgebraBasis(mats)
    report_obj = check_reversible_asymptotic(
        psi, phi, rep, basis,
        sym_tol=config.tol("sym", 1e-8),
        rate_tol=config.tol("rate", 1e-6),
    )
    report = {
        "sym_equal": report_obj.sym_equal,
        "rate_from_covariance": report_obj.rate_from_covariance,
        "covariance_consistency_residual": report_obj.covariance_consistency_residual,
        "momentum_condition": report_obj.momentum_condition,
        "overall": report_obj.overall,
        "first_violated": report_obj.first_violated,
        "rate_note": report_obj.rate_note,
        "disclaimer": report_obj.disclaimer,
    }
    mom = report_obj.momentum_condition
    mom_state = "vacuous" if mom.get("vacuous") else ("PASS" if mom.get("holds") else "FAIL")
    text = [
        "reversible asymptotic conversion: necessary conditions",
        f"  (i)   stabilizers equal:          {'PASS' if report_obj.sym_equal else 'FAIL'}",
        f"  (ii)  covariance proportionality: "
        + ("PASS" if report_obj.rate_from_covariance is not None or report_obj.rate_note
           else "FAIL")
        + (f"  R = {report_obj.rate_from_covariance}" if report_obj.rate_from_covariance is not None else ""),
        f"  (iii) momentum conservation:      {mom_state}",
        f"  overall: {report_obj.overall} ({report_obj.disclaimer})",
    ]
    _emit(report, text, config)
    return EXIT_YES if report_obj.holds else EXIT_NO


def _cmd_sym(args, config: RunConfig) -> int:
    group, table, rep = _load_context(args)
    state = load_state(args.state)
    sym = sym_group(state, rep, tol=config.tol("sym", 1e-8))
    if isinstance(sym, FiniteSymmetry):
        report = {"kind": "finite", "elements": sym.labels, "order": len(sym.indices)}
        text = [f"symmetry subgroup: {{{', '.join(sym.labels)}}}"]
    elif isinstance(sym, U1Symmetry):
        report = {"kind": "u1", "subgroup": sym.kind, "order": sym.order}
        text = [f"symmetry subgroup: {sym.kind}" + (f" (Z_{sym.order})" if sym.order else "")]
    elif isinstance(sym, SU2Symmetry):
        report = {
            "kind": "su2",
            "subgroup": sym.kind,
            "axis": None if sym.axis is None else [float(x) for x in sym.axis],
            "sampled_stabilizers": sorted(sym.sampled_indices),
        }
        text = [f"symmetry subgroup: {sym.kind}"]
    else:
        raise ValidationError(f"unknown symmetry descriptor {type(sym).__name__}")
    _emit(report, text, config)
    return EXIT_YES


def _cmd_verify(args, config: RunConfig) -> int:
    group, table, rep = _load_context(args)
    psi = load_state(args.state_a)
    phi = load_state(args.state_b)
    verdict_data = load_json(args.verdict)
    witness_data = verdict_data.get("witness")
    if witness_data is None:
        report = {"verified": None, "note": "verdict carries no witness to verify"}
        _emit(report, [report["note"]], config)
        return EXIT_YES
    witness = witness_from_json(witness_data, group, table)
    tol = config.tol("equality", 1e-8)
    chi_a = char_fn(psi, rep)
    chi_b = char_fn(phi, rep)
    if isinstance(witness, np.ndarray):
        map_res = float(np.linalg.norm(witness @ psi.amplitudes - phi.amplitudes))
        elements = grid_for(group, 16)
        comm_res = max(
            float(np.linalg.norm(witness @ rep.evaluate(g) - rep.evaluate(g) @ witness))
            for g in elements
        )
        unitarity = float(np.linalg.norm(dagger(witness) @ witness - np.eye(rep.dim)))
        ok = map_res <= tol and comm_res <= tol and unitarity <= tol
        report = {
            "verified": bool(ok),
            "witness_type": "invariant_unitary",
            "map_residual": map_res,
            "commutation_residual": comm_res,
            "unitarity_residual": unitarity,
        }
    elif isinstance(witness, OneDimRep):
        elements = grid_for(group)
        va = chi_a.sample(elements)
        vb = chi_b.sample(elements)
        tv = np.array([witness.evaluate(g) for g in elements])
        resid = float(np.max(np.abs(vb - va * tv)))
        report = {
            "verified": bool(resid <= tol),
            "witness_type": "one_dim_rep",
            "phase_residual": resid,
        }
    elif isinstance(witness, PDFunction):
        ok, residuals = verify_pd_witness(witness, chi_a, chi_b,
                                          tol_eq=tol, tol_psd=config.tol("psd", 1e-9))
        report = {"verified": bool(ok), "witness_type": "pd_function", **residuals}
    else:
        raise FormatError("unrecognized witness payload")
    text = [f"verified: {report['verified']}"]
    _emit(report, text, config)
    return EXIT_YES if report["verified"] else EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
