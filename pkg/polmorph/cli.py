"""Command-line front end.

Every subcommand reads one JSON document (from ``--input`` or stdin) and
writes one JSON document to stdout. Exit codes: 0 for success or a valid
verdict, 1 for a well-formed input with an invalid verdict, 2 for malformed
input or any error (message on stderr).
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from polmorph import __version__
from polmorph._config import (
    DEFAULT_BOUND,
    DEFAULT_JOBS,
    DEFAULT_MAX_CONDITION,
    DEFAULT_MAX_ORDER,
    DEFAULT_TOL,
    ToolkitConfig,
)
from polmorph.decompose import decompose_morphism
from polmorph.documents import (
    TypeDocument,
    encode_decomposition,
    encode_group,
    encode_matrix,
    encode_realized_morphism,
    encode_report,
    encode_siegel_point,
    load_document,
)
from polmorph.exact_core import hnf, kernel_cosets, snf
from polmorph.exceptions import PolmorphError
from polmorph.morphism_types import (
    check_embedding_type,
    check_isogeny_type,
    check_morphism_type,
    elliptic_canonical,
    hecke_factor,
    hecke_factor_reversed,
    is_in_embedding_stabilizer,
    is_in_stabilizer,
    kernel_structure,
)
from polmorph.search import search_embedding_matrices, search_isogeny_matrices
from polmorph.siegel import (
    descend,
    realize_embedding,
    realize_morphism,
    sp_action,
    transport,
    validate_siegel,
)

logger = logging.getLogger(__name__)

Outcome = Tuple[Dict[str, Any], bool]
Handler = Callable[[TypeDocument, ToolkitConfig, argparse.Namespace], Outcome]


def _report_outcome(report: Any) -> Outcome:
    return encode_report(report), report.valid


def _cmd_check_isogeny(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    t = doc.isogeny_type()
    return _report_outcome(check_isogeny_type(t.source_type, t.target_type, t.matrix))


def _cmd_check_embedding(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    t = doc.embedding_type()
    return _report_outcome(check_embedding_type(t.sub_type, t.complement_type, t.ambient_type, t.matrix))


def _cmd_check_morphism(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    return _report_outcome(check_morphism_type(doc.morphism_type()))


def _cmd_snf(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    s, u, v = snf(doc.matrix("M"))
    return {"S": encode_matrix(s), "U": encode_matrix(u), "V": encode_matrix(v)}, True


def _cmd_hnf(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    h, u = hnf(doc.matrix("M"))
    return {"H": encode_matrix(h), "U": encode_matrix(u)}, True


def _cmd_kernel(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    m = doc.matrix("M")
    group = kernel_structure(m)
    payload: Dict[str, Any] = {"kernel": encode_group(group), "order": str(group.order)}
    if group.order <= config.max_order:
        payload["cosets"] = [[str(x) for x in c.entries] for c in kernel_cosets(m, config.max_order)]
    return payload, True


def _cmd_elliptic_canonical(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    d1, d2 = elliptic_canonical(doc.matrix("M"))
    return {"canonical": [str(d1), str(d2)]}, True


def _cmd_hecke_factor(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    m, p = doc.matrix("M"), doc.parameter("p")
    if args.reversed:
        m_h, m_v = hecke_factor_reversed(m, p)
        return {"M_h": encode_matrix(m_h), "M_v": encode_matrix(m_v)}, True
    m_u, m_g = hecke_factor(m, p)
    return {"M_u": encode_matrix(m_u), "M_g": encode_matrix(m_g)}, True


def _cmd_stabilizer(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    if doc.kind == "embedding":
        member, b = is_in_embedding_stabilizer(doc.matrix("A"), doc.matrix("A_comp"), doc.embedding_type())
    else:
        member, b = is_in_stabilizer(doc.matrix("A"), doc.isogeny_type())
    return {"member": member, "B": encode_matrix(b) if b is not None else None}, member


def _matrices_outcome(found: List[Any]) -> Outcome:
    return {"count": len(found), "matrices": [encode_matrix(m) for m in found]}, bool(found)


def _cmd_search_isogeny(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    found = search_isogeny_matrices(
        doc.polarization("D"), doc.polarization("E"), bound=config.bound, jobs=config.jobs
    )
    return _matrices_outcome(found)


def _cmd_search_embedding(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    found = search_embedding_matrices(
        doc.polarization("D"),
        doc.polarization("D_comp"),
        doc.polarization("E"),
        bound=config.bound,
        column_constraints=doc.column_constraints() or None,
        jobs=config.jobs,
    )
    return _matrices_outcome(found)


def _cmd_decompose(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    result = decompose_morphism(doc.polarization("E"), doc.polarization("K"), doc.matrix("Q"))
    return encode_decomposition(result), result.compatible


def _point_outcome(z: Any) -> Outcome:
    return {"siegel_points": {"Z": encode_siegel_point(z)}}, True


def _cmd_transport(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    z = transport(
        doc.siegel_point("Z"), doc.polarization("E"), doc.polarization("D"), doc.matrix("M"),
        config.tol, config.max_condition,
    )
    return _point_outcome(z)


def _cmd_descend(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    z = descend(
        doc.siegel_point("Z"), doc.polarization("D"), doc.polarization("E"), doc.matrix("M"),
        config.tol, config.max_condition,
    )
    return _point_outcome(z)


def _cmd_sp_action(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    z = sp_action(doc.siegel_point("Z"), doc.polarization("D"), doc.matrix("R"), config.tol, config.max_condition)
    return _point_outcome(z)


def _cmd_realize_embedding(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    z = realize_embedding(
        doc.siegel_point("Z_sub"), doc.siegel_point("Z_comp"), doc.embedding_type(),
        config.tol, config.max_condition,
    )
    return _point_outcome(z)


def _cmd_realize_morphism(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    result = realize_morphism(
        doc.siegel_point("Z_X"),
        doc.siegel_point("Z_X_comp"),
        doc.siegel_point("Z_Y_comp"),
        doc.morphism_type(),
        config.tol,
        config.max_condition,
    )
    return encode_realized_morphism(result), True


def _cmd_validate_siegel(doc: TypeDocument, config: ToolkitConfig, args: argparse.Namespace) -> Outcome:
    valid = validate_siegel(doc.siegel_point("Z"), config.tol)
    return {"valid": valid}, valid


COMMANDS: Dict[str, Tuple[Handler, str]] = {
    "check-isogeny": (_cmd_check_isogeny, "Check an isogeny type (D, E, M)"),
    "check-embedding": (_cmd_check_embedding, "Check an embedding type (D, D_comp, E, M)"),
    "check-morphism": (_cmd_check_morphism, "Check a morphism type (D, D_comp, E, H, H_comp, K; M, N, P)"),
    "snf": (_cmd_snf, "Smith normal form of M"),
    "hnf": (_cmd_hnf, "Row Hermite normal form of M"),
    "kernel": (_cmd_kernel, "Kernel Coker(M) of the isogeny represented by M"),
    "elliptic-canonical": (_cmd_elliptic_canonical, "Canonical diagonal (d1, d2) of a 2x2 matrix M"),
    "hecke-factor": (_cmd_hecke_factor, "Hecke factorisation of a 2x2 matrix M with parameter p"),
    "stabilizer": (_cmd_stabilizer, "Stabilizer membership of A (and A_comp for embeddings)"),
    "search-isogeny": (_cmd_search_isogeny, "Bounded search for isogeny types (D, E)"),
    "search-embedding": (_cmd_search_embedding, "Bounded search for embedding types (D, D_comp, E)"),
    "decompose": (_cmd_decompose, "Poincare decomposition of Q for ambient types E and K"),
    "transport": (_cmd_transport, "Source Siegel point of the isogeny (D, E, M) over Z"),
    "descend": (_cmd_descend, "Target Siegel point of the isogeny (D, E, M) from Z"),
    "sp-action": (_cmd_sp_action, "Action of R in Sp(D, Z) on Z"),
    "realize-embedding": (_cmd_realize_embedding, "Ambient point of an embedding type over Z_sub, Z_comp"),
    "realize-morphism": (_cmd_realize_morphism, "Points and Q of a morphism type over Z_X, Z_X_comp, Z_Y_comp"),
    "validate-siegel": (_cmd_validate_siegel, "Whether Z lies in the Siegel upper half-space"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="Read the document from PATH instead of stdin")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Tolerance for numeric checks")
    common.add_argument(
        "--max-condition",
        type=float,
        default=DEFAULT_MAX_CONDITION,
        help="Largest condition number accepted when normalising a basis",
    )
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="Entry radius for searches")
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="Cap on enumerated cosets")
    common.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Worker processes for searches")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs")

    parser = argparse.ArgumentParser(prog="polmorph", description="Types of morphisms of polarized abelian varieties")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "hecke-factor":
            p.add_argument("--reversed", action="store_true", help="Return the (M_h, M_v) factorisation")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(format="%(name)s:%(levelname)s:%(message)s", level=level, stream=sys.stderr)


def _read_input(path: Optional[str]) -> str:
    if path is None:
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code is None else int(e.code)
    _configure_logging(args.verbose)
    try:
        config = ToolkitConfig(
            tol=args.tol,
            max_condition=args.max_condition,
            max_order=args.max_order,
            bound=args.bound,
            jobs=args.jobs,
        )
        doc = load_document(_read_input(args.input))
        handler, _ = COMMANDS[args.command]
        payload, ok = handler(doc, config, args)
    except ValidationError as e:
        print(f"polmorph: invalid option: {e}", file=sys.stderr)
        return 2
    except PolmorphError as e:
        print(f"polmorph: {e.code or 'error'}: {e.message}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.debug("unexpected failure", exc_info=True)
        print(f"polmorph: internal error: {e}", file=sys.stderr)
        return 2
    print(json.dumps(payload, indent=2))
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
