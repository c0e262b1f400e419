"""
Command-line front end.

    fatdual classify   --algebra d4tilde
    fatdual euler-form --quiver quiver.yaml --p 1,1
    fatdual delta      --algebra kronecker
    fatdual roots      --algebra a3 --bound 6
    fatdual decompose  --algebra kronecker --p 2,2
    fatdual degen-check --element w.yaml --target w2.yaml --bound 2
    fatdual census     --algebra t2 --p 1,1 --q 2
    fatdual fat-subset --algebra t2 --p 4,6 --trace

Results go to stdout as a table (`--format table`) or as a YAML run document
(`--format doc`); logs go to stderr. Exit codes: 0 success, 2 typed domain
abort, 1 usage error or failed internal cross-check.
"""

import argparse
import logging
import random
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, TextIO

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .bimod import TriangularAlgebra
from .catalog import ALIASES, resolve_quiver
from .config import Settings
from .degen import census, default_probes, degeneration_graph, hom_order_leq, search_witness
from .enums import GraphKind, OutputFormat
from .errors import FatDualError, InternalConsistencyError
from .exactalg import GroundField
from .fatsig import fat_signature
from .forms import defect, delta, quiver_form, tits_quadratic
from .generic import certify, decomposition_of, end_algebra, generic_element, pencil_model, tube_parameters
from .models import (
    CensusDocument,
    DecompositionDocument,
    ElementDocument,
    QuiverDocument,
    RunEnvelope,
    SignatureDocument,
)
from .parser import DocumentParser
from .quiver import DimVector, Quiver, classify, connected_components, path_algebra
from .roots import classify_root, coxeter, positive_roots

logger = logging.getLogger(__name__)

TABLE_WIDTH = 120


class UsageError(Exception):
    """Raised for malformed command lines; mapped to exit code 1."""

    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> Any:
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"multiplicities must be non-negative, got {text!r}")
    return values


def _parse_args(argv: Sequence[str] | None, settings: Settings) -> argparse.Namespace:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.seed, help="Seed for primes and sampling.")
    common.add_argument("--trials", type=int, default=settings.trials, help="Random elements per generic element.")
    common.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TABLE.value,
    )
    common.add_argument("--log-level", default=settings.log_level, help="Logging level on stderr.")
    source = common.add_mutually_exclusive_group()
    source.add_argument("--algebra", help=f"Built-in algebra ({', '.join(ALIASES)}, a<n>, d<n>, e<n>, <x><n>tilde).")
    source.add_argument("--quiver", type=Path, help="Quiver document (.json, .yaml, .yml).")

    parser = _ArgumentParser(prog="fatdual", description="Structural invariants of GL(P, A) for Dynkinian and Euclidean algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="Dynkin / Euclidean / wild class of each component.")
    euler = sub.add_parser("euler-form", parents=[common], help="Euler form matrix of the quiver.")
    euler.add_argument("--p", type=_int_list, help="Evaluate the quadratic form at this dimension vector.")
    sub.add_parser("delta", parents=[common], help="Null root of a Euclidean quiver.")
    roots = sub.add_parser("roots", parents=[common], help="Positive roots within a coordinate box.")
    roots.add_argument("--bound", type=int, default=6)
    decompose = sub.add_parser("decompose", parents=[common], help="Generic decomposition of the elements of one shape.")
    decompose.add_argument("--p", type=_int_list, help="Projective multiplicities, one per vertex.")
    decompose.add_argument("--element", type=Path, help="Decompose this element document instead of a generic one.")
    degen = sub.add_parser("degen-check", parents=[common], help="Certify or refute a degeneration w <= w'.")
    degen.add_argument("--element", type=Path, required=True, help="Element document for w.")
    degen.add_argument("--target", type=Path, required=True, help="Element document for w'.")
    degen.add_argument("--bound", type=int, default=settings.witness_bound, help="Largest size of the witness v.")
    orbit = sub.add_parser("census", parents=[common], help="Exhaustive orbit census over a small prime field.")
    orbit.add_argument("--p", type=_int_list, required=True)
    orbit.add_argument(
        "--q", type=int, required=True, help="Size of the prime field, 2 or 3; prime powers such as 4 are not supported."
    )
    orbit.add_argument("--bound", type=int, default=None, help="Also certify degenerations with witnesses up to this size.")
    fat = sub.add_parser("fat-subset", parents=[common], help="Fat-subset signature of GL(P, A).")
    fat.add_argument("--p", type=_int_list, required=True)
    fat.add_argument("--trace", action="store_true", help="Include the recursion trace.")
    return parser.parse_args(argv)


def _configure_logging(level: str) -> None:
    handler = RichHandler(console=Console(stderr=True), show_time=False, show_path=False)
    try:
        logging.basicConfig(level=level.upper(), format="%(message)s", handlers=[handler], force=True)
    except ValueError as e:
        raise UsageError(f"unknown log level {level!r}") from e


def _quiver(args: argparse.Namespace) -> Quiver:
    if args.quiver is not None:
        return DocumentParser.parse_file(args.quiver, QuiverDocument).to_quiver()
    if args.algebra is None:
        raise UsageError("one of --algebra or --quiver is required")
    return resolve_quiver(args.algebra)


def _split(args: argparse.Namespace, quiver: Quiver, field: GroundField) -> tuple[TriangularAlgebra, int, list[int]]:
    if args.p is None:
        raise UsageError("--p is required")
    if len(args.p) != quiver.vertex_count:
        raise UsageError(f"--p needs {quiver.vertex_count} multiplicities, got {len(args.p)}")
    T = TriangularAlgebra.from_basic(path_algebra(quiver, field))
    return T, args.p[T.sink], [args.p[j] for j in T.a2_vertices]


def _null_root(quiver: Quiver) -> DimVector | None:
    components = connected_components(quiver)
    if len(components) == 1 and classify(quiver).kind == GraphKind.EUCLIDEAN:
        return delta(quiver)
    return None


def _fmt(values: Sequence[Any]) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


# ---- subcommands: each returns (payload, table) ----


def _classify(args: argparse.Namespace) -> tuple[dict[str, Any], Table]:
    quiver = _quiver(args)
    table = Table("component", "vertices", "arrows", "class", "relabeling")
    components = []
    for index, component in enumerate(connected_components(quiver)):
        graph_class = classify(component)
        relabeling = sorted((graph_class.relabeling or {}).items())
        components.append(
            {
                "vertices": component.vertex_count,
                "arrows": [list(a) for a in component.arrows],
                "kind": graph_class.kind.value,
                "tag": graph_class.tag,
                "relabeling": [list(pair) for pair in relabeling],
            }
        )
        table.add_row(
            str(index),
            str(component.vertex_count),
            " ".join(f"{s}->{t}" for s, t in component.arrows),
            graph_class.tag,
            " ".join(f"{a}:{b}" for a, b in relabeling),
        )
    return {"components": components}, table


def _euler_form(args: argparse.Namespace) -> tuple[dict[str, Any], Table]:
    quiver = _quiver(args)
    form = quiver_form(quiver)
    payload: dict[str, Any] = {"entries": form.entries}
    table = Table("", *[str(j) for j in range(form.size)])
    for i, row in enumerate(form.entries):
        table.add_row(str(i), *[str(x) for x in row])
    if args.p is not None:
        d = DimVector.of(quiver, args.p)
        payload["dim_vector"] = d.coordinates
        payload["quadratic"] = tits_quadratic(form, d)
        table.caption = f"Q{d} = {payload['quadratic']}"
        if _null_root(quiver) is not None:
            payload["defect"] = defect(quiver, d)
            table.caption += f", defect {payload['defect']}"
    return payload, table


def _delta(args: argparse.Namespace) -> tuple[dict[str, Any], Table]:
    quiver = _quiver(args)
    null_root = delta(quiver)
    phi = coxeter(quiver)
    table = Table("vertex", "delta")
    for v, c in enumerate(null_root.coordinates):
        table.add_row(str(v), str(c))
    return {"delta": null_root.coordinates, "coxeter": phi.entries}, table


def _roots(args: argparse.Namespace) -> tuple[dict[str, Any], Table]:
    quiver = _quiver(args)
    euclidean = _null_root(quiver) is not None
    found = positive_roots(quiver, args.bound)
    table = Table("root", "kind", "region")
    rows = []
    for root in found:
        region = classify_root(quiver, root).value if euclidean else None
        rows.append({"d": root.d.coordinates, "kind": root.kind.value, "region": region})
        table.add_row(str(root.d), root.kind.value, region or "")
    table.caption = f"{len(found)} roots with coordinates <= {args.bound}"
    return {"bound": args.bound, "roots": rows}, table


def _summand_table(doc: DecompositionDocument) -> Table:
    table = Table("kind", "dim vector", "multiplicity", "degree", "End", "Ext")
    for s in doc.rigid_summands + doc.delta_summands:
        table.add_row(s.kind.value, _fmt(s.dim_vector), str(s.multiplicity), str(s.degree), str(s.end_dim), str(s.self_ext))
    caption = f"dim End = {doc.end_dim}, delta-bricks m = {doc.delta_brick_count}"
    if doc.tube_parameters is not None and doc.tube_parameters.supported:
        points = ["inf" if p.at_infinity else (p.value or "/".join(p.minimal_polynomial)) for p in doc.tube_parameters.points]
        caption += f", tube points {', '.join(points)}"
    table.caption = caption
    return table


def _decompose(args: argparse.Namespace, settings: Settings) -> tuple[dict[str, Any], Table]:
    rng = random.Random(args.seed)
    if args.element is not None:
        w = DocumentParser.parse_file(args.element, ElementDocument).to_element()
        dec = decomposition_of(end_algebra(w, rng, settings.prime_floor))
        assert dec.end_data is not None
        w = dec.end_data.element
        dec = dec.model_copy(update={"certificate": certify(dec, w)})
    else:
        quiver = _quiver(args)
        field = GroundField.large_prime(rng, settings.prime_floor)
        T, p1, p2 = _split(args, quiver, field)
        w, dec = generic_element(T, p1, p2, args.trials, rng, settings.prime_floor, _null_root(quiver))
    if dec.delta_brick_count and pencil_model(w.algebra) is not None:
        dec = dec.model_copy(update={"tube_parameters": tube_parameters(w, dec)})
    doc = DecompositionDocument.from_decomposition(w.p1, w.p2, dec)
    return doc.model_dump(mode="json"), _summand_table(doc)


def _degen_check(args: argparse.Namespace, settings: Settings) -> tuple[dict[str, Any], Table]:
    rng = random.Random(args.seed)
    w = DocumentParser.parse_file(args.element, ElementDocument).to_element()
    w2 = DocumentParser.parse_file(args.target, ElementDocument).to_element()
    probes = default_probes(w, w2, rng, settings.probe_count)
    order = hom_order_leq(w, w2, probes)
    witness = search_witness(w, w2, args.bound, rng, probes) if order.consistent else None
    payload = {
        "hom_order_consistent": order.consistent,
        "refuting_variance": order.variance,
        "witness_found": witness is not None,
        "witness_shape": None if witness is None else [witness.v.p1, list(witness.v.p2)],
        "bound": args.bound,
    }
    if witness is not None:
        verdict = "degeneration certified"
    elif not order.consistent:
        verdict = "refuted by the Hom order"
    else:
        verdict = "undecided"
    payload["verdict"] = verdict
    table = Table("check", "result")
    table.add_row("Hom order", "consistent" if order.consistent else f"violated ({order.variance})")
    table.add_row("witness", "none" if witness is None else f"v of shape {witness.v.p1}, {_fmt(witness.v.p2)}")
    table.add_row("verdict", verdict)
    return payload, table


def _census(args: argparse.Namespace, settings: Settings) -> tuple[dict[str, Any], Table]:
    rng = random.Random(args.seed)
    quiver = _quiver(args)
    if args.q < 2:
        raise UsageError("--q must be at least 2")
    T, p1, p2 = _split(args, quiver, GroundField.rationals())
    result = census(T, p1, p2, args.q, rng, settings.census_max_field, settings.census_max_dim)
    edges: list[tuple[int, int]] = []
    if args.bound is not None:
        edges = sorted(degeneration_graph(result, args.bound, rng).edges())
    doc = CensusDocument.from_census(result, edges)
    table = Table("orbit", "code", "size", "rank", "End", "|Aut|")
    for i, orbit in enumerate(doc.orbits):
        table.add_row(str(i), str(orbit.code), str(orbit.size), str(orbit.rank), str(orbit.end_dim), str(orbit.aut_order))
    table.caption = f"{len(doc.orbits)} orbits of {args.q}^{doc.space_dim} elements, |G| = {doc.group_order}"
    if edges:
        table.caption += "; degenerations " + " ".join(f"{i}->{j}" for i, j in edges)
    return doc.model_dump(mode="json"), table


def _fat_subset(args: argparse.Namespace, settings: Settings) -> tuple[dict[str, Any], Table]:
    quiver = _quiver(args)
    if len(args.p) != quiver.vertex_count:
        raise UsageError(f"--p needs {quiver.vertex_count} multiplicities, got {len(args.p)}")
    algebra = path_algebra(quiver, GroundField.rationals())
    signature = fat_signature(algebra, args.p, args.seed, args.trials, settings.prime_floor)
    doc = SignatureDocument.from_signature(signature, args.p, trace=args.trace)
    table = Table("gl degrees", "torus rank m", "configuration space")
    config = doc.config_space.description if doc.config_space is not None else "-"
    table.add_row(_fmt(doc.gl_degrees), str(doc.torus_rank), config)
    if args.trace:
        table.caption = "\n".join(
            f"step {s.index}: P={_fmt(s.multiplicities)} sink {s.sink}{' (opposite)' if s.opposite else ''} "
            f"W={s.w_dim} G={s.group_dim} End={s.end_dim} delta={s.delta_split} -> {_fmt(s.next_multiplicities)}"
            for s in doc.trace
        )
    return doc.model_dump(mode="json"), table


def _dispatch(args: argparse.Namespace, settings: Settings) -> tuple[dict[str, Any], Table]:
    simple = {"classify": _classify, "euler-form": _euler_form, "delta": _delta, "roots": _roots}
    seeded = {"decompose": _decompose, "degen-check": _degen_check, "census": _census, "fat-subset": _fat_subset}
    if args.command in simple:
        return simple[args.command](args)
    return seeded[args.command](args, settings)


def _emit(args: argparse.Namespace, payload: dict[str, Any], table: Table, out: TextIO) -> None:
    envelope = RunEnvelope(command=args.command, seed=args.seed, payload=payload)
    if args.output_format == OutputFormat.DOC.value:
        out.write(DocumentParser.dump_yaml(envelope))
        return
    table.title = f"fatdual {envelope.version} {args.command} (seed {args.seed})"
    console = Console(file=out, width=TABLE_WIDTH, color_system=None, highlight=False, soft_wrap=False)
    console.print(table)


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """
    Run one CLI invocation.

    Returns:
        0 on success, 2 on a typed domain abort, 1 on usage errors and failed cross-checks
    """
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        settings = Settings.from_env()
    except ValueError as e:
        err.write(f"fatdual: {e}\n")
        return 1
    try:
        args = _parse_args(argv, settings)
        _configure_logging(args.log_level)
        payload, table = _dispatch(args, settings)
    except UsageError as e:
        err.write(f"fatdual: usage error: {e}\n")
        return 1
    except FatDualError as e:
        logger.debug("domain abort", exc_info=True)
        err.write(f"fatdual: {type(e).__name__}: {e}\n")
        return 2
    except InternalConsistencyError as e:
        err.write(f"fatdual: internal consistency check failed: {e}\n")
        return 1
    _emit(args, payload, table, out)
    return 0


def main() -> int:
    return run(sys.argv[1:])
