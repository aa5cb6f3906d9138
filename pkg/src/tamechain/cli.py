"""Command-line interface for the tame persistence pipeline.

Subcommands: ``betti`` (full pipeline to Betti diagrams), ``decompose``
(direct decomposition of a cofibrant input), ``cover`` (write the minimal
cover), ``morphism-betti`` (diagrams of a map between two tame complexes),
``zigzag`` (diagrams of a zigzag incarnation), and ``validate``.

Malformed input produces a diagnostic and a nonzero exit status, never a
stack trace.  Identical inputs and flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import os
import sys

from tamechain import decomp, morinv, pipeline, tamecat, zigzag
from tamechain.params import Param


class CliError(Exception):
    """A user-facing error with a clean message."""


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


def _field(args) -> int:
    if args.field is not None:
        value = args.field
    else:
        env = os.environ.get("TAMECHAIN_FIELD")
        if env is not None:
            try:
                value = int(env)
            except ValueError:
                raise CliError(f"TAMECHAIN_FIELD must be an integer, got {env!r}")
        else:
            value = 2
    try:
        from tamechain.exactlin import check_prime
        check_prime(value)
    except ValueError as exc:
        raise CliError(str(exc))
    return value


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_tame(path: str, p: int) -> tamecat.TameComplex:
    text = _read(path)
    kind = pipeline.detect_format(text)
    if kind == "tame-complex":
        x = pipeline.parse_tame(text)
        if x.p != p:
            raise CliError(f"{path} is over F_{x.p}, requested field {p}")
        return x
    if kind == "filtration":
        return pipeline.ingest_filtration(pipeline.parse_filtration(text), p)
    raise CliError(f"{path} holds a {kind} document; expected a tame complex "
                   "or a filtration")


def _cmd_betti(args):
    p = _field(args)
    x = _load_tame(args.input, p)
    diagrams = decomp.min_betti(x) if args.min else decomp.betti(x)
    _emit(args, pipeline.serialize_diagrams(diagrams, args.format))
    return 0


def _cmd_decompose(args):
    p = _field(args)
    x = _load_tame(args.input, p)
    diagrams = decomp.decompose_cofibrant(x)
    _emit(args, pipeline.serialize_diagrams(diagrams, args.format))
    return 0


def _cmd_cover(args):
    p = _field(args)
    x = _load_tame(args.input, p)
    cov = tamecat.minimal_cover(x)
    _emit(args, pipeline.serialize_tame(cov.cover))
    return 0


_METHODS = {
    "minfact": morinv.morphism_betti_minfact,
    "cover-cofiber": morinv.morphism_betti_cover_cofiber,
    "cofiber-covers": morinv.morphism_betti_cofiber_covers,
    "min": morinv.morphism_betti_min,
}


def _cmd_morphism_betti(args):
    p = _field(args)
    src = _load_tame(args.source, p)
    tgt = _load_tame(args.target, p)
    if src.grid != tgt.grid:
        src, tgt = tamecat.common_grid(src, tgt)
    g = pipeline.parse_tame_map(_read(args.map), src, tgt)
    result = _METHODS[args.method](g)
    _emit(args, pipeline.serialize_diagrams(result.diagrams, args.format))
    return 0


def _parse_grid(spec: str):
    try:
        pts = [Param.parse(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as exc:
        raise CliError(f"bad --grid value: {exc}")
    if not pts:
        raise CliError("--grid needs at least one point")
    return pts


def _cmd_zigzag(args):
    p = _field(args)
    text = _read(args.input)
    kind = pipeline.detect_format(text)
    if kind != "zigzag":
        raise CliError(f"{args.input} holds a {kind} document; expected a zigzag")
    z = pipeline.parse_zigzag(text)
    if z.p != p:
        raise CliError(f"{args.input} is over F_{z.p}, requested field {p}")
    diagrams = zigzag.zigzag_betti(z, _parse_grid(args.grid))
    _emit(args, pipeline.serialize_diagrams(diagrams, args.format))
    return 0


def _cmd_validate(args):
    p = _field(args)
    text = _read(args.input)
    kind = pipeline.detect_format(text)
    problems = []
    if kind == "tame-complex":
        x = pipeline.parse_tame(text)
        problems = x.violations()
    elif kind == "tame-map":
        raise CliError("tame-map documents validate alongside their complexes "
                       "via morphism-betti")
    elif kind == "zigzag":
        pipeline.parse_zigzag(text)
    elif kind == "betti-diagrams":
        pipeline.parse_diagrams(text)
    elif kind == "filtration":
        pipeline.ingest_filtration(pipeline.parse_filtration(text), p)
    if problems:
        for msg in problems:
            sys.stderr.write(f"invalid: {msg}\n")
        return 1
    _emit(args, f"ok: {kind}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=None,
                        help="prime field modulus (default: env TAMECHAIN_FIELD or 2)")
    common.add_argument("--output", default=None, help="write output to a file")
    common.add_argument("--format", choices=("csv", "structured"),
                        default="structured", help="diagram output format")
    parser = argparse.ArgumentParser(
        prog="tamechain",
        description="Betti diagrams and minimal covers of tame parametrised "
                    "chain complexes")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("betti", parents=[common],
                        help="full pipeline: input to Betti diagrams")
    sp.add_argument("input")
    sp.add_argument("--min", action="store_true",
                    help="drop diagonal points (minimal Betti diagrams)")
    sp.set_defaults(func=_cmd_betti)

    sp = sub.add_parser("decompose", parents=[common],
                        help="interval-sphere decomposition of a cofibrant input")
    sp.add_argument("input")
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("cover", parents=[common], help="write the minimal cover")
    sp.add_argument("input")
    sp.set_defaults(func=_cmd_cover)

    sp = sub.add_parser("morphism-betti", parents=[common],
                        help="Betti diagrams of a map between tame complexes")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("map")
    sp.add_argument("--method", choices=sorted(_METHODS), default="cover-cofiber")
    sp.set_defaults(func=_cmd_morphism_betti)

    sp = sub.add_parser("zigzag", parents=[common],
                        help="Betti diagrams of a zigzag incarnation")
    sp.add_argument("input")
    sp.add_argument("--grid", required=True,
                    help="comma-separated incarnation parameters, one per index")
    sp.set_defaults(func=_cmd_zigzag)

    sp = sub.add_parser("validate", parents=[common],
                        help="check all invariants of an input document")
    sp.add_argument("input")
    sp.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
