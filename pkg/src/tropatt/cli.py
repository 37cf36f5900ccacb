"""``tropatt`` command line.

Exit codes: 0 success, 1 usage error, 2 input parse/schema error,
3 domain error (all-bottom row, dimension mismatch, guard exceeded, ...).
Every failure prints one diagnostic line on stderr.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence, TextIO

import numpy as np

from tropatt import io as tio
from tropatt.attention import attention_forward, hard_attention, log_space_attention, score_matrix
from tropatt.convergence import (
    DEFAULT_EPSILON_TIE,
    row_margin,
    sweep,
    theorem_gap_report,
)
from tropatt.errors import DomainError, SchemaError, TropattError
from tropatt.linalg import ValueVector, reconstruct_path, trop_matvec, trop_power
from tropatt.pathfinding import (
    TokenGraph,
    add_self_loops,
    export_dot,
    fig2,
    fig2_candidates,
    format_number,
)

EPSILON_ENV = "TROPATT_EPSILON_TIE"

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        # only reached for --help
        if message:
            self._print_message(message, sys.stderr)
        raise SystemExit(status)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _index(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _nonneg_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError(f"must be finite and >= 0, got {text}")
    return v


def _beta_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad beta list: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropatt", description="Max-plus view of softmax attention.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("score", help="embeddings -> score matrix JSON")
    s.add_argument("--embeddings", required=True, metavar="PATH")

    s = sub.add_parser("attend", help="softmax attention output at beta")
    s.add_argument("--matrix", required=True, metavar="PATH")
    s.add_argument("--values", required=True, metavar="PATH")
    s.add_argument("--beta", type=_nonneg_float)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--hard", action="store_true", help="beta -> inf gather (mean over ties)")
    mode.add_argument("--log-space", action="store_true", help="(1/beta) log-sum-exp of A_ij + v_j")

    s = sub.add_parser("tropical", help="max-plus product A ⊗ V")
    s.add_argument("--matrix", required=True, metavar="PATH")
    s.add_argument("--values", required=True, metavar="PATH")

    s = sub.add_parser("power", help="L-fold max-plus power of A")
    s.add_argument("--matrix", required=True, metavar="PATH")
    s.add_argument("-L", "--L", dest="L", type=_positive_int, required=True)

    s = sub.add_parser("path", help="best length-L path into a target node")
    s.add_argument("--matrix", "--graph", dest="matrix", required=True, metavar="PATH")
    start = s.add_mutually_exclusive_group(required=True)
    start.add_argument("--values", metavar="PATH", help="start vector V0")
    start.add_argument("--source", type=_index, help="V0 = 0 at SOURCE, bottom elsewhere")
    s.add_argument("-L", "--L", dest="L", type=_positive_int, required=True)
    s.add_argument("--target", type=_index, required=True)
    s.add_argument("--allow-stay", action="store_true", help="add 0-weight self loops first")
    s.add_argument("--format", choices=("json", "dot"), default="json")

    s = sub.add_parser("sweep", help="CSV of distances to both limits over a beta schedule")
    s.add_argument("--matrix", required=True, metavar="PATH")
    s.add_argument("--values", required=True, metavar="PATH")
    s.add_argument("--betas", type=_beta_list, help="comma separated ascending betas")
    s.add_argument("--beta-min", type=float)
    s.add_argument("--beta-max", type=float)
    s.add_argument("--steps", type=_positive_int)
    s.add_argument("--log-spaced", action="store_true")

    s = sub.add_parser("margins", help="per-row top-two margins")
    s.add_argument("--matrix", required=True, metavar="PATH")
    s.add_argument("--epsilon-tie", type=_nonneg_float)

    s = sub.add_parser("check", help="score argmax vs. max-plus argmax per row")
    s.add_argument("--matrix", required=True, metavar="PATH")
    s.add_argument("--values", required=True, metavar="PATH")

    s = sub.add_parser("demo", help="built-in narratives")
    s.add_argument("name", choices=("fig2",))
    return p


def _read(path: str, stdin: TextIO) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None


def _epsilon(args) -> float:
    if getattr(args, "epsilon_tie", None) is not None:
        return args.epsilon_tie
    env = os.environ.get(EPSILON_ENV)
    if env is None or not env.strip():
        return DEFAULT_EPSILON_TIE
    try:
        return _nonneg_float(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{EPSILON_ENV}: {exc}") from None


def _schedule(args) -> list[float]:
    if args.betas is not None:
        if any(x is not None for x in (args.beta_min, args.beta_max, args.steps)):
            raise UsageError("give either --betas or --beta-min/--beta-max/--steps")
        return args.betas
    if args.beta_min is None or args.beta_max is None or args.steps is None:
        raise UsageError("sweep needs --betas or all of --beta-min, --beta-max, --steps")
    if not (0 < args.beta_min and (args.beta_min < args.beta_max or args.steps == 1)):
        raise UsageError("beta schedule must be positive and ascending")
    if args.steps == 1:
        return [args.beta_min]
    if args.log_spaced:
        return np.geomspace(args.beta_min, args.beta_max, args.steps).tolist()
    return np.linspace(args.beta_min, args.beta_max, args.steps).tolist()


def _demo_fig2() -> str:
    G = fig2()
    edges = ", ".join(
        f"{src}->{dst} ({format_number(G.weights.array[dst, src])})"
        for src in range(G.n)
        for dst in range(G.n)
        if math.isfinite(G.weights.array[dst, src])
    )
    routes, winner = fig2_candidates(G, source=0, target=3, L=2)
    lines = [
        f"Toy token graph (fig2): {G.n} tokens, edges {edges}",
        "Two max-plus layers (stays allowed), source 0, target 3:",
    ]
    for route, w in routes.items():
        name = "direct" if len(route) == 2 else "via " + ", ".join(map(str, route[1:-1]))
        lines.append(f"  {name}: {format_number(w)}  ({' -> '.join(map(str, route))})")
    path = [k for i, k in enumerate(winner.nodes) if i == 0 or k != winner.nodes[i - 1]]
    lines.append(f"winner: {' -> '.join(map(str, path))} with weight {format_number(winner.total_weight)}")
    A2 = trop_power(G.weights, 2)
    lines.append(f"(A^2)[3, 0] = {format_number(float(A2[3, 0]))}")
    return "\n".join(lines) + "\n"


def _path(args, G: TokenGraph, stdin: TextIO) -> str:
    if args.values is not None:
        V0 = tio.read_vector(_read(args.values, stdin))
    else:
        if args.source >= G.n:
            raise DomainError(f"source {args.source} out of range for {G.n} nodes")
        V0 = ValueVector.unit(G.n, args.source)
    if args.allow_stay:
        G = add_self_loops(G)
    p = reconstruct_path(G.weights, V0, args.L, args.target)
    if args.format == "dot":
        return export_dot(G, p)
    return tio.dumps(tio.path_to_obj(p))


def _run(args, stdin: TextIO) -> str:
    cmd = args.command
    if cmd == "demo":
        return _demo_fig2()
    if cmd == "score":
        return tio.write_matrix(score_matrix(tio.read_embeddings(_read(args.embeddings, stdin))))

    matrix_text = _read(args.matrix, stdin)
    if cmd == "path":
        return _path(args, tio.read_graph(matrix_text), stdin)

    A = tio.read_matrix(matrix_text)
    if cmd == "power":
        return tio.write_matrix(trop_power(A, args.L))
    if cmd == "margins":
        eps = _epsilon(args)
        out = []
        for i in range(A.rows):
            rep = row_margin(A, i)
            out.append(tio.margin_to_obj(rep, rep.margin <= eps))
        return tio.dumps(out)

    V = tio.read_vector(_read(args.values, stdin))
    if cmd == "tropical":
        return tio.write_vector(trop_matvec(A, V))
    if cmd == "attend":
        if args.hard:
            return tio.write_vector(hard_attention(A, V))
        if args.beta is None:
            raise UsageError("attend needs --beta unless --hard is given")
        if args.log_space:
            return tio.write_vector(log_space_attention(A, V, args.beta))
        return tio.write_vector(attention_forward(A, V, args.beta))
    if cmd == "sweep":
        return tio.sweep_to_csv(sweep(A, V, _schedule(args)))
    if cmd == "check":
        return tio.dumps([tio.gap_to_obj(g) for g in theorem_gap_report(A, V)])
    raise UsageError(f"unknown command {cmd!r}")


def run_cli(argv: Sequence[str] | None = None, stdin: TextIO | None = None,
            stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        text = _run(args, stdin)
    except UsageError as exc:
        print(f"tropatt: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except SchemaError as exc:
        print(f"tropatt: input error: {exc}", file=stderr)
        return EXIT_INPUT
    except TropattError as exc:
        print(f"tropatt: domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
