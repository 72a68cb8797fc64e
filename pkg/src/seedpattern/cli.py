"""Command-line front end.

One subcommand per job: ``mutate`` transforms a matrix, ``explore`` walks a
seed pattern (or matrix class), ``classify`` names finite types, ``count``
evaluates the triangulation models, ``fold`` quotients by a vertex symmetry,
``polygon``/``punctured`` expose the triangulation models themselves,
``embed`` searches for induced sub-patterns, and ``witness`` prints the
rank-2 growth sequence.

Conventions shared by every subcommand: matrices are read and written in the
plain text format of :func:`~seedpattern.exchange.parse_matrix`; mutation
sequences, vertex permutations, row subsets, and orbit listings are 1-based
on the command line and in output; ``--json`` switches the result to a
single compact JSON object on stdout.  Diagnostics go to stderr.  Exit
status is 0 on success, 2 when the input is rejected, 1 when an internal
invariant breaks.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .classify import count_type, identify_type
from .exchange import (
    ExchangeMatrix,
    InputError,
    NotSkewSymmetrizable,
    mutate,
    parse_matrix,
    render_matrix,
)
from .explore import (
    DEFAULT_MAX_FORMS,
    Quiver,
    explore_matrix_class,
    explore_seed_pattern,
    is_embeddable,
)
from .folding import VertexGroupAction, fold_matrix, global_foldability, is_admissible
from .geom import (
    count_triangulations,
    polygon_fan,
    polygon_flip,
    polygon_matrix,
    polygon_triangulations,
    render_arc,
    render_triangulation,
    star_triangulation,
    tagged_flip,
    tagged_matrix_bullet,
    tagged_triangulations,
)
from .laurent import tropical_orbit
from .seed import canonicalize, initial_seed, seed_mutate


# ---------------------------------------------------------------------------
# small shared helpers


def _read_matrix(path: str) -> ExchangeMatrix:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_matrix(text)


def _indices(text: str, n: int, what: str) -> list[int]:
    """Parse a 1-based space-separated index list into 0-based indices."""
    out = []
    for tok in text.split():
        if not tok.isdigit():
            raise InputError(f"bad {what} {tok!r}: expected a positive integer")
        k = int(tok)
        if not 1 <= k <= n:
            raise InputError(f"{what} {k} out of range 1..{n}")
        out.append(k - 1)
    return out


def _permutation(text: str, m: int) -> tuple[int, ...]:
    imgs = _indices(text, m, "vertex")
    if sorted(imgs) != list(range(m)):
        raise InputError(f"{text!r} is not a permutation of 1..{m}")
    return tuple(imgs)


def _ints1(values) -> list[int]:
    return [v + 1 for v in values]


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, separators=(",", ":")))


def _matrix_payload(M: ExchangeMatrix) -> dict:
    return {"n_mutable": M.n, "rows": [list(r) for r in M.rows]}


def _print_matrix(M: ExchangeMatrix) -> None:
    sys.stdout.write(render_matrix(M))


def _dot_graph(nodes, label, neighbors) -> str:
    """Undirected DOT graph: one edge per unordered flip/mutation pair."""
    names = {node: label(node) for node in nodes}
    edges = set()
    for node in nodes:
        for other in neighbors(node):
            if other in names and names[other] != names[node]:
                edges.add(tuple(sorted((names[node], names[other]))))
    lines = ["graph flips {"]
    lines += [f'  "{a}" -- "{b}";' for a, b in sorted(edges)]
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_mutate(args) -> None:
    M = _read_matrix(args.input)
    for k in _indices(args.sequence, M.n, "mutation index"):
        M = mutate(M, k)
    if args.json:
        _emit_json(_matrix_payload(M))
    else:
        _print_matrix(M)


def cmd_explore(args) -> None:
    M = _read_matrix(args.input)
    if args.matrix_class:
        report, _members = explore_matrix_class(M, cap=args.cap, max_forms=args.max_forms)
        if args.json:
            _emit_json(
                {
                    "status": report.status,
                    "forms": report.count,
                    "depth_profile": list(report.depth_profile),
                }
            )
        else:
            print(f"status: {report.status}")
            print(f"matrix forms: {report.count}")
            print("depth profile: " + " ".join(map(str, report.depth_profile)))
        return
    report, seeds, _variables = explore_seed_pattern(
        initial_seed(M), cap=args.cap, threads=args.threads, max_forms=args.max_forms
    )
    if args.dot:
        index = {s: i for i, s in enumerate(seeds)}

        def neighbors(s):
            return (canonicalize(seed_mutate(s, k)) for k in range(s.n))

        print(_dot_graph(seeds, lambda s: f"s{index[s]}", neighbors))
        return
    if args.json:
        _emit_json(
            {
                "status": report.status,
                "seeds": report.count,
                "variables": report.variable_count,
                "depth_profile": list(report.depth_profile),
            }
        )
    else:
        print(f"status: {report.status}")
        print(f"seeds: {report.count}")
        print(f"variables: {report.variable_count}")
        print("depth profile: " + " ".join(map(str, report.depth_profile)))


def cmd_classify(args) -> None:
    M = _read_matrix(args.input)
    t = identify_type(M, max_forms=args.max_forms)
    if t is None:
        if args.json:
            _emit_json({"finite": False, "type": None, "seeds": None, "variables": None})
        else:
            print("infinite type")
        return
    seeds, variables = count_type(t)
    if args.json:
        _emit_json(
            {"finite": True, "type": t.label, "seeds": seeds, "variables": variables}
        )
    else:
        print(f"finite type {t.label}: {seeds} seeds, {variables} cluster variables")


def cmd_count(args) -> None:
    enumerated, closed = count_triangulations(args.model, args.n)
    if args.json:
        _emit_json(
            {"model": args.model, "n": args.n, "count": enumerated, "closed_form": closed}
        )
    else:
        print(f"{args.model} n={args.n}: {enumerated} triangulations (closed form {closed})")


def cmd_fold(args) -> None:
    M = _read_matrix(args.input)
    G = VertexGroupAction(M.m, [_permutation(p, M.m) for p in args.perm])
    if args.check:
        verdict = is_admissible(M, G)
        if args.json:
            _emit_json(
                {
                    "admissible": bool(verdict),
                    "condition": verdict.condition,
                    "witness": _ints1(verdict.witness) if verdict.witness else None,
                }
            )
        elif verdict:
            print("admissible")
        else:
            at = " ".join(map(str, _ints1(verdict.witness)))
            print(f"not admissible: condition {verdict.condition} fails at {at}")
        return
    verdict = is_admissible(M, G)
    if not verdict:
        at = " ".join(map(str, _ints1(verdict.witness)))
        raise InputError(f"not admissible: condition {verdict.condition} fails at {at}")
    if args.global_search:
        report = global_foldability(M, G, cap=args.cap, max_forms=args.max_forms)
        word = _ints1(report.word) if report.word is not None else None
        if args.json:
            _emit_json({"kind": report.kind, "word": word, "forms": report.forms})
        elif word is None:
            print(f"{report.kind} ({report.forms} forms examined)")
        else:
            print(f"{report.kind} at orbit word {' '.join(map(str, word))}")
        return
    folded = fold_matrix(M, G)
    if args.json:
        payload = _matrix_payload(folded.matrix)
        payload["orbits"] = [_ints1(orbit) for orbit in folded.orbits]
        _emit_json(payload)
    else:
        _print_matrix(folded.matrix)
        for t, orbit in enumerate(folded.orbits, start=1):
            print(f"# orbit {t}: {' '.join(map(str, _ints1(orbit)))}")


def cmd_polygon(args) -> None:
    if args.dot:
        nodes = [tuple(sorted(T)) for T in polygon_triangulations(args.n)]

        def label(T):
            return ",".join(f"{a}-{b}" for a, b in T)

        def neighbors(T):
            return (tuple(sorted(polygon_flip(T, d))) for d in T)

        print(_dot_graph(nodes, label, neighbors))
        return
    if args.fan:
        T = polygon_fan(args.n)
        M = polygon_matrix(T)
        if args.json:
            payload = {"diagonals": [f"{a}-{b}" for a, b in T]}
            payload.update(_matrix_payload(M))
            _emit_json(payload)
        else:
            print("# diagonals: " + " ".join(f"{a}-{b}" for a, b in T))
            _print_matrix(M)
        return
    triangulations = polygon_triangulations(args.n)
    if args.json:
        _emit_json(
            {
                "count": len(triangulations),
                "triangulations": [[f"{a}-{b}" for a, b in T] for T in triangulations],
            }
        )
    else:
        for T in triangulations:
            print(", ".join(f"{a}-{b}" for a, b in T))


def cmd_punctured(args) -> None:
    if args.dot:
        nodes = [tuple(sorted(T, key=repr)) for T in tagged_triangulations(args.n)]

        def neighbors(T):
            return (tuple(sorted(tagged_flip(T, g), key=repr)) for g in T)

        print(_dot_graph(nodes, render_triangulation, neighbors))
        return
    if args.star:
        T = star_triangulation(args.n)
        M = tagged_matrix_bullet(T)
        if args.json:
            payload = {"arcs": [render_arc(g) for g in T]}
            payload.update(_matrix_payload(M))
            _emit_json(payload)
        else:
            print("# arcs: " + " ".join(render_arc(g) for g in T))
            _print_matrix(M)
        return
    triangulations = tagged_triangulations(args.n)
    if args.json:
        _emit_json(
            {
                "count": len(triangulations),
                "triangulations": [[render_arc(g) for g in T] for T in triangulations],
            }
        )
    else:
        for T in triangulations:
            print(render_triangulation(T))


def cmd_embed(args) -> None:
    Q = _read_matrix(args.input)
    R = _read_matrix(args.into)
    result = is_embeddable(
        Quiver.from_matrix(Q), Quiver.from_matrix(R), cap=args.cap, max_forms=args.max_forms
    )
    if args.json:
        _emit_json(
            {
                "embeddable": result.embeddable,
                "rows": _ints1(result.subset) if result.subset is not None else None,
                "word": _ints1(result.word) if result.word is not None else None,
            }
        )
    elif result.embeddable:
        rows = " ".join(map(str, _ints1(result.subset)))
        word = " ".join(map(str, _ints1(result.word))) or "(empty)"
        print(f"embeddable: rows {rows} after mutation word {word}")
    elif result.embeddable is False:
        print("not embeddable")
    else:
        print("inconclusive: search budget exhausted")


def cmd_witness(args) -> None:
    if args.steps < 1:
        raise InputError(f"steps must be positive, got {args.steps}")
    orbit = tropical_orbit(args.b, args.c, args.steps)
    if args.json:
        _emit_json(
            {"b": args.b, "c": args.c, "exponents": [str(t.exponent) for t in orbit]}
        )
    else:
        print(", ".join(str(t.exponent) for t in orbit))


# ---------------------------------------------------------------------------
# parser


def _add_search_budget(sp: argparse.ArgumentParser, threads: bool = False) -> None:
    sp.add_argument("--cap", type=int, metavar="DEPTH", help="stop after DEPTH mutation layers")
    sp.add_argument(
        "--max-forms",
        type=int,
        default=DEFAULT_MAX_FORMS,
        metavar="N",
        help="abort after N distinct forms (default %(default)s)",
    )
    if threads:
        sp.add_argument(
            "--threads",
            type=int,
            default=1,
            metavar="N",
            help="worker threads for the frontier (results are identical for any N)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seedpattern",
        description="Exact mutation, exploration, and classification of seed patterns.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, summary: str, handler) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=summary, description=summary)
        sp.set_defaults(handler=handler)
        sp.add_argument("--json", action="store_true", help="emit one JSON object")
        return sp

    sp = add("mutate", "apply a mutation sequence to an exchange matrix", cmd_mutate)
    sp.add_argument("-i", "--input", required=True, metavar="FILE", help="matrix file")
    sp.add_argument(
        "-s",
        "--sequence",
        required=True,
        metavar="SEQ",
        help="1-based mutation indices, space-separated, applied left to right",
    )

    sp = add("explore", "enumerate all seeds reachable from a matrix", cmd_explore)
    sp.add_argument("-i", "--input", required=True, metavar="FILE", help="matrix file")
    sp.add_argument(
        "--matrix-class",
        action="store_true",
        help="walk matrix mutation classes instead of seeds",
    )
    sp.add_argument("--dot", action="store_true", help="print the exchange graph as DOT")
    _add_search_budget(sp, threads=True)

    sp = add("classify", "decide finite type and name it", cmd_classify)
    sp.add_argument("-i", "--input", required=True, metavar="FILE", help="matrix file")
    sp.add_argument(
        "--max-forms",
        type=int,
        default=DEFAULT_MAX_FORMS,
        metavar="N",
        help="abort the name search after N forms (default %(default)s)",
    )

    sp = add("count", "count triangulations of a model, two ways", cmd_count)
    sp.add_argument(
        "--model",
        required=True,
        choices=["PolygonA", "TaggedD", "CentralC", "TagSymB"],
        help="triangulation model",
    )
    sp.add_argument("--n", required=True, type=int, metavar="N", help="model rank")

    sp = add("fold", "quotient a matrix by a symmetry of its vertices", cmd_fold)
    sp.add_argument("-i", "--input", required=True, metavar="FILE", help="matrix file")
    sp.add_argument(
        "--perm",
        required=True,
        action="append",
        metavar="IMAGES",
        help="generator as 1-based images of 1..m, space-separated (repeatable)",
    )
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument(
        "--check", action="store_true", help="report admissibility only (always exit 0)"
    )
    mode.add_argument(
        "--global",
        dest="global_search",
        action="store_true",
        help="search every orbit-mutation word for an inadmissible stop",
    )
    _add_search_budget(sp)

    sp = add("polygon", "triangulations of a convex polygon", cmd_polygon)
    sp.add_argument("--n", required=True, type=int, metavar="N", help="number of diagonals")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--fan", action="store_true", help="print the fan and its matrix")
    mode.add_argument("--list", action="store_true", help="list every triangulation")
    mode.add_argument("--dot", action="store_true", help="print the flip graph as DOT")

    sp = add("punctured", "tagged triangulations of a once-punctured polygon", cmd_punctured)
    sp.add_argument("--n", required=True, type=int, metavar="N", help="number of vertices")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--star", action="store_true", help="print the plain star and its matrix")
    mode.add_argument("--enumerate", action="store_true", help="list every triangulation")
    mode.add_argument("--dot", action="store_true", help="print the flip graph as DOT")

    sp = add("embed", "search a mutation class for an induced sub-pattern", cmd_embed)
    sp.add_argument("-i", "--input", required=True, metavar="FILE", help="pattern to find")
    sp.add_argument("--into", required=True, metavar="FILE", help="matrix whose class is searched")
    _add_search_budget(sp)

    sp = add("witness", "rank-2 infinite-growth exponent sequence", cmd_witness)
    sp.add_argument("-b", required=True, type=int, help="upper exchange entry")
    sp.add_argument("-c", required=True, type=int, help="lower exchange entry")
    sp.add_argument("--steps", required=True, type=int, metavar="N", help="orbit length")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except (InputError, NotSkewSymmetrizable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - invariant violations become exit 1
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
