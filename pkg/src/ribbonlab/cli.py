"""
Command line surface: ``ribbonlab <subcommand> ...``.

Output is deterministic text on stdout. Exit codes: 0 success, 1 input or
usage error, 2 search Unknown, 3 search Refuted.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .alexander import alexander_polynomial
from .moves import (
    CancelDelete,
    CancelInsert,
    MoveError,
    ReverseHandle,
    ScriptFormatError,
    Slide,
    apply_move,
    apply_script,
    apply_stabilize,
    parse_script,
)
from .quandle import (
    FiniteQuandle,
    builtin_quandle,
    check_quandle_axioms,
    count_colorings,
    group_presentation,
    list_colorings,
    parse_quandle,
    quandle_presentation,
)
from .ribbon import (
    Handle,
    RibbonData,
    SignedLetter,
    RibbonFormatError,
    canonical_form,
    genus,
    parse_ribbon,
    serialize,
    validate,
)
from .search import Equivalent, Refuted, search_equiv, serialize_outcome

__all__ = ["run", "main", "generate"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# example generators


def _random_data(bases: int, handles: int, max_len: int, seed: int) -> RibbonData:
    if bases < 1:
        raise ValueError("random: need at least one base")
    if handles < bases - 1:
        raise ValueError("random: need at least bases-1 handles for connectivity")
    rng = random.Random(seed)
    ends = []
    for i in range(2, bases + 1):
        ends.append((rng.randint(1, i - 1), i))
    for _ in range(handles - (bases - 1)):
        ends.append((rng.randint(1, bases), rng.randint(1, bases)))
    built = []
    for start, end in ends:
        length = rng.randint(0, max_len)
        word = tuple(
            SignedLetter(rng.randint(1, bases), rng.choice((1, -1))) for _ in range(length)
        )
        built.append(Handle(start, end, word))
    return RibbonData(2, bases, tuple(built))


def _stable_move_pool(data: RibbonData, rng: random.Random):
    moves = []
    n = len(data.handles)
    for slider in range(1, n + 1):
        h = data.handles[slider - 1]
        for which, attached in (("start", h.start), ("end", h.end)):
            for along in range(1, n + 1):
                if along == slider:
                    continue
                other = data.handles[along - 1]
                if other.start == attached:
                    moves.append(Slide(slider, which, along, "fwd"))
                if other.end == attached:
                    moves.append(Slide(slider, which, along, "rev"))
    for i in range(1, n + 1):
        moves.append(ReverseHandle(i))
    for i, h in enumerate(data.handles, start=1):
        moves.append(
            CancelInsert(i, rng.randint(0, len(h.word)), rng.randint(1, data.base_count), rng.choice((1, -1)))
        )
        for pos in range(len(h.word) - 1):
            if h.word[pos].base == h.word[pos + 1].base and h.word[pos].sign == -h.word[pos + 1].sign:
                moves.append(CancelDelete(i, pos))
    return moves


def _scramble(data: RibbonData, rng: random.Random, steps: int) -> RibbonData:
    for _ in range(steps):
        pool = _stable_move_pool(data, rng)
        if not pool:
            break
        data = apply_move(data, rng.choice(pool))
    return data


def generate(spec: str) -> RibbonData:
    """Build named example data.

    Specs: ``unknot``, ``spun-trefoil``, ``torus:<g>``,
    ``stabilized:<k>:<seed>`` (k stabilizations then a seeded scramble of
    slides, reversals and free cancellations), and
    ``random:<b>:<h>:<len>:<seed>`` (connected by construction: a spanning
    tree of handles first, then extras, then random crossing words).
    """
    parts = spec.split(":")
    kind = parts[0]

    def intargs(n):
        if len(parts) != n + 1:
            raise ValueError(f"generator '{kind}' takes {n} arguments")
        try:
            return [int(p, 10) for p in parts[1:]]
        except ValueError:
            raise ValueError(f"non-integer argument in generator spec '{spec}'") from None

    if kind == "unknot":
        intargs(0)
        return RibbonData(2, 1, ())
    if kind == "spun-trefoil":
        intargs(0)
        word = (SignedLetter(2, -1), SignedLetter(1, -1))
        return RibbonData(2, 2, (Handle(1, 2, word),))
    if kind == "torus":
        (g,) = intargs(1)
        if g < 0:
            raise ValueError("torus: genus must be >= 0")
        return RibbonData(2, 1, tuple(Handle(1, 1, ()) for _ in range(g)))
    if kind == "stabilized":
        k, seed = intargs(2)
        if k < 0:
            raise ValueError("stabilized: count must be >= 0")
        data = RibbonData(2, 1, ())
        for _ in range(k):
            rng_target = random.Random((seed, data.base_count)).randint(1, data.base_count)
            data = apply_stabilize(data, rng_target)
        return _scramble(data, random.Random(seed), 3 * k)
    if kind == "random":
        b, h, max_len, seed = intargs(4)
        return _random_data(b, h, max_len, seed)
    raise ValueError(f"unknown generator spec '{spec}'")


# ---------------------------------------------------------------------------
# helpers


def _load_data(path: str) -> RibbonData:
    return parse_ribbon(Path(path).read_text(encoding="utf-8"))


def _load_quandle(spec: str) -> FiniteQuandle:
    built = builtin_quandle(spec)
    if built is not None:
        return built
    q = parse_quandle(Path(spec).read_text(encoding="utf-8"), name=Path(spec).name)
    problems = check_quandle_axioms(q)
    if problems:
        raise ValueError(f"quandle file {spec} violates axioms: {problems[0].message}")
    return q


def _op_word(operators) -> str:
    return " ".join(f"g{g}" if e > 0 else f"~g{g}" for g, e in operators)


def _free_word(letters) -> str:
    return " ".join(f"g{x}" if x > 0 else f"g{-x}^-1" for x in letters)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ribbonlab", description="ribbon presentation workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check structural invariants")
    p.add_argument("file")

    p = sub.add_parser("canon", help="print the canonical form")
    p.add_argument("file")

    p = sub.add_parser("genus", help="print the presented genus")
    p.add_argument("file")

    p = sub.add_parser("quandle", help="print the presented quandle (or group)")
    p.add_argument("file")
    p.add_argument("--group", action="store_true")

    p = sub.add_parser("color", help="count colorings over a finite quandle")
    p.add_argument("file")
    p.add_argument("--quandle", required=True, metavar="FILE|dihedral:m|trivial:m")
    p.add_argument("--list", action="store_true", dest="list_all")

    p = sub.add_parser("alex", help="print the Alexander polynomial")
    p.add_argument("file")

    p = sub.add_parser("apply", help="apply a move script")
    p.add_argument("file")
    p.add_argument("--script", required=True)

    p = sub.add_parser("search", help="search for an equivalence certificate")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--weak", type=int, required=True)
    p.add_argument("--states", type=int, default=100_000)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("gen", help="emit generated example data")
    p.add_argument("spec")

    return parser


def run(argv, out=None) -> int:
    """Dispatch one invocation; returns the exit code."""
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(parser.format_usage(), end="", file=sys.stderr)
        return 1

    try:
        if args.command == "validate":
            data = _load_data(args.file)
            problems = validate(data)
            if problems:
                for d in problems:
                    print(f"{d.severity}: {d.message} ({d.location})", file=out)
                return 1
            print("ok", file=out)
            return 0

        if args.command == "canon":
            print(serialize(canonical_form(_load_data(args.file))), end="", file=out)
            return 0

        if args.command == "genus":
            print(genus(_load_data(args.file)), file=out)
            return 0

        if args.command == "quandle":
            data = _load_data(args.file)
            if args.group:
                pres = group_presentation(data)
                print(f"generators {pres.generators}", file=out)
                for i, rel in enumerate(pres.relations, start=1):
                    if rel.conjugator:
                        print(
                            f"rel {i}: g{rel.end} = W^-1 g{rel.start} W, W = {_free_word(rel.conjugator)}",
                            file=out,
                        )
                    else:
                        print(f"rel {i}: g{rel.end} = g{rel.start}", file=out)
            else:
                pres = quandle_presentation(data)
                print(f"generators {pres.generators}", file=out)
                for i, rel in enumerate(pres.relations, start=1):
                    if rel.operators:
                        print(f"rel {i}: g{rel.end} = g{rel.start} ^ {_op_word(rel.operators)}", file=out)
                    else:
                        print(f"rel {i}: g{rel.end} = g{rel.start}", file=out)
            return 0

        if args.command == "color":
            data = _load_data(args.file)
            q = _load_quandle(args.quandle)
            if args.list_all:
                found = list_colorings(data, q)
                print(len(found), file=out)
                for assignment in found:
                    print(" ".join(str(v) for v in assignment), file=out)
            else:
                print(count_colorings(data, q), file=out)
            return 0

        if args.command == "alex":
            print(alexander_polynomial(_load_data(args.file)), file=out)
            return 0

        if args.command == "apply":
            data = _load_data(args.file)
            script = parse_script(Path(args.script).read_text(encoding="utf-8"))
            print(serialize(apply_script(data, script)), end="", file=out)
            return 0

        if args.command == "search":
            a = _load_data(args.file_a)
            b = _load_data(args.file_b)
            outcome = search_equiv(
                a, b, args.depth, args.weak, args.states, threads=args.threads
            )
            print(serialize_outcome(outcome), end="", file=out)
            if isinstance(outcome, Equivalent):
                return 0
            if isinstance(outcome, Refuted):
                return 3
            return 2

        if args.command == "gen":
            print(serialize(generate(args.spec)), end="", file=out)
            return 0

    except (RibbonFormatError, ScriptFormatError, MoveError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    raise AssertionError(f"unhandled command {args.command}")


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
