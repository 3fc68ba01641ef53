"""Command-line interface.

Exit codes: 0 ok, 1 parse/IO error, 2 validation errors, 3 equivalence
counterexamples, 4 cyclic dependency rejected, 5 bad flags.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import IO, Optional, Sequence

from . import export
from .analysis import DEFAULT_SAMPLES, DEFAULT_SEED, check_equivalence, minimal_cut_sets
from .depgraph import extract_dependencies, extract_redundancy
from .kg import Iri
from .ontology import AmbiguousSystemError, NoSystemError, Vocabulary, find_system, validate
from .pipeline import close
from .synthesis import CyclicDependencyError, TopNotFoundError, synthesize
from .turtle import TurtleSyntaxError, parse_turtle, serialize_turtle

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVALID = 2
EXIT_COUNTEREXAMPLE = 3
EXIT_CYCLE = 4
EXIT_USAGE = 5

FORMATS = {
    "validate": ("text",),
    "infer": ("turtle",),
    "deps": ("dot", "json"),
    "redundancy": ("json",),
    "synth": ("json", "dot", "galileo"),
    "mcs": ("text",),
    "check": ("text",),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str
    format: Optional[str] = None
    top: Optional[str] = None
    namespace: Optional[str] = None
    default_prob: float = 0.5
    break_cycles: bool = False
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    output: Optional[str] = None

    def __post_init__(self):
        if self.command not in FORMATS:
            raise UsageError(f"unknown command {self.command!r}")
        allowed = FORMATS[self.command]
        if self.format is None:
            self.format = allowed[0]
        if self.format not in allowed:
            raise UsageError(f"format {self.format!r} is not valid for {self.command} (choose from {', '.join(allowed)})")
        if not 0.0 < self.default_prob < 1.0:
            raise UsageError("--default-prob must lie strictly between 0 and 1")
        if self.samples < 1:
            raise UsageError("--samples must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("input", help="Turtle file ('-' for standard input)")
    common.add_argument("-o", "--output", help="write to this file instead of standard output")
    common.add_argument("--ns", dest="namespace", help="ontology namespace IRI (default: $FTSYNTH_NS or built-in)")

    synth_opts = _Parser(add_help=False)
    synth_opts.add_argument("--top", help="IRI of the top (system) component")
    synth_opts.add_argument("--break-cycles", action="store_true", help="expand cyclic dependencies, dropping back edges")

    parser = _Parser(prog="ftsynth", description="Synthesize fault trees from component knowledge graphs.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="infer, then check the graph against the ontology")
    sub.add_parser("infer", parents=[common], help="emit the inference-closed graph as Turtle")
    p = sub.add_parser("deps", parents=[common], help="emit the functional dependency graph")
    p.add_argument("--format", choices=FORMATS["deps"], default="dot")
    sub.add_parser("redundancy", parents=[common], help="emit redundancy groups as JSON")
    p = sub.add_parser("synth", parents=[common, synth_opts], help="emit the synthesized fault tree")
    p.add_argument("--format", choices=FORMATS["synth"], default="json")
    p.add_argument("--default-prob", type=float, default=0.5, help="placeholder BE probability for galileo output")
    sub.add_parser("mcs", parents=[common, synth_opts], help="print minimal cut sets")
    p = sub.add_parser("check", parents=[common, synth_opts], help="compare the tree with failure propagation")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="random scenarios when exhaustive search is too large")
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**fields)


def _read_input(path: str, stdin: IO) -> bytes:
    if path == "-":
        data = stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read()
        return data.encode("utf-8") if isinstance(data, str) else data
    with open(path, "rb") as fh:
        return fh.read()


def run(config: RunConfig, stdout: IO = None, stderr: IO = None, stdin: IO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin

    def warn(msg: str) -> None:
        print(f"warning: {msg}", file=stderr)

    try:
        vocab = Vocabulary.resolve(config.namespace)
    except ValueError as exc:
        print(f"error: bad namespace: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        g = parse_turtle(_read_input(config.input, stdin))
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except TurtleSyntaxError as exc:
        print(f"error: {config.input}: {exc}", file=stderr)
        return EXIT_INPUT

    closed = close(g, vocab)

    def emit(text: str) -> int:
        if config.output:
            try:
                with open(config.output, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)
            except OSError as exc:
                print(f"error: {exc}", file=stderr)
                return EXIT_INPUT
        else:
            stdout.write(text)
        return EXIT_OK

    if config.command == "infer":
        return emit(serialize_turtle(closed.with_prefixes(g.prefixes)).decode("utf-8"))

    report = validate(closed, vocab)
    if config.command == "validate":
        code = emit(report.format() + "\n")
        return EXIT_INVALID if not report.ok else code
    for issue in report.warnings:
        warn(f"{issue.code}: {issue.message}")
    if not report.ok:
        print(report.format(), file=stderr)
        return EXIT_INVALID

    d = extract_dependencies(closed, vocab)
    red = extract_redundancy(closed, d, vocab)
    if config.command == "deps":
        for w in d.warnings:
            warn(w)
        if config.format == "json":
            return emit(export.dependency_graph_json(d))
        return emit(export.dependency_graph_dot(d, red))
    if config.command == "redundancy":
        return emit(export.redundancy_json(red))

    try:
        top = Iri(config.top) if config.top else find_system(closed, vocab)
    except ValueError as exc:
        print(f"error: bad --top: {exc}", file=stderr)
        return EXIT_USAGE
    except (NoSystemError, AmbiguousSystemError) as exc:
        print(f"error: {exc}; pass --top to choose one", file=stderr)
        return EXIT_INVALID
    try:
        tree = synthesize(d, red, top, break_cycles=config.break_cycles)
    except TopNotFoundError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except CyclicDependencyError as exc:
        print(f"error: {exc} (use --break-cycles to expand it anyway)", file=stderr)
        return EXIT_CYCLE
    for w in tree.warnings:
        warn(w)

    if config.command == "synth":
        if config.format == "dot":
            return emit(export.fault_tree_dot(tree))
        if config.format == "galileo":
            return emit(export.fault_tree_galileo(tree, config.default_prob))
        return emit(export.fault_tree_json(tree))
    if config.command == "mcs":
        return emit("".join(", ".join(cs.bes) + "\n" for cs in minimal_cut_sets(tree)))

    result = check_equivalence(d, red, tree, top, seed=config.seed, samples=config.samples)
    code = emit(result.format() + "\n")
    return EXIT_COUNTEREXAMPLE if not result.ok else code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except UsageError as exc:
        print(f"ftsynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
