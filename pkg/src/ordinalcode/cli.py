"""Command-line entry point: ``ordinalcode <command> [options]``.

Exit codes: 0 success, 1 negative result (failed verification, invalid Dyck
word), 2 usage error, 3 unparsable input, 4 precondition violation, 5 I/O
failure. Errors are reported on stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import autoencoder as ae
from . import formats
from .config import ExperimentConfig, derive_seed
from .core import Sequence, rank_code
from .errors import LengthMismatch, OrdinalCodeError, ParseError
from .huffman import Codec, SymbolTable, build_codec
from .stdp import noise_margin, perturb, recall, store
from .tasks import TaskSetAgent, Template, constant_env, harlow_episode, structure_signature, template_match
from .trees import dyck_validate, is_stack_sortable, stack_order_tree, tree_order_weights, tree_to_dyck, tree_to_json
from .verify import SUITES, run_suite

OUT_DIR_ENV = "ORDINALCODE_OUT_DIR"

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_PARSE, EXIT_PRECONDITION, EXIT_IO = range(6)


class CommandResult:
    def __init__(self, text: str, status: int = EXIT_OK, default_name: str = "out"):
        self.text = text
        self.status = status
        self.default_name = default_name


def _parse_item(token: str):
    for cast in (int, float):
        try:
            return cast(token)
        except ValueError:
            pass
    return token


def _inline_sequence(text: str) -> Sequence:
    return Sequence(tuple(_parse_item(t.strip()) for t in text.split(",") if t.strip()), id="arg")


def _sequences(args) -> list:
    if args.seq is not None:
        return [_inline_sequence(args.seq)]
    if args.input is None:
        raise ParseError("no input: pass --in FILE or --seq ITEMS")
    return formats.read_sequences(args.input)


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(
        seed=args.seed, k=args.k, theta=args.theta, kernel=args.kernel,
        input=args.input, output=args.out,
    )


def _population(cfg: ExperimentConfig, n: int) -> ae.YPopulation:
    return ae.YPopulation.random(cfg.k, n, derive_seed(cfg.seed, "seq-autoencoder"))


def _rows(rows: list, args, name: str, columns: list = None) -> CommandResult:
    return CommandResult(formats.dumps_rows(rows, args.format, columns), default_name=f"{name}.{args.format}")


def cmd_encode(args) -> CommandResult:
    cfg = _config(args)
    rows = []
    pops: dict = {}
    for seq in _sequences(args):
        pop = pops.setdefault(seq.n, _population(cfg, seq.n))
        rows.append({"id": seq.id, "n": seq.n, "y": [float(v) for v in ae.encode(seq, pop)]})
    return _rows(rows, args, "encode")


def _load_book(path) -> ae.Codebook:
    try:
        return ae.Codebook.from_json(formats.read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, OrdinalCodeError):
            raise
        raise ParseError(f"{path}: bad codebook ({exc})") from None


def cmd_learn(args) -> CommandResult:
    cfg = _config(args)
    seqs = _sequences(args)
    lengths = {s.n for s in seqs}
    if args.book:
        book = _load_book(args.book)
        pop = book.population()
    else:
        if len(lengths) != 1:
            raise LengthMismatch(f"one codebook holds one sequence length, got {sorted(lengths)}")
        pop = _population(cfg, lengths.pop())
        book = ae.Codebook.empty(pop, cfg.theta)
    for seq in seqs:
        book, _, _ = ae.learn(seq, pop, book, label=seq.id)
    return CommandResult(json.dumps(book.to_json(), indent=2) + "\n", default_name="codebook.json")


def cmd_recognize(args) -> CommandResult:
    book = _load_book(args.book)
    pop = book.population()
    rows = []
    for seq in _sequences(args):
        z, sim = ae.recognize(seq, pop, book)
        rows.append({"id": seq.id, "z": z, "similarity": sim})
    return _rows(rows, args, "recognize")


def cmd_decode(args) -> CommandResult:
    book = _load_book(args.book)
    if args.z is not None:
        if args.bag is None:
            raise ParseError("--z needs --bag")
        requests = [{"id": "arg", "z": args.z, "bag": list(_inline_sequence(args.bag).items)}]
    elif args.input:
        requests = formats.read_jsonl(args.input)
    else:
        raise ParseError("no input: pass --in FILE or --z Z --bag ITEMS")
    rows = []
    for i, req in enumerate(requests, start=1):
        if "z" not in req or not isinstance(req.get("bag"), list):
            raise ParseError(f"record {i}: expected keys 'z' and 'bag'")
        rows.append({"id": req.get("id"), "items": list(ae.decode(int(req["z"]), req["bag"], book))})
    return _rows(rows, args, "decode")


def cmd_tree(args) -> CommandResult:
    rows = []
    for seq in _sequences(args):
        row = {"id": seq.id}
        if args.weights:
            row["weights"] = tree_order_weights(seq).as_strings()
        if args.dyck:
            row["dyck"] = tree_to_dyck(stack_order_tree(seq))
        if not (args.weights or args.dyck):
            row["tree"] = tree_to_json(stack_order_tree(seq))
        rows.append(row)
    return _rows(rows, args, "tree")


def cmd_dyck(args) -> CommandResult:
    if args.validate is not None:
        ok = dyck_validate(args.validate)
        row = {"word": args.validate, "valid": ok}
        return CommandResult(json.dumps(row) + "\n", EXIT_OK if ok else EXIT_NEGATIVE, "dyck.jsonl")
    if args.sortable is not None:
        perm = [int(t) for t in args.sortable.split(",")]
        ok = is_stack_sortable(perm)
        row = {"rank": perm, "stack_sortable": ok}
        return CommandResult(json.dumps(row) + "\n", default_name="dyck.jsonl")
    rows = []
    for seq in _sequences(args):
        rows.append({"id": seq.id, "dyck": tree_to_dyck(stack_order_tree(seq))})
    return _rows(rows, args, "dyck")


def _load_codec(path) -> Codec:
    try:
        return Codec.from_json(formats.read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, OrdinalCodeError):
            raise
        raise ParseError(f"{path}: bad codec ({exc})") from None


def cmd_huffman(args) -> CommandResult:
    if args.action == "build":
        if args.table:
            freqs = formats.read_json(args.table)
            if not isinstance(freqs, dict):
                raise ParseError("frequency table must be a JSON object")
            table = SymbolTable.from_mapping(freqs)
        elif args.input:
            symbols = [s for row in formats.read_jsonl(args.input) for s in row.get("symbols", [])]
            table = SymbolTable.from_stream(symbols)
        else:
            raise ParseError("build needs --table FILE or --in STREAMS")
        codec = build_codec(table, args.arity)
        return CommandResult(json.dumps(codec.to_json(), indent=2) + "\n", default_name="codec.json")
    if not args.codec or not args.input:
        raise ParseError(f"{args.action} needs --codec FILE and --in FILE")
    codec = _load_codec(args.codec)
    rows = []
    key = "symbols" if args.action == "encode" else "labels"
    for i, row in enumerate(formats.read_jsonl(args.input), start=1):
        if not isinstance(row.get(key), list):
            raise ParseError(f"record {i}: '{key}' must be a list")
        if args.action == "encode":
            rows.append({"id": row.get("id"), "labels": codec.encode(row[key])})
        else:
            rows.append({"id": row.get("id"), "symbols": codec.decode(row[key])})
    return _rows(rows, args, f"huffman-{args.action}")


def cmd_stdp(args) -> CommandResult:
    cfg = _config(args)
    rows = []
    for i, seq in enumerate(_sequences(args)):
        rank = rank_code(seq)
        net = store(rank, cfg.kernel)
        active = None
        if args.active:
            active = [int(t) for t in args.active.split(",")]
        margin = noise_margin(net, active)
        if args.epsilon:
            net = perturb(net, args.epsilon, derive_seed(cfg.seed, f"stdp/{i}"))
        result = recall(net, active)
        row = {
            "id": seq.id,
            "kernel": net.kernel,
            "rank": list(rank.ranks),
            "recovered": list(result.order),
            "margin": margin,
        }
        if args.dump_weights:
            row["weights"] = net.to_json()
        rows.append(row)
    return _rows(rows, args, "stdp")


def cmd_detect(args) -> CommandResult:
    if not args.input:
        raise ParseError("detect needs --in CORPUS")
    tpl = Template.parse(args.template, distinct=args.distinct) if args.template else None
    rows = []
    for row in formats.read_corpus(args.input):
        tokens = row["tokens"]
        out = {"word": row.get("word"), "signature": structure_signature(tokens).pattern}
        if "label" in row:
            out["label"] = row["label"]
            out["correct"] = out["signature"] == row["label"]
        if tpl is not None:
            res = template_match(tpl, tokens)
            out["match"] = isinstance(res, dict)
            if isinstance(res, dict):
                out["bindings"] = res
            else:
                out["violation"] = res.position
        rows.append(out)
    return _rows(rows, args, "detect")


def cmd_harlow(args) -> CommandResult:
    cfg = _config(args)
    episodes = args.episodes if args.episodes is not None else cfg.episodes
    trials = args.trials if args.trials is not None else cfg.trials
    agent = TaskSetAgent(seed=derive_seed(cfg.seed, "harlow-agent")) if args.explore == "random" \
        else TaskSetAgent(args.explore)
    rng = np.random.default_rng(derive_seed(cfg.seed, "harlow-env"))
    logs = []
    for ep in range(episodes):
        door = "AB"[int(rng.integers(2))]
        logs.append(harlow_episode(agent, constant_env(door), trials, ep))
    rows = [r.__dict__ for log in logs for r in log.records]
    fmt = args.format if args.format_given else "csv"
    return CommandResult(
        formats.dumps_rows(rows, fmt, ["episode", "trial", "choice", "reward"]),
        default_name=f"harlow.{fmt}",
    )


def cmd_verify(args) -> CommandResult:
    cfg = _config(args)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    lines, rows, ok = [], [], True
    for name in names:
        report = run_suite(name, cfg)
        print(f"# {name}: {report.runtime:.2f} s", file=sys.stderr)
        lines.extend(c.line() for c in report.criteria)
        rows.extend(report.rows())
        ok &= report.passed
    print("\n".join(lines))
    status = EXIT_OK if ok else EXIT_NEGATIVE
    if args.out or os.environ.get(OUT_DIR_ENV):
        return CommandResult(formats.dumps_rows(rows, args.format), status, f"verify.{args.format}")
    return CommandResult("", status)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file; flags win")
    common.add_argument("--seed", type=int, help="64-bit unsigned root seed")
    common.add_argument("--in", dest="input", help="input file (JSONL)")
    common.add_argument("--out", help=f"output file (default: ${OUT_DIR_ENV}/<command>.<fmt>, else stdout)")
    common.add_argument("--format", choices=("jsonl", "csv"), default=None)
    common.add_argument("--k", type=int, help="Y population size")
    common.add_argument("--theta", type=float, help="novelty threshold for recruiting Z units")
    common.add_argument("--kernel", choices=("const", "invdist", "constant", "inverse-distance"))
    common.add_argument("--seq", help="inline comma-separated sequence instead of --in")

    parser = argparse.ArgumentParser(prog="ordinalcode", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    add("encode", cmd_encode, "population vector per sequence")
    p = add("learn", cmd_learn, "build or extend a codebook")
    p.add_argument("--book", help="existing codebook to extend")
    p = add("recognize", cmd_recognize, "best-matching category per sequence")
    p.add_argument("--book", required=True)
    p = add("decode", cmd_decode, "arrange a bag of items by a stored rank code")
    p.add_argument("--book", required=True)
    p.add_argument("--z", type=int)
    p.add_argument("--bag", help="comma-separated items")
    p = add("tree", cmd_tree, "stack-order trees, dyadic weights, Dyck words")
    p.add_argument("--weights", action="store_true")
    p.add_argument("--dyck", action="store_true")
    p = add("dyck", cmd_dyck, "validate Dyck words or test stack-sortability")
    p.add_argument("--validate", metavar="WORD")
    p.add_argument("--sortable", metavar="RANKS")
    p = add("huffman", cmd_huffman, "ordinal Huffman codec")
    p.add_argument("action", choices=("build", "encode", "decode"))
    p.add_argument("--table", help="JSON object symbol -> frequency")
    p.add_argument("--codec", help="codec JSON")
    p.add_argument("--arity", type=int, default=2)
    p = add("stdp", cmd_stdp, "ordinal-STDP store and recall")
    p.add_argument("--active", help="comma-separated unit indices to cue")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--dump-weights", action="store_true")
    p = add("detect", cmd_detect, "structure signatures and template matches of a token corpus")
    p.add_argument("--template")
    p.add_argument("--distinct", action="store_true")
    p = add("harlow", cmd_harlow, "Harlow task-set episodes (CSV log)")
    p.add_argument("--episodes", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--explore", choices=("A", "B", "random"), default="A")
    p = add("verify", cmd_verify, "run an acceptance suite")
    p.add_argument("suite", help=f"one of {', '.join(SUITES)} or all")
    return parser


def _error(exc: BaseException, code: int) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}), file=sys.stderr)
    return code


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.format_given = args.format is not None
    args.format = args.format or "jsonl"
    try:
        result = args.fn(args)
        out = args.out
        if out is None and os.environ.get(OUT_DIR_ENV) and result.text:
            out = str(Path(os.environ[OUT_DIR_ENV]) / result.default_name)
        if out:
            formats.atomic_write(out, result.text)
        elif result.text:
            sys.stdout.write(result.text)
        return result.status
    except ParseError as exc:
        return _error(exc, EXIT_PARSE)
    except OrdinalCodeError as exc:
        return _error(exc, EXIT_PRECONDITION)
    except (ValueError, TypeError, KeyError) as exc:
        return _error(exc, EXIT_PRECONDITION)
    except OSError as exc:
        return _error(exc, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
