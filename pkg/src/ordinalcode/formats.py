"""File formats: JSONL sequences and corpora, JSON artifacts, CSV tables.

Every writer goes through :func:`atomic_write` so a failed run never leaves a
partial file behind.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Iterator, Union

from .core import Sequence
from .errors import OrdinalCodeError, ParseError

PathLike = Union[str, os.PathLike]


def atomic_write(path: PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def iter_jsonl(lines: Iterable[str], source: str = "<input>") -> Iterator[dict]:
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{source}:{lineno}: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise ParseError(f"{source}:{lineno}: expected a JSON object")
        yield obj


def read_jsonl(path: PathLike) -> list:
    with open(path, encoding="utf-8") as fh:
        return list(iter_jsonl(fh, str(path)))


def sequence_from_json(obj: dict, lineno: int = 0) -> Sequence:
    items = obj.get("items")
    if not isinstance(items, list):
        raise ParseError(f"record {lineno}: 'items' must be a list")
    try:
        return Sequence(tuple(items), id=obj.get("id"), repertoire=obj.get("M"))
    except OrdinalCodeError as exc:
        raise ParseError(f"record {lineno}: {exc}") from None


def sequence_to_json(seq: Sequence) -> dict:
    obj = {"id": seq.id, "items": list(seq.items)}
    if seq.repertoire is not None:
        obj["M"] = seq.repertoire
    return obj


def read_sequences(path: PathLike) -> list:
    return [sequence_from_json(obj, i) for i, obj in enumerate(read_jsonl(path), start=1)]


def dumps_jsonl(rows: Iterable[dict]) -> str:
    return "".join(json.dumps(row, separators=(",", ":")) + "\n" for row in rows)


def write_sequences(path: PathLike, seqs: Iterable[Sequence]) -> None:
    atomic_write(path, dumps_jsonl(sequence_to_json(s) for s in seqs))


def read_corpus(path: PathLike) -> list:
    """Token corpus rows ``{"word", "tokens", "label"?}``."""
    rows = read_jsonl(path)
    for i, row in enumerate(rows, start=1):
        if not isinstance(row.get("tokens"), list):
            raise ParseError(f"record {i}: 'tokens' must be a list")
    return rows


def _cell(value) -> str:
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(v) for v in value)
    if value is None:
        return ""
    return str(value)


def dumps_csv(rows: list, columns: list = None) -> str:
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def dumps_rows(rows: list, fmt: str = "jsonl", columns: list = None) -> str:
    if fmt == "jsonl":
        return dumps_jsonl(rows)
    if fmt == "csv":
        return dumps_csv(rows, columns)
    raise ValueError(f"unknown format {fmt!r}")


def read_json(path: PathLike):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}") from None


def write_json(path: PathLike, obj) -> None:
    atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_harlow_csv(path: PathLike, logs: Iterable) -> None:
    rows = [r.__dict__ for log in logs for r in log.records]
    atomic_write(path, dumps_csv(rows, ["episode", "trial", "choice", "reward"]))
