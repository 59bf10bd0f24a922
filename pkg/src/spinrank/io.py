"""Plain-text formats: node lists, ``FROM;TO;WEIGHT`` edge files, score files."""
from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Iterator

from .errors import Malformed
from .graph import SocialNetwork, build_network

PathLike = str | os.PathLike


def fmt(x: float) -> str:
    """Shortest round-trip decimal, always with a '.' separator."""
    if float(x).is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def iter_rows(path: PathLike, sep: str = ";") -> Iterator[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for no, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            yield no, [f.strip() for f in line.split(sep)]


def read_nodes(path: PathLike) -> list[str]:
    return [row[0] for _, row in iter_rows(path)]


def write_nodes(path: PathLike, labels: Iterable[str]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for lb in labels:
            fh.write(f"{lb}\n")
            n += 1
    return n


def read_edges(path: PathLike) -> list[tuple[str, str, float]]:
    out = []
    for no, row in iter_rows(path):
        if len(row) != 3:
            raise Malformed(no, f"expected FROM;TO;WEIGHT, got {len(row)} fields")
        try:
            w = float(row[2])
        except ValueError:
            raise Malformed(no, f"weight {row[2]!r} is not a number") from None
        out.append((row[0], row[1], w))
    return out


def write_edges(path: PathLike, rows: Iterable[tuple[str, str, float]], formatter=fmt) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, w in rows:
            fh.write(f"{a};{b};{formatter(w)}\n")
            n += 1
    return n


def read_network(node_path: PathLike | None, edge_path: PathLike) -> SocialNetwork:
    labels = read_nodes(node_path) if node_path is not None else None
    return build_network(read_edges(edge_path), labels=labels)


def write_network(net: SocialNetwork, node_path: PathLike, edge_path: PathLike, formatter=fmt):
    write_nodes(node_path, net.labels)
    write_edges(edge_path, net.labelled_edges(), formatter)


def read_scores(path: PathLike) -> tuple[list[str], list[float]]:
    """Read ``member;score[;...]`` rows; extra columns are ignored."""
    members, scores = [], []
    for no, row in iter_rows(path):
        if len(row) < 2:
            raise Malformed(no, "expected member;score")
        try:
            scores.append(float(row[1]))
        except ValueError:
            raise Malformed(no, f"score {row[1]!r} is not a number") from None
        members.append(row[0])
    return members, scores


def ensure_dir(path: PathLike) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
