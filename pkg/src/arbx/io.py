"""File formats for the CLI (graph JSON, rates CSV, basis and perturbation
JSON) plus the run-report record every command emits.

Rates CSV convention: header ``src,dst,rate``; a row means one unit of
``src`` buys ``rate`` units of ``dst``, which is matrix entry (src, dst).
Worked example: the row ``EUR,USD,1.25`` sets entry (EUR, USD) = 1.25, the
price of one euro in dollars. Columns may use 1-based integer indices or
arbitrary string labels; labels get indices in sorted order and the table is
echoed in every report.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .basis import BasisAssignment, BasisSpec
from .dynamics import PerturbationVector
from .errors import ParseError, ReciprocalConflictError
from .exchange import DEFAULT_TOL, ArbitrageWitness, RateMatrix
from .graph import MarketGraph, new_graph

_INDEX_TOKEN = re.compile(r"[1-9][0-9]*")
_DIGIT_TOKEN = re.compile(r"[0-9]+")


def file_digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_json(path: str | Path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def _int_pairs(path: str | Path, pairs: object, what: str) -> list[tuple[int, int]]:
    if not isinstance(pairs, list):
        raise ParseError(f"{path}: {what} must be a list of [i, j] pairs")
    out = []
    for item in pairs:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            raise ParseError(f"{path}: bad {what} element {item!r}")
        out.append((item[0], item[1]))
    return out


def load_graph(path: str | Path) -> MarketGraph:
    """Read a graph file: {"n": int, "edges": [[i, j], ...]}, 1-based."""
    doc = _read_json(path)
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise ParseError(f"{path}: graph file needs 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"{path}: 'n' must be an integer")
    return new_graph(n, _int_pairs(path, doc["edges"], "edges"))


def save_graph(path: str | Path, g: MarketGraph) -> None:
    doc = {"n": g.n, "edges": [list(e) for e in sorted(g.edges)]}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class RatesFile:
    """Parsed rates CSV: the matrix, the label table, and which directed
    entries were filled in as exact reciprocals rather than quoted."""

    matrix: RateMatrix
    labels: tuple[str, ...]
    filled: tuple[tuple[int, int], ...]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label) + 1
        except ValueError:
            raise ParseError(f"unknown label {label!r}") from None


def _read_rate_rows(path: str | Path) -> list[tuple[int, tuple[str, str, str]]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows or [c.strip().lower() for c in rows[0]] != ["src", "dst", "rate"]:
        raise ParseError(f"{path}: first line must be the header 'src,dst,rate'")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise ParseError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
        src, dst, rate = (c.strip() for c in row)
        if not src or not dst:
            raise ParseError(f"{path}:{lineno}: empty src or dst")
        out.append((lineno, (src, dst, rate)))
    if not out:
        raise ParseError(f"{path}: no rate rows")
    return out


def _label_table(path: str | Path, tokens: set[str]) -> tuple[tuple[str, ...], Callable[[str], int]]:
    if all(_DIGIT_TOKEN.fullmatch(t) for t in tokens):
        if not all(_INDEX_TOKEN.fullmatch(t) for t in tokens):
            raise ParseError(f"{path}: integer vertex indices are 1-based")
        n = max(int(t) for t in tokens)
        return tuple(str(i) for i in range(1, n + 1)), int
    labels = tuple(sorted(tokens))
    position = {lab: k + 1 for k, lab in enumerate(labels)}
    return labels, position.__getitem__


def load_rates(path: str | Path, tol: float = DEFAULT_TOL) -> RatesFile:
    """Parse a rates CSV into a dense matrix over the graph its pairs imply.

    Missing reciprocals are filled as exact inverses and flagged. Explicitly
    quoted reciprocals whose product strays from 1 beyond ``tol`` (log
    domain) raise :class:`~arbx.errors.ReciprocalConflictError`; a duplicated
    directed row is a :class:`~arbx.errors.ParseError`.
    """
    rows = _read_rate_rows(path)
    labels, to_index = _label_table(path, {t for _, (s, d, _) in rows for t in (s, d)})

    quotes: dict[tuple[int, int], float] = {}
    for lineno, (src, dst, rate_text) in rows:
        try:
            rate = float(rate_text)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: rate {rate_text!r} is not a number") from None
        if not math.isfinite(rate) or rate <= 0.0:
            raise ParseError(f"{path}:{lineno}: rate must be positive and finite, got {rate_text}")
        key = (to_index(src), to_index(dst))
        if key in quotes:
            raise ParseError(f"{path}:{lineno}: duplicate quote {src}->{dst}")
        quotes[key] = rate

    for (i, j), rate in sorted(quotes.items()):
        if i >= j or (j, i) not in quotes:
            continue
        drift = math.log(rate) + math.log(quotes[(j, i)])
        if abs(drift) > tol:
            raise ReciprocalConflictError(
                f"{path}: quotes {labels[i - 1]}->{labels[j - 1]} and "
                f"{labels[j - 1]}->{labels[i - 1]} multiply to "
                f"{rate * quotes[(j, i)]:.12g}, not 1"
            )

    filled = []
    for (i, j), rate in sorted(quotes.items()):
        if i != j and (j, i) not in quotes:
            filled.append((j, i))
    for j, i in filled:
        quotes[(j, i)] = 1.0 / quotes[(i, j)]

    graph = new_graph(len(labels), {(min(i, j), max(i, j)) for i, j in quotes})
    return RatesFile(
        matrix=RateMatrix.from_quotes(graph, quotes),
        labels=labels,
        filled=tuple(filled),
    )


def save_rates(path: str | Path, r: RateMatrix, labels: Sequence[str] | None = None) -> None:
    """Write every edge's quotes as CSV: both directions per pair, loops once."""
    names = tuple(labels) if labels else tuple(str(i) for i in range(1, r.n + 1))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["src", "dst", "rate"])
        for i, j in sorted(r.graph.edges):
            if i == j:
                writer.writerow([names[i - 1], names[i - 1], repr(float(r.entries[i - 1, i - 1]))])
            else:
                writer.writerow([names[i - 1], names[j - 1], repr(float(r.entries[i - 1, j - 1]))])
                writer.writerow([names[j - 1], names[i - 1], repr(float(r.entries[j - 1, i - 1]))])


def load_basis(
    path: str | Path, graph: MarketGraph, *, multiplicative: bool = False
) -> BasisAssignment:
    """Read a basis file: {"entries": [[i, j], ...], "values": [...]}.

    Values are log-domain by default; ``multiplicative`` converts positive
    rates on load.
    """
    doc = _read_json(path)
    if not isinstance(doc, dict) or "entries" not in doc or "values" not in doc:
        raise ParseError(f"{path}: basis file needs 'entries' and 'values'")
    entries = _int_pairs(path, doc["entries"], "entries")
    raw = doc["values"]
    if not isinstance(raw, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
        raise ParseError(f"{path}: 'values' must be a list of numbers")
    values = [float(v) for v in raw]
    if len(values) != len(entries):
        raise ParseError(f"{path}: {len(entries)} entries but {len(values)} values")
    if multiplicative:
        if any(not math.isfinite(v) or v <= 0.0 for v in values):
            raise ParseError(f"{path}: multiplicative basis values must be positive")
        values = [math.log(v) for v in values]
    spec = BasisSpec(graph=graph, entries=tuple(entries))
    return BasisAssignment(spec=spec, values=tuple(values))


def load_perturbation(path: str | Path, graph: MarketGraph) -> PerturbationVector:
    """Read a perturbation file: {"basis": {"entries": [...]}, "deltas": [...]}.

    Deltas are log-domain. The embedded basis may carry "values" (the basis
    file shape); they are not needed here and are ignored.
    """
    doc = _read_json(path)
    if not isinstance(doc, dict) or "basis" not in doc or "deltas" not in doc:
        raise ParseError(f"{path}: perturbation file needs 'basis' and 'deltas'")
    basis = doc["basis"]
    if not isinstance(basis, dict) or "entries" not in basis:
        raise ParseError(f"{path}: 'basis' needs 'entries'")
    entries = _int_pairs(path, basis["entries"], "basis entries")
    raw = doc["deltas"]
    if not isinstance(raw, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
        raise ParseError(f"{path}: 'deltas' must be a list of numbers")
    if len(raw) != len(entries):
        raise ParseError(f"{path}: {len(entries)} basis entries but {len(raw)} deltas")
    spec = BasisSpec(graph=graph, entries=tuple(entries))
    return PerturbationVector(spec=spec, deltas=tuple(float(v) for v in raw))


@dataclass
class RunReport:
    """Uniform machine- and human-readable record of one CLI run."""

    command: str
    verdict: str  # ok | violation | error
    witness: ArbitrageWitness | None
    metrics: dict[str, float]
    inputs: dict[str, str]
    labels: tuple[str, ...]
    data: dict[str, object]

    def __post_init__(self) -> None:
        if self.verdict == "violation" and self.witness is None:
            raise ValueError("violation reports must carry a witness")
        for key, val in self.metrics.items():
            if val < 0:
                raise ValueError(f"metric {key} must be non-negative")

    def to_dict(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = {
                "cycle": list(self.witness.cycle),
                "log_gain": self.witness.log_gain,
                "multiplicative_gain": self.witness.multiplicative_gain,
            }
        return {
            "command": self.command,
            "verdict": self.verdict,
            "witness": witness,
            "metrics": dict(self.metrics),
            "inputs": dict(self.inputs),
            "labels": list(self.labels),
            "data": self.data,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"arbx {self.command}", f"verdict: {self.verdict}"]
        if self.witness is not None:
            path = " -> ".join(self._label(v) for v in self.witness.cycle)
            lines.append(f"witness: {path}")
            lines.append(f"  log gain: {self.witness.log_gain:.12g}")
            lines.append(f"  multiplicative gain: {self.witness.multiplicative_gain:.12g}")
        for key, value in self.data.items():
            lines.extend(_render(key, value))
        if self.labels:
            lines.append(
                "labels: " + " ".join(f"{lab}={k}" for k, lab in enumerate(self.labels, 1))
            )
        if self.metrics:
            lines.append(
                "metrics: " + " ".join(f"{k}={_num(v)}" for k, v in sorted(self.metrics.items()))
            )
        if self.inputs:
            lines.append(
                "inputs: " + " ".join(f"{k}={v}" for k, v in sorted(self.inputs.items()))
            )
        return "\n".join(lines)

    def _label(self, v: int) -> str:
        if 1 <= v <= len(self.labels):
            return self.labels[v - 1]
        return str(v)


def _num(v: object) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _render(key: str, value: object) -> list[str]:
    if isinstance(value, list):
        if all(isinstance(item, list) for item in value):
            lines = [f"{key}:"]
            lines.extend("  " + ",".join(_num(cell) for cell in item) for item in value)
            return lines
        return [f"{key}: " + " ".join(_num(item) for item in value)]
    return [f"{key}: {_num(value)}"]
