"""CSV and JSON artifacts with reproducibility metadata.

Every CSV has a header row and a trailing comment line
``#seed=...,#version=...`` so any output can be traced back to the run
that produced it.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .interlacing import AtomicMeasure, InterlacingPair

MEASURE_HEADER = ["index", "atom_or_a", "weight_or_b"]
JACOBI_HEADER = ["i", "a_i", "b_i"]
SPECTRUM_HEADER = ["kind", "index", "value"]
CLT_HEADER = [
    "ensemble", "k", "n", "M", "mean", "var", "var_lo", "var_hi", "target", "pass",
]


def format_value(v) -> str:
    """Canonical text form: shortest round-trip decimal for floats."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(target, header: list, rows, seed=None) -> None:
    """Write rows with a header and the trailing metadata comment line.

    ``target`` is a path or a text stream.
    """

    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
        fh.write(metadata_line(seed) + "\n")

    if hasattr(target, "write"):
        emit(target)
    else:
        with open(target, "w", newline="") as fh:
            emit(fh)


def metadata_line(seed=None) -> str:
    seed_text = "" if seed is None else format(int(seed))
    return f"#seed={seed_text},#version={__version__}"


def read_csv(source) -> tuple:
    """Read a CSV written by write_csv: (header, rows of dicts, metadata)."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    header = None
    rows = []
    meta = {}
    for line in io.StringIO(text):
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            for part in line.split(","):
                part = part.lstrip("#")
                if "=" in part:
                    key, _, value = part.partition("=")
                    meta[key] = value
            continue
        fields = next(csv.reader([line]))
        if header is None:
            header = fields
        else:
            rows.append(dict(zip(header, fields)))
    if header is None:
        raise ValueError("empty CSV: no header row")
    return header, rows, meta


# ---------------------------------------------------------------------------
# Domain-specific rows.


def measure_rows(mu: AtomicMeasure):
    for i, (a, w) in enumerate(zip(mu.atoms, mu.weights)):
        yield i, a, w


def pair_rows(pair: InterlacingPair):
    for i, a in enumerate(pair.a):
        b = pair.b[i] if i < pair.b.size else ""
        yield i, a, b


def parse_measure(rows) -> AtomicMeasure:
    atoms = [float(r["atom_or_a"]) for r in rows]
    weights = [float(r["weight_or_b"]) for r in rows]
    return AtomicMeasure(np.array(atoms), np.array(weights))


def parse_pair(rows) -> InterlacingPair:
    a = [float(r["atom_or_a"]) for r in rows]
    b = [float(r["weight_or_b"]) for r in rows if r["weight_or_b"] != ""]
    return InterlacingPair(np.array(a), np.array(b))


# ---------------------------------------------------------------------------
# Check records and JSON reports.


def check(name: str, value: float, target: float, tolerance: float, passed=None):
    """A pass/fail record; by default passes when |value - target| <= tolerance."""
    if passed is None:
        passed = abs(value - target) <= tolerance
    return {
        "name": name,
        "residual_or_stat": float(value),
        "target": float(target),
        "tolerance": float(tolerance),
        "pass": bool(passed),
    }


def all_pass(checks: list) -> bool:
    return all(c["pass"] for c in checks)


def write_report(target, command: str, params: dict, checks: list) -> None:
    """JSON report: {command, params, checks: [...]}."""
    doc = {"command": command, "params": params, "checks": checks}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w") as fh:
            fh.write(text)


def print_checks(checks: list, stream=None) -> None:
    stream = stream or sys.stdout
    for c in checks:
        status = "PASS" if c["pass"] else "FAIL"
        stream.write(
            f"{status} {c['name']}: {format_value(c['residual_or_stat'])}"
            f" (target {format_value(c['target'])}"
            f" +/- {format_value(c['tolerance'])})\n"
        )
