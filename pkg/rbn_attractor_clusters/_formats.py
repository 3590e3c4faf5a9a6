# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import csv
import io
import json
from collections.abc import Sequence
from typing import Optional

import numpy as np

from ._attractors import Attractor, AttractorError, AttractorSet, canonicalize
from ._clustering import ClusteringReport, Dendrogram
from ._distances import DistanceError, DistanceMatrix, Measure, attractor_labels
from ._network import BooleanNetwork, NetworkError, NetworkState, NodeFunction
from ._statistics import SUMMARY_COLUMNS, Histogram, SummaryStats

NETWORK_MAGIC = "rbn-network 1"
ATTRACTORS_FORMAT = "rbn-attractors 1"

_NETWORK_HEADER_KEYS = ("n", "k", "bias", "seed")
_NONE = "-"


class FormatError(Exception):
    def __init__(self, source: str, line_number: Optional[int], message: str):
        location = source if line_number is None else f"{source}, line {line_number}"
        super().__init__(f"{location}: {message}")
        self.source = source
        self.line_number = line_number


def format_real(value: float) -> str:
    return f"{value:.6f}"


def _csv_text(rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def _csv_rows(text: str):
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        yield reader.line_num, row


# Networks


def format_network(net: BooleanNetwork) -> str:
    """
    Line-oriented network text: a header with n, k, bias and seed,
    then one line per node with its inputs and its truth table
    (first listed input is the least significant index bit).
    """
    header = {
        "n": str(net.n),
        "k": str(net.k),
        "bias": _NONE if net.bias is None else repr(float(net.bias)),
        "seed": _NONE if net.seed is None else str(net.seed),
    }
    lines = [NETWORK_MAGIC]
    lines += [f"{key} = {header[key]}" for key in _NETWORK_HEADER_KEYS]
    for index, node in enumerate(net.nodes):
        inputs = ",".join(str(j) for j in node.inputs) or _NONE
        lines.append(f"node {index} {inputs} {node.table_string}")
    return "\n".join(lines) + "\n"


def _parse_int(source, line_number, field, text) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(source, line_number, f"field {field!r}: {text!r} is not an integer")


def _parse_float(source, line_number, field, text) -> float:
    try:
        return float(text)
    except ValueError:
        raise FormatError(source, line_number, f"field {field!r}: {text!r} is not a number")


def parse_network(text: str, source: str = "<network>") -> BooleanNetwork:
    lines = [
        (line_number, line.strip())
        for line_number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    cursor = iter(lines)
    last_line_number = lines[-1][0] if lines else 0

    def next_line(expectation):
        try:
            return next(cursor)
        except StopIteration:
            raise FormatError(
                source, last_line_number + 1, f"unexpected end of file, expected {expectation}"
            )

    line_number, line = next_line("header line")
    if line != NETWORK_MAGIC:
        raise FormatError(source, line_number, f"expected {NETWORK_MAGIC!r}, got {line!r}")

    header = {}
    for key in _NETWORK_HEADER_KEYS:
        line_number, line = next_line(f"header field {key!r}")
        found_key, separator, value = (part.strip() for part in line.partition("="))
        if not separator or found_key != key:
            raise FormatError(source, line_number, f"expected '{key} = <value>', got {line!r}")
        if value == _NONE and key in ("bias", "seed"):
            header[key] = None
        elif key == "bias":
            header[key] = _parse_float(source, line_number, key, value)
        else:
            header[key] = _parse_int(source, line_number, key, value)

    nodes = []
    for index in range(header["n"]):
        line_number, line = next_line(f"line for node {index}")
        fields = line.split()
        if len(fields) != 4 or fields[0] != "node":
            raise FormatError(
                source, line_number, f"expected 'node <index> <inputs> <table>', got {line!r}"
            )
        if _parse_int(source, line_number, "index", fields[1]) != index:
            raise FormatError(source, line_number, f"field 'index': expected {index}")
        inputs = (
            ()
            if fields[2] == _NONE
            else tuple(
                _parse_int(source, line_number, "inputs", part) for part in fields[2].split(",")
            )
        )
        if set(fields[3]) - {"0", "1"}:
            raise FormatError(source, line_number, f"field 'table': {fields[3]!r} is not 0/1")
        try:
            nodes.append(NodeFunction(inputs=inputs, table=tuple(int(c) for c in fields[3])))
        except NetworkError as e:
            raise FormatError(source, line_number, str(e))

    for line_number, line in cursor:
        raise FormatError(source, line_number, f"unexpected trailing content {line!r}")

    try:
        return BooleanNetwork(
            n=header["n"], k=header["k"], nodes=tuple(nodes), bias=header["bias"],
            seed=header["seed"],
        )
    except NetworkError as e:
        raise FormatError(source, None, str(e))


# Attractor sets


def format_attractor_set(attractor_set: AttractorSet) -> str:
    document = {
        "format": ATTRACTORS_FORMAT,
        "n": attractor_set.n,
        "not_found": attractor_set.not_found,
        "attractors": [
            {
                "label": label,
                "period": attractor.period,
                "basin_hits": hits,
                "states": [str(state) for state in attractor.states],
            }
            for label, attractor, hits in zip(
                attractor_labels(len(attractor_set)),
                attractor_set.attractors,
                attractor_set.basin_hits,
            )
        ],
    }
    return json.dumps(document, indent=2) + "\n"


def parse_attractor_set(text: str, source: str = "<attractors>") -> AttractorSet:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(source, e.lineno, e.msg)

    try:
        if document["format"] != ATTRACTORS_FORMAT:
            raise FormatError(source, None, f"expected format {ATTRACTORS_FORMAT!r}")
        n = int(document["n"])
        attractors: list[Attractor] = []
        hits: list[int] = []
        for index, entry in enumerate(document["attractors"]):
            states = [NetworkState.from_string(state) for state in entry["states"]]
            attractor = canonicalize(states)
            if attractor.states != tuple(states) or attractor.period != entry["period"]:
                raise FormatError(source, None, f"attractor {index} is not in canonical form")
            attractors.append(attractor)
            hits.append(int(entry["basin_hits"]))
        return AttractorSet(
            n=n,
            attractors=tuple(attractors),
            basin_hits=tuple(hits),
            not_found=int(document["not_found"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(source, None, f"missing or malformed field: {e}")
    except (AttractorError, NetworkError) as e:
        raise FormatError(source, None, str(e))


# Distance matrices


def format_distance_matrix(matrix: DistanceMatrix) -> str:
    """
    CSV with the measure name in the corner cell and labels along both axes.
    """
    if matrix.measure.is_integral:

        def cell(value):
            return str(int(value))

    else:
        cell = format_real

    rows = [[matrix.measure.value, *matrix.labels]]
    for label, values in zip(matrix.labels, matrix.values):
        rows.append([label, *(cell(value) for value in values)])
    return _csv_text(rows)


def parse_distance_matrix(text: str, source: str = "<distances>") -> DistanceMatrix:
    rows = list(_csv_rows(text))
    if not rows:
        raise FormatError(source, 1, "missing header row")

    line_number, header = rows[0]
    try:
        measure = Measure(header[0])
    except (IndexError, ValueError):
        raise FormatError(source, line_number, "field 'measure': unknown distance measure")
    labels = tuple(header[1:])
    if len(rows) - 1 != len(labels):
        raise FormatError(source, None, f"expected {len(labels)} row(s) after the header")

    parse = _parse_int if measure.is_integral else _parse_float
    dtype = np.int64 if measure.is_integral else np.float64
    values = np.zeros((len(labels), len(labels)), dtype=dtype)
    for i, (line_number, row) in enumerate(rows[1:]):
        if len(row) != len(labels) + 1 or row[0] != labels[i]:
            raise FormatError(source, line_number, f"expected row for label {labels[i]!r}")
        for j, text_value in enumerate(row[1:]):
            values[i, j] = parse(source, line_number, labels[j], text_value)

    try:
        return DistanceMatrix(labels=labels, values=values, measure=measure)
    except DistanceError as e:
        raise FormatError(source, None, str(e))


# Cluster analysis


def format_clustering_report(report: ClusteringReport) -> str:
    rows = [["label", "coefficient"]]
    for label, value in zip(report.labels, report.per_node):
        rows.append([label, "" if value is None else format_real(value)])
    rows.append(["network", format_real(report.network)])
    return _csv_text(rows)


def parse_network_clustering_coefficient(text: str, source: str = "<clustering>") -> float:
    for line_number, row in _csv_rows(text):
        if row and row[0] == "network":
            return _parse_float(source, line_number, "coefficient", row[1])
    raise FormatError(source, None, "missing 'network' row")


def format_merges(dendrogram: Dendrogram) -> str:
    rows = [["step", "left", "right", "height", "size"]]
    for step, merge in enumerate(dendrogram.merges, start=1):
        rows.append([step, merge.left, merge.right, format_real(merge.height), merge.size])
    return _csv_text(rows)


# Ensemble statistics


def format_summary_table(rows: Sequence[tuple[str, SummaryStats]], key: str = "bias") -> str:
    lines = [[key, *SUMMARY_COLUMNS]]
    for label, stats in rows:
        lines.append([label, *(format_real(value) for value in stats.as_tuple())])
    return _csv_text(lines)


def format_histogram(histogram: Histogram) -> str:
    rows = [["bin_left", "bin_right", "count"]]
    for left, right, count in histogram.bins():
        rows.append([format_real(left), format_real(right), count])
    return _csv_text(rows)


def format_json(document) -> str:
    return json.dumps(document, indent=2) + "\n"
