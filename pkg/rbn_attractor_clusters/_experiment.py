# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import os
import shutil
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Optional

from ._attractors import AttractorSet, SearchConfig, sample_attractors
from ._clustering import (
    UndefinedClusteringCoefficient,
    clustering_report,
    newick_export,
    single_link_dendrogram,
    weights_from_distances,
)
from ._distances import DistanceMatrix, Measure, distance_matrix
from ._formats import (
    format_attractor_set,
    format_clustering_report,
    format_distance_matrix,
    format_histogram,
    format_json,
    format_merges,
    format_network,
    format_summary_table,
    parse_distance_matrix,
)
from ._metadata import APP, VERSION
from ._network import GenerationParams, classify_regime, generate_rbn
from ._seeding import network_seed, sampling_seed
from ._statistics import clustering_histogram, mean_of_summaries, pool_distances, summary

PROTOCOL_BIASES = (0.5, 0.788675, 0.85)
WORKERS_ENVIRON_KEY = "RBN_AC_WORKERS"

_MIN_ATTRACTORS_FOR_DISTANCES = 2
_MIN_ATTRACTORS_FOR_CLUSTERING = 3


class ExperimentError(Exception):
    pass


class InvalidExperimentConfig(ExperimentError):
    pass


class ConfigFileError(ExperimentError):
    def __init__(self, path: str, line_number: int, message: str):
        super().__init__(f"{path}, line {line_number}: {message}")


class OutputDirectoryNotEmpty(ExperimentError):
    def __init__(self, path: str):
        super().__init__(f"Output directory {path!r} is not empty.")


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Experiment parameters; the defaults describe the full-size ensemble.
    """

    root_seed: int
    n: int = 70
    k: int = 3
    biases: tuple[float, ...] = PROTOCOL_BIASES
    networks_per_bias: int = 50
    samples_per_network: int = 100_000
    max_steps: int = 1_000_000
    memory_cap: Optional[int] = None
    measures: tuple[Measure, ...] = tuple(Measure)
    bins: int = 10
    output_dir: str = "rbn-experiment"
    workers: int = 1
    record_timing: bool = False

    def __post_init__(self):
        counts = {
            "n": self.n,
            "k": self.k,
            "networks_per_bias": self.networks_per_bias,
            "samples_per_network": self.samples_per_network,
            "max_steps": self.max_steps,
            "bins": self.bins,
            "workers": self.workers,
        }
        for name, value in counts.items():
            if value < 1:
                raise InvalidExperimentConfig(
                    f"Parameter {name!r} must be at least 1, got {value}."
                )
        if self.memory_cap is not None and self.memory_cap < 1:
            raise InvalidExperimentConfig(f"Memory cap must be at least 1, got {self.memory_cap}.")
        if self.k > self.n:
            raise InvalidExperimentConfig(f"In-degree k={self.k} exceeds n={self.n}.")
        if not self.biases:
            raise InvalidExperimentConfig("At least one bias is required.")
        if len(set(self.biases)) != len(self.biases):
            raise InvalidExperimentConfig("Biases must be pairwise distinct.")
        for bias in self.biases:
            if not 0.0 <= bias <= 1.0:
                raise InvalidExperimentConfig(f"Bias {bias} is outside [0, 1].")
        if not self.measures:
            raise InvalidExperimentConfig("At least one distance measure is required.")
        if not 0 <= self.root_seed < 2**64:
            raise InvalidExperimentConfig(
                f"Seed {self.root_seed} is not an unsigned 64-bit integer."
            )

    def protocol_echo(self) -> dict:
        """
        The parameters that determine the artifacts, as plain JSON values.
        """
        return {
            "root_seed": self.root_seed,
            "n": self.n,
            "k": self.k,
            "biases": list(self.biases),
            "networks_per_bias": self.networks_per_bias,
            "samples_per_network": self.samples_per_network,
            "max_steps": self.max_steps,
            "memory_cap": self.memory_cap,
            "measures": [measure.value for measure in self.measures],
            "bins": self.bins,
        }


def _parse_list(parse):
    def parse_list(text: str):
        return tuple(parse(part.strip()) for part in text.split(",") if part.strip())

    return parse_list


def _parse_optional_int(text: str) -> Optional[int]:
    return None if text.lower() in ("", "none") else int(text)


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


_CONFIG_PARSERS = {
    "root_seed": int,
    "n": int,
    "k": int,
    "biases": _parse_list(float),
    "networks_per_bias": int,
    "samples_per_network": int,
    "max_steps": int,
    "memory_cap": _parse_optional_int,
    "measures": _parse_list(Measure),
    "bins": int,
    "output_dir": str,
    "workers": int,
    "record_timing": _parse_bool,
}
assert set(_CONFIG_PARSERS) == {f.name for f in fields(ExperimentConfig)}


def parse_config_text(text: str, path: str = "<config>") -> dict:
    """
    Parse ``key = value`` lines into keyword arguments for ExperimentConfig.
    """
    values = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, separator, value = (part.strip() for part in line.partition("="))
        if not separator:
            raise ConfigFileError(path, line_number, f"expected 'key = value', got {line!r}")
        if key not in _CONFIG_PARSERS:
            raise ConfigFileError(path, line_number, f"unknown key {key!r}")
        try:
            values[key] = _CONFIG_PARSERS[key](value)
        except ValueError:
            raise ConfigFileError(path, line_number, f"invalid value {value!r} for key {key!r}")
    return values


def load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as f:
        return parse_config_text(f.read(), path)


def workers_from_environment(default: int = 1) -> int:
    text = os.environ.get(WORKERS_ENVIRON_KEY)
    if text is None:
        return default
    try:
        return int(text)
    except ValueError:
        raise InvalidExperimentConfig(
            f"Environment variable {WORKERS_ENVIRON_KEY} must be an integer, got {text!r}."
        )


@dataclass(frozen=True)
class NetworkRecord:
    bias: float
    bias_index: int
    network_index: int
    directory: str
    network_seed: int
    sampling_seed: int
    regime: str
    attractor_count: int
    not_found: int
    mean_period: Optional[float]
    max_period: Optional[int]
    skipped_for_clustering: bool

    def to_document(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class RunManifest:
    config: ExperimentConfig
    networks: tuple[NetworkRecord, ...]
    version: str = VERSION
    wall_clock_seconds: Optional[float] = None

    def to_document(self, include_timing: bool = False) -> dict:
        document = {
            "app": APP,
            "version": self.version,
            "config": self.config.protocol_echo(),
            "networks": [record.to_document() for record in self.networks],
        }
        if include_timing:
            document["wall_clock_seconds"] = self.wall_clock_seconds
        return document


def file_names_for(measure: Measure) -> dict:
    return {
        "distances": f"distances-{measure.value}.csv",
        "summary": f"summary-{measure.value}.csv",
        "clustering": f"clustering-{measure.value}.csv",
        "dendrogram": f"dendrogram-{measure.value}.nwk",
        "merges": f"merges-{measure.value}.csv",
    }


@dataclass(frozen=True)
class MatrixAnalysis:
    """
    Cluster analysis of one distance matrix and the files it produces.
    """

    matrix: DistanceMatrix
    network_coefficient: Optional[float]
    files: dict = field(default_factory=dict)

    @property
    def skipped_for_clustering(self) -> bool:
        return self.network_coefficient is None


def analyze_matrix(matrix: DistanceMatrix) -> MatrixAnalysis:
    names = file_names_for(matrix.measure)
    files = {}
    coefficient = None

    if len(matrix) >= _MIN_ATTRACTORS_FOR_CLUSTERING:
        try:
            report = clustering_report(weights_from_distances(matrix))
        except UndefinedClusteringCoefficient:
            pass
        else:
            coefficient = report.network
            files[names["clustering"]] = format_clustering_report(report)

    if len(matrix) >= _MIN_ATTRACTORS_FOR_DISTANCES:
        dendrogram = single_link_dendrogram(matrix)
        files[names["dendrogram"]] = newick_export(dendrogram) + "\n"
        files[names["merges"]] = format_merges(dendrogram)

    return MatrixAnalysis(matrix=matrix, network_coefficient=coefficient, files=files)


def matrix_for(attractor_set: AttractorSet, measure: Measure) -> tuple[DistanceMatrix, str]:
    """
    Distance matrix as written to disk, together with its text.

    The matrix is read back from its own text so that downstream analysis
    sees exactly the values a separate run would load from the file.
    """
    text = format_distance_matrix(distance_matrix(attractor_set, measure))
    return parse_distance_matrix(text), text


@dataclass(frozen=True)
class _NetworkTask:
    config: ExperimentConfig
    bias_index: int
    network_index: int
    directory: str


@dataclass(frozen=True)
class _NetworkResult:
    record: NetworkRecord
    matrices: dict
    coefficients: dict


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _process_network(task: _NetworkTask) -> _NetworkResult:
    config = task.config
    bias = config.biases[task.bias_index]
    seed = network_seed(config.root_seed, task.bias_index, task.network_index)
    sample_seed = sampling_seed(seed)

    net = generate_rbn(GenerationParams(n=config.n, k=config.k, bias=bias, seed=seed))
    search = SearchConfig(max_steps=config.max_steps, memory_cap=config.memory_cap)
    attractor_set = sample_attractors(net, config.samples_per_network, search, sample_seed)

    os.makedirs(task.directory, exist_ok=True)
    _write(os.path.join(task.directory, "network.txt"), format_network(net))
    _write(os.path.join(task.directory, "attractors.json"), format_attractor_set(attractor_set))

    matrices = {}
    coefficients = dict.fromkeys(config.measures)
    # nothing to compare when every trajectory ran out of steps
    measures = config.measures if len(attractor_set) else ()
    for measure in measures:
        names = file_names_for(measure)
        matrix, text = matrix_for(attractor_set, measure)
        _write(os.path.join(task.directory, names["distances"]), text)
        if len(matrix) >= _MIN_ATTRACTORS_FOR_DISTANCES:
            label = os.path.basename(task.directory)
            table = format_summary_table([(label, summary(matrix.upper_triangle()))], "network")
            _write(os.path.join(task.directory, names["summary"]), table)

        analysis = analyze_matrix(matrix)
        for name, text in analysis.files.items():
            _write(os.path.join(task.directory, name), text)
        matrices[measure] = matrix
        coefficients[measure] = analysis.network_coefficient

    periods = [attractor.period for attractor in attractor_set.attractors]
    record = NetworkRecord(
        bias=bias,
        bias_index=task.bias_index,
        network_index=task.network_index,
        directory=os.path.relpath(task.directory, config.output_dir),
        network_seed=seed,
        sampling_seed=sample_seed,
        regime=classify_regime(config.k, bias),
        attractor_count=len(attractor_set),
        not_found=attractor_set.not_found,
        mean_period=sum(periods) / len(periods) if periods else None,
        max_period=max(periods) if periods else None,
        skipped_for_clustering=len(attractor_set) < _MIN_ATTRACTORS_FOR_CLUSTERING,
    )
    return _NetworkResult(record=record, matrices=matrices, coefficients=coefficients)


def bias_directory_name(bias: float) -> str:
    return f"bias-{bias!r}"


def network_directory_name(network_index: int) -> str:
    return f"network-{network_index:03d}"


class ExperimentRunner:
    def __init__(self, messenger, confirmation):
        self._messenger = messenger
        self._confirmation = confirmation

    def _prepare_output_directory(self, path: str) -> None:
        if os.path.isdir(path) and os.listdir(path):
            question = (
                f"Output directory {path!r} is not empty.\n"
                "\nDelete its contents and write the new results?"
            )
            if not self._confirmation.confirmed(question):
                raise OutputDirectoryNotEmpty(path)
            shutil.rmtree(path)
        os.makedirs(path, exist_ok=True)

    def _tasks(self, config: ExperimentConfig) -> list[_NetworkTask]:
        return [
            _NetworkTask(
                config=config,
                bias_index=bias_index,
                network_index=network_index,
                directory=os.path.join(
                    config.output_dir,
                    bias_directory_name(bias),
                    network_directory_name(network_index),
                ),
            )
            for bias_index, bias in enumerate(config.biases)
            for network_index in range(config.networks_per_bias)
        ]

    def _run_tasks(self, config: ExperimentConfig, tasks):
        if config.workers == 1:
            yield from map(_process_network, tasks)
            return
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            yield from executor.map(_process_network, tasks)

    def _report_progress(self, result: _NetworkResult) -> None:
        record = result.record
        flag = ", skipped for clustering" if record.skipped_for_clustering else ""
        self._messenger.tell_progress(
            f"Bias {record.bias} ({record.regime}), network {record.network_index}:"
            f" {record.attractor_count} attractor(s), {record.not_found} not found{flag}."
        )

    def _write_ensemble_statistics(self, config: ExperimentConfig, results) -> None:
        for measure in config.measures:
            pooled_rows = []
            per_network_rows = []
            for bias_index, bias in enumerate(config.biases):
                matrices = [
                    result.matrices[measure]
                    for result in results
                    if result.record.bias_index == bias_index
                    and measure in result.matrices
                    and len(result.matrices[measure]) >= _MIN_ATTRACTORS_FOR_DISTANCES
                ]
                pooled = pool_distances(matrices)
                if pooled:
                    pooled_rows.append((repr(bias), summary(pooled)))
                    per_network_rows.append(
                        (
                            repr(bias),
                            mean_of_summaries([summary(m.upper_triangle()) for m in matrices]),
                        )
                    )
                else:
                    self._messenger.tell_info(
                        f"No {measure.value} distances for bias {bias}:"
                        " every network has fewer than two attractors."
                    )

                coefficients = [
                    result.coefficients[measure]
                    for result in results
                    if result.record.bias_index == bias_index
                    and result.coefficients[measure] is not None
                ]
                histogram = clustering_histogram(coefficients, config.bins)
                _write(
                    os.path.join(
                        config.output_dir,
                        bias_directory_name(bias),
                        f"clustering-histogram-{measure.value}.csv",
                    ),
                    format_histogram(histogram),
                )

            _write(
                os.path.join(config.output_dir, f"summary-{measure.value}.csv"),
                format_summary_table(pooled_rows),
            )
            _write(
                os.path.join(config.output_dir, f"summary-{measure.value}-per-network.csv"),
                format_summary_table(per_network_rows),
            )

    def run(self, config: ExperimentConfig) -> RunManifest:
        started = time.monotonic()
        self._prepare_output_directory(config.output_dir)
        try:
            results = []
            for result in self._run_tasks(config, self._tasks(config)):
                self._report_progress(result)
                results.append(result)

            self._write_ensemble_statistics(config, results)

            manifest = RunManifest(
                config=config,
                networks=tuple(result.record for result in results),
                wall_clock_seconds=time.monotonic() - started,
            )
            _write(
                os.path.join(config.output_dir, "manifest.json"),
                format_json(manifest.to_document(include_timing=config.record_timing)),
            )
        except Exception:
            shutil.rmtree(config.output_dir, ignore_errors=True)
            raise

        skipped = sum(record.skipped_for_clustering for record in manifest.networks)
        self._messenger.tell_info(
            f"{len(manifest.networks)} network(s) processed"
            f" ({skipped} skipped for clustering) in {manifest.wall_clock_seconds:.1f} seconds;"
            f" results written to {config.output_dir!r}."
        )
        return manifest


def run_experiment(config: ExperimentConfig, messenger, confirmation) -> RunManifest:
    return ExperimentRunner(messenger, confirmation).run(config)
