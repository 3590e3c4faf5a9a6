# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import argparse
import os
import sys
import traceback
from argparse import RawDescriptionHelpFormatter
from signal import SIGINT
from textwrap import dedent

import colorama

from ._argparse_color import add_color_to_formatter_class
from ._attractors import SearchConfig, exhaustive_attractors, sample_attractors
from ._confirm import Confirmation
from ._distances import Measure
from ._experiment import (
    PROTOCOL_BIASES,
    ConfigFileError,
    ExperimentConfig,
    InvalidExperimentConfig,
    analyze_matrix,
    load_config_file,
    matrix_for,
    run_experiment,
    workers_from_environment,
)
from ._formats import (
    format_attractor_set,
    format_histogram,
    format_network,
    format_summary_table,
    parse_attractor_set,
    parse_distance_matrix,
    parse_network,
    parse_network_clustering_coefficient,
)
from ._messenger import Messenger
from ._metadata import APP, DESCRIPTION, VERSION
from ._network import GenerationParams, NetworkError, generate_rbn
from ._seeding import network_seed
from ._statistics import clustering_histogram, mean_of_summaries, pool_distances, summary

EXIT_USAGE = 1
EXIT_FAILURE = 2

_STDIO = "-"
_SUBCOMMANDS = ("generate", "simulate", "distances", "cluster", "stats", "experiment")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _measure(text: str) -> Measure:
    try:
        return Measure(text)
    except ValueError:
        choices = ", ".join(measure.value for measure in Measure)
        raise argparse.ArgumentTypeError(f"invalid measure {text!r} (choose from {choices})")


def _add_common_flags(parser):
    switches = parser.add_argument_group("flags")
    switches.add_argument(
        "--debug", dest="debug", action="store_true", help="show tracebacks on failure"
    )
    switches.add_argument(
        "--verbose", "-v", dest="verbose", action="store_true", help="enable progress output"
    )


def _add_generation_arguments(group, n_default=70, k_default=3):
    group.add_argument(
        "--n",
        metavar="COUNT",
        dest="n",
        type=int,
        default=n_default,
        help="number of nodes (default: 70)",
    )
    group.add_argument(
        "--k",
        metavar="COUNT",
        dest="k",
        type=int,
        default=k_default,
        help="number of inputs per node (default: 3)",
    )


def _add_search_arguments(group, max_steps_default):
    group.add_argument(
        "--max-steps",
        metavar="COUNT",
        dest="max_steps",
        type=int,
        default=max_steps_default,
        help="step budget per trajectory (default: 1000000)",
    )
    group.add_argument(
        "--memory-cap",
        metavar="COUNT",
        dest="memory_cap",
        type=int,
        default=None,
        help="give up on trajectories that would need to remember more states than this",
    )


def _parse_command_line(colorize: bool, args=None):
    _EPILOG = dedent("""\
        Software libre licensed under GPL v3 or later.
    """)

    if args is None:
        args = sys.argv[1:]

    formatter_class = RawDescriptionHelpFormatter
    if colorize:
        formatter_class = add_color_to_formatter_class(formatter_class, _SUBCOMMANDS)

    prog = os.path.basename(sys.argv[0])

    parser = _ArgumentParser(
        prog=prog,
        description=DESCRIPTION,
        epilog=_EPILOG,
        formatter_class=formatter_class,
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + VERSION)

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", title="commands")
    subparsers.required = True

    def add_subcommand(name, description):
        subparser = subparsers.add_parser(
            name, help=description, description=description, formatter_class=formatter_class
        )
        _add_common_flags(subparser)
        return subparser

    # generate
    generate = add_subcommand("generate", "write randomly generated network files")
    model = generate.add_argument_group("model")
    _add_generation_arguments(model)
    model.add_argument(
        "--bias",
        metavar="P",
        dest="bias",
        type=float,
        required=True,
        help="probability of a 1 in the truth tables",
    )
    seeding = generate.add_argument_group("seeding")
    seeding.add_argument(
        "--seed", metavar="SEED", dest="seed", type=int, required=True, help="root seed"
    )
    seeding.add_argument(
        "--bias-index",
        metavar="INDEX",
        dest="bias_index",
        type=int,
        default=0,
        help=(
            "seed stream to draw from; network i of stream b is network i"
            " of bias number b (counting from 0) in an experiment with the same seed"
            " (default: %(default)s)"
        ),
    )
    output = generate.add_argument_group("output")
    output.add_argument(
        "--count",
        metavar="COUNT",
        dest="count",
        type=int,
        default=1,
        help="number of networks (default: %(default)s)",
    )
    output.add_argument(
        "--output-dir",
        metavar="DIR",
        dest="output_dir",
        default=".",
        help="directory to write network-NNN.txt files to (default: %(default)s)",
    )

    # simulate
    simulate = add_subcommand("simulate", "find the attractors of a single network")
    simulate.add_argument("network", metavar="NETWORK", help="network file")
    search = simulate.add_argument_group("search")
    search.add_argument(
        "--samples",
        metavar="COUNT",
        dest="samples",
        type=int,
        default=100_000,
        help="number of random initial states (default: %(default)s)",
    )
    _add_search_arguments(search, max_steps_default=1_000_000)
    search.add_argument(
        "--exhaustive",
        dest="exhaustive",
        action="store_true",
        help="start from every one of the 2^n states instead of sampling (small networks only)",
    )
    search.add_argument(
        "--seed", metavar="SEED", dest="seed", type=int, help="seed for the initial states"
    )
    simulate.add_argument(
        "--output",
        "-o",
        metavar="FILE",
        dest="output",
        default=_STDIO,
        help="attractor set file to write (default: standard output)",
    )

    # distances
    distances = add_subcommand("distances", "compute an attractor distance matrix")
    distances.add_argument(
        "attractors",
        metavar="ATTRACTORS",
        nargs="?",
        default=_STDIO,
        help="attractor set file (default: standard input)",
    )
    distances.add_argument(
        "--measure",
        metavar="MEASURE",
        dest="measure",
        type=_measure,
        required=True,
        help="one of: " + ", ".join(measure.value for measure in Measure),
    )
    distances.add_argument(
        "--output",
        "-o",
        metavar="FILE",
        dest="output",
        default=_STDIO,
        help="distance matrix file to write (default: standard output)",
    )

    # cluster
    cluster = add_subcommand(
        "cluster", "compute clustering coefficients and a dendrogram from a distance matrix"
    )
    cluster.add_argument(
        "matrix",
        metavar="MATRIX",
        nargs="?",
        default=_STDIO,
        help="distance matrix file (default: standard input)",
    )
    cluster.add_argument(
        "--output-dir",
        metavar="DIR",
        dest="output_dir",
        required=True,
        help="directory to write the clustering, dendrogram and merge files to",
    )

    # stats
    stats = add_subcommand("stats", "pool distance matrices and summarize them")
    stats.add_argument(
        "--matrix",
        metavar="FILE",
        dest="matrices",
        action="append",
        required=True,
        help="distance matrix file; can be passed multiple times",
    )
    stats.add_argument(
        "--clustering",
        metavar="FILE",
        dest="clusterings",
        default=[],
        action="append",
        help="clustering report file; can be passed multiple times",
    )
    stats.add_argument(
        "--bins",
        metavar="COUNT",
        dest="bins",
        type=int,
        default=10,
        help="histogram bins over [0, 1] (default: %(default)s)",
    )
    stats.add_argument(
        "--label",
        metavar="LABEL",
        dest="label",
        default="sample",
        help="row label of the summary tables (default: %(default)s)",
    )
    stats.add_argument(
        "--output-dir", metavar="DIR", dest="output_dir", required=True, help="output directory"
    )

    # experiment
    experiment = add_subcommand("experiment", "run the full pipeline over a network ensemble")
    experiment.add_argument(
        "--config",
        metavar="FILE",
        dest="config",
        help="file of 'key = value' lines; command line flags take precedence",
    )
    model = experiment.add_argument_group("model")
    _add_generation_arguments(model, n_default=None, k_default=None)
    model.add_argument(
        "--bias",
        metavar="P",
        dest="biases",
        type=float,
        action="append",
        help=(
            "bias to generate networks for; can be passed multiple times"
            f" (default: {', '.join(str(bias) for bias in PROTOCOL_BIASES)})"
        ),
    )
    protocol = experiment.add_argument_group("protocol")
    protocol.add_argument(
        "--nets",
        metavar="COUNT",
        dest="networks_per_bias",
        type=int,
        help="networks per bias (default: 50)",
    )
    protocol.add_argument(
        "--samples",
        metavar="COUNT",
        dest="samples_per_network",
        type=int,
        help="random initial states per network (default: 100000)",
    )
    _add_search_arguments(protocol, max_steps_default=None)
    protocol.add_argument(
        "--measure",
        metavar="MEASURE",
        dest="measures",
        type=_measure,
        action="append",
        help="distance measure; can be passed multiple times (default: all)",
    )
    protocol.add_argument(
        "--bins", metavar="COUNT", dest="bins", type=int, help="histogram bins (default: 10)"
    )
    protocol.add_argument("--seed", metavar="SEED", dest="root_seed", type=int, help="root seed")
    execution = experiment.add_argument_group("execution")
    execution.add_argument(
        "--output-dir", metavar="DIR", dest="output_dir", help="output directory"
    )
    execution.add_argument(
        "--workers",
        metavar="COUNT",
        dest="workers",
        type=int,
        help="number of worker processes (default: ${RBN_AC_WORKERS:-1})",
    )
    execution.add_argument(
        "--record-timing",
        dest="record_timing",
        action="store_true",
        default=None,
        help="add wall-clock time to the manifest (makes runs differ byte-wise)",
    )
    execution.add_argument(
        "--yes",
        "-y",
        dest="ask",
        default=True,
        action="store_false",
        help='do not ask before clearing a non-empty output directory, assume reply "yes"',
    )

    config = parser.parse_args(args)

    if config.command == "simulate" and not config.exhaustive and config.seed is None:
        parser.error("argument --seed is required unless --exhaustive is given")

    if config.command == "experiment":
        try:
            config.experiment = _experiment_config_from(config)
        except (ConfigFileError, InvalidExperimentConfig, OSError) as e:
            parser.error(str(e))

    return config


def _experiment_config_from(config) -> ExperimentConfig:
    values = load_config_file(config.config) if config.config else {}
    flags = {
        "root_seed": config.root_seed,
        "n": config.n,
        "k": config.k,
        "biases": tuple(config.biases) if config.biases else None,
        "networks_per_bias": config.networks_per_bias,
        "samples_per_network": config.samples_per_network,
        "max_steps": config.max_steps,
        "memory_cap": config.memory_cap,
        "measures": tuple(config.measures) if config.measures else None,
        "bins": config.bins,
        "output_dir": config.output_dir,
        "workers": config.workers,
        "record_timing": config.record_timing,
    }
    values.update({key: value for key, value in flags.items() if value is not None})
    if "root_seed" not in values:
        raise InvalidExperimentConfig("A seed is required: pass --seed or set root_seed.")
    values.setdefault("workers", workers_from_environment())
    return ExperimentConfig(**values)


def _read_input(path: str) -> str:
    if path == _STDIO:
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _write_output(path: str, text: str) -> None:
    if path == _STDIO:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _source_name(path: str) -> str:
    return "<stdin>" if path == _STDIO else path


def _run_generate(config, messenger):
    os.makedirs(config.output_dir, exist_ok=True)
    for index in range(config.count):
        seed = network_seed(config.seed, config.bias_index, index)
        net = generate_rbn(GenerationParams(n=config.n, k=config.k, bias=config.bias, seed=seed))
        path = os.path.join(config.output_dir, f"network-{index:03d}.txt")
        _write_output(path, format_network(net))
        messenger.tell_progress(f"Wrote {path!r} (seed {seed}).")
    messenger.tell_info(f"{config.count} network file(s) written to {config.output_dir!r}.")


def _run_simulate(config, messenger):
    net = parse_network(_read_input(config.network), source=_source_name(config.network))
    if config.exhaustive:
        attractor_set = exhaustive_attractors(net)
    else:
        search = SearchConfig(max_steps=config.max_steps, memory_cap=config.memory_cap)
        attractor_set = sample_attractors(net, config.samples, search, config.seed)
    messenger.tell_progress(
        f"Found {len(attractor_set)} attractor(s); {attractor_set.not_found} trajectory(s)"
        " exhausted their budget."
    )
    _write_output(config.output, format_attractor_set(attractor_set))


def _run_distances(config, messenger):
    attractor_set = parse_attractor_set(
        _read_input(config.attractors), source=_source_name(config.attractors)
    )
    _, text = matrix_for(attractor_set, config.measure)
    _write_output(config.output, text)


def _run_cluster(config, messenger):
    matrix = parse_distance_matrix(_read_input(config.matrix), source=_source_name(config.matrix))
    analysis = analyze_matrix(matrix)
    if analysis.skipped_for_clustering:
        messenger.tell_info(
            f"No clustering coefficient for {len(matrix)} attractor(s);"
            " at least 3 with two or more neighbors each are needed."
        )
    os.makedirs(config.output_dir, exist_ok=True)
    for name, text in analysis.files.items():
        _write_output(os.path.join(config.output_dir, name), text)


def _run_stats(config, messenger):
    matrices = [
        parse_distance_matrix(_read_input(path), source=path) for path in config.matrices
    ]
    measure = matrices[0].measure
    pooled = pool_distances(matrices)
    os.makedirs(config.output_dir, exist_ok=True)

    if pooled:
        informative = [matrix for matrix in matrices if len(matrix) >= 2]
        per_network = mean_of_summaries([summary(m.upper_triangle()) for m in informative])
        pooled_rows = [(config.label, summary(pooled))]
        per_network_rows = [(config.label, per_network)]
    else:
        messenger.tell_info("No distances to summarize: every matrix has a single attractor.")
        pooled_rows = per_network_rows = []

    _write_output(
        os.path.join(config.output_dir, f"summary-{measure.value}.csv"),
        format_summary_table(pooled_rows, key="label"),
    )
    _write_output(
        os.path.join(config.output_dir, f"summary-{measure.value}-per-network.csv"),
        format_summary_table(per_network_rows, key="label"),
    )

    if config.clusterings:
        coefficients = [
            parse_network_clustering_coefficient(_read_input(path), source=path)
            for path in config.clusterings
        ]
        _write_output(
            os.path.join(config.output_dir, f"clustering-histogram-{measure.value}.csv"),
            format_histogram(clustering_histogram(coefficients, config.bins)),
        )


def _run_experiment(config, messenger):
    confirmation = Confirmation(messenger, ask=config.ask)
    run_experiment(config.experiment, messenger, confirmation)


_RUNNERS = {
    "generate": _run_generate,
    "simulate": _run_simulate,
    "distances": _run_distances,
    "cluster": _run_cluster,
    "stats": _run_stats,
    "experiment": _run_experiment,
}


def _innermost_main(config, messenger):
    _RUNNERS[config.command](config, messenger)


def _inner_main(args=None):
    colorize = "NO_COLOR" not in os.environ
    if colorize:
        colorama.init()

    config = _parse_command_line(colorize=colorize, args=args)

    messenger = Messenger(colorize=colorize, verbose=config.verbose)
    try:
        _innermost_main(config, messenger)
    except NetworkError as e:
        messenger.tell_error(f"Invalid network: {e}")
        sys.exit(EXIT_FAILURE)
    except Exception as e:
        if config.debug:
            traceback.print_exc()
        messenger.tell_error(str(e))
        sys.exit(EXIT_FAILURE)


def main(args=None):
    try:
        _inner_main(args)
    except KeyboardInterrupt:
        sys.exit(128 + SIGINT)


__all__ = ["APP", "main"]
