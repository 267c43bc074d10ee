#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Click command-line interface for fastfir-polymul.

Exit status is 0 on success, 1 when a verification or a latency check fails
and 2 for invalid usage or input.
"""

import csv
import functools
import json
import logging
import sys
import time

import click

from fastfir_polymul.config import (
    BENCH_ARCHITECTURES,
    BENCH_CSV_COLUMNS,
    BENCH_LENGTHS,
    BENCH_STREAM_LENGTHS,
    FASTFIR_DEFAULT_SEED,
    FASTFIR_DEFAULT_TRIALS,
    FASTFIR_LOG_LEVEL,
    MULTIPLICATION_ENGINES,
    SABER_Q,
)
from fastfir_polymul.errors import (
    DecompositionError,
    LatencyMismatchError,
    ParameterDomainError,
    PolyMulError,
)
from fastfir_polymul.fast_mult import (
    AlgorithmKind,
    MultAlgorithm,
    count_coeff_mults,
    count_postproc_addsubs,
    measure_ops,
    multiply,
)
from fastfir_polymul.ring_core import (
    check_same_ring,
    make_params,
    poly_from_dict,
    poly_to_dict,
    random_poly,
    schoolbook_mul,
)
from fastfir_polymul.saber_bench import architecture_name, simulate_stream
from fastfir_polymul.schemas import VERIFY_SUITES, PolySchema, RunConfigSchema
from fastfir_polymul.systolic_sim import predicted_latency, write_trace
from fastfir_polymul.utils import canonical_json, configure_logging, make_rng
from fastfir_polymul.verification import SUITES, counterexample_json, run_suites

EXIT_FAILURE = 1
EXIT_USAGE = 2


def handle_errors(func):
    """Map library errors onto the exit status of the command."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except LatencyMismatchError as error:
            click.echo(click.style(str(error), fg="red"), err=True)
            sys.exit(EXIT_FAILURE)
        except (ParameterDomainError, DecompositionError) as error:
            click.echo(click.style("Invalid input: {}".format(error), fg="red"), err=True)
            sys.exit(EXIT_USAGE)
        except PolyMulError as error:
            logging.error(str(error), exc_info=True)
            sys.exit(EXIT_FAILURE)

    return wrapper


def load_run_config(**values):
    """Validate command options, exiting with the usage status on errors."""
    values = {key: value for key, value in values.items() if value is not None}
    data, errors = RunConfigSchema(strict=False).load(values)
    if errors:
        click.echo(
            click.style(
                "Invalid options: {}".format(json.dumps(errors, sort_keys=True)), fg="red"
            ),
            err=True,
        )
        sys.exit(EXIT_USAGE)
    return data


def load_poly_file(stream):
    """Read and validate one polynomial file."""
    try:
        raw = json.load(stream)
    except ValueError as error:
        raise ParameterDomainError(f"{stream.name} is not valid JSON: {error}")
    data, errors = PolySchema(strict=False).load(raw)
    if errors:
        raise ParameterDomainError(f"{stream.name}: {json.dumps(errors, sort_keys=True)}")
    return poly_from_dict(data)


def parse_factorization(text):
    """Turn ``2x3`` into ``[2, 3]``."""
    if text is None:
        return None
    try:
        return [int(factor) for factor in text.lower().split("x")]
    except ValueError:
        raise click.BadParameter(f"expected factors such as 2x3, got {text!r}")


@click.group()
@click.option(
    "--log-level",
    default=FASTFIR_LOG_LEVEL,
    show_default=True,
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Verbosity of the log written to standard error.",
)
def cli(log_level):
    """Negacyclic polynomial multipliers and their cycle-accurate datapaths."""
    configure_logging(log_level)


@cli.command(name="multiply")
@click.argument("a_file", type=click.File("r"))
@click.argument("b_file", type=click.File("r"))
@click.option("--engine", default="schoolbook", show_default=True, help="Multiplication algorithm.")
@click.option("--output", "-o", type=click.File("w"), default="-", help="Product file.")
@handle_errors
def multiply_cmd(a_file, b_file, engine, output):
    """Multiply two polynomial files and write the product file."""
    config = load_run_config(
        subcommand="multiply", engine=engine, input_paths=[a_file.name, b_file.name]
    )
    A, B = load_poly_file(a_file), load_poly_file(b_file)
    check_same_ring(A, B)
    product = multiply(A, B, config["engine"])
    output.write(canonical_json(poly_to_dict(product)) + "\n")
    logging.debug("Product written to {}.".format(getattr(output, "name", "-")))


@cli.command()
@click.option("--seed", type=int, default=FASTFIR_DEFAULT_SEED, show_default=True)
@click.option(
    "--trials",
    type=int,
    default=FASTFIR_DEFAULT_TRIALS,
    show_default=True,
    help="Random draws per configuration.",
)
@click.option(
    "--suite", type=click.Choice(VERIFY_SUITES), default="all", show_default=True
)
@handle_errors
def verify(seed, trials, suite):
    """Run the randomised property suites."""
    config = load_run_config(subcommand="verify", seed=seed, trials=trials, suite=suite)
    names = list(SUITES) if config["suite"] == "all" else [config["suite"]]
    results = run_suites(names, config["seed"], config["trials"])
    for result in results:
        click.echo(result.summary())
    failed = [result for result in results if not result.passed]
    if failed:
        click.echo(counterexample_json(failed[0]))
        sys.exit(EXIT_FAILURE)
    click.echo(
        click.style(
            "All {} checks passed.".format(sum(r.checks for r in results)), fg="green"
        )
    )


@cli.command()
@click.option("--n", "n", type=int, default=256, show_default=True, help="Polynomial length.")
@click.option("--q", "q", type=int, default=SABER_Q, show_default=True, help="Modulus.")
@click.option("--M", "M", type=int, default=None, help="Parallelism, 1 is the FIR array.")
@click.option("--factorization", default=None, help="Explicit factorization such as 2x3.")
@click.option("--L", "L", type=int, default=1, show_default=True, help="Streamed products.")
@click.option("--seed", type=int, default=FASTFIR_DEFAULT_SEED, show_default=True)
@click.option("--trace", type=click.File("w"), default=None, help="JSON-lines trace file.")
@click.option("--frequency-mhz", type=float, default=None, help="Clock for latency in us.")
@click.option("--output", "-o", type=click.File("w"), default="-", help="Report file.")
@handle_errors
def simulate(n, q, M, factorization, L, seed, trace, frequency_mhz, output):
    """Stream random products through a timed datapath."""
    config = load_run_config(
        subcommand="simulate",
        n=n,
        q=q,
        M=M,
        factorization=parse_factorization(factorization),
        L=L,
        seed=seed,
        frequency_mhz=frequency_mhz,
    )
    if config["factorization"]:
        algorithm = MultAlgorithm.fast(config["factorization"])
    else:
        algorithm = MultAlgorithm(AlgorithmKind.SCHOOLBOOK)
    params = make_params(config["n"], config["q"])
    rng = make_rng(config["seed"])
    B = random_poly(params, rng)
    As = [random_poly(params, rng) for _ in range(config["L"])]

    outputs, report = simulate_stream(algorithm, B, As)
    if outputs != [schoolbook_mul(A, B) for A in As]:
        raise PolyMulError(f"{architecture_name(algorithm)} datapath computed a wrong product.")
    predicted = predicted_latency(algorithm, params.n, config["L"])

    data = report.to_dict()
    data.update({"arch": architecture_name(algorithm), "predicted": predicted})
    summary = (
        f"n={report.n} M={report.M} L={report.L} "
        f"latency={report.total_latency} predicted={predicted}"
    )
    if config["frequency_mhz"] is not None:
        data["latency_us"] = report.latency_us(config["frequency_mhz"])
        summary += f" latency_us={data['latency_us']:g}"
    output.write(canonical_json(data) + "\n")
    if trace is not None:
        write_trace(report.trace, trace)
    click.echo(summary)
    if report.total_latency != predicted:
        raise LatencyMismatchError(report.total_latency, predicted)


def bench_rows(seed, microbench_trials):
    """Yield one CSV row per length, architecture and stream length."""
    rng = make_rng(seed)
    for n in BENCH_LENGTHS:
        params = make_params(n, SABER_Q)
        if microbench_trials:
            microbench(params, rng, microbench_trials)
        for arch in BENCH_ARCHITECTURES:
            algorithm = MultAlgorithm.parse(arch)
            try:
                algorithm.check_length(n)
            except DecompositionError:
                logging.info(
                    "Skipping {0} at n={1}: {1} is not divisible by {2}.".format(
                        arch, n, algorithm.M
                    )
                )
                continue
            A, B = random_poly(params, rng), random_poly(params, rng)
            if algorithm.kind == AlgorithmKind.SCHOOLBOOK:
                postproc = 0
            elif algorithm.factorization == (2,):
                postproc = count_postproc_addsubs(algorithm, n)
            else:
                postproc = measure_ops(algorithm, A, B).postproc_addsubs
            for L in BENCH_STREAM_LENGTHS:
                As = [random_poly(params, rng) for _ in range(L)]
                _, report = simulate_stream(algorithm, B, As)
                predicted = predicted_latency(algorithm, n, L)
                logging.info(
                    "{} n={} L={}: predicted latency {}, utilization {:.4f}.".format(
                        arch, n, L, predicted, report.utilization
                    )
                )
                if report.total_latency != predicted:
                    raise LatencyMismatchError(report.total_latency, predicted)
                yield {
                    "arch": arch,
                    "n": n,
                    "M": report.M,
                    "L": L,
                    "coeff_mults": count_coeff_mults(algorithm, n),
                    "postproc_addsubs": postproc,
                    "response_time": report.response_time,
                    "total_latency": report.total_latency,
                    "throughput": f"{report.throughput:.4f}",
                    "census_multipliers": report.census["mult"],
                }


def microbench(params, rng, trials):
    """Log the mean wall time of every functional engine at length ``n``."""
    A, B = random_poly(params, rng), random_poly(params, rng)
    for engine in MULTIPLICATION_ENGINES:
        try:
            MultAlgorithm.parse(engine).check_length(params.n)
        except DecompositionError:
            continue
        start = time.perf_counter()
        for _ in range(trials):
            multiply(A, B, engine)
        elapsed = (time.perf_counter() - start) / trials
        logging.info(
            "{} n={}: {:.1f} us per multiplication.".format(engine, params.n, elapsed * 1e6)
        )


@cli.command()
@click.option("--seed", type=int, default=FASTFIR_DEFAULT_SEED, show_default=True)
@click.option(
    "--microbench-trials",
    type=int,
    default=0,
    show_default=True,
    help="Timed multiplications per engine, 0 disables the timing log.",
)
@click.option("--output", "-o", type=click.File("w"), default="-", help="CSV file.")
@handle_errors
def bench(seed, microbench_trials, output):
    """Write the operation-count and latency table as CSV."""
    config = load_run_config(subcommand="bench", seed=seed, output_format="csv")
    if microbench_trials < 0:
        raise click.BadParameter("must be >= 0", param_hint="--microbench-trials")
    writer = csv.DictWriter(output, fieldnames=BENCH_CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in bench_rows(config["seed"], microbench_trials):
        writer.writerow(row)
