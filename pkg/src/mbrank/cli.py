"""Command-line interface.

Subcommands:
  rank   rank the columns of a CSV dataset against a target column
  synth  generate a synthetic benchmark dataset plus its truth sidecar
  bench  sweep algorithms over an experiment grid and persist records
  score  score a rank/subset output file against a truth sidecar
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dataio
from .bench import ALGORITHMS, ExperimentConfig, aggregate_records, run_benchmark
from .elimination import EliminationResult, SubsetResult, backward_eliminate, bahsic_eliminate
from .errors import MbrankError
from .evaluation import accuracy, clip_ranking, normalize_ranks
from .kernels import KernelSpec
from .measures import MeasureKind
from .synth import MarkovBlanketTruth, SynthConfig, gen_mb_dataset

_MEASURES = {"f": MeasureKind.M1, "z": MeasureKind.M2, "hsic": MeasureKind.HSIC}


class _CliError(Exception):
    """Carries a user-facing message; always maps to exit code 2."""


def _fail(message: str) -> "_CliError":
    return _CliError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbrank", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    rank = sub.add_parser("rank", help="rank dataset columns against a target")
    rank.add_argument("--data", required=True, help="dataset CSV path")
    rank.add_argument("--target", required=True, help="target column name")
    rank.add_argument("--measure", choices=("f", "z", "hsic"), default="f")
    rank.add_argument("--kernel", choices=("linear", "gaussian"), default="gaussian")
    rank.add_argument("--sigma", type=float, default=None,
                      help="fixed Gaussian bandwidth (default: median heuristic)")
    rank.add_argument("--epsilon", type=float, default=1e-3)
    rank.add_argument("--beta", type=float, default=0.0,
                      help="surviving fraction per batched iteration (0 = one at a time)")
    rank.add_argument("--out", default=None, help="also write the ranking to this file")

    synth = sub.add_parser("synth", help="generate a synthetic dataset + truth sidecar")
    synth.add_argument("--out", required=True, help="dataset CSV path (truth goes to <out>.truth)")
    synth.add_argument("--n-samples", type=int, default=500)
    synth.add_argument("--noise-sd", type=float, default=1.0)
    synth.add_argument("--n-extraneous", type=int, default=10)
    synth.add_argument("--extra-edges", type=int, default=0)
    synth.add_argument("--mb-weight", type=float, default=1.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--spouses-per-child", choices=("one", "both"), default="one")

    bench = sub.add_parser("bench", help="run an experiment sweep")
    bench.add_argument("--config", default=None, help="key=value config file")
    bench.add_argument("--experiment", default=None,
                       help="samples | noise | edges | extraneous | weights")
    bench.add_argument("--algorithms", default=None,
                       help="comma-separated subset of: " + ",".join(ALGORITHMS))
    bench.add_argument("--grid", default=None, help="comma-separated grid values")
    bench.add_argument("--trials", type=int, default=None)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--kernel", choices=("linear", "gaussian"), default=None)
    bench.add_argument("--sigma", type=float, default=None)
    bench.add_argument("--epsilon", type=float, default=None)
    bench.add_argument("--beta", type=float, default=None)
    bench.add_argument("--alpha", type=float, default=None)
    bench.add_argument("--out", default=None, help="records path (aggregates go to <out>.agg.csv)")

    score = sub.add_parser("score", help="score a result file against a truth sidecar")
    score.add_argument("--truth", required=True, help="truth sidecar path")
    score.add_argument("--result", required=True, help="ranking or subset file path")
    return parser


def _cmd_rank(args) -> int:
    if not Path(args.data).is_file():
        raise _fail(f"dataset file not found: {args.data}")
    data = dataio.read_dataset_csv(args.data)
    try:
        target = data.index_of(args.target)
    except KeyError:
        raise _fail(
            f"unknown target {args.target!r}; dataset columns: {', '.join(data.column_names)}"
        ) from None
    spec = KernelSpec(family=args.kernel, sigma=args.sigma, epsilon=args.epsilon)
    kind = _MEASURES[args.measure]
    if kind is MeasureKind.HSIC:
        result = bahsic_eliminate(data, target, spec)
    else:
        result = backward_eliminate(data, target, kind, spec, batch_fraction=args.beta)
    for v, value in zip(result.order, result.step_values):
        print(f"{data.column_names[v]}\t{value!r}")
    if args.out:
        dataio.write_ranking(args.out, data.column_names, result)
    return 0


def _cmd_synth(args) -> int:
    cfg = SynthConfig(
        n_samples=args.n_samples,
        noise_sd=args.noise_sd,
        n_extraneous=args.n_extraneous,
        extra_edges=args.extra_edges,
        mb_weight=args.mb_weight,
        seed=args.seed,
        spouses_per_child=args.spouses_per_child,
    )
    data, truth = gen_mb_dataset(cfg)
    truth_path = dataio.truth_sidecar_path(args.out)
    try:
        dataio.write_dataset_csv(args.out, data)
        dataio.write_truth(
            truth_path,
            data.column_names[truth.target],
            [data.column_names[v] for v in sorted(truth.mb)],
        )
    except OSError as exc:
        raise _fail(f"cannot write output: {exc}") from None
    print(f"wrote {args.out} ({data.n_samples} rows, {data.n_columns} columns) and {truth_path}")
    return 0


_BENCH_KEYS = (
    "experiment", "algorithms", "grid", "trials", "seed",
    "kernel", "sigma", "epsilon", "beta", "alpha", "out",
)


def _bench_config(args) -> ExperimentConfig:
    settings: dict[str, str] = {}
    if args.config:
        if not Path(args.config).is_file():
            raise _fail(f"config file not found: {args.config}")
        file_settings = dataio.read_config_file(args.config)
        unknown = sorted(set(file_settings) - set(_BENCH_KEYS))
        if unknown:
            raise _fail(f"unknown config keys: {', '.join(unknown)}")
        settings.update(file_settings)
    for key in _BENCH_KEYS:
        value = getattr(args, key)
        if value is not None:
            settings[key] = value if isinstance(value, str) else repr(value)
    for required in ("experiment", "algorithms", "grid", "out"):
        if not settings.get(required):
            raise _fail(f"bench needs {required}= in the config file or --{required}")
    try:
        return ExperimentConfig(
            experiment=settings["experiment"],
            algorithms=tuple(a for a in settings["algorithms"].split(",") if a),
            grid=tuple(float(v) for v in settings["grid"].split(",") if v),
            trials=int(settings.get("trials", "1")),
            seed=int(settings.get("seed", "0")),
            kernel=settings.get("kernel", "linear"),
            sigma=float(settings["sigma"]) if settings.get("sigma") else None,
            epsilon=float(settings.get("epsilon", "1e-3")),
            beta=float(settings.get("beta", "0.0")),
            alpha=float(settings.get("alpha", "0.05")),
            out=settings["out"],
        )
    except ValueError as exc:
        raise _fail(f"bad bench configuration: {exc}") from None


def _cmd_bench(args) -> int:
    cfg = _bench_config(args)
    records = run_benchmark(cfg)
    try:
        dataio.write_records(cfg.out, records)
        dataio.write_aggregates_csv(str(cfg.out) + ".agg.csv", aggregate_records(records))
    except OSError as exc:
        raise _fail(f"cannot write output: {exc}") from None
    n_errors = sum(1 for r in records if r.metric == "error")
    print(f"wrote {len(records)} records to {cfg.out} ({n_errors} error rows)")
    return 1 if n_errors else 0


def _cmd_score(args) -> int:
    for path in (args.truth, args.result):
        if not Path(path).is_file():
            raise _fail(f"file not found: {path}")
    target_name, mb_names = dataio.read_truth(args.truth)
    result = dataio.read_result_file(args.result)

    if "members" in result:
        names = sorted(set(result["members"]) | set(mb_names))
        index = {name: i for i, name in enumerate(names)}
        truth = MarkovBlanketTruth(target=len(names), mb=frozenset(index[n] for n in mb_names))
        subset = SubsetResult(members=frozenset(index[n] for n in result["members"]))
        print(f"accuracy={accuracy(subset, truth)!r}")
        return 0

    order_names = result["order"]
    if target_name in order_names:
        raise _fail(f"target {target_name!r} appears in the ranking")
    missing = sorted(set(mb_names) - set(order_names))
    if missing:
        raise _fail(f"blanket names missing from the ranking: {', '.join(missing)}")
    index = {name: i for i, name in enumerate(order_names)}
    truth = MarkovBlanketTruth(target=len(order_names), mb=frozenset(index[n] for n in mb_names))
    order = tuple(index[n] for n in order_names)
    elim = EliminationResult(
        order=order,
        step_values=tuple(result.get("step_values") or [0.0] * len(order)),
        direction=result["direction"],
    )
    ranking = normalize_ranks(
        elim.order if elim.direction == "backward" else elim.order[::-1], truth
    )
    clipped = clip_ranking(elim, len(truth.mb))
    print(f"mean_mb_rank={ranking.mean_mb_rank!r}")
    print(f"accuracy={accuracy(clipped, truth)!r}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"rank": _cmd_rank, "synth": _cmd_synth, "bench": _cmd_bench, "score": _cmd_score}
    try:
        return handlers[args.command](args)
    except (_CliError, MbrankError, OSError, ValueError) as exc:
        print(f"mbrank {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
