"""Command-line surface: encode, enumerate, analyze, simulate, emit.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical warning
escalated under --strict.
"""

from __future__ import annotations

import argparse
import csv
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .dependence import (
    ClassSeries,
    DependenceReport,
    analyze_pair,
    classical_dependence,
    comparison_value,
    total_score,
)
from .exceptions import DataFormatError, NumericalWarning
from .io import (
    AnalysisConfig,
    classify_peak,
    load_class_matrix,
    pair_record,
    pattern_label,
    write_pairs_long,
    write_plot_data,
    write_spatial_report,
    write_symmetric_matrix,
    PAIR_COLUMNS,
)
from .metric import SCHEMES, WeightScheme, get_scheme, scheme_for_length
from .patterns import TiePolicy, encode_pattern, encode_permutation, enumerate_patterns, fubini
from .simulate import IngarchSpec, simulate_ingarch
from .spatial import ClassMatrix, analyze_spatial


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract wants 1
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve_scheme(name: str, n: int, classical: bool = False) -> WeightScheme:
    if name == "auto":
        return scheme_for_length(n, classical=classical)
    return get_scheme(name)


def _tie_policy(name: str, seed: int) -> TiePolicy:
    if name == "randomize":
        return TiePolicy.randomize(seed)
    return TiePolicy(name)


def _pair_seed(master: int, label_a: str, label_b: str) -> int:
    digest = np.random.SeedSequence(
        [master, *(ord(c) for c in f"{label_a}|{label_b}")]
    )
    return int(digest.generate_state(1)[0])


# ---------------------------------------------------------------------------
# drivers
# ---------------------------------------------------------------------------

def run_pairwise(
    matrix: ClassMatrix, config: AnalysisConfig, jobs: int = 1
) -> tuple[list[str], dict[str, np.ndarray], list[DependenceReport]]:
    """Analyze every unordered gauge pair; symmetric matrices + long records.

    Per-pair seeds are derived from the master seed and the pair labels,
    so results do not depend on evaluation order or the number of jobs.
    """
    labels = list(config.gauges) if config.gauges else list(matrix.gauges)
    if len(labels) < 2:
        raise ValueError("pairwise analysis needs at least 2 gauges")
    scheme = _resolve_scheme(config.scheme, config.n)
    series = {g: ClassSeries(matrix.column(g), g) for g in labels}
    size = len(labels)
    score = np.ones((size, size))
    comparison = np.zeros((size, size))
    coefficient = np.ones((size, size))
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]

    def one(pair: tuple[int, int]) -> DependenceReport:
        i, j = pair
        return analyze_pair(
            series[labels[i]],
            series[labels[j]],
            config.n,
            stride=config.stride,
            scheme=scheme,
            level=config.level,
            kernel=config.kernel,
            bandwidth=config.bandwidth,
            block=config.block,
            replicates=config.replicates,
            seed=_pair_seed(config.seed, labels[i], labels[j]),
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(one, pairs))
    else:
        reports = [one(p) for p in pairs]

    for (i, j), rep in zip(pairs, reports):
        est = rep.estimates
        score[i, j] = score[j, i] = est.total_score
        comparison[i, j] = comparison[j, i] = est.score_comparison
        coefficient[i, j] = coefficient[j, i] = est.coefficient
    for i, g in enumerate(labels):
        comparison[i, i] = comparison_value(series[g], series[g], config.n, config.stride)

    matrices = {"score": score, "comparison": comparison, "coefficient": coefficient}
    return labels, matrices, reports


BENCHMARK_APPROACHES = ("generalized", "randomized", "first_appearance")


def run_benchmark_data(
    matrix: ClassMatrix, config: AnalysisConfig, lengths: Sequence[int] = (4, 6)
) -> list[dict]:
    """Tie-handling comparison over all gauge pairs of a data matrix."""
    labels = list(config.gauges) if config.gauges else list(matrix.gauges)
    series = [matrix.column(g) for g in labels]
    rows = []
    for n in lengths:
        scheme = _resolve_scheme(config.scheme, n)
        per_method: dict[str, list[float]] = {m: [] for m in BENCHMARK_APPROACHES}
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                x, y = series[i], series[j]
                per_method["generalized"].append(
                    total_score(x, y, n, config.stride, scheme)[0]
                )
                seed = _pair_seed(config.seed, labels[i], labels[j])
                rand = classical_dependence(
                    x, y, n, config.stride, TiePolicy.randomize(seed),
                    scheme_for_length(n, classical=True),
                )
                per_method["randomized"].append(rand.total_score)
                first = classical_dependence(
                    x, y, n, config.stride, TiePolicy.first_appearance(),
                    scheme_for_length(n, classical=True),
                )
                per_method["first_appearance"].append(first.total_score)
        for method in BENCHMARK_APPROACHES:
            vals = np.array(per_method[method])
            rows.append({
                "approach": method, "n": n,
                "mean": float(vals.mean()), "min": float(vals.min()), "max": float(vals.max()),
            })
    return rows


def run_benchmark_simulated(
    spec: IngarchSpec, config: AnalysisConfig,
    replications: int, lengths: Sequence[int] = (4, 6),
) -> list[dict]:
    """Tie-handling comparison over independent simulated stream pairs."""
    rows = []
    children = np.random.SeedSequence(spec.seed).spawn(replications)
    streams = []
    for child in children:
        sx, sy = child.spawn(2)
        streams.append((
            simulate_ingarch(spec, np.random.default_rng(sx)),
            simulate_ingarch(spec, np.random.default_rng(sy)),
        ))
    for n in lengths:
        scheme = _resolve_scheme(config.scheme, n)
        per_method: dict[str, list[float]] = {m: [] for m in BENCHMARK_APPROACHES}
        for k, (x, y) in enumerate(streams):
            per_method["generalized"].append(
                total_score(x, y, n, config.stride, scheme)[0]
            )
            rand = classical_dependence(
                x, y, n, config.stride, TiePolicy.randomize(config.seed + 7919 * k + n),
                scheme_for_length(n, classical=True),
            )
            per_method["randomized"].append(rand.total_score)
            first = classical_dependence(
                x, y, n, config.stride, TiePolicy.first_appearance(),
                scheme_for_length(n, classical=True),
            )
            per_method["first_appearance"].append(first.total_score)
        for method in BENCHMARK_APPROACHES:
            vals = np.array(per_method[method])
            rows.append({
                "approach": method, "n": n,
                "mean": float(vals.mean()), "min": float(vals.min()), "max": float(vals.max()),
            })
    return rows


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_enumerate(args) -> int:
    table = enumerate_patterns(args.n)
    if not args.count_only:
        for entry in table.entries:
            print(pattern_label(entry))
    print(f"patterns of length {args.n}: {fubini(args.n)}")
    return 0


def _cmd_encode(args) -> int:
    window = [float(v) for v in args.values]
    if args.tie_policy is None:
        print(pattern_label(encode_pattern(window)))
    else:
        perm = encode_permutation(window, _tie_policy(args.tie_policy, args.seed))
        print("absent" if perm is None else pattern_label(perm))
    return 0


def _config_from(args) -> AnalysisConfig:
    return AnalysisConfig(
        n=args.n,
        stride=args.stride,
        scheme=args.scheme,
        tie_policy=args.tie_policy or "first_appearance",
        level=args.level,
        kernel=args.kernel,
        bandwidth=args.bandwidth,
        block=args.block,
        replicates=args.replicates,
        seed=args.seed,
        gauges=tuple(args.gauges.split(",")) if args.gauges else (),
    )


def _cmd_pairwise(args) -> int:
    matrix = load_class_matrix(args.data)
    config = _config_from(args)
    labels, matrices, reports = run_pairwise(matrix, config, jobs=args.jobs)
    if args.out:
        for name, values in matrices.items():
            write_symmetric_matrix(labels, values, f"{args.out}_{name}.csv")
        write_pairs_long(reports, f"{args.out}_pairs.csv")
        print(f"wrote {args.out}_{{score,comparison,coefficient,pairs}}.csv")
    if args.format == "matrix":
        print("total score matrix:")
        width = max(len(g) for g in labels) + 1
        print(" " * width + " ".join(f"{g:>8}" for g in labels))
        for g, row in zip(labels, matrices["score"]):
            print(f"{g:<{width}}" + " ".join(f"{v:8.4f}" for v in row))
    else:
        print(",".join(PAIR_COLUMNS))
        for rep in reports:
            print(",".join(str(c) for c in pair_record(rep)))
    return 0


def _cmd_spatial(args) -> int:
    matrix = load_class_matrix(args.data)
    gauges = tuple(args.gauges.split(",")) if args.gauges else matrix.gauges
    report = analyze_spatial(
        matrix, gauges, alpha=args.alpha, include_zero_observed=args.include_zero
    )
    if args.out:
        write_spatial_report(report, args.out)
        print(f"wrote {args.out}")
    print(f"{report.num_events} events over gauges {','.join(report.gauges)}")
    print(f"{'pattern':<{3 * len(gauges) + 4}} {'observed%':>9} {'baseline%':>9} {'z':>7}  significant")
    for rec in report.records:
        z_text = "-" if rec.z is None else f"{rec.z:7.2f}"
        note = " impossible-under-baseline" if rec.impossible_under_baseline else ""
        flag = "yes" if rec.significant else "no"
        print(
            f"{pattern_label(rec.pattern):<{3 * len(gauges) + 4}} "
            f"{100 * rec.observed:9.2f} {100 * rec.baseline:9.2f} {z_text:>7}  {flag}{note}"
        )
    return 0


def _cmd_benchmark(args) -> int:
    config = _config_from(args)
    lengths = tuple(int(v) for v in args.lengths.split(","))
    if args.data:
        rows = run_benchmark_data(load_class_matrix(args.data), config, lengths)
    else:
        spec = IngarchSpec(
            beta0=args.beta0,
            beta=tuple(float(b) for b in args.beta.split(",")) if args.beta else (),
            alpha=tuple(float(a) for a in args.alpha.split(",")) if args.alpha else (),
            length=args.length,
            seed=args.seed,
            burn_in=args.burn_in,
        )
        rows = run_benchmark_simulated(spec, config, args.replications, lengths)
    print(f"{'approach':<18} {'n':>2} {'mean%':>7} {'min%':>7} {'max%':>7}")
    for row in rows:
        print(
            f"{row['approach']:<18} {row['n']:>2} "
            f"{100 * row['mean']:7.1f} {100 * row['min']:7.1f} {100 * row['max']:7.1f}"
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["approach", "n", "mean", "min", "max"])
            for row in rows:
                writer.writerow([
                    row["approach"], row["n"],
                    format(row["mean"], ".10g"), format(row["min"], ".10g"),
                    format(row["max"], ".10g"),
                ])
        print(f"wrote {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    spec = IngarchSpec(
        beta0=args.beta0,
        beta=tuple(float(b) for b in args.beta.split(",")) if args.beta else (),
        alpha=tuple(float(a) for a in args.alpha.split(",")) if args.alpha else (),
        length=args.length,
        seed=args.seed,
        burn_in=args.burn_in,
    )
    counts = simulate_ingarch(spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["index", "count"])
            for i, c in enumerate(counts, start=1):
                writer.writerow([i, int(c)])
        print(f"wrote {args.out} ({len(counts)} values)")
    else:
        print(" ".join(str(int(c)) for c in counts))
    return 0


def _cmd_classify(args) -> int:
    for p in args.probabilities:
        print(f"{p} -> class {classify_peak(float(p))}")
    return 0


def _cmd_plot_data(args) -> int:
    matrix = load_class_matrix(args.data)
    gauges = tuple(args.gauges.split(",")) if args.gauges else matrix.gauges
    write_plot_data(matrix, gauges, args.out)
    print(f"wrote {args.out} ({matrix.num_events} rows, {len(gauges)} gauges)")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--n", type=int, default=4, help="pattern length (default 4)")
    shared.add_argument("--stride", type=int, default=1, help="window step (default 1)")
    shared.add_argument(
        "--scheme", default="auto", choices=["auto", *sorted(SCHEMES)],
        help="weight scheme (default: auto by length)",
    )
    shared.add_argument(
        "--tie-policy", choices=["skip", "randomize", "first_appearance"], default=None,
        help="classical tie policy (baselines only)",
    )
    shared.add_argument("--seed", type=int, default=0, help="master seed")
    shared.add_argument("--level", type=float, default=0.95, help="confidence level")
    shared.add_argument(
        "--kernel", default="bartlett", choices=["bartlett", "parzen", "truncated"],
        help="long-run variance kernel",
    )
    shared.add_argument("--bandwidth", type=float, default=None, help="kernel bandwidth")
    shared.add_argument("--block", type=int, default=None, help="bootstrap block length")
    shared.add_argument("--replicates", type=int, default=1000, help="bootstrap replicates")
    shared.add_argument("--gauges", default=None, help="comma-separated gauge subset")
    shared.add_argument(
        "--format", choices=["matrix", "long"], default="matrix", help="stdout layout"
    )

    parser = _Parser(prog="ordpat", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ordpat {__version__}")
    parser.add_argument(
        "--strict", action="store_true",
        help="exit with status 3 if any numerical warning was raised",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[shared], help="list all patterns of a length")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("encode", parents=[shared], help="encode one window")
    p.add_argument("values", nargs="+", help="window values")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("pairwise", parents=[shared], help="dependence for every gauge pair")
    p.add_argument("--data", required=True, help="class matrix CSV")
    p.add_argument("--out", default=None, help="output file prefix")
    p.add_argument("--jobs", type=int, default=1, help="parallel pair jobs")
    p.set_defaults(func=_cmd_pairwise)

    p = sub.add_parser("spatial", parents=[shared], help="cross-sectional pattern report")
    p.add_argument("--data", required=True, help="class matrix CSV")
    p.add_argument("--alpha", type=float, default=0.05, help="significance level")
    p.add_argument("--include-zero", action="store_true", help="report non-observed patterns")
    p.add_argument("--out", default=None, help="report CSV path")
    p.set_defaults(func=_cmd_spatial)

    p = sub.add_parser("benchmark", parents=[shared], help="tie-handling comparison table")
    p.add_argument("--data", default=None, help="class matrix CSV (else simulate)")
    p.add_argument("--lengths", default="4,6", help="pattern lengths (default 4,6)")
    p.add_argument("--beta0", type=float, default=2.0)
    p.add_argument("--beta", default="0.3", help="comma list of count-feedback coefficients")
    p.add_argument("--alpha", default="", help="comma list of mean-feedback coefficients")
    p.add_argument("--length", type=int, default=1000, help="simulated series length")
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--replications", type=int, default=100)
    p.add_argument("--out", default=None, help="summary CSV path")
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("simulate", parents=[shared], help="simulate a count process")
    p.add_argument("--beta0", type=float, default=2.0)
    p.add_argument("--beta", default="0.3", help="comma list of count-feedback coefficients")
    p.add_argument("--alpha", default="", help="comma list of mean-feedback coefficients")
    p.add_argument("--length", type=int, default=1000)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--out", default=None, help="counts CSV path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("classify", parents=[shared], help="flood class of non-exceedance probabilities")
    p.add_argument("probabilities", nargs="+", help="values in [0, 1]")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("plot-data", parents=[shared], help="emit per-gauge series for plotting")
    p.add_argument("--data", required=True, help="class matrix CSV")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_plot_data)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            status = args.func(args)
        except DataFormatError as exc:
            print(f"ordpat: data error: {exc}", file=sys.stderr)
            return 2
        except (ValueError, KeyError, OSError) as exc:
            print(f"ordpat: error: {exc}", file=sys.stderr)
            return 2
    numerical = [w for w in caught if issubclass(w.category, NumericalWarning)]
    for w in numerical:
        print(f"ordpat: warning: {w.message}", file=sys.stderr)
    if args.strict and numerical:
        print("ordpat: numerical warnings escalated (--strict)", file=sys.stderr)
        return 3
    return status


if __name__ == "__main__":
    sys.exit(main())
