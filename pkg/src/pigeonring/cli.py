"""Command-line interface.

Subcommands: hamming, set, string (thresholded search over text
datasets), analyze (candidate-probability curves), sweep (per-chain-
length comparison table), verify-theorems (exhaustive small-scale
check of the chain-existence guarantees).

Results files carry one line per query: the query index, a tab, then
the matching object labels (x1, x2, ... by 1-based data line) sorted
and space-separated.  Stats files carry one fixed-field-order record
per query; wall times are omitted unless --times is given so repeated
runs are byte-identical.

Exit codes: 0 success, 2 configuration error, 3 data-format error.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import analysis
from . import io as pio
from .hamming import HammingIndex, default_part_count
from .io import DataFormatError
from .ring import AT_MOST, FIXED, INTRED, VARIABLE, ThresholdSpec, verify_theorems_exhaustive
from .setsim import SetIndex
from .strsim import StringIndex

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3


class ConfigError(ValueError):
    pass


def _label(oid: int) -> str:
    return f"x{oid + 1}"


def _write_lines(path, lines):
    text = "".join(line + "\n" for line in lines)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _workers() -> int:
    raw = os.environ.get("PIGEONRING_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"PIGEONRING_THREADS={raw!r} is not an integer")


def _run_queries(fn, queries):
    """Run fn over all queries, preserving input order in the output."""
    workers = _workers()
    if workers == 1:
        return [fn(q) for q in queries]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, queries))


def _emit_run(args, outcomes):
    results_lines = []
    stats_lines = []
    for qi, (ids, stats) in enumerate(outcomes):
        results_lines.append(f"{qi}\t" + " ".join(_label(i) for i in ids))
        stats_lines.append(stats.record(qi, include_times=args.times))
    _write_lines(args.out, results_lines)
    if args.stats:
        _write_lines(args.stats, stats_lines)


def _parse_thresholds(raw):
    try:
        return tuple(int(x) for x in raw.split(","))
    except ValueError:
        raise ConfigError(f"--thresholds must be a comma-separated integer list, got {raw!r}")


def _hamming_spec(args, d):
    """(spec, mode, parts) resolved from the flags."""
    m = args.parts if args.parts is not None else default_part_count(d)
    if not 1 <= m <= d:
        raise ConfigError(f"--parts {m} outside [1..{d}]")
    t = _parse_thresholds(args.thresholds) if args.thresholds else None
    if t is not None and len(t) != m:
        raise ConfigError(f"--thresholds has {len(t)} entries, --parts is {m}")
    if args.mode == "fixed":
        if t is not None:
            raise ConfigError("--thresholds is not meaningful in fixed mode")
        return None, FIXED, m
    if args.mode == "variable":
        if t is None:
            raise ConfigError("variable mode requires --thresholds")
        if sum(t) != args.tau:
            raise ConfigError(f"variable thresholds must sum to tau={args.tau}, got {sum(t)}")
        return ThresholdSpec.variable(t, AT_MOST), VARIABLE, m
    # intred
    if t is not None:
        if sum(t) != args.tau - m + 1:
            raise ConfigError(
                f"integer-reduction thresholds must sum to tau-m+1={args.tau - m + 1}, got {sum(t)}"
            )
        return ThresholdSpec.integer_reduction(t, AT_MOST), INTRED, m
    return None, INTRED, m


def _cmd_hamming(args):
    data = pio.read_vectors(args.data)
    queries = pio.read_vectors(args.queries)
    if data.size and queries.size and data.shape[1] != queries.shape[1]:
        raise ConfigError(
            f"data dimension {data.shape[1]} != query dimension {queries.shape[1]}"
        )
    spec, mode, m = _hamming_spec(args, data.shape[1] if data.size else 1)
    index = HammingIndex(data)
    fn = lambda q: index.query(q, args.tau, args.chain, mode=mode, spec=spec, parts=m)
    _emit_run(args, _run_queries(fn, list(queries)))
    return EXIT_OK


def _cmd_set(args):
    if (args.tau is None) == (args.jaccard is None):
        raise ConfigError("give exactly one of --tau (overlap) or --jaccard")
    records = pio.read_sets(args.data)
    queries = pio.read_sets(args.queries)
    m = args.parts if args.parts is not None else 5
    if args.jaccard is not None:
        try:
            tau_j = Fraction(args.jaccard)
        except ValueError:
            raise ConfigError(f"--jaccard {args.jaccard!r} is not a number")
        if not 0 < tau_j <= 1:
            raise ConfigError("--jaccard must be in (0, 1]")
        index = SetIndex(records, m, tau_j=tau_j)
    else:
        if args.tau < 1:
            raise ConfigError("--tau (overlap) must be positive")
        index = SetIndex(records, m, tau_ov=args.tau)
    fn = lambda q: index.query(q, args.chain)
    _emit_run(args, _run_queries(fn, queries))
    return EXIT_OK


def _cmd_string(args):
    strings = pio.read_strings(args.data)
    queries = pio.read_strings(args.queries)
    if args.tau is None or args.tau < 0:
        raise ConfigError("--tau must be a nonnegative edit-distance bound")
    index = StringIndex(strings, tau_max=args.tau, kappa=args.kappa)
    chain = min(args.chain, args.tau + 1)
    fn = lambda q: index.query(q, args.tau, chain)
    _emit_run(args, _run_queries(fn, queries))
    return EXIT_OK


def _parse_pdf(raw):
    if raw.startswith("uniform:"):
        try:
            omega = int(raw.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad pmf spec {raw!r}")
        if omega < 0:
            raise ConfigError("uniform pmf needs a nonnegative bound")
        return analysis.DiscretePdf.uniform(0, omega)
    try:
        weights = [Fraction(x) for x in raw.split(",")]
    except ValueError:
        raise ConfigError(f"bad pmf spec {raw!r}")
    total = sum(weights)
    if total <= 0:
        raise ConfigError("pmf weights must have positive sum")
    return analysis.DiscretePdf(tuple(w / total for w in weights))


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _cmd_analyze(args):
    pdf = _parse_pdf(args.pdf)
    m, tau = args.m, args.tau
    if m < 1 or tau < 0:
        raise ConfigError("need m >= 1 and tau >= 0")
    l_max = args.l_max if args.l_max is not None else m
    if not 1 <= l_max <= m:
        raise ConfigError(f"--l-max {l_max} outside [1..{m}]")
    if args.mc_samples < 0:
        raise ConfigError("--mc-samples must be nonnegative")
    res = analysis.result_prob(pdf, m, tau)
    rows = []
    for l in range(1, l_max + 1):
        cand = analysis.candidate_prob(pdf, m, tau, l)
        ratio = cand / res if res else None
        excess = (cand - res) / res if res else None
        rows.append((l, cand, res, ratio, excess))
    header = "l\tcand\tres\tratio\texcess"
    if args.mc_samples:
        header += "\tmc_cand\tmc_res"
    lines = [header]
    for l, cand, res_p, ratio, excess in rows:
        cols = [str(l), _fmt(cand), _fmt(res_p)]
        cols += ["inf", "inf"] if ratio is None else [_fmt(ratio), _fmt(excess)]
        if args.mc_samples:
            est = analysis.monte_carlo(pdf, m, tau, l, args.mc_samples, seed=args.seed)
            cols += [_fmt(est["cand"]), _fmt(est["res"])]
        lines.append("\t".join(cols))
    _write_lines(args.out, lines)
    if args.stats:
        record = {
            "pdf": args.pdf,
            "m": m,
            "tau": tau,
            "rows": [
                {
                    "l": l,
                    "cand": float(cand),
                    "res": float(res_p),
                    "ratio": None if ratio is None else float(ratio),
                    "excess": None if excess is None else float(excess),
                }
                for l, cand, res_p, ratio, excess in rows
            ],
        }
        _write_lines(args.stats, [json.dumps(record, sort_keys=True)])
    return EXIT_OK


def _cmd_sweep(args):
    if args.problem != "hamming":
        raise ConfigError("sweep currently supports --problem hamming")
    data = pio.read_vectors(args.data)
    queries = pio.read_vectors(args.queries)
    spec, mode, m = _hamming_spec(args, data.shape[1] if data.size else 1)
    eff_m = m
    if spec is None and mode == INTRED:
        from .hamming import effective_part_count

        eff_m = effective_part_count(args.tau, m)
    elif spec is not None and spec.thresholds is not None:
        eff_m = len(spec.thresholds)
    if args.l_values:
        try:
            l_values = [int(x) for x in args.l_values.split(",")]
        except ValueError:
            raise ConfigError(f"--l-values must be comma-separated integers")
        if any(not 1 <= l <= eff_m for l in l_values):
            raise ConfigError(f"--l-values entries must lie in [1..{eff_m}]")
    else:
        l_values = list(range(1, eff_m + 1))
    index = HammingIndex(data)
    lines = ["l\tcandidates\tbox_checks\tresults\ttime"]
    for l in l_values:
        t0 = time.perf_counter()
        outcomes = _run_queries(
            lambda q: index.query(q, args.tau, l, mode=mode, spec=spec, parts=m),
            list(queries),
        )
        elapsed = time.perf_counter() - t0
        cand = sum(s.candidates for _, s in outcomes)
        checks = sum(s.box_checks for _, s in outcomes)
        res = sum(s.results for _, s in outcomes)
        lines.append(f"{l}\t{cand}\t{checks}\t{res}\t{elapsed:.6f}")
    _write_lines(args.out, lines)
    return EXIT_OK


def _cmd_verify_theorems(args):
    if args.m < 1 or args.omega < 0 or args.n < 0:
        raise ConfigError("need m >= 1, n >= 0, omega >= 0")
    try:
        report = verify_theorems_exhaustive(args.m, args.n, args.omega)
    except ValueError as e:
        raise ConfigError(str(e))
    print(
        f"{report.violations} violations "
        f"(m={report.m} n={report.n} omega={report.omega} "
        f"sequences={report.sequences} within_bound={report.within_bound})"
    )
    return EXIT_OK


def _add_io_flags(p, tau_help):
    p.add_argument("--data", required=True, help="dataset path")
    p.add_argument("--queries", required=True, help="query path")
    p.add_argument("--tau", type=int, default=None, help=tau_help)
    p.add_argument("--chain", type=int, default=1, help="chain length l (default 1)")
    p.add_argument("--out", default=None, help="results path (default stdout)")
    p.add_argument("--stats", default=None, help="per-query stats path")
    p.add_argument("--times", action="store_true", help="include wall times in stats lines")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="pigeonring", description=__doc__.split("\n\n")[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hamming", help="Hamming distance search over binary vectors")
    _add_io_flags(p, "distance threshold")
    p.add_argument("--parts", type=int, default=None, help="part count m (default d//16)")
    p.add_argument("--mode", choices=["fixed", "variable", "intred"], default="fixed")
    p.add_argument("--thresholds", default=None, help="comma-separated per-part thresholds")
    p.set_defaults(fn=_cmd_hamming)

    p = sub.add_parser("set", help="set similarity search (overlap or Jaccard)")
    _add_io_flags(p, "overlap threshold (or use --jaccard)")
    p.add_argument("--jaccard", default=None, help="Jaccard threshold in (0,1], e.g. 0.8 or 4/5")
    p.add_argument("--parts", type=int, default=None, help="box count m (default 5)")
    p.set_defaults(fn=_cmd_set)

    p = sub.add_parser("string", help="edit distance search")
    _add_io_flags(p, "edit distance threshold")
    p.add_argument("--kappa", type=int, default=2, help="gram length (default 2)")
    p.set_defaults(fn=_cmd_string)

    p = sub.add_parser("analyze", help="candidate-probability curves")
    p.add_argument("--pdf", required=True, help='box pmf: "uniform:OMEGA" or "w0,w1,..."')
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--l-max", type=int, default=None, dest="l_max")
    p.add_argument("--mc-samples", type=int, default=0, dest="mc_samples",
                   help="also print Monte Carlo estimates from this many samples")
    p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    p.add_argument("--out", default=None)
    p.add_argument("--stats", default=None, help="JSON record path")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("sweep", help="candidate counts and timings across chain lengths")
    _add_io_flags(p, "distance threshold")
    p.add_argument("--problem", choices=["hamming"], default="hamming")
    p.add_argument("--parts", type=int, default=None)
    p.add_argument("--mode", choices=["fixed", "variable", "intred"], default="fixed")
    p.add_argument("--thresholds", default=None)
    p.add_argument("--l-values", default=None, dest="l_values", help="comma-separated l list")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("verify-theorems", help="exhaustive chain-existence check")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--omega", type=int, required=True)
    p.set_defaults(fn=_cmd_verify_theorems)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "tau", 0) is None and args.command in ("hamming", "string", "sweep"):
            raise ConfigError("--tau is required")
        if getattr(args, "chain", 1) < 1:
            raise ConfigError("--chain must be at least 1")
        return args.fn(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DataFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
