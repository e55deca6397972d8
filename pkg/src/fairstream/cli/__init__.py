"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 parse/config error, 3 infeasible bounds,
4 brute-force size cap, 5 verification found a violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from fairstream import __version__
from fairstream.cli.config import ConfigError, RunConfig, load_config
from fairstream.cli.ingest import DatasetBundle, ParseError, ingest, write_colors, write_edge_list
from fairstream.core import ContractViolation, InfeasibleInstanceError
from fairstream.harness.brute import DEFAULT_CAP, BruteForceCapError, brute_force_opt
from fairstream.harness.experiment import ExperimentConfig, run_experiment, summarize
from fairstream.harness.hardness import COLOR_LABELS, gen_hardness
from fairstream.objectives import verify_submodularity

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3, 4, 5

RESULT_COLUMNS = [
    "algorithm", "k", "seed", "objective", "err",
    "oracle_calls", "peak_stored_elements", "wall_ms",
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".12g")
    return str(x)


def _specs(cfg: RunConfig, bundle: DatasetBundle):
    specs, notes = {}, []
    for k in cfg.ks:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            specs[k] = cfg.spec_for(bundle, k)
        notes.extend(f"k={k}: {w.message}" for w in caught)
    return specs, notes


def _manifest(cfg: RunConfig, bundle: DatasetBundle, specs, notes) -> dict:
    return {
        "version": __version__,
        "config": cfg.raw,
        "resolved": {
            "dataset": cfg.dataset,
            "bounds": cfg.bounds,
            "k": cfg.ks,
            "algorithms": cfg.algorithms,
            "seeds": cfg.seeds,
            "order": cfg.order,
            "timing": cfg.timing,
        },
        "dataset": {
            **{key: val for key, val in bundle.provenance.items() if key not in ("payload", "colors")},
            "colors": bundle.labels,
            "color_sizes": list(bundle.ground.color_sizes),
            "objective": bundle.objective.describe(),
        },
        "specs": {str(k): {"lower": list(s.lower), "upper": list(s.upper)} for k, s in specs.items()},
        "warnings": notes,
    }


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=str) + "\n")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    bundle = cfg.load_dataset()
    specs, notes = _specs(cfg, bundle)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    manifest = _manifest(cfg, bundle, specs, notes)
    if args.dry_run:
        _write_json(out / "manifest.json", manifest)
        print(f"dry run: wrote {out / 'manifest.json'}")
        return EXIT_OK

    experiment = ExperimentConfig(
        oracle=bundle.objective, ground=bundle.ground, bounds=specs.__getitem__,
        algorithms=cfg.algorithms, ks=cfg.ks, seeds=cfg.seeds, order=cfg.order, jobs=args.jobs,
    )
    result = run_experiment(experiment)
    timing = cfg.timing or args.timing
    with open(out / "results.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for r in result.reports:
            writer.writerow([
                r.algorithm, r.k, r.seed, _num(r.objective), r.err, r.oracle_calls,
                r.peak_stored_elements, _num(round(r.wall_time * 1000, 3)) if timing else "",
            ])
    rows = summarize(result.reports)
    with open(out / "summary.csv", "w", newline="") as fh:
        if rows:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({key: _num(val) for key, val in row.items()})
    manifest["warnings"] = notes + result.warnings
    manifest["failures"] = [
        {"algorithm": r.algorithm, "k": r.k, "seed": r.seed, "error": r.error}
        for r in result.reports if r.error
    ]
    _write_json(out / "manifest.json", manifest)
    print(f"wrote {len(result.reports)} rows to {out / 'results.csv'}")
    return EXIT_OK


def cmd_brute_force(args) -> int:
    cfg = load_config(args.config)
    bundle = cfg.load_dataset()
    specs, _ = _specs(cfg, bundle)
    for k, spec in specs.items():
        value, witness = brute_force_opt(bundle.objective, bundle.ground, spec, max_n=args.max_n)
        print(json.dumps({"k": k, "opt": value, "witness": list(witness)}))
    return EXIT_OK


def cmd_gen_hardness(args) -> int:
    if args.bit not in (0, 1):
        raise ValueError("--bit must be 0 or 1")
    rng = np.random.default_rng(args.seed)
    x = rng.integers(0, 2, size=args.n).tolist()
    x[args.i_star] = args.bit
    inst = gen_hardness(args.n, args.i_star, x, args.q, args.epsilon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_edge_list(out / "edges.txt", inst.arcs)
    write_colors(out / "colors.txt", inst.ground.colors, COLOR_LABELS)
    pairs = lambda values: ", ".join(f"{lab}:{v}" for lab, v in zip(COLOR_LABELS, values))
    (out / "config.ini").write_text(
        "[dataset]\n"
        "format = edge_list\npath = edges.txt\ncolors = colors.txt\n"
        "objective = cut\ndirected = true\n\n"
        "[bounds]\nrecipe = explicit\n"
        f"lower = {pairs(inst.spec.lower)}\nupper = {pairs(inst.spec.upper)}\n\n"
        "[experiment]\n"
        f"k = {inst.spec.k}\n"
        "algorithms = fair-ck, fair-ck-theory, fair-fkk, fair-nonmono-fkk, fair-random\n"
        "seeds = 0, 1, 2\norder = natural\n\n"
        "[output]\ndir = results\n"
    )
    _write_json(out / "instance.json", {
        "n": inst.n, "i_star": inst.i_star, "x": list(inst.x), "a": inst.a, "b": inst.b,
        "q": str(inst.q), "expected_opt": inst.expected_opt,
    })
    print(f"wrote hardness instance (a={inst.a}, b={inst.b}, bit={inst.bit}) to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    path = Path(args.dataset)
    if args.format:
        bundle = ingest(path, args.format, args.colors, objective=args.objective)
    else:
        bundle = load_config(path).load_dataset()
    oracle = bundle.objective
    exhaustive = oracle.n <= 8
    report = verify_submodularity(oracle, trials=args.trials, seed=args.seed, exhaustive=exhaustive)
    summary = {
        "objective": oracle.describe(),
        "elements": oracle.n,
        "colors": bundle.labels,
        "submodularity": {
            "mode": "exhaustive" if exhaustive else f"sampled({args.trials})",
            "checks": report.checks,
            "violations": report.violations,
            "worst_violation": report.worst_violation,
            "ok": report.submodular,
        },
        "monotone": report.monotone,
    }
    if "kernel_lambda_min" in bundle.provenance:
        lam = bundle.provenance["kernel_lambda_min"]
        summary["psd"] = {"ok": True, "lambda_min": lam}
    print(json.dumps(summary, indent=2, default=str))
    return EXIT_OK if report.submodular else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairstream", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run an experiment sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dry-run", action="store_true", help="write the manifest only")
    p.add_argument("--timing", action="store_true", help="fill the wall_ms column")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("brute-force", help="exact optimum for every k of a config")
    p.add_argument("--config", required=True)
    p.add_argument("--max-n", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_brute_force)

    p = sub.add_parser("gen-hardness", help="write a hardness instance as edge list + colors + config")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--bit", type=int, choices=(0, 1), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--i-star", type=int, default=0)
    p.add_argument("--seed", type=int, default=0, help="seed for the other bits of x")
    p.set_defaults(func=cmd_gen_hardness)

    p = sub.add_parser("verify", help="check submodularity (and PSD for kernels) of a dataset")
    p.add_argument("--dataset", required=True, help="config file, or a payload file with --format")
    p.add_argument("--format", choices=("edge_list", "feature_csv", "kernel_csv", "movie_csv"))
    p.add_argument("--colors")
    p.add_argument("--objective", choices=("coverage", "cut"))
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BruteForceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InfeasibleInstanceError as exc:
        print(f"error: infeasible bounds: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, ParseError, ContractViolation, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
