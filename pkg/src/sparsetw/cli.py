"""Command-line experiment runner.

Every subcommand prints one JSON document (or a CSV table) that embeds the
resolved configuration and the package version.  Logs go to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diagrams import (
    count_realizable, count_weighted, count_weightings_dp, d1_value, enumerate_diagrams,
)
from .errors import ParameterError, ResourceCapError
from .graph import check_parameters, sample_regular_graph
from .mckay import mckay_check, pattern_from_name
from .moments import (
    DEFAULT_PROBES, DEFAULT_WORK_CAP, S_TERMS_DEFAULT, goe_sample_trace, mc_trace_moment, n_prime,
    series_goe, series_trace_U, unfloored_n_prime,
)
from .nbwalk import verify_lemma1_range
from .spectra import ensemble_scaled_statistics, goe_scaled_statistics, ks_two_sample, samples_to_csv, summary
from .weights import WeightEnsemble

log = logging.getLogger("sparsetw")

DEFAULTS = {
    "N": 100,
    "d": 3,
    "n": 6,
    "seed": 1,
    "samples": 100,
    "ensemble": "rademacher",
    "pattern": "edge",
    "s_max": 3,
    "s_terms": S_TERMS_DEFAULT,
    "estimator": "auto",
    "probes": DEFAULT_PROBES,
    "goe_samples": None,
    "work_cap": DEFAULT_WORK_CAP,
    "dump": False,
    "format": "json",
    "output": "-",
    "threads": os.cpu_count() or 1,
}

# parameters that influence the data; threads and output location do not
SUBCOMMANDS = {
    "sample-graph": ("N", "d", "seed"),
    "verify-lemma1": ("N", "d", "n", "seed"),
    "enum-diagrams": ("s_max", "dump"),
    "weighted-counts": ("s_max", "n"),
    "mckay-check": ("N", "d", "pattern", "samples", "seed"),
    "moments": ("N", "d", "n", "ensemble", "samples", "seed", "s_terms", "estimator", "probes", "work_cap"),
    "goe-compare": ("N", "d", "n", "ensemble", "samples", "seed", "s_terms", "estimator", "probes",
                    "goe_samples", "work_cap"),
    "spectrum-ensemble": ("N", "d", "ensemble", "samples", "seed"),
    "tw-compare": ("N", "d", "ensemble", "samples", "seed", "goe_samples"),
}


def version_string() -> str:
    return f"sparsetw-{__version__}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # every default is None so that config-file values can fill the gaps
    common.add_argument("--N", type=int, default=None, help="number of vertices")
    common.add_argument("--d", type=int, default=None, help="degree")
    common.add_argument("--n", type=int, default=None, help="moment / path length parameter")
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count")
    common.add_argument("--goe-samples", dest="goe_samples", type=int, default=None)
    common.add_argument("--ensemble", default=None, help="rademacher | symmetric-real:<law> | complex-unit | all-ones")
    common.add_argument("--pattern", default=None, help="edge | 2-path | 3-path | triangle, comma separated")
    common.add_argument("--s-max", dest="s_max", type=int, default=None)
    common.add_argument("--s-terms", dest="s_terms", type=int, default=None)
    common.add_argument("--estimator", default=None, choices=("auto", "exact", "hutchinson"))
    common.add_argument("--probes", type=int, default=None)
    common.add_argument("--work-cap", dest="work_cap", type=float, default=None)
    common.add_argument("--dump", action="store_const", const=True, default=None, help="include diagram dumps")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--config", default=None, help="JSON file of parameters")
    common.add_argument("--output", default=None, help="output path, - for stdout")
    common.add_argument("--format", default=None, choices=("json", "csv"))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="sparsetw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=version_string())
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Flags override config-file keys, which override defaults."""
    file_cfg = {}
    if args.config:
        try:
            file_cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise ParameterError("config file must hold a JSON object")
        file_cfg = {k.replace("-", "_"): v for k, v in file_cfg.items()}
        unknown = set(file_cfg) - set(DEFAULTS) - {"command"}
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    cfg = dict(DEFAULTS)
    cfg.update({k: v for k, v in file_cfg.items() if k != "command"})
    cfg.update({k: v for k, v in vars(args).items() if k in DEFAULTS and v is not None})
    return cfg


def _validate(command: str, cfg: dict) -> None:
    keys = SUBCOMMANDS[command]
    if "N" in keys and "d" in keys:
        check_parameters(cfg["N"], cfg["d"])
    for k in ("samples", "probes", "threads"):
        if cfg[k] is not None and cfg[k] < 1:
            raise ParameterError(f"{k} must be >= 1 (got {cfg[k]})")
    if "n" in keys and cfg["n"] < 1:
        raise ParameterError(f"n must be >= 1 (got {cfg['n']})")
    if "ensemble" in keys:
        WeightEnsemble.from_label(cfg["ensemble"])
    if command == "spectrum-ensemble" and cfg["format"] not in ("csv", "json"):
        raise ParameterError("format must be csv or json")


def _ensemble(cfg) -> WeightEnsemble:
    return WeightEnsemble.from_label(cfg["ensemble"])


def cmd_sample_graph(cfg, threads):
    g = sample_regular_graph(cfg["N"], cfg["d"], cfg["seed"])
    return {"graph": json.loads(g.to_json())}


def cmd_verify_lemma1(cfg, threads):
    g = sample_regular_graph(cfg["N"], cfg["d"], cfg["seed"])
    records = [json.loads(r.to_json()) for r in verify_lemma1_range(g, cfg["n"])]
    last = records[-1]
    return {**last, "graph": json.loads(g.to_json()), "records": records,
            "all_equal": all(r["equal"] for r in records)}


def cmd_enum_diagrams(cfg, threads):
    by_s = enumerate_diagrams(cfg["s_max"])
    out = {"counts": {str(s): len(ds) for s, ds in by_s.items()}}
    if cfg["dump"]:
        out["diagrams"] = {str(s): [json.loads(x.to_json()) for x in ds] for s, ds in by_s.items()}
    return out


def cmd_weighted_counts(cfg, threads):
    n = cfg["n"]
    rows = []
    for s, ds in enumerate_diagrams(cfg["s_max"]).items():
        if n < 3 * s:
            continue
        k = 3 * s - 2
        positive = count_weightings_dp([1] * (k + 1), n)
        candidates = count_weightings_dp([-1] * (k + 1), n)
        realizable = [count_realizable(x, n) for x in ds]
        rows.append({
            "s": s,
            "D1": d1_value(s),
            "lower": count_weighted(s, n, True),
            "positive": positive,
            "all": candidates,
            "upper": count_weighted(s, n, False),
            "realizable_min": min(realizable),
            "realizable_max": max(realizable),
            "realizable_total": sum(realizable),
            "leading": n**k / math.factorial(k),
        })
    return {"rows": rows}


def cmd_mckay_check(cfg, threads):
    patterns = [pattern_from_name(p.strip()) for p in str(cfg["pattern"]).split(",")]
    checks = mckay_check(patterns, cfg["N"], cfg["d"], cfg["samples"], cfg["seed"], threads)
    records = [c.as_dict() for c in checks]
    out = {"records": records}
    if len(records) == 1:
        out.update(records[0])
    return out


def _moment(cfg, threads):
    return mc_trace_moment(cfg["N"], cfg["d"], _ensemble(cfg), cfg["n"], cfg["samples"], cfg["seed"],
                           cfg["estimator"], cfg["probes"], threads, cfg["work_cap"])


def _rel(a, b):
    return abs(a - b) / abs(b) if b else float("inf")


def cmd_moments(cfg, threads):
    N, d, n = cfg["N"], cfg["d"], cfg["n"]
    res = _moment(cfg, threads)
    series = series_trace_U(N, d, n, cfg["s_terms"])
    return {"kind": "moment", "params": {"N": N, "d": d, "n": n, "estimator": res.estimator},
            "mc": res.trace_u.estimate, "stderr": res.trace_u.standard_error, "series": series,
            "rel_diff": _rel(res.trace_u.estimate, series),
            "nb_normalized": res.normalized_nb.estimate, "nb_normalized_stderr": res.normalized_nb.standard_error}


def cmd_goe_compare(cfg, threads):
    N, d, n = cfg["N"], cfg["d"], cfg["n"]
    res = _moment(cfg, threads)
    Np = n_prime(N, d)
    goe = goe_sample_trace(Np, n, cfg["goe_samples"] or cfg["samples"], cfg["seed"] ^ 0x5EED, threads=threads)
    diff = abs(res.trace_u.estimate - goe.estimate)
    sigma = math.hypot(res.trace_u.standard_error, goe.standard_error)
    return {"kind": "moment", "params": {"N": N, "d": d, "n": n, "N_prime": Np, "estimator": res.estimator},
            "mc": res.trace_u.estimate, "stderr": res.trace_u.standard_error,
            "goe_mc": goe.estimate, "goe_stderr": goe.standard_error,
            "series": series_goe(unfloored_n_prime(N, d), n, cfg["s_terms"]),
            "rel_diff": _rel(res.trace_u.estimate, goe.estimate),
            "within_tolerance": diff <= 0.05 * abs(goe.estimate) + 4 * sigma}


def cmd_spectrum_ensemble(cfg, threads):
    samples = ensemble_scaled_statistics(cfg["N"], cfg["d"], _ensemble(cfg), cfg["samples"], cfg["seed"], threads)
    if cfg["format"] == "csv":
        return samples_to_csv(samples)
    out = {"scaled_max": summary([s.scaled_max for s in samples]),
           "scaled_min": summary([s.scaled_min for s in samples]),
           "ks_min_vs_max": ks_two_sample([s.scaled_min for s in samples], [s.scaled_max for s in samples]).as_dict()}
    if samples[0].scaled_second is not None:
        out["scaled_second"] = summary([s.scaled_second for s in samples])
    return out


def cmd_tw_compare(cfg, threads):
    ens = _ensemble(cfg)
    beta = 2 if ens.is_complex else 1
    samples = ensemble_scaled_statistics(cfg["N"], cfg["d"], ens, cfg["samples"], cfg["seed"], threads)
    Np = n_prime(cfg["N"], cfg["d"])
    goe = goe_scaled_statistics(Np, cfg["goe_samples"] or cfg["samples"], cfg["seed"] ^ 0x5EED, beta,
                                threads=threads)
    smax = [s.scaled_max for s in samples]
    smin = [s.scaled_min for s in samples]
    return {"N_prime": Np, "beta": beta, "scaled_max": summary(smax), "scaled_min": summary(smin),
            "goe": summary(goe), "ks_max_vs_goe": ks_two_sample(smax, goe).as_dict(),
            "ks_min_vs_max": ks_two_sample(smin, smax).as_dict()}


HANDLERS = {
    "sample-graph": cmd_sample_graph,
    "verify-lemma1": cmd_verify_lemma1,
    "enum-diagrams": cmd_enum_diagrams,
    "weighted-counts": cmd_weighted_counts,
    "mckay-check": cmd_mckay_check,
    "moments": cmd_moments,
    "goe-compare": cmd_goe_compare,
    "spectrum-ensemble": cmd_spectrum_ensemble,
    "tw-compare": cmd_tw_compare,
}


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    raise TypeError(f"not JSON serialisable: {type(x)}")


def _write(text: str, output: str) -> None:
    if output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(output).write_text(text, newline="")


def run(command: str, cfg: dict) -> str:
    """Execute one subcommand and return its data output."""
    _validate(command, cfg)
    resolved = {k: cfg[k] for k in SUBCOMMANDS[command]}
    result = HANDLERS[command](cfg, cfg["threads"])
    if isinstance(result, str):
        return result
    doc = {"command": command, "config": resolved, "version": version_string(), "result": result}
    return json.dumps(doc, sort_keys=True, default=_jsonable) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        log.info("running %s with %s", args.command, cfg)
        text = run(args.command, cfg)
        _write(text, cfg["output"])
        if cfg["format"] == "csv" and args.command == "spectrum-ensemble":
            # CSV has no room for metadata, so the config travels alongside
            meta = json.dumps({"command": args.command, "config": {k: cfg[k] for k in SUBCOMMANDS[args.command]},
                               "version": version_string()}, sort_keys=True) + "\n"
            if cfg["output"] == "-":
                sys.stderr.write(meta)
            else:
                Path(cfg["output"] + ".json").write_text(meta)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
