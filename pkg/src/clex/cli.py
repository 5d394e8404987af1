"""Command-line pipeline: split, train-static, aggregate, analyze, sweep, report.

Configuration is one JSON document; any field can be overridden on the
command line with a flag of the same dotted name, e.g. ``--train.epochs 30``.
Commands exit 0 on success and print a single-line JSON error to stderr on
failure.
"""

from __future__ import annotations

import argparse
import copy
import csv
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping

from . import analysis, contextual, corpus, report as report_mod
from .errors import ValidationError
from .sgns import (
    EmbeddingSpace,
    InitStrategy,
    TrainConfig,
    load_pretrained_text_vectors,
    load_space,
    save_space,
    sweep as run_sweep,
    train_backward_external,
    train_incremental,
    train_internal,
)
from .sgns.space import MAGIC

__all__ = ["main", "DEFAULT_CONFIG"]

DEFAULT_CONFIG: dict[str, Any] = {
    "charters": None,
    "charters_format": None,
    "period_specs": None,  # JSON file; None uses the built-in three periods
    "labels": None,
    "targets": None,  # word list file; None means <out>/targets.txt
    "threshold_per_100k": 5.0,
    "out": "clex-out",
    "seed": 1,
    "threads": 1,
    "train": {
        "dim": 100,
        "epochs": 10,
        "window": 5,
        "negatives": 5,
        "min_count": 5,
        "ngram_min": 3,
        "ngram_max": 6,
        "bucket_count": 2_000_000,
        "initial_lr": 0.025,
    },
    "strategies": ["incremental"],
    "pretrained_vectors": None,
    "slices_dir": None,  # None means <out>/slices
    "records": {},  # period name -> record file
    "models": {},  # model name -> {period name -> vector or space file}
    "transitions": [
        {"name": "AN", "from": "ANG", "to": "NOR"},
        {"name": "NP", "from": "NOR", "to": "PLA"},
    ],
    "sweep": {"strategy": "incremental", "dims": [100, 300], "epochs": [10, 30, 50], "transition": "AN"},
    "bundle": None,  # None means <out>/analysis/bundle.json
    "report_out": None,  # None means <out>/report.html
}

COMMANDS = ("split", "train-static", "aggregate", "analyze", "sweep", "report")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # single-line, machine-parseable
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        raise SystemExit(2)


def _deep_update(base: dict, extra: Mapping) -> dict:
    for key, value in extra.items():
        if isinstance(value, Mapping) and isinstance(base.get(key), dict):
            _deep_update(base[key], value)
        else:
            base[key] = value
    return base


def _apply_dotted(config: dict, dotted: str, raw: str) -> None:
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    *parents, leaf = dotted.split(".")
    for part in parents:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ValidationError(f"cannot override {dotted!r}: {part!r} is not an object")
    node[leaf] = value


def _parse_overrides(tokens: list[str], config: dict) -> None:
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not token.startswith("--"):
            raise ValidationError(f"unexpected argument {token!r}")
        body = token[2:]
        if "=" in body:
            dotted, raw = body.split("=", 1)
            i += 1
        else:
            dotted = body
            if i + 1 >= len(tokens):
                raise ValidationError(f"flag --{dotted} needs a value")
            raw = tokens[i + 1]
            i += 2
        _apply_dotted(config, dotted, raw)


def _load_config(args: argparse.Namespace, overrides: list[str]) -> dict:
    config = copy.deepcopy(DEFAULT_CONFIG)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            _deep_update(config, json.load(fh))
    _parse_overrides(overrides, config)
    if args.seed is not None:
        config["seed"] = args.seed
    if args.threads is not None:
        config["threads"] = args.threads
    if args.out is not None:
        config["out"] = args.out
    return config


def _out_dir(config: Mapping) -> Path:
    out = Path(config["out"])
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"cannot create output directory {out}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise ValidationError(f"output directory {out} is not writable")
    return out


def _period_specs(config: Mapping) -> list[corpus.PeriodSpec]:
    if config.get("period_specs"):
        return corpus.load_period_specs(config["period_specs"])
    return list(corpus.DEFAULT_PERIODS)


def _require(config: Mapping, key: str) -> Any:
    value = config.get(key)
    if not value:
        raise ValidationError(f"config field {key!r} is required for this command")
    return value


def _slices_dir(config: Mapping, out: Path) -> Path:
    return Path(config["slices_dir"]) if config.get("slices_dir") else out / "slices"


def _train_config(config: Mapping) -> TrainConfig:
    return TrainConfig(seed=int(config["seed"]), **config["train"])


def _read_slices(config: Mapping, out: Path) -> dict[str, corpus.PeriodSlice]:
    specs = _period_specs(config)
    slices_dir = _slices_dir(config, out)
    slices: dict[str, corpus.PeriodSlice] = {}
    for spec in specs:
        path = slices_dir / f"{spec.name}.txt"
        if not path.exists():
            raise ValidationError(f"missing slice file {path}; run the split command first")
        with open(path, encoding="utf-8") as fh:
            sentences = [line.split() for line in fh if line.strip()]
        slices[spec.name] = corpus.PeriodSlice(period=spec, sentences=sentences, charter_count=0)
    return slices


def cmd_split(config: Mapping) -> None:
    out = _out_dir(config)
    charters = corpus.load_charters(_require(config, "charters"), config.get("charters_format"))
    specs = _period_specs(config)
    result = corpus.split_periods(charters, specs)

    slices_dir = _slices_dir(config, out)
    slices_dir.mkdir(parents=True, exist_ok=True)
    for name, sl in result.slices.items():
        with open(slices_dir / f"{name}.txt", "w", encoding="utf-8") as fh:
            for sentence in sl.sentences:
                fh.write(" ".join(sentence) + "\n")

    with open(out / "corpus_stats.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["period", "start_year", "end_year", "charters", "tokens"])
        for spec in specs:
            sl = result.slices[spec.name]
            writer.writerow([spec.name, spec.start_year, spec.end_year, sl.charter_count, sl.token_count])
    with open(out / "excluded.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "year"])
        for charter in result.excluded:
            writer.writerow([charter.id, charter.year])

    freqs = corpus.compute_frequencies(result.slices)
    if all(total > 0 for total in freqs.totals.values()):
        targets = corpus.select_targets(freqs, float(config["threshold_per_100k"]))
        with open(out / "targets.txt", "w", encoding="utf-8") as fh:
            for word in sorted(targets):
                fh.write(word + "\n")
        n_targets = len(targets)
    else:
        n_targets = 0
    print(
        f"split {len(charters)} charters into {len(specs)} periods "
        f"({len(result.excluded)} excluded); {n_targets} target words"
    )


def _train_one_strategy(
    strategy: InitStrategy,
    slices: Mapping[str, corpus.PeriodSlice],
    config: Mapping,
    train_cfg: TrainConfig,
) -> dict[str, EmbeddingSpace]:
    if strategy is InitStrategy.INCREMENTAL:
        return train_incremental(slices, train_cfg)
    if strategy is InitStrategy.INTERNAL:
        return train_internal(slices, train_cfg)
    return train_backward_external(slices, _require(config, "pretrained_vectors"), train_cfg)


def cmd_train_static(config: Mapping) -> None:
    out = _out_dir(config)
    slices = _read_slices(config, out)
    train_cfg = _train_config(config)
    for name in config["strategies"]:
        try:
            strategy = InitStrategy(name)
        except ValueError:
            raise ValidationError(
                f"unknown strategy {name!r}; expected one of "
                f"{[s.value for s in InitStrategy]}"
            ) from None
        spaces = _train_one_strategy(strategy, slices, config, train_cfg)
        strategy_dir = out / "spaces" / strategy.value
        strategy_dir.mkdir(parents=True, exist_ok=True)
        manifest: dict[str, Any] = {
            "command": "train-static",
            "strategy": strategy.value,
            "seed": config["seed"],
            "threads": config["threads"],
            "train": dict(config["train"]),
            "spaces": {},
            "created": datetime.now(timezone.utc).isoformat(),
        }
        for period, space in spaces.items():
            path = strategy_dir / f"{period}.clex"
            save_space(space, path)
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            manifest["spaces"][period] = {"path": str(path), "sha256": digest}
        with open(strategy_dir / "manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
        print(f"trained {strategy.value}: {', '.join(spaces)} -> {strategy_dir}")


def cmd_aggregate(config: Mapping) -> None:
    out = _out_dir(config)
    records = _require(config, "records")
    target_dir = out / "contextual"
    target_dir.mkdir(parents=True, exist_ok=True)
    coverage: dict[str, Any] = {}
    for period, record_path in records.items():
        agg = contextual.aggregate(contextual.read_records(record_path), period)
        vec_path = target_dir / f"{period}.vec"
        contextual.export_as_wordvectors(agg, vec_path)
        coverage[period] = {
            "records": record_path,
            "words": len(agg),
            "occurrences": sum(agg.counts.values()),
            "skipped_records": agg.skipped_records,
            "dim": agg.dim,
        }
        print(f"aggregated {period}: {len(agg)} words -> {vec_path}")
    with open(target_dir / "coverage.json", "w", encoding="utf-8") as fh:
        json.dump(coverage, fh, indent=2, sort_keys=True)


def _load_vector_file(path: str | Path, targets: set[str]) -> dict[str, Any]:
    """Vectors for targets from either a binary space file or a text file."""
    path = Path(path)
    with open(path, "rb") as fh:
        is_space = fh.read(len(MAGIC)) == MAGIC
    if is_space:
        return load_space(path).vectors_for(targets)
    vectors, _ = load_pretrained_text_vectors(path)
    return {w: v for w, v in vectors.items() if w in targets}


def _load_targets(config: Mapping, out: Path) -> set[str]:
    path = Path(config["targets"]) if config.get("targets") else out / "targets.txt"
    if not path.exists():
        raise ValidationError(f"missing targets file {path}; run the split command first")
    with open(path, encoding="utf-8") as fh:
        return {line.strip() for line in fh if line.strip()}


def _transitions(config: Mapping) -> list[dict]:
    transitions = config["transitions"]
    if not transitions:
        raise ValidationError("no transitions configured")
    return transitions


def _analyze_model(
    model: str,
    sources: Mapping[str, str],
    targets: set[str],
    labels: corpus.ChangeLabelSet,
    transitions: list[dict],
) -> tuple[
    list[analysis.SimilarityRow],
    dict[str, analysis.MetricsResult],
    dict[str, Any],
    list[analysis.CoverageGap],
    dict | None,
]:
    periods = {t["from"] for t in transitions} | {t["to"] for t in transitions}
    vectors: dict[str, dict] = {}
    for period in periods:
        if period not in sources:
            raise ValidationError(f"model {model!r}: no vector file for period {period!r}")
        vectors[period] = _load_vector_file(sources[period], targets)

    # drop words missing anywhere so every transition scores the same set
    missing: list[analysis.CoverageGap] = []
    present = set(targets)
    for word in sorted(targets):
        for period in sorted(periods):
            if word not in vectors[period]:
                missing.append(analysis.CoverageGap(word=word, missing_from=period))
                present.discard(word)

    rows: dict[str, analysis.SimilarityRow] = {
        w: analysis.SimilarityRow(word=w) for w in sorted(present)
    }
    for t in transitions:
        for word in sorted(present):
            rows[word].cos[t["name"]] = analysis.cosine(
                vectors[t["from"]][word], vectors[t["to"]][word]
            )
    row_list = analysis.attach_labels(rows.values(), labels)

    metrics_by_transition: dict[str, analysis.MetricsResult] = {}
    blocks: dict[str, Any] = {}
    for t in transitions:
        metrics = analysis.compute_metrics(row_list, t["name"])
        distributions = analysis.distribution_summary(row_list, t["name"])
        metrics_by_transition[t["name"]] = metrics
        blocks[t["name"]] = {
            "metrics": metrics.to_dict(),
            "distributions": {k: v.to_dict() for k, v in distributions.items()},
        }

    comparison: dict | None = None
    if len(transitions) >= 2:
        first = metrics_by_transition[transitions[0]["name"]]
        second = metrics_by_transition[transitions[1]["name"]]
        comparison = analysis.compare_transitions(first, second).to_dict()
    return row_list, metrics_by_transition, blocks, missing, comparison


def cmd_analyze(config: Mapping) -> None:
    out = _out_dir(config)
    targets = _load_targets(config, out)
    labels = corpus.load_labels(_require(config, "labels"), targets)
    transitions = _transitions(config)
    models = _require(config, "models")

    analysis_dir = out / "analysis"
    analysis_dir.mkdir(parents=True, exist_ok=True)
    transition_names = [t["name"] for t in transitions]

    bundle_path = Path(config["bundle"]) if config.get("bundle") else analysis_dir / "bundle.json"
    bundle: dict[str, Any] = {
        "schema": report_mod.BUNDLE_SCHEMA,
        "models": {},
        "comparisons": {},
        "coverage": {},
        "sweeps": [],
    }
    if bundle_path.exists():  # keep sweep results merged in earlier
        try:
            with open(bundle_path, encoding="utf-8") as fh:
                bundle["sweeps"] = json.load(fh).get("sweeps", [])
        except (OSError, json.JSONDecodeError):
            pass

    with open(analysis_dir / "metrics.csv", "w", encoding="utf-8", newline="") as metrics_fh:
        writer = csv.writer(metrics_fh)
        writer.writerow(analysis.METRICS_CSV_HEADER)
        for model, sources in models.items():
            rows, metrics_by_transition, blocks, missing, comparison = _analyze_model(
                model, sources, targets, labels, transitions
            )
            analysis.rows_to_csv(rows, transition_names, analysis_dir / f"rows_{model}.csv")
            for metrics in metrics_by_transition.values():
                writer.writerow(analysis.metrics_to_row(model, metrics))
            bundle["models"][model] = blocks
            bundle["coverage"][model] = [
                {"word": gap.word, "missing_from": gap.missing_from} for gap in missing
            ]
            if comparison:
                bundle["comparisons"][model] = comparison
            print(f"analyzed {model}: {len(rows)} rows, {len(missing)} coverage gaps")
    with open(bundle_path, "w", encoding="utf-8") as fh:
        json.dump(bundle, fh, indent=2, sort_keys=True)


def cmd_sweep(config: Mapping) -> None:
    out = _out_dir(config)
    slices = _read_slices(config, out)
    targets = _load_targets(config, out)
    labels = corpus.load_labels(_require(config, "labels"), targets)
    sweep_cfg = config["sweep"]
    strategy = InitStrategy(sweep_cfg["strategy"])
    transition = next(
        (t for t in _transitions(config) if t["name"] == sweep_cfg["transition"]), None
    )
    if transition is None:
        raise ValidationError(f"sweep transition {sweep_cfg['transition']!r} is not configured")

    def evaluate(spaces: Mapping[str, EmbeddingSpace]) -> tuple[float, float]:
        vec_a = spaces[transition["from"]].vectors_for(targets)
        vec_b = spaces[transition["to"]].vectors_for(targets)
        pair = analysis.pair_similarities(
            vec_a, vec_b, targets, transition["name"], (transition["from"], transition["to"])
        )
        rows = analysis.attach_labels(pair.rows, labels)
        metrics = analysis.compute_metrics(rows, transition["name"])
        return metrics.delta_mu, metrics.rho

    sweep_report = run_sweep(
        slices,
        strategy,
        _train_config(config),
        evaluate,
        dims=sweep_cfg["dims"],
        epoch_grid=sweep_cfg["epochs"],
        pretrained_path=config.get("pretrained_vectors"),
    )
    csv_path = out / f"sweep_{strategy.value}.csv"
    sweep_report.to_csv(csv_path)

    analysis_dir = out / "analysis"
    analysis_dir.mkdir(parents=True, exist_ok=True)
    bundle_path = Path(config["bundle"]) if config.get("bundle") else analysis_dir / "bundle.json"
    if bundle_path.exists():
        with open(bundle_path, encoding="utf-8") as fh:
            bundle = json.load(fh)
    else:
        bundle = {"schema": report_mod.BUNDLE_SCHEMA, "models": {}, "comparisons": {}, "sweeps": []}
    entry = {
        "strategy": sweep_report.strategy,
        "cells": [
            {"dim": c.dim, "epochs": c.epochs, "delta_mu": c.delta_mu, "rho": c.rho}
            for c in sweep_report.cells
        ],
    }
    bundle["sweeps"] = [s for s in bundle.get("sweeps", []) if s.get("strategy") != entry["strategy"]]
    bundle["sweeps"].append(entry)
    with open(bundle_path, "w", encoding="utf-8") as fh:
        json.dump(bundle, fh, indent=2, sort_keys=True)
    print(f"swept {strategy.value}: {len(sweep_report.cells)} cells -> {csv_path}")


def cmd_report(config: Mapping) -> None:
    out = _out_dir(config)
    bundle_path = Path(config["bundle"]) if config.get("bundle") else out / "analysis" / "bundle.json"
    if not bundle_path.exists():
        raise ValidationError(f"missing report bundle {bundle_path}; run the analyze command first")
    with open(bundle_path, encoding="utf-8") as fh:
        bundle = json.load(fh)
    html_text = report_mod.render_report(bundle)
    report_path = Path(config["report_out"]) if config.get("report_out") else out / "report.html"
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(html_text)
    print(f"report -> {report_path}")


_HANDLERS = {
    "split": cmd_split,
    "train-static": cmd_train_static,
    "aggregate": cmd_aggregate,
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = _Parser(prog="clex", description=__doc__)
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--threads", type=int, default=None, help="worker count (1 = deterministic)")
    parser.add_argument("--seed", type=int, default=None, help="training seed")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("command", choices=COMMANDS)
    args, overrides = parser.parse_known_args(argv)
    try:
        config = _load_config(args, overrides)
        _HANDLERS[args.command](config)
    except SystemExit:
        raise
    except Exception as exc:  # single-line, machine-parseable failure contract
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
