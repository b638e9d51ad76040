"""valueprobe command line: generate, score, metrics, structure, baselines, report."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path

from . import __version__, report
from .baseline import instrument_baseline
from .errors import InputError, NetworkError, ValidationError, ValueProbeError
from .generator import CorpusWriter, GenerationConfig, read_corpus, resolve_api_key, run_probes
from .lexicon import load_lexicon, parse_lexicon
from .manifest import RunManifest
from .matrix import aggregate_matrix, build_count_matrix, column_totals, format_matrix_csv, read_matrix_csv
from .metrics import category_frequency_stats, compute_metrics, frequency_regression, read_unigram_csv
from .probes import build_probes, load_value_spec
from .structure import CORRELATIONS, DISSIMILARITIES, structure_report

log = logging.getLogger("valueprobe")

_OVERRIDES = {
    "runs": "runs_per_prompt",
    "model": "model",
    "max_tokens": "max_tokens",
    "temperature": "temperature",
    "top_p": "top_p",
    "base_url": "base_url",
    "max_in_flight": "max_in_flight",
}


def _lexicon(path):
    if path is None:
        text = resources.files("valueprobe.data").joinpath("example_values.dic").read_text(encoding="utf-8")
        return parse_lexicon(text, source="<bundled example_values.dic>")
    return load_lexicon(path)


def _out_dir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {out}: {exc}") from exc
    return out


def _write(path: Path, text: str, manifest: RunManifest) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc
    manifest.add_output(path)


def _read_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def cmd_generate(args) -> int:
    config = GenerationConfig.load(args.config) if args.config else GenerationConfig()
    overrides = {field: getattr(args, opt) for opt, field in _OVERRIDES.items() if getattr(args, opt) is not None}
    if overrides:
        config = GenerationConfig.from_dict({**config.__dict__, **overrides})
    spec = load_value_spec(args.spec)
    probes = build_probes(spec, args.kind)
    api_key = resolve_api_key()  # fail before any file exists
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest.begin("generate", {"kind": probes.kind, **config.__dict__})
    manifest.add_input(args.spec)
    manifest.add_input(args.config)

    fd, tmp = tempfile.mkstemp(prefix=out.name + ".", suffix=".part", dir=out.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            summary = run_probes(probes, config, CorpusWriter(fh), api_key=api_key)
        os.replace(tmp, out)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    manifest.add_output(out)
    manifest.write(out.parent)
    print(f"wrote {summary.written} records ({summary.succeeded} ok, {summary.failed} failed) to {out}")
    if summary.failed:
        raise NetworkError(f"{summary.failed} of {summary.expected} requests failed permanently; see {out}")
    return 0


def cmd_score(args) -> int:
    spec = load_value_spec(args.spec)
    lexicon = _lexicon(args.dict)
    records = read_corpus(args.corpus)
    fine = build_count_matrix(records, lexicon, spec)
    agg = aggregate_matrix(fine)
    out = _out_dir(args.out)
    manifest = RunManifest.begin("score", {"records": len(records)})
    for p in (args.corpus, args.dict, args.spec):
        manifest.add_input(p)
    _write(out / "counts_fine.csv", format_matrix_csv(fine), manifest)
    _write(out / "counts_aggregated.csv", format_matrix_csv(agg), manifest)
    manifest.write(out)
    return 0


def _read_predictor(spec_arg: str, categories) -> tuple[str, list[float]]:
    name, sep, rest = spec_arg.partition("=")
    if not sep or not name or not rest:
        raise ValidationError(f"--predictor expects NAME=PATH[:COLUMN], got {spec_arg!r}")
    path, _, column = rest.partition(":") if not Path(rest).exists() else (rest, "", "")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read predictor {path}: {exc}") from exc
    if len(rows) < 2:
        raise ValidationError(f"{path}: predictor table is empty")
    header = [h.strip() for h in rows[0]]
    col = header.index(column) if column else 1
    if column and column not in header:
        raise ValidationError(f"{path}: no column {column!r}")
    values = {}
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            values[row[0].strip()] = float(row[col])
        except (IndexError, ValueError):
            raise ValidationError(f"{path}:line {lineno}: expected a numeric value in column {header[col]!r}") from None
    missing = [c for c in categories if c not in values]
    if missing:
        raise ValidationError(f"{path}: no predictor value for {missing}")
    return name, [values[c] for c in categories]


def cmd_metrics(args) -> int:
    spec = load_value_spec(args.spec)
    m = read_matrix_csv(args.counts, spec)
    table = compute_metrics(m, spec.circle_order)
    kind = args.kind or Path(args.counts).stem
    regression = None
    manifest = RunManifest.begin("metrics", {"kind": kind, "predictors": args.predictor or []})
    manifest.add_input(args.counts)
    manifest.add_input(args.spec)
    if args.predictor:
        cats = list(m.col_labels)
        preds = dict(_read_predictor(p, cats) for p in args.predictor)
        for p in args.predictor:
            manifest.add_input(p.partition("=")[2].partition(":")[0])
        regression = frequency_regression(column_totals(m).astype(float), preds)
    out = _out_dir(args.out)
    _write(out / "metrics_rows.csv", report.metric_rows_csv(table), manifest)
    _write(out / "metrics_rows_rounded.csv", report.metric_rows_csv(table, 2), manifest)
    _write(out / "metrics_columns.csv", report.metric_columns_csv(table), manifest)
    _write(out / "metrics_columns_rounded.csv", report.metric_columns_csv(table, 2), manifest)
    _write(out / "metrics.json", report.dumps(report.metrics_to_dict(table, kind, regression)), manifest)
    manifest.write(out)
    return 0


def cmd_structure(args) -> int:
    spec = load_value_spec(args.spec)
    m = read_matrix_csv(args.counts, spec)
    res = structure_report(m, spec.circle_order, args.correlation, args.dissimilarity, args.starts)
    out = _out_dir(args.out)
    manifest = RunManifest.begin("structure", {"correlation": args.correlation,
                                               "dissimilarity": args.dissimilarity, "starts": args.starts})
    manifest.add_input(args.counts)
    manifest.add_input(args.spec)
    _write(out / "structure.json", report.dumps(report.structure_to_dict(res)), manifest)
    _write(out / "structure.svg", report.structure_svg(res), manifest)
    manifest.write(out)
    return 0


def cmd_baseline_instrument(args) -> int:
    spec = load_value_spec(args.spec)
    base = instrument_baseline(spec, _lexicon(args.dict))
    out = _out_dir(args.out)
    manifest = RunManifest.begin("baseline-instrument", {})
    manifest.add_input(args.spec)
    manifest.add_input(args.dict)
    _write(out / "instrument_items.csv", report.instrument_items_csv(base), manifest)
    _write(out / "instrument_matches.csv", report.instrument_matches_csv(base), manifest)
    _write(out / "instrument_fine_counts.csv", format_matrix_csv(base.fine), manifest)
    _write(out / "instrument_value_counts.csv", format_matrix_csv(base.aggregated), manifest)
    _write(out / "instrument.json", report.dumps(report.instrument_to_dict(base)), manifest)
    manifest.write(out)
    return 0


def cmd_baseline_wordfreq(args) -> int:
    stats = category_frequency_stats(_lexicon(args.dict), read_unigram_csv(args.unigrams))
    out = _out_dir(args.out)
    manifest = RunManifest.begin("baseline-wordfreq", {})
    manifest.add_input(args.dict)
    manifest.add_input(args.unigrams)
    _write(out / "wordfreq.csv", report.wordfreq_csv(stats), manifest)
    _write(out / "wordfreq_rounded.csv", report.wordfreq_csv(stats, 2), manifest)
    manifest.write(out)
    for s in stats:
        if s.empty:
            log.warning("category %s has no entry in the unigram table", s.category)
    return 0


def cmd_report(args) -> int:
    metrics = [_read_json(p) for p in args.metrics]
    structure = _read_json(args.structure) if args.structure else None
    out = _out_dir(args.out)
    manifest = RunManifest.begin("report", {})
    seen = set()
    for path, data in zip(args.metrics, metrics):
        manifest.add_input(path)
        kind = str(data.get("kind") or Path(path).stem) if isinstance(data, dict) else Path(path).stem
        if not isinstance(data, dict):
            raise ValidationError(f"{path}: expected a metrics JSON object")
        if kind in seen:
            raise ValidationError(f"{path}: duplicate probe kind {kind!r}")
        seen.add(kind)
        try:
            chart = report.bar_chart_from_metrics(data)
        except ValidationError as exc:
            raise ValidationError(f"{path}: {exc}") from None
        _write(out / f"counts_{kind}.svg", chart, manifest)
    if structure is not None:
        manifest.add_input(args.structure)
        try:
            chart = report.scatter_from_structure(structure)
        except ValidationError as exc:
            raise ValidationError(f"{args.structure}: {exc}") from None
        _write(out / "structure.svg", chart, manifest)
    _write(out / "summary.txt", report.summary_text(metrics, structure), manifest)
    manifest.write(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valueprobe", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="send probes to a chat-completions endpoint and save a JSONL corpus")
    p.add_argument("--kind", required=True, help="item, definition or name")
    p.add_argument("--spec", help="value spec JSON (default: bundled example)")
    p.add_argument("--config", help="generation config JSON")
    p.add_argument("--runs", type=int)
    p.add_argument("--model")
    p.add_argument("--max-tokens", type=int)
    p.add_argument("--temperature", type=float)
    p.add_argument("--top-p", type=float)
    p.add_argument("--base-url")
    p.add_argument("--max-in-flight", type=int)
    p.add_argument("--out", required=True, help="corpus JSONL path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("score", help="count dictionary categories per prompt class")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dict", help=".dic lexicon (default: bundled example)")
    p.add_argument("--spec")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("metrics", help="hits, validities, SNR and profile match from a count matrix")
    p.add_argument("--counts", required=True, help="count matrix CSV (fine or aggregated)")
    p.add_argument("--spec")
    p.add_argument("--kind", help="label for this probe kind (default: file stem)")
    p.add_argument("--predictor", action="append", metavar="NAME=PATH[:COLUMN]",
                   help="per-category predictor table for regressing column totals; repeatable")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("structure", help="ordinal MDS of category correlations, rotated to the circle")
    p.add_argument("--counts", required=True)
    p.add_argument("--spec")
    p.add_argument("--correlation", choices=CORRELATIONS, default="spearman")
    p.add_argument("--dissimilarity", choices=DISSIMILARITIES, default="sqrt2")
    p.add_argument("--starts", type=int, default=1, help="MDS starts; the first is always classical scaling")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_structure)

    p = sub.add_parser("baseline-instrument", help="score the questionnaire items themselves")
    p.add_argument("--spec")
    p.add_argument("--dict")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline_instrument)

    p = sub.add_parser("baseline-wordfreq", help="English frequency statistics of dictionary entries")
    p.add_argument("--dict")
    p.add_argument("--unigrams", required=True, help="word,count CSV")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline_wordfreq)

    p = sub.add_parser("report", help="SVG charts and a text summary from metrics/structure JSON")
    p.add_argument("--metrics", action="append", required=True, help="metrics JSON; repeat per probe kind")
    p.add_argument("--structure")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ValueProbeError as exc:
        print(f"valueprobe {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
