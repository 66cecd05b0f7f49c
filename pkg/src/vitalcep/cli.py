"""Command-line pipeline: convert, query, bench, cep, cohort, stream-demo,
metrics.

Exit codes: 0 success, 1 usage problem, 2 data/processing error. Reports are
machine-parseable CSV; figures are emitted as CSV data for external plotting.
"""

import argparse
import sys
from pathlib import Path

from . import csv2rdf
from .bus import StreamBus, UnavailableError, sink_to_store
from .cep import (
    CepEngine,
    DEFAULT_LOAD_TIERS,
    DEFAULT_RULE_TEXTS,
    DEFAULT_SEED,
    build_cohort,
    classify_cohort,
    cohort_csv,
    measure_deployment_latency,
    parse_rule_file,
    read_events,
    risk_distribution_csv,
    write_derived,
)
from .errors import VitalcepError
from .kb import compute_metrics, summarize_ontology
from .query import (
    bench,
    execute,
    max_parallelism,
    parse_combo_spec,
    parse_query,
)
from .rdf import (
    TripleStore,
    parse_ntriples,
    parse_turtle,
    partition,
    serialize_ntriples,
    serialize_turtle,
)
from .rdf.vocab import NAMESPACE_ALIASES, PPG


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text("utf-8")


def load_store(path: str) -> TripleStore:
    """Load .ttl or .nt (by extension; N-Triples otherwise)."""
    text = _read_text(path)
    if path.endswith((".ttl", ".turtle")):
        return TripleStore(parse_turtle(text, aliases=NAMESPACE_ALIASES))
    return TripleStore(parse_ntriples(text, aliases=NAMESPACE_ALIASES))


def _parallelism(value: str) -> int:
    return max_parallelism() if value == "max" else int(value)


def _write_output(path: str | None, content: str):
    if path is None or path == "-":
        sys.stdout.write(content)
    else:
        Path(path).write_text(content, "utf-8")


# -- subcommands ----------------------------------------------------------------


def cmd_convert(args) -> int:
    config = csv2rdf.PreprocessConfig(normalize_export=args.normalize)
    records = csv2rdf.parse_csv(_read_text(args.csv))
    cleaned = csv2rdf.preprocess(records, config)
    exported, integer_literals = csv2rdf.apply_export_options(cleaned, config)
    triples = csv2rdf.convert(
        exported, args.patient, namespace=args.namespace, integer_literals=integer_literals
    )
    store = TripleStore(triples)
    text = (
        serialize_ntriples(store)
        if args.format == "ntriples"
        else serialize_turtle(store)
    )
    _write_output(args.out, text)
    return 0


def cmd_query(args) -> int:
    store = load_store(args.store)
    plan = parse_query(_read_text(args.query))
    chunked = partition(store, args.chunks)
    result = execute(chunked, plan, parallelism=_parallelism(args.parallelism))
    sep = "\t" if args.format == "tsv" else ","
    lines = [sep.join(result.variables)]
    for row in result.serialized_rows():
        lines.append(sep.join(row))
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_bench(args) -> int:
    store = load_store(args.store)
    chunked = partition(store, args.chunks)
    query_dir = Path(args.queries)
    files = sorted(query_dir.glob("*.rq"))
    if not files:
        raise VitalcepError(f"no .rq query files in {query_dir}")
    queries = [(f.stem, parse_query(f.read_text("utf-8"))) for f in files]
    combos = parse_combo_spec(args.combos, args.chunks)
    report = bench(
        chunked,
        queries,
        combos,
        repeats=args.repeats,
        parallelism=_parallelism(args.parallelism),
    )
    _write_output(args.out, report.to_csv())
    return 0


def cmd_cep(args) -> int:
    rules = parse_rule_file(_read_text(args.rules)) if args.rules else []
    engine = CepEngine()
    for i, rule in enumerate(rules, start=1):
        engine.deploy(rule, f"R{i}")
    derived = []
    if args.events:
        for event in read_events(_read_text(args.events)):
            derived.extend(engine.ingest(event))
    _write_output(args.out, write_derived(derived))
    if args.report:
        loads = tuple(int(x) for x in args.loads.split(","))
        latency = measure_deployment_latency(
            rules or list(DEFAULT_RULE_TEXTS), loads=loads
        )
        _write_output(args.report, latency.to_csv())
    return 0


def cmd_cohort(args) -> int:
    if args.all_normal:
        diseased, free, borderline = 0, args.patients, 0
    elif args.recipe:
        parts = [int(x) for x in args.recipe.split(":")]
        if len(parts) != 3 or sum(parts) != args.patients:
            raise VitalcepError(
                f"recipe {args.recipe!r} must be d:f:b summing to {args.patients}"
            )
        diseased, free, borderline = parts
    else:
        diseased, free, borderline = _apportion(args.patients)
    patients = build_cohort(diseased, free, borderline, seed=args.seed)
    report = classify_cohort(patients)
    summary = (
        f"patients,{report.total}\n"
        f"diseased,{report.diseased_count}\n"
        f"disease_free,{report.free_count}\n"
        f"undetected,{report.undetected_count}\n"
        f"accuracy,{report.accuracy:.4f}\n"
    )
    _write_output(args.out, summary)
    if args.detail:
        _write_output(args.detail, cohort_csv(report))
    if args.distribution:
        _write_output(args.distribution, risk_distribution_csv(report))
    return 0


def _apportion(total: int) -> tuple[int, int, int]:
    """Scale the default 60:9:12 composition with largest remainders."""
    weights = (60, 9, 12)
    base = [total * w // 81 for w in weights]
    remainders = sorted(
        range(3), key=lambda i: (total * weights[i]) % 81, reverse=True
    )
    missing = total - sum(base)
    for i in remainders[:missing]:
        base[i] += 1
    return base[0], base[1], base[2]


def cmd_stream_demo(args) -> int:
    broker_ids = tuple(chr(ord("A") + i) for i in range(args.brokers))
    bus = StreamBus(broker_ids)
    bus.create_topic("rdf-stream", partitions=args.partitions, replication=args.replication)

    fail_at = args.events // 2 if args.fail != "none" else None
    produced = 0
    for i in range(args.events):
        if fail_at is not None and i == fail_at:
            bus.fail_broker(args.fail)
        payload = f'<{PPG}Time_demo_{i}> <{PPG}hasHR> "{60 + i % 60}"^^<http://www.w3.org/2001/XMLSchema#integer> .'
        bus.produce("rdf-stream", payload.encode("utf-8"), key=f"patient{i % 7}")
        produced += 1

    position = bus.new_position("demo", "rdf-stream")
    seen: list[bytes] = []
    per_partition: dict[int, list[int]] = {}
    while True:
        records, position = bus.consume(position, max_records=200)
        if not records:
            break
        for p, record in records:
            seen.append(record.payload)
            per_partition.setdefault(p, []).append(record.offset)
    fifo_ok = all(offs == sorted(offs) for offs in per_partition.values())
    duplicates = len(seen) - len(set(seen))
    lines = [
        "metric,value",
        f"produced,{produced}",
        f"delivered,{len(seen)}",
        f"duplicates,{duplicates}",
        f"fifo_per_partition,{'ok' if fifo_ok else 'violated'}",
        f"live_brokers,{'|'.join(bus.alive_brokers())}",
    ]
    if args.sink:
        result = sink_to_store(bus, "rdf-stream", "sink", args.sink, batch_size=100)
        lines.append(f"sink_lines,{result.records_written}")
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_metrics(args) -> int:
    store = load_store(args.ontology)
    summary = summarize_ontology(store)
    metrics = compute_metrics(summary) if summary.class_count else None
    lines = [
        "metric,value",
        f"class_count,{summary.class_count}",
        f"data_property_count,{summary.data_property_count}",
        f"object_property_count,{summary.object_property_count}",
        f"individual_count,{summary.individual_count}",
        f"subclass_axiom_count,{summary.subclass_axiom_count}",
        f"axiom_count,{summary.axiom_count}",
    ]
    if metrics is not None:
        lines.extend(f"{name},{value}" for name, value in metrics.as_rows())
        if metrics.degenerate:
            lines.append(f"degenerate,{'|'.join(metrics.degenerate)}")
    else:
        lines.append("degenerate,all (no classes)")
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0


# -- argument wiring --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vitalcep",
        description="Vital-sign RDF pipeline: convert, query, stream, classify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="PPG CSV to RDF")
    p.add_argument("csv", help="input CSV path or '-'")
    p.add_argument("--patient", required=True, help="patient identifier")
    p.add_argument("--out", default="-", help="output path (default stdout)")
    p.add_argument("--format", choices=("turtle", "ntriples"), default="turtle")
    p.add_argument("--namespace", default=PPG)
    p.add_argument(
        "--normalize",
        action="store_true",
        help="min-max scale values to [0,1] on export (decimals, not integers)",
    )
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("query", help="run one query over a store")
    p.add_argument("store", help="RDF file (.ttl or .nt)")
    p.add_argument("query", help="query file or '-'")
    p.add_argument("--chunks", type=int, default=1)
    p.add_argument("--parallelism", default="1", help="worker count or 'max'")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="time queries over chunk combinations")
    p.add_argument("store")
    p.add_argument("queries", help="directory of .rq files")
    p.add_argument("--chunks", type=int, default=5)
    p.add_argument("--combos", default="1;2;3;4;5", help="e.g. '1;2' or '1+2;2+3'")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--parallelism", default="1")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("cep", help="run rules over an event stream")
    p.add_argument("--rules", help="rule file (one rule per ';' statement)")
    p.add_argument("--events", help="newline-delimited JSON events")
    p.add_argument("--out", default="-", help="derived events output")
    p.add_argument("--report", help="also emit deployment-latency CSV here")
    p.add_argument(
        "--loads",
        default=",".join(str(x) for x in DEFAULT_LOAD_TIERS),
        help="events/s tiers for --report",
    )
    p.set_defaults(func=cmd_cep)

    p = sub.add_parser("cohort", help="synthetic cohort classification study")
    p.add_argument("--patients", type=int, default=81)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--recipe", help="diseased:free:borderline composition")
    p.add_argument("--all-normal", action="store_true", help="every patient normal")
    p.add_argument("--out", default="-")
    p.add_argument("--detail", help="per-patient outcome CSV path")
    p.add_argument("--distribution", help="risk distribution CSV path")
    p.set_defaults(func=cmd_cohort)

    p = sub.add_parser("stream-demo", help="replicated pub-sub delivery demo")
    p.add_argument("--brokers", type=int, default=3)
    p.add_argument("--replication", type=int, default=3)
    p.add_argument("--partitions", type=int, default=3)
    p.add_argument("--events", type=int, default=1000)
    p.add_argument("--fail", default="none", help="broker id to fail mid-run, or 'none'")
    p.add_argument("--sink", help="also sink the topic to this N-Triples file")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_stream_demo)

    p = sub.add_parser("metrics", help="ontology schema metrics")
    p.add_argument("ontology", help="ontology file (.ttl or .nt)")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_metrics)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (VitalcepError, UnavailableError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
