"""Command-line front end: analyze -> generate -> summarize -> evaluate.

Every stage reads and writes plain, self-describing files so runs are
reproducible and diffable. Per-document backend failures are recorded and
tolerated; a stage exits nonzero only when nothing succeeded.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys
import threading
from importlib import resources as importlib_resources
from pathlib import Path

from .analyzer import AnalyzerError, ingest_annotated_corpus
from .bridge import BackendSpec, BridgeError, SummarizerClient
from .evaluator import (
    ScoreWeights,
    aggregate_csv,
    build_report,
    report_to_text,
)
from .extractor import ExtractionVocabulary, extract_facts
from .generator import (
    GenerationError,
    collect_lexicon,
    generate_documents,
    load_config,
    load_fact_tree,
    read_bundle,
    write_bundle,
)
from .grammar import GrammarError
from .matcher import DEFAULT_THRESHOLD, ResourceError, load_resources, overlap

RESOURCES_ENV = "FACTHARNESS_RESOURCES"


def _default_resources_dir() -> Path:
    env = os.environ.get(RESOURCES_ENV)
    if env:
        return Path(env)
    return Path(str(importlib_resources.files("factharness") / "data" / "resources"))


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def cmd_analyze(args: argparse.Namespace) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_file():
        print(f"error: corpus file not found: {corpus}", file=sys.stderr)
        return 1
    try:
        with corpus.open(encoding="utf-8") as fh:
            table = ingest_annotated_corpus(fh)
    except AnalyzerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.min_count > 1:
        table = table.filtered(args.min_count)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _atomic_write(out, table.to_text())
    print(f"analyzed {corpus} -> {out} ({len(table)} entries)")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config, seed=args.seed, document_count=args.documents)
        documents = generate_documents(config)
        tree = load_fact_tree(config.fact_tree)
        from .analyzer import FrequencyTable
        freq = FrequencyTable.from_text(
            Path(config.frequency_table).read_text(encoding="utf-8")
        )
        extra = None
        if config.extra_lexicon:
            from .extractor import load_lexicon
            extra = load_lexicon(str(config.extra_lexicon))
        lexicon = collect_lexicon(tree, freq, extra)
        write_bundle(documents, args.out, lexicon)
    except (GenerationError, GrammarError, AnalyzerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"generated {len(documents)} documents -> {args.out}")
    return 0


def _make_backend_spec(args: argparse.Namespace) -> BackendSpec | None:
    chosen = [
        spec for spec in (
            ("file", args.summaries_dir),
            ("subprocess", args.backend_cmd),
            ("http", args.backend_http),
        ) if spec[1]
    ]
    if len(chosen) != 1:
        print("error: choose exactly one of --summaries-dir, --backend-cmd, --backend-http",
              file=sys.stderr)
        return None
    transport, location = chosen[0]
    return BackendSpec(transport, location, timeout=args.timeout,
                       max_retries=args.retries)


def cmd_evaluate(args: argparse.Namespace) -> int:
    spec = _make_backend_spec(args)
    if spec is None:
        return 2
    bundle_dir = Path(args.bundle)
    lexicon_path = Path(args.lexicon) if args.lexicon else bundle_dir / "lexicon.tsv"
    resources_dir = Path(args.resources) if args.resources else _default_resources_dir()
    try:
        documents = read_bundle(bundle_dir)
        res = load_resources(
            str(resources_dir / "synonyms.tsv"),
            str(resources_dir / "antonyms.tsv"),
            str(resources_dir / "taxonomy.tsv"),
            str(resources_dir / "vectors.txt"),
        )
        vocab = ExtractionVocabulary.from_lexicon_file(str(lexicon_path), res)
    except (GenerationError, ResourceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not documents:
        print("no documents in bundle; nothing to do")
        return 0

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    backend_id = args.backend_id or spec.transport
    weights = ScoreWeights()
    local = threading.local()

    def client_for_thread() -> SummarizerClient:
        client = getattr(local, "client", None)
        if client is None:
            client = SummarizerClient(spec)
            local.client = client
            clients.append(client)
        return client

    clients: list[SummarizerClient] = []
    reports = []
    failures: list[tuple[str, str]] = []

    def evaluate_one(doc):
        summary = client_for_thread().summarize(doc)
        table = extract_facts(summary, vocab)
        result = overlap(doc.truth, table, res, threshold=args.threshold)
        return build_report(doc, summary, result, backend_id, weights)

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        futures = {pool.submit(evaluate_one, doc): doc for doc in documents}
        for future in concurrent.futures.as_completed(futures):
            doc = futures[future]
            try:
                report = future.result()
            except (BridgeError, ValueError) as exc:
                # backend failures and per-document scoring errors are both
                # recorded; the batch keeps going
                failures.append((doc.id, str(exc)))
                _atomic_write(out_dir / f"{doc.id}.report",
                              "# factharness evaluation report v1\n"
                              f"document: {doc.id}\nbackend: {backend_id}\n"
                              f"status: failed\nerror: {exc}\n")
                continue
            reports.append(report)
            _atomic_write(out_dir / f"{report.document_id}.report", report_to_text(report))
    for client in clients:
        client.close()

    if reports:
        _atomic_write(out_dir / "aggregate.csv", aggregate_csv(reports))
    for doc_id, message in failures:
        print(f"failed: {doc_id}: {message}", file=sys.stderr)
    print(f"evaluated {len(reports)}/{len(documents)} documents -> {out_dir}")
    if reports or not documents:
        return 0
    return 1


def cmd_run(args: argparse.Namespace) -> int:
    out = Path(args.out)
    gen_args = argparse.Namespace(
        config=args.config, out=str(out / "documents"),
        seed=args.seed, documents=args.documents,
    )
    status = cmd_generate(gen_args)
    if status != 0:
        return status
    eval_args = argparse.Namespace(
        bundle=str(out / "documents"), out=str(out / "reports"),
        summaries_dir=args.summaries_dir, backend_cmd=args.backend_cmd,
        backend_http=args.backend_http, lexicon=None,
        resources=args.resources, jobs=args.jobs, threshold=args.threshold,
        timeout=args.timeout, retries=args.retries, backend_id=args.backend_id,
    )
    return cmd_evaluate(eval_args)


def _add_backend_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--summaries-dir", help="file transport: directory of <id>.summary files")
    parser.add_argument("--backend-cmd", help="subprocess transport: command speaking the line protocol")
    parser.add_argument("--backend-http", help="http transport: URL accepting POSTed text")
    parser.add_argument("--backend-id", default="", help="label for reports (default: transport)")
    parser.add_argument("--resources", help=f"semantic resources dir (default ${RESOURCES_ENV} or bundled)")
    parser.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                        help="similarity match threshold")
    parser.add_argument("--timeout", type=float, default=30.0, help="backend timeout, seconds")
    parser.add_argument("--retries", type=int, default=2, help="retries per document")
    parser.add_argument("--jobs", type=int, default=1, help="concurrent documents")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factharness",
        description="Reference-free summarization evaluation on synthetic documents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="count lexeme/relation frequencies in an annotated corpus")
    p.add_argument("corpus")
    p.add_argument("out")
    p.add_argument("--min-count", type=int, default=1, help="drop entries below this count")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="render a document bundle from a generation config")
    p.add_argument("config")
    p.add_argument("out")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--documents", type=int, default=None, help="override the document count")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="summarize, extract, and score a bundle")
    p.add_argument("bundle")
    p.add_argument("out")
    p.add_argument("--lexicon", help="override the bundle lexicon path")
    _add_backend_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="generate then evaluate in one go")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--documents", type=int, default=None)
    _add_backend_flags(p)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
