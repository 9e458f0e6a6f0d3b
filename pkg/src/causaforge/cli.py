"""Staged command-line front end.

Each subcommand runs one stage and writes its declared artifacts atomically,
so an interrupted run never leaves a partial file and a finished stage can be
reused as a cached input. Configuration comes from an INI-style file whose
keys are all mirrored as flags; flags win over file values.

Exit codes: 0 success, 1 usage or configuration error, 2 missing prerequisite
artifact, 3 provider failure. Diagnostics go to stderr as one JSON object per
line.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from dataclasses import dataclass, fields

from . import corpus as corpus_mod
from . import extraction, graph as graph_mod, hypogen, linkpred
from .embedding import (
    EmbeddingConfig,
    generate_walks,
    load_embeddings,
    save_embeddings,
    train_embeddings,
)
from .errors import CausaforgeError, ProviderExhausted, UnknownConcept
from .evalstats import TsneConfig, build_evaluation_report, load_ratings_csv, report_to_json
from .ioutil import atomic_write_text
from .providers import HttpProvider, MockProvider
from .ratelimit import RateBudget, SimulatedClock
from .extraction import normalize_concept

STAGES = ("ingest", "extract", "build-graph", "embed", "predict", "generate", "evaluate")

MOCK_TIMESTAMP = "1970-01-01T00:00:00+00:00"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISSING_ARTIFACT = 2
EXIT_PROVIDER = 3


class UsageError(Exception):
    pass


class MissingArtifact(Exception):
    def __init__(self, path: str, hint: str):
        super().__init__(f"missing prerequisite artifact {path!r}; run `{hint}` first")
        self.path = path


@dataclass
class PipelineConfig:
    # paths
    corpus: str = ""
    chunks: str = ""
    assertions: str = ""
    graph: str = ""
    embeddings: str = ""
    candidates: str = ""
    hypotheses: str = ""
    ratings: str = ""
    vectors: str = ""
    report: str = ""
    # corpus filtering / chunking
    keywords: str = "psychol"
    journal_term: str = ""
    max_tokens: int = 4000
    # provider
    endpoint: str = ""
    model: str = "gpt-4"
    mock: bool = False
    fixture_dir: str = ""
    api_key_env: str = "CAUSAFORGE_API_KEY"
    # rate budget
    requests_per_minute: int = 60
    tokens_per_minute: int = 150000
    # embedding
    dims: int = 128
    walk_length: int = 80
    walks_per_node: int = 10
    p: float = 1.0
    q: float = 1.0
    window: int = 10
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    directed: bool = False
    # link prediction
    threshold: float = 0.5
    top_k: int = 500
    focus: str = ""
    # hypothesis generation
    cap: int = 130
    verify: bool = False
    # evaluation
    bonferroni_family: int = 0  # 0 = all pairs
    tsne_perplexity: float = 10.0
    tsne_iterations: int = 1000
    tsne_learning_rate: float = 100.0
    curve_window: int = 2
    # global
    seed: int | None = None


_SECTION_KEYS = {
    "run": ("seed",),
    "paths": (
        "corpus",
        "chunks",
        "assertions",
        "graph",
        "embeddings",
        "candidates",
        "hypotheses",
        "ratings",
        "vectors",
        "report",
    ),
    "filter": ("keywords", "journal_term"),
    "chunking": ("max_tokens",),
    "provider": ("endpoint", "model", "mock", "fixture_dir", "api_key_env"),
    "budget": ("requests_per_minute", "tokens_per_minute"),
    "embedding": (
        "dims",
        "walk_length",
        "walks_per_node",
        "p",
        "q",
        "window",
        "negatives",
        "epochs",
        "learning_rate",
        "directed",
    ),
    "linkpred": ("threshold", "top_k", "focus"),
    "hypogen": ("cap", "verify"),
    "evaluation": (
        "bonferroni_family",
        "tsne_perplexity",
        "tsne_iterations",
        "tsne_learning_rate",
        "curve_window",
    ),
}

_FIELD_TYPES = {f.name: f.type for f in fields(PipelineConfig)}


def _coerce(name: str, raw: str):
    kind = _FIELD_TYPES[name]
    try:
        if kind == "bool":
            lowered = raw.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if kind == "int" or name == "seed":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError as exc:
        raise UsageError(f"bad config value for {name}: {exc}") from exc


def load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise UsageError(f"malformed config file {path}: {exc}") from exc
    values: dict = {}
    for section, keys in _SECTION_KEYS.items():
        if not parser.has_section(section):
            continue
        for key in parser[section]:
            if key not in keys:
                raise UsageError(f"unknown config key [{section}] {key}")
            values[key] = _coerce(key, parser[section][key])
    return values


def build_config(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig()
    if args.config:
        for name, value in load_config_file(args.config).items():
            setattr(config, name, value)
    for field_info in fields(PipelineConfig):
        flag_value = getattr(args, field_info.name, None)
        if flag_value is not None:
            setattr(config, field_info.name, flag_value)
    if config.seed is None:
        raise UsageError("a seed is required (set [run] seed or pass --seed)")
    return config


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems on our exit code."""

    def error(self, message: str):
        raise UsageError(message)


def _add_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file; flags override its values")
    parser.add_argument("--seed", type=int, help="global RNG seed (required somewhere)")
    group = parser.add_argument_group("paths")
    for name in _SECTION_KEYS["paths"]:
        group.add_argument(f"--{name}", help=f"path of the {name} artifact")
    group = parser.add_argument_group("corpus")
    group.add_argument("--keywords", help="comma-separated relevance keywords")
    group.add_argument("--journal-term", dest="journal_term", help="required journal substring")
    group.add_argument("--max-tokens", dest="max_tokens", type=int, help="chunk token budget")
    group = parser.add_argument_group("provider")
    group.add_argument("--endpoint", help="chat-completions endpoint URL")
    group.add_argument("--model", help="provider model tag")
    mock = group.add_mutually_exclusive_group()
    mock.add_argument("--mock", dest="mock", action="store_true", default=None,
                      help="use the deterministic offline provider")
    mock.add_argument("--no-mock", dest="mock", action="store_false", default=None)
    group.add_argument("--fixture-dir", dest="fixture_dir", help="canned response directory")
    group.add_argument("--api-key-env", dest="api_key_env", help="env var holding the API key")
    group.add_argument("--requests-per-minute", dest="requests_per_minute", type=int)
    group.add_argument("--tokens-per-minute", dest="tokens_per_minute", type=int)
    group = parser.add_argument_group("embedding")
    group.add_argument("--dims", type=int, help="embedding dimensions")
    group.add_argument("--walk-length", dest="walk_length", type=int)
    group.add_argument("--walks-per-node", dest="walks_per_node", type=int)
    group.add_argument("--p", type=float, help="walk return parameter")
    group.add_argument("--q", type=float, help="walk in-out parameter")
    group.add_argument("--window", type=int, help="skip-gram window")
    group.add_argument("--negatives", type=int, help="negatives per positive")
    group.add_argument("--epochs", type=int)
    group.add_argument("--learning-rate", dest="learning_rate", type=float)
    group.add_argument("--directed", action="store_true", default=None,
                       help="walk out-edges only")
    group = parser.add_argument_group("link prediction")
    group.add_argument("--threshold", type=float, help="cosine gate in [-1, 1]")
    group.add_argument("--top-k", dest="top_k", type=int, help="ranked candidates kept")
    group.add_argument("--focus", help="anchor concept for candidates and hypotheses")
    group = parser.add_argument_group("hypothesis generation")
    group.add_argument("--cap", type=int, help="max hypotheses generated")
    group.add_argument("--verify", action="store_true", default=None,
                       help="second-pass directionality check")
    group = parser.add_argument_group("evaluation")
    group.add_argument("--bonferroni-family", dest="bonferroni_family", type=int,
                       help="correction family size (0 = all pairs)")
    group.add_argument("--tsne-perplexity", dest="tsne_perplexity", type=float)
    group.add_argument("--tsne-iterations", dest="tsne_iterations", type=int)
    group.add_argument("--tsne-learning-rate", dest="tsne_learning_rate", type=float)
    group.add_argument("--curve-window", dest="curve_window", type=int)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="causaforge", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest="stage", metavar="stage")
    for stage in STAGES:
        sub = subparsers.add_parser(stage, help=f"run the {stage} stage",
                                    formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        _add_flags(sub)
    return parser


def emit_error(kind: str, message: str, **details) -> None:
    payload = {"error": kind, "message": message}
    payload.update(details)
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def _require(path: str, what: str, producer: str) -> str:
    if not path:
        raise UsageError(f"no path configured for the {what} artifact")
    if not os.path.exists(path):
        raise MissingArtifact(path, producer)
    return path


def _make_provider(config: PipelineConfig):
    if config.mock:
        return MockProvider(fixture_dir=config.fixture_dir or None)
    if not config.endpoint:
        raise UsageError("provider endpoint required unless --mock is set")
    return HttpProvider(config.endpoint, api_key_env=config.api_key_env)


def _budget(config: PipelineConfig) -> RateBudget:
    return RateBudget(
        max_requests_per_minute=config.requests_per_minute,
        max_tokens_per_minute=config.tokens_per_minute,
    )


def _embedding_config(config: PipelineConfig) -> EmbeddingConfig:
    return EmbeddingConfig(
        dims=config.dims,
        walk_length=config.walk_length,
        walks_per_node=config.walks_per_node,
        return_param_p=config.p,
        inout_param_q=config.q,
        window=config.window,
        negatives_per_positive=config.negatives,
        epochs=config.epochs,
        initial_learning_rate=config.learning_rate,
        seed=config.seed,
        directed=config.directed,
    )


def stage_ingest(config: PipelineConfig) -> None:
    corpus_path = _require(config.corpus, "corpus", "provide a corpus file")
    if not config.chunks:
        raise UsageError("no path configured for the chunks artifact")
    keywords = tuple(k.strip() for k in config.keywords.split(",") if k.strip())
    criteria = corpus_mod.FilterCriteria(
        keywords=keywords, journal_required_term=config.journal_term or None
    )
    documents = corpus_mod.filter_documents(corpus_mod.load_corpus(corpus_path), criteria)
    chunks: list[corpus_mod.TextChunk] = []
    for document in documents:
        cleaned = corpus_mod.strip_references(document.body_text)
        chunks.extend(corpus_mod.chunk_text(cleaned, document.doc_id, config.max_tokens))
    corpus_mod.save_chunks(chunks, config.chunks)
    print(f"ingest: {len(documents)} documents kept, {len(chunks)} chunks -> {config.chunks}")


def stage_extract(config: PipelineConfig) -> None:
    chunks_path = _require(config.chunks, "chunks", "causaforge ingest")
    if not config.assertions:
        raise UsageError("no path configured for the assertions artifact")
    chunks = corpus_mod.load_chunks(chunks_path)
    provider = _make_provider(config)
    clock = SimulatedClock() if config.mock else None
    assertions, failures = extraction.extract_from_chunks(
        chunks, provider, _budget(config), model_tag=config.model, clock=clock
    )
    if config.verify:
        assertions = extraction.verify_assertions(
            assertions, provider, _budget(config), model_tag=config.model, clock=clock
        )
    extraction.save_assertions(assertions, config.assertions)
    print(
        f"extract: {len(assertions)} assertions from {len(chunks)} chunks "
        f"({failures} unparseable responses) -> {config.assertions}"
    )


def stage_build_graph(config: PipelineConfig) -> None:
    assertions_path = _require(config.assertions, "assertions", "causaforge extract")
    if not config.graph:
        raise UsageError("no path configured for the graph artifact")
    assertions = extraction.load_assertions(assertions_path)
    graph = graph_mod.CausalGraph.from_assertions(assertions)
    graph_mod.save_graph(graph, config.graph)
    print(
        f"build-graph: {graph.node_count} concepts, {graph.edge_count} edges -> {config.graph}"
    )


def stage_embed(config: PipelineConfig) -> None:
    graph_path = _require(config.graph, "graph", "causaforge build-graph")
    if not config.embeddings:
        raise UsageError("no path configured for the embeddings artifact")
    graph = graph_mod.load_graph(graph_path)
    embedding_config = _embedding_config(config)
    walks = generate_walks(graph, embedding_config)
    table = train_embeddings(walks, embedding_config)
    save_embeddings(table, config.embeddings)
    print(f"embed: {len(table.vectors)} vectors of dim {table.dims} -> {config.embeddings}")


def stage_predict(config: PipelineConfig) -> None:
    graph_path = _require(config.graph, "graph", "causaforge build-graph")
    embeddings_path = _require(config.embeddings, "embeddings", "causaforge embed")
    if not config.candidates:
        raise UsageError("no path configured for the candidates artifact")
    graph = graph_mod.load_graph(graph_path)
    table = load_embeddings(embeddings_path)
    focus = {normalize_concept(config.focus)} if config.focus else None
    ranked = linkpred.predict_links(graph, table, config.threshold, config.top_k, focus)
    linkpred.save_candidates(ranked, config.candidates)
    print(f"predict: {len(ranked)} candidate pairs -> {config.candidates}")


def stage_generate(config: PipelineConfig) -> None:
    graph_path = _require(config.graph, "graph", "causaforge build-graph")
    candidates_path = _require(config.candidates, "candidates", "causaforge predict")
    if not config.hypotheses:
        raise UsageError("no path configured for the hypotheses artifact")
    graph = graph_mod.load_graph(graph_path)
    ranked = linkpred.load_candidates(candidates_path)
    if config.focus:
        ranked = hypogen.select_focus_pairs(ranked, normalize_concept(config.focus), config.cap)
    else:
        ranked = ranked[: config.cap]
    provider = _make_provider(config)
    clock = SimulatedClock() if config.mock else None
    created_at = MOCK_TIMESTAMP if config.mock else None
    hypotheses = hypogen.generate_hypotheses(
        ranked,
        provider,
        _budget(config),
        graph,
        model_tag=config.model,
        clock=clock,
        created_at=created_at,
    )
    hypogen.save_hypotheses(hypotheses, config.hypotheses)
    print(f"generate: {len(hypotheses)} hypotheses -> {config.hypotheses}")


def stage_evaluate(config: PipelineConfig) -> None:
    ratings_path = _require(config.ratings, "ratings", "provide a ratings CSV")
    vectors_path = _require(config.vectors, "vectors", "provide statement vectors")
    if not config.report:
        raise UsageError("no path configured for the report artifact")
    matrix = load_ratings_csv(ratings_path)
    table = load_embeddings(vectors_path)
    tsne_config = TsneConfig(
        perplexity=config.tsne_perplexity,
        iterations=config.tsne_iterations,
        learning_rate=config.tsne_learning_rate,
        seed=config.seed,
    )
    report, tables = build_evaluation_report(
        matrix,
        table.vectors,
        tsne_config,
        bonferroni_family=config.bonferroni_family or None,
        curve_window=config.curve_window,
    )
    atomic_write_text(config.report, report_to_json(report))
    stem, _ = os.path.splitext(config.report)
    for name, text in tables.items():
        atomic_write_text(f"{stem}_{name}.csv", text)
    print(f"evaluate: report -> {config.report} (+ {len(tables)} CSV tables)")


_STAGE_RUNNERS = {
    "ingest": stage_ingest,
    "extract": stage_extract,
    "build-graph": stage_build_graph,
    "embed": stage_embed,
    "predict": stage_predict,
    "generate": stage_generate,
    "evaluate": stage_evaluate,
}


def execute_stage(stage: str, config: PipelineConfig) -> int:
    try:
        _STAGE_RUNNERS[stage](config)
        return EXIT_OK
    except MissingArtifact as exc:
        emit_error("missing_artifact", str(exc), path=exc.path)
        return EXIT_MISSING_ARTIFACT
    except ProviderExhausted as exc:
        emit_error("provider_failure", str(exc))
        return EXIT_PROVIDER
    except UsageError as exc:
        emit_error("usage", str(exc))
        return EXIT_USAGE
    except (CausaforgeError, UnknownConcept, ValueError, KeyError) as exc:
        emit_error("invalid_input", f"{type(exc).__name__}: {exc}")
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if not args.stage:
            raise UsageError("a stage subcommand is required (see --help)")
        config = build_config(args)
    except UsageError as exc:
        emit_error("usage", str(exc))
        return EXIT_USAGE
    return execute_stage(args.stage, config)


if __name__ == "__main__":
    sys.exit(main())
