"""Command-line pipeline: every operation as a reproducible subcommand.

Each run writes its artifacts plus a manifest JSON recording the resolved
configuration, a hash of it, input file checksums, tool version and wall
time. `lexmine rerun <manifest>` replays a recorded run. Option precedence:
command-line flags over --config file values over built-in defaults.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .bpe import learn_bpe
from .codeswitch import SRC_TO_TGT, TGT_TO_SRC, CodeSwitchConfig, codeswitch_corpus
from .corpus import count_frequencies, read_corpus, write_corpus
from .embeddings import fit_procrustes, induce_lexicon, load_vectors
from .lexicon import Lexicon, read_lexicon_pairs
from .lingmetrics import (
    FeatureVector,
    LossLog,
    char_overlap,
    load_wals,
    online_codelength,
    shared_wals,
    syntactic_distance,
    token_overlap,
)
from .mining import mine_documents, read_linked_documents, write_mined_pairs
from .retrieval_eval import GoldBitext, evaluate_prf, load_sentence_embeddings, prf_sweep, rmss_top1

OUTPUT_DIR_ENV = "LEXMINE_OUTPUT_DIR"

_DEFAULTS: dict[str, dict] = {
    "bpe-learn": {
        "corpus": None,
        "merges": 60000,
        "output": "bpe.merges",
    },
    "induce": {
        "src_vectors": None,
        "tgt_vectors": None,
        "seed_lexicon": None,
        "src_corpus": None,
        "cap": 200000,
        "csls_k": 10,
        "limit": None,
        "output": "projected.tsv",
    },
    "mine": {
        "documents": None,
        "lexicon": None,
        "threshold": 0.1,
        "jobs": 0,
        "output": "mined.tsv",
        "src_output": "mined.src",
        "tgt_output": "mined.tgt",
    },
    "codeswitch": {
        "input": None,
        "lexicon": None,
        "min_ratio": 0.2,
        "max_ratio": 0.5,
        "seed": 0,
        "direction": SRC_TO_TGT,
        "output": "codeswitched.txt",
        "stats_output": "codeswitch-stats.json",
    },
    "rmss": {
        "src_embeddings": None,
        "tgt_embeddings": None,
        "k": 4,
        "output": "rmss.tsv",
    },
    "eval-retrieval": {
        "predictions": None,
        "gold": None,
        "threshold": 0.0,
        "sweep": False,
        "output": "retrieval-report.json",
    },
    "metrics": {
        "corpus_a": None,
        "corpus_b": None,
        "merges": 8000,
        "features_a": None,
        "features_b": None,
        "wals": None,
        "lang_a": None,
        "lang_b": None,
        "output": "metrics.json",
    },
    "codelength": {
        "loss_log": None,
        "output": "codelength.json",
    },
}


def _require(config: dict, key: str):
    value = config.get(key)
    if value in (None, ""):
        raise ValueError(f"missing required option --{key.replace('_', '-')}")
    return value


def _out_path(config: dict, key: str) -> Path:
    out_dir = Path(config["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / config[key]


def _write_json(payload, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def _cmd_bpe_learn(config: dict):
    corpus_path = _require(config, "corpus")
    vocabulary = learn_bpe(read_corpus(corpus_path), int(config["merges"]))
    out = _out_path(config, "output")
    vocabulary.save(out)
    return [corpus_path], [out]


def _cmd_induce(config: dict):
    src_path = _require(config, "src_vectors")
    tgt_path = _require(config, "tgt_vectors")
    seed_path = _require(config, "seed_lexicon")
    corpus_path = _require(config, "src_corpus")
    limit = config.get("limit")
    src = load_vectors(src_path, limit=limit)
    tgt = load_vectors(tgt_path, limit=limit)
    seed_pairs, _ = read_lexicon_pairs(seed_path)
    frequencies = count_frequencies(read_corpus(corpus_path))
    linear_map = fit_procrustes(src, tgt, seed_pairs)
    lexicon = induce_lexicon(
        src, tgt, linear_map, frequencies, cap=int(config["cap"]), k=int(config["csls_k"])
    )
    out = _out_path(config, "output")
    lexicon.save(out)
    return [src_path, tgt_path, seed_path, corpus_path], [out]


def _cmd_mine(config: dict):
    documents_path = _require(config, "documents")
    lexicon_path = _require(config, "lexicon")
    jobs = int(config["jobs"]) or (os.cpu_count() or 1)
    mined = mine_documents(
        read_linked_documents(documents_path),
        Lexicon.load(lexicon_path),
        float(config["threshold"]),
        jobs=jobs,
    )
    tsv = _out_path(config, "output")
    src_out = _out_path(config, "src_output")
    tgt_out = _out_path(config, "tgt_output")
    write_mined_pairs(mined, tsv, src_out, tgt_out)
    return [documents_path, lexicon_path], [tsv, src_out, tgt_out]


def _cmd_codeswitch(config: dict):
    input_path = _require(config, "input")
    lexicon_path = _require(config, "lexicon")
    lexicon = Lexicon.load(lexicon_path)
    if config["direction"] == TGT_TO_SRC:
        lexicon = lexicon.inverted()
    switch_config = CodeSwitchConfig(
        min_ratio=float(config["min_ratio"]),
        max_ratio=float(config["max_ratio"]),
        rng_seed=int(config["seed"]),
        direction=config["direction"],
    )
    emitted, stats = codeswitch_corpus(read_corpus(input_path), lexicon, switch_config)
    out = _out_path(config, "output")
    write_corpus(emitted, out)
    stats_path = _out_path(config, "stats_output")
    _write_json(asdict(stats), stats_path)
    return [input_path, lexicon_path], [out, stats_path]


def _cmd_rmss(config: dict):
    src_path = _require(config, "src_embeddings")
    tgt_path = _require(config, "tgt_embeddings")
    src = load_sentence_embeddings(src_path, side="source")
    tgt = load_sentence_embeddings(tgt_path, side="target")
    top = rmss_top1(src, tgt, int(config["k"]))
    out = _out_path(config, "output")
    with open(out, "w", encoding="utf-8") as handle:
        for source_id, (tgt_index, score) in zip(src.ids, top):
            handle.write(f"{source_id}\t{tgt.ids[tgt_index]}\t{score!r}\n")
    return [src_path, tgt_path], [out]


def _read_predictions(path) -> dict[str, tuple[str, float]]:
    """TSV 'source-id<TAB>target-id<TAB>score'."""
    predictions: dict[str, tuple[str, float]] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'source<TAB>target<TAB>score'")
            try:
                score = float(fields[2])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric score {fields[2]!r}") from exc
            predictions[fields[0]] = (fields[1], score)
    return predictions


def _cmd_eval_retrieval(config: dict):
    predictions_path = _require(config, "predictions")
    gold_path = _require(config, "gold")
    predictions = _read_predictions(predictions_path)
    gold = GoldBitext.load(gold_path)
    if config["sweep"]:
        payload = [report.to_dict() for report in prf_sweep(predictions, gold)]
    else:
        payload = evaluate_prf(predictions, gold, float(config["threshold"])).to_dict()
    out = _out_path(config, "output")
    _write_json(payload, out)
    return [predictions_path, gold_path], [out]


def _cmd_metrics(config: dict):
    results: dict = {}
    inputs: list = []
    if config.get("corpus_a") and config.get("corpus_b"):
        corpus_a = list(read_corpus(config["corpus_a"]))
        corpus_b = list(read_corpus(config["corpus_b"]))
        results["char_overlap"] = char_overlap(corpus_a, corpus_b)
        results["token_overlap"] = token_overlap(corpus_a, corpus_b, int(config["merges"]))
        inputs += [config["corpus_a"], config["corpus_b"]]
    if config.get("features_a") and config.get("features_b"):
        vector_a = FeatureVector.from_json(config["features_a"])
        vector_b = FeatureVector.from_json(config["features_b"])
        results["syntactic_distance"] = syntactic_distance(vector_a, vector_b)
        inputs += [config["features_a"], config["features_b"]]
    if config.get("wals") and config.get("lang_a") and config.get("lang_b"):
        tables = load_wals(config["wals"])
        for language in (config["lang_a"], config["lang_b"]):
            if language not in tables:
                raise ValueError(f"language {language!r} not present in {config['wals']}")
        results["shared_wals"] = shared_wals(tables[config["lang_a"]], tables[config["lang_b"]])
        inputs.append(config["wals"])
    if not results:
        raise ValueError(
            "no metric inputs provided; pass corpora, feature vectors, or a typology table"
        )
    out = _out_path(config, "output")
    _write_json(results, out)
    return inputs, [out]


def _cmd_codelength(config: dict):
    log_path = _require(config, "loss_log")
    log = LossLog.load(log_path)
    bits = online_codelength(log)
    payload = {
        "codelength_bits": bits,
        "num_classes": log.num_classes,
        "num_subsets": len(log.subsets),
        "initial_bits": log.first_subset_tokens * math.log2(log.num_classes),
    }
    out = _out_path(config, "output")
    _write_json(payload, out)
    return [log_path], [out]


_COMMANDS = {
    "bpe-learn": _cmd_bpe_learn,
    "induce": _cmd_induce,
    "mine": _cmd_mine,
    "codeswitch": _cmd_codeswitch,
    "rmss": _cmd_rmss,
    "eval-retrieval": _cmd_eval_retrieval,
    "metrics": _cmd_metrics,
    "codelength": _cmd_codelength,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexmine",
        description="Weak-supervision bitext tools: lexicon induction, mining, code-switching, evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"lexmine {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--output-dir", help=f"artifact directory (default ${OUTPUT_DIR_ENV} or .)")

    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("bpe-learn", parents=[common], help="learn a BPE merge table from a corpus")
    p.add_argument("--corpus", help="training corpus, one sentence per line")
    p.add_argument("--merges", type=int, help="number of merge operations (default 60000)")
    p.add_argument("--output", help="merge file name (default bpe.merges)")

    p = sub.add_parser("induce", parents=[common], help="induce a projected lexicon from embeddings")
    p.add_argument("--src-vectors", help="source word vectors (text format)")
    p.add_argument("--tgt-vectors", help="target word vectors (text format)")
    p.add_argument("--seed-lexicon", help="seed translation TSV")
    p.add_argument("--src-corpus", help="source corpus for frequency ranking")
    p.add_argument("--cap", type=int, help="frequent-word cap (default 200000)")
    p.add_argument("--csls-k", type=int, help="CSLS neighborhood size (default 10)")
    p.add_argument("--limit", type=int, help="load at most this many vectors per table")
    p.add_argument("--output", help="projected lexicon TSV name (default projected.tsv)")

    p = sub.add_parser("mine", parents=[common], help="mine comparable sentences from linked documents")
    p.add_argument("--documents", help="JSONL of linked documents, or a directory of .src/.tgt pairs")
    p.add_argument("--lexicon", help="translation lexicon TSV")
    p.add_argument("--threshold", type=float, help="minimum Jaccard score (default 0.1)")
    p.add_argument("--jobs", type=int, help="parallel workers; 0 = all cores (default)")
    p.add_argument("--output", help="mined pairs TSV name (default mined.tsv)")
    p.add_argument("--src-output", help="parallel source text name (default mined.src)")
    p.add_argument("--tgt-output", help="parallel target text name (default mined.tgt)")

    p = sub.add_parser("codeswitch", parents=[common], help="generate a code-switched corpus")
    p.add_argument("--input", help="monolingual corpus, one sentence per line")
    p.add_argument("--lexicon", help="translation lexicon TSV")
    p.add_argument("--min-ratio", type=float, help="replacement floor (default 0.2)")
    p.add_argument("--max-ratio", type=float, help="replacement ceiling (default 0.5)")
    p.add_argument("--seed", type=int, help="RNG seed (default 0)")
    p.add_argument("--direction", choices=[SRC_TO_TGT, TGT_TO_SRC], help="lexicon orientation")
    p.add_argument("--output", help="output corpus name (default codeswitched.txt)")
    p.add_argument("--stats-output", help="stats JSON name (default codeswitch-stats.json)")

    p = sub.add_parser("rmss", parents=[common], help="margin-based retrieval over sentence embeddings")
    p.add_argument("--src-embeddings", help="source sentence embeddings (text format, ids as words)")
    p.add_argument("--tgt-embeddings", help="target sentence embeddings")
    p.add_argument("--k", type=int, help="neighborhood size (default 4)")
    p.add_argument("--output", help="predictions TSV name (default rmss.tsv)")

    p = sub.add_parser("eval-retrieval", parents=[common], help="precision/recall against gold bitext")
    p.add_argument("--predictions", help="predictions TSV: source, target, score")
    p.add_argument("--gold", help="gold TSV: source, target")
    p.add_argument("--threshold", type=float, help="assertion threshold (default 0)")
    p.add_argument("--sweep", action="store_const", const=True, help="emit the full P/R curve")
    p.add_argument("--output", help="report JSON name (default retrieval-report.json)")

    p = sub.add_parser("metrics", parents=[common], help="language-pair similarity metrics")
    p.add_argument("--corpus-a", help="first corpus (char/token overlap)")
    p.add_argument("--corpus-b", help="second corpus")
    p.add_argument("--merges", type=int, help="BPE merges per corpus for token overlap (default 8000)")
    p.add_argument("--features-a", help="first syntax feature vector JSON")
    p.add_argument("--features-b", help="second syntax feature vector JSON")
    p.add_argument("--wals", help="typology CSV: language,feature_id,value")
    p.add_argument("--lang-a", help="first language code for --wals")
    p.add_argument("--lang-b", help="second language code for --wals")
    p.add_argument("--output", help="metrics JSON name (default metrics.json)")

    p = sub.add_parser("codelength", parents=[common], help="online codelength from a loss log")
    p.add_argument("--loss-log", help="loss log JSON")
    p.add_argument("--output", help="result JSON name (default codelength.json)")

    p = sub.add_parser("rerun", help="replay a run from its manifest")
    p.add_argument("manifest", help="manifest JSON written by a previous run")

    return parser


def _resolve_config(args: argparse.Namespace) -> dict:
    defaults = _DEFAULTS[args.command]
    config = dict(defaults)
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as handle:
            file_config = json.load(handle)
        unknown = set(file_config) - set(defaults)
        if unknown:
            raise ValueError(f"unknown config keys for {args.command}: {sorted(unknown)}")
        config.update(file_config)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    config["output_dir"] = (
        getattr(args, "output_dir", None) or os.environ.get(OUTPUT_DIR_ENV) or "."
    )
    return config


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def _write_manifest(command: str, config: dict, inputs, outputs, elapsed: float) -> Path:
    out_dir = Path(config["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    canonical = json.dumps(config, sort_keys=True)
    manifest = {
        "command": command,
        "version": __version__,
        "config": config,
        "config_hash": hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
        "inputs": {str(path): _sha256(path) for path in inputs},
        "outputs": [str(path) for path in outputs],
        "wall_time_s": round(elapsed, 6),
    }
    path = out_dir / f"manifest-{command}.json"
    _write_json(manifest, path)
    return path


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        if args.command == "rerun":
            with open(args.manifest, "r", encoding="utf-8") as handle:
                manifest = json.load(handle)
            command = manifest["command"]
            if command not in _COMMANDS:
                raise ValueError(f"manifest names unknown command {command!r}")
            config = dict(manifest["config"])
        else:
            command = args.command
            config = _resolve_config(args)
        started = time.perf_counter()
        inputs, outputs = _COMMANDS[command](config)
        elapsed = time.perf_counter() - started
        _write_manifest(command, config, inputs, outputs, elapsed)
        return 0
    except Exception as exc:  # single machine-readable error line on stderr
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
