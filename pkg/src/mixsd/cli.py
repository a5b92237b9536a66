"""Command-line entry point.

Subcommands cover corpus generation (gen-kgfact, gen-kgfunc), supervision
construction (mix, sft-targets), NLL diagnostics (score-nll, ecdf,
overlap), parameter-space diagnostics (fisher, displacement, correlate),
and error-mode classification (classify-errors).

Every run writes a run_manifest.json with the resolved configuration,
seeds, toolkit version, and input/output digests.  Outputs are written
atomically; diagnostics go to standard error only.

Exit codes: 0 success, 2 configuration error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from . import classify as classifymod
from . import diagnostics as diag
from . import fisher as fishermod
from . import kgfact, kgfunc, vecio
from .backend import Backend
from .datasets import FORMAT_VERIFIER, load_mix_dataset
from .errors import ConfigError, DegenerateInput, EmptyProfile, MixsdError
from .fileio import atomic_write, read_jsonl, sha256_file, write_json, write_jsonl
from .mixing import (
    VERIFIERS,
    MixConfig,
    discard_row,
    record_from_row,
    record_row,
    run_corpus,
)
from .remote import RemoteBackend
from .toy import ToyBackend, ToyConfig, toy_config_from_dict


def _eprint(*args) -> None:
    print(*args, file=sys.stderr)


# ----------------------------------------------------------- config merge


def _merge_config(args: argparse.Namespace, defaults: dict) -> dict:
    """Resolve flags > config file > defaults into one plain dict."""
    resolved = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            try:
                loaded = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file {config_path}: {exc}")
        unknown = set(loaded) - set(defaults)
        if unknown:
            raise ConfigError(f"config file has unknown keys: {sorted(unknown)}")
        resolved.update(loaded)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            resolved[key] = value
    return resolved


def _manifest(
    out_dir: Path,
    command: str,
    resolved: dict,
    inputs: list[str | Path],
    outputs: list[Path],
    summary: dict,
) -> None:
    manifest = {
        "command": command,
        "toolkit_version": __version__,
        "resolved_config": resolved,
        "input_digests": {str(p): sha256_file(p) for p in inputs if p and Path(p).exists()},
        "output_digests": {p.name: sha256_file(p) for p in outputs},
        "summary": summary,
    }
    write_json(out_dir / "run_manifest.json", manifest)


def _out_dir(resolved: dict) -> Path:
    out = resolved.get("out")
    if not out:
        raise ConfigError("--out is required")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


# -------------------------------------------------------------- backends


def _select_backend(resolved: dict) -> tuple[Backend, list[str]]:
    """Backend from --backend-url or --toy-backend; returns extra inputs."""
    url = resolved.get("backend_url")
    toy = resolved.get("toy_backend")
    if bool(url) == bool(toy):
        raise ConfigError("select exactly one of --backend-url or --toy-backend")
    if url:
        return RemoteBackend(url), []
    table = resolved.get("toy_table")
    if table:
        with open(table, encoding="utf-8") as fh:
            cfg = toy_config_from_dict(json.load(fh))
        return ToyBackend(cfg), [table]
    return ToyBackend(ToyConfig()), []


# ---------------------------------------------------------- subcommands


GEN_KGFACT_DEFAULTS = {
    "domains": 5,
    "entities": 10,
    "relations_per_pair": 2,
    "edge_density": 0.25,
    "distractors": 50,
    "seed": 0,
    "relations_file": None,
    "out": None,
}


def cmd_gen_kgfact(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, GEN_KGFACT_DEFAULTS)
    out = _out_dir(resolved)
    config = kgfact.default_graph_config(
        resolved["domains"],
        resolved["entities"],
        resolved["relations_per_pair"],
        resolved["edge_density"],
    )
    if resolved["relations_file"]:
        with open(resolved["relations_file"], encoding="utf-8") as fh:
            rows = json.load(fh)
        config.custom_relations = [
            kgfact.RelationType(
                r["label"], r["source_domain"], r["target_domain"],
                r["question_template"], r["statement_template"],
            )
            for r in rows
        ]
    graph = kgfact.generate_world_graph(config, resolved["seed"])
    qa = kgfact.render_qa(graph)
    retrieval = kgfact.build_retrieval_split(graph, qa, resolved["distractors"], resolved["seed"])
    kgfact.write_graph(out / "graph.json", graph)
    kgfact.write_qa(out / "train.jsonl", qa)
    kgfact.write_retrieval(out / "retrieval.jsonl", retrieval.examples)
    kgfact.write_lexicon(out / "lexicon.txt", graph)
    if retrieval.underfilled:
        _eprint(
            f"warning: {len(retrieval.underfilled)} retrieval contexts under-filled "
            f"(graph supplies fewer than {resolved['distractors']} incident facts)"
        )
    summary = {
        "entities": len(graph.entities),
        "relations": len(graph.relations),
        "edges": len(graph.edges),
        "qa_examples": len(qa),
        "retrieval_examples": len(retrieval.examples),
        "underfilled_contexts": len(retrieval.underfilled),
    }
    outputs = [out / n for n in ("graph.json", "train.jsonl", "retrieval.jsonl", "lexicon.txt")]
    inputs = [resolved["relations_file"]] if resolved["relations_file"] else []
    _manifest(out, "gen-kgfact", resolved, inputs, outputs, summary)
    return 0


GEN_KGFUNC_DEFAULTS = {
    "ops": 7,
    "train_per_op": 1600,
    "test_per_op": 175,
    "unseen_ops": 20,
    "unseen_total": 500,
    "complexity": [2, 3],
    "unseen_complexity": [1, 2],
    "seed": 0,
    "out": None,
}


def cmd_gen_kgfunc(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, GEN_KGFUNC_DEFAULTS)
    out = _out_dir(resolved)
    config = kgfunc.KgfuncConfig(
        n_ops=resolved["ops"],
        train_per_op=resolved["train_per_op"],
        test_per_op=resolved["test_per_op"],
        n_unseen_ops=resolved["unseen_ops"],
        unseen_total=resolved["unseen_total"],
        train_complexity=tuple(resolved["complexity"]),
        unseen_complexity=tuple(resolved["unseen_complexity"]),
    )
    corpus = kgfunc.build_corpus(config, resolved["seed"])
    write_jsonl(out / "kgfunc_train.jsonl", map(kgfunc.instance_row, corpus.train))
    write_jsonl(out / "kgfunc_test.jsonl", map(kgfunc.instance_row, corpus.test))
    write_jsonl(out / "kgfunc_unseen.jsonl", map(kgfunc.instance_row, corpus.unseen))
    write_json(out / "operations.json", kgfunc.operations_manifest(corpus))
    summary = {
        "train_operations": len(corpus.train_ops),
        "unseen_operations": len(corpus.unseen_ops),
        "train_instances": len(corpus.train),
        "test_instances": len(corpus.test),
        "unseen_instances": len(corpus.unseen),
    }
    outputs = [
        out / n
        for n in ("kgfunc_train.jsonl", "kgfunc_test.jsonl", "kgfunc_unseen.jsonl", "operations.json")
    ]
    _manifest(out, "gen-kgfunc", resolved, [], outputs, summary)
    return 0


MIX_DEFAULTS = {
    "dataset": None,
    "format": "auto",
    "limit": None,
    "lam": 0.3,
    "retries": 10,
    "max_new_tokens": 8192,
    "max_seq_len": 10_000,
    "top_k": 64,
    "temperature": 0.0,
    "seed": 0,
    "backend_url": None,
    "toy_backend": False,
    "toy_table": None,
    "instruction_template_file": None,
    "method": "mixsd",
    "verifier": None,
    "workers": 1,
    "out": None,
}


def _load_dataset(resolved: dict):
    if not resolved.get("dataset"):
        raise ConfigError("--dataset is required")
    return load_mix_dataset(resolved["dataset"], resolved["format"], resolved.get("limit"))


def _mix_like(args: argparse.Namespace, method_override: str | None) -> int:
    resolved = _merge_config(args, MIX_DEFAULTS)
    if method_override:
        resolved["method"] = method_override
        if method_override == "sft":
            resolved["lam"] = 0.0
        if method_override == "expert_only":
            resolved["lam"] = 0.0
    out = _out_dir(resolved)
    examples, fmt = _load_dataset(resolved)
    resolved["format"] = fmt
    backend, extra_inputs = _select_backend(resolved)
    cfg = MixConfig(
        lam=resolved["lam"],
        max_new_tokens=resolved["max_new_tokens"],
        max_seq_len=resolved["max_seq_len"],
        retries=resolved["retries"],
        temperature=resolved["temperature"],
        top_k=resolved["top_k"],
        seed=resolved["seed"],
    )
    if resolved["instruction_template_file"]:
        cfg.instruction_template = Path(resolved["instruction_template_file"]).read_text("utf-8")
    verifier_name = resolved["verifier"] or FORMAT_VERIFIER[fmt]
    resolved["verifier"] = verifier_name
    if verifier_name not in VERIFIERS:
        raise ConfigError(f"unknown verifier {verifier_name!r}")

    def progress(done: int, total: int) -> None:
        if done % 10 == 0 or done == total:
            _eprint(f"processed {done}/{total}")

    result = run_corpus(
        examples,
        backend,
        cfg,
        VERIFIERS[verifier_name],
        method=resolved["method"],
        workers=resolved["workers"],
        progress=progress,
    )
    write_jsonl(out / "targets.jsonl", (record_row(r) for r in result.records))
    write_jsonl(out / "discards.jsonl", (discard_row(d) for d in result.discards))
    write_json(out / "mix_stats.json", result.stats.as_dict())
    outputs = [out / "targets.jsonl", out / "discards.jsonl", out / "mix_stats.json"]
    inputs = [resolved["dataset"], *extra_inputs]
    if resolved["instruction_template_file"]:
        inputs.append(resolved["instruction_template_file"])
    _manifest(out, resolved["method"], resolved, inputs, outputs, result.stats.as_dict())
    return 0


def cmd_mix(args: argparse.Namespace) -> int:
    return _mix_like(args, None)


def cmd_sft_targets(args: argparse.Namespace) -> int:
    return _mix_like(args, "sft")


SCORE_DEFAULTS = {
    "targets": None,
    "backend_url": None,
    "toy_backend": False,
    "toy_table": None,
    "accepted_only": False,
    "out": None,
}


def cmd_score_nll(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, SCORE_DEFAULTS)
    out = _out_dir(resolved)
    if not resolved["targets"]:
        raise ConfigError("--targets is required")
    backend, extra_inputs = _select_backend(resolved)
    records = [record_from_row(row) for row in read_jsonl(resolved["targets"])]
    if resolved["accepted_only"]:
        records = [r for r in records if r.accepted]
    if not records:
        raise ConfigError("no records to score")
    scored = diag.score_records(backend, records)
    profiles = diag.profiles_from_scored(scored)
    write_jsonl(
        out / "scored.jsonl",
        (
            {
                "example_id": s.example_id,
                "method": s.method,
                "token_ids": s.token_ids,
                "nll": s.nll,
            }
            for s in scored
        ),
    )
    write_json(
        out / "nll_profile.json",
        {
            method: {"count": p.count, "mean": p.mean, "values": p.values}
            for method, p in sorted(profiles.items())
        },
    )
    summary = {m: {"count": p.count, "mean": p.mean} for m, p in sorted(profiles.items())}
    _manifest(
        out,
        "score-nll",
        resolved,
        [resolved["targets"], *extra_inputs],
        [out / "scored.jsonl", out / "nll_profile.json"],
        summary,
    )
    return 0


ECDF_DEFAULTS = {"profile": None, "method": None, "taus": [5.0, 8.0], "no_figure": False, "out": None}


def cmd_ecdf(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, ECDF_DEFAULTS)
    out = _out_dir(resolved)
    if not resolved["profile"]:
        raise ConfigError("--profile is required")
    with open(resolved["profile"], encoding="utf-8") as fh:
        raw = json.load(fh)
    if not raw:
        raise ConfigError("profile file has no methods")
    method = resolved["method"]
    if method is None:
        if len(raw) > 1:
            raise ConfigError(
                f"profile has methods {sorted(raw)}; pick one with --method"
            )
        method = next(iter(raw))
    if method not in raw:
        raise ConfigError(f"method {method!r} not in profile ({sorted(raw)})")
    resolved["method"] = method

    curves = {m: diag.ecdf(entry["values"]) for m, entry in raw.items()}
    with atomic_write(out / "ecdf.csv") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["nll", "frac"])
        for nll, frac in curves[method]:
            writer.writerow([repr(nll), repr(frac)])
    thresholds = {
        m: [diag.high_nll_report(entry["values"], tau).as_dict() for tau in resolved["taus"]]
        for m, entry in sorted(raw.items())
    }
    write_json(out / "thresholds.json", thresholds)
    outputs = [out / "ecdf.csv", out / "thresholds.json"]
    if not resolved["no_figure"]:
        from . import plots

        plots.ecdf_figure(curves, {m: e["mean"] for m, e in raw.items()}, out / "ecdf.png")
        outputs.append(out / "ecdf.png")
    _manifest(
        out,
        "ecdf",
        resolved,
        [resolved["profile"]],
        outputs,
        {"methods": sorted(raw), "csv_method": method},
    )
    return 0


OVERLAP_DEFAULTS = {"scored": None, "tau": 8.0, "sft_method": "sft", "mix_method": "mixsd", "out": None}


def cmd_overlap(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, OVERLAP_DEFAULTS)
    out = _out_dir(resolved)
    if not resolved["scored"]:
        raise ConfigError("--scored is required")
    sft_scored, mix_scored = [], []
    for row in read_jsonl(resolved["scored"]):
        rec = diag.ScoredRecord(row["example_id"], row["method"], row["token_ids"], row["nll"])
        if rec.method == resolved["sft_method"]:
            sft_scored.append(rec)
        elif rec.method == resolved["mix_method"]:
            mix_scored.append(rec)
    try:
        recall = diag.overlap_recall(sft_scored, mix_scored, resolved["tau"])
    except EmptyProfile as exc:
        raise ConfigError(str(exc))
    report = {
        "tau": resolved["tau"],
        "sft_method": resolved["sft_method"],
        "mix_method": resolved["mix_method"],
        "sft_examples": len(sft_scored),
        "mix_examples": len(mix_scored),
        "mean_recall": recall,
    }
    write_json(out / "overlap_report.json", report)
    _manifest(out, "overlap", resolved, [resolved["scored"]], [out / "overlap_report.json"], report)
    return 0


FISHER_DEFAULTS = {"grads": None, "dim": None, "chunk_size": 1 << 20, "out": None}


def cmd_fisher(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, FISHER_DEFAULTS)
    out = _out_dir(resolved)
    paths = resolved["grads"] or []
    if not paths:
        raise ConfigError("--grads requires at least one vector file")
    dim = resolved["dim"]
    if dim is None:
        first = vecio.element_count(paths[0])
        dim = first
    acc = fishermod.FisherAccumulator(dim)
    for path in paths:
        count = vecio.element_count(path)
        if count % dim:
            raise ConfigError(f"{path}: {count} values is not a multiple of dim {dim}")
        chunks = vecio.iter_chunks(path, resolved["chunk_size"])
        buffered: list = []
        have = 0
        for chunk in chunks:
            start = 0
            while start < chunk.size:
                take = min(chunk.size - start, dim - have)
                buffered.append(chunk[start : start + take])
                have += take
                start += take
                if have == dim:
                    acc.add_chunked(buffered)
                    buffered, have = [], 0
    fisher = acc.finish()
    vecio.write_vector(out / "fisher.vec", fisher.values, "f8")
    report = {
        "kind": "fisher_estimate",
        "d": fisher.d,
        "n_samples": fisher.n_samples,
        "trace": fisher.trace,
        "trace_over_d": fisher.trace_over_d,
    }
    write_json(out / "fisher_report.json", report)
    _manifest(out, "fisher", resolved, list(paths), [out / "fisher.vec", out / "fisher_report.json"], report)
    return 0


DISPLACEMENT_DEFAULTS = {
    "theta_star": None,
    "theta_d": None,
    "fisher": None,
    "chunk_size": 1 << 20,
    "out": None,
}


def cmd_displacement(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, DISPLACEMENT_DEFAULTS)
    out = _out_dir(resolved)
    for key in ("theta_star", "theta_d", "fisher"):
        if not resolved[key]:
            raise ConfigError(f"--{key.replace('_', '-')} is required")
    fisher = fishermod.FisherDiag(vecio.read_vector(resolved["fisher"]).astype("float64"), n_samples=0)
    report = fishermod.displacement_report(
        vecio.iter_chunks(resolved["theta_star"], resolved["chunk_size"]),
        vecio.iter_chunks(resolved["theta_d"], resolved["chunk_size"]),
        fisher,
        chunk_size=resolved["chunk_size"],
    )
    body = {"kind": "displacement", **report.as_dict()}
    write_json(out / "fisher_report.json", body)
    _manifest(
        out,
        "displacement",
        resolved,
        [resolved["theta_star"], resolved["theta_d"], resolved["fisher"]],
        [out / "fisher_report.json"],
        body,
    )
    return 0


CORRELATE_DEFAULTS = {"csv": None, "target": None, "no_figure": False, "out": None}


def cmd_correlate(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, CORRELATE_DEFAULTS)
    out = _out_dir(resolved)
    if not resolved["csv"] or not resolved["target"]:
        raise ConfigError("--csv and --target are required")
    with open(resolved["csv"], encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ConfigError("csv file has no data rows")
    target = resolved["target"]
    if target not in rows[0]:
        raise ConfigError(f"target column {target!r} not in csv ({sorted(rows[0])})")

    def column(name: str) -> list[float] | None:
        try:
            return [float(r[name]) for r in rows]
        except (TypeError, ValueError):
            return None

    ys = column(target)
    if ys is None:
        raise ConfigError(f"target column {target!r} is not numeric")
    correlations: dict[str, float | None] = {}
    outputs: list[Path] = []
    for name in rows[0]:
        if name == target:
            continue
        xs = column(name)
        if xs is None:
            continue
        try:
            r = diag.pearson(xs, ys)
        except DegenerateInput:
            correlations[name] = None
            continue
        correlations[name] = r
        if not resolved["no_figure"]:
            from . import plots

            fig_path = out / f"scatter_{name}.png"
            plots.scatter_figure(xs, ys, name, target, r, fig_path)
            outputs.append(fig_path)
    report = {"target": target, "n": len(rows), "pearson": correlations}
    write_json(out / "correlations.json", report)
    outputs.insert(0, out / "correlations.json")
    _manifest(out, "correlate", resolved, [resolved["csv"]], outputs, report)
    return 0


CLASSIFY_DEFAULTS = {
    "responses": None,
    "lexicon": None,
    "collapse_max_tokens": 20,
    "no_figure": False,
    "out": None,
}


def cmd_classify_errors(args: argparse.Namespace) -> int:
    resolved = _merge_config(args, CLASSIFY_DEFAULTS)
    out = _out_dir(resolved)
    if not resolved["responses"]:
        raise ConfigError("--responses is required")
    lexicon: list[str] = []
    if resolved["lexicon"]:
        lexicon = [
            line.strip()
            for line in Path(resolved["lexicon"]).read_text("utf-8").splitlines()
            if line.strip()
        ]
    records = [
        classifymod.ResponseRecord(
            record_id=row["record_id"],
            benchmark_kind=row["benchmark_kind"],
            prompt=row["prompt"],
            response=row["response"],
            is_correct=bool(row["is_correct"]),
        )
        for row in read_jsonl(resolved["responses"])
    ]
    cfg = classifymod.ClassifierConfig(resolved["collapse_max_tokens"])
    report = classifymod.summarize(records, lexicon, cfg).as_dict()
    write_json(out / "error_report.json", report)
    outputs = [out / "error_report.json"]
    if not resolved["no_figure"]:
        from . import plots

        plots.error_report_figure(report, out / "error_report.png")
        outputs.append(out / "error_report.png")
    inputs = [resolved["responses"]] + ([resolved["lexicon"]] if resolved["lexicon"] else [])
    _manifest(out, "classify-errors", resolved, inputs, outputs, report)
    return 0


# -------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixsd",
        description="Synthetic knowledge-injection corpora, mixed-rollout "
        "supervision targets, and forgetting diagnostics.",
    )
    parser.add_argument("--version", action="version", version=f"mixsd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file mirroring flag names")
        p.add_argument("--out", help="output directory")

    def add_backend_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--backend-url", dest="backend_url", help="remote backend base URL")
        p.add_argument(
            "--toy-backend", dest="toy_backend", action="store_true", default=None,
            help="use the in-process toy backend",
        )
        p.add_argument("--toy-table", dest="toy_table", help="toy backend table JSON file")

    p = sub.add_parser("gen-kgfact", help="generate the fact world graph and its corpora")
    p.add_argument("--domains", type=int)
    p.add_argument("--entities", type=int)
    p.add_argument("--relations-per-pair", dest="relations_per_pair", type=int)
    p.add_argument("--edge-density", dest="edge_density", type=float)
    p.add_argument("--distractors", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--relations-file", dest="relations_file")
    add_common(p)
    p.set_defaults(func=cmd_gen_kgfact)

    p = sub.add_parser("gen-kgfunc", help="generate the digit-function corpora")
    p.add_argument("--ops", type=int)
    p.add_argument("--train-per-op", dest="train_per_op", type=int)
    p.add_argument("--test-per-op", dest="test_per_op", type=int)
    p.add_argument("--unseen-ops", dest="unseen_ops", type=int)
    p.add_argument("--unseen-total", dest="unseen_total", type=int)
    p.add_argument("--complexity", nargs=2, type=int, metavar=("LO", "HI"))
    p.add_argument("--unseen-complexity", dest="unseen_complexity", nargs=2, type=int, metavar=("LO", "HI"))
    p.add_argument("--seed", type=int)
    add_common(p)
    p.set_defaults(func=cmd_gen_kgfunc)

    def add_mix_flags(p: argparse.ArgumentParser, with_rollout: bool) -> None:
        p.add_argument("--dataset", help="corpus JSONL file")
        p.add_argument("--format", choices=["auto", "kgfact", "kgfact-retrieval", "kgfunc", "generic"])
        p.add_argument("--limit", type=int, help="take only the first N examples")
        if with_rollout:
            p.add_argument("--lambda", dest="lam", type=float, help="naive-token mixing rate")
            p.add_argument("--retries", type=int)
            p.add_argument("--max-new-tokens", dest="max_new_tokens", type=int)
            p.add_argument("--max-seq-len", dest="max_seq_len", type=int)
            p.add_argument("--top-k", dest="top_k", type=int)
            p.add_argument("--temperature", type=float)
            p.add_argument("--instruction-template-file", dest="instruction_template_file")
            p.add_argument("--verifier", choices=sorted(VERIFIERS))
            p.add_argument("--workers", type=int)
        p.add_argument("--seed", type=int)
        add_backend_flags(p)
        add_common(p)

    p = sub.add_parser("mix", help="build mixed-rollout supervision targets")
    add_mix_flags(p, with_rollout=True)
    p.add_argument("--method", choices=["mixsd", "expert_only"])
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("sft-targets", help="emit pass-through gold supervision targets")
    add_mix_flags(p, with_rollout=False)
    p.set_defaults(func=cmd_sft_targets)

    p = sub.add_parser("score-nll", help="score targets under a reference backend")
    p.add_argument("--targets", help="targets.jsonl to score")
    p.add_argument(
        "--accepted-only", dest="accepted_only", action="store_true", default=None,
        help="score only accepted records",
    )
    add_backend_flags(p)
    add_common(p)
    p.set_defaults(func=cmd_score_nll)

    p = sub.add_parser("ecdf", help="empirical CDF and threshold reports from a profile")
    p.add_argument("--profile", help="nll_profile.json from score-nll")
    p.add_argument("--method", help="method whose curve goes into ecdf.csv")
    p.add_argument("--taus", nargs="*", type=float)
    p.add_argument("--no-figure", dest="no_figure", action="store_true", default=None)
    add_common(p)
    p.set_defaults(func=cmd_ecdf)

    p = sub.add_parser("overlap", help="high-NLL token-type overlap recall")
    p.add_argument("--scored", help="scored.jsonl from score-nll")
    p.add_argument("--tau", type=float)
    p.add_argument("--sft-method", dest="sft_method")
    p.add_argument("--mix-method", dest="mix_method")
    add_common(p)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("fisher", help="accumulate a diagonal Fisher estimate from gradient dumps")
    p.add_argument("--grads", nargs="+", help="gradient vector files")
    p.add_argument("--dim", type=int, help="parameter count d (default: first file's length)")
    p.add_argument("--chunk-size", dest="chunk_size", type=int)
    add_common(p)
    p.set_defaults(func=cmd_fisher)

    p = sub.add_parser("displacement", help="raw and Fisher-weighted parameter displacement")
    p.add_argument("--theta-star", dest="theta_star", help="reference parameter vector file")
    p.add_argument("--theta-d", dest="theta_d", help="fine-tuned parameter vector file")
    p.add_argument("--fisher", help="diagonal Fisher vector file")
    p.add_argument("--chunk-size", dest="chunk_size", type=int)
    add_common(p)
    p.set_defaults(func=cmd_displacement)

    p = sub.add_parser("correlate", help="Pearson correlations of metric columns against a target")
    p.add_argument("--csv", help="csv file with one row per checkpoint")
    p.add_argument("--target", help="column to correlate against")
    p.add_argument("--no-figure", dest="no_figure", action="store_true", default=None)
    add_common(p)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("classify-errors", help="classify incorrect responses into error modes")
    p.add_argument("--responses", help="responses.jsonl to classify")
    p.add_argument("--lexicon", help="lexicon.txt with one entity name per line")
    p.add_argument("--collapse-max-tokens", dest="collapse_max_tokens", type=int)
    p.add_argument("--no-figure", dest="no_figure", action="store_true", default=None)
    add_common(p)
    p.set_defaults(func=cmd_classify_errors)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        _eprint(f"config error: {exc}")
        return 2
    except MixsdError as exc:
        _eprint(f"error: {exc}")
        return 1
    except OSError as exc:
        _eprint(f"io error: {exc}")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
