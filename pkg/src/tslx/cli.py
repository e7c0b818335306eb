"""Command-line entry point: every analysis as a reproducible subcommand.

Exit codes: 0 success, 1 usage error, 2 data or validation error. Commands
that print JSON embed their run manifest under "manifest"; commands that
write an output directory drop run_manifest.json beside their outputs. A run
is replayable from its manifest to byte-identical data outputs (the manifest
timestamp itself is the one field that varies).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .align import group_by_token_sets, selected_words_similarity, smi_vs_k_sweep
from .attention import AttentionView, modality_linkage, top_k_attended
from .features import FEATURE_NAMES, extract_features
from .io import (
    Matrix,
    TslxError,
    read_grouping,
    read_matrix,
    read_vocab,
    read_word_groups,
    write_grouping,
    write_matrix,
    write_matrix_csv,
)
from .metrics import SMIConfig, mae, mse, silhouette, smi_report
from .perturb import PerturbConfig, replace_values
from .prototypes import (
    extract_kmeans,
    extract_pca,
    extract_provided,
    extract_random,
    extract_similarity_expansion,
)
from .synthesis import ScenarioSpec, generate_scenario, scenario_name, sweep_table, validation_sweep
from .wordlists import load_bundled

_METHOD_FLAGS = {
    "pca": "pca",
    "kmeans": "kmeans",
    "random": "random",
    "text": "provided_text",
    "simexp": "similarity_expansion",
}

_MODE_FLAGS = {"gaussian": "gaussian_fit", "uniform": "uniform_range"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage problems; the toolkit reserves 2
    # for data errors, so usage failures are rethrown and remapped to 1.
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunManifest:
    subcommand: str
    argv: tuple[str, ...]
    inputs: tuple[tuple[str, str], ...]
    seeds: tuple[int, ...]
    version: str
    timestamp: str
    threads: int

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "argv": list(self.argv),
            "inputs": {path: digest for path, digest in self.inputs},
            "seeds": list(self.seeds),
            "version": self.version,
            "timestamp": self.timestamp,
            "threads": self.threads,
        }


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _manifest(args, argv, input_paths, seeds=()) -> RunManifest:
    return RunManifest(
        subcommand=args.subcommand,
        argv=tuple(argv),
        inputs=tuple((str(p), _sha256(p)) for p in input_paths),
        seeds=tuple(int(s) for s in seeds),
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        threads=args.threads,
    )


def _emit(payload: dict, manifest: RunManifest) -> None:
    payload = dict(payload)
    payload["manifest"] = manifest.to_dict()
    print(json.dumps(payload, indent=2))


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, manifest: RunManifest) -> None:
    with open(out / "run_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2)
        fh.write("\n")


def _write_csv_rows(path: Path, rows) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def _smi_config(args) -> SMIConfig:
    return SMIConfig(a=args.a, b=args.b)


def _labels_for(path, n_rows: int):
    return read_grouping(path, n_rows)


# --------------------------------------------------------------------------
# subcommand implementations
# --------------------------------------------------------------------------

def _cmd_features(args, argv) -> int:
    patches = read_matrix(args.patches)
    feats = extract_features(patches)
    out = _out_dir(args)
    write_matrix(out / "features.tslx", feats.to_matrix())
    write_matrix_csv(out / "features.csv", feats.to_matrix(), header=FEATURE_NAMES)
    _write_manifest(out, _manifest(args, argv, [args.patches]))
    return 0


def _cmd_smi(args, argv) -> int:
    patches = read_matrix(args.patches)
    labels = _labels_for(args.groups, patches.rows)
    report = smi_report(extract_features(patches), labels, _smi_config(args))
    _emit(report.to_dict(), _manifest(args, argv, [args.patches, args.groups]))
    return 0


def _cmd_silhouette(args, argv) -> int:
    patches = read_matrix(args.patches)
    labels = _labels_for(args.groups, patches.rows)
    value = silhouette(extract_features(patches), labels)
    _emit({"silhouette": value}, _manifest(args, argv, [args.patches, args.groups]))
    return 0


def _cmd_synth_validate(args, argv) -> int:
    base = ScenarioSpec(
        n_groups=args.groups,
        patches_per_group=args.patches_per_group,
        length=args.length,
        seed=args.seed,
    )
    out = _out_dir(args)
    rows = validation_sweep(base, _smi_config(args))
    for row in rows:
        spec = replace(base, intra_level=row.intra_level, inter_level=row.inter_level)
        patches, labels = generate_scenario(spec)
        sub = out / scenario_name(row.intra_level, row.inter_level)
        sub.mkdir(parents=True, exist_ok=True)
        write_matrix(sub / "patches.tslx", Matrix(patches))
        write_grouping(sub / "labels.csv", [int(g) for g in labels])
    _write_csv_rows(out / "sweep.csv", sweep_table(rows))
    _write_manifest(out, _manifest(args, argv, [], seeds=[args.seed]))
    return 0


def _cmd_prototypes(args, argv) -> int:
    method = _METHOD_FLAGS[args.method]
    if args.k is None and method != "provided_text":
        raise _UsageError(f"tslx prototypes: --k is required for --method {args.method}")
    emb = read_matrix(args.emb)
    inputs = [args.emb]
    seeds = []
    if method == "pca":
        proto = extract_pca(emb, args.k)
    elif method == "kmeans":
        proto = extract_kmeans(emb, args.k, args.seed)
        seeds = [args.seed]
    elif method == "random":
        proto = extract_random(emb, args.k, args.seed)
        seeds = [args.seed]
    else:
        if args.vocab is None:
            raise _UsageError(f"tslx prototypes: --vocab is required for --method {args.method}")
        if args.words is None:
            raise _UsageError(f"tslx prototypes: --words is required for --method {args.method}")
        vocab = read_vocab(args.vocab)
        inputs.append(args.vocab)
        if args.words == "bundled":
            words = list(load_bundled().all_words())
        else:
            words = list(read_word_groups(args.words).all_words())
            inputs.append(args.words)
        if method == "provided_text":
            proto = extract_provided(vocab, emb, words)
        else:
            proto = extract_similarity_expansion(vocab, emb, words, args.k)

    out = _out_dir(args)
    write_matrix(out / "prototypes.tslx", Matrix(proto.prototypes))
    meta = {
        "method": proto.method,
        "k": proto.k,
        "dim": proto.dim,
        "provenance": list(proto.provenance),
        "unresolved": list(proto.unresolved),
    }
    if proto.explained_variance is not None:
        meta["explained_variance"] = list(proto.explained_variance)
    with open(out / "provenance.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    _write_manifest(out, _manifest(args, argv, inputs, seeds=seeds))
    return 0


def _cmd_assign_tokens(args, argv) -> int:
    emb = read_matrix(args.emb)
    vocab_emb = read_matrix(args.vocab_emb)
    vocab = read_vocab(args.vocab)
    grouping = group_by_token_sets(emb, vocab_emb, vocab, args.k)
    groups = [
        {
            "key": [vocab[i] for i in key],
            "key_indices": list(key),
            "members": list(members),
        }
        for key, members in zip(grouping.keys, grouping.membership)
    ]
    payload = {"k": grouping.k, "n_groups": grouping.n_groups, "groups": groups}
    _emit(payload, _manifest(args, argv, [args.emb, args.vocab_emb, args.vocab]))
    return 0


def _cmd_smi_sweep(args, argv) -> int:
    emb = read_matrix(args.emb)
    vocab_emb = read_matrix(args.vocab_emb)
    vocab = read_vocab(args.vocab)
    patches = read_matrix(args.patches)
    sweep = smi_vs_k_sweep(emb, vocab_emb, vocab, patches, args.k_max, _smi_config(args))
    manifest = _manifest(args, argv, [args.emb, args.vocab_emb, args.vocab, args.patches])
    if args.out is not None:
        out = _out_dir(args)
        _write_csv_rows(out / "smi_sweep.csv", sweep.table())
        _write_manifest(out, manifest)
    payload = {
        "rows": [{"k": r.k, "n_groups": r.n_groups, "smi": r.smi} for r in sweep.rows],
        "first_k_full": sweep.first_k_full,
    }
    _emit(payload, manifest)
    return 0


def _cmd_similarity(args, argv) -> int:
    emb = read_matrix(args.emb)
    vocab_emb = read_matrix(args.vocab_emb)
    vocab = read_vocab(args.vocab)
    inputs = [args.emb, args.vocab_emb, args.vocab]
    if args.words == "bundled":
        groups = load_bundled()
        related = None
    else:
        groups = read_word_groups(args.words)
        inputs.append(args.words)
        related = args.related.split(",") if args.related else None
        if related is None and set(groups.names) == {"related", "unrelated"}:
            related = ["related"]
    heatmap, summary = selected_words_similarity(emb, vocab, vocab_emb, groups, related_names=related)

    out = _out_dir(args)
    rows = [["", *summary.word_labels]]
    for i in range(heatmap.shape[0]):
        rows.append([f"emb_{i}", *(f"{v:.17g}" for v in heatmap[i])])
    _write_csv_rows(out / "heatmap.csv", rows)
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary.to_dict(), fh, indent=2)
        fh.write("\n")
    _write_manifest(out, _manifest(args, argv, inputs))
    return 0


def _attention_view(args) -> AttentionView:
    weights = read_matrix(args.attn)
    row_labels = (
        read_vocab(args.row_labels).tokens if args.row_labels
        else tuple(f"row_{i}" for i in range(weights.rows))
    )
    col_labels = (
        read_vocab(args.col_labels).tokens if args.col_labels
        else tuple(f"col_{i}" for i in range(weights.cols))
    )
    return AttentionView(
        weights=weights.values,
        row_labels=row_labels,
        col_labels=col_labels,
        boundary=getattr(args, "boundary", None),
        row_stochastic=args.row_stochastic,
    )


def _cmd_attn_top(args, argv) -> int:
    view = _attention_view(args)
    tops = top_k_attended(view, args.k)
    inputs = [p for p in (args.attn, args.row_labels, args.col_labels) if p]
    payload = {
        "k": args.k,
        "rows": [
            {
                "row": view.row_labels[r],
                "top": [
                    {"col_index": j, "label": lab, "weight": w} for j, lab, w in tops[r]
                ],
            }
            for r in range(view.n_rows)
        ],
    }
    _emit(payload, _manifest(args, argv, inputs))
    return 0


def _cmd_attn_linkage(args, argv) -> int:
    view = _attention_view(args)
    report = modality_linkage(view, args.k)
    inputs = [p for p in (args.attn, args.row_labels, args.col_labels) if p]
    _emit(report.to_dict(), _manifest(args, argv, inputs))
    return 0


def _cmd_perturb(args, argv) -> int:
    emb = read_matrix(args.emb)
    cfg = PerturbConfig(ratio=args.ratio, seed=args.seed, mode=_MODE_FLAGS[args.mode])
    perturbed, report = replace_values(emb, cfg)
    out = _out_dir(args)
    write_matrix(out / "perturbed.tslx", perturbed)
    payload = {"ratio": args.ratio, "seed": args.seed, **report.to_dict()}
    with open(out / "perturb.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    _write_manifest(out, _manifest(args, argv, [args.emb], seeds=[args.seed]))
    return 0


def _cmd_mse(args, argv) -> int:
    y = read_matrix(args.y)
    yhat = read_matrix(args.yhat)
    payload = {"mse": mse(y.values, yhat.values), "mae": mae(y.values, yhat.values)}
    _emit(payload, _manifest(args, argv, [args.y, args.yhat]))
    return 0


_COMMANDS = {
    "features": _cmd_features,
    "smi": _cmd_smi,
    "silhouette": _cmd_silhouette,
    "synth-validate": _cmd_synth_validate,
    "prototypes": _cmd_prototypes,
    "assign-tokens": _cmd_assign_tokens,
    "smi-sweep": _cmd_smi_sweep,
    "similarity": _cmd_similarity,
    "attn-top": _cmd_attn_top,
    "attn-linkage": _cmd_attn_linkage,
    "perturb": _cmd_perturb,
    "mse": _cmd_mse,
}


def _default_threads() -> int:
    env = os.environ.get("TSLX_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def build_parser() -> _Parser:
    parser = _Parser(prog="tslx", description=__doc__)
    parser.add_argument("--version", action="version", version=f"tslx {__version__}")
    common = _Parser(add_help=False)
    common.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="upper bound on internal parallelism (current code paths are single-threaded)",
    )

    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="subcommand")

    def add(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add("features", help="extract the 7 per-patch statistical features")
    p.add_argument("--patches", required=True)
    p.add_argument("--out", required=True)

    for name in ("smi", "silhouette"):
        p = add(name, help=f"compute {name} for a grouped patch matrix")
        p.add_argument("--patches", required=True)
        p.add_argument("--groups", required=True)
        if name == "smi":
            p.add_argument("--a", type=float, default=0.5)
            p.add_argument("--b", type=float, default=0.1)

    p = add("synth-validate", help="run the 9+2 synthetic scenario sweep")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--groups", type=int, default=5)
    p.add_argument("--patches-per-group", type=int, default=20)
    p.add_argument("--length", type=int, default=16)
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--b", type=float, default=0.1)

    p = add("prototypes", help="extract text prototypes from vocabulary embeddings")
    p.add_argument("--method", required=True, choices=sorted(_METHOD_FLAGS))
    p.add_argument("--emb", required=True, help="vocabulary embedding TSLX")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocab", help="token-per-line vocabulary file")
    p.add_argument("--words", help="word-group file, or 'bundled'")
    p.add_argument("--out", required=True)

    p = add("assign-tokens", help="group patches by ordered nearest-token k-tuples")
    p.add_argument("--emb", required=True)
    p.add_argument("--vocab-emb", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("smi-sweep", help="SMI of the token-set grouping for k = 1..k_max")
    p.add_argument("--emb", required=True)
    p.add_argument("--vocab-emb", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--patches", required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--b", type=float, default=0.1)
    p.add_argument("--out")

    p = add("similarity", help="cosine heatmap against selected-word lists")
    p.add_argument("--emb", required=True)
    p.add_argument("--vocab-emb", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--words", required=True, help="word-group file, or 'bundled'")
    p.add_argument("--related", help="comma-separated related group names (custom lists)")
    p.add_argument("--out", required=True)

    p = add("attn-top", help="per-row top-k attended columns")
    p.add_argument("--attn", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--row-labels")
    p.add_argument("--col-labels")
    p.add_argument("--row-stochastic", action="store_true")

    p = add("attn-linkage", help="prompt/patch modality statistics of self-attention")
    p.add_argument("--attn", required=True)
    p.add_argument("--boundary", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--row-labels")
    p.add_argument("--col-labels")
    p.add_argument("--row-stochastic", action="store_true")

    p = add("perturb", help="randomly replace a fraction of embedding values")
    p.add_argument("--emb", required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=sorted(_MODE_FLAGS), default="gaussian")
    p.add_argument("--out", required=True)

    p = add("mse", help="mean squared / absolute error between two matrices")
    p.add_argument("--y", required=True)
    p.add_argument("--yhat", required=True)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.subcommand](args, argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (TslxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
