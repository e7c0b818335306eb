"""Export model artifacts for the alignment toolkit.

Targets:
  embeddings        input embedding table, one row per vocabulary id
  vocab             exact tokenizer token strings, one per line
  attentions        one self-attention map over an encoded prompt,
                    layer-selected, head-reduced (mean or a single head)
  prompt_embeddings input embeddings of the encoded prompt tokens
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .tslxfmt import write_tslx_f32, write_vocab

TARGETS = ("embeddings", "vocab", "attentions", "prompt_embeddings")
SUPPORTED_ARCHITECTURES = ("gpt2", "bert", "opt", "llama")

_NEEDS_PROMPT = ("attentions", "prompt_embeddings")
_NEEDS_MODEL = ("embeddings", "attentions", "prompt_embeddings")


class ExportError(Exception):
    pass


@dataclass(frozen=True)
class ExportSpec:
    model: str
    targets: tuple[str, ...]
    out: str
    layer: int | None = None  # None = last layer
    head: int | None = None  # None = mean over heads
    prompt: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.targets:
            raise ExportError("no targets requested")
        unknown = [t for t in self.targets if t not in TARGETS]
        if unknown:
            raise ExportError(f"unknown targets {unknown}; valid: {list(TARGETS)}")
        needs_prompt = [t for t in self.targets if t in _NEEDS_PROMPT]
        if needs_prompt and not self.prompt:
            raise ExportError(f"targets {needs_prompt} need --prompt")


def _load_tokenizer(model_id: str):
    from transformers import AutoTokenizer

    try:
        return AutoTokenizer.from_pretrained(model_id)
    except (OSError, ValueError) as exc:
        raise ExportError(f"cannot load tokenizer for {model_id!r}: {exc}") from exc


def _load_model(model_id: str):
    import torch
    from transformers import AutoConfig, AutoModel

    try:
        config = AutoConfig.from_pretrained(model_id)
    except (OSError, ValueError) as exc:
        raise ExportError(f"cannot load checkpoint {model_id!r}: {exc}") from exc
    if config.model_type not in SUPPORTED_ARCHITECTURES:
        raise ExportError(
            f"unsupported architecture {config.model_type!r}; "
            f"supported: {list(SUPPORTED_ARCHITECTURES)}"
        )
    # eager attention so forward passes can return the attention tensors
    model = AutoModel.from_pretrained(model_id, attn_implementation="eager")
    model.eval()
    for p in model.parameters():
        p.requires_grad_(False)
    return model


def _resolve_layer_head(spec: ExportSpec, config) -> tuple[int, int | None]:
    depth = config.num_hidden_layers
    heads = config.num_attention_heads
    layer = depth - 1 if spec.layer is None else spec.layer
    if not 0 <= layer < depth:
        raise ExportError(f"layer {layer} outside model depth {depth}")
    if spec.head is not None and not 0 <= spec.head < heads:
        raise ExportError(f"head {spec.head} outside head count {heads}")
    return layer, spec.head


def export(spec: ExportSpec) -> dict:
    """Write the requested artifacts; returns (and writes) the manifest."""
    import torch

    out = Path(spec.out)
    out.mkdir(parents=True, exist_ok=True)

    tokenizer = _load_tokenizer(spec.model)
    model = None
    if any(t in _NEEDS_MODEL for t in spec.targets):
        model = _load_model(spec.model)

    files: dict[str, list[int]] = {}
    manifest: dict = {
        "model": spec.model,
        "targets": list(spec.targets),
        "files": files,
    }

    if model is not None:
        emb_table = model.get_input_embeddings().weight
        n_rows = emb_table.shape[0]
        if len(tokenizer) != n_rows:
            raise ExportError(
                f"tokenizer has {len(tokenizer)} tokens but the embedding "
                f"table has {n_rows} rows; refusing to write mismatched files"
            )
        manifest["model_type"] = model.config.model_type

    if "embeddings" in spec.targets:
        shape = write_tslx_f32(out / "embeddings.tslx", emb_table.numpy())
        files["embeddings.tslx"] = list(shape)

    if "vocab" in spec.targets:
        n = model.get_input_embeddings().weight.shape[0] if model is not None else len(tokenizer)
        tokens = tokenizer.convert_ids_to_tokens(list(range(n)))
        files["vocab.txt"] = [write_vocab(out / "vocab.txt", tokens), 1]

    if any(t in _NEEDS_PROMPT for t in spec.targets):
        layer, head = _resolve_layer_head(spec, model.config)
        manifest["prompt"] = spec.prompt
        manifest["layer"] = layer
        manifest["head_reduction"] = "mean" if head is None else f"head {head}"
        encoded = tokenizer(spec.prompt, return_tensors="pt")
        ids = encoded["input_ids"]
        if ids.shape[1] == 0:
            raise ExportError("prompt encoded to zero tokens")
        prompt_tokens = tokenizer.convert_ids_to_tokens(ids[0].tolist())

        if "attentions" in spec.targets:
            with torch.no_grad():
                result = model(**encoded, output_attentions=True)
            attn = result.attentions[layer][0]  # heads x seq x seq
            attn = attn.mean(dim=0) if head is None else attn[head]
            shape = write_tslx_f32(out / "attentions.tslx", attn.numpy())
            files["attentions.tslx"] = list(shape)

        if "prompt_embeddings" in spec.targets:
            with torch.no_grad():
                pe = model.get_input_embeddings()(ids)[0]
            shape = write_tslx_f32(out / "prompt_embeddings.tslx", pe.numpy())
            files["prompt_embeddings.tslx"] = list(shape)
            files["prompt_tokens.txt"] = [
                write_vocab(out / "prompt_tokens.txt", prompt_tokens),
                1,
            ]

    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest
