"""Builds a small GPT-2-class checkpoint once per session.

The architecture, tokenizer machinery (byte-level BPE with the leading-space
marker glyph), and export code path are identical to the full-size
checkpoints; only the dimensions are desk-scale so the suite runs offline
in seconds.
"""

import json

import pytest
import torch
from tokenizers import pre_tokenizers
from transformers import GPT2Config, GPT2LMHeadModel, GPT2Tokenizer

WORDS = ["the", "time", "series", "trend", "rise", "fall", "peak", "mean"]


def _merges_for(word):
    # merge the leading-space variant first so "Ġword" wins over "word"
    out = []
    acc = "Ġ"
    for ch in word:
        out.append((acc, ch))
        acc += ch
    acc = word[0]
    for ch in word[1:]:
        out.append((acc, ch))
        acc += ch
    return out


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt")
    vocab = {ch: i for i, ch in enumerate(sorted(pre_tokenizers.ByteLevel.alphabet()))}
    merges = []
    for word in WORDS:
        for pair in _merges_for(word):
            if pair not in merges:
                merges.append(pair)
                merged = pair[0] + pair[1]
                if merged not in vocab:
                    vocab[merged] = len(vocab)
    vocab["<|endoftext|>"] = len(vocab)

    tokenizer = GPT2Tokenizer(vocab=vocab, merges=merges)
    tokenizer.save_pretrained(path)

    torch.manual_seed(1234)
    config = GPT2Config(
        vocab_size=len(vocab),
        n_positions=64,
        n_embd=32,
        n_layer=2,
        n_head=4,
        bos_token_id=vocab["<|endoftext|>"],
        eos_token_id=vocab["<|endoftext|>"],
    )
    GPT2LMHeadModel(config).save_pretrained(path)
    return path


@pytest.fixture(scope="session")
def unsupported_checkpoint(tmp_path_factory):
    path = tmp_path_factory.mktemp("t5ish")
    (path / "config.json").write_text(json.dumps({"model_type": "t5"}), encoding="utf-8")
    return path
