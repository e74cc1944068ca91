"""Batched sequence-classification inference over a variants JSONL file.

Reads lines of ``{"variant_id", "parent_idx", "transform_id", "site",
"func"}``, scores each function text with a binary sequence classifier, and
writes one prediction line per input line in the ensemble wire format:
``{"parent_idx", "variant_id", "transform_id", "model_id", "label", "p1"}``
where ``p1`` is the softmax probability of class 1 and ``label`` its argmax.
Functions longer than the model's sequence budget are truncated and the
output line carries ``"truncated": true``. Per-line inference failures keep
their identifying fields, omit the label, and carry an ``"error"`` flag.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

logger = logging.getLogger(__name__)


class BridgeLoadError(RuntimeError):
    """The checkpoint or tokenizer could not be loaded."""


@dataclass
class ModelRef:
    model_id: str
    checkpoint: str  # local path or hub identifier
    max_len: int = 512
    batch_size: int = 16


def load_classifier(ref: ModelRef):
    import torch
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(ref.checkpoint)
        model = AutoModelForSequenceClassification.from_pretrained(ref.checkpoint)
    except Exception as exc:
        raise BridgeLoadError(f"cannot load checkpoint {ref.checkpoint!r}: {exc}") from exc
    if getattr(model.config, "num_labels", 2) != 2:
        raise BridgeLoadError(
            f"checkpoint {ref.checkpoint!r} has {model.config.num_labels} labels, need 2"
        )
    model.eval()
    torch.set_grad_enabled(False)
    return tokenizer, model


def _read_variants(path: str) -> list[dict]:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            row = json.loads(line)
            for key in ("variant_id", "parent_idx", "transform_id", "func"):
                if key not in row:
                    raise ValueError(f"{path}:{line_no}: missing {key!r}")
            rows.append(row)
    return rows


def predict_rows(ref: ModelRef, rows: list[dict], seed: int = 42) -> list[dict]:
    import torch

    tokenizer, model = load_classifier(ref)
    torch.manual_seed(seed)
    out: list[dict] = []
    for start in range(0, len(rows), ref.batch_size):
        batch = rows[start : start + ref.batch_size]
        texts = [r["func"] for r in batch]
        # length probe without truncation to set the truncated flag
        probe = tokenizer(texts, truncation=False, padding=False)["input_ids"]
        truncated = [len(ids) > ref.max_len for ids in probe]
        try:
            inputs = tokenizer(
                texts,
                truncation=True,
                max_length=ref.max_len,
                padding=True,
                return_tensors="pt",
            )
            logits = model(**inputs).logits
            probs = torch.softmax(logits, dim=-1)
        except Exception as exc:  # keep the run going, flag the lines
            logger.warning("batch at row %d failed: %s", start, exc)
            for row in batch:
                out.append(
                    {
                        "parent_idx": row["parent_idx"],
                        "variant_id": row["variant_id"],
                        "transform_id": row["transform_id"],
                        "model_id": ref.model_id,
                        "error": str(exc),
                    }
                )
            continue
        for i, row in enumerate(batch):
            p1 = float(probs[i, 1])
            line = {
                "parent_idx": row["parent_idx"],
                "variant_id": row["variant_id"],
                "transform_id": row["transform_id"],
                "model_id": ref.model_id,
                "label": int(probs[i].argmax()),
                "p1": p1,
            }
            if truncated[i]:
                line["truncated"] = True
            out.append(line)
    return out


def predict_file(ref: ModelRef, variants_path: str, out_path: str, seed: int = 42) -> int:
    """Score a variants file; returns the number of flagged lines."""
    rows = _read_variants(variants_path)
    predictions = predict_rows(ref, rows, seed=seed)
    with open(out_path, "w", encoding="utf-8") as fh:
        for line in predictions:
            fh.write(json.dumps(line, sort_keys=True) + "\n")
    return sum(1 for line in predictions if "error" in line)
