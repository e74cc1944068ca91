import json

import pytest

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "int", "return", "void", "if", "else", "for", "while", "char",
    "(", ")", "{", "}", ";", "=", "+", "-", "*", "0", "1", "2",
    "a", "b", "c", "f", "g", "n", "x", "y",
]


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """A miniature randomly initialized binary classifier checkpoint that
    loads through the standard auto classes."""
    import torch
    from transformers import BertConfig, BertForSequenceClassification, BertTokenizer

    root = tmp_path_factory.mktemp("tiny-ckpt")
    vocab_file = root / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n")
    tokenizer = BertTokenizer(str(vocab_file))
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
        num_labels=2,
    )
    torch.manual_seed(0)
    model = BertForSequenceClassification(config)
    model.save_pretrained(root)
    tokenizer.save_pretrained(root)
    return str(root)


@pytest.fixture()
def variants_file(tmp_path):
    """Five-function fixture in the variants wire format."""
    rows = [
        {"variant_id": "1#orig#0", "parent_idx": 1, "transform_id": "orig",
         "site": 0, "func": "int f(void){return 0;}"},
        {"variant_id": "1#T15_add_comment#0", "parent_idx": 1,
         "transform_id": "T15_add_comment", "site": 0,
         "func": "int f(void){\n    /* no-op marker */return 0;}"},
        {"variant_id": "2#orig#0", "parent_idx": 2, "transform_id": "orig",
         "site": 0, "func": "int g(int n){return n + 1;}"},
        {"variant_id": "2#T10_incdec_to_compound#0", "parent_idx": 2,
         "transform_id": "T10_incdec_to_compound", "site": 0,
         "func": "int g(int n){n += 1; return n;}"},
        {"variant_id": "3#orig#0", "parent_idx": 3, "transform_id": "orig",
         "site": 0, "func": "int h(int a,int b){if(a){return b;}else{return a;}}"},
    ]
    path = tmp_path / "variants.jsonl"
    with open(path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return str(path)
