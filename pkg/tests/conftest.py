import json

import pytest

from semmut.microcorpus import load_micro_corpus


@pytest.fixture(scope="session")
def micro_corpus():
    return load_micro_corpus()


TOY_RECORDS = [
    {
        "idx": 1,
        "func": (
            "int add_clamp(int a, int b) {\n"
            "    int s = a + b;\n"
            "    if (s > 100 && a > 0) {\n"
            "        s = 100;\n"
            "    }\n"
            "    return s;\n"
            "}\n"
        ),
        "target": 0,
        "project": "demo",
    },
    {
        "idx": 2,
        "func": (
            "int spin(int n) {\n"
            "    int i;\n"
            "    int t = 0;\n"
            "    for (i = 0; i < n; i++) {\n"
            "        t += i;\n"
            "    }\n"
            "    return t;\n"
            "}\n"
        ),
        "target": 1,
    },
    {"idx": 3, "func": "int busted(", "target": 0},
    {
        "idx": 4,
        "func": (
            "int pick(int c, int x, int y) {\n"
            "    int out;\n"
            "    out = c ? x : y;\n"
            "    return out;\n"
            "}\n"
        ),
        "target": 1,
    },
]


@pytest.fixture
def toy_corpus_path(tmp_path):
    path = tmp_path / "corpus.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for row in TOY_RECORDS:
            fh.write(json.dumps(row) + "\n")
    return str(path)
