#!/usr/bin/env python3
"""Regenerate data/synsets.txt from a WordNet database directory.

Usage: build_synsets.py <wordnet-dict-dir> <out-file> word [word ...]

For every requested word, every sense in every part of speech is visited and
the other lemmas of that synset are collected. Multi-word lemmas are written
with spaces so that consumers can decide whether to keep them.
"""

import sys
from pathlib import Path

POS = ("noun", "verb", "adj", "adv")


def load_index(dict_dir: Path, pos: str) -> dict[str, list[int]]:
    index: dict[str, list[int]] = {}
    for line in (dict_dir / f"index.{pos}").read_text(encoding="utf-8").splitlines():
        if line.startswith(" "):
            continue
        fields = line.split()
        lemma, p_cnt = fields[0], int(fields[3])
        synset_cnt = int(fields[2])
        offsets = fields[4 + p_cnt + 2:]
        index[lemma] = [int(o) for o in offsets[:synset_cnt]]
    return index


def synset_lemmas(data: bytes, offset: int) -> list[str]:
    end = data.index(b"\n", offset)
    fields = data[offset:end].decode("utf-8").split()
    w_cnt = int(fields[3], 16)
    lemmas = []
    for i in range(w_cnt):
        word = fields[4 + 2 * i]
        # adjective markers such as "(p)" or "(a)"
        if word.endswith(")") and "(" in word:
            word = word[: word.index("(")]
        lemmas.append(word.replace("_", " ").lower())
    return lemmas


def main() -> int:
    if len(sys.argv) < 4:
        print(__doc__, file=sys.stderr)
        return 2
    dict_dir, out = Path(sys.argv[1]), Path(sys.argv[2])
    words = sorted({w.lower() for w in sys.argv[3:]})
    indexes = {pos: load_index(dict_dir, pos) for pos in POS}
    datas = {pos: (dict_dir / f"data.{pos}").read_bytes() for pos in POS}

    lines = [
        "# Synonym snapshot: all senses, all parts of speech.",
        "# Format: word: synonym, synonym, ...",
    ]
    for word in words:
        synonyms: list[str] = []
        for pos in POS:
            for offset in indexes[pos].get(word, []):
                for lemma in synset_lemmas(datas[pos], offset):
                    if lemma != word and lemma not in synonyms:
                        synonyms.append(lemma)
        if synonyms:
            lines.append(f"{word}: {', '.join(synonyms)}")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
