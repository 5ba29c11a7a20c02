"""Measure recall on full UD and UniMorph releases and print it next to published numbers.

Expects the usual release layouts, which are not shipped here::

    UD_ROOT/UD_Spanish/es-ud-train.conllu
    UM_ROOT/spa/spa

Only languages that have both resources on disk are reported. There is no
pass/fail: different release snapshots give different numbers.

    python3 scripts/external_recall.py --ud UD_ROOT --unimorph UM_ROOT
"""

from __future__ import annotations

import argparse
import sys
import warnings
from importlib import resources
from pathlib import Path

from ud2um.conllu import Document, read_document
from ud2um.convert import UniMorphConverter
from ud2um.languages import known_languages
from ud2um.recall import evaluate_recall
from ud2um.unimorph import load_table


def published() -> dict[str, tuple[str, str]]:
    text = resources.files("ud2um.data").joinpath("reference_recall.tsv").read_text("utf-8")
    out = {}
    for line in text.splitlines():
        if line and not line.startswith("#"):
            code, lookup_only, post_edit = line.split("\t")
            out[code] = (lookup_only, post_edit)
    return out


def treebank_files(ud_root: Path, treebank: str) -> list[Path]:
    # the basic-name treebank only, e.g. UD_Spanish rather than UD_Spanish-AnCora
    folder = ud_root / treebank
    return sorted(folder.glob("*.conllu")) if folder.is_dir() else []


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--ud", type=Path, required=True, help="root holding UD_<Language> folders")
    parser.add_argument("--unimorph", type=Path, required=True, help="root holding <iso>/<iso> tables")
    parser.add_argument("--lang", nargs="*", help="restrict to these language codes")
    args = parser.parse_args(argv)

    ref = published()
    print("lang\tpairs\tlookup\tpost-edit\tpublished lookup\tpublished post-edit")
    for code, lang in sorted(known_languages().items()):
        if args.lang and code not in args.lang:
            continue
        files = treebank_files(args.ud, lang.treebank)
        table_path = args.unimorph / lang.iso639_3 / lang.iso639_3
        if not files or not table_path.is_file():
            continue
        table = load_table(table_path, code)
        docs = [read_document(p) for p in files]
        scores = []
        for csv_only in (True, False):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                conv = UniMorphConverter(language=code, csv_only=csv_only).fit()
            converted = Document(tuple(s for d in docs for s in conv.transform(d).sentences))
            scores.append(evaluate_recall(converted, table))
        lookup_only, post_edit = scores
        pub = ref.get(code, ("-", "-"))
        fmt = lambda r: "-" if r.recall is None else f"{r.recall:.2f}"  # noqa: E731
        print(f"{code}\t{post_edit.overlapping_pairs}\t{fmt(lookup_only)}\t{fmt(post_edit)}\t{pub[0]}\t{pub[1]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
