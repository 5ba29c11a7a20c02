"""Command-line interface: convert, evaluate, audit, tag.

Examples::

    ud2um convert es-ud-train.conllu --lang es --output es-um.conllu
    ud2um evaluate es-ud-train.conllu --lang es --unimorph spa/spa
    ud2um evaluate es-ud-train.conllu --lang es --unimorph spa/spa --csv-only
    ud2um audit es-ud-train.conllu --lang es --unimorph spa/spa --output miss.tsv
    ud2um tag --train es-ud-train.conllu --test es-ud-test.conllu --lang es
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from .conllu import Document, read_document, serialize_document
from .convert import ConversionAudit, UniMorphConverter, file_hash
from .languages import language_code, resolve_language
from .recall import (
    AUDIT_COLUMNS,
    REPORT_COLUMNS,
    audit_discrepancies,
    evaluate_recall,
    format_report_text,
    report_rows,
    summarize_discrepancies,
)
from .rules import lint_rules
from .tagger import F1_COLUMNS, SuffixBackoffTagger, evaluate_f1, format_f1_text
from .unimorph import load_table


class CliError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, inputs: bool = True) -> None:
    if inputs:
        p.add_argument("inputs", nargs="+", type=Path, help="CoNLL-U file(s)")
    p.add_argument("--lang", required=True, help="language code, name or UD treebank name")
    p.add_argument("--mapping", type=Path, help="mapping file (default: shipped table)")
    p.add_argument("--rules", type=Path, help="rules file or directory of <lang>.rules files")
    p.add_argument("--output", "-o", type=Path, help="output file (default: stdout)")
    p.add_argument("--jobs", "-j", type=int, default=1, help="files converted in parallel")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ud2um", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="rewrite FEATS with UniMorph descriptions")
    _add_common(p)
    p.add_argument("--strip-pos", action="store_true", help="leave the part of speech out of FEATS")
    p.add_argument("--csv-only", action="store_true", help="plain lookup, no post-edit rules")

    for name, help_ in (("evaluate", "token-level recall against a UniMorph table"),
                        ("audit", "list converted descriptions the table does not attest")):
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        p.add_argument("--unimorph", type=Path, required=True,
                       help="UniMorph table, or a directory holding <iso639-3>/<iso639-3>")
        p.add_argument("--csv-only", action="store_true", help="plain lookup, no post-edit rules")
        p.add_argument("--report-format", choices=("text", "tsv"), default="text" if name == "evaluate" else "tsv")
        if name == "evaluate":
            p.add_argument("--reference", action="store_true",
                           help="print published recall for this language next to the result")

    p = sub.add_parser("tag", help="train and score the baseline tagger under each schema")
    _add_common(p, inputs=False)
    p.add_argument("--train", type=Path, required=True)
    p.add_argument("--test", type=Path, required=True)
    p.add_argument("--schema", choices=("ud", "unimorph", "both"), default="both")
    p.add_argument("--suffix-k", type=int, default=4)
    p.add_argument("--report-format", choices=("text", "tsv"), default="text")
    return parser


# ---------------------------------------------------------------------------


def _converter(args, csv_only: bool | None = None, strip_pos: bool = False) -> UniMorphConverter:
    csv_only = getattr(args, "csv_only", False) if csv_only is None else csv_only
    conv = UniMorphConverter(language=args.lang,
                             mapping=str(args.mapping) if args.mapping else None,
                             rules=str(args.rules) if args.rules else None,
                             csv_only=csv_only, strip_pos=strip_pos).fit()
    for problem in lint_rules(conv.rules_):
        warnings.warn(f"rules lint: {problem}")
    return conv


def _convert_one(job):
    conv, path = job
    return conv.convert(read_document(path))


def _convert_files(conv: UniMorphConverter, paths: list[Path], jobs: int):
    """Convert files in input order; with ``jobs > 1`` in worker processes."""
    work = [(conv, p) for p in paths]
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_convert_one, work))
    else:
        results = [_convert_one(w) for w in work]
    audit = ConversionAudit()
    for _, a in results:
        audit.update(a)
    for (kind, message), n in sorted(audit.findings.items()):
        warnings.warn(f"{kind}: {message} (x{n})")
    return [doc for doc, _ in results], audit


def _concat(docs: list[Document]) -> Document:
    return Document(tuple(s for d in docs for s in d.sentences))


def _hashes(conv: UniMorphConverter) -> dict[str, str]:
    return {
        "mapping_sha256": conv.mapping_hash_,
        "rules_sha256": file_hash(conv.rules_file_) if conv.rules_file_ else "-",
    }


def _write(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def _tsv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _table_path(arg: Path, lang: str) -> Path:
    if arg.is_dir():
        info = resolve_language(lang)
        iso3 = info.iso639_3 if info else language_code(lang)
        path = arg / iso3 / iso3
        if not path.is_file():
            raise CliError(f"UniMorph table not found; expected {path}")
        return path
    if not arg.is_file():
        raise CliError(f"UniMorph table not found; expected {arg}")
    return arg


def run_convert(args) -> int:
    conv = _converter(args, strip_pos=args.strip_pos)
    docs, audit = _convert_files(conv, args.inputs, args.jobs)
    if len(docs) == 1 or args.output is None:
        _write("".join(serialize_document(d) for d in docs), args.output)
        dropped_path = Path(f"{args.output}.dropped.tsv") if args.output else None
    else:
        args.output.mkdir(parents=True, exist_ok=True)
        for src, doc in zip(args.inputs, docs):
            (args.output / src.name).write_text(serialize_document(doc), encoding="utf-8")
        dropped_path = args.output / "dropped.tsv"
    rows = [[a, v, str(n)] for a, v, n in audit.dropped_rows()]
    if dropped_path is None:
        for a, v, n in rows:
            print(f"dropped\t{a}={v}\t{n}", file=sys.stderr)
    else:
        dropped_path.write_text(_tsv(["attribute", "value", "count"], rows), encoding="utf-8")
    return 0


def _converted_corpus(args):
    table = load_table(_table_path(args.unimorph, args.lang), language_code(args.lang))
    conv = _converter(args)
    docs, _ = _convert_files(conv, args.inputs, args.jobs)
    return conv, table, _concat(docs)


def _reference(lang: str) -> tuple[str, str] | None:
    text = resources.files("ud2um.data").joinpath("reference_recall.tsv").read_text("utf-8")
    for line in text.splitlines():
        if line and not line.startswith("#"):
            code, lookup_only, post_edit = line.split("\t")
            if code == lang:
                return lookup_only, post_edit
    return None


def run_evaluate(args) -> int:
    conv, table, doc = _converted_corpus(args)
    report = evaluate_recall(doc, table)
    hashes = _hashes(conv)
    if args.report_format == "tsv":
        rows = [row + [hashes["mapping_sha256"], hashes["rules_sha256"]] for row in report_rows(report)]
        text = _tsv(REPORT_COLUMNS + ["mapping_hash", "rules_hash"], rows)
    else:
        header = {"mode": "lookup only" if args.csv_only else "post-edited", **hashes,
                  "table_sha256": report.table_hash}
        text = format_report_text(report, header)
        if args.reference:
            ref = _reference(conv.language_)
            if ref:
                text += f"published recall   lookup {ref[0]} / post-edit {ref[1]}\n"
            else:
                text += "published recall   none for this language\n"
    _write(text, args.output)
    return 0


def run_audit(args) -> int:
    _, table, doc = _converted_corpus(args)
    records = audit_discrepancies(doc, table)
    if not records:
        _write("", args.output)
        return 0
    if args.report_format == "tsv":
        text = _tsv(AUDIT_COLUMNS, [r.row() for r in records])
    else:
        lines = ["misses by dimension diff:"]
        lines += [f"  {n:>6}  {sig}" for sig, n in summarize_discrepancies(records)]
        lines.append("records:")
        lines += ["  " + "\t".join(r.row()) for r in records]
        text = "\n".join(lines) + "\n"
    _write(text, args.output)
    return 0


def run_tag(args) -> int:
    train, test = read_document(args.train), read_document(args.test)
    schemas = ("ud", "unimorph") if args.schema == "both" else (args.schema,)
    reports = []
    for schema in schemas:
        tr, te = train, test
        if schema == "unimorph":
            conv = _converter(args, csv_only=False)
            tr, te = conv.transform(train), conv.transform(test)
        tagger = SuffixBackoffTagger(suffix_k=args.suffix_k, schema=schema).fit(tr)
        reports.append(evaluate_f1(te, tagger.predict(te), schema))
    if args.report_format == "tsv":
        text = _tsv(F1_COLUMNS, [row for r in reports for row in r.rows()])
    else:
        text = "\n".join(format_f1_text(r) for r in reports)
    _write(text, args.output)
    return 0


COMMANDS = {"convert": run_convert, "evaluate": run_evaluate, "audit": run_audit, "tag": run_tag}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            status = COMMANDS[args.command](args)
        except (CliError, ValueError, OSError) as e:
            print(f"error: {e}", file=sys.stderr)
            status = 1
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
