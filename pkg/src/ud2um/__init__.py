"""Convert UD morphological features in CoNLL-U treebanks to UniMorph."""

from .conllu import Document, Sentence, Token, parse_document, serialize_document
from .convert import Skipped, UniMorphConverter, convert_document, convert_token
from .mapping import MappingTable, base_convert, load_mapping
from .recall import RecallReport, audit_discrepancies, evaluate_recall
from .rules import RuleContext, RuleSet, apply_rules, collect_template, parse_rules
from .schema import UdMsd, UmMsd, canonical_um, msd_equal, parse_ud_feats
from .tagger import F1Report, SuffixBackoffTagger, evaluate_f1
from .unimorph import ParadigmTable, load_table, lookup

__all__ = [
    "Document", "Sentence", "Token", "parse_document", "serialize_document",
    "Skipped", "UniMorphConverter", "convert_document", "convert_token",
    "MappingTable", "base_convert", "load_mapping",
    "RecallReport", "audit_discrepancies", "evaluate_recall",
    "RuleContext", "RuleSet", "apply_rules", "collect_template", "parse_rules",
    "UdMsd", "UmMsd", "canonical_um", "msd_equal", "parse_ud_feats",
    "F1Report", "SuffixBackoffTagger", "evaluate_f1",
    "ParadigmTable", "load_table", "lookup",
]
__version__ = "0.1.0"
