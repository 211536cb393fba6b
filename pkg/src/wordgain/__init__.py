"""Word-category relative information gain toolkit.

Quantifies how informative each dictionary word is for each subject
category of a labeled corpus, producing frequency and RIG matrices,
ranked word lists, coverage unions and a thesaurus.
"""

from .corpus import CategoryRegistry, Corpus, Document, category_doc_sets, ingest
from .cleaning import CleaningReport, CleaningRule, clean_corpus, count_term_documents, load_rules
from .dictionary import Dictionary, WordEntry, build_dictionary, stem, tokenize
from .freq import (
    FrequencyMatrix,
    build_frequency_matrix,
    normalize_cols_l1,
    normalize_rows_l1,
    normalize_two_step,
)
from .rig import (
    ContingencyCells,
    RigMatrix,
    build_rig_matrix,
    category_entropy,
    conditional_entropy,
    information_gain,
    relative_information_gain,
)
from .ranking import (
    CoverageSet,
    RankedList,
    Thesaurus,
    compare_top_n,
    coverage_matches,
    coverage_union,
    extract_thesaurus,
    rank,
    sum_histogram,
)
from .reports import category_table, wordcloud_weights
from .pipeline import PipelineConfig, run_pipeline

__version__ = "0.1.0"
