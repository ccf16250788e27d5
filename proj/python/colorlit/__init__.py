"""Color-term noun extraction and Glasgow Norm trend analysis."""

from ._core import (  # noqa: F401
    ColorHit,
    ColorLexicon,
    ColorlitError,
    CorrelationResult,
    DataError,
    IoError,
    Projection,
    Sentence,
    Token,
    __version__,
    char_ngrams,
    clean_gutenberg_text,
    correlate,
    count_color_occurrences,
    count_words,
    default_lexicon,
    dependency_edges,
    era_of,
    extract_hits,
    fetch_text,
    fit_pca,
    fnv1a32,
    gutenberg_urls,
    match_color,
    normalize,
    normalized_frequency,
    p_two_sided,
    parse_conllu,
    parse_conllu_file,
    parse_lexicon,
    pearson,
    run_cli,
    split_811,
    stars,
)
