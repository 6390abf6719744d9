"""Python bindings for the thematic analysis pipeline."""

from ._thematic import (
    ConfigError,
    Error,
    ProviderError,
    StageError,
    ValidationError,
    agglomerate,
    agreement_report,
    clean_text,
    cosine_distance,
    export_review_sheet,
    flag_verdicts,
    import_review_sheet,
    mock_embedding,
    parse_label_response,
    parse_score,
    render_accuracy_prompt,
    render_label_prompt,
    render_prompt,
    render_summary_prompt,
    run_cli,
    segment,
    strip_commonality,
)

__all__ = [
    "ConfigError",
    "Error",
    "ProviderError",
    "StageError",
    "ValidationError",
    "agglomerate",
    "agreement_report",
    "clean_text",
    "cosine_distance",
    "export_review_sheet",
    "flag_verdicts",
    "import_review_sheet",
    "mock_embedding",
    "parse_label_response",
    "parse_score",
    "render_accuracy_prompt",
    "render_label_prompt",
    "render_prompt",
    "render_summary_prompt",
    "run_cli",
    "segment",
    "strip_commonality",
]
