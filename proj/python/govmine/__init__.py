"""Python bindings for the govmine analysis core."""

from ._core import (
    ConfigError,
    ConsistencyError,
    GovmineError,
    IngestError,
    PreconditionError,
    ProtocolError,
    SingularDesignError,
    StageError,
    TransportError,
    adf_test,
    aggregate,
    analyze,
    bh_adjust,
    config_hash,
    evaluate,
    fit_lda,
    granger_pair,
    granger_panel,
    ingest,
    mann_whitney_u,
    report,
    segment,
    select_k,
    simulate,
    social_metrics,
    tech_metrics,
)

__all__ = [name for name in dir() if not name.startswith("_")]
