"""Temporal feature extraction for transaction ego networks of labelled accounts."""

from .aggregate import EgoReport, EmptyCohortError, LabelSummary, analyze_cohort, analyze_ego, emit_reports
from .egonet import EgoNetwork, build_ego_network, clustering_fraction, label_clustering_table, local_clustering_coefficient
from .synth import ArchetypeParams, TemporalProfile, generate_cohort, generate_trace, preset
from .temporal import (
    LifeCycle,
    NoActivityError,
    PhaseFeatures,
    PhaseWindow,
    WindowMode,
    label_lifecycle_stats,
    label_phase_table,
    life_cycle,
    phase_features,
    phase_windows,
)
from .txmodel import (
    AccountLabel,
    EgonetError,
    InputError,
    TransactionRecord,
    TransactionSet,
    ingest_labels,
    ingest_transactions,
)

__version__ = "0.1.0"
