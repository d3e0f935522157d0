"""Sparse integer scoring systems trained by exact 0-1 loss minimization.

Exact quantities (objective values, rates, AUC) come back as
``fractions.Fraction``; weights and thresholds may be passed as strings such
as ``"7/5"`` or ``"1.4"`` to keep them exact.
"""

from ._core import (
    ConfigError,
    DataError,
    Dataset,
    ScoringSystem,
    auc,
    calibration,
    confusion,
    export_mps,
    load_csv,
    make_folds,
    mine_rules,
    objective,
    polish,
    sweep,
    synth_planted,
    synth_recidivism,
    train,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Dataset",
    "ScoringSystem",
    "auc",
    "calibration",
    "confusion",
    "export_mps",
    "load_csv",
    "make_folds",
    "mine_rules",
    "objective",
    "polish",
    "sweep",
    "synth_planted",
    "synth_recidivism",
    "train",
]
