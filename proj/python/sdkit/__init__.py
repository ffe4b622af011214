"""Stochastic discrimination ensembles: weak models, discriminants and training."""

from ._sdkit import (
    ContractError,
    Dataset,
    DatasetFormatError,
    Ensemble,
    EnsembleFormatError,
    ModelRating,
    Point,
    SizeError,
    UncoveredPointError,
    WeakModel,
    enumerate_k_subsets,
    fixture,
    membership,
    rate,
    read_dataset_csv,
    read_ensemble,
    train,
    write_ensemble,
    x_value,
)

__all__ = [
    "ContractError",
    "Dataset",
    "DatasetFormatError",
    "Ensemble",
    "EnsembleFormatError",
    "ModelRating",
    "Point",
    "SizeError",
    "UncoveredPointError",
    "WeakModel",
    "enumerate_k_subsets",
    "fixture",
    "membership",
    "rate",
    "read_dataset_csv",
    "read_ensemble",
    "train",
    "write_ensemble",
    "x_value",
]
