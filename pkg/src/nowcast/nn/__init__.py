"""From-scratch neural network core: layers, sequential models, gradient
checking, and binary checkpoints. Everything runs on float64 numpy arrays
with a leading batch axis."""

from .layers import (
    BiLSTM,
    Conv1D,
    Dense,
    Dropout,
    GlobalAvgPool1D,
    LSTM,
    MaxPool1D,
    ReLU,
    Sigmoid,
    layer_from_hyperparams,
    sigmoid,
)
from .model import Model, bce_with_grad, gradient_check
from .checkpoint import load_model, save_model

__all__ = [
    "BiLSTM",
    "Conv1D",
    "Dense",
    "Dropout",
    "GlobalAvgPool1D",
    "LSTM",
    "MaxPool1D",
    "Model",
    "ReLU",
    "Sigmoid",
    "bce_with_grad",
    "gradient_check",
    "layer_from_hyperparams",
    "load_model",
    "save_model",
    "sigmoid",
]
