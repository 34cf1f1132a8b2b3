"""Trainable statistical recognizer: hashed embeddings, residual convolution
encoder, per-token BILOU prediction with constraint repair."""

from .model import (
    TaggerModel,
    build_label_list,
    decode,
    encode,
    hash64,
    hash_embed,
    normalize_surface,
    predict,
    repair_tags,
    token_probabilities,
)
from .serialize import load_model, save_model
from .training import (
    EmptyDataset,
    LabelOutsideSchema,
    TrainConfig,
    bilou_targets,
    evaluate_loss,
    gradient_check,
    loss_and_grads,
    train,
)

__all__ = [
    "TaggerModel",
    "TrainConfig",
    "EmptyDataset",
    "LabelOutsideSchema",
    "build_label_list",
    "bilou_targets",
    "decode",
    "encode",
    "evaluate_loss",
    "gradient_check",
    "hash64",
    "hash_embed",
    "load_model",
    "loss_and_grads",
    "normalize_surface",
    "predict",
    "repair_tags",
    "save_model",
    "token_probabilities",
    "train",
]
