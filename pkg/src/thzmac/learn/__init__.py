"""In-repo supervised learning for solver mimicry and LoS classification."""

from .bayes import GaussianNaiveBayes
from .bench import predict_latency_bench
from .data import (FEATURE_NAMES, DataPoint, Dataset, build_training_set,
                   featurize, local_ue_density, stratified_split)
from .forest import RandomForest
from .gbt import GradientBoostedTrees
from .metrics import (ConfusionMatrix, EvalReport, evaluate,
                      kfold_accuracy, metrics_from_confusion)
from .model_io import load_model, save_model
from .models import MODEL_KINDS, Model, train_classifier
from .tree import DecisionTree

__all__ = [
    "FEATURE_NAMES", "MODEL_KINDS", "ConfusionMatrix", "DataPoint", "Dataset",
    "DecisionTree", "EvalReport", "GaussianNaiveBayes", "GradientBoostedTrees",
    "Model", "RandomForest", "build_training_set", "evaluate", "featurize",
    "kfold_accuracy", "load_model", "local_ue_density", "metrics_from_confusion",
    "predict_latency_bench", "save_model", "stratified_split", "train_classifier",
]
