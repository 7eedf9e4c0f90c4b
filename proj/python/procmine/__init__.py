"""Process mining on CPEE templates, YAML logs and machining data."""

from ._core import (
    Classifier,
    Error,
    ModelInfeasible,
    PetriNet,
    align,
    clean_label,
    cluster_accuracy,
    fitness_table,
    hclust,
    kmeans,
    load_template_net,
    machining_csv,
    measurement_stats,
    parse_tpn,
    round_half_even,
    run_cli,
    silhouette,
    simulate,
    split_train_test,
    template_to_net,
    train_naive_bayes,
    train_svm,
    window_indices,
    yaml_to_xes,
)

__all__ = [
    "Classifier",
    "Error",
    "ModelInfeasible",
    "PetriNet",
    "align",
    "clean_label",
    "cluster_accuracy",
    "fitness_table",
    "hclust",
    "kmeans",
    "load_template_net",
    "machining_csv",
    "measurement_stats",
    "parse_tpn",
    "round_half_even",
    "run_cli",
    "silhouette",
    "simulate",
    "split_train_test",
    "template_to_net",
    "train_naive_bayes",
    "train_svm",
    "window_indices",
    "yaml_to_xes",
]
