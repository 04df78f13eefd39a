"""Radar point-cloud fall detection."""

import json

from ._fade import (
    ConfigError,
    DataError,
    InvalidScript,
    Pipeline,
    cluster,
    default_config,
    evaluate_files,
    gate_threshold,
    metrics,
    run_files,
    simulate,
    simulate_files,
)


def evaluate(events, truth, tol=2.0):
    """Metrics report for an events file against a truth file, as a dict."""
    return json.loads(evaluate_files(events, truth, tol))


def run_scenario(scenario, config=None):
    """Simulates a scenario (dict or JSON text) and streams it through a pipeline.

    Returns (events, truth).
    """
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    data = simulate(text)
    cfg = None if config is None else (config if isinstance(config, str) else json.dumps(config))
    pipe = Pipeline(cfg, data["t_frame"], data["height"], data["tilt"])
    events = []
    for index, t, points in data["frames"]:
        events.extend(pipe.process(points, index, t))
    return events, data["truth"]


__all__ = [
    "ConfigError",
    "DataError",
    "InvalidScript",
    "Pipeline",
    "cluster",
    "default_config",
    "evaluate",
    "evaluate_files",
    "gate_threshold",
    "metrics",
    "run_files",
    "run_scenario",
    "simulate",
    "simulate_files",
]
