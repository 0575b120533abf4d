"""Adaptive smooth second-order sliding-mode control and disturbance observation."""

import json

import numpy as np

from ._core import (
    EigenSolverError,
    NumericalAbort,
    UsageError,
    chattering_index,
    eig_sym,
    is_positive_definite,
    kron_with_identity,
    residual_sets,
    settling_time,
    settling_time_lemma1,
    settling_time_lemma2,
    solve_theta3,
)
from . import _core

__all__ = [
    "EigenSolverError",
    "NumericalAbort",
    "UsageError",
    "certify",
    "chattering_index",
    "eig_sym",
    "is_positive_definite",
    "kron_with_identity",
    "residual_sets",
    "run",
    "settling_time",
    "settling_time_lemma1",
    "settling_time_lemma2",
    "solve_theta3",
]


def certify(**gains):
    """Gain inequality, Lyapunov matrices and constants for the given gains."""
    return json.loads(_core.certificate_json(json.dumps({"gains": gains}) if gains else ""))


def run(experiment, method, gains=None, sim=None, disturbance=None):
    """Simulate one cell. Returns (report dict, trajectory dict of numpy arrays).

    The report carries the resolved config under "config"; passing its pieces
    back in reproduces the run exactly.
    """
    cfg = {}
    if gains:
        cfg["gains"] = gains
    if sim:
        cfg["sim"] = sim
    if disturbance:
        cfg["disturbance"] = disturbance
    report, traj = _core.run_json(experiment, method, json.dumps(cfg) if cfg else "")
    return json.loads(report), {k: np.asarray(v) for k, v in traj.items()}
