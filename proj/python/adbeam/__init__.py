"""Adhesive beam dynamics: solver, oracles and experiment harnesses."""

import json as _json
import os as _os

from ._core import (
    BeamParams,
    ClosedForm,
    Grid,
    PotentialSpec,
    adhesion_check,
    adhesion_threshold,
    apply_biharmonic,
    closed_form_energy,
    discrete_frequencies,
    energy,
    eval_closed_form,
    eval_phi,
    free_free_frequencies,
    free_free_roots,
    kink_time,
    select_h,
    simulate,
    smoothing_residual,
    stability_limit,
    uniform_ode_oracle,
)
from . import _core


def run(config_path, out_dir):
    """Run a config file; returns the summary dict."""
    return _json.loads(_core._run(_os.fspath(config_path), _os.fspath(out_dir)))


def experiment(name, config_path, out_dir):
    """Run a named harness; returns the report dict."""
    return _json.loads(_core._experiment(name, _os.fspath(config_path), _os.fspath(out_dir)))


def parse_config(text, base_dir="."):
    """Validate a config string and return its normalized form."""
    return _json.loads(_core._parse_config(text, _os.fspath(base_dir)))
