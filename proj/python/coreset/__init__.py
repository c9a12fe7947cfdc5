# Copyright 2026 The Coreset Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Sensitivity-sampling coresets for monotonic-kernel losses."""

import json as _json

from ._core import (
    Coreset,
    CoresetError,
    KernelSpec,
    SensitivityProfile,
    SolveResult,
    WeightedPointSet,
    build_coreset,
    compact,
    coreset_size,
    cost,
    empirical_sensitivities,
    find_intersection,
    link_eval,
    logistic_sensitivity,
    make_synthetic,
    make_wine_like,
    merge,
    minimize,
    monotonic_coreset,
    multistart_minimize,
    sensitivity_profile,
    sigmoid_sensitivity,
    sort_by_norm,
    stream_coreset,
    total_cost,
    total_cost_gradient,
    uniform_sample,
    weighted_sensitivity_profile,
)
from . import _core


def regularized_ratio_sweep(kind, c, k, radius=None, points=100000):
    return _json.loads(_core.regularized_ratio_sweep(kind, c, k, radius, points))


def lower_bound_demo(n, d, radii, kind="sigmoid"):
    return _json.loads(_core.lower_bound_demo(n, d, list(radii), kind))


def bounds_report(points=100000):
    return _json.loads(_core.bounds_report(points))


def run_experiment(mode, points, labels=None, config=None, name="array"):
    """Runs the coreset vs uniform experiment; returns the report as a dict.

    Points are scaled into the unit ball first. `config` uses the keys of the
    CLI's --config JSON.
    """
    raw = _core.run_experiment(mode, points, labels, _json.dumps(config or {}), name)
    return _json.loads(raw)


__all__ = [n for n in dir() if not n.startswith("_")]
