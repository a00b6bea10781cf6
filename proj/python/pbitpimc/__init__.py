# Copyright 2026 The pbit-pimc Authors
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

"""Python interface to the pbit-pimc core."""

import json

from ._pbitpimc import (
    ConfigError,
    __version__,
    fit_double_exp,
    replica_coupling,
    wallclock_projection,
)
from . import _pbitpimc as _core

__all__ = [
    "ConfigError",
    "__version__",
    "default_config",
    "fit_double_exp",
    "lattice_summary",
    "oracle_checks",
    "replica_coupling",
    "run",
    "wallclock_projection",
]


def default_config():
    return json.loads(_core._default_config())


def lattice_summary(**config):
    """Counts, couplings and coloring of the problem described by ``config``."""
    return json.loads(_core._lattice_summary(json.dumps(config)))


def run(**config):
    """Run one experiment. Returns the summary plus the ensemble series."""
    out = _core._run(json.dumps(config))
    summary = json.loads(out["summary"])
    summary["series"].update(
        time=list(out["time"]), mean=list(out["mean"]), ci_half_width=list(out["ci_half_width"])
    )
    return summary


def oracle_checks(seed=1, samples=200000):
    return json.loads(_core._oracle_checks(seed, samples))
