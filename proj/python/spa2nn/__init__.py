# Copyright 2026 The spa2nn Authors
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

"""Threshold secret-shared approximate nearest neighbor search.

The heavy lifting happens in the compiled ``_spa2nn`` extension; this module
adds a dict-based wrapper around experiment runs.
"""

import json

from ._spa2nn import (
    MERSENNE61,
    Bitgraph,
    DisconnectedVertex,
    EmptyBitgraph,
    EmptyDataset,
    EmptyIndex,
    EmptyLayer,
    Error,
    FormatError,
    HnswIndex,
    InsufficientShares,
    MalformedBranch,
    OverflowError,
    ParameterError,
    SharedIndex,
    TripleReuse,
    UnknownElement,
    UnknownNeighbor,
    demo_fig3,
    leakage,
    mss_size,
    reconstruct,
    share,
    sweep,
)
from ._spa2nn import default_config_json as _default_config_json
from ._spa2nn import run_json as _run_json

__all__ = [
    "MERSENNE61",
    "Bitgraph",
    "DisconnectedVertex",
    "EmptyBitgraph",
    "EmptyDataset",
    "EmptyIndex",
    "EmptyLayer",
    "Error",
    "FormatError",
    "HnswIndex",
    "InsufficientShares",
    "MalformedBranch",
    "OverflowError",
    "ParameterError",
    "SharedIndex",
    "TripleReuse",
    "UnknownElement",
    "UnknownNeighbor",
    "default_config",
    "demo_fig3",
    "leakage",
    "mss_size",
    "reconstruct",
    "run",
    "share",
    "sweep",
]


def default_config():
    """Every experiment setting with its default value."""
    return json.loads(_default_config_json())


def run(**overrides):
    """Run one experiment and return its report as a dict.

    Keyword arguments override fields of :func:`default_config`; unknown
    names raise :class:`FormatError`.
    """
    config = default_config()
    config.update(overrides)
    if "M" in overrides and "mL" not in overrides:
        config["mL"] = -1.0
    return json.loads(_run_json(json.dumps(config)))
