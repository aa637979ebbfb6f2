# Copyright 2026 The PhononGate Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the phonongate simulator."""

import json

from . import _core
from ._core import (
    PhononGateError,
    avg_fidelity_entangled,
    avg_fidelity_separable,
    cnot_sequence,
    duffing_spectrum,
    exchange_unitary,
    figure_ids,
    gate_fidelity_closed,
    gate_fidelity_matrix,
    ideal_cnot,
    phase_aligned_distance,
    preset_names,
    qubit_subspace,
    rabi_rate,
)

__all__ = [
    "PhononGateError",
    "avg_fidelity_entangled",
    "avg_fidelity_separable",
    "cnot_sequence",
    "duffing_spectrum",
    "exchange_unitary",
    "figure_document",
    "figure_ids",
    "gate_fidelity_closed",
    "gate_fidelity_matrix",
    "ideal_cnot",
    "phase_aligned_distance",
    "preset_document",
    "preset_names",
    "qubit_subspace",
    "rabi_rate",
    "run_scenario",
]


def preset_document(name):
    return json.loads(_core.preset_document(name))


def figure_document(fig_id):
    return json.loads(_core.figure_document(fig_id))


def run_scenario(config, jobs=1):
    """Run a scenario dict. Returns ({column: list}, summary dict)."""
    header, rows, summary = _core.run_scenario(json.dumps(config), jobs)
    columns = {name: [row[k] for row in rows] for k, name in enumerate(header)}
    return columns, json.loads(summary)
