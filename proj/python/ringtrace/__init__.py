# Copyright 2026 The ringtrace Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Ring-signature ledger simulation, feature extraction and tree ensembles."""

from ._ringtrace import (
    Chain,
    EconomyFiles,
    EconomySpec,
    Error,
    ForestModel,
    PublicChain,
    SimulationResult,
    export_dump,
    feature_names,
    featurize,
    gen_economy,
    graph_edges,
    load_dump,
    precision_recall,
    r_squared,
    read_chain,
    read_economy,
    read_public_chain,
    ring_pair_correlation,
    run_simulation,
    scenario_names,
    scenario_preset,
    train_forest,
    validate_chain,
    write_chain,
    write_economy,
    write_public_chain,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
