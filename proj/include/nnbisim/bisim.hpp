/*
 * Copyright 2026 The nnbisim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>

#include "nnbisim/error.hpp"
#include "nnbisim/network.hpp"
#include "nnbisim/partition.hpp"

namespace nnbisim {

struct BisimReport {
    bool ok = true;
    std::optional<Violation> witness;
};

/// Checks whether `p` is an NN-bisimulation of `net`: within every block of
/// every weighted layer, all nodes share activation, bias and pre-sum with
/// respect to every block of the previous layer. All comparisons are exact.
///
/// One pass over the edges of each layer. Layers are scanned in ascending
/// order; within a layer activations and biases are checked before
/// pre-sums, and the first violation found is reported.
/// Throws ContractError when `p` does not match the network's shape.
BisimReport check_bisimulation(const Network& net, const NetPartition& p);

/// Reduced network whose layer-i nodes are the blocks of p[i]. Quotient
/// weights are the pre-sums of each block's smallest member; for a
/// bisimulation the choice of member does not matter.
/// Throws PreconditionError (carrying the witness) if `p` is not a bisimulation.
Network quotient(const Network& net, const NetPartition& p);

/// Block-level valuation taking each block's common value.
/// Throws PreconditionError when `v` is not consistent with `p`.
Valuation abstract_valuation(const Valuation& v, const LayerPartition& p);

/// Inverse of abstract_valuation: every node receives its block's value.
Valuation concretize_valuation(const Valuation& abstract, const LayerPartition& p);

}  // namespace nnbisim
