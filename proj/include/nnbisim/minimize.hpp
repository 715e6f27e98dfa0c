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

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nnbisim/network.hpp"
#include "nnbisim/partition.hpp"

namespace nnbisim {

/// One refinement applied by minimize().
struct RefinementStep {
    enum class Kind {
        io_split,        ///< input/output layer forced to singletons (preserve_io)
        act_bias_split,  ///< initial split by (activation, bias)
        presum_split     ///< split of an inconsistent block
    };

    Kind kind = Kind::presum_split;
    std::size_t layer = 0;
    Block split_block;
    std::vector<Block> result;
    /// Previous-layer block whose pre-sums disagreed (presum_split only).
    std::optional<Block> trigger;
};

std::string_view step_kind_name(RefinementStep::Kind kind);

/// Audit log of a minimization. Replaying `steps` from the partition with
/// one block per layer reproduces `final_partition`.
struct RefinementTrace {
    std::vector<RefinementStep> steps;
    NetPartition final_partition;

    std::size_t presum_splits() const noexcept;
};

/// Re-applies `trace.steps` to the one-block-per-layer partition over
/// `layer_sizes`. Throws ValidationError if a step does not apply.
NetPartition replay(const RefinementTrace& trace, const std::vector<std::size_t>& layer_sizes);

/// Maximal groups of layer `layer` agreeing exactly on activation and bias.
LayerPartition split_act_bias(const Network& net, std::size_t layer);

struct InconsistentPair {
    std::size_t layer = 0;  ///< layer of the inconsistent block
    Block target;           ///< block of p[layer]
    Block prev;             ///< block of p[layer - 1]
};

/// First block pair, in ascending (layer, block, previous block) order, whose
/// members disagree on the pre-sum; empty when every pair is consistent.
std::optional<InconsistentPair> find_inconsistent_pair(const Network& net, const NetPartition& p);

/// Splits `target_block` into maximal groups with equal pre-sum with respect
/// to `prev_block`, in canonical order. A consistent block comes back whole.
std::vector<Block> split_pre(const Network& net, std::size_t layer, const Block& target_block,
                             const Block& prev_block);

enum class SplitSchedule {
    lowest_first,   ///< scan from the lowest layer after every split
    highest_first,  ///< scan from the output layer downwards after every split
};

struct MinimizeOptions {
    /// Start the input and output layers as singletons instead of one block.
    bool preserve_io = true;
    SplitSchedule schedule = SplitSchedule::lowest_first;
};

struct MinimizeResult {
    NetPartition partition;
    Network reduced;
    RefinementTrace trace;
};

/// Coarsest NN-bisimulation of `net` (subject to preserve_io) by partition
/// refinement, together with the quotient network.
MinimizeResult minimize(const Network& net, const MinimizeOptions& options = {});

/// True when `p` is a bisimulation that no merge of two same-layer blocks
/// keeps a bisimulation. With `preserve_io`, merges in the input and output
/// layers are not considered (those layers are pinned to singletons).
/// Throws ContractError if `p` is not a bisimulation. Brute force; intended
/// for small networks.
bool maximality_check(const Network& net, const NetPartition& p, bool preserve_io = false);

}  // namespace nnbisim
