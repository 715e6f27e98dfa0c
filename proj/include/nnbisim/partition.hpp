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
#include <vector>

#include "nnbisim/network.hpp"

namespace nnbisim {

/// Node positions of one layer, ascending.
using Block = std::vector<std::size_t>;

/// Partition of the nodes of one layer.
///
/// Always held in canonical form: members ascending within each block,
/// blocks ordered by their smallest member. Construction validates that the
/// blocks are non-empty, disjoint and cover {0, ..., node_count - 1}.
class LayerPartition {
public:
    LayerPartition() = default;
    LayerPartition(std::size_t layer, std::size_t node_count, std::vector<Block> blocks);

    static LayerPartition singletons(std::size_t layer, std::size_t node_count);
    static LayerPartition single_block(std::size_t layer, std::size_t node_count);

    std::size_t layer() const noexcept { return layer_; }
    std::size_t node_count() const noexcept { return block_of_.size(); }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const Block& block(std::size_t j) const { return blocks_.at(j); }
    /// Index of the block holding `node`.
    std::size_t block_of(std::size_t node) const { return block_of_.at(node); }
    const std::vector<std::size_t>& block_index() const noexcept { return block_of_; }

    friend bool operator==(const LayerPartition&, const LayerPartition&) = default;

private:
    std::size_t layer_ = 0;
    std::vector<Block> blocks_;
    std::vector<std::size_t> block_of_;
};

/// One LayerPartition per layer 0..k.
class NetPartition {
public:
    NetPartition() = default;
    explicit NetPartition(std::vector<LayerPartition> layers);

    std::size_t layer_count() const noexcept { return layers_.size(); }
    const LayerPartition& operator[](std::size_t layer) const { return layers_.at(layer); }
    const std::vector<LayerPartition>& layers() const noexcept { return layers_; }
    std::vector<std::size_t> layer_sizes() const;
    std::size_t block_count() const noexcept;

    /// True when the partition covers exactly the layers and nodes of `net`.
    bool matches(const Network& net) const noexcept;

    friend bool operator==(const NetPartition&, const NetPartition&) = default;

private:
    std::vector<LayerPartition> layers_;
};

/// Every node in its own block.
NetPartition identity_partition(const Network& net);

/// Builds a NetPartition over `layer_sizes` from raw per-layer block lists.
NetPartition make_partition(const std::vector<std::size_t>& layer_sizes,
                            std::vector<std::vector<Block>> blocks);

/// Refinement preorder: every block of `p` lies inside some block of `q`.
/// Throws ContractError when the layer sizes differ.
bool is_finer(const NetPartition& p, const NetPartition& q);

/// Every block carries a single value (exact equality).
bool is_consistent(const Valuation& v, const LayerPartition& p);

/// Within every block, max - min <= eps. Throws ContractError for eps < 0.
bool is_eps_consistent(const Valuation& v, const LayerPartition& p, double eps);

}  // namespace nnbisim
