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

#include "nnbisim/partition.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "nnbisim/error.hpp"

namespace nnbisim {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

void check_layer(const Valuation& v, const LayerPartition& p) {
    if (v.layer != p.layer()) {
        throw ContractError("valuation of layer " + std::to_string(v.layer) +
                            " checked against a partition of layer " + std::to_string(p.layer()));
    }
    if (v.values.size() != p.node_count()) {
        throw ContractError("valuation has " + std::to_string(v.values.size()) +
                            " values, partition covers " + std::to_string(p.node_count()) +
                            " nodes");
    }
}

}  // namespace

LayerPartition::LayerPartition(std::size_t layer, std::size_t node_count, std::vector<Block> blocks)
    : layer_(layer), blocks_(std::move(blocks)), block_of_(node_count, kUnassigned) {
    const std::string where = "layer " + std::to_string(layer) + " partition: ";
    for (auto& b : blocks_) {
        if (b.empty()) throw ValidationError(where + "empty block");
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const Block& a, const Block& b) { return a.front() < b.front(); });
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
        for (std::size_t s : blocks_[j]) {
            if (s >= node_count) {
                throw ValidationError(where + "node " + std::to_string(s) + " out of range (" +
                                      std::to_string(node_count) + " nodes)");
            }
            if (block_of_[s] != kUnassigned) {
                throw ValidationError(where + "node " + std::to_string(s) +
                                      " appears in more than one block");
            }
            block_of_[s] = j;
        }
    }
    for (std::size_t s = 0; s < node_count; ++s) {
        if (block_of_[s] == kUnassigned) {
            throw ValidationError(where + "node " + std::to_string(s) + " is not covered");
        }
    }
}

LayerPartition LayerPartition::singletons(std::size_t layer, std::size_t node_count) {
    std::vector<Block> blocks(node_count);
    for (std::size_t s = 0; s < node_count; ++s) blocks[s] = {s};
    return LayerPartition(layer, node_count, std::move(blocks));
}

LayerPartition LayerPartition::single_block(std::size_t layer, std::size_t node_count) {
    Block all(node_count);
    for (std::size_t s = 0; s < node_count; ++s) all[s] = s;
    return LayerPartition(layer, node_count, {std::move(all)});
}

NetPartition::NetPartition(std::vector<LayerPartition> layers) : layers_(std::move(layers)) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].layer() != i) {
            throw ValidationError("partition entry " + std::to_string(i) + " describes layer " +
                                  std::to_string(layers_[i].layer()));
        }
    }
}

std::vector<std::size_t> NetPartition::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(layers_.size());
    for (const auto& l : layers_) sizes.push_back(l.node_count());
    return sizes;
}

std::size_t NetPartition::block_count() const noexcept {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.block_count();
    return n;
}

bool NetPartition::matches(const Network& net) const noexcept {
    return layer_sizes() == net.layer_sizes();
}

NetPartition identity_partition(const Network& net) {
    std::vector<LayerPartition> layers;
    for (std::size_t i = 0; i <= net.depth(); ++i) {
        layers.push_back(LayerPartition::singletons(i, net.layer_size(i)));
    }
    return NetPartition(std::move(layers));
}

NetPartition make_partition(const std::vector<std::size_t>& layer_sizes,
                            std::vector<std::vector<Block>> blocks) {
    if (blocks.size() != layer_sizes.size()) {
        throw ValidationError("partition has " + std::to_string(blocks.size()) +
                              " layers, network has " + std::to_string(layer_sizes.size()));
    }
    std::vector<LayerPartition> layers;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        layers.emplace_back(i, layer_sizes[i], std::move(blocks[i]));
    }
    return NetPartition(std::move(layers));
}

bool is_finer(const NetPartition& p, const NetPartition& q) {
    if (p.layer_sizes() != q.layer_sizes()) {
        throw ContractError("is_finer: partitions cover different layer sizes");
    }
    for (std::size_t i = 0; i < p.layer_count(); ++i) {
        for (const Block& b : p[i].blocks()) {
            const std::size_t target = q[i].block_of(b.front());
            for (std::size_t s : b) {
                if (q[i].block_of(s) != target) return false;
            }
        }
    }
    return true;
}

bool is_consistent(const Valuation& v, const LayerPartition& p) {
    check_layer(v, p);
    for (const Block& b : p.blocks()) {
        const double x = v.values[b.front()];
        for (std::size_t s : b) {
            if (v.values[s] != x) return false;
        }
    }
    return true;
}

bool is_eps_consistent(const Valuation& v, const LayerPartition& p, double eps) {
    if (!(eps >= 0.0)) throw ContractError("is_eps_consistent: eps must be non-negative");
    check_layer(v, p);
    for (const Block& b : p.blocks()) {
        double lo = v.values[b.front()];
        double hi = lo;
        for (std::size_t s : b) {
            lo = std::min(lo, v.values[s]);
            hi = std::max(hi, v.values[s]);
        }
        if (hi - lo > eps) return false;
    }
    return true;
}

}  // namespace nnbisim
