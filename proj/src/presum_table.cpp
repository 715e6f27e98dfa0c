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

#include "presum_table.hpp"

#include <string>
#include <utility>
#include <vector>

#include "nnbisim/error.hpp"

namespace nnbisim::detail {

namespace {

constexpr std::size_t kPoolSize = 4;

std::vector<std::vector<PreSum>>& pool() {
    thread_local std::vector<std::vector<PreSum>> buffers;
    return buffers;
}

}  // namespace

PreSumTable::PreSumTable(const Network& net, std::size_t layer, const LayerPartition& prev)
    : prev_blocks_(prev.block_count()), targets_(net.layer_size(layer)) {
    const Matrix& w = net.weights(layer);
    if (prev.node_count() != w.rows()) {
        throw ContractError("layer " + std::to_string(layer - 1) + " partition covers " +
                            std::to_string(prev.node_count()) + " nodes, network has " +
                            std::to_string(w.rows()));
    }
    if (!pool().empty()) {
        data_ = std::move(pool().back());
        pool().pop_back();
    }
    data_.assign(prev_blocks_ * targets_, PreSum{});
    const auto& block_of = prev.block_index();
    for (std::size_t s = 0; s < w.rows(); ++s) {
        PreSum* acc = data_.data() + block_of[s] * targets_;
        auto row = w.row(s);
        for (std::size_t t = 0; t < targets_; ++t) acc[t].add(row[t]);
    }
    for (auto& p : data_) p = p.normalized();
}

PreSumTable::~PreSumTable() {
    if (pool().size() < kPoolSize) pool().push_back(std::move(data_));
}

}  // namespace nnbisim::detail
