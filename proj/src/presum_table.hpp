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
#include "nnbisim/partition.hpp"

namespace nnbisim::detail {

// Pre-sums of every node of `layer` with respect to every block of the
// previous layer's partition, built in a single pass over the layer's edges.
// Entry (b, t) is bit-identical to pre_sum_exact(net, layer, prev.block(b), t):
// both accumulate the block's members in ascending order.
// Storage comes from a small per-thread pool, so repeated checks of a large
// network do not fault in fresh pages on every call.
class PreSumTable {
public:
    PreSumTable(const Network& net, std::size_t layer, const LayerPartition& prev);
    ~PreSumTable();
    PreSumTable(const PreSumTable&) = delete;
    PreSumTable& operator=(const PreSumTable&) = delete;

    std::size_t prev_blocks() const noexcept { return prev_blocks_; }
    std::size_t targets() const noexcept { return targets_; }

    const PreSum& operator()(std::size_t prev_block, std::size_t target) const noexcept {
        return data_[prev_block * targets_ + target];
    }
    /// Entries (prev_block, 0 .. targets-1), contiguous.
    const PreSum* row(std::size_t prev_block) const noexcept { return data_.data() + prev_block * targets_; }

private:
    std::size_t prev_blocks_ = 0;
    std::size_t targets_ = 0;
    std::vector<PreSum> data_;
};

}  // namespace nnbisim::detail
