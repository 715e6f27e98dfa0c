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

#include "nnbisim/bisim.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nnbisim/policy.hpp"
#include "presum_table.hpp"
#include "quotient_builder.hpp"

namespace nnbisim {

namespace {

void require_shape(const Network& net, const NetPartition& p) {
    if (!p.matches(net)) throw ContractError("partition does not match the network's layer sizes");
}

}  // namespace

BisimReport check_bisimulation(const Network& net, const NetPartition& p) {
    require_shape(net, p);
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        const auto& blocks = p[i].blocks();
        auto act = net.activations(i);
        auto bias = net.biases(i);
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            const Block& block = blocks[j];
            const std::size_t first = block.front();
            for (std::size_t t : block) {
                if (!(act[t] == act[first])) {
                    return {false, Violation{i, j, std::nullopt, first, t, Condition::activation,
                                             std::numeric_limits<double>::infinity()}};
                }
            }
            for (std::size_t t : block) {
                if (bias[t] != bias[first]) {
                    return {false, Violation{i, j, std::nullopt, first, t, Condition::bias,
                                             std::fabs(bias[t] - bias[first])}};
                }
            }
        }
        // Activation and bias conditions hold for the whole layer; only then pay
        // for the pre-sum pass.
        const detail::PreSumTable table(net, i, p[i - 1]);
        // Row-major scan; per block keep the first mismatch in (prev block, member) order.
        std::vector<std::optional<Violation>> found(blocks.size());
        for (std::size_t b = 0; b < table.prev_blocks(); ++b) {
            const PreSum* row = table.row(b);
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                const Block& block = blocks[j];
                if (block.size() < 2 || found[j]) continue;
                const PreSum& ref = row[block.front()];
                for (std::size_t t : block) {
                    if (!(row[t] == ref)) {
                        found[j] = Violation{i, j, b, block.front(), t, Condition::presum, distance(row[t], ref)};
                        break;
                    }
                }
            }
        }
        for (const auto& v : found) {
            if (v) return {false, *v};
        }
    }
    return {};
}

Network quotient(const Network& net, const NetPartition& p) {
    const BisimReport report = check_bisimulation(net, p);
    if (!report.ok) {
        throw PreconditionError("partition is not an NN-bisimulation", report.witness);
    }
    return detail::build_quotient(net, p, RepresentativePolicy::min_index());
}

Valuation abstract_valuation(const Valuation& v, const LayerPartition& p) {
    if (!is_consistent(v, p)) {
        throw PreconditionError("valuation of layer " + std::to_string(v.layer) +
                                " is not consistent with the partition");
    }
    Valuation out{v.layer, std::vector<double>(p.block_count())};
    for (std::size_t j = 0; j < p.block_count(); ++j) out.values[j] = v.values[p.block(j).front()];
    return out;
}

Valuation concretize_valuation(const Valuation& abstract, const LayerPartition& p) {
    if (abstract.layer != p.layer() || abstract.values.size() != p.block_count()) {
        throw ContractError("abstract valuation does not match the partition");
    }
    Valuation out{abstract.layer, std::vector<double>(p.node_count())};
    for (std::size_t s = 0; s < p.node_count(); ++s) out.values[s] = abstract.values[p.block_of(s)];
    return out;
}

}  // namespace nnbisim
