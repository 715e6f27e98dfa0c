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

#include "nnbisim/minimize.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "nnbisim/bisim.hpp"
#include "nnbisim/error.hpp"
#include "presum_table.hpp"

namespace nnbisim {

namespace {

using detail::PreSumTable;

// Groups `members` by exact equality of `key(member)`, canonical order out.
template <typename Key>
std::vector<Block> group_by(const Block& members, Key key) {
    std::vector<std::pair<PreSum, std::size_t>> keyed;
    keyed.reserve(members.size());
    for (std::size_t t : members) keyed.emplace_back(key(t), t);
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Block> out;
    for (std::size_t x = 0; x < keyed.size(); ++x) {
        if (x == 0 || !(keyed[x].first == keyed[x - 1].first)) out.emplace_back();
        out.back().push_back(keyed[x].second);
    }
    for (auto& b : out) std::sort(b.begin(), b.end());
    std::sort(out.begin(), out.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
    return out;
}

// First (block, previous block) pair of layer `lp` that the table shows inconsistent.
std::optional<std::pair<std::size_t, std::size_t>> first_inconsistent(const PreSumTable& table,
                                                                       const LayerPartition& lp) {
    for (std::size_t j = 0; j < lp.block_count(); ++j) {
        const Block& block = lp.block(j);
        if (block.size() < 2) continue;
        for (std::size_t b = 0; b < table.prev_blocks(); ++b) {
            const PreSum& ref = table(b, block.front());
            for (std::size_t t : block) {
                if (!(table(b, t) == ref)) return std::pair{j, b};
            }
        }
    }
    return std::nullopt;
}

Block all_nodes(std::size_t n) {
    Block b(n);
    std::iota(b.begin(), b.end(), std::size_t{0});
    return b;
}

class Refiner {
public:
    Refiner(const Network& net, const MinimizeOptions& options) : net_(net), options_(options) {}

    RefinementTrace run() {
        initialize();
        if (options_.schedule == SplitSchedule::lowest_first) {
            refine_lowest_first();
        } else {
            refine_highest_first();
        }
        trace_.final_partition = NetPartition(layers_);
        return std::move(trace_);
    }

private:
    void initialize() {
        const std::size_t k = net_.depth();
        for (std::size_t i = 0; i <= k; ++i) {
            layers_.push_back(LayerPartition::single_block(i, net_.layer_size(i)));
        }
        if (options_.preserve_io) pin_singletons(0);
        for (std::size_t i = 1; i <= k; ++i) {
            if (options_.preserve_io && i == k) {
                pin_singletons(k);
                continue;
            }
            LayerPartition split = split_act_bias(net_, i);
            if (split.block_count() > 1) {
                trace_.steps.push_back({RefinementStep::Kind::act_bias_split, i,
                                        all_nodes(net_.layer_size(i)), split.blocks(), std::nullopt});
            }
            layers_[i] = std::move(split);
        }
    }

    void pin_singletons(std::size_t i) {
        const std::size_t n = net_.layer_size(i);
        layers_[i] = LayerPartition::singletons(i, n);
        if (n > 1) {
            trace_.steps.push_back({RefinementStep::Kind::io_split, i, all_nodes(n),
                                    layers_[i].blocks(), std::nullopt});
        }
    }

    void split(std::size_t i, const PreSumTable& table, std::size_t j, std::size_t b) {
        const Block target = layers_[i].block(j);
        std::vector<Block> pieces =
            group_by(target, [&](std::size_t t) { return table(b, t); });
        trace_.steps.push_back({RefinementStep::Kind::presum_split, i, target, pieces,
                                layers_[i - 1].block(b)});
        std::vector<Block> blocks = layers_[i].blocks();
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(j));
        for (auto& piece : pieces) blocks.push_back(std::move(piece));
        layers_[i] = LayerPartition(i, net_.layer_size(i), std::move(blocks));
    }

    // Splits never touch layers below the split layer, so once layer i has no
    // inconsistent pair it stays clean and its table never goes stale.
    void refine_lowest_first() {
        for (std::size_t i = 1; i <= net_.depth(); ++i) {
            const PreSumTable table(net_, i, layers_[i - 1]);
            while (auto hit = first_inconsistent(table, layers_[i])) {
                split(i, table, hit->first, hit->second);
            }
        }
    }

    void refine_highest_first() {
        for (;;) {
            bool found = false;
            for (std::size_t i = net_.depth(); i >= 1 && !found; --i) {
                const PreSumTable table(net_, i, layers_[i - 1]);
                if (auto hit = first_inconsistent(table, layers_[i])) {
                    split(i, table, hit->first, hit->second);
                    found = true;
                }
            }
            if (!found) return;
        }
    }

    const Network& net_;
    MinimizeOptions options_;
    std::vector<LayerPartition> layers_;
    RefinementTrace trace_;
};

}  // namespace

std::string_view step_kind_name(RefinementStep::Kind kind) {
    switch (kind) {
    case RefinementStep::Kind::io_split: return "io_split";
    case RefinementStep::Kind::act_bias_split: return "act_bias_split";
    case RefinementStep::Kind::presum_split: return "presum_split";
    }
    return "presum_split";
}

std::size_t RefinementTrace::presum_splits() const noexcept {
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const auto& s) {
        return s.kind == RefinementStep::Kind::presum_split;
    }));
}

NetPartition replay(const RefinementTrace& trace, const std::vector<std::size_t>& layer_sizes) {
    std::vector<std::vector<Block>> blocks;
    for (std::size_t n : layer_sizes) blocks.push_back({all_nodes(n)});
    for (const auto& step : trace.steps) {
        if (step.layer >= blocks.size()) throw ValidationError("trace step names a missing layer");
        auto& layer = blocks[step.layer];
        auto it = std::find(layer.begin(), layer.end(), step.split_block);
        if (it == layer.end()) {
            throw ValidationError("trace step splits a block absent from layer " +
                                  std::to_string(step.layer));
        }
        layer.erase(it);
        layer.insert(layer.end(), step.result.begin(), step.result.end());
        std::sort(layer.begin(), layer.end(),
                  [](const Block& a, const Block& b) { return a.front() < b.front(); });
    }
    return make_partition(layer_sizes, std::move(blocks));
}

LayerPartition split_act_bias(const Network& net, std::size_t layer) {
    const std::size_t n = net.layer_size(layer);
    auto act = net.activations(layer);
    auto bias = net.biases(layer);
    std::vector<std::size_t> order = all_nodes(n);
    auto less = [&](std::size_t a, std::size_t b) {
        if (act[a] < act[b]) return true;
        if (act[b] < act[a]) return false;
        return bias[a] < bias[b];
    };
    std::stable_sort(order.begin(), order.end(), less);
    std::vector<Block> groups;
    for (std::size_t x = 0; x < order.size(); ++x) {
        if (x == 0 || less(order[x - 1], order[x])) groups.emplace_back();
        groups.back().push_back(order[x]);
    }
    return LayerPartition(layer, n, std::move(groups));
}

std::optional<InconsistentPair> find_inconsistent_pair(const Network& net, const NetPartition& p) {
    if (!p.matches(net)) throw ContractError("partition does not match the network's layer sizes");
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        const PreSumTable table(net, i, p[i - 1]);
        if (auto hit = first_inconsistent(table, p[i])) {
            return InconsistentPair{i, p[i].block(hit->first), p[i - 1].block(hit->second)};
        }
    }
    return std::nullopt;
}

std::vector<Block> split_pre(const Network& net, std::size_t layer, const Block& target_block,
                             const Block& prev_block) {
    if (target_block.empty()) return {};
    Block prev = prev_block;
    std::sort(prev.begin(), prev.end());
    return group_by(target_block,
                    [&](std::size_t t) { return pre_sum_exact(net, layer, prev, t); });
}

MinimizeResult minimize(const Network& net, const MinimizeOptions& options) {
    RefinementTrace trace = Refiner(net, options).run();
    NetPartition partition = trace.final_partition;
    Network reduced = quotient(net, partition);
    return {std::move(partition), std::move(reduced), std::move(trace)};
}

bool maximality_check(const Network& net, const NetPartition& p, bool preserve_io) {
    if (!check_bisimulation(net, p).ok) {
        throw ContractError("maximality_check requires an NN-bisimulation");
    }
    const std::size_t k = net.depth();
    for (std::size_t i = 0; i <= k; ++i) {
        if (preserve_io && (i == 0 || i == k)) continue;
        const auto& blocks = p[i].blocks();
        for (std::size_t a = 0; a < blocks.size(); ++a) {
            for (std::size_t b = a + 1; b < blocks.size(); ++b) {
                std::vector<std::vector<Block>> merged;
                for (const auto& lp : p.layers()) merged.push_back(lp.blocks());
                merged[i][a].insert(merged[i][a].end(), blocks[b].begin(), blocks[b].end());
                merged[i].erase(merged[i].begin() + static_cast<std::ptrdiff_t>(b));
                if (check_bisimulation(net, make_partition(p.layer_sizes(), std::move(merged))).ok) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace nnbisim
