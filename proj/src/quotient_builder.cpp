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

#include "quotient_builder.hpp"

#include <algorithm>
#include <string>

#include "nnbisim/error.hpp"
#include "presum_table.hpp"

namespace nnbisim {

RepresentativePolicy RepresentativePolicy::explicit_choice(
    std::vector<std::vector<std::size_t>> members) {
    RepresentativePolicy p(Kind::explicit_choice);
    p.members_ = std::move(members);
    return p;
}

RepresentativePolicy RepresentativePolicy::from_name(std::string_view name) {
    for (auto& p : named()) {
        if (p.name() == name) return p;
    }
    throw ValidationError("unknown representative policy '" + std::string(name) + "'");
}

std::vector<RepresentativePolicy> RepresentativePolicy::named() {
    return {min_index(), max_index(), per_value_min(), per_value_max()};
}

std::string_view RepresentativePolicy::name() const noexcept {
    switch (kind_) {
    case Kind::min_index: return "min_index";
    case Kind::max_index: return "max_index";
    case Kind::per_value_min: return "per_value_min";
    case Kind::per_value_max: return "per_value_max";
    case Kind::explicit_choice: return "explicit";
    }
    return "min_index";
}

namespace detail {

namespace {

// -0.0 and +0.0 pass every equality test, so merged members may disagree on
// the sign of a zero; emit +0.0 to keep the quotient independent of the choice.
double unsigned_zero(double x) noexcept { return x + 0.0; }

std::size_t pick_member(const RepresentativePolicy& policy, std::size_t layer, std::size_t j,
                        const Block& block) {
    switch (policy.kind()) {
    case RepresentativePolicy::Kind::max_index: return block.back();
    case RepresentativePolicy::Kind::explicit_choice: {
        const auto& m = policy.members();
        if (layer >= m.size() || j >= m[layer].size()) {
            throw ValidationError("explicit policy has no member for block " + std::to_string(j) +
                                  " of layer " + std::to_string(layer));
        }
        const std::size_t s = m[layer][j];
        if (!std::binary_search(block.begin(), block.end(), s)) {
            throw ValidationError("explicit policy picks node " + std::to_string(s) +
                                  ", which is not in block " + std::to_string(j) + " of layer " +
                                  std::to_string(layer));
        }
        return s;
    }
    default: return block.front();
    }
}

}  // namespace

Network build_quotient(const Network& net, const NetPartition& p,
                       const RepresentativePolicy& policy) {
    using Kind = RepresentativePolicy::Kind;
    const std::size_t k = net.depth();
    std::vector<std::size_t> sizes(k + 1);
    for (std::size_t i = 0; i <= k; ++i) sizes[i] = p[i].block_count();

    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::vector<Activation>> activations;
    const bool per_value =
        policy.kind() == Kind::per_value_min || policy.kind() == Kind::per_value_max;
    const bool want_max = policy.kind() == Kind::per_value_max;

    for (std::size_t i = 1; i <= k; ++i) {
        const PreSumTable table(net, i, p[i - 1]);
        Matrix w(sizes[i - 1], sizes[i]);
        std::vector<double> b(sizes[i]);
        std::vector<Activation> a(sizes[i]);
        const auto& blocks = p[i].blocks();
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            const Block& block = blocks[j];
            a[j] = net.activation(i, block.front());
            if (per_value) {
                for (std::size_t pb = 0; pb < table.prev_blocks(); ++pb) {
                    PreSum best = table(pb, block.front());
                    for (std::size_t t : block) {
                        const PreSum& x = table(pb, t);
                        if (want_max ? best < x : x < best) best = x;
                    }
                    w(pb, j) = unsigned_zero(best.value());
                }
                double bias = net.bias(i, block.front());
                for (std::size_t t : block) {
                    bias = want_max ? std::max(bias, net.bias(i, t)) : std::min(bias, net.bias(i, t));
                }
                b[j] = unsigned_zero(bias);
            } else {
                const std::size_t rep = pick_member(policy, i, j, block);
                for (std::size_t pb = 0; pb < table.prev_blocks(); ++pb) {
                    w(pb, j) = unsigned_zero(table(pb, rep).value());
                }
                b[j] = unsigned_zero(net.bias(i, rep));
                a[j] = net.activation(i, rep);
            }
        }
        weights.push_back(std::move(w));
        biases.push_back(std::move(b));
        activations.push_back(std::move(a));
    }
    return Network(std::move(sizes), std::move(weights), std::move(biases),
                   std::move(activations));
}

}  // namespace detail
}  // namespace nnbisim
