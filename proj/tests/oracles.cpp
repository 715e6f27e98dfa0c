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

#include "oracles.hpp"

#include <algorithm>
#include <map>

namespace oracle {

using namespace nnbisim;

std::string fixture(const std::string& name) { return std::string(NNBISIM_FIXTURE_DIR) + "/" + name; }

std::vector<double> naive_eval(const Network& net, const std::vector<double>& input) {
    std::vector<double> v = input;
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        std::vector<double> next(net.layer_size(i));
        for (std::size_t t = 0; t < next.size(); ++t) {
            double z = net.bias(i, t);
            for (std::size_t s = 0; s < v.size(); ++s) z += net.weight(i, s, t) * v[s];
            next[t] = net.activation(i, t)(z);
        }
        v = std::move(next);
    }
    return v;
}

mpq_class exact_presum(const Network& net, std::size_t layer, const Block& block, std::size_t t) {
    mpq_class sum = 0;
    for (std::size_t s : block) sum += mpq_class(net.weight(layer, s, t));
    return sum;
}

namespace {

// Exact comparison key of a node: activation, bias and pre-sums.
struct Signature {
    Activation act;
    mpq_class bias;
    std::vector<mpq_class> presums;

    bool operator==(const Signature& o) const {
        return act == o.act && bias == o.bias && presums == o.presums;
    }
};

std::vector<Signature> signatures(const Network& net, std::size_t layer, const std::vector<Block>& prev) {
    std::vector<Signature> out;
    for (std::size_t t = 0; t < net.layer_size(layer); ++t) {
        Signature sig{net.activation(layer, t), mpq_class(net.bias(layer, t)), {}};
        for (const Block& b : prev) sig.presums.push_back(exact_presum(net, layer, b, t));
        out.push_back(std::move(sig));
    }
    return out;
}

bool layer_ok(const std::vector<Signature>& sig, const std::vector<Block>& blocks) {
    for (const Block& b : blocks) {
        for (std::size_t t : b) {
            if (!(sig[t] == sig[b.front()])) return false;
        }
    }
    return true;
}

void partitions_rec(std::size_t n, std::size_t x, std::vector<Block>& cur,
                    std::vector<std::vector<Block>>& out) {
    if (x == n) {
        out.push_back(cur);
        return;
    }
    for (std::size_t j = 0; j < cur.size(); ++j) {
        cur[j].push_back(x);
        partitions_rec(n, x + 1, cur, out);
        cur[j].pop_back();
    }
    cur.push_back({x});
    partitions_rec(n, x + 1, cur, out);
    cur.pop_back();
}

}  // namespace

bool is_bisimulation(const Network& net, const NetPartition& p) {
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        if (!layer_ok(signatures(net, i, p[i - 1].blocks()), p[i].blocks())) return false;
    }
    return true;
}

bool is_delta_bisimulation(const Network& net, const NetPartition& p, double delta) {
    const mpq_class d(delta);
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        for (const Block& block : p[i].blocks()) {
            for (std::size_t t : block) {
                for (std::size_t u : block) {
                    if (!(net.activation(i, t) == net.activation(i, u))) return false;
                    if (mpq_class(net.bias(i, t)) - mpq_class(net.bias(i, u)) > d) return false;
                    for (const Block& prev : p[i - 1].blocks()) {
                        if (exact_presum(net, i, prev, t) - exact_presum(net, i, prev, u) > d) return false;
                    }
                }
            }
        }
    }
    return true;
}

std::vector<std::vector<Block>> set_partitions(std::size_t n) {
    std::vector<std::vector<Block>> out;
    std::vector<Block> cur;
    partitions_rec(n, 0, cur, out);
    return out;
}

std::size_t for_each_bisimulation(const Network& net, bool pin_io,
                                  const std::function<void(const NetPartition&)>& visit) {
    const std::size_t k = net.depth();
    std::map<std::size_t, std::vector<std::vector<Block>>> cache;
    auto candidates = [&](std::size_t i) -> std::vector<std::vector<Block>> {
        const std::size_t n = net.layer_size(i);
        if (pin_io && (i == 0 || i == k)) {
            return {LayerPartition::singletons(i, n).blocks()};
        }
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, set_partitions(n)).first;
        return it->second;
    };

    std::size_t count = 0;
    std::vector<std::vector<Block>> chosen(k + 1);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        const std::vector<Signature> sig =
            i == 0 ? std::vector<Signature>{} : signatures(net, i, chosen[i - 1]);
        for (auto& blocks : candidates(i)) {
            if (i > 0 && !layer_ok(sig, blocks)) continue;
            chosen[i] = blocks;
            if (i == k) {
                ++count;
                visit(make_partition(net.layer_sizes(), chosen));
            } else {
                rec(i + 1);
            }
        }
    };
    rec(0);
    return count;
}

NetPartition random_partition(const std::vector<std::size_t>& sizes, Rng& rng, std::size_t width) {
    std::vector<std::vector<Block>> layers;
    for (std::size_t n : sizes) {
        std::vector<Block> by_label(width);
        for (std::size_t t = 0; t < n; ++t) by_label[rng.below(width)].push_back(t);
        std::vector<Block> blocks;
        for (auto& b : by_label) {
            if (!b.empty()) blocks.push_back(std::move(b));
        }
        layers.push_back(std::move(blocks));
    }
    return make_partition(sizes, std::move(layers));
}

double unrolled_bound(double a, double b, double eps0, std::size_t k) {
    double eps = eps0, eps_prime = eps0;
    for (std::size_t i = 1; i <= k; ++i) {
        eps_prime = a * eps + b;
        eps = 2.0 * eps_prime;
    }
    return eps_prime;
}

}  // namespace oracle
