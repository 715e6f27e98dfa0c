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

#include "nnbisim/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "presum_table.hpp"
#include "quotient_builder.hpp"

namespace nnbisim {

namespace {

using detail::PreSumTable;

void require_non_negative(double x, const char* what) {
    if (!(x >= 0.0)) throw ContractError(std::string(what) + " must be non-negative");
}

void require_shape(const Network& net, const NetPartition& p) {
    if (!p.matches(net)) throw ContractError("partition does not match the network's layer sizes");
}

void require_delta_bisimulation(const Network& net, const NetPartition& p, double delta) {
    const DeltaReport r = check_delta_bisimulation(net, p, delta);
    if (!r.ok) {
        throw PreconditionError("partition is not a delta-bisimulation for delta = " +
                                    std::to_string(delta),
                                r.witness);
    }
}

}  // namespace

DeltaReport check_delta_bisimulation(const Network& net, const NetPartition& p, double delta) {
    require_non_negative(delta, "delta");
    require_shape(net, p);
    DeltaReport report;
    auto fail = [&](Violation v) {
        if (report.ok) report.witness = v;
        report.ok = false;
    };
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        const PreSumTable table(net, i, p[i - 1]);
        auto act = net.activations(i);
        auto bias = net.biases(i);
        const auto& blocks = p[i].blocks();
        // Pre-sum spreads, scanned row by row; per block keep the first
        // violation in (prev block, member) order.
        std::vector<std::optional<Violation>> presum_fail(blocks.size());
        for (std::size_t b = 0; b < table.prev_blocks(); ++b) {
            const PreSum* row = table.row(b);
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                const Block& block = blocks[j];
                if (block.size() < 2) continue;
                std::size_t plo = block.front(), phi = block.front();
                for (std::size_t t : block) {
                    if (row[t] < row[plo]) plo = t;
                    if (row[phi] < row[t]) phi = t;
                }
                const double gap = distance(row[phi], row[plo]);
                report.max_presum_gap = std::max(report.max_presum_gap, gap);
                if (gap > delta && !presum_fail[j]) {
                    presum_fail[j] = Violation{i, j, b, std::min(plo, phi), std::max(plo, phi), Condition::presum, gap};
                }
            }
        }
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            const Block& block = blocks[j];
            const std::size_t first = block.front();
            for (std::size_t t : block) {
                if (!(act[t] == act[first])) {
                    fail({i, j, std::nullopt, first, t, Condition::activation,
                          std::numeric_limits<double>::infinity()});
                    break;
                }
            }
            std::size_t lo = first, hi = first;
            for (std::size_t t : block) {
                if (bias[t] < bias[lo]) lo = t;
                if (bias[t] > bias[hi]) hi = t;
            }
            const double bias_gap = bias[hi] - bias[lo];
            report.max_bias_gap = std::max(report.max_bias_gap, bias_gap);
            if (bias_gap > delta) {
                fail({i, j, std::nullopt, std::min(lo, hi), std::max(lo, hi), Condition::bias,
                      bias_gap});
            }
            if (presum_fail[j]) fail(*presum_fail[j]);
        }
    }
    return report;
}

Network quotient_delta(const Network& net, const NetPartition& p, double delta,
                       const RepresentativePolicy& policy) {
    require_delta_bisimulation(net, p, delta);
    return detail::build_quotient(net, p, policy);
}

std::vector<Network> enumerate_delta_quotients(const Network& net, const NetPartition& p,
                                               double delta, std::size_t limit) {
    require_delta_bisimulation(net, p, delta);
    const Network base = detail::build_quotient(net, p, RepresentativePolicy::min_index());

    // One slot per quotient weight and bias that has more than one candidate value.
    struct Slot {
        std::size_t layer;
        std::size_t row;  // previous block, or npos for a bias
        std::size_t col;
        std::vector<double> values;
    };
    constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    auto distinct = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };

    std::vector<Slot> slots;
    std::size_t total = 1;
    auto add_slot = [&](Slot s) {
        if (s.values.size() < 2) return;
        if (total > limit / s.values.size()) {
            throw ContractError("delta-quotient set exceeds " + std::to_string(limit) + " networks");
        }
        total *= s.values.size();
        slots.push_back(std::move(s));
    };
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        const PreSumTable table(net, i, p[i - 1]);
        for (std::size_t j = 0; j < p[i].block_count(); ++j) {
            const Block& block = p[i].block(j);
            for (std::size_t b = 0; b < table.prev_blocks(); ++b) {
                std::vector<double> v;
                for (std::size_t t : block) v.push_back(table(b, t).value());
                add_slot({i, b, j, distinct(std::move(v))});
            }
            std::vector<double> v;
            for (std::size_t t : block) v.push_back(net.bias(i, t));
            add_slot({i, npos, j, distinct(std::move(v))});
        }
    }

    const std::size_t k = base.depth();
    std::vector<std::size_t> digits(slots.size(), 0);
    std::vector<Network> out;
    out.reserve(total);
    for (std::size_t n = 0; n < total; ++n) {
        std::vector<Matrix> w;
        std::vector<std::vector<double>> bias;
        std::vector<std::vector<Activation>> act;
        for (std::size_t i = 1; i <= k; ++i) {
            w.push_back(base.weights(i));
            bias.emplace_back(base.biases(i).begin(), base.biases(i).end());
            act.emplace_back(base.activations(i).begin(), base.activations(i).end());
        }
        for (std::size_t x = 0; x < slots.size(); ++x) {
            const Slot& s = slots[x];
            if (s.row == npos) {
                bias[s.layer - 1][s.col] = s.values[digits[x]];
            } else {
                w[s.layer - 1](s.row, s.col) = s.values[digits[x]];
            }
        }
        out.emplace_back(base.layer_sizes(), std::move(w), std::move(bias), std::move(act));
        for (std::size_t x = 0; x < digits.size(); ++x) {
            if (++digits[x] < slots[x].values.size()) break;
            digits[x] = 0;
        }
    }
    return out;
}

Valuation pick_abstraction(const Valuation& v, const LayerPartition& p) {
    if (v.layer != p.layer() || v.values.size() != p.node_count()) {
        throw ContractError("valuation does not match the partition");
    }
    Valuation out{v.layer, std::vector<double>(p.block_count())};
    for (std::size_t j = 0; j < p.block_count(); ++j) out.values[j] = v.values[p.block(j).front()];
    return out;
}

bool eps_abstraction_contains(const Valuation& v, const LayerPartition& p, double eps,
                              const Valuation& vhat) {
    require_non_negative(eps, "eps");
    if (v.layer != p.layer() || v.values.size() != p.node_count() || vhat.layer != p.layer() ||
        vhat.values.size() != p.block_count()) {
        throw ContractError("valuations do not match the partition");
    }
    for (std::size_t j = 0; j < p.block_count(); ++j) {
        for (std::size_t s : p.block(j)) {
            if (!(std::fabs(vhat.values[j] - v.values[s]) <= eps)) return false;
        }
    }
    return true;
}

bool two_eps_consistency(const Valuation& v, const LayerPartition& p, double eps) {
    require_non_negative(eps, "eps");
    return is_eps_consistent(v, p, 2.0 * eps);
}

double one_step_error(const Network& net, const NetPartition& p, std::size_t layer, double eps,
                      double delta, double v_inf) {
    require_non_negative(eps, "eps");
    require_non_negative(delta, "delta");
    require_non_negative(v_inf, "v_inf");
    require_shape(net, p);
    const double lip = layer_lipschitz(net, layer);
    const double a = lip * static_cast<double>(net.layer_size(layer - 1)) * weight_inf_norm(net, layer);
    const double b = lip * (static_cast<double>(p[layer - 1].block_count()) * v_inf + 1.0) * delta;
    return a * eps + b;
}

double closed_form_bound(double a, double b, std::size_t k) {
    const double r = 2.0 * a;
    if (r == 1.0) return static_cast<double>(k) * b;
    return (std::pow(r, static_cast<double>(k)) - 1.0) * b / (r - 1.0);
}

ErrorBound global_error_bound(const Network& net, const NetPartition& p, double delta, double eps0,
                              double v0_inf, BoundMode mode) {
    require_non_negative(delta, "delta");
    require_non_negative(eps0, "eps0");
    require_non_negative(v0_inf, "v0_inf");
    require_delta_bisimulation(net, p, delta);

    const std::size_t k = net.depth();
    double max_lip = 0.0, max_w = 0.0, max_s = 0.0, max_p = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        max_lip = std::max(max_lip, layer_lipschitz(net, i));
        max_w = std::max(max_w, weight_inf_norm(net, i));
    }
    for (std::size_t i = 0; i <= k; ++i) {
        max_s = std::max(max_s, static_cast<double>(net.layer_size(i)));
        max_p = std::max(max_p, static_cast<double>(p[i].block_count()));
    }

    ErrorBound eb;
    eb.mode = mode;
    eb.lipschitz = network_lipschitz_bound(net);
    double offset = 0.0;
    for (const auto& v : eval_trace(net, Valuation{0, std::vector<double>(net.layer_size(0), 0.0)})) {
        for (double x : v.values) offset = std::max(offset, std::fabs(x));
    }
    eb.state_bound = offset + std::max(1.0, eb.lipschitz) * v0_inf;
    eb.a = max_lip * max_s * max_w;
    eb.b = max_lip * (max_p * eb.state_bound + 1.0) * delta;

    eb.per_layer.push_back({0, 0.0, 0.0, v0_inf, eps0, eps0});

    // Interval enclosure of each layer's valuations over the input box.
    std::vector<double> lo(net.layer_size(0), -v0_inf), hi(net.layer_size(0), v0_inf);

    for (std::size_t i = 1; i <= k; ++i) {
        const LayerErrorTerm& prev = eb.per_layer.back();
        const double lip = layer_lipschitz(net, i);
        const double blocks_prev = static_cast<double>(p[i - 1].block_count());
        LayerErrorTerm term;
        term.layer = i;
        term.a = lip * static_cast<double>(net.layer_size(i - 1)) * weight_inf_norm(net, i);
        if (mode == BoundMode::interval) {
            double norm = 0.0;
            for (std::size_t s = 0; s < lo.size(); ++s) {
                norm = std::max({norm, std::fabs(lo[s]), std::fabs(hi[s])});
            }
            // The abstract valuation may sit eps'_{i-1} away from the concrete one.
            term.state_bound = norm + prev.eps_prime;
            term.b = lip * (blocks_prev * term.state_bound + 1.0) * delta;
            term.eps_prime = term.a * prev.eps + term.b;
        } else {
            term.state_bound = eb.state_bound;
            term.b = lip * (blocks_prev * eb.state_bound + 1.0) * delta;
            term.eps_prime = eb.a * prev.eps + eb.b;
        }
        term.eps = 2.0 * term.eps_prime;
        eb.per_layer.push_back(term);

        if (mode == BoundMode::interval) {
            const Matrix& w = net.weights(i);
            std::vector<double> nlo(w.cols()), nhi(w.cols());
            for (std::size_t t = 0; t < w.cols(); ++t) {
                double l = net.bias(i, t), h = l;
                for (std::size_t s = 0; s < w.rows(); ++s) {
                    const double x = w(s, t);
                    l += x >= 0.0 ? x * lo[s] : x * hi[s];
                    h += x >= 0.0 ? x * hi[s] : x * lo[s];
                }
                const Activation& f = net.activation(i, t);
                nlo[t] = f(l);
                nhi[t] = f(h);
            }
            lo = std::move(nlo);
            hi = std::move(nhi);
        }
    }
    if (mode == BoundMode::interval) {
        eb.a = eb.b = 0.0;
        for (const auto& t : eb.per_layer) {
            eb.a = std::max(eb.a, t.a);
            eb.b = std::max(eb.b, t.b);
        }
    }
    eb.eps_final = eb.per_layer.back().eps_prime;
    return eb;
}

NetPartition greedy_delta_partition(const Network& net, double delta, bool preserve_io) {
    require_non_negative(delta, "delta");
    const std::size_t k = net.depth();
    std::vector<LayerPartition> layers;
    layers.push_back(preserve_io ? LayerPartition::singletons(0, net.layer_size(0))
                                 : LayerPartition::single_block(0, net.layer_size(0)));

    struct Group {
        Block members;
        Activation act;
        double bias_lo, bias_hi;
        std::vector<PreSum> lo, hi;
    };

    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t n = net.layer_size(i);
        if (preserve_io && i == k) {
            layers.push_back(LayerPartition::singletons(i, n));
            continue;
        }
        const PreSumTable table(net, i, layers[i - 1]);
        const std::size_t nb = table.prev_blocks();
        std::vector<Group> groups;
        for (std::size_t t = 0; t < n; ++t) {
            const Activation& act = net.activation(i, t);
            const double bias = net.bias(i, t);
            bool placed = false;
            for (auto& g : groups) {
                if (!(g.act == act)) continue;
                if (std::max(g.bias_hi, bias) - std::min(g.bias_lo, bias) > delta) continue;
                bool fits = true;
                for (std::size_t b = 0; b < nb && fits; ++b) {
                    const PreSum& x = table(b, t);
                    const PreSum& l = x < g.lo[b] ? x : g.lo[b];
                    const PreSum& h = g.hi[b] < x ? x : g.hi[b];
                    fits = distance(h, l) <= delta;
                }
                if (!fits) continue;
                g.members.push_back(t);
                g.bias_lo = std::min(g.bias_lo, bias);
                g.bias_hi = std::max(g.bias_hi, bias);
                for (std::size_t b = 0; b < nb; ++b) {
                    const PreSum& x = table(b, t);
                    if (x < g.lo[b]) g.lo[b] = x;
                    if (g.hi[b] < x) g.hi[b] = x;
                }
                placed = true;
                break;
            }
            if (!placed) {
                Group g{{t}, act, bias, bias, {}, {}};
                for (std::size_t b = 0; b < nb; ++b) {
                    g.lo.push_back(table(b, t));
                    g.hi.push_back(table(b, t));
                }
                groups.push_back(std::move(g));
            }
        }
        std::vector<Block> blocks;
        for (auto& g : groups) blocks.push_back(std::move(g.members));
        layers.emplace_back(i, n, std::move(blocks));
    }
    return NetPartition(std::move(layers));
}

}  // namespace nnbisim
