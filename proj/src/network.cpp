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

#include "nnbisim/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nnbisim/error.hpp"

namespace nnbisim {

namespace {

// Error-free transformation: s + e == a + b exactly.
inline void two_sum(double a, double b, double& s, double& e) noexcept {
    s = a + b;
    const double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}

std::string layer_msg(std::size_t layer) { return "layer " + std::to_string(layer) + ": "; }

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw ValidationError("matrix data has " + std::to_string(data_.size()) +
                              " entries, expected " + std::to_string(rows * cols));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ValidationError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Network::Network(std::vector<std::size_t> layer_sizes, std::vector<Matrix> weights,
                 std::vector<std::vector<double>> biases,
                 std::vector<std::vector<Activation>> activations)
    : sizes_(std::move(layer_sizes)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      activations_(std::move(activations)) {
    if (sizes_.size() < 2) {
        throw ValidationError("a network needs an input layer and at least one weighted layer");
    }
    const std::size_t k = sizes_.size() - 1;
    for (std::size_t i = 0; i <= k; ++i) {
        if (sizes_[i] == 0) throw ValidationError(layer_msg(i) + "layer size must be positive");
    }
    if (weights_.size() != k || biases_.size() != k || activations_.size() != k) {
        throw ValidationError("expected " + std::to_string(k) +
                              " weight matrices, bias vectors and activation vectors");
    }
    for (std::size_t i = 1; i <= k; ++i) {
        const Matrix& w = weights_[i - 1];
        if (w.rows() != sizes_[i - 1] || w.cols() != sizes_[i]) {
            throw ValidationError(layer_msg(i) + "weights are " + std::to_string(w.rows()) + "x" +
                                  std::to_string(w.cols()) + ", expected " +
                                  std::to_string(sizes_[i - 1]) + "x" + std::to_string(sizes_[i]));
        }
        for (double x : w.data()) {
            if (!std::isfinite(x)) throw ValidationError(layer_msg(i) + "non-finite weight");
        }
        if (biases_[i - 1].size() != sizes_[i]) {
            throw ValidationError(layer_msg(i) + "has " + std::to_string(biases_[i - 1].size()) +
                                  " biases, expected " + std::to_string(sizes_[i]));
        }
        for (double x : biases_[i - 1]) {
            if (!std::isfinite(x)) throw ValidationError(layer_msg(i) + "non-finite bias");
        }
        if (activations_[i - 1].size() != sizes_[i]) {
            throw ValidationError(layer_msg(i) + "has " +
                                  std::to_string(activations_[i - 1].size()) +
                                  " activations, expected " + std::to_string(sizes_[i]));
        }
    }
}

std::size_t Network::layer_size(std::size_t layer) const {
    if (layer >= sizes_.size()) {
        throw IndexError("layer " + std::to_string(layer) + " out of range [0, " +
                         std::to_string(depth()) + "]");
    }
    return sizes_[layer];
}

void Network::check_weighted_layer(std::size_t layer) const {
    if (layer == 0 || layer > depth()) {
        throw IndexError("weighted layer " + std::to_string(layer) + " out of range [1, " +
                         std::to_string(depth()) + "]");
    }
}

const Matrix& Network::weights(std::size_t layer) const {
    check_weighted_layer(layer);
    return weights_[layer - 1];
}

double Network::weight(std::size_t layer, std::size_t source, std::size_t target) const {
    const Matrix& w = weights(layer);
    if (source >= w.rows() || target >= w.cols()) {
        throw IndexError(layer_msg(layer) + "edge (" + std::to_string(source) + ", " +
                         std::to_string(target) + ") out of range");
    }
    return w(source, target);
}

std::span<const double> Network::biases(std::size_t layer) const {
    check_weighted_layer(layer);
    return biases_[layer - 1];
}

double Network::bias(std::size_t layer, std::size_t node) const {
    auto b = biases(layer);
    if (node >= b.size()) throw IndexError(layer_msg(layer) + "node out of range");
    return b[node];
}

std::span<const Activation> Network::activations(std::size_t layer) const {
    check_weighted_layer(layer);
    return activations_[layer - 1];
}

const Activation& Network::activation(std::size_t layer, std::size_t node) const {
    auto a = activations(layer);
    if (node >= a.size()) throw IndexError(layer_msg(layer) + "node out of range");
    return a[node];
}

std::size_t Network::node_count() const noexcept {
    std::size_t n = 0;
    for (auto s : sizes_) n += s;
    return n;
}

std::size_t Network::edge_count() const noexcept {
    std::size_t m = 0;
    for (std::size_t i = 1; i < sizes_.size(); ++i) m += sizes_[i - 1] * sizes_[i];
    return m;
}

// --- PreSum ---------------------------------------------------------------

void PreSum::add(double x) noexcept {
    double s, e;
    two_sum(hi_, x, s, e);
    hi_ = s;
    lo_ += e;
}

PreSum PreSum::normalized() const noexcept {
    PreSum r;
    two_sum(hi_, lo_, r.hi_, r.lo_);
    return r;
}

bool operator==(const PreSum& a, const PreSum& b) noexcept {
    const PreSum x = a.normalized();
    const PreSum y = b.normalized();
    return x.hi_ == y.hi_ && x.lo_ == y.lo_;
}

bool operator<(const PreSum& a, const PreSum& b) noexcept {
    const PreSum x = a.normalized();
    const PreSum y = b.normalized();
    if (x.hi_ != y.hi_) return x.hi_ < y.hi_;
    return x.lo_ < y.lo_;
}

double distance(const PreSum& a, const PreSum& b) noexcept {
    const PreSum x = a.normalized();
    const PreSum y = b.normalized();
    if (x.hi_ == y.hi_ && x.lo_ == y.lo_) return 0.0;
    const double d = std::fabs((x.hi_ - y.hi_) + (x.lo_ - y.lo_));
    return d > 0.0 ? d : std::numeric_limits<double>::denorm_min();
}

// --- semantics ------------------------------------------------------------

PreSum pre_sum_exact(const Network& net, std::size_t layer, std::span<const std::size_t> block,
                     std::size_t target) {
    const Matrix& w = net.weights(layer);
    if (target >= w.cols()) {
        throw IndexError(layer_msg(layer) + "target node " + std::to_string(target) +
                         " out of range");
    }
    PreSum acc;
    for (std::size_t s : block) {
        if (s >= w.rows()) {
            throw IndexError(layer_msg(layer - 1) + "node " + std::to_string(s) + " out of range");
        }
        acc.add(w(s, target));
    }
    return acc.normalized();
}

double pre_sum(const Network& net, std::size_t layer, std::span<const std::size_t> block,
               std::size_t target) {
    return pre_sum_exact(net, layer, block, target).value();
}

Valuation eval_layer(const Network& net, std::size_t layer, const Valuation& input) {
    const Matrix& w = net.weights(layer);
    if (input.layer != layer - 1) {
        throw ContractError("eval_layer(" + std::to_string(layer) +
                            ") expects a valuation of layer " + std::to_string(layer - 1) +
                            ", got layer " + std::to_string(input.layer));
    }
    if (input.values.size() != w.rows()) {
        throw ContractError(layer_msg(layer - 1) + "valuation has " +
                            std::to_string(input.values.size()) + " values, expected " +
                            std::to_string(w.rows()));
    }
    std::vector<double> z(w.cols(), 0.0);
    for (std::size_t s = 0; s < w.rows(); ++s) {
        const double x = input.values[s];
        auto row = w.row(s);
        for (std::size_t t = 0; t < row.size(); ++t) z[t] += row[t] * x;
    }
    auto b = net.biases(layer);
    auto act = net.activations(layer);
    for (std::size_t t = 0; t < z.size(); ++t) z[t] = act[t](z[t] + b[t]);
    return {layer, std::move(z)};
}

Valuation eval_network(const Network& net, const Valuation& input) {
    if (input.layer != 0) throw ContractError("eval_network expects an input-layer valuation");
    Valuation v = input;
    for (std::size_t i = 1; i <= net.depth(); ++i) v = eval_layer(net, i, v);
    return v;
}

std::vector<Valuation> eval_trace(const Network& net, const Valuation& input) {
    if (input.layer != 0) throw ContractError("eval_trace expects an input-layer valuation");
    std::vector<Valuation> out;
    out.reserve(net.depth() + 1);
    out.push_back(input);
    for (std::size_t i = 1; i <= net.depth(); ++i) out.push_back(eval_layer(net, i, out.back()));
    return out;
}

double weight_inf_norm(const Network& net, std::size_t layer) {
    double m = 0.0;
    for (double x : net.weights(layer).data()) m = std::max(m, std::fabs(x));
    return m;
}

double layer_operator_norm(const Network& net, std::size_t layer) {
    const Matrix& w = net.weights(layer);
    std::vector<double> col(w.cols(), 0.0);
    for (std::size_t s = 0; s < w.rows(); ++s) {
        auto row = w.row(s);
        for (std::size_t t = 0; t < row.size(); ++t) col[t] += std::fabs(row[t]);
    }
    return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

double layer_lipschitz(const Network& net, std::size_t layer) {
    double l = 0.0;
    for (const auto& a : net.activations(layer)) l = std::max(l, a.lipschitz());
    return l;
}

double network_lipschitz_bound(const Network& net) {
    double prefix = 1.0;
    double best = 0.0;
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        prefix *= layer_lipschitz(net, i) * layer_operator_norm(net, i);
        best = std::max(best, prefix);
    }
    return best;
}

}  // namespace nnbisim
