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
#include <span>
#include <vector>

#include "nnbisim/activation.hpp"

namespace nnbisim {

/// Dense row-major matrix. For layer weights, row = source node of layer i-1,
/// column = target node of layer i.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Assignment of reals to the nodes of one layer (or to the blocks of one
/// layer's partition, for abstract valuations).
struct Valuation {
    std::size_t layer = 0;
    std::vector<double> values;

    friend bool operator==(const Valuation&, const Valuation&) = default;
};

/// Feedforward network with k weighted layers on top of an input layer.
///
/// Layers are numbered 0 (input) to k (output). Weighted quantities are
/// indexed by the layer they feed into, so `weights(i)` has shape
/// |S_{i-1}| x |S_i| for i in [1, k]. Nodes are identified by
/// (layer, position). The constructor validates every shape and rejects
/// non-finite parameters; a constructed Network is always well formed.
class Network {
public:
    Network(std::vector<std::size_t> layer_sizes, std::vector<Matrix> weights,
            std::vector<std::vector<double>> biases,
            std::vector<std::vector<Activation>> activations);

    /// Number of weighted layers, k.
    std::size_t depth() const noexcept { return weights_.size(); }
    std::size_t layer_size(std::size_t layer) const;
    const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }

    const Matrix& weights(std::size_t layer) const;
    double weight(std::size_t layer, std::size_t source, std::size_t target) const;
    std::span<const double> biases(std::size_t layer) const;
    double bias(std::size_t layer, std::size_t node) const;
    std::span<const Activation> activations(std::size_t layer) const;
    const Activation& activation(std::size_t layer, std::size_t node) const;

    std::size_t node_count() const noexcept;
    std::size_t edge_count() const noexcept;

    friend bool operator==(const Network&, const Network&) = default;

private:
    void check_weighted_layer(std::size_t layer) const;

    std::vector<std::size_t> sizes_;
    std::vector<Matrix> weights_;
    std::vector<std::vector<double>> biases_;
    std::vector<std::vector<Activation>> activations_;
};

/// Compensated accumulator for pre-sums.
///
/// Adds terms in the order given, carrying the rounding error of every
/// addition in a second word. For inputs whose exact sum fits in about 106
/// significant bits (which covers quantized and dyadic weights) the
/// normalized pair is the exact sum, so equality of two PreSums is equality
/// of the underlying real sums regardless of summation order.
class PreSum {
public:
    void add(double x) noexcept;

    /// Canonical (rounded, residual) pair.
    PreSum normalized() const noexcept;
    double value() const noexcept { return hi_ + lo_; }
    double hi() const noexcept { return hi_; }
    double lo() const noexcept { return lo_; }

    friend bool operator==(const PreSum& a, const PreSum& b) noexcept;
    /// Orders by real value of the normalized pairs.
    friend bool operator<(const PreSum& a, const PreSum& b) noexcept;
    /// |a - b|; strictly positive whenever a != b.
    friend double distance(const PreSum& a, const PreSum& b) noexcept;

private:
    double hi_ = 0.0;
    double lo_ = 0.0;
};

/// PreSum of W_i(s, target) over s in `block`, accumulated in the order the
/// block lists its nodes (ascending for canonical blocks).
PreSum pre_sum_exact(const Network& net, std::size_t layer, std::span<const std::size_t> block,
                     std::size_t target);

/// Total incoming weight into `target` (a node of layer `layer`) from the
/// nodes of `block` (nodes of layer `layer - 1`).
double pre_sum(const Network& net, std::size_t layer, std::span<const std::size_t> block,
               std::size_t target);

/// One layer of the network: out(t) = A(t)(sum_s W(s, t) v(s) + b(t)).
Valuation eval_layer(const Network& net, std::size_t layer, const Valuation& input);

/// Input-output semantics: the composition of every layer applied to `input`.
Valuation eval_network(const Network& net, const Valuation& input);

/// All intermediate valuations; element i is the valuation of layer i
/// (element 0 is the input itself).
std::vector<Valuation> eval_trace(const Network& net, const Valuation& input);

/// Largest absolute weight entry of layer `layer`.
double weight_inf_norm(const Network& net, std::size_t layer);

/// Induced infinity-norm of the layer's linear map: the maximum over targets
/// of sum_s |W(s, t)|.
double layer_operator_norm(const Network& net, std::size_t layer);

/// Largest activation Lipschitz constant among the nodes of `layer`.
double layer_lipschitz(const Network& net, std::size_t layer);

/// Upper bound L(N) on the Lipschitz constant of every prefix of the network,
/// max over i of prod_{j <= i} layer_lipschitz(j) * layer_operator_norm(j).
double network_lipschitz_bound(const Network& net);

}  // namespace nnbisim
