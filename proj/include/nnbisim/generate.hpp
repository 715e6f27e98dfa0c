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
#include <cstdint>
#include <random>
#include <vector>

#include "nnbisim/activation.hpp"
#include "nnbisim/network.hpp"
#include "nnbisim/partition.hpp"

namespace nnbisim {

/// std::mt19937_64 with portable uniform mappings (the standard
/// distributions are implementation-defined), so a seed yields the same
/// values on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n);
    /// Uniform in [0, 1).
    double unit();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

/// Every activation tag, LeakyReLU with slope 0.1.
std::vector<Activation> all_activations();

struct RandomNetSpec {
    std::vector<std::size_t> layer_sizes;
    std::uint64_t seed = 0;
    double weight_scale = 1.0;  ///< weights uniform in [-weight_scale, weight_scale]
    double bias_scale = 0.5;    ///< biases uniform in [-bias_scale, bias_scale]
    /// When >= 0, weights and biases are rounded to this many decimals.
    int decimals = -1;
    /// Each node draws its activation uniformly from this list.
    std::vector<Activation> palette{Activation::relu()};
};

/// Throws ValidationError for an empty layer list, a zero-sized layer, an
/// empty palette or a negative scale.
Network generate_random(const RandomNetSpec& spec);

/// `size` nodes of layer `layer` planted as one block.
struct TwinGroup {
    std::size_t layer = 0;
    std::size_t size = 2;
};

struct PlantedSpec {
    std::vector<std::size_t> layer_sizes;
    std::uint64_t seed = 0;
    std::vector<TwinGroup> twins;
    /// 0 plants an exact bisimulation. A positive value perturbs the bias
    /// and pre-sums of planted members by at most 0.45 * delta each, with at
    /// least one nonzero perturbation, so the planted partition is a
    /// δ-bisimulation but not an exact one.
    double delta = 0.0;
    /// Draw activations from all_activations() instead of ReLU only.
    bool mixed_activations = false;
};

struct Planted {
    Network network;
    NetPartition partition;
};

/// Random network with the requested groups planted as blocks. All weights
/// and biases are dyadic rationals of small magnitude, so every pre-sum is
/// computed exactly. Nodes outside groups are singletons.
/// Throws ValidationError when the groups do not fit their layers, when a
/// δ-variant has no group of size >= 2
/// above the input layer, or when delta is too small for the
/// perturbation grid (delta < 1/256).
Planted generate_planted(const PlantedSpec& spec);

}  // namespace nnbisim
