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

// Reference implementations used to cross-check the library. They favour
// obviousness over speed: exact rational arithmetic, brute-force search.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nnbisim/generate.hpp"
#include "nnbisim/network.hpp"
#include "nnbisim/partition.hpp"

namespace oracle {

using nnbisim::Block;
using nnbisim::LayerPartition;
using nnbisim::NetPartition;
using nnbisim::Network;

std::string fixture(const std::string& name);

/// Layer-by-layer evaluation written from the definition, bias added first.
std::vector<double> naive_eval(const Network& net, const std::vector<double>& input);

/// Exact rational sum of W_layer(s, t) over s in `block`.
mpq_class exact_presum(const Network& net, std::size_t layer, const Block& block, std::size_t t);

/// Exact NN-bisimulation test straight from the definition.
bool is_bisimulation(const Network& net, const NetPartition& p);

/// Exact δ-bisimulation test: every spread computed in rationals.
bool is_delta_bisimulation(const Network& net, const NetPartition& p, double delta);

/// Every set partition of {0..n-1}, blocks in canonical order.
std::vector<std::vector<Block>> set_partitions(std::size_t n);

/// Calls `visit` on every NN-bisimulation of `net`. With `pin_io` the input
/// and output layers are restricted to singletons. Returns the count.
std::size_t for_each_bisimulation(const Network& net, bool pin_io,
                                  const std::function<void(const NetPartition&)>& visit);

/// Random partition of every layer: each node picks one of `width` labels.
NetPartition random_partition(const std::vector<std::size_t>& sizes, nnbisim::Rng& rng, std::size_t width);

/// eps'_i = a eps_{i-1} + b, eps_i = 2 eps'_i from eps_0 = eps0; returns eps'_k.
double unrolled_bound(double a, double b, double eps0, std::size_t k);

}  // namespace oracle
