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

#include "nnbisim/generate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nnbisim/error.hpp"

namespace nnbisim {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

std::uint64_t Rng::below(std::uint64_t n) {
    // Rejection sampling keeps the result exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

std::vector<Activation> all_activations() {
    return {Activation::relu(),
            Activation::leaky_relu(0.1),
            Activation(ActivationTag::tanh),
            Activation(ActivationTag::sigmoid),
            Activation(ActivationTag::softplus),
            Activation(ActivationTag::arctan),
            Activation(ActivationTag::softsign),
            Activation::identity()};
}

namespace {

void check_sizes(const std::vector<std::size_t>& sizes) {
    if (sizes.empty()) throw ValidationError("generator needs at least one layer");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw ValidationError("layer " + std::to_string(i) + " is empty");
    }
}

double quantize(double x, int decimals) {
    if (decimals < 0) return x;
    const double scale = std::pow(10.0, decimals);
    return std::round(x * scale) / scale;
}

// Planted values live on this dyadic grid so that sums are exact.
constexpr double kGrid = 1.0 / 1024.0;

double grid_value(Rng& rng, std::int64_t max_steps) {
    const auto k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * max_steps + 1)));
    return static_cast<double>(k - max_steps) * kGrid;
}

}  // namespace

Network generate_random(const RandomNetSpec& spec) {
    check_sizes(spec.layer_sizes);
    if (spec.palette.empty()) throw ValidationError("activation palette is empty");
    if (!(spec.weight_scale >= 0.0) || !(spec.bias_scale >= 0.0)) {
        throw ValidationError("generator scales must be non-negative");
    }
    Rng rng(spec.seed);
    const auto& sizes = spec.layer_sizes;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::vector<Activation>> acts;
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        Matrix w(sizes[i - 1], sizes[i]);
        for (std::size_t s = 0; s < sizes[i - 1]; ++s) {
            for (std::size_t t = 0; t < sizes[i]; ++t) {
                w(s, t) = quantize(rng.uniform(-spec.weight_scale, spec.weight_scale), spec.decimals);
            }
        }
        std::vector<double> b(sizes[i]);
        for (double& x : b) x = quantize(rng.uniform(-spec.bias_scale, spec.bias_scale), spec.decimals);
        std::vector<Activation> a(sizes[i]);
        for (auto& f : a) f = spec.palette[rng.below(spec.palette.size())];
        weights.push_back(std::move(w));
        biases.push_back(std::move(b));
        acts.push_back(std::move(a));
    }
    return Network(sizes, std::move(weights), std::move(biases), std::move(acts));
}

Planted generate_planted(const PlantedSpec& spec) {
    const auto& sizes = spec.layer_sizes;
    check_sizes(sizes);
    const std::size_t k = sizes.size() - 1;

    std::vector<std::vector<std::size_t>> groups_per_layer(sizes.size());
    bool has_pair = false;
    for (const auto& g : spec.twins) {
        if (g.layer > k) {
            throw ValidationError("twin group names layer " + std::to_string(g.layer) +
                                  " of a network with " + std::to_string(k + 1) + " layers");
        }
        if (g.size == 0) throw ValidationError("twin group of size 0");
        groups_per_layer[g.layer].push_back(g.size);
        has_pair = has_pair || (g.size >= 2 && g.layer >= 1);
    }
    for (std::size_t i = 0; i <= k; ++i) {
        const auto& gs = groups_per_layer[i];
        const std::size_t used = std::accumulate(gs.begin(), gs.end(), std::size_t{0});
        if (used > sizes[i]) {
            throw ValidationError("twin groups need " + std::to_string(used) + " nodes in layer " +
                                  std::to_string(i) + ", which has " + std::to_string(sizes[i]));
        }
    }
    std::int64_t perturb_steps = 0;
    if (spec.delta != 0.0) {
        if (!(spec.delta >= 1.0 / 256.0) || !std::isfinite(spec.delta)) {
            throw ValidationError("planted delta must be finite and at least 1/256");
        }
        if (!has_pair) throw ValidationError("a delta variant needs a twin group of size >= 2 above the input layer");
        perturb_steps = static_cast<std::int64_t>(std::floor(0.45 * spec.delta / kGrid));
    }

    Rng rng(spec.seed);
    const std::vector<Activation> palette =
        spec.mixed_activations ? all_activations() : std::vector<Activation>{Activation::relu()};

    // Node-to-block assignment: a random permutation cut into the groups.
    std::vector<LayerPartition> layers;
    for (std::size_t i = 0; i <= k; ++i) {
        std::vector<std::size_t> perm(sizes[i]);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t x = perm.size(); x > 1; --x) std::swap(perm[x - 1], perm[rng.below(x)]);
        std::vector<Block> blocks;
        std::size_t pos = 0;
        for (std::size_t g : groups_per_layer[i]) {
            blocks.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                                perm.begin() + static_cast<std::ptrdiff_t>(pos + g));
            pos += g;
        }
        for (; pos < perm.size(); ++pos) blocks.push_back({perm[pos]});
        layers.emplace_back(i, sizes[i], std::move(blocks));
    }

    bool forced = false;  // one guaranteed nonzero perturbation in the delta variant
    auto perturbation = [&]() {
        if (perturb_steps == 0) return 0.0;
        return grid_value(rng, perturb_steps);
    };

    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::vector<Activation>> acts;
    for (std::size_t i = 1; i <= k; ++i) {
        const LayerPartition& prev = layers[i - 1];
        Matrix w(sizes[i - 1], sizes[i]);
        std::vector<double> bias(sizes[i]);
        std::vector<Activation> act(sizes[i]);
        for (const Block& block : layers[i].blocks()) {
            const Activation f = palette[rng.below(palette.size())];
            const double b = grid_value(rng, 512);
            for (std::size_t x = 0; x < block.size(); ++x) {
                const std::size_t t = block[x];
                act[t] = f;
                double u = block.size() > 1 ? perturbation() : 0.0;
                if (perturb_steps > 0 && !forced && x == 1) {
                    const auto mag = static_cast<double>(1 + rng.below(static_cast<std::uint64_t>(perturb_steps)));
                    u = (rng.below(2) == 0 ? -mag : mag) * kGrid;
                    forced = true;
                }
                bias[t] = b + u;
            }
            for (const Block& src : prev.blocks()) {
                if (block.size() == 1) {
                    for (std::size_t s : src) w(s, block.front()) = grid_value(rng, 1024);
                    continue;
                }
                const double target = grid_value(rng, 1024);
                for (std::size_t t : block) {
                    double sum = 0.0;
                    for (std::size_t x = 0; x + 1 < src.size(); ++x) {
                        w(src[x], t) = grid_value(rng, 1024);
                        sum += w(src[x], t);
                    }
                    w(src.back(), t) = target - sum + perturbation();
                }
            }
        }
        weights.push_back(std::move(w));
        biases.push_back(std::move(bias));
        acts.push_back(std::move(act));
    }
    return {Network(sizes, std::move(weights), std::move(biases), std::move(acts)),
            NetPartition(std::move(layers))};
}

}  // namespace nnbisim
