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

#include <doctest.h>

#include "nnbisim/approx.hpp"
#include "nnbisim/bisim.hpp"
#include "nnbisim/error.hpp"
#include "nnbisim/generate.hpp"
#include "nnbisim/io.hpp"
#include "oracles.hpp"

using namespace nnbisim;

TEST_SUITE("generate") {

TEST_CASE("rng mappings stay in range and are deterministic") {
    Rng a(42), b(42);
    for (int n = 0; n < 1000; ++n) {
        const std::uint64_t x = a.below(7);
        CHECK(x == b.below(7));
        CHECK(x < 7);
        const double u = a.unit();
        CHECK(u == b.unit());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    // Pinned first draws guard against accidental changes of the stream.
    Rng c(0);
    CHECK(c.next() == 2947667278772165694ull);
}

TEST_CASE("random networks are deterministic by seed") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomNetSpec spec;
        spec.layer_sizes = {3, 4, 2};
        spec.seed = seed;
        spec.palette = all_activations();
        CHECK(save_model(generate_random(spec)) == save_model(generate_random(spec)));
        spec.decimals = 1;
        const Network q = generate_random(spec);
        for (double x : q.weights(1).data()) CHECK(x == std::round(x * 10) / 10);
    }
    RandomNetSpec bad;
    CHECK_THROWS_AS(generate_random(bad), ValidationError);
    bad.layer_sizes = {2, 0};
    CHECK_THROWS_AS(generate_random(bad), ValidationError);
    bad.layer_sizes = {2, 1};
    bad.palette.clear();
    CHECK_THROWS_AS(generate_random(bad), ValidationError);
}

TEST_CASE("twins on a 2-3-1 network") {
    PlantedSpec spec;
    spec.layer_sizes = {2, 3, 1};
    spec.twins = {{1, 2}};
    const Planted planted = generate_planted(spec);
    CHECK(check_bisimulation(planted.network, planted.partition).ok);
    CHECK(planted.partition[1].block_count() == 2);
}

TEST_CASE("planted structures pass their checkers across 100 seeds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        PlantedSpec spec;
        spec.layer_sizes = {4, 6, 5, 3};
        spec.seed = seed;
        spec.twins = {{0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 2}};
        spec.mixed_activations = true;
        const Planted exact = generate_planted(spec);
        CHECK(check_bisimulation(exact.network, exact.partition).ok);
        CHECK(oracle::is_bisimulation(exact.network, exact.partition));
        CHECK(save_model(generate_planted(spec).network) == save_model(exact.network));

        spec.delta = 0.2;
        const Planted approx = generate_planted(spec);
        CHECK(check_delta_bisimulation(approx.network, approx.partition, 0.2).ok);
        CHECK(oracle::is_delta_bisimulation(approx.network, approx.partition, 0.2));
        CHECK_FALSE(check_bisimulation(approx.network, approx.partition).ok);
        // Perturbations stay within 0.45 delta of the planted centre.
        CHECK(check_delta_bisimulation(approx.network, approx.partition, 0.9 * 0.2).ok);
    }
}

TEST_CASE("infeasible planted specs are rejected") {
    PlantedSpec spec;
    spec.layer_sizes = {2, 3, 1};
    spec.twins = {{1, 4}};
    CHECK_THROWS_AS(generate_planted(spec), ValidationError);
    spec.twins = {{1, 2}, {1, 2}};
    CHECK_THROWS_AS(generate_planted(spec), ValidationError);
    spec.twins = {{3, 1}};
    CHECK_THROWS_AS(generate_planted(spec), ValidationError);
    spec.twins = {{1, 0}};
    CHECK_THROWS_AS(generate_planted(spec), ValidationError);
    spec.twins = {{0, 2}};
    spec.delta = 0.2;
    CHECK_THROWS_AS(generate_planted(spec), ValidationError);
    spec.twins = {{1, 2}};
    spec.delta = 0.001;
    CHECK_THROWS_AS(generate_planted(spec), ValidationError);
}

}  // TEST_SUITE
