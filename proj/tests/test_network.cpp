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

#include <cmath>
#include <limits>
#include <numeric>

#include "nnbisim/error.hpp"
#include "nnbisim/generate.hpp"
#include "nnbisim/io.hpp"
#include "nnbisim/network.hpp"
#include "oracles.hpp"

using namespace nnbisim;

namespace {

Network bisim_net() { return load_model(read_text_file(oracle::fixture("example_bisim.json"))); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) d = std::max(d, std::fabs(a[x] - b[x]));
    return d;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("activation values and Lipschitz constants") {
    CHECK(Activation::relu()(-2.0) == 0.0);
    CHECK(Activation::relu()(1.5) == 1.5);
    CHECK(Activation::leaky_relu(0.1)(-2.0) == doctest::Approx(-0.2));
    CHECK(Activation::identity()(-3.0) == -3.0);
    CHECK(Activation(ActivationTag::sigmoid)(0.0) == 0.5);
    CHECK(Activation(ActivationTag::softsign)(1.0) == 0.5);
    CHECK(Activation(ActivationTag::arctan)(1.0) == doctest::Approx(std::atan(1.0)));
    CHECK(Activation(ActivationTag::tanh)(0.5) == doctest::Approx(std::tanh(0.5)));
    // Large arguments must not overflow.
    CHECK(Activation(ActivationTag::softplus)(1000.0) == doctest::Approx(1000.0));
    CHECK(Activation(ActivationTag::softplus)(-1000.0) >= 0.0);
    CHECK(Activation(ActivationTag::softplus)(0.0) == doctest::Approx(std::log(2.0)));

    CHECK(Activation::relu().lipschitz() == 1.0);
    CHECK(Activation::leaky_relu(0.3).lipschitz() == 1.0);
    CHECK(Activation::leaky_relu(2.5).lipschitz() == 2.5);
    CHECK_THROWS(Activation::leaky_relu(-0.1));
    CHECK_THROWS(Activation::leaky_relu(std::numeric_limits<double>::infinity()));
    CHECK_THROWS(Activation::from_name("gelu"));
    CHECK(Activation::from_name("leaky_relu", 0.2) == Activation::leaky_relu(0.2));
    CHECK_FALSE(Activation::leaky_relu(0.2) == Activation::leaky_relu(0.3));
}

TEST_CASE("activation Lipschitz constants hold on sampled pairs") {
    Rng rng(7);
    for (const Activation& f : all_activations()) {
        for (int n = 0; n < 2000; ++n) {
            const double x = rng.uniform(-20, 20), y = rng.uniform(-20, 20);
            CHECK(std::fabs(f(x) - f(y)) <= f.lipschitz() * std::fabs(x - y) * (1 + 1e-12) + 1e-15);
        }
    }
}

TEST_CASE("network construction validates shapes and values") {
    const std::vector<std::size_t> sizes{2, 1};
    CHECK_NOTHROW(Network(sizes, {Matrix{{1.0}, {2.0}}}, {{0.0}}, {{Activation::relu()}}));
    CHECK_THROWS_AS(Network(sizes, {Matrix{{1.0, 2.0}}}, {{0.0}}, {{Activation::relu()}}),
                    ValidationError);
    CHECK_THROWS_AS(Network(sizes, {Matrix{{1.0}, {2.0}}}, {{0.0, 1.0}}, {{Activation::relu()}}),
                    ValidationError);
    CHECK_THROWS_AS(Network(sizes, {Matrix{{1.0}, {2.0}}}, {{0.0}}, {{}}), ValidationError);
    CHECK_THROWS_AS(Network(sizes, {Matrix{{1.0}, {std::nan("")}}}, {{0.0}}, {{Activation::relu()}}),
                    ValidationError);
    CHECK_THROWS_AS(Network({2}, {}, {}, {}), ValidationError);
    CHECK_THROWS_AS(Network({2, 0}, {Matrix(2, 0)}, {{}}, {{}}), ValidationError);
    try {
        Network({1, 2, 1}, {Matrix{{1.0, 1.0}}, Matrix{{1.0}}}, {{0.0, 0.0}, {0.0}},
                {{Activation::relu(), Activation::relu()}, {Activation::relu()}});
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("layer 2") != std::string::npos);
    }
}

TEST_CASE("accessors and index errors") {
    const Network net = bisim_net();
    CHECK(net.depth() == 3);
    CHECK(net.layer_size(1) == 3);
    CHECK(net.node_count() == 9);
    CHECK(net.edge_count() == 6 + 9 + 3);
    CHECK(net.weight(2, 1, 1) == 2.0);
    CHECK_THROWS_AS(net.layer_size(4), IndexError);
    CHECK_THROWS_AS(net.weights(0), IndexError);
    CHECK_THROWS_AS(net.weights(4), IndexError);
    CHECK_THROWS_AS(net.bias(1, 3), IndexError);
}

TEST_CASE("evaluation agrees with the naive reference") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RandomNetSpec spec;
        spec.layer_sizes = {3, 5, 4, 2};
        spec.seed = seed;
        spec.palette = all_activations();
        const Network net = generate_random(spec);
        Rng rng(seed + 1000);
        for (int n = 0; n < 20; ++n) {
            std::vector<double> x(3);
            for (double& v : x) v = rng.uniform(-2, 2);
            const Valuation y = eval_network(net, Valuation{0, x});
            CHECK(y.layer == 3);
            CHECK(max_abs_diff(y.values, oracle::naive_eval(net, x)) <= 1e-12);
        }
    }
}

TEST_CASE("eval_layer rejects a valuation of the wrong layer") {
    const Network net = bisim_net();
    CHECK_THROWS_AS(eval_layer(net, 2, Valuation{0, {1.0, 2.0}}), ContractError);
    CHECK_THROWS_AS(eval_layer(net, 1, Valuation{0, {1.0}}), ContractError);
    CHECK_THROWS_AS(eval_network(net, Valuation{1, {1.0, 2.0, 3.0}}), ContractError);
    const auto trace = eval_trace(net, Valuation{0, {1.0, 0.0}});
    REQUIRE(trace.size() == 4);
    // By hand: layer 1 = relu(1, 1, 2), layer 2 = relu(1+3+2, 2+2+2, 1+0-4).
    CHECK(trace[1].values == std::vector<double>{1.0, 1.0, 2.0});
    CHECK(trace[2].values == std::vector<double>{6.0, 6.0, 0.0});
    CHECK(trace[3].values == std::vector<double>{0.0});
}

TEST_CASE("pre-sums are additive and order independent") {
    const Network net = bisim_net();
    const std::vector<std::size_t> s1{0, 1};
    CHECK(pre_sum(net, 2, s1, 0) == 4.0);
    CHECK(pre_sum(net, 2, s1, 1) == 4.0);
    CHECK_THROWS_AS(pre_sum(net, 2, std::vector<std::size_t>{3}, 0), IndexError);

    PreSum a, b;
    for (double x : {0.1, 0.3, 0.2}) a.add(x);
    for (double x : {0.2, 0.3, 0.1}) b.add(x);
    CHECK(((0.1 + 0.3) + 0.2) != ((0.2 + 0.3) + 0.1));
    CHECK(a == b);
    CHECK(distance(a, b) == 0.0);

    PreSum c, d;
    c.add(1.0);
    c.add(0x1p-60);
    d.add(1.0);
    CHECK_FALSE(c == d);
    CHECK(d < c);
    CHECK(distance(c, d) > 0.0);

    // Additivity over disjoint blocks, against exact rationals.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RandomNetSpec spec;
        spec.layer_sizes = {6, 4};
        spec.seed = seed;
        spec.decimals = 1;
        const Network q = generate_random(spec);
        const std::vector<std::size_t> left{0, 2, 5}, right{1, 3, 4}, all{0, 1, 2, 3, 4, 5};
        for (std::size_t t = 0; t < 4; ++t) {
            const mpq_class sum = oracle::exact_presum(q, 1, left, t) + oracle::exact_presum(q, 1, right, t);
            CHECK(sum == oracle::exact_presum(q, 1, all, t));
            PreSum ps = pre_sum_exact(q, 1, all, t);
            CHECK(mpq_class(ps.hi()) + mpq_class(ps.lo()) == sum);
        }
    }
}

TEST_CASE("norms and the network Lipschitz bound") {
    const Network net = bisim_net();
    CHECK(weight_inf_norm(net, 2) == 3.0);
    CHECK(layer_operator_norm(net, 2) == 5.0);
    CHECK(layer_operator_norm(net, 1) == 3.0);
    CHECK(layer_lipschitz(net, 1) == 1.0);
    CHECK(layer_operator_norm(net, 3) == 4.0);
    // max(3, 3*5, 3*5*4) over the three prefixes.
    CHECK(network_lipschitz_bound(net) == 60.0);

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RandomNetSpec spec;
        spec.layer_sizes = {3, 4, 4, 2};
        spec.seed = seed;
        spec.palette = all_activations();
        const Network n = generate_random(spec);
        const double lip = network_lipschitz_bound(n);
        Rng rng(seed);
        for (int x = 0; x < 200; ++x) {
            std::vector<double> u(3), v(3);
            double dist = 0.0;
            for (std::size_t s = 0; s < 3; ++s) {
                u[s] = rng.uniform(-1, 1);
                v[s] = rng.uniform(-1, 1);
                dist = std::max(dist, std::fabs(u[s] - v[s]));
            }
            const auto tu = eval_trace(n, Valuation{0, u});
            const auto tv = eval_trace(n, Valuation{0, v});
            for (std::size_t i = 1; i < tu.size(); ++i) {
                CHECK(max_abs_diff(tu[i].values, tv[i].values) <= lip * dist * (1 + 1e-9) + 1e-12);
            }
        }
    }
}

}  // TEST_SUITE
