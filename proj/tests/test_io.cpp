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

#include <bit>
#include <cstring>
#include <filesystem>

#include "nnbisim/error.hpp"
#include "nnbisim/generate.hpp"
#include "nnbisim/io.hpp"
#include "oracles.hpp"

using namespace nnbisim;

namespace {

bool bit_identical(const Network& a, const Network& b) {
    if (a.layer_sizes() != b.layer_sizes()) return false;
    for (std::size_t i = 1; i <= a.depth(); ++i) {
        auto wa = a.weights(i).data(), wb = b.weights(i).data();
        auto ba = a.biases(i), bb = b.biases(i);
        if (std::memcmp(wa.data(), wb.data(), wa.size_bytes()) != 0) return false;
        if (std::memcmp(ba.data(), bb.data(), ba.size_bytes()) != 0) return false;
        if (!std::equal(a.activations(i).begin(), a.activations(i).end(), b.activations(i).begin())) return false;
    }
    return true;
}

const char* kSmall = R"({
  "format_version": "1",
  "layer_sizes": [2, 1],
  "layers": [{"weights": [[0.5], [-1]], "biases": [0.25], "activations": [{"type": "leaky_relu", "slope": 0.1}]}]
})";

}  // namespace

TEST_SUITE("io") {

TEST_CASE("fixtures load") {
    const ModelDocument doc = parse_model(read_text_file(oracle::fixture("example_bisim.json")));
    CHECK(doc.network.layer_sizes() == std::vector<std::size_t>{2, 3, 3, 1});
    CHECK(doc.network.weight(2, 1, 1) == 2.0);
    CHECK(doc.name == std::optional<std::string>("example_bisim"));
    CHECK(load_model(read_text_file(oracle::fixture("example_delta.json"))).weight(1, 0, 0) == 0.8);
    CHECK(load_partition(read_text_file(oracle::fixture("example_delta_pair.json"))).layers()[1].blocks() ==
          std::vector<Block>{{0, 1}, {2}});
}

TEST_CASE("small document with a parameterized activation") {
    const Network net = load_model(kSmall);
    CHECK(net.activation(1, 0) == Activation::leaky_relu(0.1));
    CHECK(net.bias(1, 0) == 0.25);
    const std::string text = save_model(net);
    CHECK(text.find("\"leaky_relu\"") != std::string::npos);
    CHECK(save_model(load_model(text)) == text);
}

TEST_CASE("models round-trip bit-exactly") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomNetSpec spec;
        spec.layer_sizes = {3, 4, 2};
        spec.seed = seed;
        spec.weight_scale = seed % 2 ? 1e-300 : 1e300;
        spec.palette = all_activations();
        const Network net = generate_random(spec);
        const std::string text = save_model(net);
        const Network back = load_model(text);
        CHECK(bit_identical(net, back));
        CHECK(save_model(back) == text);
    }
    Network tiny({1, 1}, {Matrix{{-0.0}}}, {{std::numeric_limits<double>::denorm_min()}}, {{Activation::relu()}});
    CHECK(bit_identical(tiny, load_model(save_model(tiny))));
}

TEST_CASE("metadata round-trips") {
    ModelDocument doc{load_model(kSmall), std::string("small"), std::string("hand written")};
    const ModelDocument back = parse_model(dump_model(doc));
    CHECK(back.name == doc.name);
    CHECK(back.provenance == doc.provenance);
}

TEST_CASE("malformed documents are parse errors with a location") {
    const std::string full = kSmall;
    const std::string truncated = full.substr(0, full.size() / 2);
    try {
        load_model(truncated);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.offset().has_value());
        CHECK(*e.offset() <= truncated.size());
    }
    CHECK_THROWS_AS(load_model(""), ParseError);
    CHECK_THROWS_AS(load_model("[1, 2]"), ParseError);
    CHECK_THROWS_AS(load_model(R"({"format_version": "1", "layer_sizes": [1, 1], "layers": [{"weights": "x", "biases": [0], "activations": ["relu"]}]})"),
                    ParseError);
    CHECK_THROWS_AS(load_model(R"({"format_version": "1", "layer_sizes": [1, 1]})"), ParseError);
}

TEST_CASE("shape errors are validation errors naming the layer") {
    const char* bad_rows = R"({"format_version": "1", "layer_sizes": [1, 2, 1], "layers": [
        {"weights": [[1, 1]], "biases": [0, 0], "activations": ["relu", "relu"]},
        {"weights": [[1], [1], [1]], "biases": [0], "activations": ["relu"]}]})";
    try {
        load_model(bad_rows);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("layer 2") != std::string::npos);
    }
    CHECK_THROWS_AS(load_model(R"({"format_version": "2", "layer_sizes": [1], "layers": []})"), ValidationError);
    CHECK_THROWS_AS(load_model(R"({"format_version": "1", "layer_sizes": [1, 1], "layers": [
        {"weights": [[1]], "biases": [0], "activations": ["swish"]}]})"), ValidationError);
    CHECK_THROWS_AS(load_model(R"({"format_version": "1", "layer_sizes": [1, 1], "layers": [
        {"weights": [[1]], "biases": [0], "activations": [{"type": "leaky_relu", "slope": -1}]}]})"), ValidationError);
}

TEST_CASE("partitions round-trip and are validated") {
    const NetPartition p = make_partition({2, 3, 1}, {{{0, 1}}, {{0, 2}, {1}}, {{0}}});
    const std::string text = save_partition(p);
    CHECK(load_partition(text) == p);
    CHECK(load_partition(text, {2, 3, 1}) == p);
    CHECK_THROWS_AS(load_partition(text, {2, 3, 2}), ValidationError);
    CHECK_THROWS_AS(load_partition(R"({"format_version": "1", "layers": [[[0]], [[0, 1]]]})", {1, 3}), ValidationError);
    CHECK_THROWS_AS(load_partition(R"({"format_version": "1", "layers": [[[0]], [[0, -1]]]})", {1, 2}), ParseError);
    CHECK_THROWS_AS(load_partition(R"({"format_version": "1", "layers": [[[0]]]})"), ParseError);
}

TEST_CASE("file helpers report I/O errors") {
    CHECK_THROWS_AS(read_text_file("/nonexistent/model.json"), IoError);
    CHECK_THROWS_AS(write_text_file("/nonexistent/dir/model.json", "x"), IoError);
    const auto path = std::filesystem::temp_directory_path() / "nnbisim_io_test.json";
    write_text_file(path, kSmall);
    CHECK(read_text_file(path) == kSmall);
    std::filesystem::remove(path);
}

TEST_CASE("reports encode infinite gaps as null") {
    Violation v{1, 0, std::nullopt, 0, 1, Condition::activation, std::numeric_limits<double>::infinity()};
    const Json j = to_json(v);
    CHECK(j["gap"].is_null());
    CHECK(j["condition"] == "activation");
    CHECK(j["prev_block"].is_null());
}

}  // TEST_SUITE
