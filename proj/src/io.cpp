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

#include "nnbisim/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nnbisim/error.hpp"

namespace nnbisim {

namespace {

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // nlohmann reports the 1-based position of the offending byte.
        std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        throw ParseError(std::string("malformed document at byte ") + std::to_string(offset) + ": " +
                             e.what(),
                         offset);
    }
}

[[noreturn]] void bad_field(const std::string& path, const char* expected) {
    throw ParseError(path + ": expected " + expected);
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) bad_field(path, "an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + ": missing field \"" + key + "\"");
    return *it;
}

const Json& array_at(const Json& j, const std::string& path) {
    if (!j.is_array()) bad_field(path, "an array");
    return j;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) bad_field(path, "a number");
    return j.get<double>();
}

std::size_t index(const Json& j, const std::string& path) {
    if (!j.is_number_unsigned()) bad_field(path, "a non-negative integer");
    return j.get<std::size_t>();
}

std::string string_at(const Json& j, const std::string& path) {
    if (!j.is_string()) bad_field(path, "a string");
    return j.get<std::string>();
}

std::vector<std::size_t> sizes_at(const Json& j, const std::string& path) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < array_at(j, path).size(); ++x) {
        out.push_back(index(j[x], path + "[" + std::to_string(x) + "]"));
    }
    return out;
}

void check_version(const Json& doc) {
    const std::string v = string_at(field(doc, "format_version", "document"), "format_version");
    if (v != kFormatVersion) throw ValidationError("unsupported format_version \"" + v + "\"");
}

Activation activation_at(const Json& j, const std::string& path) {
    try {
        if (j.is_string()) return Activation::from_name(j.get<std::string>());
        if (j.is_object()) {
            const std::string type = string_at(field(j, "type", path), path + ".type");
            double slope = 0.0;
            if (auto it = j.find("slope"); it != j.end()) slope = number(*it, path + ".slope");
            return Activation::from_name(type, slope);
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError(path + ": " + e.what());
    }
    bad_field(path, "an activation name or {\"type\", \"slope\"} object");
}

Json activation_json(const Activation& a) {
    if (!a.has_parameter()) return std::string(a.name());
    return Json{{"type", std::string(a.name())}, {"slope", a.slope()}};
}

Json number_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

Json blocks_json(const std::vector<Block>& blocks) {
    Json out = Json::array();
    for (const auto& b : blocks) out.push_back(b);
    return out;
}

NetPartition partition_from(const Json& doc, const std::vector<std::size_t>& layer_sizes) {
    const Json& layers = array_at(field(doc, "layers", "document"), "layers");
    if (layers.size() != layer_sizes.size()) {
        throw ValidationError("partition has " + std::to_string(layers.size()) +
                              " layers, expected " + std::to_string(layer_sizes.size()));
    }
    std::vector<std::vector<Block>> blocks(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string lpath = "layers[" + std::to_string(i) + "]";
        const Json& lj = array_at(layers[i], lpath);
        for (std::size_t j = 0; j < lj.size(); ++j) {
            blocks[i].push_back(sizes_at(lj[j], lpath + "[" + std::to_string(j) + "]"));
        }
    }
    return make_partition(layer_sizes, std::move(blocks));
}

}  // namespace

ModelDocument parse_model(std::string_view text) {
    const Json doc = parse_json(text);
    check_version(doc);
    std::vector<std::size_t> sizes = sizes_at(field(doc, "layer_sizes", "document"), "layer_sizes");
    if (sizes.empty()) throw ValidationError("layer_sizes must name at least the input layer");
    const Json& layers = array_at(field(doc, "layers", "document"), "layers");
    if (layers.size() + 1 != sizes.size()) {
        throw ValidationError("document has " + std::to_string(layers.size()) +
                              " weighted layers, layer_sizes implies " +
                              std::to_string(sizes.size() - 1));
    }

    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::vector<Activation>> acts;
    for (std::size_t x = 0; x < layers.size(); ++x) {
        const std::size_t i = x + 1;
        const std::string path = "layers[" + std::to_string(x) + "]";
        const std::string where = "layer " + std::to_string(i) + ": ";
        const Json& lj = layers[x];

        const Json& wj = array_at(field(lj, "weights", path), path + ".weights");
        if (wj.size() != sizes[i - 1]) {
            throw ValidationError(where + "weights have " + std::to_string(wj.size()) +
                                  " rows, expected " + std::to_string(sizes[i - 1]));
        }
        Matrix w(sizes[i - 1], sizes[i]);
        for (std::size_t s = 0; s < wj.size(); ++s) {
            const std::string rpath = path + ".weights[" + std::to_string(s) + "]";
            const Json& row = array_at(wj[s], rpath);
            if (row.size() != sizes[i]) {
                throw ValidationError(where + "weights row " + std::to_string(s) + " has " +
                                      std::to_string(row.size()) + " entries, expected " +
                                      std::to_string(sizes[i]));
            }
            for (std::size_t t = 0; t < row.size(); ++t) {
                w(s, t) = number(row[t], rpath + "[" + std::to_string(t) + "]");
            }
        }
        weights.push_back(std::move(w));

        const Json& bj = array_at(field(lj, "biases", path), path + ".biases");
        std::vector<double> b;
        for (std::size_t t = 0; t < bj.size(); ++t) {
            b.push_back(number(bj[t], path + ".biases[" + std::to_string(t) + "]"));
        }
        biases.push_back(std::move(b));

        const Json& aj = array_at(field(lj, "activations", path), path + ".activations");
        std::vector<Activation> a;
        for (std::size_t t = 0; t < aj.size(); ++t) {
            a.push_back(activation_at(aj[t], path + ".activations[" + std::to_string(t) + "]"));
        }
        acts.push_back(std::move(a));
    }

    ModelDocument out{Network(std::move(sizes), std::move(weights), std::move(biases), std::move(acts)),
                      std::nullopt, std::nullopt};
    if (auto it = doc.find("metadata"); it != doc.end()) {
        if (!it->is_object()) bad_field("metadata", "an object");
        if (auto n = it->find("name"); n != it->end()) out.name = string_at(*n, "metadata.name");
        if (auto p = it->find("provenance"); p != it->end()) {
            out.provenance = string_at(*p, "metadata.provenance");
        }
    }
    return out;
}

std::string dump_model(const ModelDocument& doc) {
    const Network& net = doc.network;
    Json j;
    j["format_version"] = kFormatVersion;
    j["layer_sizes"] = net.layer_sizes();
    Json layers = Json::array();
    for (std::size_t i = 1; i <= net.depth(); ++i) {
        const Matrix& w = net.weights(i);
        Json rows = Json::array();
        for (std::size_t s = 0; s < w.rows(); ++s) {
            auto r = w.row(s);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        Json acts = Json::array();
        for (const auto& a : net.activations(i)) acts.push_back(activation_json(a));
        auto b = net.biases(i);
        layers.push_back(Json{{"weights", std::move(rows)},
                              {"biases", std::vector<double>(b.begin(), b.end())},
                              {"activations", std::move(acts)}});
    }
    j["layers"] = std::move(layers);
    if (doc.name || doc.provenance) {
        Json meta = Json::object();
        if (doc.name) meta["name"] = *doc.name;
        if (doc.provenance) meta["provenance"] = *doc.provenance;
        j["metadata"] = std::move(meta);
    }
    return j.dump(2) + "\n";
}

Network load_model(std::string_view text) { return parse_model(text).network; }

std::string save_model(const Network& net) { return dump_model({net, std::nullopt, std::nullopt}); }

NetPartition load_partition(std::string_view text, const std::vector<std::size_t>& layer_sizes) {
    const Json doc = parse_json(text);
    check_version(doc);
    if (auto it = doc.find("layer_sizes"); it != doc.end()) {
        if (sizes_at(*it, "layer_sizes") != layer_sizes) {
            throw ValidationError("partition layer_sizes do not match the model");
        }
    }
    return partition_from(doc, layer_sizes);
}

NetPartition load_partition(std::string_view text) {
    const Json doc = parse_json(text);
    check_version(doc);
    return partition_from(doc, sizes_at(field(doc, "layer_sizes", "document"), "layer_sizes"));
}

std::string save_partition(const NetPartition& p) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["layer_sizes"] = p.layer_sizes();
    j["layers"] = to_json(p);
    return j.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path.string());
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError("error writing " + path.string());
}

Json to_json(const Violation& v) {
    Json j;
    j["layer"] = v.layer;
    j["target_block"] = v.target_block;
    j["prev_block"] = v.prev_block ? Json(*v.prev_block) : Json(nullptr);
    j["node_a"] = v.node_a;
    j["node_b"] = v.node_b;
    j["condition"] = std::string(condition_name(v.condition));
    j["gap"] = number_or_null(v.gap);
    return j;
}

Json to_json(const BisimReport& r) {
    Json j;
    j["ok"] = r.ok;
    j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
    return j;
}

Json to_json(const DeltaReport& r) {
    Json j;
    j["ok"] = r.ok;
    j["max_bias_gap"] = number_or_null(r.max_bias_gap);
    j["max_presum_gap"] = number_or_null(r.max_presum_gap);
    j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
    return j;
}

Json to_json(const ErrorBound& b) {
    Json j;
    j["mode"] = b.mode == BoundMode::lipschitz ? "lipschitz" : "interval";
    j["a"] = number_or_null(b.a);
    j["b"] = number_or_null(b.b);
    j["lipschitz"] = number_or_null(b.lipschitz);
    j["state_bound"] = number_or_null(b.state_bound);
    Json layers = Json::array();
    for (const auto& t : b.per_layer) {
        layers.push_back(Json{{"layer", t.layer},
                              {"a", number_or_null(t.a)},
                              {"b", number_or_null(t.b)},
                              {"state_bound", number_or_null(t.state_bound)},
                              {"eps_prime", number_or_null(t.eps_prime)},
                              {"eps", number_or_null(t.eps)}});
    }
    j["per_layer"] = std::move(layers);
    j["eps_final"] = number_or_null(b.eps_final);
    return j;
}

Json to_json(const RefinementTrace& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps) {
        Json j;
        j["kind"] = std::string(step_kind_name(s.kind));
        j["layer"] = s.layer;
        j["split_block"] = s.split_block;
        j["result"] = blocks_json(s.result);
        j["trigger"] = s.trigger ? Json(*s.trigger) : Json(nullptr);
        steps.push_back(std::move(j));
    }
    return steps;
}

Json to_json(const NetPartition& p) {
    Json layers = Json::array();
    for (const auto& lp : p.layers()) layers.push_back(blocks_json(lp.blocks()));
    return layers;
}

}  // namespace nnbisim
