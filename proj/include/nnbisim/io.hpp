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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nnbisim/approx.hpp"
#include "nnbisim/bisim.hpp"
#include "nnbisim/minimize.hpp"
#include "nnbisim/network.hpp"
#include "nnbisim/partition.hpp"

namespace nnbisim {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "1";

/// A model file: the network plus optional descriptive metadata.
struct ModelDocument {
    Network network;
    std::optional<std::string> name;
    std::optional<std::string> provenance;
};

/// Parses a model document (schema in docs/formats.md).
/// Throws ParseError for malformed text or a wrongly typed field, and
/// ValidationError for shape errors (the message names the layer).
ModelDocument parse_model(std::string_view text);
std::string dump_model(const ModelDocument& doc);

Network load_model(std::string_view text);
std::string save_model(const Network& net);

/// Parses a partition document against `layer_sizes`. A `layer_sizes`
/// field inside the document, when present, must agree.
NetPartition load_partition(std::string_view text, const std::vector<std::size_t>& layer_sizes);
/// Same, taking the layer sizes from the document itself.
NetPartition load_partition(std::string_view text);
std::string save_partition(const NetPartition& p);

/// Whole-file helpers; throw IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Report encodings shared by the command-line tool. Non-finite numbers
/// (an activation mismatch has an infinite gap) are written as null.
Json to_json(const Violation& v);
Json to_json(const BisimReport& r);
Json to_json(const DeltaReport& r);
Json to_json(const ErrorBound& b);
Json to_json(const RefinementTrace& t);
Json to_json(const NetPartition& p);

}  // namespace nnbisim
