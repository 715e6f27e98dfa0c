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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nnbisim {

/// Which condition of a (δ-)bisimulation a block violates.
enum class Condition { activation, bias, presum };

std::string_view condition_name(Condition c);

/// First violating witness found while checking a partition.
///
/// `target_block` indexes the canonical blocks of layer `layer`; `prev_block`
/// indexes the blocks of layer `layer - 1` and is only set for pre-sum
/// violations. `gap` is the absolute difference between the two nodes'
/// quantities (infinite for an activation mismatch).
struct Violation {
    std::size_t layer = 0;
    std::size_t target_block = 0;
    std::optional<std::size_t> prev_block;
    std::size_t node_a = 0;
    std::size_t node_b = 0;
    Condition condition = Condition::presum;
    double gap = 0.0;
};

/// Out-of-range layer or node index.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Caller broke an operation's contract (mismatched layer, negative tolerance, ...).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Structurally invalid network, partition or generator spec.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed document. `offset` is the byte position reported by the parser, when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::optional<std::size_t> offset = std::nullopt)
        : std::runtime_error(what), offset_(offset) {}

    std::optional<std::size_t> offset() const noexcept { return offset_; }

private:
    std::optional<std::size_t> offset_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation that requires a (δ-)bisimulation was handed something else.
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(const std::string& what, std::optional<Violation> witness = std::nullopt)
        : std::runtime_error(what), witness_(witness) {}

    const std::optional<Violation>& witness() const noexcept { return witness_; }

private:
    std::optional<Violation> witness_;
};

}  // namespace nnbisim
