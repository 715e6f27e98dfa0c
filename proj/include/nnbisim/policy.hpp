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
#include <string_view>
#include <vector>

namespace nnbisim {

/// Rule selecting which member of a target block supplies the pre-sums, bias
/// and activation of the corresponding quotient node.
///
/// min_index / max_index take every quantity from one member. The per_value
/// policies choose the smallest (largest) pre-sum separately for each
/// previous-layer block and the smallest (largest) bias, so different
/// quantities may come from different members. explicit_choice names the
/// member per (layer, block): `members[i][j]` is used for block j of layer i,
/// for i in [1, k]; entry 0 is ignored.
class RepresentativePolicy {
public:
    enum class Kind { min_index, max_index, per_value_min, per_value_max, explicit_choice };

    static RepresentativePolicy min_index() { return RepresentativePolicy(Kind::min_index); }
    static RepresentativePolicy max_index() { return RepresentativePolicy(Kind::max_index); }
    static RepresentativePolicy per_value_min() { return RepresentativePolicy(Kind::per_value_min); }
    static RepresentativePolicy per_value_max() { return RepresentativePolicy(Kind::per_value_max); }
    static RepresentativePolicy explicit_choice(std::vector<std::vector<std::size_t>> members);

    /// Parses one of the four named policies; throws ValidationError otherwise.
    static RepresentativePolicy from_name(std::string_view name);

    /// The four named (parameterless) policies.
    static std::vector<RepresentativePolicy> named();

    Kind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept;
    const std::vector<std::vector<std::size_t>>& members() const noexcept { return members_; }

private:
    explicit RepresentativePolicy(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::vector<std::vector<std::size_t>> members_;
};

}  // namespace nnbisim
