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

#include <string_view>

namespace nnbisim {

enum class ActivationTag { relu, leaky_relu, tanh, sigmoid, softplus, arctan, softsign, identity };

/// A per-node activation function. Only LeakyReLU carries a parameter; for
/// every other tag the slope is stored as zero so that equality is plain
/// member-wise comparison.
class Activation {
public:
    constexpr Activation() = default;
    explicit Activation(ActivationTag tag);

    static Activation relu() { return Activation(ActivationTag::relu); }
    static Activation identity() { return Activation(ActivationTag::identity); }
    /// Requires a finite, non-negative slope (keeps every activation monotone).
    static Activation leaky_relu(double slope);

    /// Parses the lower-case document name ("relu", "leaky_relu", ...).
    static Activation from_name(std::string_view name, double slope = 0.0);

    ActivationTag tag() const noexcept { return tag_; }
    double slope() const noexcept { return slope_; }
    std::string_view name() const noexcept;
    bool has_parameter() const noexcept { return tag_ == ActivationTag::leaky_relu; }

    double operator()(double x) const noexcept;

    /// Lipschitz constant L(f): 1 for every tag except LeakyReLU, max(1, slope).
    double lipschitz() const noexcept;

    friend bool operator==(const Activation&, const Activation&) = default;

    /// Strict weak order over (tag, slope); used to group nodes by activation.
    friend bool operator<(const Activation& a, const Activation& b) noexcept {
        if (a.tag_ != b.tag_) return a.tag_ < b.tag_;
        return a.slope_ < b.slope_;
    }

private:
    ActivationTag tag_ = ActivationTag::relu;
    double slope_ = 0.0;
};

}  // namespace nnbisim
