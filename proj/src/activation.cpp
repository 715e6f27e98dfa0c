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

#include "nnbisim/activation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nnbisim/error.hpp"

namespace nnbisim {

Activation::Activation(ActivationTag tag) : tag_(tag) {
    if (tag == ActivationTag::leaky_relu) {
        throw ValidationError("leaky_relu requires a slope; use Activation::leaky_relu");
    }
}

Activation Activation::leaky_relu(double slope) {
    if (!std::isfinite(slope) || slope < 0.0) {
        throw ValidationError("leaky_relu slope must be finite and non-negative, got " +
                              std::to_string(slope));
    }
    Activation a;
    a.tag_ = ActivationTag::leaky_relu;
    a.slope_ = slope;
    return a;
}

Activation Activation::from_name(std::string_view name, double slope) {
    if (name == "relu") return Activation(ActivationTag::relu);
    if (name == "leaky_relu") return leaky_relu(slope);
    if (name == "tanh") return Activation(ActivationTag::tanh);
    if (name == "sigmoid") return Activation(ActivationTag::sigmoid);
    if (name == "softplus") return Activation(ActivationTag::softplus);
    if (name == "arctan") return Activation(ActivationTag::arctan);
    if (name == "softsign") return Activation(ActivationTag::softsign);
    if (name == "identity") return Activation(ActivationTag::identity);
    throw ValidationError("unknown activation '" + std::string(name) + "'");
}

std::string_view Activation::name() const noexcept {
    switch (tag_) {
    case ActivationTag::relu: return "relu";
    case ActivationTag::leaky_relu: return "leaky_relu";
    case ActivationTag::tanh: return "tanh";
    case ActivationTag::sigmoid: return "sigmoid";
    case ActivationTag::softplus: return "softplus";
    case ActivationTag::arctan: return "arctan";
    case ActivationTag::softsign: return "softsign";
    case ActivationTag::identity: return "identity";
    }
    return "relu";
}

double Activation::operator()(double x) const noexcept {
    switch (tag_) {
    case ActivationTag::relu: return x > 0.0 ? x : 0.0;
    case ActivationTag::leaky_relu: return x >= 0.0 ? x : slope_ * x;
    case ActivationTag::tanh: return std::tanh(x);
    case ActivationTag::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ActivationTag::softplus:
        // log(1 + e^x) without overflow for large x
        return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    case ActivationTag::arctan: return std::atan(x);
    case ActivationTag::softsign: return x / (1.0 + std::fabs(x));
    case ActivationTag::identity: return x;
    }
    return x;
}

double Activation::lipschitz() const noexcept {
    return tag_ == ActivationTag::leaky_relu ? std::max(1.0, slope_) : 1.0;
}

std::string_view condition_name(Condition c) {
    switch (c) {
    case Condition::activation: return "activation";
    case Condition::bias: return "bias";
    case Condition::presum: return "presum";
    }
    return "presum";
}

}  // namespace nnbisim
