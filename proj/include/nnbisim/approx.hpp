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
#include <vector>

#include "nnbisim/bisim.hpp"
#include "nnbisim/network.hpp"
#include "nnbisim/partition.hpp"
#include "nnbisim/policy.hpp"

namespace nnbisim {

struct DeltaReport {
    bool ok = true;
    /// Largest within-block bias spread (max - min) over all layers.
    double max_bias_gap = 0.0;
    /// Largest within-block pre-sum spread over all layers and previous blocks.
    double max_presum_gap = 0.0;
    /// First violation in scan order, when !ok.
    std::optional<Violation> witness;
};

/// Checks whether `p` is a δ-bisimulation: within every block activations
/// match exactly and every bias / pre-sum spread is at most `delta`
/// (closed inequality). Gaps are reported even when the check passes.
/// Throws ContractError for delta < 0 or a shape mismatch.
DeltaReport check_delta_bisimulation(const Network& net, const NetPartition& p, double delta);

/// One member of the δ-quotient set, chosen by `policy`.
/// Throws PreconditionError if `p` is not a δ-bisimulation.
Network quotient_delta(const Network& net, const NetPartition& p, double delta,
                       const RepresentativePolicy& policy);

/// Every distinct network of the δ-quotient set: each quotient weight and
/// bias independently takes the value of any member of its target block.
/// Throws ContractError when the set would exceed `limit` networks.
std::vector<Network> enumerate_delta_quotients(const Network& net, const NetPartition& p,
                                               double delta, std::size_t limit = 4096);

/// Block valuation taking the value of each block's smallest member; lies in
/// the eps-abstraction of `v` whenever `v` is eps-consistent.
Valuation pick_abstraction(const Valuation& v, const LayerPartition& p);

/// True iff |vhat(block) - v(s)| <= eps for every block and every member s.
bool eps_abstraction_contains(const Valuation& v, const LayerPartition& p, double eps,
                              const Valuation& vhat);

/// is_eps_consistent(v, p, 2 * eps).
bool two_eps_consistency(const Valuation& v, const LayerPartition& p, double eps);

/// One-layer deviation bound a_i * eps + b_i with
/// a_i = L(A_i) |S_{i-1}| ||W_i||_inf and b_i = L(A_i) (|P_{i-1}| v_inf + 1) delta,
/// where v_inf bounds the infinity norm of both the concrete and the
/// abstract layer input.
double one_step_error(const Network& net, const NetPartition& p, std::size_t layer, double eps,
                      double delta, double v_inf);

/// How the norm of intermediate valuations is bounded.
enum class BoundMode {
    /// Uniform constants: ||v_i|| <= offset + max(1, L(N)) * v0_inf, where
    /// offset is the largest norm of an intermediate valuation at input zero.
    lipschitz,
    /// Per-layer constants from interval propagation over the input box.
    interval,
};

struct LayerErrorTerm {
    std::size_t layer = 0;
    double a = 0.0;          ///< per-layer factor a_i
    double b = 0.0;          ///< per-layer offset b_i
    double state_bound = 0.0;  ///< bound used for the input norm of this layer
    double eps_prime = 0.0;  ///< deviation bound at this layer
    double eps = 0.0;        ///< consistency bound at this layer (2 * eps_prime)
};

struct ErrorBound {
    BoundMode mode = BoundMode::lipschitz;
    double a = 0.0;  ///< uniform factor L(A) max|S_i| max||W_i||_inf
    double b = 0.0;  ///< uniform offset L(A) (max|P_i| V + 1) delta
    double lipschitz = 0.0;    ///< L(N)
    double state_bound = 0.0;  ///< V, the uniform bound on intermediate norms
    /// Entry 0 is the base case; entry i covers layer i.
    std::vector<LayerErrorTerm> per_layer;
    /// Bound on the block-wise output deviation (eps_prime of layer k).
    double eps_final = 0.0;
};

/// Global deviation bound between `net` and every member of its δ-quotient
/// set, for inputs with ||v||_inf <= v0_inf and abstract inputs within eps0.
///
/// Runs eps'_0 = eps_0 = eps0, eps'_i = a eps_{i-1} + b, eps_i = 2 eps'_i and
/// reports eps'_k. In interval mode the per-layer a_i, b_i replace a, b.
/// Throws ContractError for negative inputs and PreconditionError when `p`
/// is not a δ-bisimulation.
ErrorBound global_error_bound(const Network& net, const NetPartition& p, double delta, double eps0,
                              double v0_inf, BoundMode mode = BoundMode::lipschitz);

/// Closed form of the recurrence with eps0 = 0:
/// ((2a)^k - 1) b / (2a - 1), or k b when 2a = 1.
double closed_form_bound(double a, double b, std::size_t k);

/// Greedy δ-partition: layers in ascending order, nodes in ascending order,
/// each node joining the first block it keeps within delta (activation equal,
/// bias and pre-sum spreads <= delta). With preserve_io the input and output
/// layers stay singletons; otherwise the input layer is a single block.
/// The result always passes check_delta_bisimulation; it is not optimal.
NetPartition greedy_delta_partition(const Network& net, double delta, bool preserve_io);

}  // namespace nnbisim
