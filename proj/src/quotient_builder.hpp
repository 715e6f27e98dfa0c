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

#include "nnbisim/network.hpp"
#include "nnbisim/partition.hpp"
#include "nnbisim/policy.hpp"

namespace nnbisim::detail {

// Builds the quotient network whose nodes are the blocks of `p`, drawing
// pre-sums, biases and activations per `policy`. Does not check that `p` is a
// (δ-)bisimulation; callers do.
Network build_quotient(const Network& net, const NetPartition& p,
                       const RepresentativePolicy& policy);

}  // namespace nnbisim::detail
