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

#include <ostream>

namespace nnbisim::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,  ///< check failed, precondition or validation error
    kUsage = 2,
    kIo = 3,           ///< unreadable/unwritable file or malformed document
};

/// Runs one command. The JSON report goes to `out`, the human summary
/// (including timings) to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nnbisim::cli
