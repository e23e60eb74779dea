//
// Copyright 2026 The dpcalib Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPCALIB_TOOLS_CLI_H_
#define DPCALIB_TOOLS_CLI_H_

#include <iosfwd>

namespace dpcalib::cli {

// Process exit codes. Stable; scripts depend on them.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
  kBudgetRefused = 3,
  kIoError = 4,
};

// Environment variable naming the default ledger for `query`.
inline constexpr char kLedgerEnvVar[] = "DPCALIB_LEDGER";

// Entry point behind the dpcalib binary. Results go to `out`; diagnostics
// and the effective seed go to `err`.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace dpcalib::cli

#endif  // DPCALIB_TOOLS_CLI_H_
