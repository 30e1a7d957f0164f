//
// Copyright 2026 The privaudit Authors
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

#ifndef PRIVAUDIT_AUDIT_RUNNER_H_
#define PRIVAUDIT_AUDIT_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace privaudit {

// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

struct CliOptions {
  std::filesystem::path config_path;
  std::optional<uint64_t> seed;               // overrides config "seed"
  std::optional<std::filesystem::path> out;  // overrides config "output_dir"
};

// dataset -> split -> target training -> attacks -> metrics -> report files.
// Prints the manifest and headline numbers to `out`; failures print one
// "error:<category>: <message>" line to `err`.
int RunAudit(const CliOptions& options, std::ostream& out, std::ostream& err);

// Privacy-utility sweep over the config's sweep.sigmas; writes sweep.csv into
// the output directory and prints the table.
int RunSweep(const CliOptions& options, std::ostream& out, std::ostream& err);

// Parses and validates the config without running anything.
int RunValidate(const CliOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace privaudit

#endif  // PRIVAUDIT_AUDIT_RUNNER_H_
