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

// Command-line entry point: privaudit {audit,sweep,validate} --config <path>.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "privaudit/audit_runner.h"

int main(int argc, char** argv) {
  CLI::App app{"Membership inference privacy audits for small classifiers"};
  app.require_subcommand(1);

  privaudit::CliOptions options;
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  auto add_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Audit config JSON")->required();
    cmd->add_option("--seed", seed, "Override the master seed");
    cmd->add_option("--out", out, "Override the output directory");
  };
  CLI::App* audit = app.add_subcommand("audit", "Train the target, attack it, "
                                                "and write the privacy report");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run the DP-SGD privacy-utility sweep and write sweep.csv");
  CLI::App* validate =
      app.add_subcommand("validate", "Check a config without running it");
  add_flags(audit);
  add_flags(sweep);
  add_flags(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error:config: " << e.what() << "\n";
    return privaudit::kExitConfigError;
  }

  options.config_path = config;
  options.seed = seed;
  if (out) options.out = *out;
  if (*audit) return privaudit::RunAudit(options, std::cout, std::cerr);
  if (*sweep) return privaudit::RunSweep(options, std::cout, std::cerr);
  return privaudit::RunValidate(options, std::cout, std::cerr);
}
