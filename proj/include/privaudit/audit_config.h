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

#ifndef PRIVAUDIT_AUDIT_CONFIG_H_
#define PRIVAUDIT_AUDIT_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privaudit/attacks.h"
#include "privaudit/dataset.h"
#include "privaudit/report.h"
#include "privaudit/train.h"

namespace privaudit {

struct CsvSource {
  std::filesystem::path path;
  std::string label_column = "label";
  bool standardize = false;
};

struct SweepSettings {
  std::vector<double> sigmas;
  double clip_norm = 1.0;
  double delta = 1e-5;
};

// Everything one audit needs. Every random stream is derived from `seed`.
// The JSON layout is documented in the README.
struct AuditConfig {
  uint64_t seed = 0;
  int threads = 0;  // 0 leaves the OpenMP default.
  std::optional<SyntheticParams> synthetic;
  std::optional<CsvSource> csv;
  size_t n_members = 0;
  size_t n_nonmembers = 0;
  std::vector<size_t> hidden_layers;
  TrainConfig target_train;
  AttackSelection attacks;
  // shadow.shadow_model_layers stays empty here; the runner fills it from
  // shadow_hidden_layers (or the target's architecture) once the dataset
  // shape is known.
  ShadowConfig shadow;
  std::optional<std::vector<size_t>> shadow_hidden_layers;
  MetricsOptions metrics;
  std::filesystem::path output_dir = "privacy_report";
  std::optional<SweepSettings> sweep;
};

// Stream ids under the master seed.
enum class SeedStream : uint64_t {
  kDataset = 1,
  kSplit = 2,
  kTargetInit = 3,
  kTargetTrain = 4,
  kShadows = 5,
  kSweep = 6,
};

uint64_t StreamSeed(const AuditConfig& config, SeedStream stream);

// Relative paths in the config resolve against `base_dir`.
absl::StatusOr<AuditConfig> ParseAuditConfig(
    const nlohmann::json& json, const std::filesystem::path& base_dir);

absl::StatusOr<AuditConfig> LoadAuditConfig(const std::filesystem::path& path);

// Checks cross-field constraints and that referenced inputs exist.
absl::Status ValidateAuditConfig(const AuditConfig& config);

// Canonical JSON form of a parsed config; its digest identifies the audit.
nlohmann::json AuditConfigToJson(const AuditConfig& config);
std::string ConfigDigest(const AuditConfig& config);

}  // namespace privaudit

#endif  // PRIVAUDIT_AUDIT_CONFIG_H_
