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

#ifndef PRIVAUDIT_REPORT_H_
#define PRIVAUDIT_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"
#include "privaudit/accountant.h"
#include "privaudit/attack_record.h"
#include "privaudit/metrics.h"
#include "privaudit/train.h"

namespace privaudit {

inline constexpr char kToolVersion[] = "0.1.0";

// Attacks appear in reports in this order regardless of input order.
inline constexpr const char* kCanonicalAttackOrder[] = {
    kPopulationLossAttack, kShadowBlackboxAttack, kShadowWhiteboxAttack};

struct ReportMeta {
  std::string tool_version = kToolVersion;
  std::string prng_version;
  std::string init_scheme;
  std::string timestamp;  // RFC 3339 UTC; ignored by determinism checks.
  std::string config_digest;
  uint64_t seed = 0;
};

struct TargetSummary {
  std::vector<size_t> layer_sizes;
  size_t train_size = 0;
  size_t test_size = 0;
  Evaluation train;
  Evaluation test;
  GeneralizationGap gap;
};

struct MetricsOptions {
  size_t histogram_bins = 10;
  size_t risk_bins = kDefaultRiskBins;
  std::vector<double> fpr_points = {std::begin(kDefaultFprPoints),
                                    std::end(kDefaultFprPoints)};
};

// Every metric the report carries for one attack.
struct AttackBlock {
  std::string attack_name;
  RocCurve roc;
  std::vector<std::pair<double, double>> tpr_at_fpr;  // (fpr target, tpr)
  double membership_advantage = 0.0;
  PerClassRocs per_class;
  ScoreHistograms histograms;
  std::vector<AttackRecord> records;  // ascending record_id
  std::vector<RiskScore> risks;       // parallel to `records`
};

absl::StatusOr<AttackBlock> ComputeAttackBlock(std::vector<AttackRecord> records,
                                               const MetricsOptions& options);

struct PrivacyReport {
  ReportMeta meta;
  TargetSummary target;
  std::vector<AttackBlock> attacks;
  std::optional<EpsilonReport> epsilon;
  std::optional<std::vector<TradeoffRow>> sweep;
};

// Orders attack blocks canonically and checks that they all cover the same
// record ids.
absl::StatusOr<PrivacyReport> BuildReport(
    ReportMeta meta, TargetSummary target, std::vector<AttackBlock> attacks,
    std::optional<EpsilonReport> epsilon = std::nullopt,
    std::optional<std::vector<TradeoffRow>> sweep = std::nullopt);

nlohmann::json ReportToJson(const PrivacyReport& report);

// report.json text; byte-stable for identical reports.
std::string SerializeReport(const PrivacyReport& report);

std::string RocCsv(const RocCurve& curve);
std::string RisksCsv(const AttackBlock& block);
std::string HistogramCsv(const ScoreHistograms& histograms);
std::string SweepCsv(const std::vector<TradeoffRow>& rows);

// Writes report.json, roc_<attack>.csv, risks_<attack>.csv,
// histogram_<attack>.csv and (with a sweep) sweep.csv into `dir`, creating it
// if needed. Returns the written paths relative to `dir`.
absl::StatusOr<std::vector<std::string>> EmitReport(
    const PrivacyReport& report, const std::filesystem::path& dir);

// Current UTC time, e.g. "2026-10-19T12:00:00Z".
std::string Rfc3339Now();

}  // namespace privaudit

#endif  // PRIVAUDIT_REPORT_H_
