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

#ifndef PRIVAUDIT_METRICS_H_
#define PRIVAUDIT_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privaudit/attack_record.h"

namespace privaudit {

inline constexpr size_t kDefaultRiskBins = 10;
inline constexpr double kDefaultFprPoints[] = {0.01, 0.05, 0.1};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

// Points run from (0,0) to (1,1) with both coordinates non-decreasing; `auc`
// is their trapezoidal area.
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
  size_t n_members = 0;
  size_t n_nonmembers = 0;
};

// Sweeps the threshold over the distinct scores in descending order,
// predicting "member" when score >= threshold. Records with equal scores
// change prediction together, so each tie group contributes one point.
absl::StatusOr<RocCurve> ComputeRoc(std::span<const AttackRecord> records);

absl::StatusOr<double> Auc(std::span<const AttackRecord> records);

// Largest TPR among sweep points with FPR <= fpr_target. No interpolation.
absl::StatusOr<double> TprAtFpr(const RocCurve& curve, double fpr_target);

// max over sweep points of TPR - FPR.
absl::StatusOr<double> MembershipAdvantage(
    std::span<const AttackRecord> records);
double MembershipAdvantage(const RocCurve& curve);

struct PerClassRocs {
  std::map<int, RocCurve> curves;
  // Classes lacking either members or non-members, ascending.
  std::vector<int> skipped;
};

PerClassRocs ComputePerClassRocs(std::span<const AttackRecord> records);

struct RiskScore {
  size_t record_id = 0;
  double risk = 0.0;
  std::string attack_name;
};

// Binned posterior estimate of membership. Scores are bucketed into `bins`
// equal-width bins over [min score, max score]; a record in a bin holding m
// members and n non-members gets risk (m + 1) / (m + n + 2). When every score
// is equal the risk is 0.5 for all records. Output order follows the input.
absl::StatusOr<std::vector<RiskScore>> ComputeRiskScores(
    std::span<const AttackRecord> records, size_t bins = kDefaultRiskBins);

struct ScoreHistograms {
  std::vector<size_t> member_counts;
  std::vector<size_t> nonmember_counts;
  std::vector<double> edges;  // bins + 1 shared edges
};

// Equal-width histograms over the pooled score range. A degenerate range
// (all scores equal to s) is widened to [s - 0.5, s + 0.5].
absl::StatusOr<ScoreHistograms> ComputeScoreHistograms(
    std::span<const AttackRecord> records, size_t bins);

}  // namespace privaudit

#endif  // PRIVAUDIT_METRICS_H_
