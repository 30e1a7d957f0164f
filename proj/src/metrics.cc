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

#include "privaudit/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "privaudit/errors.h"

namespace privaudit {
namespace {

absl::Status CheckScores(std::span<const AttackRecord> records) {
  for (const AttackRecord& r : records) {
    if (!std::isfinite(r.score)) {
      return InvalidArgument("record ", r.record_id, " has non-finite score");
    }
  }
  return absl::OkStatus();
}

size_t BinIndex(double score, double lo, double hi, size_t bins) {
  const double t = (score - lo) / (hi - lo) * static_cast<double>(bins);
  const size_t idx = t <= 0.0 ? 0 : static_cast<size_t>(t);
  return std::min(idx, bins - 1);
}

}  // namespace

absl::StatusOr<RocCurve> ComputeRoc(std::span<const AttackRecord> records) {
  PRIVAUDIT_RETURN_IF_ERROR(CheckScores(records));
  RocCurve curve;
  for (const AttackRecord& r : records) {
    ++(r.is_member ? curve.n_members : curve.n_nonmembers);
  }
  if (curve.n_members == 0 || curve.n_nonmembers == 0) {
    return DegenerateInput("ROC needs at least one member and one non-member (",
                           curve.n_members, " members, ", curve.n_nonmembers,
                           " non-members)");
  }

  std::vector<size_t> order(records.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return records[a].score > records[b].score;
  });

  const double positives = static_cast<double>(curve.n_members);
  const double negatives = static_cast<double>(curve.n_nonmembers);
  curve.points.push_back({0.0, 0.0});
  // Twice the area in units of (1 / P) x (1 / N) cells; integer valued, so the
  // sum is exact and only the final division rounds.
  double twice_area_cells = 0.0;
  size_t tp = 0;
  size_t fp = 0;
  for (size_t k = 0; k < order.size();) {
    const double threshold = records[order[k]].score;
    const size_t prev_tp = tp;
    const size_t prev_fp = fp;
    for (; k < order.size() && records[order[k]].score == threshold; ++k) {
      ++(records[order[k]].is_member ? tp : fp);
    }
    twice_area_cells +=
        static_cast<double>(fp - prev_fp) * static_cast<double>(tp + prev_tp);
    curve.points.push_back({static_cast<double>(fp) / negatives,
                            static_cast<double>(tp) / positives});
  }
  curve.auc = twice_area_cells / (2.0 * positives * negatives);
  return curve;
}

absl::StatusOr<double> Auc(std::span<const AttackRecord> records) {
  PRIVAUDIT_ASSIGN_OR_RETURN(const RocCurve curve, ComputeRoc(records));
  return curve.auc;
}

absl::StatusOr<double> TprAtFpr(const RocCurve& curve, double fpr_target) {
  if (!(fpr_target >= 0.0 && fpr_target <= 1.0)) {
    return InvalidArgument("fpr_target ", fpr_target, " outside [0, 1]");
  }
  double best = 0.0;
  for (const RocPoint& p : curve.points) {
    if (p.fpr <= fpr_target) best = std::max(best, p.tpr);
  }
  return best;
}

double MembershipAdvantage(const RocCurve& curve) {
  double best = -1.0;
  for (const RocPoint& p : curve.points) best = std::max(best, p.tpr - p.fpr);
  return best;
}

absl::StatusOr<double> MembershipAdvantage(
    std::span<const AttackRecord> records) {
  PRIVAUDIT_ASSIGN_OR_RETURN(const RocCurve curve, ComputeRoc(records));
  return MembershipAdvantage(curve);
}

PerClassRocs ComputePerClassRocs(std::span<const AttackRecord> records) {
  std::map<int, std::vector<AttackRecord>> by_class;
  for (const AttackRecord& r : records) by_class[r.class_label].push_back(r);
  PerClassRocs out;
  for (const auto& [label, group] : by_class) {
    absl::StatusOr<RocCurve> curve = ComputeRoc(group);
    if (curve.ok()) {
      out.curves.emplace(label, *std::move(curve));
    } else {
      out.skipped.push_back(label);
    }
  }
  return out;
}

absl::StatusOr<std::vector<RiskScore>> ComputeRiskScores(
    std::span<const AttackRecord> records, size_t bins) {
  if (bins == 0) return InvalidArgument("risk score bins must be positive");
  PRIVAUDIT_RETURN_IF_ERROR(CheckScores(records));
  std::vector<RiskScore> out;
  out.reserve(records.size());
  if (records.empty()) return out;

  const auto [min_it, max_it] = std::minmax_element(
      records.begin(), records.end(),
      [](const AttackRecord& a, const AttackRecord& b) {
        return a.score < b.score;
      });
  const double lo = min_it->score;
  const double hi = max_it->score;
  if (lo == hi) {
    for (const AttackRecord& r : records) {
      out.push_back({r.record_id, 0.5, r.attack_name});
    }
    return out;
  }

  std::vector<size_t> members(bins, 0);
  std::vector<size_t> nonmembers(bins, 0);
  for (const AttackRecord& r : records) {
    ++(r.is_member ? members : nonmembers)[BinIndex(r.score, lo, hi, bins)];
  }
  for (const AttackRecord& r : records) {
    const size_t b = BinIndex(r.score, lo, hi, bins);
    const double m = static_cast<double>(members[b]);
    const double n = static_cast<double>(nonmembers[b]);
    out.push_back({r.record_id, (m + 1.0) / (m + n + 2.0), r.attack_name});
  }
  return out;
}

absl::StatusOr<ScoreHistograms> ComputeScoreHistograms(
    std::span<const AttackRecord> records, size_t bins) {
  if (bins == 0) return InvalidArgument("histogram bins must be positive");
  if (records.empty()) return DegenerateInput("histogram of no records");
  PRIVAUDIT_RETURN_IF_ERROR(CheckScores(records));
  const auto [min_it, max_it] = std::minmax_element(
      records.begin(), records.end(),
      [](const AttackRecord& a, const AttackRecord& b) {
        return a.score < b.score;
      });
  double lo = min_it->score;
  double hi = max_it->score;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }

  ScoreHistograms h;
  h.member_counts.assign(bins, 0);
  h.nonmember_counts.assign(bins, 0);
  h.edges.resize(bins + 1);
  for (size_t k = 0; k <= bins; ++k) {
    h.edges[k] = lo + (hi - lo) * static_cast<double>(k) /
                          static_cast<double>(bins);
  }
  h.edges.back() = hi;
  for (const AttackRecord& r : records) {
    const size_t b = BinIndex(r.score, lo, hi, bins);
    ++(r.is_member ? h.member_counts : h.nonmember_counts)[b];
  }
  return h;
}

}  // namespace privaudit
