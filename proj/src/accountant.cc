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

#include "privaudit/accountant.h"

#include <cmath>

#include "privaudit/errors.h"
#include "privaudit/metrics.h"
#include "privaudit/rng.h"

namespace privaudit {

absl::StatusOr<EpsilonReport> EpsilonOf(double sigma, size_t steps,
                                        double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return InvalidArgument("delta must lie in (0, 1), got ", delta);
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    return InvalidArgument("sigma must be finite and nonnegative");
  }
  EpsilonReport report;
  report.delta = delta;
  report.sigma = sigma;
  report.steps = steps;
  if (steps == 0) return report;
  if (sigma == 0.0) {
    return InvalidArgument("sigma = 0 gives no privacy for ", steps, " steps");
  }
  report.rho = static_cast<double>(steps) / (2.0 * sigma * sigma);
  report.epsilon =
      report.rho + 2.0 * std::sqrt(report.rho * std::log(1.0 / delta));
  return report;
}

namespace {

struct SweepPoint {
  absl::StatusOr<TradeoffRow> row = absl::UnknownError("not run");
};

absl::StatusOr<TradeoffRow> RunSweepPoint(const LabeledDataset& dataset,
                                          const AuditSplit& split,
                                          const SweepConfig& config,
                                          double sigma, uint64_t seed) {
  TrainConfig train = config.train;
  train.dp->noise_multiplier = sigma;
  train.seed = DeriveSeed(seed, 1);
  PRIVAUDIT_ASSIGN_OR_RETURN(MlpModel init,
                             InitMlp(config.layer_sizes, DeriveSeed(seed, 0)));
  const LabeledDataset members = Subset(dataset, split.member_idx);
  const LabeledDataset nonmembers = Subset(dataset, split.nonmember_idx);
  PRIVAUDIT_ASSIGN_OR_RETURN(TrainResult trained,
                             TrainDpSgd(std::move(init), members, train));

  TradeoffRow row;
  row.sigma = sigma;
  PRIVAUDIT_ASSIGN_OR_RETURN(
      const EpsilonReport eps,
      EpsilonOf(sigma, trained.steps_taken, train.dp->delta));
  row.epsilon = eps.epsilon;
  PRIVAUDIT_ASSIGN_OR_RETURN(const Evaluation test,
                             Evaluate(trained.model, nonmembers));
  row.test_accuracy = test.accuracy;
  PRIVAUDIT_ASSIGN_OR_RETURN(
      const GeneralizationGap gap,
      ComputeGeneralizationGap(trained.model, members, nonmembers));
  row.loss_gap = gap.loss_gap;

  ShadowConfig shadow = config.shadow;
  shadow.seed = DeriveSeed(seed, 2);
  PRIVAUDIT_ASSIGN_OR_RETURN(
      const auto attacks,
      RunAttacks(trained.model, dataset, split, config.attacks, shadow));
  for (const auto& [name, records] : attacks) {
    PRIVAUDIT_ASSIGN_OR_RETURN(row.attack_auc[name], Auc(records));
  }
  return row;
}

}  // namespace

absl::StatusOr<std::vector<TradeoffRow>> SweepTradeoff(
    const LabeledDataset& dataset, const AuditSplit& split,
    const SweepConfig& config, const std::vector<double>& sigmas) {
  if (sigmas.empty()) return InvalidArgument("no sigmas to sweep");
  for (size_t k = 0; k < sigmas.size(); ++k) {
    if (!(sigmas[k] > 0.0) || !std::isfinite(sigmas[k])) {
      return InvalidArgument("sigmas must be positive and finite");
    }
    if (k > 0 && !(sigmas[k] > sigmas[k - 1])) {
      return InvalidArgument("sigmas must be strictly increasing");
    }
  }
  if (!config.train.dp) {
    return InvalidArgument("sweep needs DP parameters (clip_norm, delta)");
  }
  if (!config.attacks.any()) return InvalidArgument("no attack selected");

  std::vector<SweepPoint> points(sigmas.size());
  const int64_t n = static_cast<int64_t>(sigmas.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int64_t k = 0; k < n; ++k) {
    points[k].row = RunSweepPoint(dataset, split, config, sigmas[k],
                                  DeriveSeed(config.seed, k));
  }
  std::vector<TradeoffRow> rows;
  rows.reserve(points.size());
  for (SweepPoint& p : points) {
    if (!p.row.ok()) return p.row.status();
    rows.push_back(*std::move(p.row));
  }
  return rows;
}

}  // namespace privaudit
