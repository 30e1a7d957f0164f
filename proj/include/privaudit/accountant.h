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

#ifndef PRIVAUDIT_ACCOUNTANT_H_
#define PRIVAUDIT_ACCOUNTANT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privaudit/attacks.h"
#include "privaudit/dataset.h"
#include "privaudit/train.h"

namespace privaudit {

inline constexpr char kZcdpNoSubsampling[] = "zcdp-no-subsampling";

struct EpsilonReport {
  double epsilon = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  size_t steps = 0;
  std::string method = kZcdpNoSubsampling;
};

// (epsilon, delta) bound for `steps` applications of the Gaussian mechanism
// with noise multiplier `sigma`:
//   rho = steps / (2 sigma^2),  epsilon = rho + 2 sqrt(rho ln(1/delta)).
// Clipping makes the sensitivity equal to the clip norm, which cancels
// against the noise scale, so the clip norm does not appear. Subsampling
// amplification is ignored, so the bound is conservative.
absl::StatusOr<EpsilonReport> EpsilonOf(double sigma, size_t steps,
                                        double delta);

struct TradeoffRow {
  double sigma = 0.0;
  double epsilon = 0.0;
  double test_accuracy = 0.0;
  std::map<std::string, double> attack_auc;
  double loss_gap = 0.0;
};

struct SweepConfig {
  // Target architecture; input and output sizes included.
  std::vector<size_t> layer_sizes;
  // Training schedule. dp.clip_norm and dp.delta are used for every sweep
  // point; dp.noise_multiplier is overridden by each sigma.
  TrainConfig train;
  AttackSelection attacks;
  ShadowConfig shadow;
  uint64_t seed = 0;
};

// One DP-SGD training per sigma (ascending), each from independently derived
// seeds: utility on the non-members, the selected attacks' AUCs, the loss gap
// and the epsilon bound. Points are independent and run in parallel; rows come
// back in sigma order.
absl::StatusOr<std::vector<TradeoffRow>> SweepTradeoff(
    const LabeledDataset& dataset, const AuditSplit& split,
    const SweepConfig& config, const std::vector<double>& sigmas);

}  // namespace privaudit

#endif  // PRIVAUDIT_ACCOUNTANT_H_
