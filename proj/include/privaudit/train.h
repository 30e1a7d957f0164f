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

#ifndef PRIVAUDIT_TRAIN_H_
#define PRIVAUDIT_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privaudit/dataset.h"
#include "privaudit/mlp.h"

namespace privaudit {

inline constexpr double kNoClipping = std::numeric_limits<double>::infinity();

// DP-SGD mechanism parameters. Per-example gradients are clipped to L2 norm
// clip_norm and Gaussian noise with stddev noise_multiplier * clip_norm is
// added to their sum. clip_norm may be kNoClipping only when no noise is
// added.
struct DpParams {
  double clip_norm = 1.0;
  double noise_multiplier = 1.0;
  double delta = 1e-5;
};

struct TrainConfig {
  double learning_rate = 0.1;
  size_t epochs = 1;
  size_t batch_size = 1;
  double l2_coefficient = 0.0;
  uint64_t seed = 0;
  std::optional<DpParams> dp;
};

absl::Status ValidateTrainConfig(const TrainConfig& config);

// Mean cross-entropy and accuracy on the full training set after each epoch.
struct TrainHistory {
  std::vector<double> loss;
  std::vector<double> accuracy;
};

struct TrainResult {
  MlpModel model;
  TrainHistory history;
  // epochs * ceil(n / batch_size); the final partial batch counts.
  size_t steps_taken = 0;
};

// Mini-batch SGD on the given records. Each epoch visits the records in a
// fresh permutation drawn from the config seed. `config.dp` must be empty.
absl::StatusOr<TrainResult> TrainSgd(MlpModel model, const LabeledDataset& data,
                                     const TrainConfig& config);

// Called once per example per step with that example's gradient after
// clipping (before noise). Only used for instrumentation; when set, the
// trainer materializes every per-example gradient.
using ClippedGradientObserver =
    std::function<void(size_t step, size_t example, const Gradients& clipped)>;

// DP-SGD: per-example clipping, Gaussian noise on the clipped sum, division by
// the batch size, then an SGD step. Batches are drawn exactly as in TrainSgd,
// so with noise_multiplier 0 and kNoClipping the result is bit-identical to
// TrainSgd with the same seed.
absl::StatusOr<TrainResult> TrainDpSgd(
    MlpModel model, const LabeledDataset& data, const TrainConfig& config,
    const ClippedGradientObserver& observer = nullptr);

// TrainDpSgd when config.dp is set, TrainSgd otherwise.
absl::StatusOr<TrainResult> Train(MlpModel model, const LabeledDataset& data,
                                  const TrainConfig& config);

struct Evaluation {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

// Argmax accuracy (ties go to the lowest class index) and mean cross-entropy
// without regularization.
absl::StatusOr<Evaluation> Evaluate(const MlpModel& model,
                                    const LabeledDataset& data);

struct GeneralizationGap {
  double loss_gap = 0.0;      // test loss - train loss
  double accuracy_gap = 0.0;  // train accuracy - test accuracy
};

absl::StatusOr<GeneralizationGap> ComputeGeneralizationGap(
    const MlpModel& model, const LabeledDataset& train,
    const LabeledDataset& test);

}  // namespace privaudit

#endif  // PRIVAUDIT_TRAIN_H_
