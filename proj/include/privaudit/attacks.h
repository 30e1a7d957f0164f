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

#ifndef PRIVAUDIT_ATTACKS_H_
#define PRIVAUDIT_ATTACKS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privaudit/attack_record.h"
#include "privaudit/dataset.h"
#include "privaudit/mlp.h"
#include "privaudit/train.h"

namespace privaudit {

// Each shadow split of the population must leave at least this many records
// on both the "in" and the "out" side.
inline constexpr size_t kMinShadowSplitSize = 2;

struct ShadowConfig {
  size_t n_shadows = 4;
  double shadow_train_fraction = 0.5;
  // Full layer sizes of every shadow model, input and output included.
  std::vector<size_t> shadow_model_layers;
  TrainConfig shadow_train_config;
  // Trains the attack classifier (logistic regression on attack features).
  TrainConfig attack_train_config;
  uint64_t seed = 0;
};

absl::Status ValidateShadowConfig(const ShadowConfig& config);

// Black-box attacker that thresholds the target's loss: score = -loss.
absl::StatusOr<std::vector<AttackRecord>> PopulationLossAttack(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split);

// A shadow model together with its private in/out split. Indices refer to the
// population dataset the shadows were trained on.
struct ShadowModel {
  MlpModel model;
  std::vector<size_t> in_idx;
  std::vector<size_t> out_idx;
};

// Trains cfg.n_shadows models, each on an independent random fraction of
// `population`. Shadows are independent and train in parallel; shadow k uses
// seeds derived from cfg.seed and k only.
absl::StatusOr<std::vector<ShadowModel>> TrainShadowModels(
    const LabeledDataset& population, const ShadowConfig& cfg);

// Maps (model, record, label) to an attack feature vector.
using AttackFeatureFn = std::function<absl::StatusOr<std::vector<double>>(
    const MlpModel& model, std::span<const double> record, int label)>;

// Prediction probabilities sorted descending, followed by the one-hot true
// class. Length 2 * C.
absl::StatusOr<std::vector<double>> BlackboxFeatures(
    const MlpModel& model, std::span<const double> record, int label);

// [loss] ++ [|grad W_k| for each layer k] ++ [p(true class), max p] ++
// one-hot(true class). Length 1 + L + 2 + C.
absl::StatusOr<std::vector<double>> WhiteboxFeatures(
    const MlpModel& model, std::span<const double> record, int label);

absl::StatusOr<std::vector<double>> ExtractWhiteboxFeatures(
    const MlpModel& target, const LabeledDataset& dataset, size_t record_id);

// Labeled attack training set built from the shadows: label 1 for a shadow's
// "in" records, 0 for its "out" records. Per shadow, the larger side is
// downsampled (seeded by `seed` and the shadow index) to the size of the
// smaller one.
absl::StatusOr<LabeledDataset> BuildAttackDataset(
    const std::vector<ShadowModel>& shadows, const LabeledDataset& population,
    uint64_t seed, const AttackFeatureFn& features = BlackboxFeatures);

// Shadow-model attack on the target's prediction vectors. The attack
// classifier only ever sees population records; the target's members are
// touched solely when scoring.
absl::StatusOr<std::vector<AttackRecord>> ShadowAttack(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split, const ShadowConfig& cfg);

// Same pipeline as ShadowAttack with white-box gradient features. Shadows must
// share the target's architecture.
absl::StatusOr<std::vector<AttackRecord>> WhiteboxAttack(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split, const ShadowConfig& cfg);

struct AttackSelection {
  bool population_loss = true;
  bool shadow_blackbox = false;
  bool shadow_whitebox = false;

  bool any() const {
    return population_loss || shadow_blackbox || shadow_whitebox;
  }
};

// Runs the selected attacks, keyed by attack name.
absl::StatusOr<std::map<std::string, std::vector<AttackRecord>>> RunAttacks(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split, const AttackSelection& selection,
    const ShadowConfig& cfg);

}  // namespace privaudit

#endif  // PRIVAUDIT_ATTACKS_H_
