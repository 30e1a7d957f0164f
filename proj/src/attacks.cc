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

#include "privaudit/attacks.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "privaudit/errors.h"
#include "privaudit/kernels.h"
#include "privaudit/rng.h"

namespace privaudit {
namespace {

// Seed streams. Shadow k draws everything from DeriveSeed(cfg.seed, k); the
// attack-level streams sit far above any realistic shadow count.
constexpr uint64_t kShadowSplitStream = 0;
constexpr uint64_t kShadowInitStream = 1;
constexpr uint64_t kShadowTrainStream = 2;
constexpr uint64_t kDownsampleStream = 1u << 20;
constexpr uint64_t kClassifierInitStream = (1u << 20) + 1;

struct AuditedRecord {
  size_t id;
  bool is_member;
};

// member_idx and nonmember_idx merged in ascending record id order.
std::vector<AuditedRecord> AuditedRecords(const AuditSplit& split) {
  std::vector<AuditedRecord> out;
  out.reserve(split.member_idx.size() + split.nonmember_idx.size());
  for (size_t id : split.member_idx) out.push_back({id, true});
  for (size_t id : split.nonmember_idx) out.push_back({id, false});
  std::sort(out.begin(), out.end(),
            [](const AuditedRecord& a, const AuditedRecord& b) {
              return a.id < b.id;
            });
  return out;
}

absl::Status CheckModelMatchesData(const MlpModel& model,
                                   const LabeledDataset& dataset) {
  if (model.input_size() != dataset.num_features()) {
    return ShapeMismatch("model expects ", model.input_size(),
                         " features, dataset has ", dataset.num_features());
  }
  if (model.num_classes() != static_cast<size_t>(dataset.num_classes)) {
    return ShapeMismatch("model has ", model.num_classes(),
                         " outputs, dataset has ", dataset.num_classes,
                         " classes");
  }
  return absl::OkStatus();
}

ShadowConfig WithDefaultLayers(ShadowConfig cfg, const MlpModel& target) {
  if (cfg.shadow_model_layers.empty()) {
    cfg.shadow_model_layers = target.layer_sizes;
  }
  return cfg;
}

// Column-wise standardization fitted on the attack training set and reused
// for the target's features.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> inv_sd;

  static FeatureScaler Fit(const Matrix& x) {
    FeatureScaler s;
    const double n = static_cast<double>(x.rows());
    s.mean.assign(x.cols(), 0.0);
    s.inv_sd.assign(x.cols(), 1.0);
    for (size_t j = 0; j < x.cols(); ++j) {
      for (size_t i = 0; i < x.rows(); ++i) s.mean[j] += x(i, j);
      s.mean[j] /= n;
      double var = 0.0;
      for (size_t i = 0; i < x.rows(); ++i) {
        var += (x(i, j) - s.mean[j]) * (x(i, j) - s.mean[j]);
      }
      const double sd = std::sqrt(var / n);
      if (sd > 0.0) s.inv_sd[j] = 1.0 / sd;
    }
    return s;
  }

  void Apply(std::span<double> row) const {
    for (size_t j = 0; j < row.size(); ++j) {
      row[j] = (row[j] - mean[j]) * inv_sd[j];
    }
  }
};

// Trains the attack classifier on shadow-derived data and scores the target's
// audited records with its membership probability.
absl::StatusOr<std::vector<AttackRecord>> RunShadowPipeline(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split, const ShadowConfig& cfg,
    const std::vector<ShadowModel>& shadows, const LabeledDataset& population,
    const AttackFeatureFn& features, const std::string& attack_name) {
  PRIVAUDIT_ASSIGN_OR_RETURN(
      LabeledDataset attack_data,
      BuildAttackDataset(shadows, population,
                         DeriveSeed(cfg.seed, kDownsampleStream), features));
  const FeatureScaler scaler = FeatureScaler::Fit(attack_data.features);
  for (size_t i = 0; i < attack_data.size(); ++i) {
    scaler.Apply(attack_data.features.row(i));
  }

  const size_t dims[2] = {attack_data.num_features(), 2};
  PRIVAUDIT_ASSIGN_OR_RETURN(
      MlpModel classifier,
      InitMlp(dims, DeriveSeed(cfg.seed, kClassifierInitStream)));
  PRIVAUDIT_ASSIGN_OR_RETURN(
      TrainResult trained,
      Train(std::move(classifier), attack_data, cfg.attack_train_config));

  const std::vector<AuditedRecord> audited = AuditedRecords(split);
  Matrix target_features(audited.size(), attack_data.num_features());
  std::vector<absl::Status> errors(audited.size());
  const int64_t n = static_cast<int64_t>(audited.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (int64_t k = 0; k < n; ++k) {
    const size_t id = audited[k].id;
    absl::StatusOr<std::vector<double>> f =
        features(target, dataset.features.row(id), dataset.labels[id]);
    if (!f.ok()) {
      errors[k] = f.status();
      continue;
    }
    std::span<double> row = target_features.row(k);
    std::copy(f->begin(), f->end(), row.begin());
    scaler.Apply(row);
  }
  for (const absl::Status& st : errors) PRIVAUDIT_RETURN_IF_ERROR(st);

  PRIVAUDIT_ASSIGN_OR_RETURN(const Matrix probs,
                             Forward(trained.model, target_features));
  std::vector<AttackRecord> out;
  out.reserve(audited.size());
  for (size_t k = 0; k < audited.size(); ++k) {
    out.push_back({audited[k].id, audited[k].is_member, probs(k, 1),
                   dataset.labels[audited[k].id], attack_name});
  }
  return out;
}

absl::Status CheckWhiteboxArchitecture(const ShadowConfig& cfg,
                                       const MlpModel& target) {
  if (cfg.shadow_model_layers != target.layer_sizes) {
    return ArchitectureMismatch(
        "white-box shadows must share the target's layer sizes");
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateShadowConfig(const ShadowConfig& config) {
  if (config.n_shadows < 2) {
    return InvalidArgument("need at least 2 shadow models, got ",
                           config.n_shadows);
  }
  if (!(config.shadow_train_fraction > 0.0 &&
        config.shadow_train_fraction < 1.0)) {
    return InvalidArgument("shadow_train_fraction must lie in (0, 1)");
  }
  if (!config.shadow_model_layers.empty() &&
      config.shadow_model_layers.size() < 2) {
    return InvalidArgument("shadow_model_layers needs input and output sizes");
  }
  PRIVAUDIT_RETURN_IF_ERROR(ValidateTrainConfig(config.shadow_train_config));
  PRIVAUDIT_RETURN_IF_ERROR(ValidateTrainConfig(config.attack_train_config));
  return absl::OkStatus();
}

absl::StatusOr<std::vector<AttackRecord>> PopulationLossAttack(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split) {
  PRIVAUDIT_RETURN_IF_ERROR(ValidateSplit(split, dataset.size()));
  const std::vector<AuditedRecord> audited = AuditedRecords(split);
  std::vector<size_t> ids;
  ids.reserve(audited.size());
  for (const AuditedRecord& r : audited) ids.push_back(r.id);
  const LabeledDataset records = Subset(dataset, ids);
  PRIVAUDIT_ASSIGN_OR_RETURN(
      const std::vector<double> losses,
      PerExampleLosses(target, records.features, records.labels));
  std::vector<AttackRecord> out;
  out.reserve(audited.size());
  for (size_t k = 0; k < audited.size(); ++k) {
    out.push_back({audited[k].id, audited[k].is_member, -losses[k],
                   records.labels[k], kPopulationLossAttack});
  }
  return out;
}

absl::StatusOr<std::vector<ShadowModel>> TrainShadowModels(
    const LabeledDataset& population, const ShadowConfig& cfg) {
  PRIVAUDIT_RETURN_IF_ERROR(ValidateShadowConfig(cfg));
  if (cfg.shadow_model_layers.size() < 2) {
    return InvalidArgument("shadow_model_layers must be set");
  }
  const size_t n = population.size();
  const size_t n_in = static_cast<size_t>(
      std::floor(cfg.shadow_train_fraction * static_cast<double>(n)));
  if (n_in < kMinShadowSplitSize || n - n_in < kMinShadowSplitSize) {
    return InsufficientPopulation(
        "population of ", n, " at fraction ", cfg.shadow_train_fraction,
        " leaves fewer than ", kMinShadowSplitSize,
        " records on one side of a shadow split");
  }

  std::vector<absl::StatusOr<ShadowModel>> results(
      cfg.n_shadows, absl::UnknownError("not run"));
  const int64_t count = static_cast<int64_t>(cfg.n_shadows);
#pragma omp parallel for schedule(dynamic, 1)
  for (int64_t k = 0; k < count; ++k) {
    const uint64_t shadow_seed = DeriveSeed(cfg.seed, static_cast<uint64_t>(k));
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(DeriveSeed(shadow_seed, kShadowSplitStream));
    rng.Shuffle(order);
    ShadowModel shadow;
    shadow.in_idx.assign(order.begin(), order.begin() + n_in);
    shadow.out_idx.assign(order.begin() + n_in, order.end());
    std::sort(shadow.in_idx.begin(), shadow.in_idx.end());
    std::sort(shadow.out_idx.begin(), shadow.out_idx.end());

    absl::StatusOr<MlpModel> init =
        InitMlp(cfg.shadow_model_layers,
                DeriveSeed(shadow_seed, kShadowInitStream));
    if (!init.ok()) {
      results[k] = init.status();
      continue;
    }
    TrainConfig train_cfg = cfg.shadow_train_config;
    train_cfg.seed = DeriveSeed(shadow_seed, kShadowTrainStream);
    absl::StatusOr<TrainResult> trained =
        Train(*std::move(init), Subset(population, shadow.in_idx), train_cfg);
    if (!trained.ok()) {
      results[k] = trained.status();
      continue;
    }
    shadow.model = std::move(trained->model);
    results[k] = std::move(shadow);
  }

  std::vector<ShadowModel> shadows;
  shadows.reserve(results.size());
  for (absl::StatusOr<ShadowModel>& r : results) {
    if (!r.ok()) return r.status();
    shadows.push_back(*std::move(r));
  }
  return shadows;
}

absl::StatusOr<std::vector<double>> BlackboxFeatures(
    const MlpModel& model, std::span<const double> record, int label) {
  Matrix row(1, record.size());
  std::copy(record.begin(), record.end(), row.values().begin());
  PRIVAUDIT_ASSIGN_OR_RETURN(const Matrix probs, Forward(model, row));
  const size_t classes = model.num_classes();
  if (label < 0 || static_cast<size_t>(label) >= classes) {
    return InvalidLabel("label ", label, " outside [0, ", classes, ")");
  }
  std::vector<double> out(2 * classes, 0.0);
  const std::span<const double> p = probs.row(0);
  std::copy(p.begin(), p.end(), out.begin());
  std::sort(out.begin(), out.begin() + classes, std::greater<>());
  out[classes + label] = 1.0;
  return out;
}

absl::StatusOr<std::vector<double>> WhiteboxFeatures(
    const MlpModel& model, std::span<const double> record, int label) {
  Matrix row(1, record.size());
  std::copy(record.begin(), record.end(), row.values().begin());
  const int labels[1] = {label};
  PRIVAUDIT_RETURN_IF_ERROR(internal::CheckBatch(model, row, labels));
  const internal::ForwardPass pass = internal::RunForward(model, row);
  const double loss =
      kernels::LogSumExpRows(pass.logits)[0] - pass.logits(0, label);
  PRIVAUDIT_ASSIGN_OR_RETURN(const Gradients grads,
                             PerExampleGradient(model, record, label));
  Matrix probs = pass.logits;
  kernels::SoftmaxRowsInPlace(probs);
  const std::span<const double> p = probs.row(0);

  const size_t classes = model.num_classes();
  std::vector<double> out;
  out.reserve(1 + model.num_layers() + 2 + classes);
  out.push_back(loss);
  for (const Matrix& g : grads.weights) {
    double sq = 0.0;
    for (double v : g.values()) sq += v * v;
    out.push_back(std::sqrt(sq));
  }
  out.push_back(p[label]);
  out.push_back(*std::max_element(p.begin(), p.end()));
  for (size_t c = 0; c < classes; ++c) {
    out.push_back(c == static_cast<size_t>(label) ? 1.0 : 0.0);
  }
  return out;
}

absl::StatusOr<std::vector<double>> ExtractWhiteboxFeatures(
    const MlpModel& target, const LabeledDataset& dataset, size_t record_id) {
  if (record_id >= dataset.size()) {
    return InvalidArgument("record_id ", record_id, " out of range for ",
                           dataset.size(), " records");
  }
  return WhiteboxFeatures(target, dataset.features.row(record_id),
                          dataset.labels[record_id]);
}

absl::StatusOr<LabeledDataset> BuildAttackDataset(
    const std::vector<ShadowModel>& shadows, const LabeledDataset& population,
    uint64_t seed, const AttackFeatureFn& features) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (size_t s = 0; s < shadows.size(); ++s) {
    const ShadowModel& shadow = shadows[s];
    std::vector<size_t> in = shadow.in_idx;
    std::vector<size_t> out = shadow.out_idx;
    Rng rng(DeriveSeed(seed, s));
    const size_t keep = std::min(in.size(), out.size());
    for (std::vector<size_t>* side : {&in, &out}) {
      if (side->size() > keep) {
        rng.Shuffle(*side);
        side->resize(keep);
        std::sort(side->begin(), side->end());
      }
    }
    for (const auto& [side, label] : {std::pair{&in, 1}, std::pair{&out, 0}}) {
      for (size_t id : *side) {
        if (id >= population.size()) {
          return InvalidArgument("shadow index ", id, " out of range");
        }
        PRIVAUDIT_ASSIGN_OR_RETURN(
            std::vector<double> f,
            features(shadow.model, population.features.row(id),
                     population.labels[id]));
        rows.push_back(std::move(f));
        labels.push_back(label);
      }
    }
  }
  if (rows.empty()) return InsufficientPopulation("no attack training records");

  LabeledDataset out;
  out.num_classes = 2;
  out.features = Matrix(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != out.features.cols()) {
      return ShapeMismatch("attack feature lengths differ across shadows");
    }
    std::copy(rows[i].begin(), rows[i].end(), out.features.row(i).begin());
  }
  out.labels = std::move(labels);
  return out;
}

absl::StatusOr<std::vector<AttackRecord>> ShadowAttack(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split, const ShadowConfig& config) {
  PRIVAUDIT_RETURN_IF_ERROR(ValidateSplit(split, dataset.size()));
  PRIVAUDIT_RETURN_IF_ERROR(CheckModelMatchesData(target, dataset));
  const ShadowConfig cfg = WithDefaultLayers(config, target);
  const LabeledDataset population = Subset(dataset, split.population_idx);
  PRIVAUDIT_ASSIGN_OR_RETURN(const std::vector<ShadowModel> shadows,
                             TrainShadowModels(population, cfg));
  return RunShadowPipeline(target, dataset, split, cfg, shadows, population,
                           BlackboxFeatures, kShadowBlackboxAttack);
}

absl::StatusOr<std::vector<AttackRecord>> WhiteboxAttack(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split, const ShadowConfig& config) {
  PRIVAUDIT_RETURN_IF_ERROR(ValidateSplit(split, dataset.size()));
  PRIVAUDIT_RETURN_IF_ERROR(CheckModelMatchesData(target, dataset));
  const ShadowConfig cfg = WithDefaultLayers(config, target);
  PRIVAUDIT_RETURN_IF_ERROR(CheckWhiteboxArchitecture(cfg, target));
  const LabeledDataset population = Subset(dataset, split.population_idx);
  PRIVAUDIT_ASSIGN_OR_RETURN(const std::vector<ShadowModel> shadows,
                             TrainShadowModels(population, cfg));
  return RunShadowPipeline(target, dataset, split, cfg, shadows, population,
                           WhiteboxFeatures, kShadowWhiteboxAttack);
}

absl::StatusOr<std::map<std::string, std::vector<AttackRecord>>> RunAttacks(
    const MlpModel& target, const LabeledDataset& dataset,
    const AuditSplit& split, const AttackSelection& selection,
    const ShadowConfig& config) {
  if (!selection.any()) return InvalidArgument("no attack selected");
  PRIVAUDIT_RETURN_IF_ERROR(ValidateSplit(split, dataset.size()));
  PRIVAUDIT_RETURN_IF_ERROR(CheckModelMatchesData(target, dataset));
  std::map<std::string, std::vector<AttackRecord>> out;
  if (selection.population_loss) {
    PRIVAUDIT_ASSIGN_OR_RETURN(out[kPopulationLossAttack],
                               PopulationLossAttack(target, dataset, split));
  }
  if (!selection.shadow_blackbox && !selection.shadow_whitebox) return out;

  // Both shadow attacks would train identical shadows; train them once.
  const ShadowConfig cfg = WithDefaultLayers(config, target);
  if (selection.shadow_whitebox) {
    PRIVAUDIT_RETURN_IF_ERROR(CheckWhiteboxArchitecture(cfg, target));
  }
  const LabeledDataset population = Subset(dataset, split.population_idx);
  PRIVAUDIT_ASSIGN_OR_RETURN(const std::vector<ShadowModel> shadows,
                             TrainShadowModels(population, cfg));
  if (selection.shadow_blackbox) {
    PRIVAUDIT_ASSIGN_OR_RETURN(
        out[kShadowBlackboxAttack],
        RunShadowPipeline(target, dataset, split, cfg, shadows, population,
                          BlackboxFeatures, kShadowBlackboxAttack));
  }
  if (selection.shadow_whitebox) {
    PRIVAUDIT_ASSIGN_OR_RETURN(
        out[kShadowWhiteboxAttack],
        RunShadowPipeline(target, dataset, split, cfg, shadows, population,
                          WhiteboxFeatures, kShadowWhiteboxAttack));
  }
  return out;
}

}  // namespace privaudit
