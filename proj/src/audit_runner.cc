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

#include "privaudit/audit_runner.h"

#include <cstdio>
#include <string>

#include <omp.h>

#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "privaudit/accountant.h"
#include "privaudit/attacks.h"
#include "privaudit/audit_config.h"
#include "privaudit/errors.h"
#include "privaudit/file_util.h"
#include "privaudit/format.h"
#include "privaudit/model_io.h"
#include "privaudit/report.h"
#include "privaudit/rng.h"

namespace privaudit {
namespace {

void PrintConfigError(std::ostream& err, const absl::Status& status) {
  err << "error:config: " << status.message() << "\n";
}

void PrintRuntimeError(std::ostream& err, const absl::Status& status) {
  // The message already starts with the kind tag.
  absl::string_view message = status.message();
  const absl::string_view kind = ErrorKind(status);
  if (absl::ConsumePrefix(&message, kind)) absl::ConsumePrefix(&message, ": ");
  err << "error:" << kind << ": " << message << "\n";
}

absl::StatusOr<AuditConfig> PrepareConfig(const CliOptions& options) {
  PRIVAUDIT_ASSIGN_OR_RETURN(AuditConfig config,
                             LoadAuditConfig(options.config_path));
  if (options.seed) config.seed = *options.seed;
  if (options.out) config.output_dir = *options.out;
  PRIVAUDIT_RETURN_IF_ERROR(ValidateAuditConfig(config));
  if (config.threads > 0) omp_set_num_threads(config.threads);
  return config;
}

absl::StatusOr<LabeledDataset> LoadDataset(const AuditConfig& config) {
  if (config.synthetic) {
    SyntheticParams params = *config.synthetic;
    params.seed = StreamSeed(config, SeedStream::kDataset);
    return GenerateSynthetic(params);
  }
  PRIVAUDIT_ASSIGN_OR_RETURN(
      LabeledDataset data,
      LoadCsv(config.csv->path, config.csv->label_column));
  PRIVAUDIT_RETURN_IF_ERROR(ValidateDataset(data));
  if (config.csv->standardize) data = Standardize(data);
  return data;
}

std::vector<size_t> LayerSizes(const LabeledDataset& data,
                               const std::vector<size_t>& hidden) {
  std::vector<size_t> sizes = {data.num_features()};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(static_cast<size_t>(data.num_classes));
  return sizes;
}

ShadowConfig ResolveShadowConfig(const AuditConfig& config,
                                 const LabeledDataset& data) {
  ShadowConfig shadow = config.shadow;
  shadow.shadow_model_layers = LayerSizes(
      data, config.shadow_hidden_layers.value_or(config.hidden_layers));
  shadow.seed = StreamSeed(config, SeedStream::kShadows);
  return shadow;
}

struct PreparedData {
  LabeledDataset dataset;
  AuditSplit split;
};

absl::StatusOr<PreparedData> PrepareData(const AuditConfig& config) {
  PreparedData p;
  PRIVAUDIT_ASSIGN_OR_RETURN(p.dataset, LoadDataset(config));
  PRIVAUDIT_ASSIGN_OR_RETURN(
      p.split, MakeAuditSplit(p.dataset, config.n_members, config.n_nonmembers,
                              StreamSeed(config, SeedStream::kSplit)));
  return p;
}

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

absl::Status Audit(const AuditConfig& config, std::ostream& out) {
  PRIVAUDIT_ASSIGN_OR_RETURN(const PreparedData data, PrepareData(config));
  const LabeledDataset members = Subset(data.dataset, data.split.member_idx);
  const LabeledDataset nonmembers =
      Subset(data.dataset, data.split.nonmember_idx);

  const std::vector<size_t> layers =
      LayerSizes(data.dataset, config.hidden_layers);
  PRIVAUDIT_ASSIGN_OR_RETURN(
      MlpModel init,
      InitMlp(layers, StreamSeed(config, SeedStream::kTargetInit)));
  TrainConfig train = config.target_train;
  train.seed = StreamSeed(config, SeedStream::kTargetTrain);
  PRIVAUDIT_ASSIGN_OR_RETURN(const TrainResult trained,
                             Train(std::move(init), members, train));

  TargetSummary target;
  target.layer_sizes = layers;
  target.train_size = members.size();
  target.test_size = nonmembers.size();
  PRIVAUDIT_ASSIGN_OR_RETURN(target.train, Evaluate(trained.model, members));
  PRIVAUDIT_ASSIGN_OR_RETURN(target.test, Evaluate(trained.model, nonmembers));
  PRIVAUDIT_ASSIGN_OR_RETURN(
      target.gap,
      ComputeGeneralizationGap(trained.model, members, nonmembers));

  PRIVAUDIT_ASSIGN_OR_RETURN(
      auto attack_records,
      RunAttacks(trained.model, data.dataset, data.split, config.attacks,
                 ResolveShadowConfig(config, data.dataset)));
  std::vector<AttackBlock> blocks;
  for (auto& [name, records] : attack_records) {
    PRIVAUDIT_ASSIGN_OR_RETURN(
        AttackBlock block,
        ComputeAttackBlock(std::move(records), config.metrics));
    blocks.push_back(std::move(block));
  }

  std::optional<EpsilonReport> epsilon;
  if (train.dp) {
    PRIVAUDIT_ASSIGN_OR_RETURN(
        epsilon, EpsilonOf(train.dp->noise_multiplier, trained.steps_taken,
                           train.dp->delta));
  }

  ReportMeta meta;
  meta.prng_version = kPrngVersion;
  meta.init_scheme = kInitScheme;
  meta.timestamp = Rfc3339Now();
  meta.config_digest = ConfigDigest(config);
  meta.seed = config.seed;
  PRIVAUDIT_ASSIGN_OR_RETURN(
      const PrivacyReport report,
      BuildReport(std::move(meta), std::move(target), std::move(blocks),
                  epsilon));
  PRIVAUDIT_ASSIGN_OR_RETURN(std::vector<std::string> manifest,
                             EmitReport(report, config.output_dir));

  const nlohmann::json model_meta{
      {"seed", StreamSeed(config, SeedStream::kTargetInit)},
      {"train_seed", train.seed},
      {"config", AuditConfigToJson(config)["target"]},
      {"prng_version", kPrngVersion},
      {"init_scheme", kInitScheme}};
  PRIVAUDIT_RETURN_IF_ERROR(SaveModel(trained.model, model_meta,
                                      config.output_dir / "target_model.json"));
  manifest.push_back("target_model.json");

  out << "wrote " << manifest.size() << " files to "
      << config.output_dir.string() << "\n";
  for (const std::string& f : manifest) {
    out << "  " << (config.output_dir / f).string() << "\n";
  }
  out << "target: train_acc=" << Fixed(report.target.train.accuracy)
      << " test_acc=" << Fixed(report.target.test.accuracy)
      << " loss_gap=" << Fixed(report.target.gap.loss_gap)
      << " acc_gap=" << Fixed(report.target.gap.accuracy_gap) << "\n";
  for (const AttackBlock& block : report.attacks) {
    out << "attack " << block.attack_name << ": auc=" << Fixed(block.roc.auc)
        << " advantage=" << Fixed(block.membership_advantage);
    for (const auto& [fpr, tpr] : block.tpr_at_fpr) {
      out << " tpr@" << fpr << "=" << Fixed(tpr);
    }
    out << "\n";
  }
  if (report.epsilon) {
    out << "epsilon=" << Fixed(report.epsilon->epsilon)
        << " (delta=" << report.epsilon->delta
        << ", steps=" << report.epsilon->steps << ", "
        << report.epsilon->method << ")\n";
  }
  return absl::OkStatus();
}

absl::Status Sweep(const AuditConfig& config, std::ostream& out) {
  PRIVAUDIT_ASSIGN_OR_RETURN(const PreparedData data, PrepareData(config));
  SweepConfig sweep;
  sweep.layer_sizes = LayerSizes(data.dataset, config.hidden_layers);
  sweep.train = config.target_train;
  sweep.train.dp = DpParams{};
  sweep.train.dp->clip_norm = config.sweep->clip_norm;
  sweep.train.dp->delta = config.sweep->delta;
  sweep.attacks = config.attacks;
  sweep.shadow = ResolveShadowConfig(config, data.dataset);
  sweep.seed = StreamSeed(config, SeedStream::kSweep);
  PRIVAUDIT_ASSIGN_OR_RETURN(
      const std::vector<TradeoffRow> rows,
      SweepTradeoff(data.dataset, data.split, sweep, config.sweep->sigmas));

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) return IoError("cannot create ", config.output_dir.string());
  const std::filesystem::path path = config.output_dir / "sweep.csv";
  PRIVAUDIT_RETURN_IF_ERROR(WriteFileAtomically(path, SweepCsv(rows)));

  out << "wrote " << path.string() << "\n";
  out << "sigma      epsilon      test_acc";
  for (const auto& [name, auc] : rows.front().attack_auc) {
    out << "  auc_" << name;
  }
  out << "  loss_gap\n";
  for (const TradeoffRow& row : rows) {
    out << Fixed(row.sigma) << "  " << Fixed(row.epsilon) << "  "
        << Fixed(row.test_accuracy);
    for (const auto& [name, auc] : row.attack_auc) out << "  " << Fixed(auc);
    out << "  " << Fixed(row.loss_gap) << "\n";
  }
  return absl::OkStatus();
}

}  // namespace

int RunAudit(const CliOptions& options, std::ostream& out, std::ostream& err) {
  absl::StatusOr<AuditConfig> config = PrepareConfig(options);
  if (!config.ok()) {
    PrintConfigError(err, config.status());
    return kExitConfigError;
  }
  if (absl::Status st = Audit(*config, out); !st.ok()) {
    PrintRuntimeError(err, st);
    return kExitRuntimeError;
  }
  return kExitOk;
}

int RunSweep(const CliOptions& options, std::ostream& out, std::ostream& err) {
  absl::StatusOr<AuditConfig> config = PrepareConfig(options);
  if (!config.ok()) {
    PrintConfigError(err, config.status());
    return kExitConfigError;
  }
  if (!config->sweep) {
    PrintConfigError(err, InvalidArgument("config has no sweep.sigmas"));
    return kExitConfigError;
  }
  if (absl::Status st = Sweep(*config, out); !st.ok()) {
    PrintRuntimeError(err, st);
    return kExitRuntimeError;
  }
  return kExitOk;
}

int RunValidate(const CliOptions& options, std::ostream& out,
                std::ostream& err) {
  absl::StatusOr<AuditConfig> config = PrepareConfig(options);
  if (!config.ok()) {
    PrintConfigError(err, config.status());
    return kExitConfigError;
  }
  out << "config ok (" << ConfigDigest(*config) << ")\n";
  return kExitOk;
}

}  // namespace privaudit
