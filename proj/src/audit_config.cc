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

#include "privaudit/audit_config.h"

#include <cstdio>
#include <set>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "privaudit/errors.h"
#include "privaudit/file_util.h"
#include "privaudit/rng.h"

namespace privaudit {

using nlohmann::json;

uint64_t StreamSeed(const AuditConfig& config, SeedStream stream) {
  return DeriveSeed(config.seed, static_cast<uint64_t>(stream));
}

namespace {

// Reads one JSON object, rejecting keys the schema does not know so that
// typos fail loudly instead of silently falling back to defaults.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where)
      : json_(j), where_(std::move(where)) {}

  absl::Status Check(std::initializer_list<const char*> allowed) const {
    if (!json_.is_object()) return InvalidArgument(where_, " must be an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : json_.items()) {
      if (!keys.count(key)) {
        return InvalidArgument("unknown key '", where_, ".", key, "'");
      }
    }
    return absl::OkStatus();
  }

  bool Has(const char* key) const { return json_.contains(key); }
  const json& Raw(const char* key) const { return json_.at(key); }
  std::string Path(const char* key) const { return where_ + "." + key; }

  template <typename T>
  absl::Status Get(const char* key, T& out, bool required = false) const {
    if (!json_.contains(key)) {
      if (required) return InvalidArgument("missing key '", Path(key), "'");
      return absl::OkStatus();
    }
    try {
      out = json_.at(key).get<T>();
    } catch (const json::exception&) {
      return InvalidArgument("'", Path(key), "' has the wrong type");
    }
    return absl::OkStatus();
  }

 private:
  const json& json_;
  std::string where_;
};

absl::StatusOr<TrainConfig> ParseTrain(const json& j, const std::string& where,
                                       TrainConfig defaults) {
  ObjectReader r(j, where);
  PRIVAUDIT_RETURN_IF_ERROR(r.Check(
      {"learning_rate", "epochs", "batch_size", "l2_coefficient", "dp"}));
  TrainConfig c = std::move(defaults);
  PRIVAUDIT_RETURN_IF_ERROR(r.Get("learning_rate", c.learning_rate));
  PRIVAUDIT_RETURN_IF_ERROR(r.Get("epochs", c.epochs));
  PRIVAUDIT_RETURN_IF_ERROR(r.Get("batch_size", c.batch_size));
  PRIVAUDIT_RETURN_IF_ERROR(r.Get("l2_coefficient", c.l2_coefficient));
  if (r.Has("dp")) {
    ObjectReader d(r.Raw("dp"), r.Path("dp"));
    PRIVAUDIT_RETURN_IF_ERROR(
        d.Check({"clip_norm", "noise_multiplier", "delta"}));
    DpParams dp;
    PRIVAUDIT_RETURN_IF_ERROR(d.Get("clip_norm", dp.clip_norm, true));
    PRIVAUDIT_RETURN_IF_ERROR(
        d.Get("noise_multiplier", dp.noise_multiplier, true));
    PRIVAUDIT_RETURN_IF_ERROR(d.Get("delta", dp.delta, true));
    c.dp = dp;
  }
  return c;
}

json TrainJson(const TrainConfig& c) {
  json j{{"learning_rate", c.learning_rate},
         {"epochs", c.epochs},
         {"batch_size", c.batch_size},
         {"l2_coefficient", c.l2_coefficient}};
  if (c.dp) {
    j["dp"] = {{"clip_norm", c.dp->clip_norm},
               {"noise_multiplier", c.dp->noise_multiplier},
               {"delta", c.dp->delta}};
  }
  return j;
}

}  // namespace

absl::StatusOr<AuditConfig> ParseAuditConfig(
    const json& j, const std::filesystem::path& base_dir) {
  ObjectReader root(j, "config");
  PRIVAUDIT_RETURN_IF_ERROR(root.Check({"seed", "threads", "dataset", "split",
                                        "target", "attacks", "metrics",
                                        "output_dir", "sweep"}));
  AuditConfig c;
  PRIVAUDIT_RETURN_IF_ERROR(root.Get("seed", c.seed));
  PRIVAUDIT_RETURN_IF_ERROR(root.Get("threads", c.threads));

  if (!root.Has("dataset")) return InvalidArgument("missing key 'dataset'");
  {
    ObjectReader d(root.Raw("dataset"), "config.dataset");
    std::string type;
    PRIVAUDIT_RETURN_IF_ERROR(d.Get("type", type, true));
    if (type == "synthetic") {
      PRIVAUDIT_RETURN_IF_ERROR(d.Check({"type", "n_per_class", "n_features",
                                         "num_classes", "class_separation"}));
      SyntheticParams p;
      PRIVAUDIT_RETURN_IF_ERROR(d.Get("n_per_class", p.n_per_class, true));
      PRIVAUDIT_RETURN_IF_ERROR(d.Get("n_features", p.n_features, true));
      PRIVAUDIT_RETURN_IF_ERROR(d.Get("num_classes", p.num_classes, true));
      PRIVAUDIT_RETURN_IF_ERROR(
          d.Get("class_separation", p.class_separation, true));
      c.synthetic = p;
    } else if (type == "csv") {
      PRIVAUDIT_RETURN_IF_ERROR(
          d.Check({"type", "path", "label_column", "standardize"}));
      CsvSource s;
      std::string path;
      PRIVAUDIT_RETURN_IF_ERROR(d.Get("path", path, true));
      s.path = std::filesystem::path(path).is_absolute()
                   ? std::filesystem::path(path)
                   : base_dir / path;
      PRIVAUDIT_RETURN_IF_ERROR(d.Get("label_column", s.label_column));
      PRIVAUDIT_RETURN_IF_ERROR(d.Get("standardize", s.standardize));
      c.csv = s;
    } else {
      return InvalidArgument("config.dataset.type must be 'synthetic' or "
                             "'csv', got '", type, "'");
    }
  }

  if (!root.Has("split")) return InvalidArgument("missing key 'split'");
  {
    ObjectReader s(root.Raw("split"), "config.split");
    PRIVAUDIT_RETURN_IF_ERROR(s.Check({"n_members", "n_nonmembers"}));
    PRIVAUDIT_RETURN_IF_ERROR(s.Get("n_members", c.n_members, true));
    PRIVAUDIT_RETURN_IF_ERROR(s.Get("n_nonmembers", c.n_nonmembers, true));
  }

  if (!root.Has("target")) return InvalidArgument("missing key 'target'");
  {
    ObjectReader t(root.Raw("target"), "config.target");
    PRIVAUDIT_RETURN_IF_ERROR(t.Check({"hidden_layers", "train"}));
    PRIVAUDIT_RETURN_IF_ERROR(t.Get("hidden_layers", c.hidden_layers));
    if (t.Has("train")) {
      PRIVAUDIT_ASSIGN_OR_RETURN(
          c.target_train,
          ParseTrain(t.Raw("train"), t.Path("train"), TrainConfig{}));
    }
  }

  c.shadow.shadow_train_config = c.target_train;
  c.shadow.shadow_train_config.dp.reset();
  c.shadow.attack_train_config = TrainConfig{};
  c.shadow.attack_train_config.epochs = 100;
  c.shadow.attack_train_config.batch_size = 32;
  if (!root.Has("attacks")) return InvalidArgument("missing key 'attacks'");
  {
    ObjectReader a(root.Raw("attacks"), "config.attacks");
    PRIVAUDIT_RETURN_IF_ERROR(a.Check(
        {"population_loss", "shadow_blackbox", "shadow_whitebox", "shadow"}));
    c.attacks.population_loss = false;
    PRIVAUDIT_RETURN_IF_ERROR(
        a.Get("population_loss", c.attacks.population_loss));
    PRIVAUDIT_RETURN_IF_ERROR(
        a.Get("shadow_blackbox", c.attacks.shadow_blackbox));
    PRIVAUDIT_RETURN_IF_ERROR(
        a.Get("shadow_whitebox", c.attacks.shadow_whitebox));
    if (a.Has("shadow")) {
      ObjectReader s(a.Raw("shadow"), a.Path("shadow"));
      PRIVAUDIT_RETURN_IF_ERROR(s.Check({"n_shadows", "train_fraction",
                                         "hidden_layers", "train",
                                         "attack_train"}));
      PRIVAUDIT_RETURN_IF_ERROR(s.Get("n_shadows", c.shadow.n_shadows));
      PRIVAUDIT_RETURN_IF_ERROR(
          s.Get("train_fraction", c.shadow.shadow_train_fraction));
      if (s.Has("hidden_layers")) {
        std::vector<size_t> hidden;
        PRIVAUDIT_RETURN_IF_ERROR(s.Get("hidden_layers", hidden));
        c.shadow_hidden_layers = hidden;
      }
      if (s.Has("train")) {
        PRIVAUDIT_ASSIGN_OR_RETURN(
            c.shadow.shadow_train_config,
            ParseTrain(s.Raw("train"), s.Path("train"),
                       c.shadow.shadow_train_config));
      }
      if (s.Has("attack_train")) {
        PRIVAUDIT_ASSIGN_OR_RETURN(
            c.shadow.attack_train_config,
            ParseTrain(s.Raw("attack_train"), s.Path("attack_train"),
                       c.shadow.attack_train_config));
      }
    }
  }

  if (root.Has("metrics")) {
    ObjectReader m(root.Raw("metrics"), "config.metrics");
    PRIVAUDIT_RETURN_IF_ERROR(
        m.Check({"histogram_bins", "risk_bins", "fpr_points"}));
    PRIVAUDIT_RETURN_IF_ERROR(
        m.Get("histogram_bins", c.metrics.histogram_bins));
    PRIVAUDIT_RETURN_IF_ERROR(m.Get("risk_bins", c.metrics.risk_bins));
    PRIVAUDIT_RETURN_IF_ERROR(m.Get("fpr_points", c.metrics.fpr_points));
  }

  std::string out_dir = c.output_dir.string();
  PRIVAUDIT_RETURN_IF_ERROR(root.Get("output_dir", out_dir));
  c.output_dir = std::filesystem::path(out_dir).is_absolute()
                     ? std::filesystem::path(out_dir)
                     : base_dir / out_dir;

  if (root.Has("sweep")) {
    ObjectReader s(root.Raw("sweep"), "config.sweep");
    PRIVAUDIT_RETURN_IF_ERROR(s.Check({"sigmas", "clip_norm", "delta"}));
    SweepSettings sweep;
    PRIVAUDIT_RETURN_IF_ERROR(s.Get("sigmas", sweep.sigmas, true));
    PRIVAUDIT_RETURN_IF_ERROR(s.Get("clip_norm", sweep.clip_norm));
    PRIVAUDIT_RETURN_IF_ERROR(s.Get("delta", sweep.delta));
    c.sweep = sweep;
  }
  return c;
}

absl::StatusOr<AuditConfig> LoadAuditConfig(const std::filesystem::path& path) {
  PRIVAUDIT_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return ParseError(path.string(), " is not valid JSON");
  }
  return ParseAuditConfig(j, path.parent_path());
}

absl::Status ValidateAuditConfig(const AuditConfig& c) {
  if (!c.attacks.any()) return InvalidArgument("no attack enabled");
  if (c.threads < 0) return InvalidArgument("threads must be >= 0");
  if (c.synthetic.has_value() == c.csv.has_value()) {
    return InvalidArgument("exactly one dataset source is required");
  }
  if (c.csv) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(c.csv->path, ec)) {
      return InvalidArgument("dataset file ", c.csv->path.string(),
                             " does not exist");
    }
  }
  if (c.n_members == 0 || c.n_nonmembers == 0) {
    return InvalidArgument("split sizes must be positive");
  }
  for (size_t h : c.hidden_layers) {
    if (h == 0) return InvalidArgument("hidden layer sizes must be positive");
  }
  PRIVAUDIT_RETURN_IF_ERROR(ValidateTrainConfig(c.target_train));
  if (c.attacks.shadow_blackbox || c.attacks.shadow_whitebox) {
    PRIVAUDIT_RETURN_IF_ERROR(ValidateShadowConfig(c.shadow));
    if (c.attacks.shadow_whitebox && c.shadow_hidden_layers &&
        *c.shadow_hidden_layers != c.hidden_layers) {
      return InvalidArgument(
          "white-box attack needs shadow hidden_layers equal to the target's");
    }
  }
  if (c.metrics.histogram_bins == 0 || c.metrics.risk_bins == 0) {
    return InvalidArgument("metric bin counts must be positive");
  }
  for (double fpr : c.metrics.fpr_points) {
    if (!(fpr >= 0.0 && fpr <= 1.0)) {
      return InvalidArgument("fpr point ", fpr, " outside [0, 1]");
    }
  }
  if (c.sweep) {
    if (c.sweep->sigmas.empty()) return InvalidArgument("sweep.sigmas is empty");
    for (size_t k = 0; k < c.sweep->sigmas.size(); ++k) {
      if (!(c.sweep->sigmas[k] > 0.0)) {
        return InvalidArgument("sweep sigmas must be positive");
      }
      if (k > 0 && !(c.sweep->sigmas[k] > c.sweep->sigmas[k - 1])) {
        return InvalidArgument("sweep sigmas must be strictly increasing");
      }
    }
    if (!(c.sweep->clip_norm > 0.0) || std::isinf(c.sweep->clip_norm)) {
      return InvalidArgument("sweep.clip_norm must be positive and finite");
    }
    if (!(c.sweep->delta > 0.0 && c.sweep->delta < 1.0)) {
      return InvalidArgument("sweep.delta must lie in (0, 1)");
    }
  }
  return absl::OkStatus();
}

json AuditConfigToJson(const AuditConfig& c) {
  json dataset;
  if (c.synthetic) {
    dataset = {{"type", "synthetic"},
               {"n_per_class", c.synthetic->n_per_class},
               {"n_features", c.synthetic->n_features},
               {"num_classes", c.synthetic->num_classes},
               {"class_separation", c.synthetic->class_separation}};
  } else if (c.csv) {
    // File name only: the digest must not depend on where the audit ran.
    dataset = {{"type", "csv"},
               {"path", c.csv->path.filename().string()},
               {"label_column", c.csv->label_column},
               {"standardize", c.csv->standardize}};
  }
  json shadow{{"n_shadows", c.shadow.n_shadows},
              {"train_fraction", c.shadow.shadow_train_fraction},
              {"train", TrainJson(c.shadow.shadow_train_config)},
              {"attack_train", TrainJson(c.shadow.attack_train_config)}};
  if (c.shadow_hidden_layers) shadow["hidden_layers"] = *c.shadow_hidden_layers;
  json j{{"seed", c.seed},
         {"dataset", dataset},
         {"split",
          {{"n_members", c.n_members}, {"n_nonmembers", c.n_nonmembers}}},
         {"target",
          {{"hidden_layers", c.hidden_layers},
           {"train", TrainJson(c.target_train)}}},
         {"attacks",
          {{"population_loss", c.attacks.population_loss},
           {"shadow_blackbox", c.attacks.shadow_blackbox},
           {"shadow_whitebox", c.attacks.shadow_whitebox},
           {"shadow", shadow}}},
         {"metrics",
          {{"histogram_bins", c.metrics.histogram_bins},
           {"risk_bins", c.metrics.risk_bins},
           {"fpr_points", c.metrics.fpr_points}}}};
  if (c.sweep) {
    j["sweep"] = {{"sigmas", c.sweep->sigmas},
                  {"clip_norm", c.sweep->clip_norm},
                  {"delta", c.sweep->delta}};
  }
  return j;
}

std::string ConfigDigest(const AuditConfig& config) {
  // FNV-1a 64 over the canonical dump.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : AuditConfigToJson(config).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace privaudit
