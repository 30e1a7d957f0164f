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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Tolerances and time budgets are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "fixtures.h"
#include "oracles.h"
#include "privaudit/accountant.h"
#include "privaudit/attacks.h"
#include "privaudit/audit_runner.h"
#include "privaudit/file_util.h"
#include "privaudit/metrics.h"
#include "privaudit/mlp.h"
#include "privaudit/rng.h"
#include "privaudit/train.h"

namespace privaudit {
namespace {

using ::privaudit::testing::FiniteDifferenceGradients;
using ::privaudit::testing::FixtureDpTrainConfig;
using ::privaudit::testing::FixtureShadowConfig;
using ::privaudit::testing::MakeOverfitFixture;
using ::privaudit::testing::MaxRelativeError;
using ::privaudit::testing::OverfitFixture;
using ::privaudit::testing::OverfitTrainConfig;
using ::privaudit::testing::PairCountingAuc;
using ::privaudit::testing::RandomModel;
using json = nlohmann::json;

constexpr double kGradientRelTol = 1e-4;
constexpr double kAucTol = 1e-12;
constexpr double kClipSlack = 1e-9;
constexpr double kEpsilonRelTol = 5e-7;  // 6 significant digits
// 0.5 + 2 * sqrt(0.5 * ln(1e5)), evaluated with an independent tool.
constexpr double kEpsilonSigma1 = 5.298525912188081;

// Collects failure reasons for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.empty()) failures_ = what;
    if (!ok) ++count_;
  }
  template <typename T>
  T Must(absl::StatusOr<T> v, const std::string& what) {
    if (!v.ok()) {
      Expect(false, what + ": " + std::string(v.status().message()));
      return T{};
    }
    return *std::move(v);
  }
  void Note(const std::string& s) { notes_ += (notes_.empty() ? "" : " ") + s; }
  bool ok() const { return count_ == 0; }
  const std::string& first_failure() const { return failures_; }
  const std::string& notes() const { return notes_; }

 private:
  int count_ = 0;
  std::string failures_;
  std::string notes_;
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

Matrix RandomBatch(size_t rows, size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& x : m.values()) x = rng.Normal();
  return m;
}

std::vector<int> RandomLabels(size_t n, int classes, Rng& rng) {
  std::vector<int> y(n);
  for (int& v : y) v = static_cast<int>(rng.UniformIndex(classes));
  return y;
}

void GradientOracle(Check& c) {
  Rng rng(20260101);
  double worst = 0.0;
  constexpr int kTrials = 25;
  for (int t = 0; t < kTrials; ++t) {
    const size_t d = 2 + rng.UniformIndex(4);
    const size_t h = 2 + rng.UniformIndex(6);
    const size_t k = 2 + rng.UniformIndex(3);
    const std::vector<size_t> sizes = {d, h, k};
    const MlpModel model = RandomModel(sizes, DeriveSeed(7, t), 0.7);
    const size_t n = 1 + rng.UniformIndex(6);
    const Matrix x = RandomBatch(n, d, rng);
    const std::vector<int> y = RandomLabels(n, static_cast<int>(k), rng);
    const double l2 = (t % 2) ? 0.01 : 0.0;

    const LossAndGradients analytic =
        c.Must(LossAndGrads(model, x, y, l2), "batch gradient");
    const double batch_err = MaxRelativeError(
        analytic.gradients, FiniteDifferenceGradients(model, x, y, l2));
    worst = std::max(worst, batch_err);

    const std::span<const double> row = x.row(0);
    const Gradients per_example =
        c.Must(PerExampleGradient(model, row, y[0]), "per-example gradient");
    Matrix x0(1, d);
    std::copy(row.begin(), row.end(), x0.values().begin());
    const std::vector<int> y0 = {y[0]};
    const double ex_err = MaxRelativeError(
        per_example, FiniteDifferenceGradients(model, x0, y0, 0.0));
    worst = std::max(worst, ex_err);
  }
  c.Expect(worst <= kGradientRelTol, "max relative error " + Num(worst));
  c.Note("trials=" + std::to_string(kTrials) + " max_rel_err=" + Num(worst));
}

void AucOracle(Check& c) {
  Rng rng(424242);
  constexpr int kSets = 250;
  double worst = 0.0;
  for (int s = 0; s < kSets; ++s) {
    const size_t n = 2 + rng.UniformIndex(29);
    std::vector<AttackRecord> records(n);
    // Coarse scores so that ties are common.
    const size_t levels = 1 + rng.UniformIndex(8);
    for (size_t i = 0; i < n; ++i) {
      records[i].record_id = i;
      records[i].score = static_cast<double>(rng.UniformIndex(levels));
      records[i].is_member = i == 0 ? true : i == 1 ? false : rng.Uniform() < 0.5;
    }
    const double auc = c.Must(Auc(records), "auc");
    worst = std::max(worst, std::abs(auc - PairCountingAuc(records)));
  }
  c.Expect(worst <= kAucTol, "max |auc - oracle| " + Num(worst));

  std::vector<AttackRecord> four(4);
  const double scores[] = {0.9, 0.4, 0.6, 0.1};
  const bool member[] = {true, true, false, false};
  for (size_t i = 0; i < 4; ++i) {
    four[i].record_id = i;
    four[i].score = scores[i];
    four[i].is_member = member[i];
  }
  const double auc4 = c.Must(Auc(four), "four-record auc");
  c.Expect(auc4 == 0.75, "four-record auc " + Num(auc4));
  c.Note("sets=" + std::to_string(kSets) + " max_err=" + Num(worst) +
         " four_record_auc=" + Num(auc4));
}

void Leakage(Check& c) {
  constexpr int kTrainedSeeds = 3;
  constexpr int kUntrainedSeeds = 5;
  AttackSelection all;
  all.population_loss = true;
  all.shadow_blackbox = true;
  all.shadow_whitebox = true;

  std::map<std::string, double> mean_auc;
  double worst_train_loss = 0.0;
  for (int seed = 0; seed < kTrainedSeeds; ++seed) {
    const OverfitFixture f = MakeOverfitFixture(seed);
    const TrainResult trained = c.Must(
        TrainSgd(f.init, f.members, OverfitTrainConfig(seed)), "train target");
    const Evaluation train_eval =
        c.Must(Evaluate(trained.model, f.members), "evaluate");
    worst_train_loss = std::max(worst_train_loss, train_eval.mean_loss);
    const auto records =
        c.Must(RunAttacks(trained.model, f.dataset, f.split, all,
                          FixtureShadowConfig(seed)),
               "attacks");
    for (const auto& [name, r] : records) {
      mean_auc[name] += c.Must(Auc(r), "auc") / kTrainedSeeds;
    }
  }
  c.Expect(worst_train_loss < 0.01,
           "train loss " + Num(worst_train_loss) + " >= 0.01");
  c.Expect(mean_auc["population_loss"] >= 0.7,
           "population_loss auc " + Num(mean_auc["population_loss"]));
  c.Expect(mean_auc["shadow_blackbox"] >= 0.6,
           "shadow_blackbox auc " + Num(mean_auc["shadow_blackbox"]));

  double lo = 1.0;
  double hi = 0.0;
  for (int seed = 0; seed < kUntrainedSeeds; ++seed) {
    const OverfitFixture f = MakeOverfitFixture(100 + seed);
    const auto records = c.Must(
        RunAttacks(f.init, f.dataset, f.split, all, FixtureShadowConfig(seed)),
        "untrained attacks");
    for (const auto& [name, r] : records) {
      const double auc = c.Must(Auc(r), "auc");
      lo = std::min(lo, auc);
      hi = std::max(hi, auc);
    }
  }
  c.Expect(lo >= 0.35 && hi <= 0.65,
           "untrained auc range [" + Num(lo) + ", " + Num(hi) + "]");
  c.Note("train_loss<=" + Num(worst_train_loss));
  for (const auto& [name, auc] : mean_auc) c.Note(name + "=" + Num(auc));
  c.Note("untrained_range=[" + Num(lo) + "," + Num(hi) + "]");
}

void DpDegeneracy(Check& c) {
  const OverfitFixture f = MakeOverfitFixture(0);
  TrainConfig sgd = OverfitTrainConfig(0);
  sgd.epochs = 20;
  TrainConfig dp = sgd;
  dp.dp = DpParams{};
  dp.dp->clip_norm = kNoClipping;
  dp.dp->noise_multiplier = 0.0;
  const TrainResult a = c.Must(TrainSgd(f.init, f.members, sgd), "sgd");
  const TrainResult b = c.Must(TrainDpSgd(f.init, f.members, dp), "dp-sgd");
  const bool identical = a.model == b.model;
  c.Expect(identical, "sigma=0 unclipped DP-SGD differs from SGD");

  double worst_excess = -INFINITY;
  size_t observed = 0;
  for (double clip : {0.01, 0.1, 1.0}) {
    TrainConfig clipped = sgd;
    clipped.dp = DpParams{};
    clipped.dp->clip_norm = clip;
    clipped.dp->noise_multiplier = 1.0;
    c.Must(TrainDpSgd(f.init, f.members, clipped,
                      [&](size_t, size_t, const Gradients& g) {
                        ++observed;
                        worst_excess = std::max(
                            worst_excess, std::sqrt(g.SquaredNorm()) - clip);
                      }),
           "clipped dp-sgd");
  }
  c.Expect(observed > 0, "observer never called");
  c.Expect(worst_excess <= kClipSlack,
           "clipped norm exceeds C by " + Num(worst_excess));
  c.Note(std::string("bit_identical=") + (identical ? "yes" : "no") +
         " clipped_grads=" + std::to_string(observed) +
         " max(norm-C)=" + Num(worst_excess));
}

void Mitigation(Check& c) {
  const std::vector<double> sigmas = {0.1, 1.0, 8.0};
  constexpr int kSeeds = 3;
  std::vector<double> mean_auc(sigmas.size(), 0.0);
  std::vector<double> eps;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const OverfitFixture f = MakeOverfitFixture(seed);
    SweepConfig cfg;
    cfg.layer_sizes.assign(std::begin(testing::kFixtureLayers),
                           std::end(testing::kFixtureLayers));
    cfg.train = FixtureDpTrainConfig(seed);
    cfg.attacks.population_loss = true;
    cfg.shadow = FixtureShadowConfig(seed);
    cfg.seed = seed;
    const std::vector<TradeoffRow> rows =
        c.Must(SweepTradeoff(f.dataset, f.split, cfg, sigmas), "sweep");
    if (rows.size() != sigmas.size()) {
      c.Expect(false, "sweep returned the wrong number of rows");
      return;
    }
    const size_t steps =
        cfg.train.epochs *
        ((testing::kFixtureMembers + cfg.train.batch_size - 1) /
         cfg.train.batch_size);
    eps.clear();
    for (size_t i = 0; i < rows.size(); ++i) {
      mean_auc[i] += rows[i].attack_auc.at("population_loss") / kSeeds;
      const double rho = steps / (2.0 * sigmas[i] * sigmas[i]);
      const double expected = rho + 2.0 * std::sqrt(rho * std::log(1e5));
      c.Expect(rows[i].epsilon == expected,
               "epsilon at sigma " + Num(sigmas[i]) + " is " +
                   Num(rows[i].epsilon) + ", formula gives " + Num(expected));
      if (i > 0) {
        c.Expect(rows[i].epsilon < rows[i - 1].epsilon,
                 "epsilon not strictly decreasing");
      }
      eps.push_back(rows[i].epsilon);
    }
  }
  c.Expect(std::abs(mean_auc[2] - 0.5) <= 0.1,
           "auc at sigma 8 is " + Num(mean_auc[2]));
  c.Expect(mean_auc[0] > 0.55, "auc at sigma 0.1 is " + Num(mean_auc[0]));
  for (size_t i = 0; i < sigmas.size(); ++i) {
    c.Note("sigma=" + Num(sigmas[i]) + ":eps=" + Num(eps[i]) +
           ",auc=" + Num(mean_auc[i]));
  }
}

void Accountant(Check& c) {
  const EpsilonReport e = c.Must(EpsilonOf(1.0, 1, 1e-5), "epsilon");
  c.Expect(e.rho == 0.5, "rho " + Num(e.rho));
  const double rel = std::abs(e.epsilon - kEpsilonSigma1) / kEpsilonSigma1;
  c.Expect(rel <= kEpsilonRelTol, "epsilon " + Num(e.epsilon));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "epsilon=%.9f rho=%g", e.epsilon, e.rho);
  c.Note(buf);
}

std::filesystem::path ScratchDir(const std::string& name) {
  const std::filesystem::path p =
      std::filesystem::temp_directory_path() /
      ("privaudit_acceptance_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::map<std::string, std::string> ReadOutputs(const std::filesystem::path& dir,
                                               Check& c) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    std::string text = c.Must(ReadFile(entry.path()), "read " + name);
    if (name == "report.json") {
      json j = json::parse(text);
      j["meta"].erase("timestamp");
      text = j.dump(2);
    }
    files[name] = text;
  }
  return files;
}

constexpr char kAuditConfig[] = PRIVAUDIT_CONFIG_DIR "/synthetic_audit.json";

void Determinism(Check& c) {
  std::vector<std::map<std::string, std::string>> runs;
  const std::filesystem::path root = ScratchDir("determinism");
  for (int run = 0; run < 2; ++run) {
    CliOptions options;
    options.config_path = kAuditConfig;
    options.out = root / ("run" + std::to_string(run));
    std::ostringstream out;
    std::ostringstream err;
    const int code = RunAudit(options, out, err);
    c.Expect(code == kExitOk, "audit exited " + std::to_string(code) + ": " +
                                  err.str());
    if (code != kExitOk) return;
    runs.push_back(ReadOutputs(*options.out, c));
  }
  c.Expect(runs[0].size() == runs[1].size(), "different file sets");
  size_t identical = 0;
  for (const auto& [name, text] : runs[0]) {
    const auto it = runs[1].find(name);
    const bool same = it != runs[1].end() && it->second == text;
    c.Expect(same, name + " differs between runs");
    identical += same;
  }
  c.Note("identical_files=" + std::to_string(identical) + "/" +
         std::to_string(runs[0].size()));
  std::filesystem::remove_all(root);
}

void Completeness(Check& c) {
  const std::filesystem::path dir = ScratchDir("completeness");
  CliOptions options;
  options.config_path = kAuditConfig;
  options.out = dir;
  std::ostringstream out;
  std::ostringstream err;
  if (RunAudit(options, out, err) != kExitOk) {
    c.Expect(false, "audit failed: " + err.str());
    return;
  }
  const json report =
      json::parse(c.Must(ReadFile(dir / "report.json"), "read report"));
  const std::vector<std::string> expected_attacks = {
      "population_loss", "shadow_blackbox", "shadow_whitebox"};
  c.Expect(report["attacks"].size() == expected_attacks.size(),
           "wrong number of attack blocks");
  const size_t audited =
      testing::kFixtureMembers + testing::kFixtureNonmembers;
  for (size_t i = 0; i < report["attacks"].size(); ++i) {
    const json& a = report["attacks"][i];
    const std::string name = a.value("attack_name", "");
    c.Expect(i < expected_attacks.size() && name == expected_attacks[i],
             "unexpected attack " + name);
    c.Expect(a.contains("roc") && a["roc"].size() >= 2, name + ": roc");
    c.Expect(a.contains("auc") && a["auc"].is_number(), name + ": auc");
    c.Expect(a.contains("membership_advantage"), name + ": advantage");
    std::vector<double> fprs;
    for (const json& p : a.value("tpr_at_fpr", json::array())) {
      fprs.push_back(p["fpr"].get<double>());
    }
    c.Expect(fprs == std::vector<double>({0.01, 0.05, 0.1}),
             name + ": tpr_at_fpr points");
    c.Expect(a.contains("per_class_auc") && a["per_class_auc"].is_object() &&
                 a["per_class_auc"].size() + a["skipped_classes"].size() == 2,
             name + ": per-class auc map");
    const json& h = a.value("histograms", json::object());
    c.Expect(h.contains("edges") && h.contains("members") &&
                 h.contains("nonmembers") &&
                 h["edges"].size() == h["members"].size() + 1,
             name + ": histograms");
    std::set<size_t> ids;
    bool risks_ok = a["records"].size() == audited;
    for (const json& r : a["records"]) {
      ids.insert(r["record_id"].get<size_t>());
      const double risk = r["risk"].get<double>();
      risks_ok = risks_ok && risk > 0.0 && risk < 1.0;
    }
    c.Expect(risks_ok && ids.size() == audited,
             name + ": one risk score per audited record");
    for (const char* prefix : {"roc_", "risks_", "histogram_"}) {
      c.Expect(std::filesystem::exists(dir / (prefix + name + ".csv")),
               name + ": missing " + std::string(prefix) + "csv");
    }
  }
  c.Note("attacks=" + std::to_string(report["attacks"].size()) +
         " records_per_attack=" + std::to_string(audited));
  std::filesystem::remove_all(dir);
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<void(Check&)> run;
};

int Main() {
  const std::vector<Criterion> criteria = {
      {"1 gradient-oracle", 10, GradientOracle},
      {"2 auc-oracle", 5, AucOracle},
      {"3 leakage-vs-overfitting", 120, Leakage},
      {"4 dp-degeneracy", 30, DpDegeneracy},
      {"5 mitigation-sweep", 300, Mitigation},
      {"6 accountant-formula", 1, Accountant},
      {"7 end-to-end-determinism", 120, Determinism},
      {"8 report-completeness", 120, Completeness},
  };
  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    criterion.run(check);
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    check.Expect(seconds < criterion.budget_seconds,
                 "took " + Num(seconds) + " s, budget " +
                     Num(criterion.budget_seconds) + " s");
    failed += !check.ok();
    std::printf("%s %-26s %7.2fs  %s%s%s\n", check.ok() ? "PASS" : "FAIL",
                criterion.name, seconds, check.notes().c_str(),
                check.ok() ? "" : "  reason: ",
                check.first_failure().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace privaudit

int main() { return privaudit::Main(); }
