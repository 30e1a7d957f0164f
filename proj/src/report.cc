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

#include "privaudit/report.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>
#include <sstream>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "privaudit/errors.h"
#include "privaudit/file_util.h"
#include "privaudit/format.h"

namespace privaudit {

using nlohmann::json;

absl::StatusOr<AttackBlock> ComputeAttackBlock(std::vector<AttackRecord> records,
                                               const MetricsOptions& options) {
  if (records.empty()) return DegenerateInput("attack produced no records");
  std::stable_sort(records.begin(), records.end(),
                   [](const AttackRecord& a, const AttackRecord& b) {
                     return a.record_id < b.record_id;
                   });
  AttackBlock block;
  block.attack_name = records.front().attack_name;
  for (const AttackRecord& r : records) {
    if (r.attack_name != block.attack_name) {
      return InconsistentInputs("attack block mixes '", block.attack_name,
                                "' and '", r.attack_name, "'");
    }
  }
  PRIVAUDIT_ASSIGN_OR_RETURN(block.roc, ComputeRoc(records));
  for (double fpr : options.fpr_points) {
    PRIVAUDIT_ASSIGN_OR_RETURN(const double tpr, TprAtFpr(block.roc, fpr));
    block.tpr_at_fpr.emplace_back(fpr, tpr);
  }
  block.membership_advantage = MembershipAdvantage(block.roc);
  block.per_class = ComputePerClassRocs(records);
  PRIVAUDIT_ASSIGN_OR_RETURN(
      block.histograms, ComputeScoreHistograms(records, options.histogram_bins));
  PRIVAUDIT_ASSIGN_OR_RETURN(block.risks,
                             ComputeRiskScores(records, options.risk_bins));
  block.records = std::move(records);
  return block;
}

absl::StatusOr<PrivacyReport> BuildReport(
    ReportMeta meta, TargetSummary target, std::vector<AttackBlock> attacks,
    std::optional<EpsilonReport> epsilon,
    std::optional<std::vector<TradeoffRow>> sweep) {
  auto rank = [](const std::string& name) {
    const auto* it = std::find_if(
        std::begin(kCanonicalAttackOrder), std::end(kCanonicalAttackOrder),
        [&](const char* n) { return name == n; });
    return it - std::begin(kCanonicalAttackOrder);
  };
  std::stable_sort(attacks.begin(), attacks.end(),
                   [&](const AttackBlock& a, const AttackBlock& b) {
                     const auto ra = rank(a.attack_name);
                     const auto rb = rank(b.attack_name);
                     return ra != rb ? ra < rb : a.attack_name < b.attack_name;
                   });
  for (size_t k = 1; k < attacks.size(); ++k) {
    if (attacks[k].attack_name == attacks[k - 1].attack_name) {
      return InconsistentInputs("attack '", attacks[k].attack_name,
                                "' appears twice");
    }
  }
  for (const AttackBlock& block : attacks) {
    if (block.risks.size() != block.records.size()) {
      return InconsistentInputs("attack '", block.attack_name,
                                "' has risks for ", block.risks.size(),
                                " of ", block.records.size(), " records");
    }
    if (block.records.size() != attacks.front().records.size()) {
      return InconsistentInputs("attacks '", attacks.front().attack_name,
                                "' and '", block.attack_name,
                                "' cover different record sets");
    }
    for (size_t i = 0; i < block.records.size(); ++i) {
      const AttackRecord& a = block.records[i];
      const AttackRecord& b = attacks.front().records[i];
      if (a.record_id != b.record_id || a.is_member != b.is_member) {
        return InconsistentInputs("attacks '", attacks.front().attack_name,
                                  "' and '", block.attack_name,
                                  "' cover different record sets");
      }
    }
  }
  PrivacyReport report;
  report.meta = std::move(meta);
  report.target = std::move(target);
  report.attacks = std::move(attacks);
  report.epsilon = std::move(epsilon);
  report.sweep = std::move(sweep);
  return report;
}

namespace {

json RocPointsJson(const RocCurve& curve) {
  json points = json::array();
  for (const RocPoint& p : curve.points) points.push_back({{"fpr", p.fpr}, {"tpr", p.tpr}});
  return points;
}

json AttackJson(const AttackBlock& block) {
  json tpr = json::array();
  for (const auto& [fpr, value] : block.tpr_at_fpr) {
    tpr.push_back({{"fpr", fpr}, {"tpr", value}});
  }
  json per_class_auc = json::object();
  json per_class_roc = json::object();
  for (const auto& [label, curve] : block.per_class.curves) {
    per_class_auc[std::to_string(label)] = curve.auc;
    per_class_roc[std::to_string(label)] = RocPointsJson(curve);
  }
  json records = json::array();
  for (size_t i = 0; i < block.records.size(); ++i) {
    const AttackRecord& r = block.records[i];
    records.push_back({{"record_id", r.record_id},
                       {"class", r.class_label},
                       {"is_member", r.is_member},
                       {"score", r.score},
                       {"risk", block.risks[i].risk}});
  }
  return json{
      {"attack_name", block.attack_name},
      {"auc", block.roc.auc},
      {"n_members", block.roc.n_members},
      {"n_nonmembers", block.roc.n_nonmembers},
      {"roc", RocPointsJson(block.roc)},
      {"tpr_at_fpr", std::move(tpr)},
      {"membership_advantage", block.membership_advantage},
      {"per_class_auc", std::move(per_class_auc)},
      {"per_class_roc", std::move(per_class_roc)},
      {"skipped_classes", block.per_class.skipped},
      {"histograms",
       {{"edges", block.histograms.edges},
        {"members", block.histograms.member_counts},
        {"nonmembers", block.histograms.nonmember_counts}}},
      {"records", std::move(records)},
  };
}

json TradeoffJson(const TradeoffRow& row) {
  return json{{"sigma", row.sigma},
              {"epsilon", row.epsilon},
              {"test_accuracy", row.test_accuracy},
              {"attack_auc", row.attack_auc},
              {"loss_gap", row.loss_gap}};
}

std::vector<std::string> SweepAttackColumns(
    const std::vector<TradeoffRow>& rows) {
  std::set<std::string> names;
  for (const TradeoffRow& row : rows) {
    for (const auto& [name, auc] : row.attack_auc) names.insert(name);
  }
  std::vector<std::string> ordered;
  for (const char* name : kCanonicalAttackOrder) {
    if (names.erase(name)) ordered.emplace_back(name);
  }
  ordered.insert(ordered.end(), names.begin(), names.end());
  return ordered;
}

}  // namespace

json ReportToJson(const PrivacyReport& report) {
  const ReportMeta& m = report.meta;
  const TargetSummary& t = report.target;
  json attacks = json::array();
  for (const AttackBlock& block : report.attacks) {
    attacks.push_back(AttackJson(block));
  }
  json out{
      {"meta",
       {{"tool_version", m.tool_version},
        {"prng_version", m.prng_version},
        {"init_scheme", m.init_scheme},
        {"timestamp", m.timestamp},
        {"config_digest", m.config_digest},
        {"seed", m.seed}}},
      {"target",
       {{"layer_sizes", t.layer_sizes},
        {"train_size", t.train_size},
        {"test_size", t.test_size},
        {"train_accuracy", t.train.accuracy},
        {"train_loss", t.train.mean_loss},
        {"test_accuracy", t.test.accuracy},
        {"test_loss", t.test.mean_loss},
        {"loss_gap", t.gap.loss_gap},
        {"accuracy_gap", t.gap.accuracy_gap}}},
      {"attacks", std::move(attacks)},
  };
  if (report.epsilon) {
    const EpsilonReport& e = *report.epsilon;
    out["epsilon"] = {{"epsilon", e.epsilon}, {"delta", e.delta},
                      {"rho", e.rho},         {"sigma", e.sigma},
                      {"steps", e.steps},     {"method", e.method}};
  }
  if (report.sweep) {
    json rows = json::array();
    for (const TradeoffRow& row : *report.sweep) {
      rows.push_back(TradeoffJson(row));
    }
    out["sweep"] = std::move(rows);
  }
  return out;
}

std::string SerializeReport(const PrivacyReport& report) {
  return ReportToJson(report).dump(2) + "\n";
}

std::string RocCsv(const RocCurve& curve) {
  std::string out = "fpr,tpr\n";
  for (const RocPoint& p : curve.points) {
    absl::StrAppend(&out, FormatDouble(p.fpr), ",", FormatDouble(p.tpr), "\n");
  }
  return out;
}

std::string RisksCsv(const AttackBlock& block) {
  std::string out = "record_id,class,is_member,score,risk\n";
  for (size_t i = 0; i < block.records.size(); ++i) {
    const AttackRecord& r = block.records[i];
    absl::StrAppend(&out, r.record_id, ",", r.class_label, ",",
                    r.is_member ? 1 : 0, ",", FormatDouble(r.score), ",",
                    FormatDouble(block.risks[i].risk), "\n");
  }
  return out;
}

std::string HistogramCsv(const ScoreHistograms& h) {
  std::string out = "bin_low,bin_high,members,nonmembers\n";
  for (size_t b = 0; b < h.member_counts.size(); ++b) {
    absl::StrAppend(&out, FormatDouble(h.edges[b]), ",",
                    FormatDouble(h.edges[b + 1]), ",", h.member_counts[b], ",",
                    h.nonmember_counts[b], "\n");
  }
  return out;
}

std::string SweepCsv(const std::vector<TradeoffRow>& rows) {
  const std::vector<std::string> attacks = SweepAttackColumns(rows);
  std::string out = "sigma,epsilon,test_accuracy";
  for (const std::string& name : attacks) absl::StrAppend(&out, ",auc_", name);
  out += ",loss_gap\n";
  for (const TradeoffRow& row : rows) {
    absl::StrAppend(&out, FormatDouble(row.sigma), ",",
                    FormatDouble(row.epsilon), ",",
                    FormatDouble(row.test_accuracy));
    for (const std::string& name : attacks) {
      const auto it = row.attack_auc.find(name);
      absl::StrAppend(&out, ",",
                      it == row.attack_auc.end() ? "" : FormatDouble(it->second));
    }
    absl::StrAppend(&out, ",", FormatDouble(row.loss_gap), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<std::string>> EmitReport(
    const PrivacyReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return IoError("cannot create directory ", dir.string());

  std::vector<std::string> manifest;
  auto write = [&](const std::string& name,
                   const std::string& contents) -> absl::Status {
    PRIVAUDIT_RETURN_IF_ERROR(WriteFileAtomically(dir / name, contents));
    manifest.push_back(name);
    return absl::OkStatus();
  };
  PRIVAUDIT_RETURN_IF_ERROR(write("report.json", SerializeReport(report)));
  for (const AttackBlock& block : report.attacks) {
    const std::string& name = block.attack_name;
    PRIVAUDIT_RETURN_IF_ERROR(write("roc_" + name + ".csv", RocCsv(block.roc)));
    PRIVAUDIT_RETURN_IF_ERROR(write("risks_" + name + ".csv", RisksCsv(block)));
    PRIVAUDIT_RETURN_IF_ERROR(
        write("histogram_" + name + ".csv", HistogramCsv(block.histograms)));
  }
  if (report.sweep) {
    PRIVAUDIT_RETURN_IF_ERROR(write("sweep.csv", SweepCsv(*report.sweep)));
  }
  return manifest;
}

std::string Rfc3339Now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace privaudit
