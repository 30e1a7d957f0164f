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

#include "privaudit/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include "absl/strings/string_view.h"
#include <unordered_map>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"
#include "privaudit/errors.h"
#include "privaudit/format.h"
#include "privaudit/rng.h"

namespace privaudit {

absl::Status ValidateDataset(const LabeledDataset& dataset) {
  if (dataset.features.rows() != dataset.labels.size()) {
    return ShapeMismatch("dataset has ", dataset.features.rows(),
                         " feature rows but ", dataset.labels.size(),
                         " labels");
  }
  if (dataset.num_classes <= 0) {
    return InvalidArgument("num_classes must be positive");
  }
  for (size_t i = 0; i < dataset.labels.size(); ++i) {
    const int label = dataset.labels[i];
    if (label < 0 || label >= dataset.num_classes) {
      return InvalidLabel("record ", i, " has label ", label,
                          " outside [0, ", dataset.num_classes, ")");
    }
  }
  for (double v : dataset.features.values()) {
    if (!std::isfinite(v)) return InvalidArgument("non-finite feature value");
  }
  return absl::OkStatus();
}

absl::StatusOr<LabeledDataset> GenerateSynthetic(const SyntheticParams& p) {
  if (p.n_per_class == 0 || p.n_features == 0 || p.num_classes <= 0) {
    return InvalidArgument("synthetic dataset sizes must be positive");
  }
  if (p.num_classes < 2) {
    return InvalidArgument("synthetic dataset needs at least two classes");
  }
  if (!(p.class_separation >= 0.0) || !std::isfinite(p.class_separation)) {
    return InvalidArgument("class separation must be finite and nonnegative");
  }
  const size_t classes = static_cast<size_t>(p.num_classes);
  const size_t d = p.n_features;
  LabeledDataset out;
  out.num_classes = p.num_classes;
  out.features = Matrix(p.n_per_class * classes, d);
  out.labels.reserve(p.n_per_class * classes);

  Rng rng(p.seed);
  size_t row = 0;
  for (size_t c = 0; c < classes; ++c) {
    const size_t axis = c % d;
    const double offset =
        p.class_separation * static_cast<double>(1 + c / d);
    for (size_t k = 0; k < p.n_per_class; ++k, ++row) {
      for (size_t j = 0; j < d; ++j) {
        out.features(row, j) = rng.Normal() + (j == axis ? offset : 0.0);
      }
      out.labels.push_back(static_cast<int>(c));
    }
  }
  return out;
}

namespace {

absl::string_view TrimCell(absl::string_view cell) {
  return absl::StripAsciiWhitespace(cell);
}

std::vector<absl::string_view> SplitLine(absl::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return absl::StrSplit(line, ',');
}

}  // namespace

absl::StatusOr<LabeledDataset> LoadCsv(const std::filesystem::path& path,
                                       const std::string& label_column) {
  std::ifstream in(path);
  if (!in) return IoError("cannot open ", path.string());

  std::string line;
  if (!std::getline(in, line)) {
    return SchemaError(path.string(), ": missing header row");
  }
  std::vector<std::string> header;
  for (absl::string_view cell : SplitLine(line)) {
    header.emplace_back(TrimCell(cell));
  }
  int label_pos = -1;
  std::vector<std::string> names;
  for (size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == label_column) {
      label_pos = static_cast<int>(c);
    } else {
      names.emplace_back(name);
    }
  }
  if (label_pos < 0) {
    return SchemaError(path.string(), ": no label column '", label_column,
                       "'");
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::unordered_map<std::string, int> label_ids;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const std::vector<absl::string_view> cells = SplitLine(line);
    if (cells.size() != header.size()) {
      return ParseError(path.string(), ": row ", row, " has ", cells.size(),
                        " cells, header has ", header.size());
    }
    for (size_t c = 0; c < cells.size(); ++c) {
      const absl::string_view cell = TrimCell(cells[c]);
      if (static_cast<int>(c) == label_pos) {
        auto [it, inserted] = label_ids.try_emplace(
            std::string(cell), static_cast<int>(label_ids.size()));
        labels.push_back(it->second);
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() ||
          cell.empty() || !std::isfinite(v)) {
        return ParseError(path.string(), ": row ", row, ", column '",
                          header[c], "': cannot parse '", cell,
                          "' as a finite number");
      }
      values.push_back(v);
    }
  }
  if (row == 0) return SchemaError(path.string(), ": empty dataset");

  LabeledDataset out;
  out.features = Matrix(row, names.size());
  std::copy(values.begin(), values.end(), out.features.values().begin());
  out.labels = std::move(labels);
  out.num_classes = static_cast<int>(label_ids.size());
  out.feature_names = std::move(names);
  return out;
}

absl::Status WriteCsv(const LabeledDataset& dataset,
                      const std::filesystem::path& path,
                      const std::string& label_column) {
  std::ofstream out(path);
  if (!out) return IoError("cannot write ", path.string());
  for (size_t j = 0; j < dataset.num_features(); ++j) {
    out << (j < dataset.feature_names.size() ? dataset.feature_names[j]
                                             : absl::StrCat("x", j))
        << ',';
  }
  out << label_column << '\n';
  for (size_t i = 0; i < dataset.size(); ++i) {
    for (double v : dataset.features.row(i)) out << FormatDouble(v) << ',';
    out << dataset.labels[i] << '\n';
  }
  if (!out) return IoError("failed writing ", path.string());
  return absl::OkStatus();
}

LabeledDataset Standardize(const LabeledDataset& dataset) {
  LabeledDataset out = dataset;
  const size_t n = dataset.size();
  if (n == 0) return out;
  for (size_t j = 0; j < dataset.num_features(); ++j) {
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) mean += dataset.features(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double d = dataset.features(i, j) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (size_t i = 0; i < n; ++i) {
      const double centered = dataset.features(i, j) - mean;
      out.features(i, j) = sd > 0.0 ? centered / sd : centered;
    }
  }
  return out;
}

LabeledDataset Subset(const LabeledDataset& dataset,
                      std::span<const size_t> indices) {
  LabeledDataset out;
  out.num_classes = dataset.num_classes;
  out.feature_names = dataset.feature_names;
  out.features = Matrix(indices.size(), dataset.num_features());
  out.labels.reserve(indices.size());
  for (size_t k = 0; k < indices.size(); ++k) {
    const std::span<const double> src = dataset.features.row(indices[k]);
    std::copy(src.begin(), src.end(), out.features.row(k).begin());
    out.labels.push_back(dataset.labels[indices[k]]);
  }
  return out;
}

absl::StatusOr<AuditSplit> MakeAuditSplit(const LabeledDataset& dataset,
                                          size_t n_members,
                                          size_t n_nonmembers, uint64_t seed) {
  if (n_members == 0 || n_nonmembers == 0) {
    return InvalidArgument("member and non-member counts must be positive");
  }
  if (n_members + n_nonmembers > dataset.size()) {
    return InvalidArgument("requested ", n_members, " members + ",
                           n_nonmembers, " non-members from a dataset of ",
                           dataset.size());
  }
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.Shuffle(order);

  AuditSplit split;
  split.seed = seed;
  const auto members_end = order.begin() + n_members;
  const auto nonmembers_end = members_end + n_nonmembers;
  split.member_idx.assign(order.begin(), members_end);
  split.nonmember_idx.assign(members_end, nonmembers_end);
  split.population_idx.assign(nonmembers_end, order.end());
  std::sort(split.member_idx.begin(), split.member_idx.end());
  std::sort(split.nonmember_idx.begin(), split.nonmember_idx.end());
  std::sort(split.population_idx.begin(), split.population_idx.end());
  return split;
}

absl::Status ValidateSplit(const AuditSplit& split, size_t n_records) {
  if (split.member_idx.empty() || split.nonmember_idx.empty()) {
    return InvalidArgument("split needs members and non-members");
  }
  std::unordered_set<size_t> seen;
  for (const auto* part :
       {&split.member_idx, &split.nonmember_idx, &split.population_idx}) {
    for (size_t id : *part) {
      if (id >= n_records) {
        return InvalidArgument("split index ", id, " out of range for ",
                               n_records, " records");
      }
      if (!seen.insert(id).second) {
        return InvalidArgument("split index ", id, " appears twice");
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace privaudit
