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

#ifndef PRIVAUDIT_DATASET_H_
#define PRIVAUDIT_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privaudit/matrix.h"

namespace privaudit {

// Feature matrix plus integer class labels in [0, num_classes).
struct LabeledDataset {
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;
  std::vector<std::string> feature_names;  // Empty unless loaded from CSV.

  size_t size() const { return labels.size(); }
  size_t num_features() const { return features.cols(); }
};

// Checks row/label agreement, label range and finiteness of every feature.
absl::Status ValidateDataset(const LabeledDataset& dataset);

struct SyntheticParams {
  size_t n_per_class = 0;
  size_t n_features = 0;
  int num_classes = 0;
  double class_separation = 0.0;
  uint64_t seed = 0;
};

// Gaussian blobs with unit variance. Class c is centered at
//   separation * (1 + c / d) * e_(c mod d)
// so the separation controls how distinguishable the classes are. Records are
// emitted class by class.
absl::StatusOr<LabeledDataset> GenerateSynthetic(const SyntheticParams& params);

// Reads a header-first, comma-separated file. Labels are remapped to 0..C-1 in
// order of first appearance; every other column must be numeric. Quoting is
// not supported.
absl::StatusOr<LabeledDataset> LoadCsv(const std::filesystem::path& path,
                                       const std::string& label_column);

// Writes `dataset` in the format LoadCsv reads, label column last. Labels are
// written as their integer index.
absl::Status WriteCsv(const LabeledDataset& dataset,
                      const std::filesystem::path& path,
                      const std::string& label_column);

// Per-feature standardization to zero mean, unit variance. Constant features
// are only centered.
LabeledDataset Standardize(const LabeledDataset& dataset);

// Copies the given rows, preserving num_classes and feature names.
LabeledDataset Subset(const LabeledDataset& dataset,
                      std::span<const size_t> indices);

// The membership game: records the target trains on, records it never sees,
// and the remaining population available to shadow attackers.
struct AuditSplit {
  std::vector<size_t> member_idx;
  std::vector<size_t> nonmember_idx;
  std::vector<size_t> population_idx;
  uint64_t seed = 0;
};

// Samples members and non-members without replacement; everything left over
// becomes the population. Each index list is sorted ascending.
absl::StatusOr<AuditSplit> MakeAuditSplit(const LabeledDataset& dataset,
                                          size_t n_members,
                                          size_t n_nonmembers, uint64_t seed);

absl::Status ValidateSplit(const AuditSplit& split, size_t n_records);

}  // namespace privaudit

#endif  // PRIVAUDIT_DATASET_H_
