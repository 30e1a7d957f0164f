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

#ifndef PRIVAUDIT_MLP_H_
#define PRIVAUDIT_MLP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privaudit/matrix.h"

namespace privaudit {

inline constexpr char kInitScheme[] = "gaussian(0, sqrt(2/fan_in)), bias 0";

// Feed-forward classifier: affine layers with rectifier hidden activations and
// a softmax head. Layer k maps layer_sizes[k] inputs to layer_sizes[k + 1]
// outputs through weights[k] (out x in) and biases[k].
//
// A model with exactly two layer sizes is multinomial logistic regression.
struct MlpModel {
  std::vector<size_t> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  std::string activation = "relu";

  size_t num_layers() const { return weights.size(); }
  size_t input_size() const { return layer_sizes.front(); }
  size_t num_classes() const { return layer_sizes.back(); }

  bool operator==(const MlpModel&) const = default;
};

// Same shapes as the parameters of an MlpModel.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  static Gradients ZerosLike(const MlpModel& model);
  double SquaredNorm() const;
};

absl::Status ValidateModel(const MlpModel& model);

// He-style initialization, see kInitScheme.
absl::StatusOr<MlpModel> InitMlp(std::span<const size_t> layer_sizes,
                                 uint64_t seed);

// Softmax probabilities, one row per input row.
absl::StatusOr<Matrix> Forward(const MlpModel& model, const Matrix& batch);

struct LossAndGradients {
  double loss = 0.0;
  Gradients gradients;
};

// Mean cross-entropy over the batch plus l2_coefficient * |weights|^2 / 2, and
// its exact gradient. Biases are not regularized.
absl::StatusOr<LossAndGradients> LossAndGrads(const MlpModel& model,
                                              const Matrix& features,
                                              std::span<const int> labels,
                                              double l2_coefficient = 0.0);

// Gradient of one record's unregularized cross-entropy.
absl::StatusOr<Gradients> PerExampleGradient(const MlpModel& model,
                                             std::span<const double> record,
                                             int label);

// -log p(label) for every row.
absl::StatusOr<std::vector<double>> PerExampleLosses(
    const MlpModel& model, const Matrix& features, std::span<const int> labels);

// Building blocks shared by LossAndGrads and the trainers. A forward pass keeps
// every layer's post-activation output (activations[0] is the input) and the
// final logits.
namespace internal {

struct ForwardPass {
  std::vector<Matrix> activations;
  Matrix logits;
};

// Caller guarantees shapes.
ForwardPass RunForward(const MlpModel& model, const Matrix& batch);

// Unscaled output deltas p - onehot(label), one row per example, then
// back-propagated: deltas[k] is the delta at the output of layer k.
std::vector<Matrix> RunBackward(const MlpModel& model, const ForwardPass& pass,
                                std::span<const int> labels);

absl::Status CheckBatch(const MlpModel& model, const Matrix& features,
                        std::span<const int> labels);

}  // namespace internal
}  // namespace privaudit

#endif  // PRIVAUDIT_MLP_H_
