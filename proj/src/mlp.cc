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

#include "privaudit/mlp.h"

#include <cmath>

#include "privaudit/errors.h"
#include "privaudit/kernels.h"
#include "privaudit/rng.h"

namespace privaudit {

Gradients Gradients::ZerosLike(const MlpModel& model) {
  Gradients g;
  for (size_t k = 0; k < model.num_layers(); ++k) {
    g.weights.emplace_back(model.weights[k].rows(), model.weights[k].cols());
    g.biases.emplace_back(model.biases[k].size(), 0.0);
  }
  return g;
}

double Gradients::SquaredNorm() const {
  double acc = 0.0;
  for (const Matrix& w : weights) {
    for (double v : w.values()) acc += v * v;
  }
  for (const std::vector<double>& b : biases) {
    for (double v : b) acc += v * v;
  }
  return acc;
}

absl::Status ValidateModel(const MlpModel& model) {
  if (model.layer_sizes.size() < 2) {
    return InvalidArgument("a model needs input and output layer sizes");
  }
  for (size_t s : model.layer_sizes) {
    if (s == 0) return InvalidArgument("layer sizes must be positive");
  }
  const size_t layers = model.layer_sizes.size() - 1;
  if (model.weights.size() != layers || model.biases.size() != layers) {
    return ShapeMismatch("expected ", layers, " weight and bias blocks");
  }
  for (size_t k = 0; k < layers; ++k) {
    const Matrix& w = model.weights[k];
    if (w.rows() != model.layer_sizes[k + 1] ||
        w.cols() != model.layer_sizes[k] ||
        model.biases[k].size() != model.layer_sizes[k + 1]) {
      return ShapeMismatch("layer ", k, " parameters do not match sizes ",
                           model.layer_sizes[k], " -> ",
                           model.layer_sizes[k + 1]);
    }
    for (double v : w.values()) {
      if (!std::isfinite(v)) return InvalidArgument("non-finite weight");
    }
    for (double v : model.biases[k]) {
      if (!std::isfinite(v)) return InvalidArgument("non-finite bias");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<MlpModel> InitMlp(std::span<const size_t> layer_sizes,
                                 uint64_t seed) {
  if (layer_sizes.size() < 2) {
    return InvalidArgument("a model needs input and output layer sizes, got ",
                           layer_sizes.size());
  }
  for (size_t s : layer_sizes) {
    if (s == 0) return InvalidArgument("layer sizes must be positive");
  }
  MlpModel model;
  model.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
  Rng rng(seed);
  for (size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    const size_t fan_in = layer_sizes[k];
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    Matrix w(layer_sizes[k + 1], fan_in);
    for (double& v : w.values()) v = stddev * rng.Normal();
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(layer_sizes[k + 1], 0.0);
  }
  return model;
}

namespace internal {

ForwardPass RunForward(const MlpModel& model, const Matrix& batch) {
  ForwardPass pass;
  pass.activations.reserve(model.num_layers());
  pass.activations.push_back(batch);
  for (size_t k = 0; k < model.num_layers(); ++k) {
    Matrix out;
    kernels::Affine(pass.activations.back(), model.weights[k],
                    model.biases[k], out);
    if (k + 1 == model.num_layers()) {
      pass.logits = std::move(out);
    } else {
      kernels::ReluInPlace(out);
      pass.activations.push_back(std::move(out));
    }
  }
  return pass;
}

std::vector<Matrix> RunBackward(const MlpModel& model, const ForwardPass& pass,
                                std::span<const int> labels) {
  const size_t layers = model.num_layers();
  std::vector<Matrix> deltas(layers);
  Matrix out = pass.logits;
  kernels::SoftmaxRowsInPlace(out);
  for (size_t b = 0; b < labels.size(); ++b) out(b, labels[b]) -= 1.0;
  deltas[layers - 1] = std::move(out);
  for (size_t k = layers - 1; k > 0; --k) {
    kernels::BackpropDelta(deltas[k], model.weights[k], pass.activations[k],
                           deltas[k - 1]);
  }
  return deltas;
}

absl::Status CheckBatch(const MlpModel& model, const Matrix& features,
                        std::span<const int> labels) {
  if (features.cols() != model.input_size()) {
    return ShapeMismatch("batch has ", features.cols(),
                         " features, model expects ", model.input_size());
  }
  if (features.rows() != labels.size()) {
    return ShapeMismatch("batch has ", features.rows(), " rows but ",
                         labels.size(), " labels");
  }
  for (int label : labels) {
    if (label < 0 || static_cast<size_t>(label) >= model.num_classes()) {
      return InvalidLabel("label ", label, " outside [0, ",
                          model.num_classes(), ")");
    }
  }
  return absl::OkStatus();
}

}  // namespace internal

absl::StatusOr<Matrix> Forward(const MlpModel& model, const Matrix& batch) {
  if (batch.cols() != model.input_size()) {
    return ShapeMismatch("batch has ", batch.cols(),
                         " features, model expects ", model.input_size());
  }
  internal::ForwardPass pass = internal::RunForward(model, batch);
  kernels::SoftmaxRowsInPlace(pass.logits);
  return std::move(pass.logits);
}

absl::StatusOr<std::vector<double>> PerExampleLosses(
    const MlpModel& model, const Matrix& features,
    std::span<const int> labels) {
  PRIVAUDIT_RETURN_IF_ERROR(internal::CheckBatch(model, features, labels));
  const internal::ForwardPass pass = internal::RunForward(model, features);
  std::vector<double> losses = kernels::LogSumExpRows(pass.logits);
  for (size_t b = 0; b < losses.size(); ++b) {
    losses[b] -= pass.logits(b, labels[b]);
  }
  return losses;
}

absl::StatusOr<LossAndGradients> LossAndGrads(const MlpModel& model,
                                              const Matrix& features,
                                              std::span<const int> labels,
                                              double l2_coefficient) {
  PRIVAUDIT_RETURN_IF_ERROR(internal::CheckBatch(model, features, labels));
  if (labels.empty()) return EmptySubset("loss of an empty batch");
  const double batch = static_cast<double>(labels.size());
  const internal::ForwardPass pass = internal::RunForward(model, features);

  LossAndGradients out;
  const std::vector<double> lse = kernels::LogSumExpRows(pass.logits);
  for (size_t b = 0; b < labels.size(); ++b) {
    out.loss += lse[b] - pass.logits(b, labels[b]);
  }
  out.loss /= batch;

  const std::vector<Matrix> deltas = internal::RunBackward(model, pass, labels);
  out.gradients = Gradients::ZerosLike(model);
  for (size_t k = 0; k < model.num_layers(); ++k) {
    Matrix& gw = out.gradients.weights[k];
    kernels::WeightGrad(deltas[k], pass.activations[k], {}, gw);
    kernels::BiasGrad(deltas[k], {}, out.gradients.biases[k]);
    const std::span<const double> w = model.weights[k].values();
    std::span<double> g = gw.values();
    double sq = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
      g[i] = g[i] / batch + l2_coefficient * w[i];
      sq += w[i] * w[i];
    }
    for (double& v : out.gradients.biases[k]) v /= batch;
    out.loss += 0.5 * l2_coefficient * sq;
  }
  return out;
}

absl::StatusOr<Gradients> PerExampleGradient(const MlpModel& model,
                                             std::span<const double> record,
                                             int label) {
  Matrix row(1, record.size());
  std::copy(record.begin(), record.end(), row.values().begin());
  const int labels[1] = {label};
  PRIVAUDIT_RETURN_IF_ERROR(internal::CheckBatch(model, row, labels));
  const internal::ForwardPass pass = internal::RunForward(model, row);
  const std::vector<Matrix> deltas = internal::RunBackward(model, pass, labels);
  Gradients g = Gradients::ZerosLike(model);
  for (size_t k = 0; k < model.num_layers(); ++k) {
    kernels::WeightGrad(deltas[k], pass.activations[k], {}, g.weights[k]);
    kernels::BiasGrad(deltas[k], {}, g.biases[k]);
  }
  return g;
}

}  // namespace privaudit
