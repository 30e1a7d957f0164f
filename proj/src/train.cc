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

#include "privaudit/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "privaudit/errors.h"
#include "privaudit/kernels.h"
#include "privaudit/rng.h"

namespace privaudit {

absl::Status ValidateTrainConfig(const TrainConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    return InvalidArgument("learning_rate must be positive");
  }
  if (config.epochs == 0) return InvalidArgument("epochs must be positive");
  if (config.batch_size == 0) {
    return InvalidArgument("batch_size must be positive");
  }
  if (!(config.l2_coefficient >= 0.0)) {
    return InvalidArgument("l2_coefficient must be nonnegative");
  }
  if (config.dp) {
    const DpParams& dp = *config.dp;
    if (!(dp.clip_norm > 0.0)) {
      return InvalidArgument("clip_norm must be positive");
    }
    if (!(dp.noise_multiplier >= 0.0) || !std::isfinite(dp.noise_multiplier)) {
      return InvalidArgument("noise_multiplier must be finite and >= 0");
    }
    if (!(dp.delta > 0.0 && dp.delta < 1.0)) {
      return InvalidArgument("delta must lie in (0, 1)");
    }
    if (std::isinf(dp.clip_norm) && dp.noise_multiplier > 0.0) {
      return InvalidArgument(
          "noise requires a finite clip_norm (noise stddev is "
          "noise_multiplier * clip_norm)");
    }
  }
  return absl::OkStatus();
}

namespace {

void GatherBatch(const LabeledDataset& data, std::span<const size_t> rows,
                 Matrix& features, std::vector<int>& labels) {
  features = Matrix(rows.size(), data.num_features());
  labels.resize(rows.size());
  for (size_t b = 0; b < rows.size(); ++b) {
    const std::span<const double> src = data.features.row(rows[b]);
    std::copy(src.begin(), src.end(), features.row(b).begin());
    labels[b] = data.labels[rows[b]];
  }
}

Matrix RowOf(const Matrix& m, size_t r) {
  Matrix out(1, m.cols());
  const std::span<const double> src = m.row(r);
  std::copy(src.begin(), src.end(), out.values().begin());
  return out;
}

// Per-example clip factors min(1, C / |g_b|). For an affine layer the
// per-example gradient is the outer product delta_b a_b^T plus delta_b for the
// bias, so |g_b|^2 = sum_k |delta_b|^2 (|a_b|^2 + 1).
std::vector<double> ClipFactors(const internal::ForwardPass& pass,
                                const std::vector<Matrix>& deltas,
                                double clip_norm) {
  const size_t batch = deltas.front().rows();
  std::vector<double> sq(batch, 0.0);
  for (size_t k = 0; k < deltas.size(); ++k) {
    const std::vector<double> dn = kernels::RowSquaredNorms(deltas[k]);
    const std::vector<double> an =
        kernels::RowSquaredNorms(pass.activations[k]);
    for (size_t b = 0; b < batch; ++b) sq[b] += dn[b] * (an[b] + 1.0);
  }
  std::vector<double> scale(batch, 1.0);
  for (size_t b = 0; b < batch; ++b) {
    const double norm = std::sqrt(sq[b]);
    if (norm > clip_norm) scale[b] = clip_norm / norm;
  }
  return scale;
}

absl::StatusOr<TrainResult> RunTraining(MlpModel model,
                                        const LabeledDataset& data,
                                        const TrainConfig& config,
                                        const ClippedGradientObserver& observer) {
  PRIVAUDIT_RETURN_IF_ERROR(ValidateTrainConfig(config));
  PRIVAUDIT_RETURN_IF_ERROR(ValidateModel(model));
  if (data.size() == 0) return InvalidArgument("no training records");
  PRIVAUDIT_RETURN_IF_ERROR(
      internal::CheckBatch(model, data.features, data.labels));

  const bool is_private = config.dp.has_value();
  const double clip_norm = is_private ? config.dp->clip_norm : kNoClipping;
  const double noise_stddev =
      is_private && config.dp->noise_multiplier > 0.0
          ? config.dp->noise_multiplier * clip_norm
          : 0.0;

  Rng order_rng(config.seed);
  Rng noise_rng(DeriveSeed(config.seed, 1));
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), size_t{0});

  TrainResult result;
  Matrix x;
  std::vector<int> y;
  Gradients grads = Gradients::ZerosLike(model);
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.Shuffle(order);
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t end = std::min(order.size(), start + config.batch_size);
      GatherBatch(data, std::span(order).subspan(start, end - start), x, y);
      const internal::ForwardPass pass = internal::RunForward(model, x);
      const std::vector<Matrix> deltas = internal::RunBackward(model, pass, y);

      std::vector<double> scale;
      if (is_private) {
        scale = ClipFactors(pass, deltas, clip_norm);
        if (observer) {
          for (size_t b = 0; b < y.size(); ++b) {
            Gradients clipped = Gradients::ZerosLike(model);
            const double factor[1] = {scale[b]};
            for (size_t k = 0; k < model.num_layers(); ++k) {
              const Matrix d = RowOf(deltas[k], b);
              kernels::WeightGrad(d, RowOf(pass.activations[k], b), factor,
                                  clipped.weights[k]);
              kernels::BiasGrad(d, factor, clipped.biases[k]);
            }
            observer(result.steps_taken, order[start + b], clipped);
          }
        }
      }

      for (size_t k = 0; k < model.num_layers(); ++k) {
        kernels::WeightGrad(deltas[k], pass.activations[k], scale,
                            grads.weights[k]);
        kernels::BiasGrad(deltas[k], scale, grads.biases[k]);
      }
      if (noise_stddev > 0.0) {
        for (size_t k = 0; k < model.num_layers(); ++k) {
          for (double& v : grads.weights[k].values()) {
            v += noise_stddev * noise_rng.Normal();
          }
          for (double& v : grads.biases[k]) {
            v += noise_stddev * noise_rng.Normal();
          }
        }
      }

      const double batch = static_cast<double>(y.size());
      const double lr = config.learning_rate;
      const double l2 = config.l2_coefficient;
      for (size_t k = 0; k < model.num_layers(); ++k) {
        std::span<double> w = model.weights[k].values();
        const std::span<const double> g = grads.weights[k].values();
        for (size_t i = 0; i < w.size(); ++i) {
          w[i] -= lr * (g[i] / batch + l2 * w[i]);
        }
        std::vector<double>& bias = model.biases[k];
        for (size_t i = 0; i < bias.size(); ++i) {
          bias[i] -= lr * (grads.biases[k][i] / batch);
        }
      }
      ++result.steps_taken;
    }
    PRIVAUDIT_ASSIGN_OR_RETURN(const Evaluation eval, Evaluate(model, data));
    result.history.loss.push_back(eval.mean_loss);
    result.history.accuracy.push_back(eval.accuracy);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace

absl::StatusOr<TrainResult> TrainSgd(MlpModel model, const LabeledDataset& data,
                                     const TrainConfig& config) {
  if (config.dp) {
    return InvalidArgument("TrainSgd given DP parameters; use TrainDpSgd");
  }
  return RunTraining(std::move(model), data, config, nullptr);
}

absl::StatusOr<TrainResult> TrainDpSgd(MlpModel model,
                                       const LabeledDataset& data,
                                       const TrainConfig& config,
                                       const ClippedGradientObserver& observer) {
  if (!config.dp) return InvalidArgument("TrainDpSgd requires DP parameters");
  return RunTraining(std::move(model), data, config, observer);
}

absl::StatusOr<TrainResult> Train(MlpModel model, const LabeledDataset& data,
                                  const TrainConfig& config) {
  return RunTraining(std::move(model), data, config, nullptr);
}

absl::StatusOr<Evaluation> Evaluate(const MlpModel& model,
                                    const LabeledDataset& data) {
  if (data.size() == 0) return EmptySubset("cannot evaluate on no records");
  PRIVAUDIT_RETURN_IF_ERROR(
      internal::CheckBatch(model, data.features, data.labels));
  const internal::ForwardPass pass = internal::RunForward(model, data.features);
  const std::vector<double> lse = kernels::LogSumExpRows(pass.logits);
  double loss = 0.0;
  size_t correct = 0;
  for (size_t b = 0; b < data.size(); ++b) {
    const std::span<const double> z = pass.logits.row(b);
    const size_t argmax = static_cast<size_t>(
        std::max_element(z.begin(), z.end()) - z.begin());
    if (argmax == static_cast<size_t>(data.labels[b])) ++correct;
    loss += lse[b] - z[data.labels[b]];
  }
  const double n = static_cast<double>(data.size());
  return Evaluation{static_cast<double>(correct) / n, loss / n};
}

absl::StatusOr<GeneralizationGap> ComputeGeneralizationGap(
    const MlpModel& model, const LabeledDataset& train,
    const LabeledDataset& test) {
  PRIVAUDIT_ASSIGN_OR_RETURN(const Evaluation tr, Evaluate(model, train));
  PRIVAUDIT_ASSIGN_OR_RETURN(const Evaluation te, Evaluate(model, test));
  return GeneralizationGap{te.mean_loss - tr.mean_loss,
                           tr.accuracy - te.accuracy};
}

}  // namespace privaudit
