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

#include "privaudit/kernels.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace privaudit::kernels {
namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr int64_t kParallelWork = 1 << 15;

int64_t Work(size_t a, size_t b, size_t c = 1) {
  return static_cast<int64_t>(a * b * c);
}

}  // namespace

void Affine(const Matrix& in, const Matrix& weights,
            std::span<const double> bias, Matrix& out) {
  const int64_t batch = static_cast<int64_t>(in.rows());
  const size_t n_out = weights.rows();
  const size_t n_in = weights.cols();
  out = Matrix(in.rows(), n_out);
#pragma omp parallel for schedule(static) \
    if (Work(in.rows(), n_out, n_in) > kParallelWork)
  for (int64_t b = 0; b < batch; ++b) {
    const std::span<const double> x = in.row(b);
    std::span<double> y = out.row(b);
    for (size_t i = 0; i < n_out; ++i) {
      const std::span<const double> w = weights.row(i);
      double acc = 0.0;
      for (size_t j = 0; j < n_in; ++j) acc += w[j] * x[j];
      y[i] = acc + bias[i];
    }
  }
}

void ReluInPlace(Matrix& m) {
  std::span<double> v = m.values();
  const int64_t n = static_cast<int64_t>(v.size());
#pragma omp parallel for schedule(static) if (n > kParallelWork)
  for (int64_t k = 0; k < n; ++k) v[k] = v[k] > 0.0 ? v[k] : 0.0;
}

void SoftmaxRowsInPlace(Matrix& logits) {
  const int64_t rows = static_cast<int64_t>(logits.rows());
#pragma omp parallel for schedule(static) \
    if (Work(logits.rows(), logits.cols()) > kParallelWork)
  for (int64_t r = 0; r < rows; ++r) {
    std::span<double> z = logits.row(r);
    const double max = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
      v = std::exp(v - max);
      sum += v;
    }
    for (double& v : z) v /= sum;
  }
}

std::vector<double> LogSumExpRows(const Matrix& logits) {
  const int64_t rows = static_cast<int64_t>(logits.rows());
  std::vector<double> out(logits.rows());
#pragma omp parallel for schedule(static) \
    if (Work(logits.rows(), logits.cols()) > kParallelWork)
  for (int64_t r = 0; r < rows; ++r) {
    const std::span<const double> z = logits.row(r);
    const double max = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - max);
    out[r] = max + std::log(sum);
  }
  return out;
}

void BackpropDelta(const Matrix& delta, const Matrix& weights,
                   const Matrix& activation, Matrix& out) {
  const int64_t batch = static_cast<int64_t>(delta.rows());
  const size_t n_out = weights.rows();
  const size_t n_in = weights.cols();
  out = Matrix(delta.rows(), n_in);
#pragma omp parallel for schedule(static) \
    if (Work(delta.rows(), n_out, n_in) > kParallelWork)
  for (int64_t b = 0; b < batch; ++b) {
    std::span<double> y = out.row(b);
    const std::span<const double> d = delta.row(b);
    for (size_t i = 0; i < n_out; ++i) {
      const std::span<const double> w = weights.row(i);
      for (size_t j = 0; j < n_in; ++j) y[j] += d[i] * w[j];
    }
    const std::span<const double> a = activation.row(b);
    for (size_t j = 0; j < n_in; ++j) {
      if (!(a[j] > 0.0)) y[j] = 0.0;
    }
  }
}

void WeightGrad(const Matrix& delta, const Matrix& activation,
                std::span<const double> scale, Matrix& grad) {
  const size_t batch = delta.rows();
  const int64_t n_out = static_cast<int64_t>(delta.cols());
  const size_t n_in = activation.cols();
  grad = Matrix(delta.cols(), n_in);
#pragma omp parallel for schedule(static) \
    if (Work(batch, delta.cols(), n_in) > kParallelWork)
  for (int64_t i = 0; i < n_out; ++i) {
    std::span<double> g = grad.row(i);
    for (size_t b = 0; b < batch; ++b) {
      const double d =
          scale.empty() ? delta(b, i) : scale[b] * delta(b, i);
      const std::span<const double> a = activation.row(b);
      for (size_t j = 0; j < n_in; ++j) g[j] += d * a[j];
    }
  }
}

void BiasGrad(const Matrix& delta, std::span<const double> scale,
              std::vector<double>& grad) {
  grad.assign(delta.cols(), 0.0);
  for (size_t b = 0; b < delta.rows(); ++b) {
    const std::span<const double> d = delta.row(b);
    for (size_t i = 0; i < d.size(); ++i) {
      grad[i] += scale.empty() ? d[i] : scale[b] * d[i];
    }
  }
}

std::vector<double> RowSquaredNorms(const Matrix& m) {
  const int64_t rows = static_cast<int64_t>(m.rows());
  std::vector<double> out(m.rows());
#pragma omp parallel for schedule(static) \
    if (Work(m.rows(), m.cols()) > kParallelWork)
  for (int64_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (double v : m.row(r)) acc += v * v;
    out[r] = acc;
  }
  return out;
}

namespace reference {

void Affine(const Matrix& in, const Matrix& weights,
            std::span<const double> bias, Matrix& out) {
  out = Matrix(in.rows(), weights.rows());
  for (size_t b = 0; b < in.rows(); ++b) {
    for (size_t i = 0; i < weights.rows(); ++i) {
      double acc = 0.0;
      for (size_t j = 0; j < weights.cols(); ++j) {
        acc += weights(i, j) * in(b, j);
      }
      out(b, i) = acc + bias[i];
    }
  }
}

void ReluInPlace(Matrix& m) {
  for (double& v : m.values()) v = v > 0.0 ? v : 0.0;
}

void SoftmaxRowsInPlace(Matrix& logits) {
  for (size_t r = 0; r < logits.rows(); ++r) {
    double max = logits(r, 0);
    for (size_t c = 1; c < logits.cols(); ++c) max = std::max(max, logits(r, c));
    double sum = 0.0;
    for (size_t c = 0; c < logits.cols(); ++c) {
      logits(r, c) = std::exp(logits(r, c) - max);
      sum += logits(r, c);
    }
    for (size_t c = 0; c < logits.cols(); ++c) logits(r, c) /= sum;
  }
}

std::vector<double> LogSumExpRows(const Matrix& logits) {
  std::vector<double> out(logits.rows());
  for (size_t r = 0; r < logits.rows(); ++r) {
    double max = logits(r, 0);
    for (size_t c = 1; c < logits.cols(); ++c) max = std::max(max, logits(r, c));
    double sum = 0.0;
    for (size_t c = 0; c < logits.cols(); ++c) sum += std::exp(logits(r, c) - max);
    out[r] = max + std::log(sum);
  }
  return out;
}

void BackpropDelta(const Matrix& delta, const Matrix& weights,
                   const Matrix& activation, Matrix& out) {
  out = Matrix(delta.rows(), weights.cols());
  for (size_t b = 0; b < delta.rows(); ++b) {
    for (size_t j = 0; j < weights.cols(); ++j) {
      double acc = 0.0;
      for (size_t i = 0; i < weights.rows(); ++i) {
        acc += delta(b, i) * weights(i, j);
      }
      out(b, j) = activation(b, j) > 0.0 ? acc : 0.0;
    }
  }
}

void WeightGrad(const Matrix& delta, const Matrix& activation,
                std::span<const double> scale, Matrix& grad) {
  grad = Matrix(delta.cols(), activation.cols());
  for (size_t i = 0; i < delta.cols(); ++i) {
    for (size_t j = 0; j < activation.cols(); ++j) {
      double acc = 0.0;
      for (size_t b = 0; b < delta.rows(); ++b) {
        const double d = scale.empty() ? delta(b, i) : scale[b] * delta(b, i);
        acc += d * activation(b, j);
      }
      grad(i, j) = acc;
    }
  }
}

void BiasGrad(const Matrix& delta, std::span<const double> scale,
              std::vector<double>& grad) {
  grad.assign(delta.cols(), 0.0);
  for (size_t i = 0; i < delta.cols(); ++i) {
    double acc = 0.0;
    for (size_t b = 0; b < delta.rows(); ++b) {
      acc += scale.empty() ? delta(b, i) : scale[b] * delta(b, i);
    }
    grad[i] = acc;
  }
}

std::vector<double> RowSquaredNorms(const Matrix& m) {
  std::vector<double> out(m.rows(), 0.0);
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * m(r, c);
  }
  return out;
}

}  // namespace reference
}  // namespace privaudit::kernels
