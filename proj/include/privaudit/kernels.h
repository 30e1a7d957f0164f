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

#ifndef PRIVAUDIT_KERNELS_H_
#define PRIVAUDIT_KERNELS_H_

#include <span>
#include <vector>

#include "privaudit/matrix.h"

// Dense kernels behind the MLP forward and backward passes.
//
// privaudit::kernels holds the OpenMP versions used by the toolkit;
// privaudit::kernels::reference holds plain serial loops kept as the testing
// oracle. Parallelism is only ever over independent output elements, and each
// output element accumulates its terms in the same order as the reference, so
// both produce bit-identical results for any thread count.
//
// Shapes are the caller's responsibility; the MLP layer validates them.
namespace privaudit::kernels {

// out(b, i) = sum_j weights(i, j) * in(b, j) + bias[i]. `out` is resized.
void Affine(const Matrix& in, const Matrix& weights,
            std::span<const double> bias, Matrix& out);

void ReluInPlace(Matrix& m);

// Row-wise softmax with max subtraction.
void SoftmaxRowsInPlace(Matrix& logits);

// log(sum_k exp(z_k)) per row, computed stably.
std::vector<double> LogSumExpRows(const Matrix& logits);

// Propagates output deltas (B x m) through weights (m x n) and the rectifier
// whose post-activation values are `activation` (B x n). `out` is resized.
void BackpropDelta(const Matrix& delta, const Matrix& weights,
                   const Matrix& activation, Matrix& out);

// grad(i, j) = sum_b scale[b] * delta(b, i) * activation(b, j), with scale
// treated as all ones when empty. `grad` is resized and overwritten.
void WeightGrad(const Matrix& delta, const Matrix& activation,
                std::span<const double> scale, Matrix& grad);

// grad[i] = sum_b scale[b] * delta(b, i).
void BiasGrad(const Matrix& delta, std::span<const double> scale,
              std::vector<double>& grad);

std::vector<double> RowSquaredNorms(const Matrix& m);

namespace reference {

void Affine(const Matrix& in, const Matrix& weights,
            std::span<const double> bias, Matrix& out);
void ReluInPlace(Matrix& m);
void SoftmaxRowsInPlace(Matrix& logits);
std::vector<double> LogSumExpRows(const Matrix& logits);
void BackpropDelta(const Matrix& delta, const Matrix& weights,
                   const Matrix& activation, Matrix& out);
void WeightGrad(const Matrix& delta, const Matrix& activation,
                std::span<const double> scale, Matrix& grad);
void BiasGrad(const Matrix& delta, std::span<const double> scale,
              std::vector<double>& grad);
std::vector<double> RowSquaredNorms(const Matrix& m);

}  // namespace reference
}  // namespace privaudit::kernels

#endif  // PRIVAUDIT_KERNELS_H_
