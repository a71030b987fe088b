// Copyright 2026 The upscore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "upscore/types.hpp"

namespace upscore {

// Pushes a mean and a diagonal covariance through inference-mode batch
// normalization. Per dimension i, with s_i = gamma_i / sqrt(var_i + eps),
//
//   mean'_i = s_i * (mean_i - mu_i) + beta_i
//   cov'_i  = s_i^2 * cov_i
//
// The shift beta and the running mean mu never touch the covariance.
// Throws DimensionError, NumericError, or SingularError (negative input
// covariance entry, or var + eps not positive).
std::pair<Vec, Vec> batchnorm_apply(const Vec& mean, const Vec& cov_diag,
                                    const BatchNormStats& bn);

// Propagates a pooled posterior through batch normalization and one
// fully-connected layer into embedding space. The embedding mean is
// W * mean_bn + b; the uncertainty diagonal is diag(W * Cov_bn * W^T),
// which for a diagonal Cov_bn collapses to
//
//   uncertainty_j = sum_i W(j,i)^2 * cov_bn_i
//
// so the dense d x d product is never formed. Off-diagonal covariance is
// dropped here, once, after the layer. Throws NumericError if the result
// overflows to non-finite.
UncertainEmbedding propagate(const PooledPosterior& pooled,
                             const BatchNormStats& bn,
                             const AffineLayer& layer, std::string id,
                             std::optional<double> duration_s = std::nullopt);

}  // namespace upscore
