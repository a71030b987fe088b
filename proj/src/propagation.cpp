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

#include "upscore/propagation.hpp"

#include "upscore/errors.hpp"
#include "upscore/pooling.hpp"

namespace upscore {

std::pair<Vec, Vec> batchnorm_apply(const Vec& mean, const Vec& cov_diag,
                                    const BatchNormStats& bn) {
  const Index dim = mean.size();
  if (cov_diag.size() != dim) {
    throw DimensionError("mean and covariance dimensions differ");
  }
  if (bn.mu.size() != dim || bn.var.size() != dim || bn.gamma.size() != dim ||
      bn.beta.size() != dim) {
    throw DimensionError("batch-norm parameter dimensions do not match input");
  }
  if (!mean.allFinite() || !cov_diag.allFinite() || !bn.mu.allFinite() ||
      !bn.var.allFinite() || !bn.gamma.allFinite() || !bn.beta.allFinite() ||
      !std::isfinite(bn.eps)) {
    throw NumericError("non-finite batch-norm input");
  }
  if ((cov_diag.array() < 0.0).any()) {
    throw SingularError("negative input covariance entry");
  }
  if (bn.eps < 0.0 || (bn.var.array() < 0.0).any() ||
      ((bn.var.array() + bn.eps) <= 0.0).any()) {
    throw SingularError("batch-norm variance + eps must be positive");
  }

  const Vec scale = bn.gamma.array() / (bn.var.array() + bn.eps).sqrt();
  Vec out_mean = scale.cwiseProduct(mean - bn.mu) + bn.beta;
  Vec out_cov = scale.array().square() * cov_diag.array();
  return {std::move(out_mean), std::move(out_cov)};
}

UncertainEmbedding propagate(const PooledPosterior& pooled,
                             const BatchNormStats& bn,
                             const AffineLayer& layer, std::string id,
                             std::optional<double> duration_s) {
  const auto [bn_mean, bn_cov] =
      batchnorm_apply(pooled.mean, posterior_covariance(pooled), bn);

  if (layer.weight.cols() != bn_mean.size()) {
    throw DimensionError("layer input dimension does not match posterior");
  }
  if (layer.bias.size() != layer.weight.rows()) {
    throw DimensionError("layer bias dimension does not match weight rows");
  }
  if (layer.weight.rows() < 1) {
    throw DimensionError("layer must have at least one output dimension");
  }
  if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
    throw NumericError("non-finite layer parameters");
  }

  UncertainEmbedding out;
  out.id = std::move(id);
  out.mean = layer.weight * bn_mean + layer.bias;
  out.uncertainty_diag = layer.weight.array().square().matrix() * bn_cov;
  out.duration_s = duration_s;
  if (!out.mean.allFinite() || !out.uncertainty_diag.allFinite()) {
    throw NumericError("propagation overflowed to non-finite values");
  }
  if (duration_s && (!(*duration_s >= 0.0) || !std::isfinite(*duration_s))) {
    throw NumericError("duration must be finite and nonnegative");
  }
  return out;
}

}  // namespace upscore
