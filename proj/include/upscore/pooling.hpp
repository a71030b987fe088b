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

#include <cstddef>
#include <vector>

#include "upscore/types.hpp"

namespace upscore {

// Above this frame count the accumulators switch to compensated (Kahan)
// summation. Accumulation is always in input order.
inline constexpr std::size_t kCompensatedSumThreshold = 1024;

// Gaussian inference pooling: fuses a sequence of frame posteriors with a
// proper Gaussian prior into one utterance-level posterior. With diagonal
// precisions this is elementwise,
//
//   prec = sum_t frame_prec_t + prior_prec
//   mean = (sum_t frame_prec_t * feat_t + prior_prec * prior_mean) / prec
//
// An empty sequence returns the prior unchanged. Throws DimensionError on
// mismatched dimensions, NumericError on non-finite inputs, SingularError if
// the prior precision is not strictly positive or a frame precision is
// negative.
PooledPosterior posterior_pool(const std::vector<FramePosterior>& frames,
                               const GaussianPrior& prior);

// Diagonal of the posterior covariance: the elementwise reciprocal of the
// pooled precision diagonal. Throws SingularError if any entry is <= 0.
Vec posterior_covariance(const PooledPosterior& pooled);

}  // namespace upscore
