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

#include "upscore/pooling.hpp"

#include <string>

#include "upscore/errors.hpp"

namespace upscore {

namespace {

// Elementwise Kahan accumulator over vectors of fixed dimension.
class CompensatedSum {
 public:
  explicit CompensatedSum(Index dim)
      : sum_(Vec::Zero(dim)), comp_(Vec::Zero(dim)) {}

  void add(const Vec& term) {
    for (Index i = 0; i < sum_.size(); ++i) {
      const double y = term[i] - comp_[i];
      const double t = sum_[i] + y;
      comp_[i] = (t - sum_[i]) - y;
      sum_[i] = t;
    }
  }

  const Vec& value() const { return sum_; }

 private:
  Vec sum_;
  Vec comp_;
};

void check_prior(const GaussianPrior& prior) {
  if (prior.mean.size() != prior.prec_diag.size()) {
    throw DimensionError("prior mean and precision dimensions differ");
  }
  if (prior.mean.size() == 0) {
    throw DimensionError("prior has zero dimension");
  }
  if (!prior.mean.allFinite() || !prior.prec_diag.allFinite()) {
    throw NumericError("non-finite prior");
  }
  if ((prior.prec_diag.array() <= 0.0).any()) {
    throw SingularError("prior precision must be strictly positive");
  }
}

void check_frame(const FramePosterior& frame, Index dim, std::size_t t) {
  if (frame.feat.size() != dim || frame.prec_diag.size() != dim) {
    throw DimensionError("frame " + std::to_string(t) +
                         " dimension does not match prior");
  }
  if (!frame.feat.allFinite() || !frame.prec_diag.allFinite()) {
    throw NumericError("non-finite values in frame " + std::to_string(t));
  }
  if ((frame.prec_diag.array() < 0.0).any()) {
    throw SingularError("negative precision in frame " + std::to_string(t));
  }
}

}  // namespace

PooledPosterior posterior_pool(const std::vector<FramePosterior>& frames,
                               const GaussianPrior& prior) {
  check_prior(prior);
  const Index dim = prior.mean.size();
  for (std::size_t t = 0; t < frames.size(); ++t) check_frame(frames[t], dim, t);

  PooledPosterior pooled;
  if (frames.empty()) {
    // Zero observations: the posterior is the prior, bit for bit.
    pooled.mean = prior.mean;
    pooled.prec_diag = prior.prec_diag;
    return pooled;
  }
  if (frames.size() <= kCompensatedSumThreshold) {
    Vec prec = prior.prec_diag;
    Vec weighted = prior.prec_diag.cwiseProduct(prior.mean);
    for (const auto& frame : frames) {
      prec += frame.prec_diag;
      weighted += frame.prec_diag.cwiseProduct(frame.feat);
    }
    pooled.prec_diag = std::move(prec);
    pooled.mean = weighted.cwiseQuotient(pooled.prec_diag);
  } else {
    CompensatedSum prec(dim);
    CompensatedSum weighted(dim);
    prec.add(prior.prec_diag);
    weighted.add(prior.prec_diag.cwiseProduct(prior.mean));
    for (const auto& frame : frames) {
      prec.add(frame.prec_diag);
      weighted.add(frame.prec_diag.cwiseProduct(frame.feat));
    }
    pooled.prec_diag = prec.value();
    pooled.mean = weighted.value().cwiseQuotient(pooled.prec_diag);
  }
  return pooled;
}

Vec posterior_covariance(const PooledPosterior& pooled) {
  if ((pooled.prec_diag.array() <= 0.0).any()) {
    throw SingularError("posterior precision has a nonpositive entry");
  }
  return pooled.prec_diag.cwiseInverse();
}

}  // namespace upscore
