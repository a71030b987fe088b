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

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "upscore/errors.hpp"
#include "upscore/types.hpp"

namespace upscore {

// Cosine similarity between two embedding means: inner product over the
// product of Euclidean norms, clamped to [-1, 1] against rounding. Throws
// DegenerateError on a zero-norm input; zero-norm embeddings indicate
// upstream corruption and are never silently scored.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& enrol,
                                 const Eigen::MatrixBase<DerivedB>& test) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>,
                "mixed scalar types");
  if (enrol.size() != test.size() || enrol.size() == 0) {
    throw DimensionError("cosine requires equal nonzero dimensions");
  }
  if (!enrol.allFinite() || !test.allFinite()) {
    throw NumericError("non-finite embedding");
  }
  const Scalar ne = enrol.norm();
  const Scalar nt = test.norm();
  if (ne == Scalar(0) || nt == Scalar(0)) {
    throw DegenerateError("zero-norm embedding");
  }
  // Equal inputs have cosine exactly 1; the clamp below cannot rescue the
  // quotient when the rounded norm product lands above the inner product.
  if ((enrol.array() == test.array()).all()) {
    return Scalar(1);
  }
  const Scalar s = enrol.dot(test) / (ne * nt);
  return std::clamp(s, Scalar(-1), Scalar(1));
}

// Length of an embedding under a diagonal covariance: the distance from the
// origin to the vector endpoint with each dimension weighted by its inverse
// variance,
//
//   len = sqrt( sum_i v_i^2 / sigma_i )
//
// With sigma = 1 in every dimension this is the Euclidean norm. Throws
// SingularError if any sigma entry is <= 0.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar mahalanobis_length(
    const Eigen::MatrixBase<DerivedA>& v,
    const Eigen::MatrixBase<DerivedB>& sigma_diag) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>,
                "mixed scalar types");
  if (v.size() != sigma_diag.size() || v.size() == 0) {
    throw DimensionError("vector and covariance dimensions differ");
  }
  if (!v.allFinite() || !sigma_diag.allFinite()) {
    throw NumericError("non-finite mahalanobis input");
  }
  if ((sigma_diag.array() <= Scalar(0)).any()) {
    throw SingularError("covariance diagonal must be strictly positive");
  }
  return std::sqrt((v.array().square() / sigma_diag.array()).sum());
}

// Ratio of the Euclidean length to the Mahalanobis length,
//
//   alpha = sqrt( (v' v) / (v' Sigma^-1 v) ).
//
// This is the per-side scale an uncertainty-propagated score applies on top
// of the plain cosine: score == alpha_e * alpha_t * cosine. When Sigma >= I
// elementwise the inverse shrinks every coordinate, so the Mahalanobis
// length never exceeds the Euclidean one and alpha is at least 1. Throws
// DegenerateError on zero norm.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar alpha_factor(
    const Eigen::MatrixBase<DerivedA>& v,
    const Eigen::MatrixBase<DerivedB>& sigma_diag) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar norm = v.norm();
  if (norm == Scalar(0)) {
    throw DegenerateError("zero-norm embedding");
  }
  return norm / mahalanobis_length(v, sigma_diag);
}

// Builds the per-side diagonal covariances for one uncertainty-propagated
// variant. With U_e, U_t the per-embedding uncertainty diagonals, T the
// total-covariance diagonal and d the embedding dimension:
//
//   kUpCos1:  Sigma_e = U_e / d + I          Sigma_t = U_t / d + I
//   kUpCos2:  Sigma_e = (U_e + T) / d        Sigma_t = (U_t + T) / d
//   kUpCos3:  Sigma_e = Sigma_t = (U_e + U_t) / d + I
//   kUpCos4:  Sigma_e = Sigma_t = (U_e + U_t + T) / d
//
// Variants 2 and 4 require total_diag; ConfigError otherwise. A resulting
// entry <= 0 throws SingularError.
SigmaPair build_sigma(ScoreVariant variant, const Vec& unc_enrol,
                      const Vec& unc_test, const std::optional<Vec>& total_diag,
                      Index d);

// Scores one trial. kCos reduces to cosine() with both alphas recorded as 1;
// the uncertainty-propagated variants divide the inner product by the two
// Mahalanobis lengths built from build_sigma(). Those scores are not clamped:
// their range extends beyond [-1, 1] by design.
TrialScore up_cos_score(const UncertainEmbedding& enrol,
                        const UncertainEmbedding& test, ScoreVariant variant,
                        const std::optional<Vec>& total_diag = std::nullopt);

// Verifies that every trial id resolves in the embedding collection; throws
// MissingIdError listing every missing id (sorted, deduplicated) otherwise.
void require_trial_ids(const std::vector<Trial>& trials,
                       const EmbeddingMap& embeddings);

// Scores a whole trial list against a keyed embedding collection. Trials may
// be scored in parallel (UPSCORE_THREADS) but the output order always equals
// the input order. If any trial id resolves to no embedding, throws
// MissingIdError listing every missing id; nothing is scored in that case.
std::vector<TrialScore> score_trials(
    const std::vector<Trial>& trials, const EmbeddingMap& embeddings,
    ScoreVariant variant, const std::optional<Vec>& total_diag = std::nullopt);

// Parses "cos", "up1".."up4"; ConfigError otherwise.
ScoreVariant parse_variant(const std::string& name);
std::string variant_name(ScoreVariant variant);

}  // namespace upscore
