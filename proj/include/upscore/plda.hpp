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

#include <vector>

#include "upscore/types.hpp"

namespace upscore {

// Diagonal two-covariance model: an embedding is a speaker variable drawn
// around mu with between-speaker covariance b_diag, plus within-speaker
// noise with covariance w_diag. All covariances diagonal.
struct PldaModel {
  Vec mu;
  Vec b_diag;
  Vec w_diag;
};

// Fits the model by moment matching on labeled embedding means: mu is the
// grand mean, w_diag the pooled within-class covariance diagonal (divisor
// N - K), b_diag the covariance diagonal of class means about mu (divisor
// K - 1, floored at 0). w_diag entries are floored at 1e-6 of the mean
// total variance (1e-12 when even that is zero) so degenerate inputs keep
// the likelihoods proper. Requires at least 2 speakers and more utterances
// than speakers; EstimationError otherwise.
PldaModel plda_fit(const EmbeddingMap& embeddings, const LabelMap& labels);

// Log-likelihood ratio log p(e, t | same speaker) - log p(e) - log p(t)
// under the two-covariance model, in closed form per dimension. With
// use_uncertainty set, the within covariance is augmented per side: the
// enrol side sees w + u_e, the test side w + u_t, in the joint and the
// marginals alike, so both hypotheses describe the same noisy measurement
// model. Augmented covariance entries <= 0 throw SingularError. The score
// is bitwise symmetric in (e, t) whenever u_e == u_t.
double plda_score(const UncertainEmbedding& enrol,
                  const UncertainEmbedding& test, const PldaModel& model,
                  bool use_uncertainty);

// Batch scoring with the same ordering and missing-id contract as
// score_trials.
std::vector<TrialScore> plda_score_trials(const std::vector<Trial>& trials,
                                          const EmbeddingMap& embeddings,
                                          const PldaModel& model,
                                          bool use_uncertainty);

}  // namespace upscore
