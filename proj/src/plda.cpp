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

#include "upscore/plda.hpp"

#include <cmath>

#include "upscore/corpus_stats.hpp"
#include "upscore/errors.hpp"
#include "upscore/parallel.hpp"
#include "upscore/scoring.hpp"

namespace upscore {

PldaModel plda_fit(const EmbeddingMap& embeddings, const LabelMap& labels) {
  const CovarianceReport report = estimate_covariances(embeddings, labels);
  if (report.n_speakers < 2) {
    throw EstimationError("model fit requires at least 2 speakers");
  }
  if (report.n_utts <= report.n_speakers) {
    throw EstimationError(
        "model fit requires at least one speaker with multiple utterances");
  }

  const Index d = report.within_diag.size();
  PldaModel model;
  // Grand mean accumulated in sorted-id order so the fit is permutation
  // invariant like the report it extends.
  Vec ordered_sum = Vec::Zero(d);
  for (const auto& [id, speaker] : labels) {
    (void)speaker;
    ordered_sum += embeddings.at(id).mean;
  }
  model.mu = ordered_sum / static_cast<double>(report.n_utts);

  model.b_diag = report.between_diag.cwiseMax(0.0);
  double floor_val = 1e-6 * report.total_diag.mean();
  if (!(floor_val > 0.0)) {
    floor_val = 1e-12;
  }
  model.w_diag = report.within_diag.cwiseMax(floor_val);
  return model;
}

namespace {

// Per-dimension LLR of the two-covariance model. Terms are grouped so that
// every subexpression either is identical after an (e, t) swap or combines
// two swapped values with a single commutative + or *; that makes the sum
// bitwise symmetric whenever both sides carry the same uncertainty.
double llr_dim(double e, double t, double b, double w_e, double w_t) {
  if (!(w_e > 0.0) || !(w_t > 0.0)) {
    throw SingularError("within covariance entry not positive");
  }
  const double ae = b + w_e;
  const double at = b + w_t;
  const double det = ae * at - b * b;
  if (!(det > 0.0)) {
    throw SingularError("joint covariance not positive definite");
  }
  const double e2 = e * e;
  const double t2 = t * t;
  const double et = e * t;
  const double quad = ((at * e2 + ae * t2) - 2.0 * b * et) / det;
  const double joint = -0.5 * (std::log(det) + quad);
  const double marginals =
      -0.5 * ((std::log(ae) + e2 / ae) + (std::log(at) + t2 / at));
  return joint - marginals;
}

}  // namespace

double plda_score(const UncertainEmbedding& enrol,
                  const UncertainEmbedding& test, const PldaModel& model,
                  bool use_uncertainty) {
  const Index d = model.mu.size();
  if (model.b_diag.size() != d || model.w_diag.size() != d) {
    throw DimensionError("model covariance dimensions differ from its mean");
  }
  if (enrol.mean.size() != d || test.mean.size() != d) {
    throw DimensionError("embedding dimension differs from model");
  }
  if (use_uncertainty &&
      (enrol.uncertainty_diag.size() != d || test.uncertainty_diag.size() != d)) {
    throw DimensionError("uncertainty dimension differs from model");
  }
  if ((model.b_diag.array() < 0.0).any()) {
    throw SingularError("between covariance entry negative");
  }

  double llr = 0.0;
  for (Index i = 0; i < d; ++i) {
    const double e = enrol.mean[i] - model.mu[i];
    const double t = test.mean[i] - model.mu[i];
    const double w_e = use_uncertainty
                           ? model.w_diag[i] + enrol.uncertainty_diag[i]
                           : model.w_diag[i];
    const double w_t = use_uncertainty
                           ? model.w_diag[i] + test.uncertainty_diag[i]
                           : model.w_diag[i];
    llr += llr_dim(e, t, model.b_diag[i], w_e, w_t);
  }
  if (!std::isfinite(llr)) {
    throw NumericError("log-likelihood ratio is non-finite");
  }
  return llr;
}

std::vector<TrialScore> plda_score_trials(const std::vector<Trial>& trials,
                                          const EmbeddingMap& embeddings,
                                          const PldaModel& model,
                                          bool use_uncertainty) {
  require_trial_ids(trials, embeddings);
  std::vector<TrialScore> scores(trials.size());
  parallel_for(trials.size(), [&](std::size_t i) {
    const Trial& t = trials[i];
    TrialScore& out = scores[i];
    out.enrol_id = t.enrol_id;
    out.test_id = t.test_id;
    out.score = plda_score(embeddings.at(t.enrol_id), embeddings.at(t.test_id),
                           model, use_uncertainty);
  });
  return scores;
}

}  // namespace upscore
