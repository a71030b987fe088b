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

#include "upscore/scoring.hpp"

#include <set>
#include <sstream>

#include "upscore/parallel.hpp"

namespace upscore {

namespace {

void check_embedding(const UncertainEmbedding& e, Index d) {
  if (e.mean.size() != d || e.uncertainty_diag.size() != d) {
    throw DimensionError("embedding '" + e.id + "' has mismatched dimensions");
  }
  if (!e.mean.allFinite() || !e.uncertainty_diag.allFinite()) {
    throw NumericError("embedding '" + e.id + "' contains non-finite values");
  }
  if ((e.uncertainty_diag.array() < 0.0).any()) {
    throw SingularError("embedding '" + e.id +
                        "' has a negative uncertainty entry");
  }
}

void check_sigma_positive(const Vec& sigma) {
  if ((sigma.array() <= 0.0).any()) {
    throw SingularError("score covariance has a non-positive entry");
  }
}

}  // namespace

SigmaPair build_sigma(ScoreVariant variant, const Vec& unc_enrol,
                      const Vec& unc_test, const std::optional<Vec>& total_diag,
                      Index d) {
  if (d <= 0) {
    throw DimensionError("embedding dimension must be positive");
  }
  if (unc_enrol.size() != d || unc_test.size() != d) {
    throw DimensionError("uncertainty diagonal dimension mismatch");
  }
  const bool needs_total =
      variant == ScoreVariant::kUpCos2 || variant == ScoreVariant::kUpCos4;
  if (needs_total) {
    if (!total_diag) {
      throw ConfigError("variant " + variant_name(variant) +
                        " requires a total-covariance diagonal");
    }
    if (total_diag->size() != d) {
      throw DimensionError("total-covariance diagonal dimension mismatch");
    }
    if (!total_diag->allFinite()) {
      throw NumericError("total-covariance diagonal is non-finite");
    }
  }

  const double dd = static_cast<double>(d);
  SigmaPair out;
  switch (variant) {
    case ScoreVariant::kUpCos1:
      out.enrol_diag = unc_enrol / dd + Vec::Ones(d);
      out.test_diag = unc_test / dd + Vec::Ones(d);
      break;
    case ScoreVariant::kUpCos2:
      out.enrol_diag = (unc_enrol + *total_diag) / dd;
      out.test_diag = (unc_test + *total_diag) / dd;
      break;
    case ScoreVariant::kUpCos3:
      // Elementwise a + b commutes bitwise, so swapping the sides of a trial
      // rebuilds the identical shared covariance.
      out.enrol_diag = (unc_enrol + unc_test) / dd + Vec::Ones(d);
      out.test_diag = out.enrol_diag;
      break;
    case ScoreVariant::kUpCos4:
      out.enrol_diag = (unc_enrol + unc_test + *total_diag) / dd;
      out.test_diag = out.enrol_diag;
      break;
    case ScoreVariant::kCos:
      throw ConfigError("cosine scoring has no covariance to build");
  }
  check_sigma_positive(out.enrol_diag);
  check_sigma_positive(out.test_diag);
  return out;
}

TrialScore up_cos_score(const UncertainEmbedding& enrol,
                        const UncertainEmbedding& test, ScoreVariant variant,
                        const std::optional<Vec>& total_diag) {
  const Index d = enrol.mean.size();
  check_embedding(enrol, d);
  check_embedding(test, d);

  TrialScore out;
  out.enrol_id = enrol.id;
  out.test_id = test.id;

  if (variant == ScoreVariant::kCos) {
    out.score = cosine(enrol.mean, test.mean);
    out.alpha_enrol = 1.0;
    out.alpha_test = 1.0;
    return out;
  }

  const SigmaPair sigma =
      build_sigma(variant, enrol.uncertainty_diag, test.uncertainty_diag,
                  total_diag, d);
  const double ml_e = mahalanobis_length(enrol.mean, sigma.enrol_diag);
  const double ml_t = mahalanobis_length(test.mean, sigma.test_diag);
  if (ml_e == 0.0 || ml_t == 0.0) {
    throw DegenerateError("zero-norm embedding");
  }
  // dot(e, t) == dot(t, e) bitwise and ml_e * ml_t == ml_t * ml_e bitwise,
  // so scoring (enrol, test) and (test, enrol) yields identical doubles.
  out.score = enrol.mean.dot(test.mean) / (ml_e * ml_t);
  out.alpha_enrol = alpha_factor(enrol.mean, sigma.enrol_diag);
  out.alpha_test = alpha_factor(test.mean, sigma.test_diag);
  if (!std::isfinite(out.score)) {
    throw NumericError("score is non-finite");
  }
  return out;
}

void require_trial_ids(const std::vector<Trial>& trials,
                       const EmbeddingMap& embeddings) {
  std::set<std::string> missing;
  for (const Trial& t : trials) {
    if (embeddings.find(t.enrol_id) == embeddings.end()) {
      missing.insert(t.enrol_id);
    }
    if (embeddings.find(t.test_id) == embeddings.end()) {
      missing.insert(t.test_id);
    }
  }
  if (!missing.empty()) {
    throw MissingIdError(
        std::vector<std::string>(missing.begin(), missing.end()));
  }
}

std::vector<TrialScore> score_trials(const std::vector<Trial>& trials,
                                     const EmbeddingMap& embeddings,
                                     ScoreVariant variant,
                                     const std::optional<Vec>& total_diag) {
  require_trial_ids(trials, embeddings);

  std::vector<TrialScore> scores(trials.size());
  parallel_for(trials.size(), [&](std::size_t i) {
    const Trial& t = trials[i];
    scores[i] = up_cos_score(embeddings.at(t.enrol_id),
                             embeddings.at(t.test_id), variant, total_diag);
  });
  return scores;
}

ScoreVariant parse_variant(const std::string& name) {
  if (name == "cos") return ScoreVariant::kCos;
  if (name == "up1") return ScoreVariant::kUpCos1;
  if (name == "up2") return ScoreVariant::kUpCos2;
  if (name == "up3") return ScoreVariant::kUpCos3;
  if (name == "up4") return ScoreVariant::kUpCos4;
  throw ConfigError("unknown score variant '" + name + "'");
}

std::string variant_name(ScoreVariant variant) {
  switch (variant) {
    case ScoreVariant::kCos:
      return "cos";
    case ScoreVariant::kUpCos1:
      return "up1";
    case ScoreVariant::kUpCos2:
      return "up2";
    case ScoreVariant::kUpCos3:
      return "up3";
    case ScoreVariant::kUpCos4:
      return "up4";
  }
  throw ConfigError("invalid score variant");
}

}  // namespace upscore
