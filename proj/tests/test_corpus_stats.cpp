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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "upscore/corpus_stats.hpp"
#include "upscore/errors.hpp"

using namespace upscore;

namespace {

void add_point(EmbeddingMap& embeddings, LabelMap& labels,
               const std::string& id, const std::string& speaker,
               const Vec& mean, const Vec& unc) {
  UncertainEmbedding e;
  e.id = id;
  e.mean = mean;
  e.uncertainty_diag = unc;
  embeddings.emplace(id, std::move(e));
  labels[id] = speaker;
}

// Two speakers, two one-dimensional utterances each: A at -1 and +1,
// B at 3 and 5.
void four_point_dataset(EmbeddingMap& embeddings, LabelMap& labels) {
  add_point(embeddings, labels, "a0", "A", Vec{{-1.0}}, Vec{{0.5}});
  add_point(embeddings, labels, "a1", "A", Vec{{1.0}}, Vec{{1.5}});
  add_point(embeddings, labels, "b0", "B", Vec{{3.0}}, Vec{{2.5}});
  add_point(embeddings, labels, "b1", "B", Vec{{5.0}}, Vec{{3.5}});
}

}  // namespace

TEST_CASE("covariances match the four-point hand computation") {
  EmbeddingMap embeddings;
  LabelMap labels;
  four_point_dataset(embeddings, labels);

  const CovarianceReport r = estimate_covariances(embeddings, labels);
  CHECK(r.n_utts == 4);
  CHECK(r.n_speakers == 2);
  // Class means 0 and 4, grand mean 2; scatters 4, 8 and 20 over
  // divisors 2, 1 and 3.
  CHECK(r.within_diag[0] == 2.0);
  CHECK(r.between_diag[0] == 8.0);
  CHECK(r.total_diag[0] == 20.0 / 3.0);
  CHECK(r.avg_uncertainty_diag[0] == 2.0);
}

TEST_CASE("a single speaker has no between-class scatter") {
  EmbeddingMap embeddings;
  LabelMap labels;
  add_point(embeddings, labels, "u0", "A", Vec{{1.0, 0.0}}, Vec::Zero(2));
  add_point(embeddings, labels, "u1", "A", Vec{{3.0, 2.0}}, Vec::Zero(2));
  add_point(embeddings, labels, "u2", "A", Vec{{5.0, 4.0}}, Vec::Zero(2));
  const CovarianceReport r = estimate_covariances(embeddings, labels);
  CHECK((r.between_diag.array() == 0.0).all());
  CHECK((r.within_diag.array() > 0.0).all());
}

TEST_CASE("identical embeddings leave every scatter at zero") {
  EmbeddingMap embeddings;
  LabelMap labels;
  const Vec point = Vec{{0.4, -1.2}};
  add_point(embeddings, labels, "u0", "A", point, Vec::Zero(2));
  add_point(embeddings, labels, "u1", "A", point, Vec::Zero(2));
  add_point(embeddings, labels, "u2", "B", point, Vec::Zero(2));
  add_point(embeddings, labels, "u3", "B", point, Vec::Zero(2));
  const CovarianceReport r = estimate_covariances(embeddings, labels);
  CHECK((r.within_diag.array() == 0.0).all());
  CHECK((r.between_diag.array() == 0.0).all());
  CHECK((r.total_diag.array() == 0.0).all());
}

TEST_CASE("the report ignores container insertion order") {
  auto rng = testsup::make_rng(40);
  std::vector<std::string> ids;
  std::vector<Vec> means;
  std::vector<Vec> uncs;
  std::vector<std::string> speakers;
  for (int i = 0; i < 12; ++i) {
    ids.push_back("utt" + std::to_string(i));
    speakers.push_back("spk" + std::to_string(i % 4));
    means.push_back(testsup::random_vec(rng, 3, 2.0));
    uncs.push_back(testsup::random_uniform_vec(rng, 3, 0.1, 1.0));
  }

  EmbeddingMap forward;
  LabelMap forward_labels;
  for (int i = 0; i < 12; ++i) {
    add_point(forward, forward_labels, ids[i], speakers[i], means[i], uncs[i]);
  }
  EmbeddingMap backward;
  LabelMap backward_labels;
  for (int i = 11; i >= 0; --i) {
    add_point(backward, backward_labels, ids[i], speakers[i], means[i],
              uncs[i]);
  }

  const CovarianceReport a = estimate_covariances(forward, forward_labels);
  const CovarianceReport b = estimate_covariances(backward, backward_labels);
  CHECK((a.within_diag.array() == b.within_diag.array()).all());
  CHECK((a.between_diag.array() == b.between_diag.array()).all());
  CHECK((a.total_diag.array() == b.total_diag.array()).all());
  CHECK((a.avg_uncertainty_diag.array() == b.avg_uncertainty_diag.array())
            .all());
}

TEST_CASE("estimates converge to the generating covariances") {
  auto rng = testsup::make_rng(41);
  const Index d = 8;
  const double between_var = 2.0;
  const double within_var = 1.0;
  EmbeddingMap embeddings;
  LabelMap labels;
  for (int s = 0; s < 200; ++s) {
    const Vec speaker_mean =
        testsup::random_vec(rng, d, std::sqrt(between_var));
    for (int u = 0; u < 20; ++u) {
      char id[32];
      std::snprintf(id, sizeof(id), "s%03d_u%02d", s, u);
      const Vec mean =
          speaker_mean + testsup::random_vec(rng, d, std::sqrt(within_var));
      add_point(embeddings, labels, id, "s" + std::to_string(s), mean,
                Vec::Zero(d));
    }
  }
  const CovarianceReport r = estimate_covariances(embeddings, labels);
  // Tolerances follow the estimator spread: within averages 3800 residuals
  // per entry (about 2.3% relative sd), while between and the dominant part
  // of total rest on only 200 speaker draws (about 10% sd per entry, 3.5%
  // for the entry average).
  for (Index i = 0; i < d; ++i) {
    CHECK(std::abs(r.within_diag[i] / within_var - 1.0) <= 0.05);
    CHECK(std::abs(r.total_diag[i] / (between_var + within_var) - 1.0) <= 0.15);
  }
  CHECK(std::abs(r.between_diag.mean() / between_var - 1.0) <= 0.12);
}

TEST_CASE("covariance estimation rejects inconsistent input") {
  EmbeddingMap embeddings;
  LabelMap labels;
  CHECK_THROWS_AS(estimate_covariances(embeddings, labels), EstimationError);

  four_point_dataset(embeddings, labels);
  labels.erase("b1");
  CHECK_THROWS_AS(estimate_covariances(embeddings, labels), EstimationError);

  labels["b1"] = "B";
  labels["ghost"] = "C";
  CHECK_THROWS_AS(estimate_covariances(embeddings, labels), EstimationError);
}

TEST_CASE("five-number summary interpolates quartiles linearly") {
  const FiveNumber f = five_number_summary(Vec{{5.0, 3.0, 1.0, 4.0, 2.0}});
  CHECK(f.min == 1.0);
  CHECK(f.q1 == 2.0);
  CHECK(f.median == 3.0);
  CHECK(f.q3 == 4.0);
  CHECK(f.max == 5.0);

  const FiveNumber even = five_number_summary(Vec{{1.0, 2.0, 3.0, 4.0}});
  CHECK(even.q1 == 1.75);
  CHECK(even.median == 2.5);
  CHECK(even.q3 == 3.25);

  const FiveNumber single = five_number_summary(Vec{{7.0}});
  CHECK(single.min == 7.0);
  CHECK(single.q1 == 7.0);
  CHECK(single.median == 7.0);
  CHECK(single.q3 == 7.0);
  CHECK(single.max == 7.0);

  const FiveNumber constant = five_number_summary(Vec::Constant(6, 2.5));
  CHECK(constant.min == 2.5);
  CHECK(constant.max == 2.5);
  CHECK(constant.median == 2.5);
}

TEST_CASE("boxplot summary wires up all four diagonals") {
  EmbeddingMap embeddings;
  LabelMap labels;
  four_point_dataset(embeddings, labels);
  const CovarianceReport r = estimate_covariances(embeddings, labels);
  const BoxplotSummary box = summarize_boxplot(r);
  CHECK(box.within.median == 2.0);
  CHECK(box.between.median == 8.0);
  CHECK(box.total.median == 20.0 / 3.0);
  CHECK(box.avg_uncertainty.median == 2.0);
}
