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
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "upscore/errors.hpp"
#include "upscore/scoring.hpp"

using namespace upscore;

namespace {

UncertainEmbedding make_embedding(std::string id, const Vec& mean,
                                  const Vec& unc) {
  UncertainEmbedding e;
  e.id = std::move(id);
  e.mean = mean;
  e.uncertainty_diag = unc;
  return e;
}

UncertainEmbedding random_embedding(NormalSampler& rng, std::string id,
                                    Index d, double unc_hi = 3.0) {
  return make_embedding(std::move(id), testsup::random_vec(rng, d, 2.0),
                        testsup::random_uniform_vec(rng, d, 0.0, unc_hi));
}

const std::vector<ScoreVariant> kUpVariants = {
    ScoreVariant::kUpCos1, ScoreVariant::kUpCos2, ScoreVariant::kUpCos3,
    ScoreVariant::kUpCos4};

}  // namespace

TEST_CASE("cosine matches the hand-evaluated examples") {
  CHECK(cosine(Vec{{0.6, 0.8}}, Vec{{0.6, 0.8}}) == 1.0);
  CHECK(cosine(Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}) == 0.0);
  CHECK(cosine(Vec{{1.0, 0.0}}, Vec{{1.0, 1.0}}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("cosine stays clamped and rejects degenerate input") {
  const Vec v = Vec{{1e-160, 2e-160}};
  CHECK(cosine(v, v) == 1.0);
  CHECK(cosine(v, Vec{{-1e-160, -2e-160}}) == -1.0);
  CHECK_THROWS_AS(cosine(Vec::Zero(2), Vec::Ones(2)), DegenerateError);
  CHECK_THROWS_AS(cosine(Vec::Ones(3), Vec::Ones(2)), DimensionError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(cosine(Vec{{nan, 1.0}}, Vec::Ones(2)), NumericError);
}

TEST_CASE("weighted length matches the hand-evaluated examples") {
  CHECK(mahalanobis_length(Vec{{3.0, 4.0}}, Vec{{1.0, 1.0}}) == 5.0);
  CHECK(mahalanobis_length(Vec{{0.0, 0.0}}, Vec{{2.0, 3.0}}) == 0.0);
  CHECK(mahalanobis_length(Vec{{1.0, 2.0}}, Vec{{1.0, 4.0}}) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(mahalanobis_length(Vec::Ones(2), Vec{{1.0, 0.0}}),
                  SingularError);
}

TEST_CASE("unit covariance reduces the weighted length to the norm") {
  auto rng = testsup::make_rng(20);
  for (int rep = 0; rep < 100; ++rep) {
    const Vec v = testsup::random_vec(rng, 8, 3.0);
    CHECK(testsup::rel_err(mahalanobis_length(v, Vec::Ones(8)), v.norm()) <=
          1e-12);
  }
}

TEST_CASE("per-side scale factor matches the hand-evaluated examples") {
  CHECK(alpha_factor(Vec{{0.3, -0.4}}, Vec::Ones(2)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(alpha_factor(Vec{{1.0, 0.0}}, Vec{{2.0, 2.0}}) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(alpha_factor(Vec{{1.0, 1.0}}, Vec{{4.0, 4.0}}) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(alpha_factor(Vec::Zero(2), Vec::Ones(2)), DegenerateError);
}

TEST_CASE("per-variant covariance construction matches the table") {
  const Vec zero = Vec::Zero(2);
  const SigmaPair identity =
      build_sigma(ScoreVariant::kUpCos1, zero, zero, std::nullopt, 2);
  CHECK((identity.enrol_diag.array() == 1.0).all());
  CHECK((identity.test_diag.array() == 1.0).all());

  const SigmaPair shared = build_sigma(ScoreVariant::kUpCos3, Vec{{2.0, 0.0}},
                                       Vec{{0.0, 2.0}}, std::nullopt, 2);
  CHECK(shared.enrol_diag[0] == 2.0);
  CHECK(shared.enrol_diag[1] == 2.0);
  CHECK((shared.enrol_diag.array() == shared.test_diag.array()).all());

  const SigmaPair total = build_sigma(ScoreVariant::kUpCos4, Vec::Ones(2),
                                      Vec::Ones(2), Vec{{2.0, 2.0}}, 2);
  CHECK(total.enrol_diag[0] == 2.0);
  CHECK(total.enrol_diag[1] == 2.0);

  CHECK_THROWS_AS(
      build_sigma(ScoreVariant::kUpCos2, zero, zero, std::nullopt, 2),
      ConfigError);
  CHECK_THROWS_AS(
      build_sigma(ScoreVariant::kUpCos4, zero, zero, Vec::Zero(2), 2),
      SingularError);
}

TEST_CASE("trial scoring matches the hand-evaluated examples") {
  const auto e = make_embedding("e", Vec{{1.0, 0.0}}, Vec{{2.0, 2.0}});
  const auto t = make_embedding("t", Vec{{1.0, 0.0}}, Vec{{2.0, 2.0}});

  const TrialScore amplified = up_cos_score(e, t, ScoreVariant::kUpCos1);
  CHECK(amplified.score == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(amplified.alpha_enrol.has_value());
  REQUIRE(amplified.alpha_test.has_value());
  CHECK(*amplified.alpha_enrol ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(*amplified.alpha_test ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const auto e0 = make_embedding("e", Vec{{1.0, 0.0}}, Vec::Zero(2));
  const auto t0 = make_embedding("t", Vec{{1.0, 0.0}}, Vec::Zero(2));
  const TrialScore via_total =
      up_cos_score(e0, t0, ScoreVariant::kUpCos2, Vec{{2.0, 2.0}});
  CHECK(via_total.score == doctest::Approx(1.0).epsilon(1e-12));

  const TrialScore plain = up_cos_score(e, t, ScoreVariant::kCos);
  CHECK(plain.score == 1.0);
  CHECK(*plain.alpha_enrol == 1.0);
  CHECK(*plain.alpha_test == 1.0);
}

TEST_CASE("zero uncertainty reduces variants 1 and 3 to cosine") {
  auto rng = testsup::make_rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const Index d = 2 + static_cast<Index>(rng.below(14));
    const auto e = make_embedding("e", testsup::random_vec(rng, d, 2.0),
                                  Vec::Zero(d));
    const auto t = make_embedding("t", testsup::random_vec(rng, d, 2.0),
                                  Vec::Zero(d));
    const double cos = cosine(e.mean, t.mean);
    for (ScoreVariant v : {ScoreVariant::kUpCos1, ScoreVariant::kUpCos3}) {
      CHECK(std::abs(up_cos_score(e, t, v).score - cos) <= 1e-12);
    }
  }
}

TEST_CASE("every variant satisfies the product decomposition") {
  auto rng = testsup::make_rng(22);
  for (int rep = 0; rep < 200; ++rep) {
    const Index d = 2 + static_cast<Index>(rng.below(30));
    const auto e = random_embedding(rng, "e", d);
    const auto t = random_embedding(rng, "t", d);
    const Vec total = testsup::random_uniform_vec(rng, d, 0.5, 4.0);
    const double cos = cosine(e.mean, t.mean);
    for (ScoreVariant v : kUpVariants) {
      const TrialScore s = up_cos_score(e, t, v, total);
      REQUIRE(s.alpha_enrol.has_value());
      REQUIRE(s.alpha_test.has_value());
      CHECK(std::abs(s.score - *s.alpha_enrol * *s.alpha_test * cos) <= 1e-9);
    }
  }
}

TEST_CASE("scoring is exactly symmetric in enrol and test") {
  auto rng = testsup::make_rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    const Index d = 2 + static_cast<Index>(rng.below(10));
    const auto e = random_embedding(rng, "e", d);
    const auto t = random_embedding(rng, "t", d);
    const Vec total = testsup::random_uniform_vec(rng, d, 0.5, 4.0);
    for (ScoreVariant v : kUpVariants) {
      const TrialScore ab = up_cos_score(e, t, v, total);
      const TrialScore ba = up_cos_score(t, e, v, total);
      CHECK(ab.score == ba.score);
      CHECK(*ab.alpha_enrol == *ba.alpha_test);
      CHECK(*ab.alpha_test == *ba.alpha_enrol);
    }
  }
}

TEST_CASE("rescaling a mean with covariances fixed never moves the score") {
  auto rng = testsup::make_rng(24);
  for (int rep = 0; rep < 100; ++rep) {
    const Index d = 4;
    const auto e = random_embedding(rng, "e", d);
    const auto t = random_embedding(rng, "t", d);
    const Vec total = testsup::random_uniform_vec(rng, d, 0.5, 4.0);
    for (double c : {0.5, 3.7}) {
      auto scaled = e;
      scaled.mean = c * e.mean;
      for (ScoreVariant v : kUpVariants) {
        const double a = up_cos_score(e, t, v, total).score;
        const double b = up_cos_score(scaled, t, v, total).score;
        CHECK(testsup::rel_err(b, a) <= 1e-9);
      }
    }
  }
}

TEST_CASE("variants 1 and 3 only ever amplify") {
  // Both variants add the identity to a nonnegative diagonal, so each side's
  // covariance dominates I elementwise. Inverting shrinks every coordinate,
  // the weighted length drops below the Euclidean one, and each alpha ends
  // up at 1 or above.
  auto rng = testsup::make_rng(25);
  for (int rep = 0; rep < 200; ++rep) {
    const Index d = 2 + static_cast<Index>(rng.below(14));
    const auto e = random_embedding(rng, "e", d);
    const auto t = random_embedding(rng, "t", d);
    const double cos = cosine(e.mean, t.mean);
    for (ScoreVariant v : {ScoreVariant::kUpCos1, ScoreVariant::kUpCos3}) {
      const TrialScore s = up_cos_score(e, t, v);
      CHECK(*s.alpha_enrol >= 1.0 - 1e-12);
      CHECK(*s.alpha_test >= 1.0 - 1e-12);
      CHECK(std::abs(s.score) >= std::abs(cos) * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("variants 2 and 4 scale on both sides of one") {
  const auto e = make_embedding("e", Vec{{1.0, 2.0}}, Vec::Zero(2));
  const auto t = make_embedding("t", Vec{{2.0, 1.0}}, Vec::Zero(2));
  // Small total covariance: sigma entries drop below 1 and amplify.
  const TrialScore small =
      up_cos_score(e, t, ScoreVariant::kUpCos2, Vec{{0.5, 0.5}});
  CHECK(*small.alpha_enrol * *small.alpha_test < 1.0);
  // Large total covariance: sigma entries exceed 1 and dampen.
  const TrialScore large =
      up_cos_score(e, t, ScoreVariant::kUpCos4, Vec{{8.0, 8.0}});
  CHECK(*large.alpha_enrol * *large.alpha_test > 1.0);
}

TEST_CASE("growing enrol uncertainty never lowers the enrol factor") {
  auto rng = testsup::make_rng(26);
  for (int rep = 0; rep < 50; ++rep) {
    const Index d = 5;
    auto e = random_embedding(rng, "e", d, 1.0);
    const auto t = random_embedding(rng, "t", d, 1.0);
    double last = 0.0;
    for (int step = 0; step < 5; ++step) {
      const TrialScore s = up_cos_score(e, t, ScoreVariant::kUpCos1);
      CHECK(*s.alpha_enrol >= last);
      last = *s.alpha_enrol;
      e.uncertainty_diag =
          e.uncertainty_diag + testsup::random_uniform_vec(rng, d, 0.1, 1.0);
    }
  }
}

TEST_CASE("variant names parse and print consistently") {
  for (const std::string name : {"cos", "up1", "up2", "up3", "up4"}) {
    CHECK(variant_name(parse_variant(name)) == name);
  }
  CHECK_THROWS_AS(parse_variant("up5"), ConfigError);
  CHECK_THROWS_AS(parse_variant(""), ConfigError);
}

TEST_CASE("batch scoring preserves trial order and matches single calls") {
  auto rng = testsup::make_rng(27);
  EmbeddingMap embeddings;
  const Index d = 6;
  for (int i = 0; i < 8; ++i) {
    const std::string id = "utt" + std::to_string(i);
    embeddings.emplace(id, random_embedding(rng, id, d));
  }
  std::vector<Trial> trials;
  for (int i = 0; i < 8; ++i) {
    Trial tr;
    tr.enrol_id = "utt" + std::to_string(i);
    tr.test_id = "utt" + std::to_string((i * 3 + 1) % 8);
    trials.push_back(tr);
  }
  const Vec total = testsup::random_uniform_vec(rng, d, 0.5, 2.0);
  for (ScoreVariant v :
       {ScoreVariant::kCos, ScoreVariant::kUpCos1, ScoreVariant::kUpCos4}) {
    const auto scored = score_trials(trials, embeddings, v, total);
    REQUIRE(scored.size() == trials.size());
    for (std::size_t i = 0; i < trials.size(); ++i) {
      CHECK(scored[i].enrol_id == trials[i].enrol_id);
      CHECK(scored[i].test_id == trials[i].test_id);
      const TrialScore direct =
          up_cos_score(embeddings.at(trials[i].enrol_id),
                       embeddings.at(trials[i].test_id), v, total);
      CHECK(scored[i].score == direct.score);
    }
  }
  CHECK(score_trials({}, embeddings, ScoreVariant::kCos).empty());
}

TEST_CASE("a self trial under plain cosine scores exactly one") {
  auto rng = testsup::make_rng(28);
  EmbeddingMap embeddings;
  embeddings.emplace("a", random_embedding(rng, "a", 4));
  Trial tr;
  tr.enrol_id = "a";
  tr.test_id = "a";
  const auto scored = score_trials({tr}, embeddings, ScoreVariant::kCos);
  CHECK(scored.at(0).score == 1.0);
}

TEST_CASE("missing trial ids are reported together and nothing is scored") {
  auto rng = testsup::make_rng(29);
  EmbeddingMap embeddings;
  embeddings.emplace("present", random_embedding(rng, "present", 4));
  std::vector<Trial> trials(3);
  trials[0] = {"present", "ghost_b", std::nullopt};
  trials[1] = {"ghost_a", "present", std::nullopt};
  trials[2] = {"ghost_b", "present", std::nullopt};
  try {
    score_trials(trials, embeddings, ScoreVariant::kCos);
    FAIL("expected an error for unresolved ids");
  } catch (const MissingIdError& err) {
    REQUIRE(err.ids().size() == 2);
    CHECK(err.ids()[0] == "ghost_a");
    CHECK(err.ids()[1] == "ghost_b");
    CHECK(std::string(err.what()).find("ghost_a") != std::string::npos);
  }
}
