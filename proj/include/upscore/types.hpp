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

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace upscore {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Vector<double>;
using Mat = Matrix<double>;
using Index = Eigen::Index;

// One frame-level observation: a latent feature vector together with the
// diagonal of its precision. Entries of prec_diag must be finite and >= 0;
// a zero entry means the frame carries no information in that dimension.
struct FramePosterior {
  Vec feat;
  Vec prec_diag;
};

// Proper Gaussian prior over the latent utterance vector. All precision
// entries must be > 0 so the posterior is defined even with zero frames.
struct GaussianPrior {
  Vec mean;
  Vec prec_diag;
};

// Utterance-level posterior produced by pooling. prec_diag dominates the
// prior precision elementwise: precision only accumulates.
struct PooledPosterior {
  Vec mean;
  Vec prec_diag;
};

// Inference-mode batch-normalization parameters. The transform per dimension
// is x -> gamma * (x - mu) / sqrt(var + eps) + beta. var + eps must be
// positive in every dimension.
struct BatchNormStats {
  Vec mu;
  Vec var;
  Vec gamma;
  Vec beta;
  double eps = 1e-5;

  static BatchNormStats identity(Index dim) {
    BatchNormStats bn;
    bn.mu = Vec::Zero(dim);
    bn.var = Vec::Ones(dim);
    bn.gamma = Vec::Ones(dim);
    bn.beta = Vec::Zero(dim);
    bn.eps = 0.0;
    return bn;
  }
};

// Fully-connected layer, out = weight * in + bias.
struct AffineLayer {
  Mat weight;
  Vec bias;
};

// A speaker embedding with a per-dimension uncertainty (the diagonal of the
// propagated posterior covariance). duration_s is carried through for
// duration analyses and may be absent.
struct UncertainEmbedding {
  std::string id;
  Vec mean;
  Vec uncertainty_diag;
  std::optional<double> duration_s;
};

enum class ScoreVariant { kCos, kUpCos1, kUpCos2, kUpCos3, kUpCos4 };

// Per-side diagonal covariances used for the Mahalanobis lengths in the
// scoring denominator.
struct SigmaPair {
  Vec enrol_diag;
  Vec test_diag;
};

// One verification trial. is_target is present only for labeled trial lists.
struct Trial {
  std::string enrol_id;
  std::string test_id;
  std::optional<bool> is_target;
};

// A scored trial. For uncertainty-propagated variants the per-side scale
// factors are recorded so that score == alpha_enrol * alpha_test * cos.
struct TrialScore {
  std::string enrol_id;
  std::string test_id;
  double score = 0.0;
  std::optional<double> alpha_enrol;
  std::optional<double> alpha_test;
};

using EmbeddingMap = std::unordered_map<std::string, UncertainEmbedding>;

// Speaker label per utterance id. Ordered so that iteration is canonical.
using LabelMap = std::map<std::string, std::string>;

inline EmbeddingMap make_embedding_map(std::vector<UncertainEmbedding> embeddings) {
  EmbeddingMap map;
  map.reserve(embeddings.size());
  for (auto& e : embeddings) {
    std::string id = e.id;
    map.emplace(std::move(id), std::move(e));
  }
  return map;
}

}  // namespace upscore
