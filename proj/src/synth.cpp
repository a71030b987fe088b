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

#include "upscore/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "upscore/errors.hpp"
#include "upscore/parallel.hpp"
#include "upscore/pooling.hpp"
#include "upscore/propagation.hpp"
#include "upscore/rng.hpp"

namespace upscore {

namespace {

void check_config(const SynthConfig& cfg) {
  if (cfg.latent_dim < 1 || cfg.embed_dim < 1) {
    throw ConfigError("dimensions must be at least 1");
  }
  if (cfg.n_speakers < 1 || cfg.utts_per_speaker < 1) {
    throw ConfigError("speaker and utterance counts must be at least 1");
  }
  if (!(cfg.duration_min_s > 0.0) ||
      !(cfg.duration_max_s >= cfg.duration_min_s)) {
    throw ConfigError("duration range must satisfy 0 < min <= max");
  }
  if (!(cfg.frames_per_second > 0.0)) {
    throw ConfigError("frame rate must be positive");
  }
  if (!(cfg.between_var > 0.0) || !(cfg.within_var > 0.0) ||
      !(cfg.frame_noise_var > 0.0)) {
    throw ConfigError("variances must be positive");
  }
  if (!(cfg.heteroscedasticity >= 0.0)) {
    throw ConfigError("heteroscedasticity must be nonnegative");
  }
  if (cfg.speaker_rank < 0 || cfg.speaker_rank > cfg.latent_dim) {
    throw ConfigError("speaker rank must be between 0 and latent_dim");
  }
  if (!(cfg.prior_precision > 0.0)) {
    throw ConfigError("prior precision must be positive");
  }
  if (!(cfg.embed_scale > 0.0)) {
    throw ConfigError("embedding scale must be positive");
  }
  if (!(cfg.precision_scale > 0.0)) {
    throw ConfigError("precision scale must be positive");
  }
}

std::string utt_id(int speaker, int utt) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%04d_utt%03d", speaker, utt);
  return buf;
}

std::string speaker_id(int speaker) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "spk%04d", speaker);
  return buf;
}

Vec sample_normal_vec(NormalSampler& rng, Index d, double variance) {
  const double sd = std::sqrt(variance);
  Vec v(d);
  for (Index i = 0; i < d; ++i) {
    v[i] = sd * rng.normal();
  }
  return v;
}

AffineLayer make_layer(const SynthConfig& cfg) {
  NormalSampler rng(derive_seed(cfg.seed, kStreamLayer));
  const double sd = cfg.embed_scale / std::sqrt(static_cast<double>(cfg.latent_dim));
  AffineLayer layer;
  layer.weight.resize(cfg.embed_dim, cfg.latent_dim);
  for (Index r = 0; r < cfg.embed_dim; ++r) {
    for (Index c = 0; c < cfg.latent_dim; ++c) {
      layer.weight(r, c) = sd * rng.normal();
    }
  }
  layer.bias = Vec::Zero(cfg.embed_dim);
  return layer;
}

UncertainEmbedding make_utterance(const SynthConfig& cfg,
                                  const AffineLayer& layer,
                                  const BatchNormStats& bn,
                                  const GaussianPrior& prior,
                                  const Vec& speaker_mean, int speaker,
                                  int utt) {
  NormalSampler rng(derive_seed(cfg.seed, kStreamUtterance,
                                static_cast<std::uint64_t>(speaker),
                                static_cast<std::uint64_t>(utt)));
  const double duration =
      cfg.duration_min_s +
      (cfg.duration_max_s - cfg.duration_min_s) * rng.uniform();
  const auto frames_count = static_cast<std::size_t>(std::max<long>(
      1, std::lround(duration * cfg.frames_per_second)));

  const double h = cfg.heteroscedasticity;
  const double noise_var =
      cfg.frame_noise_var * std::exp(h * rng.normal() - 0.5 * h * h);

  const Vec center =
      speaker_mean + sample_normal_vec(rng, cfg.latent_dim, cfg.within_var);

  const Vec prec_diag =
      Vec::Constant(cfg.latent_dim, cfg.precision_scale / noise_var);
  std::vector<FramePosterior> frames(frames_count);
  for (std::size_t t = 0; t < frames_count; ++t) {
    frames[t].feat = center + sample_normal_vec(rng, cfg.latent_dim, noise_var);
    frames[t].prec_diag = prec_diag;
  }

  const PooledPosterior pooled = posterior_pool(frames, prior);
  return propagate(pooled, bn, layer, utt_id(speaker, utt), duration);
}

}  // namespace

SynthConfig full_scale_profile() {
  SynthConfig cfg;
  cfg.latent_dim = 64;
  cfg.embed_dim = 192;
  return cfg;
}

SynthCorpus generate_corpus(const SynthConfig& cfg) {
  check_config(cfg);
  const AffineLayer layer = make_layer(cfg);
  const BatchNormStats bn = BatchNormStats::identity(cfg.latent_dim);
  GaussianPrior prior;
  prior.mean = Vec::Zero(cfg.latent_dim);
  prior.prec_diag = Vec::Constant(cfg.latent_dim, cfg.prior_precision);

  std::vector<std::vector<UncertainEmbedding>> per_speaker(
      static_cast<std::size_t>(cfg.n_speakers));
  parallel_for(per_speaker.size(), [&](std::size_t s) {
    const int speaker = static_cast<int>(s);
    NormalSampler spk_rng(
        derive_seed(cfg.seed, kStreamSpeaker, static_cast<std::uint64_t>(s)));
    const Index rank =
        cfg.speaker_rank == 0 ? cfg.latent_dim : cfg.speaker_rank;
    Vec speaker_mean = Vec::Zero(cfg.latent_dim);
    speaker_mean.head(rank) =
        sample_normal_vec(spk_rng, rank, cfg.between_var);
    auto& utts = per_speaker[s];
    utts.reserve(static_cast<std::size_t>(cfg.utts_per_speaker));
    for (int u = 0; u < cfg.utts_per_speaker; ++u) {
      utts.push_back(
          make_utterance(cfg, layer, bn, prior, speaker_mean, speaker, u));
    }
  });

  SynthCorpus corpus;
  for (int s = 0; s < cfg.n_speakers; ++s) {
    for (auto& emb : per_speaker[static_cast<std::size_t>(s)]) {
      corpus.labels[emb.id] = speaker_id(s);
      corpus.embeddings.emplace(emb.id, std::move(emb));
    }
  }
  return corpus;
}

std::vector<Trial> generate_trials(const LabelMap& labels, std::size_t n_target,
                                   std::size_t n_nontarget,
                                   std::uint64_t seed) {
  // Canonical utterance order: LabelMap iterates sorted by id.
  std::vector<std::string> ids;
  std::vector<std::string> speakers;
  ids.reserve(labels.size());
  for (const auto& [id, speaker] : labels) {
    ids.push_back(id);
    speakers.push_back(speaker);
  }
  const std::size_t n = ids.size();

  std::size_t same_pairs = 0;
  {
    std::map<std::string, std::size_t> counts;
    for (const auto& s : speakers) {
      ++counts[s];
    }
    for (const auto& [s, c] : counts) {
      (void)s;
      same_pairs += c * (c - 1);
    }
  }
  const std::size_t cross_pairs = n * (n - 1) - same_pairs;
  if (n_target > same_pairs) {
    throw SamplingError("requested more target pairs than exist");
  }
  if (n_nontarget > cross_pairs) {
    throw SamplingError("requested more nontarget pairs than exist");
  }

  NormalSampler rng(derive_seed(seed, kStreamTrials));
  std::vector<Trial> trials;
  trials.reserve(n_target + n_nontarget);

  if (n_target > 0) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pool;
    pool.reserve(same_pairs);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && speakers[i] == speakers[j]) {
          pool.emplace_back(static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(j));
        }
      }
    }
    // Partial Fisher-Yates: the first n_target slots end up a uniform
    // sample without replacement.
    for (std::size_t k = 0; k < n_target; ++k) {
      const std::size_t j = k + rng.below(pool.size() - k);
      std::swap(pool[k], pool[j]);
      Trial t;
      t.enrol_id = ids[pool[k].first];
      t.test_id = ids[pool[k].second];
      t.is_target = true;
      trials.push_back(std::move(t));
    }
  }

  if (n_nontarget > 0) {
    if (n_nontarget * 2 > cross_pairs) {
      // Dense request: enumerate and shuffle, rejection would stall.
      std::vector<std::pair<std::uint32_t, std::uint32_t>> pool;
      pool.reserve(cross_pairs);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j && speakers[i] != speakers[j]) {
            pool.emplace_back(static_cast<std::uint32_t>(i),
                              static_cast<std::uint32_t>(j));
          }
        }
      }
      for (std::size_t k = 0; k < n_nontarget; ++k) {
        const std::size_t j = k + rng.below(pool.size() - k);
        std::swap(pool[k], pool[j]);
        Trial t;
        t.enrol_id = ids[pool[k].first];
        t.test_id = ids[pool[k].second];
        t.is_target = false;
        trials.push_back(std::move(t));
      }
    } else {
      std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
      while (seen.size() < n_nontarget) {
        const std::uint64_t i = rng.below(n);
        const std::uint64_t j = rng.below(n);
        if (i == j || speakers[i] == speakers[j]) {
          continue;
        }
        if (!seen.emplace(i, j).second) {
          continue;
        }
        Trial t;
        t.enrol_id = ids[i];
        t.test_id = ids[j];
        t.is_target = false;
        trials.push_back(std::move(t));
      }
    }
  }

  return trials;
}

}  // namespace upscore
