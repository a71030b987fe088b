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

#include <cstdint>
#include <vector>

#include "upscore/types.hpp"

namespace upscore {

// Configuration of the synthetic corpus generator. The generator stands in
// for a trained encoder: it draws a latent mean per speaker, a latent
// center per utterance, and noisy frames around that center, then runs the
// real pooling and propagation pipeline to obtain embeddings with
// uncertainties. Frame count is duration times frames_per_second, so long
// utterances accumulate more precision and end up with smaller posterior
// covariance.
struct SynthConfig {
  Index latent_dim = 32;
  Index embed_dim = 16;
  int n_speakers = 50;
  int utts_per_speaker = 10;
  double duration_min_s = 2.0;
  double duration_max_s = 60.0;
  double frames_per_second = 25.0;

  // Latent-space variances: speaker means scatter with between_var, each
  // utterance center scatters around its speaker with within_var, frames
  // scatter around the center with frame_noise_var (before the
  // per-utterance heteroscedastic factor).
  double between_var = 4.0;
  double within_var = 0.25;
  double frame_noise_var = 250.0;

  // Number of latent dimensions carrying between-speaker variability; 0
  // selects all of them. Ranks below latent_dim confine speaker means to a
  // subspace while within and frame noise stay full rank, so noise-heavy
  // embeddings scatter over more directions than speaker identity does.
  Index speaker_rank = 0;

  // Strength of per-utterance frame-noise variation: the variance is
  // multiplied by exp(h * eta - h^2 / 2) with eta standard normal, a
  // mean-one lognormal factor. 0 disables it.
  double heteroscedasticity = 0.15;

  // Prior precision per latent dimension used in pooling.
  double prior_precision = 1.5;

  // Standard deviation scale of the random projection entries; the layer
  // maps latent vectors to embeddings of roughly this norm scale.
  double embed_scale = 2.6;

  // Reported per-frame precision is precision_scale / true variance; 1
  // means the generator is honest, other values study model mismatch.
  double precision_scale = 1.0;

  std::uint64_t seed = 42;
};

// Same generator at the embedding width of a full-size speaker encoder.
SynthConfig full_scale_profile();

struct SynthCorpus {
  // Keyed by utterance id "spk<I>_utt<J>" (zero padded, so lexicographic
  // order equals generation order).
  EmbeddingMap embeddings;
  LabelMap labels;
};

// Generates the corpus. Speakers are processed in parallel, each on its own
// derived substream, and assembled in speaker order; output is therefore
// bitwise identical for a given config across runs and thread counts.
// Throws ConfigError on invalid configuration.
SynthCorpus generate_corpus(const SynthConfig& cfg);

// Samples n_target distinct ordered same-speaker pairs and n_nontarget
// distinct ordered cross-speaker pairs, uniformly and deterministically
// under the seed; an utterance is never paired with itself. Targets come
// first in the returned list. Throws SamplingError when a requested count
// exceeds the number of available pairs.
std::vector<Trial> generate_trials(const LabelMap& labels,
                                   std::size_t n_target,
                                   std::size_t n_nontarget,
                                   std::uint64_t seed);

}  // namespace upscore
