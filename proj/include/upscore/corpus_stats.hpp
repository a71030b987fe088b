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

#include <cstddef>

#include "upscore/types.hpp"

namespace upscore {

// Diagonal second-order statistics of a labeled embedding collection.
// Off-diagonal covariance entries are never computed.
struct CovarianceReport {
  Vec within_diag;
  Vec between_diag;
  Vec total_diag;
  Vec avg_uncertainty_diag;
  std::size_t n_utts = 0;
  std::size_t n_speakers = 0;
};

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct BoxplotSummary {
  FiveNumber within;
  FiveNumber between;
  FiveNumber total;
  FiveNumber avg_uncertainty;
};

// Estimates the diagonal within-speaker, between-speaker, and total
// covariances plus the mean uncertainty diagonal:
//
//   within  = pooled scatter about class means    / (N - K)
//   between = scatter of class means about grand mean / (K - 1)
//   total   = scatter of all means about grand mean    / (N - 1)
//
// A divisor <= 0 yields a zero vector for that quantity (a single speaker
// has no between-class scatter). Accumulation always runs in sorted
// utterance-id order within sorted speaker-id order, so the report is
// invariant under input permutation. Every embedding id must appear in
// labels and vice versa; EstimationError otherwise, as for empty input.
CovarianceReport estimate_covariances(const EmbeddingMap& embeddings,
                                      const LabelMap& labels);

// Min, lower quartile, median, upper quartile, max with quartiles linearly
// interpolated between order statistics: at probability p the summary reads
// off position (n - 1) * p in the sorted values, interpolating fractional
// positions. (1,2,3,4,5) therefore gives quartiles 2, 3, 4.
FiveNumber five_number_summary(const Vec& values);

// Five-number summaries of the four report diagonals.
BoxplotSummary summarize_boxplot(const CovarianceReport& report);

}  // namespace upscore
