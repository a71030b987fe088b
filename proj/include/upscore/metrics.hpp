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
#include <vector>

#include "upscore/types.hpp"

namespace upscore {

// Operating-point parameters of the detection cost function.
struct DcfParams {
  double p_target = 0.01;
  double c_miss = 1.0;
  double c_fa = 1.0;
};

// One candidate threshold with its error rates. far is the fraction of
// nontarget scores >= threshold, frr the fraction of target scores
// < threshold.
struct SweepPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

struct DcfResult {
  double min_dcf = 0.0;
  double threshold = 0.0;
};

struct DetMetrics {
  double eer = 0.0;
  double min_dcf = 0.0;
  double threshold_eer = 0.0;
  std::size_t n_target = 0;
  std::size_t n_nontarget = 0;
  DcfParams dcf_params;
};

// Evaluates FAR and FRR at every candidate threshold. The candidate set is,
// in increasing order:
//
//   (min score - 1), each sorted unique score, the midpoint (a + b) / 2 of
//   each consecutive unique pair, (max score + 1)
//
// so the sweep covers every achievable operating point including accept-all
// and reject-all. Both error rates are exact count ratios (integer count
// divided by list size). Throws MetricError on an empty list.
std::vector<SweepPoint> roc_sweep(const std::vector<double>& target_scores,
                                  const std::vector<double>& nontarget_scores);

// Equal error rate over the roc_sweep candidates. FAR - FRR starts at +1
// (accept-all) and ends at -1 (reject-all); at the first candidate where it
// is <= 0, either FAR == FRR holds exactly (that value is returned), or the
// rate is interpolated between that candidate and its predecessor as
//
//   t   = (far0 - frr0) / ((far0 - frr0) - (far1 - frr1))
//   eer = frr0 + t * (frr1 - frr0)
//
// with the threshold interpolated by the same t. The result depends only on
// the ordering of scores, so any strictly increasing transform of all scores
// leaves the EER bitwise unchanged.
EerResult compute_eer(const std::vector<double>& target_scores,
                      const std::vector<double>& nontarget_scores);

// Minimum normalized detection cost over the roc_sweep candidates:
//
//   dcf(theta) = (c_miss * p_target * frr + c_fa * (1 - p_target) * far)
//                / min(c_miss * p_target, c_fa * (1 - p_target))
//
// evaluated with exactly that expression at every candidate; ties keep the
// lowest threshold. The reject-all candidate bounds the result by 1 when
// the normalizer is c_miss * p_target. Throws ConfigError for p_target
// outside (0, 1) or nonpositive costs.
DcfResult compute_min_dcf(const std::vector<double>& target_scores,
                          const std::vector<double>& nontarget_scores,
                          const DcfParams& params = {});

// EER and minDCF in one report.
DetMetrics compute_metrics(const std::vector<double>& target_scores,
                           const std::vector<double>& nontarget_scores,
                           const DcfParams& params = {});

// Sample Pearson correlation coefficient. Throws MetricError for length
// mismatch, fewer than two points, or zero variance in either input (the
// correlation is undefined there).
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Arithmetic mean of the uncertainty diagonal, the scalar reported per
// utterance in the duration analysis.
double avg_uncertainty_scalar(const UncertainEmbedding& e);

}  // namespace upscore
