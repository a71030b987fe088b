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

#include "upscore/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "upscore/errors.hpp"

namespace upscore {

namespace {

void check_scores(const std::vector<double>& scores, const char* which) {
  if (scores.empty()) {
    throw MetricError(std::string(which) + " score list is empty");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw NumericError(std::string(which) + " score list is non-finite");
    }
  }
}

std::size_t count_less(const std::vector<double>& sorted, double threshold) {
  return static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), threshold) -
      sorted.begin());
}

}  // namespace

std::vector<SweepPoint> roc_sweep(const std::vector<double>& target_scores,
                                  const std::vector<double>& nontarget_scores) {
  check_scores(target_scores, "target");
  check_scores(nontarget_scores, "nontarget");

  std::vector<double> uniq;
  uniq.reserve(target_scores.size() + nontarget_scores.size());
  uniq.insert(uniq.end(), target_scores.begin(), target_scores.end());
  uniq.insert(uniq.end(), nontarget_scores.begin(), nontarget_scores.end());
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  std::vector<double> candidates;
  candidates.reserve(2 * uniq.size() + 1);
  candidates.push_back(uniq.front() - 1.0);
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    candidates.push_back(uniq[i]);
    if (i + 1 < uniq.size()) {
      candidates.push_back((uniq[i] + uniq[i + 1]) / 2.0);
    }
  }
  candidates.push_back(uniq.back() + 1.0);

  std::vector<double> targets_sorted = target_scores;
  std::vector<double> nontargets_sorted = nontarget_scores;
  std::sort(targets_sorted.begin(), targets_sorted.end());
  std::sort(nontargets_sorted.begin(), nontargets_sorted.end());
  const double n_t = static_cast<double>(targets_sorted.size());
  const double n_n = static_cast<double>(nontargets_sorted.size());

  std::vector<SweepPoint> sweep;
  sweep.reserve(candidates.size());
  for (double theta : candidates) {
    SweepPoint p;
    p.threshold = theta;
    p.frr = static_cast<double>(count_less(targets_sorted, theta)) / n_t;
    p.far = static_cast<double>(nontargets_sorted.size() -
                                count_less(nontargets_sorted, theta)) /
            n_n;
    sweep.push_back(p);
  }
  return sweep;
}

EerResult compute_eer(const std::vector<double>& target_scores,
                      const std::vector<double>& nontarget_scores) {
  const std::vector<SweepPoint> sweep =
      roc_sweep(target_scores, nontarget_scores);
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const double diff = sweep[i].far - sweep[i].frr;
    if (diff > 0.0) {
      continue;
    }
    EerResult out;
    if (diff == 0.0 || i == 0) {
      out.eer = sweep[i].frr;
      out.threshold = sweep[i].threshold;
      return out;
    }
    const SweepPoint& a = sweep[i - 1];
    const SweepPoint& b = sweep[i];
    const double diff_a = a.far - a.frr;
    const double diff_b = b.far - b.frr;
    const double t = diff_a / (diff_a - diff_b);
    out.eer = a.frr + t * (b.frr - a.frr);
    out.threshold = a.threshold + t * (b.threshold - a.threshold);
    return out;
  }
  // Unreachable: the reject-all candidate has far - frr = -1.
  throw MetricError("threshold sweep found no equal-error crossing");
}

DcfResult compute_min_dcf(const std::vector<double>& target_scores,
                          const std::vector<double>& nontarget_scores,
                          const DcfParams& params) {
  if (!(params.p_target > 0.0) || !(params.p_target < 1.0)) {
    throw ConfigError("p_target must lie in (0, 1)");
  }
  if (!(params.c_miss > 0.0) || !(params.c_fa > 0.0)) {
    throw ConfigError("detection costs must be positive");
  }
  const std::vector<SweepPoint> sweep =
      roc_sweep(target_scores, nontarget_scores);
  const double normalizer = std::min(params.c_miss * params.p_target,
                                     params.c_fa * (1.0 - params.p_target));
  DcfResult out;
  bool first = true;
  for (const SweepPoint& p : sweep) {
    const double dcf = (params.c_miss * params.p_target * p.frr +
                        params.c_fa * (1.0 - params.p_target) * p.far) /
                       normalizer;
    if (first || dcf < out.min_dcf) {
      out.min_dcf = dcf;
      out.threshold = p.threshold;
      first = false;
    }
  }
  return out;
}

DetMetrics compute_metrics(const std::vector<double>& target_scores,
                           const std::vector<double>& nontarget_scores,
                           const DcfParams& params) {
  const EerResult eer = compute_eer(target_scores, nontarget_scores);
  const DcfResult dcf = compute_min_dcf(target_scores, nontarget_scores, params);
  DetMetrics out;
  out.eer = eer.eer;
  out.threshold_eer = eer.threshold;
  out.min_dcf = dcf.min_dcf;
  out.n_target = target_scores.size();
  out.n_nontarget = nontarget_scores.size();
  out.dcf_params = params;
  return out;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw MetricError("correlation inputs differ in length");
  }
  if (xs.size() < 2) {
    throw MetricError("correlation requires at least two points");
  }
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw NumericError("correlation input is non-finite");
    }
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw MetricError("correlation undefined: zero variance in input");
  }
  return sxy / std::sqrt(sxx * syy);
}

double avg_uncertainty_scalar(const UncertainEmbedding& e) {
  if (e.uncertainty_diag.size() == 0) {
    throw DimensionError("embedding '" + e.id + "' has no uncertainty diagonal");
  }
  return e.uncertainty_diag.mean();
}

}  // namespace upscore
