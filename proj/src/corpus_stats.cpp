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

#include "upscore/corpus_stats.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "upscore/errors.hpp"

namespace upscore {

namespace {

// Speaker id -> utterance ids, both levels sorted. This is the canonical
// iteration order for every accumulation below.
std::map<std::string, std::vector<std::string>> group_by_speaker(
    const EmbeddingMap& embeddings, const LabelMap& labels) {
  if (embeddings.empty()) {
    throw EstimationError("no embeddings to estimate from");
  }
  for (const auto& [id, emb] : embeddings) {
    if (labels.find(id) == labels.end()) {
      throw EstimationError("utterance '" + id + "' has no speaker label");
    }
    (void)emb;
  }
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [id, speaker] : labels) {
    if (embeddings.find(id) == embeddings.end()) {
      throw EstimationError("label refers to unknown utterance '" + id + "'");
    }
    groups[speaker].push_back(id);
  }
  for (auto& [speaker, ids] : groups) {
    (void)speaker;
    std::sort(ids.begin(), ids.end());
  }
  return groups;
}

}  // namespace

CovarianceReport estimate_covariances(const EmbeddingMap& embeddings,
                                      const LabelMap& labels) {
  const auto groups = group_by_speaker(embeddings, labels);
  const Index d = embeddings.begin()->second.mean.size();
  if (d <= 0) {
    throw EstimationError("embeddings have zero dimension");
  }
  for (const auto& [id, emb] : embeddings) {
    if (emb.mean.size() != d || emb.uncertainty_diag.size() != d) {
      throw DimensionError("embedding '" + id + "' has mismatched dimensions");
    }
  }

  const std::size_t n = embeddings.size();
  const std::size_t k = groups.size();

  Vec grand_sum = Vec::Zero(d);
  Vec unc_sum = Vec::Zero(d);
  std::vector<Vec> class_means;
  class_means.reserve(k);
  Vec within_scatter = Vec::Zero(d);

  for (const auto& [speaker, ids] : groups) {
    (void)speaker;
    Vec class_sum = Vec::Zero(d);
    for (const std::string& id : ids) {
      const UncertainEmbedding& e = embeddings.at(id);
      class_sum += e.mean;
      unc_sum += e.uncertainty_diag;
    }
    const Vec class_mean = class_sum / static_cast<double>(ids.size());
    for (const std::string& id : ids) {
      within_scatter +=
          (embeddings.at(id).mean - class_mean).array().square().matrix();
    }
    grand_sum += class_sum;
    class_means.push_back(class_mean);
  }

  const Vec grand_mean = grand_sum / static_cast<double>(n);

  CovarianceReport report;
  report.n_utts = n;
  report.n_speakers = k;
  report.avg_uncertainty_diag = unc_sum / static_cast<double>(n);

  report.within_diag =
      n > k ? Vec(within_scatter / static_cast<double>(n - k)) : Vec::Zero(d);

  Vec between_scatter = Vec::Zero(d);
  for (const Vec& m : class_means) {
    between_scatter += (m - grand_mean).array().square().matrix();
  }
  report.between_diag =
      k > 1 ? Vec(between_scatter / static_cast<double>(k - 1)) : Vec::Zero(d);

  Vec total_scatter = Vec::Zero(d);
  for (const auto& [speaker, ids] : groups) {
    (void)speaker;
    for (const std::string& id : ids) {
      total_scatter +=
          (embeddings.at(id).mean - grand_mean).array().square().matrix();
    }
  }
  report.total_diag =
      n > 1 ? Vec(total_scatter / static_cast<double>(n - 1)) : Vec::Zero(d);

  return report;
}

FiveNumber five_number_summary(const Vec& values) {
  const Index n = values.size();
  if (n == 0) {
    throw DimensionError("empty vector has no five-number summary");
  }
  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end());

  const auto quantile = [&](double p) {
    const double h = static_cast<double>(n - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) {
      return sorted.back();
    }
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };

  FiveNumber out;
  out.min = sorted.front();
  out.q1 = quantile(0.25);
  out.median = quantile(0.5);
  out.q3 = quantile(0.75);
  out.max = sorted.back();
  return out;
}

BoxplotSummary summarize_boxplot(const CovarianceReport& report) {
  BoxplotSummary out;
  out.within = five_number_summary(report.within_diag);
  out.between = five_number_summary(report.between_diag);
  out.total = five_number_summary(report.total_diag);
  out.avg_uncertainty = five_number_summary(report.avg_uncertainty_diag);
  return out;
}

}  // namespace upscore
