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

#include <optional>
#include <string>
#include <vector>

#include "upscore/corpus_stats.hpp"
#include "upscore/plda.hpp"
#include "upscore/types.hpp"

namespace upscore {

// All formats are whitespace-separated text. Values print as shortest
// round-trip decimals, so write-then-read reproduces every double exactly
// and byte-identical inputs give byte-identical files.
//
//   embeddings:  header "UPEMB1 <d> <count>", then per utterance
//                "<id> [<duration_s>] <d mean values> <d uncertainty values>"
//                (the token count distinguishes the optional duration)
//   trials:      "<enrol_id> <test_id> [target|nontarget]"
//   scores:      "<enrol_id> <test_id> <score>", same order as the trials
//   alphas:      "<enrol_id> <test_id> <alpha_e> <alpha_t>"
//   labels:      "<utt_id> <speaker_id>"
//   stats:       header "UPSTATS1 <d>", counts, then sections [within]
//                [between] [total] [avg_uncertainty] [boxplot] and
//                optionally [plda]
//
// Readers throw IoError when the file cannot be opened and DataError (with
// a line number) for malformed content.

std::string format_double(double v);
double parse_double(const std::string& token);

void write_embeddings(const std::string& path, const EmbeddingMap& embeddings);
EmbeddingMap read_embeddings(const std::string& path);

void write_labels(const std::string& path, const LabelMap& labels);
LabelMap read_labels(const std::string& path);

void write_trials(const std::string& path, const std::vector<Trial>& trials);
std::vector<Trial> read_trials(const std::string& path);

void write_scores(const std::string& path,
                  const std::vector<TrialScore>& scores);
std::vector<TrialScore> read_scores(const std::string& path);

void write_alphas(const std::string& path,
                  const std::vector<TrialScore>& scores);

struct StatsFile {
  CovarianceReport report;
  std::optional<BoxplotSummary> boxplot;
  std::optional<PldaModel> plda;
};

void write_stats(const std::string& path, const StatsFile& stats);
StatsFile read_stats(const std::string& path);

}  // namespace upscore
