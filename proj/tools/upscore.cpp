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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "upscore/corpus_stats.hpp"
#include "upscore/errors.hpp"
#include "upscore/io.hpp"
#include "upscore/metrics.hpp"
#include "upscore/plda.hpp"
#include "upscore/scoring.hpp"
#include "upscore/synth.hpp"

namespace {

using namespace upscore;

// Exit codes: 0 success, 2 usage or configuration, 3 I/O, 4 data integrity.
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr ||
      dynamic_cast<const EstimationError*>(&e) != nullptr ||
      dynamic_cast<const SamplingError*>(&e) != nullptr ||
      dynamic_cast<const MetricError*>(&e) != nullptr) {
    return kExitConfig;
  }
  if (dynamic_cast<const IoError*>(&e) != nullptr) {
    return kExitIo;
  }
  return kExitData;
}

struct GenOptions {
  SynthConfig cfg;
  std::string out_dir;
  std::size_t n_target = 1000;
  std::size_t n_nontarget = 1000;
  bool full_scale = false;
};

int cmd_gen(const GenOptions& opt) {
  SynthConfig cfg = opt.cfg;
  if (opt.full_scale) {
    const SynthConfig profile = full_scale_profile();
    cfg.latent_dim = profile.latent_dim;
    cfg.embed_dim = profile.embed_dim;
  }
  const SynthCorpus corpus = generate_corpus(cfg);
  const std::vector<Trial> trials =
      generate_trials(corpus.labels, opt.n_target, opt.n_nontarget, cfg.seed);

  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + opt.out_dir +
                  "': " + ec.message());
  }
  const std::filesystem::path dir(opt.out_dir);
  write_embeddings((dir / "embeddings.txt").string(), corpus.embeddings);
  write_labels((dir / "labels.txt").string(), corpus.labels);
  write_trials((dir / "trials.txt").string(), trials);
  std::cout << "wrote " << corpus.embeddings.size() << " embeddings, "
            << trials.size() << " trials to " << opt.out_dir << "\n";
  return 0;
}

struct ScoreOptions {
  std::string enrol_path;
  std::string test_path;
  std::string trials_path;
  std::string variant = "cos";
  std::string stats_path;
  std::string out_path;
  std::string alphas_path;
};

EmbeddingMap load_embedding_sides(const std::string& enrol_path,
                                  const std::string& test_path) {
  EmbeddingMap embeddings = read_embeddings(enrol_path);
  if (test_path == enrol_path) {
    return embeddings;
  }
  EmbeddingMap test_side = read_embeddings(test_path);
  for (auto& [id, emb] : test_side) {
    const auto it = embeddings.find(id);
    if (it == embeddings.end()) {
      embeddings.emplace(id, std::move(emb));
      continue;
    }
    const UncertainEmbedding& have = it->second;
    if (have.mean != emb.mean ||
        have.uncertainty_diag != emb.uncertainty_diag) {
      throw DataError("id '" + id +
                      "' appears in both files with different values");
    }
  }
  return embeddings;
}

int cmd_score(const ScoreOptions& opt) {
  const EmbeddingMap embeddings =
      load_embedding_sides(opt.enrol_path, opt.test_path);
  const std::vector<Trial> trials = read_trials(opt.trials_path);

  std::optional<StatsFile> stats;
  if (!opt.stats_path.empty()) {
    stats = read_stats(opt.stats_path);
  }

  std::vector<TrialScore> scores;
  if (opt.variant == "plda" || opt.variant == "up-plda") {
    if (!stats || !stats->plda) {
      throw ConfigError("variant " + opt.variant +
                        " requires --stats with a fitted model section");
    }
    scores = plda_score_trials(trials, embeddings, *stats->plda,
                               opt.variant == "up-plda");
  } else {
    const ScoreVariant variant = parse_variant(opt.variant);
    std::optional<Vec> total_diag;
    if (variant == ScoreVariant::kUpCos2 || variant == ScoreVariant::kUpCos4) {
      if (!stats) {
        throw ConfigError("variant " + opt.variant +
                          " requires --stats for the total covariance");
      }
      total_diag = stats->report.total_diag;
    }
    scores = score_trials(trials, embeddings, variant, total_diag);
  }

  write_scores(opt.out_path, scores);
  if (!opt.alphas_path.empty()) {
    if (opt.variant == "plda" || opt.variant == "up-plda") {
      throw ConfigError("--alphas applies to cosine-family variants only");
    }
    write_alphas(opt.alphas_path, scores);
  }
  std::cout << "scored " << scores.size() << " trials (" << opt.variant
            << ")\n";
  return 0;
}

struct MetricsOptions {
  std::string scores_path;
  std::string trials_path;
  DcfParams dcf;
  std::string sweep_csv_path;
};

int cmd_metrics(const MetricsOptions& opt) {
  const std::vector<TrialScore> scores = read_scores(opt.scores_path);
  const std::vector<Trial> trials = read_trials(opt.trials_path);
  if (scores.size() != trials.size()) {
    throw DataError("score file has " + std::to_string(scores.size()) +
                    " lines, trial file has " + std::to_string(trials.size()));
  }
  std::vector<double> target_scores;
  std::vector<double> nontarget_scores;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].enrol_id != trials[i].enrol_id ||
        scores[i].test_id != trials[i].test_id) {
      throw DataError("line " + std::to_string(i + 1) +
                      ": score and trial ids disagree");
    }
    if (!trials[i].is_target) {
      throw ConfigError("line " + std::to_string(i + 1) +
                        ": trial has no target/nontarget label");
    }
    (*trials[i].is_target ? target_scores : nontarget_scores)
        .push_back(scores[i].score);
  }

  const DetMetrics m = compute_metrics(target_scores, nontarget_scores, opt.dcf);
  if (!opt.sweep_csv_path.empty()) {
    std::ofstream csv(opt.sweep_csv_path);
    if (!csv) {
      throw IoError("cannot open '" + opt.sweep_csv_path + "' for writing");
    }
    csv << "threshold,far,frr\n";
    for (const SweepPoint& p : roc_sweep(target_scores, nontarget_scores)) {
      csv << format_double(p.threshold) << ',' << format_double(p.far) << ','
          << format_double(p.frr) << '\n';
    }
    csv.flush();
    if (!csv) {
      throw IoError("write to '" + opt.sweep_csv_path + "' failed");
    }
  }

  std::cout << "# dcf p_target=" << format_double(m.dcf_params.p_target)
            << " c_miss=" << format_double(m.dcf_params.c_miss)
            << " c_fa=" << format_double(m.dcf_params.c_fa) << "\n";
  std::cout << "eer=" << format_double(m.eer)
            << " min_dcf=" << format_double(m.min_dcf)
            << " n_target=" << m.n_target
            << " n_nontarget=" << m.n_nontarget << "\n";
  return 0;
}

struct StatsOptions {
  std::string embeddings_path;
  std::string labels_path;
  std::string out_path;
  bool fit_plda = false;
};

int cmd_stats(const StatsOptions& opt) {
  const EmbeddingMap embeddings = read_embeddings(opt.embeddings_path);
  const LabelMap labels = read_labels(opt.labels_path);
  StatsFile stats;
  stats.report = estimate_covariances(embeddings, labels);
  stats.boxplot = summarize_boxplot(stats.report);
  if (opt.fit_plda) {
    stats.plda = plda_fit(embeddings, labels);
  }
  write_stats(opt.out_path, stats);
  std::cout << "stats over " << stats.report.n_utts << " utterances, "
            << stats.report.n_speakers << " speakers -> " << opt.out_path
            << "\n";
  return 0;
}

struct AnalyzeOptions {
  std::string embeddings_path;
  std::string out_csv_path;
};

int cmd_analyze(const AnalyzeOptions& opt) {
  {
    std::ifstream probe(opt.embeddings_path);
    if (!probe) {
      throw IoError("cannot open '" + opt.embeddings_path + "' for reading");
    }
    std::string token;
    if (!(probe >> token)) {
      throw MetricError("embedding file is empty");
    }
  }
  const EmbeddingMap embeddings = read_embeddings(opt.embeddings_path);

  std::vector<std::string> ids;
  ids.reserve(embeddings.size());
  for (const auto& [id, emb] : embeddings) {
    (void)emb;
    ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());

  std::vector<double> durations;
  std::vector<double> uncertainties;
  std::ofstream csv(opt.out_csv_path);
  if (!csv) {
    throw IoError("cannot open '" + opt.out_csv_path + "' for writing");
  }
  csv << "id,duration_s,avg_uncertainty\n";
  for (const std::string& id : ids) {
    const UncertainEmbedding& emb = embeddings.at(id);
    if (!emb.duration_s) {
      throw ConfigError("utterance '" + id +
                        "' has no duration; analysis needs durations");
    }
    const double unc = avg_uncertainty_scalar(emb);
    durations.push_back(*emb.duration_s);
    uncertainties.push_back(unc);
    csv << id << ',' << format_double(*emb.duration_s) << ','
        << format_double(unc) << '\n';
  }
  csv.flush();
  if (!csv) {
    throw IoError("write to '" + opt.out_csv_path + "' failed");
  }

  std::cout << "pearson=" << format_double(pearson(durations, uncertainties))
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Speaker-verification scoring backend: synthetic corpus generation,\n"
      "uncertainty-propagated scoring, detection metrics, and corpus\n"
      "statistics. Set UPSCORE_THREADS to override the worker thread count;\n"
      "results are identical for any setting."};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* c_gen = app.add_subcommand(
      "gen", "Generate a deterministic synthetic corpus and trial list");
  c_gen->add_option("--seed", gen.cfg.seed, "Master seed");
  c_gen->add_option("--speakers", gen.cfg.n_speakers, "Number of speakers");
  c_gen->add_option("--utts", gen.cfg.utts_per_speaker,
                    "Utterances per speaker");
  c_gen->add_option("--latent-dim", gen.cfg.latent_dim, "Latent dimension");
  c_gen->add_option("--dim", gen.cfg.embed_dim, "Embedding dimension");
  c_gen->add_option("--dur-min", gen.cfg.duration_min_s,
                    "Minimum duration, seconds");
  c_gen->add_option("--dur-max", gen.cfg.duration_max_s,
                    "Maximum duration, seconds");
  c_gen->add_option("--fps", gen.cfg.frames_per_second, "Frames per second");
  c_gen->add_option("--between-var", gen.cfg.between_var,
                    "Between-speaker latent variance");
  c_gen->add_option("--within-var", gen.cfg.within_var,
                    "Within-speaker latent variance");
  c_gen->add_option("--frame-noise-var", gen.cfg.frame_noise_var,
                    "Frame noise variance");
  c_gen->add_option("--speaker-rank", gen.cfg.speaker_rank,
                    "Latent dimensions with speaker variability (0 = all)");
  c_gen->add_option("--hetero", gen.cfg.heteroscedasticity,
                    "Per-utterance noise variation strength (0 = uniform)");
  c_gen->add_option("--prior-precision", gen.cfg.prior_precision,
                    "Pooling prior precision");
  c_gen->add_option("--embed-scale", gen.cfg.embed_scale,
                    "Projection scale");
  c_gen->add_option("--precision-scale", gen.cfg.precision_scale,
                    "Reported precision multiplier (1 = honest)");
  c_gen->add_option("--targets", gen.n_target, "Target trials to sample");
  c_gen->add_option("--nontargets", gen.n_nontarget,
                    "Nontarget trials to sample");
  c_gen->add_flag("--full-scale", gen.full_scale,
                  "Use the 192-dimensional embedding profile");
  c_gen->add_option("--out", gen.out_dir, "Output directory")->required();

  ScoreOptions score;
  CLI::App* c_score =
      app.add_subcommand("score", "Score a trial list against embeddings");
  c_score->add_option("--enrol", score.enrol_path, "Enrollment embedding file")
      ->required();
  c_score->add_option("--test", score.test_path, "Test embedding file")
      ->required();
  c_score->add_option("--trials", score.trials_path, "Trial file")->required();
  c_score
      ->add_option("--variant", score.variant,
                   "cos | up1 | up2 | up3 | up4 | plda | up-plda "
                   "(up1..up4 are the four uncertainty-propagated cosine "
                   "covariance constructions; up2/up4 and the plda variants "
                   "need --stats)")
      ->check(CLI::IsMember(
          {"cos", "up1", "up2", "up3", "up4", "plda", "up-plda"}));
  c_score->add_option("--stats", score.stats_path,
                      "Stats file providing total covariance / fitted model");
  c_score->add_option("--alphas", score.alphas_path,
                      "Also write per-trial scale factors to this file");
  c_score->add_option("--out", score.out_path, "Score file to write")
      ->required();

  MetricsOptions metrics;
  CLI::App* c_metrics = app.add_subcommand(
      "metrics", "Compute EER and minDCF from scores and labeled trials");
  c_metrics->add_option("--scores", metrics.scores_path, "Score file")
      ->required();
  c_metrics->add_option("--trials", metrics.trials_path, "Labeled trial file")
      ->required();
  c_metrics->add_option("--dcf-ptarget", metrics.dcf.p_target,
                        "Target prior of the cost function");
  c_metrics->add_option("--dcf-cmiss", metrics.dcf.c_miss, "Miss cost");
  c_metrics->add_option("--dcf-cfa", metrics.dcf.c_fa, "False-alarm cost");
  c_metrics->add_option("--sweep-csv", metrics.sweep_csv_path,
                        "Write the threshold sweep as CSV");

  StatsOptions stats;
  CLI::App* c_stats = app.add_subcommand(
      "stats", "Estimate covariance diagonals from labeled embeddings");
  c_stats->add_option("--embeddings", stats.embeddings_path, "Embedding file")
      ->required();
  c_stats->add_option("--labels", stats.labels_path, "Label file")->required();
  c_stats->add_flag("--plda", stats.fit_plda,
                    "Fit and include the two-covariance model");
  c_stats->add_option("--out", stats.out_path, "Stats file to write")
      ->required();

  AnalyzeOptions analyze;
  CLI::App* c_analyze = app.add_subcommand(
      "analyze", "Relate utterance duration to average uncertainty");
  c_analyze
      ->add_option("--embeddings", analyze.embeddings_path, "Embedding file")
      ->required();
  c_analyze->add_option("--out", analyze.out_csv_path, "CSV file to write")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (c_gen->parsed()) {
      return cmd_gen(gen);
    }
    if (c_score->parsed()) {
      return cmd_score(score);
    }
    if (c_metrics->parsed()) {
      return cmd_metrics(metrics);
    }
    if (c_stats->parsed()) {
      return cmd_stats(stats);
    }
    if (c_analyze->parsed()) {
      return cmd_analyze(analyze);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
