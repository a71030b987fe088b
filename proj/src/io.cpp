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

#include "upscore/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "upscore/errors.hpp"

namespace upscore {

namespace {

[[noreturn]] void bad_line(const std::string& path, std::size_t line,
                           const std::string& what) {
  throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) {
    tokens.push_back(tok);
  }
  return tokens;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

double parse_double_at(const std::string& path, std::size_t line,
                       const std::string& token) {
  try {
    return parse_double(token);
  } catch (const DataError& e) {
    bad_line(path, line, e.what());
  }
}

long parse_count(const std::string& path, std::size_t line,
                 const std::string& token) {
  long value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 0) {
    bad_line(path, line, "expected a nonnegative integer, got '" + token + "'");
  }
  return value;
}

// Reads nonempty lines, reporting 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(const std::string& path)
      : path_(path), in_(open_in(path)) {}

  bool next(std::vector<std::string>& tokens) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      tokens = tokenize(raw);
      if (!tokens.empty()) {
        return true;
      }
    }
    return false;
  }

  std::size_t line() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

void write_vec(std::ofstream& out, const Vec& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) {
      out << ' ';
    }
    out << format_double(v[i]);
  }
  out << '\n';
}

Vec parse_vec(const LineReader& reader, const std::vector<std::string>& tokens,
              std::size_t offset, Index d) {
  if (tokens.size() != offset + static_cast<std::size_t>(d)) {
    bad_line(reader.path(), reader.line(),
             "expected " + std::to_string(d) + " values, got " +
                 std::to_string(tokens.size() - offset));
  }
  Vec v(d);
  for (Index i = 0; i < d; ++i) {
    v[i] = parse_double_at(reader.path(), reader.line(),
                           tokens[offset + static_cast<std::size_t>(i)]);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw DataError("expected a number, got '" + token + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError("non-finite value '" + token + "'");
  }
  return value;
}

void write_embeddings(const std::string& path, const EmbeddingMap& embeddings) {
  if (embeddings.empty()) {
    throw DataError("refusing to write an empty embedding file");
  }
  // Canonical record order: sorted ids.
  std::vector<const UncertainEmbedding*> order;
  order.reserve(embeddings.size());
  {
    std::map<std::string, const UncertainEmbedding*> sorted;
    for (const auto& [id, emb] : embeddings) {
      sorted[id] = &emb;
    }
    for (const auto& [id, emb] : sorted) {
      (void)id;
      order.push_back(emb);
    }
  }
  const Index d = order.front()->mean.size();
  std::ofstream out = open_out(path);
  out << "UPEMB1 " << d << ' ' << embeddings.size() << '\n';
  for (const UncertainEmbedding* emb : order) {
    if (emb->mean.size() != d || emb->uncertainty_diag.size() != d) {
      throw DimensionError("embedding '" + emb->id +
                           "' has mismatched dimensions");
    }
    out << emb->id;
    if (emb->duration_s) {
      out << ' ' << format_double(*emb->duration_s);
    }
    for (Index i = 0; i < d; ++i) {
      out << ' ' << format_double(emb->mean[i]);
    }
    for (Index i = 0; i < d; ++i) {
      out << ' ' << format_double(emb->uncertainty_diag[i]);
    }
    out << '\n';
  }
  finish_write(out, path);
}

EmbeddingMap read_embeddings(const std::string& path) {
  LineReader reader(path);
  std::vector<std::string> tokens;
  if (!reader.next(tokens)) {
    bad_line(path, 1, "missing header");
  }
  if (tokens.size() != 3 || tokens[0] != "UPEMB1") {
    bad_line(path, reader.line(), "expected header 'UPEMB1 <d> <count>'");
  }
  const long d_l = parse_count(path, reader.line(), tokens[1]);
  const long count = parse_count(path, reader.line(), tokens[2]);
  if (d_l < 1) {
    bad_line(path, reader.line(), "dimension must be at least 1");
  }
  const Index d = static_cast<Index>(d_l);

  EmbeddingMap embeddings;
  while (reader.next(tokens)) {
    const std::size_t without = 1 + 2 * static_cast<std::size_t>(d);
    std::size_t offset = 1;
    UncertainEmbedding emb;
    emb.id = tokens[0];
    if (tokens.size() == without + 1) {
      const double dur = parse_double_at(path, reader.line(), tokens[1]);
      if (dur < 0.0) {
        bad_line(path, reader.line(), "negative duration");
      }
      emb.duration_s = dur;
      offset = 2;
    } else if (tokens.size() != without) {
      bad_line(path, reader.line(),
               "expected " + std::to_string(without) + " or " +
                   std::to_string(without + 1) + " tokens, got " +
                   std::to_string(tokens.size()));
    }
    emb.mean = Vec(d);
    emb.uncertainty_diag = Vec(d);
    for (Index i = 0; i < d; ++i) {
      emb.mean[i] = parse_double_at(path, reader.line(),
                                    tokens[offset + static_cast<std::size_t>(i)]);
    }
    for (Index i = 0; i < d; ++i) {
      emb.uncertainty_diag[i] = parse_double_at(
          path, reader.line(),
          tokens[offset + static_cast<std::size_t>(d + i)]);
    }
    if ((emb.uncertainty_diag.array() < 0.0).any()) {
      bad_line(path, reader.line(), "negative uncertainty entry");
    }
    if (!embeddings.emplace(emb.id, std::move(emb)).second) {
      bad_line(path, reader.line(), "duplicate id '" + tokens[0] + "'");
    }
  }
  if (static_cast<long>(embeddings.size()) != count) {
    throw DataError(path + ": header announces " + std::to_string(count) +
                    " records, file has " + std::to_string(embeddings.size()));
  }
  return embeddings;
}

void write_labels(const std::string& path, const LabelMap& labels) {
  std::ofstream out = open_out(path);
  for (const auto& [id, speaker] : labels) {
    out << id << ' ' << speaker << '\n';
  }
  finish_write(out, path);
}

LabelMap read_labels(const std::string& path) {
  LineReader reader(path);
  LabelMap labels;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    if (tokens.size() != 2) {
      bad_line(path, reader.line(), "expected '<utt_id> <speaker_id>'");
    }
    if (!labels.emplace(tokens[0], tokens[1]).second) {
      bad_line(path, reader.line(), "duplicate utterance '" + tokens[0] + "'");
    }
  }
  return labels;
}

void write_trials(const std::string& path, const std::vector<Trial>& trials) {
  std::ofstream out = open_out(path);
  for (const Trial& t : trials) {
    out << t.enrol_id << ' ' << t.test_id;
    if (t.is_target) {
      out << ' ' << (*t.is_target ? "target" : "nontarget");
    }
    out << '\n';
  }
  finish_write(out, path);
}

std::vector<Trial> read_trials(const std::string& path) {
  LineReader reader(path);
  std::vector<Trial> trials;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    if (tokens.size() != 2 && tokens.size() != 3) {
      bad_line(path, reader.line(),
               "expected '<enrol_id> <test_id> [target|nontarget]'");
    }
    Trial t;
    t.enrol_id = tokens[0];
    t.test_id = tokens[1];
    if (tokens.size() == 3) {
      if (tokens[2] == "target") {
        t.is_target = true;
      } else if (tokens[2] == "nontarget") {
        t.is_target = false;
      } else {
        bad_line(path, reader.line(),
                 "label must be 'target' or 'nontarget', got '" + tokens[2] +
                     "'");
      }
    }
    trials.push_back(std::move(t));
  }
  return trials;
}

void write_scores(const std::string& path,
                  const std::vector<TrialScore>& scores) {
  std::ofstream out = open_out(path);
  for (const TrialScore& s : scores) {
    out << s.enrol_id << ' ' << s.test_id << ' ' << format_double(s.score)
        << '\n';
  }
  finish_write(out, path);
}

std::vector<TrialScore> read_scores(const std::string& path) {
  LineReader reader(path);
  std::vector<TrialScore> scores;
  std::vector<std::string> tokens;
  while (reader.next(tokens)) {
    if (tokens.size() != 3) {
      bad_line(path, reader.line(), "expected '<enrol_id> <test_id> <score>'");
    }
    TrialScore s;
    s.enrol_id = tokens[0];
    s.test_id = tokens[1];
    s.score = parse_double_at(path, reader.line(), tokens[2]);
    scores.push_back(std::move(s));
  }
  return scores;
}

void write_alphas(const std::string& path,
                  const std::vector<TrialScore>& scores) {
  std::ofstream out = open_out(path);
  for (const TrialScore& s : scores) {
    if (!s.alpha_enrol || !s.alpha_test) {
      throw DataError("trial " + s.enrol_id + " " + s.test_id +
                      " carries no scale factors");
    }
    out << s.enrol_id << ' ' << s.test_id << ' '
        << format_double(*s.alpha_enrol) << ' ' << format_double(*s.alpha_test)
        << '\n';
  }
  finish_write(out, path);
}

namespace {

void write_five(std::ofstream& out, const char* name, const FiveNumber& f) {
  out << name << ' ' << format_double(f.min) << ' ' << format_double(f.q1)
      << ' ' << format_double(f.median) << ' ' << format_double(f.q3) << ' '
      << format_double(f.max) << '\n';
}

FiveNumber parse_five(const LineReader& reader,
                      const std::vector<std::string>& tokens) {
  if (tokens.size() != 6) {
    bad_line(reader.path(), reader.line(),
             "expected '<name> <min> <q1> <median> <q3> <max>'");
  }
  FiveNumber f;
  f.min = parse_double_at(reader.path(), reader.line(), tokens[1]);
  f.q1 = parse_double_at(reader.path(), reader.line(), tokens[2]);
  f.median = parse_double_at(reader.path(), reader.line(), tokens[3]);
  f.q3 = parse_double_at(reader.path(), reader.line(), tokens[4]);
  f.max = parse_double_at(reader.path(), reader.line(), tokens[5]);
  return f;
}

}  // namespace

void write_stats(const std::string& path, const StatsFile& stats) {
  const CovarianceReport& r = stats.report;
  const Index d = r.within_diag.size();
  if (d == 0 || r.between_diag.size() != d || r.total_diag.size() != d ||
      r.avg_uncertainty_diag.size() != d) {
    throw DimensionError("covariance report diagonals have unequal sizes");
  }
  std::ofstream out = open_out(path);
  out << "UPSTATS1 " << d << '\n';
  out << "n_utts " << r.n_utts << '\n';
  out << "n_speakers " << r.n_speakers << '\n';
  out << "[within]\n";
  write_vec(out, r.within_diag);
  out << "[between]\n";
  write_vec(out, r.between_diag);
  out << "[total]\n";
  write_vec(out, r.total_diag);
  out << "[avg_uncertainty]\n";
  write_vec(out, r.avg_uncertainty_diag);
  if (stats.boxplot) {
    out << "[boxplot]\n";
    write_five(out, "within", stats.boxplot->within);
    write_five(out, "between", stats.boxplot->between);
    write_five(out, "total", stats.boxplot->total);
    write_five(out, "avg_uncertainty", stats.boxplot->avg_uncertainty);
  }
  if (stats.plda) {
    if (stats.plda->mu.size() != d || stats.plda->b_diag.size() != d ||
        stats.plda->w_diag.size() != d) {
      throw DimensionError("model dimensions differ from report");
    }
    out << "[plda]\n";
    out << "mu ";
    write_vec(out, stats.plda->mu);
    out << "b_diag ";
    write_vec(out, stats.plda->b_diag);
    out << "w_diag ";
    write_vec(out, stats.plda->w_diag);
  }
  finish_write(out, path);
}

StatsFile read_stats(const std::string& path) {
  LineReader reader(path);
  std::vector<std::string> tokens;
  if (!reader.next(tokens)) {
    bad_line(path, 1, "missing header");
  }
  if (tokens.size() != 2 || tokens[0] != "UPSTATS1") {
    bad_line(path, reader.line(), "expected header 'UPSTATS1 <d>'");
  }
  const long d_l = parse_count(path, reader.line(), tokens[1]);
  if (d_l < 1) {
    bad_line(path, reader.line(), "dimension must be at least 1");
  }
  const Index d = static_cast<Index>(d_l);

  StatsFile stats;
  CovarianceReport& r = stats.report;

  const auto expect = [&](const char* what) {
    if (!reader.next(tokens)) {
      bad_line(path, reader.line() + 1,
               std::string("unexpected end of file, wanted ") + what);
    }
  };

  expect("n_utts");
  if (tokens.size() != 2 || tokens[0] != "n_utts") {
    bad_line(path, reader.line(), "expected 'n_utts <count>'");
  }
  r.n_utts = static_cast<std::size_t>(parse_count(path, reader.line(), tokens[1]));
  expect("n_speakers");
  if (tokens.size() != 2 || tokens[0] != "n_speakers") {
    bad_line(path, reader.line(), "expected 'n_speakers <count>'");
  }
  r.n_speakers =
      static_cast<std::size_t>(parse_count(path, reader.line(), tokens[1]));

  const auto expect_section = [&](const char* name, Vec& dst) {
    expect(name);
    if (tokens.size() != 1 || tokens[0] != name) {
      bad_line(path, reader.line(), std::string("expected section ") + name);
    }
    expect("section values");
    dst = parse_vec(reader, tokens, 0, d);
  };

  expect_section("[within]", r.within_diag);
  expect_section("[between]", r.between_diag);
  expect_section("[total]", r.total_diag);
  expect_section("[avg_uncertainty]", r.avg_uncertainty_diag);

  while (reader.next(tokens)) {
    if (tokens.size() == 1 && tokens[0] == "[boxplot]") {
      BoxplotSummary box;
      const auto read_five = [&](const char* name, FiveNumber& dst) {
        expect(name);
        if (tokens[0] != name) {
          bad_line(path, reader.line(),
                   std::string("expected boxplot row ") + name);
        }
        dst = parse_five(reader, tokens);
      };
      read_five("within", box.within);
      read_five("between", box.between);
      read_five("total", box.total);
      read_five("avg_uncertainty", box.avg_uncertainty);
      stats.boxplot = box;
    } else if (tokens.size() == 1 && tokens[0] == "[plda]") {
      PldaModel model;
      const auto read_row = [&](const char* name, Vec& dst) {
        expect(name);
        if (tokens[0] != name) {
          bad_line(path, reader.line(), std::string("expected row ") + name);
        }
        dst = parse_vec(reader, tokens, 1, d);
      };
      read_row("mu", model.mu);
      read_row("b_diag", model.b_diag);
      read_row("w_diag", model.w_diag);
      stats.plda = std::move(model);
    } else {
      bad_line(path, reader.line(), "unexpected content '" + tokens[0] + "'");
    }
  }
  return stats;
}

}  // namespace upscore
