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

#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "upscore/rng.hpp"
#include "upscore/types.hpp"

namespace testsup {

// Every test stream hangs off one fixed base so unit tests never collide
// with generator streams.
inline upscore::NormalSampler make_rng(std::uint64_t a, std::uint64_t b = 0) {
  return upscore::NormalSampler(
      upscore::derive_seed(0x7e57ba5eULL, upscore::kStreamTest, a, b));
}

inline upscore::Vec random_vec(upscore::NormalSampler& rng, upscore::Index d,
                               double scale = 1.0) {
  upscore::Vec v(d);
  for (upscore::Index i = 0; i < d; ++i) {
    v[i] = scale * rng.normal();
  }
  return v;
}

// Entries uniform in [lo, hi); keep lo > 0 for covariance diagonals.
inline upscore::Vec random_uniform_vec(upscore::NormalSampler& rng,
                                       upscore::Index d, double lo,
                                       double hi) {
  upscore::Vec v(d);
  for (upscore::Index i = 0; i < d; ++i) {
    v[i] = lo + (hi - lo) * rng.uniform();
  }
  return v;
}

inline double rel_err(double got, double want) {
  const double denom = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / denom;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "upscore_test_XXXXXX")
            .string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (::mkdtemp(buf.data()) == nullptr) {
      throw std::runtime_error("mkdtemp failed");
    }
    path_ = buf.data();
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << content;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  q += "'";
  return q;
}

// Runs the command-line binary with the given arguments, capturing the exit
// code and both output streams. extra_env entries look like
// "UPSCORE_THREADS=4".
inline CliResult run_cli(const std::vector<std::string>& args,
                         const std::vector<std::string>& extra_env = {}) {
  TempDir cap;
  const std::string out_path = cap.file("stdout");
  const std::string err_path = cap.file("stderr");
  std::string cmd;
  if (!extra_env.empty()) {
    cmd += "env";
    for (const auto& kv : extra_env) {
      cmd += " " + shell_quote(kv);
    }
    cmd += " ";
  }
  cmd += shell_quote(UPSCORE_BIN);
  for (const auto& a : args) {
    cmd += " " + shell_quote(a);
  }
  cmd += " >" + shell_quote(out_path) + " 2>" + shell_quote(err_path);
  const int rc = std::system(cmd.c_str());
  CliResult result;
  if (rc == -1) {
    throw std::runtime_error("failed to launch: " + cmd);
  }
  if (WIFEXITED(rc)) {
    result.exit_code = WEXITSTATUS(rc);
  } else {
    result.exit_code = 128;
  }
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

}  // namespace testsup
