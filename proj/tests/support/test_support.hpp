//  Copyright 2026 The ssvec Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.


// Helpers shared by the unit and acceptance tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace ssvec::testing {

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
      path_ = base / ("ssvec-test-" + std::to_string(rd()));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// n draws from Zipf(exponent) over words "w0".."w{types-1}".
inline std::vector<std::string> zipf_stream(std::size_t types, std::size_t n,
                                            double exponent, std::mt19937_64& gen) {
  std::vector<double> weights(types);
  for (std::size_t i = 0; i < types; ++i) {
    weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
  }
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(dist(gen)));
  return out;
}

inline std::unordered_map<std::string, std::uint64_t> brute_counts(
    const std::vector<std::string>& stream, std::size_t prefix) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (std::size_t i = 0; i < prefix; ++i) ++counts[stream[i]];
  return counts;
}

/// True when `hits` out of `trials` is within 3 binomial standard deviations
/// of trials * p.
inline bool within_3_sigma(std::uint64_t hits, std::uint64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double sd = std::sqrt(n * p * (1.0 - p));
  return std::abs(static_cast<double>(hits) - n * p) <= 3.0 * sd;
}

}  // namespace ssvec::testing
