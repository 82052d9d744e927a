// Copyright 2026 The langevin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LANGEVIN_DATA_HPP_
#define LANGEVIN_DATA_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "langevin/model.hpp"
#include "langevin/rng.hpp"

namespace langevin {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Dataset {
  Matrix X;
  Vector y;
  std::vector<std::string> feature_names;
  /// FNV-1a hash of the source bytes and ingestion options.
  std::uint64_t fingerprint = 0;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(X.cols()); }
};

struct IngestOptions {
  bool add_intercept = false;
  bool standardize = true;
  std::string label_column = "y";
};

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Centers every column and scales it to unit sample variance (n - 1
/// denominator). Constant columns are only centered.
inline void standardize_columns(Matrix& X) {
  const Eigen::Index n = X.rows();
  if (n == 0) return;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    X.col(j).array() -= mean;
    if (n < 2) continue;
    const double var = X.col(j).squaredNorm() / static_cast<double>(n - 1);
    if (var > 0.0) X.col(j) /= std::sqrt(var);
  }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_cell(std::string_view cell, std::size_t row, const std::string& column) {
  auto where = [&] { return "row " + std::to_string(row) + ", column '" + column + "'"; };
  if (cell.empty()) throw DataError("missing value at " + where());
  double v = 0.0;
  const char* first = cell.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw DataError("non-numeric value '" + std::string(cell) + "' at " + where());
  if (!std::isfinite(v)) throw DataError("non-finite value at " + where());
  return v;
}

}  // namespace detail

/// Parses CSV text with a header row. The label column must hold 0/1 values;
/// every other column is a numeric feature.
inline Dataset parse_dataset(std::string_view text, const IngestOptions& opt = {}) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view line = detail::trim(text.substr(start, i - start));
      if (!line.empty()) lines.push_back(line);
      start = i + 1;
    }
  }
  if (lines.empty()) throw DataError("empty CSV");
  const auto header = detail::split_csv_line(lines[0]);
  std::ptrdiff_t label = -1;
  Dataset ds;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == opt.label_column) {
      if (label >= 0) throw DataError("duplicate label column '" + opt.label_column + "'");
      label = static_cast<std::ptrdiff_t>(j);
    } else {
      ds.feature_names.emplace_back(header[j]);
    }
  }
  if (label < 0) throw DataError("label column '" + opt.label_column + "' not found");
  const std::size_t n = lines.size() - 1;
  if (n == 0) throw DataError("CSV has a header but no data rows");
  const std::size_t d = ds.feature_names.size();
  ds.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d + (opt.add_intercept ? 1 : 0)));
  ds.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto cells = detail::split_csv_line(lines[r + 1]);
    if (cells.size() != header.size())
      throw DataError("row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(header.size()));
    std::size_t f = 0;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string name(header[j]);
      const double v = detail::parse_cell(cells[j], r + 1, name);
      if (static_cast<std::ptrdiff_t>(j) == label) {
        if (v != 0.0 && v != 1.0)
          throw DataError("non-binary label at row " + std::to_string(r + 1));
        ds.y(static_cast<Eigen::Index>(r)) = v;
      } else {
        ds.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f++)) = v;
      }
    }
  }
  if (opt.standardize) {
    Matrix features = ds.X.leftCols(static_cast<Eigen::Index>(d));
    standardize_columns(features);
    ds.X.leftCols(static_cast<Eigen::Index>(d)) = features;
  }
  if (opt.add_intercept) {
    ds.X.col(static_cast<Eigen::Index>(d)).setOnes();
    ds.feature_names.emplace_back("intercept");
  }
  std::uint64_t h = fnv1a(text);
  const std::string tag = std::string(opt.add_intercept ? "I" : "-") + (opt.standardize ? "S" : "-") +
                          opt.label_column;
  ds.fingerprint = fnv1a(tag, h);
  return ds;
}

inline Dataset ingest_dataset(const std::string& path, const IngestOptions& opt = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), opt);
}

struct SyntheticSpec {
  std::size_t rows = 270;
  std::size_t cols = 14;
  std::uint64_t seed = 1;
  /// Scale of the true coefficient vector drawn as N(0, scale^2 I).
  double coef_scale = 0.5;
  bool standardize = true;
};

/// Seeded logistic-regression data: features iid N(0,1), labels drawn from
/// the logistic model with a random true coefficient vector.
inline Dataset make_synthetic_logistic(const SyntheticSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) throw DataError("synthetic dataset needs rows and cols > 0");
  RngStream rng(spec.seed, 0x5EED);
  Dataset ds;
  const auto n = static_cast<Eigen::Index>(spec.rows);
  const auto d = static_cast<Eigen::Index>(spec.cols);
  Vector beta(d);
  for (Eigen::Index j = 0; j < d; ++j) beta(j) = spec.coef_scale * rng.normal();
  ds.X.resize(n, d);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index j = 0; j < d; ++j) ds.X(r, j) = rng.normal();
  ds.y.resize(n);
  for (Eigen::Index r = 0; r < n; ++r)
    ds.y(r) = rng.uniform() < detail::logistic(ds.X.row(r).dot(beta)) ? 1.0 : 0.0;
  if (spec.standardize) standardize_columns(ds.X);
  for (Eigen::Index j = 0; j < d; ++j) ds.feature_names.push_back("x" + std::to_string(j + 1));
  const std::string tag = "synthetic:" + std::to_string(spec.rows) + ":" + std::to_string(spec.cols) +
                          ":" + std::to_string(spec.seed) + ":" + std::to_string(spec.coef_scale) +
                          (spec.standardize ? ":S" : ":-");
  ds.fingerprint = fnv1a(tag);
  return ds;
}

}  // namespace langevin

#endif  // LANGEVIN_DATA_HPP_
