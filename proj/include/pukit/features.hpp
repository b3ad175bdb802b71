#pragma once

// Sentence representations: precomputed embeddings or signed feature hashing
// over lemma n-grams.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pukit/common.hpp"
#include "pukit/corpus.hpp"

namespace pukit {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }

  void append_row(std::span<const double> values) {
    if (rows_ == 0 && data_.empty()) cols_ = values.size();
    if (values.size() != cols_) throw Error("Matrix::append_row: width mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class FeaturizerKind { precomputed_embedding, hashed_ngram };

inline std::string_view to_string(FeaturizerKind k) {
  return k == FeaturizerKind::precomputed_embedding ? "precomputed_embedding" : "hashed_ngram";
}

struct FeaturizerConfig {
  FeaturizerKind kind = FeaturizerKind::precomputed_embedding;
  std::size_t dim = 4096;
  std::size_t ngram_min = 1;
  std::size_t ngram_max = 2;
  std::uint64_t hash_seed = 0;
  bool l2_normalize = true;

  friend bool operator==(const FeaturizerConfig&, const FeaturizerConfig&) = default;

  static FeaturizerConfig hashed(std::size_t dim = 4096) {
    FeaturizerConfig c;
    c.kind = FeaturizerKind::hashed_ngram;
    c.dim = dim;
    return c;
  }
};

inline void validate(const FeaturizerConfig& c) {
  if (c.dim == 0) throw Error("featurizer dim must be positive");
  if (c.kind == FeaturizerKind::hashed_ngram) {
    if (c.ngram_min == 0) throw Error("ngram_min must be positive");
    if (c.ngram_max < c.ngram_min) throw Error("ngram_max must be >= ngram_min");
  }
}

struct FeatureMatrix {
  Matrix values;
  FeaturizerConfig config;
  std::vector<std::string> record_ids;
};

/// v / ||v||_2, or v itself when the norm is zero.
inline std::vector<double> l2_normalize(std::span<const double> v) {
  if (!all_finite(v)) throw Error("l2_normalize: non-finite input");
  double sq = 0.0;
  for (const double x : v) sq += x * x;
  std::vector<double> out(v.begin(), v.end());
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (double& x : out) x /= norm;
  }
  return out;
}

namespace detail {

// Salt for the sign hash, so bucket and sign come from independent streams.
inline constexpr std::uint64_t kSignSalt = 0x9E3779B97F4A7C15ULL;
inline constexpr char kUnitSeparator = '\x1f';

inline void hash_lemmas_into(std::span<const Token> tokens, const FeaturizerConfig& cfg,
                             std::span<double> out) {
  std::string gram;
  for (std::size_t n = cfg.ngram_min; n <= cfg.ngram_max; ++n) {
    if (n > tokens.size()) break;
    for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
      gram.clear();
      for (std::size_t k = 0; k < n; ++k) {
        if (k) gram.push_back(kUnitSeparator);
        gram += to_lower(tokens[start + k].lemma);
      }
      const std::uint64_t bucket = fnv1a64(gram, cfg.hash_seed) % cfg.dim;
      const std::uint64_t sign_bits = fnv1a64(gram, cfg.hash_seed ^ kSignSalt);
      out[bucket] += (sign_bits & 1U) ? -1.0 : 1.0;
    }
  }
}

}  // namespace detail

/// Feature vector of one record under `cfg`.
inline std::vector<double> featurize_record(const SentenceRecord& rec, const FeaturizerConfig& cfg) {
  std::vector<double> row;
  if (cfg.kind == FeaturizerKind::precomputed_embedding) {
    if (!rec.embedding) throw Error("record " + rec.id + " has no embedding");
    if (rec.embedding->size() != cfg.dim) {
      throw Error("record " + rec.id + " has embedding dimension " +
                  std::to_string(rec.embedding->size()) + ", featurizer expects " +
                  std::to_string(cfg.dim));
    }
    row = *rec.embedding;
  } else {
    row.assign(cfg.dim, 0.0);
    detail::hash_lemmas_into(rec.tokens, cfg, row);
  }
  if (!all_finite(row)) throw Error("record " + rec.id + " has non-finite features");
  if (cfg.l2_normalize) row = l2_normalize(row);
  return row;
}

/// Row i of the result corresponds to corpus record i.
inline FeatureMatrix featurize(const Corpus& corpus, const FeaturizerConfig& cfg) {
  validate(cfg);
  FeatureMatrix fm;
  fm.config = cfg;
  fm.values = Matrix(corpus.size(), cfg.dim);
  fm.record_ids.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const SentenceRecord& rec = corpus.records[i];
    const std::vector<double> row = featurize_record(rec, cfg);
    std::copy(row.begin(), row.end(), fm.values.row(i).begin());
    fm.record_ids.push_back(rec.id);
  }
  return fm;
}

}  // namespace pukit
