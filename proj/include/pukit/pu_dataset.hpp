#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pukit/common.hpp"
#include "pukit/corpus.hpp"
#include "pukit/features.hpp"

namespace pukit {

/// PU training data. Each row is an example x with its labeled indicator s;
/// the class label y is never stored (it is 1 whenever s is 1 and unknown
/// otherwise).
struct PUDataset {
  Matrix features;
  std::vector<std::uint8_t> s_labels;  // 1 = labeled positive, 0 = unlabeled
  std::vector<std::string> record_ids;
  std::uint64_t seed = 0;
  FeaturizerConfig featurizer;
  std::string manifest_hash;
  std::vector<std::string> warnings;

  std::size_t size() const { return s_labels.size(); }
  std::size_t labeled_count() const {
    std::size_t n = 0;
    for (const auto s : s_labels) n += s;
    return n;
  }
};

struct SamplingOptions {
  std::size_t cap_pos = 50000;
  std::size_t cap_unl = 50000;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<std::size_t> sample_eligible(const Corpus& corpus, std::size_t cap, Rng& rng,
                                                const char* label,
                                                std::vector<std::string>& warnings) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (eligible_for_training(corpus.records[i])) eligible.push_back(i);
  }
  if (cap > eligible.size()) {
    warnings.push_back(std::string(label) + " cap " + std::to_string(cap) + " exceeds the " +
                       std::to_string(eligible.size()) +
                       " eligible records; sampling all of them");
    cap = eligible.size();
  }
  rng.shuffle(std::span<std::size_t>(eligible));
  eligible.resize(cap);
  return eligible;
}

}  // namespace detail

/// Uniformly samples up to `cap_pos` positive and `cap_unl` unlabeled
/// sentences (without replacement, seeded Fisher-Yates) and featurizes them.
/// Rows drawn from `positives` come first and carry s = 1. Sentences with no
/// content or a single word are not eligible.
inline PUDataset assemble_pu_dataset(const Corpus& positives, const Corpus& unlabeled,
                                     const SamplingOptions& opts,
                                     FeaturizerConfig featurizer = {}) {
  if (positives.empty()) throw Error("positive corpus is empty");
  if (unlabeled.empty()) throw Error("unlabeled corpus is empty");
  if (opts.cap_pos == 0 || opts.cap_unl == 0) throw Error("sampling caps must be positive");

  if (featurizer.kind == FeaturizerKind::precomputed_embedding) {
    if (!positives.embedding_dim || !unlabeled.embedding_dim) {
      throw Error("precomputed features need embeddings in both corpora");
    }
    if (*positives.embedding_dim != *unlabeled.embedding_dim) {
      throw Error("embedding dimension mismatch: positives " +
                  std::to_string(*positives.embedding_dim) + ", unlabeled " +
                  std::to_string(*unlabeled.embedding_dim));
    }
    featurizer.dim = *positives.embedding_dim;
  }
  validate(featurizer);

  PUDataset ds;
  ds.seed = opts.seed;
  ds.featurizer = featurizer;

  Rng rng(opts.seed);
  const auto pos_idx = detail::sample_eligible(positives, opts.cap_pos, rng, "positive", ds.warnings);
  const auto unl_idx =
      detail::sample_eligible(unlabeled, opts.cap_unl, rng, "unlabeled", ds.warnings);
  if (pos_idx.empty()) throw Error("positive corpus has no eligible sentences");
  if (unl_idx.empty()) throw Error("unlabeled corpus has no eligible sentences");

  ds.features = Matrix(pos_idx.size() + unl_idx.size(), featurizer.dim);
  std::size_t row = 0;
  const auto add = [&](const SentenceRecord& rec, std::uint8_t s) {
    const auto x = featurize_record(rec, featurizer);
    std::copy(x.begin(), x.end(), ds.features.row(row).begin());
    ds.s_labels.push_back(s);
    ds.record_ids.push_back(rec.id);
    ++row;
  };
  for (const auto i : pos_idx) add(positives.records[i], 1);
  for (const auto i : unl_idx) add(unlabeled.records[i], 0);

  std::uint64_t h = fnv1a64(positives.manifest.content_hash, opts.seed);
  h = fnv1a_update(h, unlabeled.manifest.content_hash);
  for (const std::string& id : ds.record_ids) {
    h = fnv1a_update(h, id);
    h = fnv1a_update(h, "\x1f");
  }
  ds.manifest_hash = hex64(h);
  return ds;
}

}  // namespace pukit
