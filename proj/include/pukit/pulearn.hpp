#pragma once

// Positive-unlabeled learning after Elkan & Noto (2008).
//
// A "nontraditional" classifier g(x) ~ p(s = 1 | x) is trained to separate
// labeled positives from unlabeled rows. Under the selected-completely-at-
// random assumption p(s = 1 | x) = c * p(y = 1 | x) with c = p(s = 1 | y = 1),
// so p(y = 1 | x) = g(x) / c. The labeling frequency c is estimated as the
// mean of g over labeled positives held out from the fit (estimator e1).

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pukit/common.hpp"
#include "pukit/corpus.hpp"
#include "pukit/features.hpp"
#include "pukit/platt.hpp"
#include "pukit/pu_dataset.hpp"
#include "pukit/svm.hpp"

namespace pukit {

inline constexpr const char* kModelFormatVersion = "pukit-model/1";
inline constexpr double kMinLabelingFrequency = 1e-6;

struct PUModel {
  LinearModel base;
  double c = 1.0;
  double holdout_frac = 0.2;
  std::string version = kModelFormatVersion;
  std::string training_manifest_hash;
  std::size_t training_rows = 0;
  std::size_t labeled_rows = 0;
  std::size_t holdout_rows = 0;
};

struct ExtractionRow {
  std::string record_id;
  Subgroup subgroup = Subgroup::none;
  std::string text;
  double probability = 0.0;
};

struct ExtractionResult {
  std::vector<ExtractionRow> rows;
  double threshold = 0.5;
};

/// g(x): the calibrated probability that x is a labeled example.
inline double calibrated_probability(const LinearModel& m, std::span<const double> x) {
  return platt_probability({m.platt_A, m.platt_B}, decision_value(m, x));
}

/// Elkan-Noto e1: mean of g over the given rows of `X`.
inline double estimate_labeling_frequency(const LinearModel& m, const Matrix& X,
                                          std::span<const std::size_t> rows) {
  if (rows.empty()) throw Error("labeling frequency needs at least one held-out positive");
  double sum = 0.0;
  for (const std::size_t i : rows) sum += calibrated_probability(m, X.row(i));
  const double c = sum / static_cast<double>(rows.size());
  return std::clamp(c, kMinLabelingFrequency, 1.0);
}

inline PUModel elkanoto_fit(const PUDataset& data, const SvmHyperparams& hp,
                            double holdout_frac = 0.2, std::uint64_t seed = 0) {
  if (!(holdout_frac > 0.0 && holdout_frac < 1.0)) throw Error("holdout_frac must lie in (0, 1)");
  if (data.features.rows() != data.s_labels.size()) throw Error("PU dataset rows disagree");

  std::vector<std::size_t> labeled;
  std::vector<std::size_t> unlabeled;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data.s_labels[i] ? labeled : unlabeled).push_back(i);
  }
  if (labeled.size() < 10) {
    throw Error("need at least 10 labeled positives, got " + std::to_string(labeled.size()));
  }
  if (unlabeled.empty()) throw Error("PU dataset has no unlabeled rows");

  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(labeled));
  const auto n_holdout =
      static_cast<std::size_t>(std::llround(holdout_frac * static_cast<double>(labeled.size())));
  if (n_holdout < 2) throw Error("holdout has fewer than 2 labeled positives");
  if (n_holdout >= labeled.size()) throw Error("holdout leaves no labeled positives to fit");
  const std::span<const std::size_t> holdout(labeled.data(), n_holdout);
  const std::span<const std::size_t> fit_pos(labeled.data() + n_holdout, labeled.size() - n_holdout);

  Matrix X(fit_pos.size() + unlabeled.size(), data.features.cols());
  std::vector<int> y;
  y.reserve(X.rows());
  std::size_t r = 0;
  for (const std::size_t i : fit_pos) {
    const auto src = data.features.row(i);
    std::copy(src.begin(), src.end(), X.row(r++).begin());
    y.push_back(1);
  }
  for (const std::size_t i : unlabeled) {
    const auto src = data.features.row(i);
    std::copy(src.begin(), src.end(), X.row(r++).begin());
    y.push_back(-1);
  }

  PUModel model;
  model.base = train_linear_svm(X, y, hp);
  model.base.featurizer = data.featurizer;

  std::vector<double> scores(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) scores[i] = decision_value(model.base, X.row(i));
  const PlattParams platt = platt_fit(scores, y);
  if (!(platt.A < 0.0)) {
    throw Error("calibration is not increasing in the classifier score; the classifier does "
                "not separate labeled from unlabeled rows");
  }
  model.base.platt_A = platt.A;
  model.base.platt_B = platt.B;

  model.c = estimate_labeling_frequency(model.base, data.features, holdout);
  model.holdout_frac = holdout_frac;
  model.training_manifest_hash = data.manifest_hash;
  model.training_rows = data.size();
  model.labeled_rows = labeled.size();
  model.holdout_rows = n_holdout;
  return model;
}

/// Adjusted probability p(y = 1 | x) = min(1, g(x) / c).
inline double pu_predict_proba(const PUModel& model, std::span<const double> x) {
  const double g = calibrated_probability(model.base, x);
  return std::min(1.0, g / model.c);
}

inline void check_featurizer_compatible(const PUModel& model, const Corpus& corpus) {
  const FeaturizerConfig& cfg = model.base.featurizer;
  if (cfg.dim != model.base.weights.size()) {
    throw Error("featurizer mismatch: model featurizer dim " + std::to_string(cfg.dim) +
                " but " + std::to_string(model.base.weights.size()) + " weights");
  }
  if (cfg.kind == FeaturizerKind::precomputed_embedding) {
    if (!corpus.embedding_dim) {
      throw Error("featurizer mismatch: model expects precomputed embeddings, corpus has none");
    }
    if (*corpus.embedding_dim != cfg.dim) {
      throw Error("featurizer mismatch: model expects embedding dimension " +
                  std::to_string(cfg.dim) + ", corpus has " +
                  std::to_string(*corpus.embedding_dim));
    }
  }
}

/// Records whose adjusted probability reaches `threshold`, most probable
/// first, ties broken by ascending record id.
inline ExtractionResult extract_moments(const PUModel& model, const Corpus& corpus,
                                        double threshold = 0.5) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error("threshold must lie in (0, 1)");
  check_featurizer_compatible(model, corpus);

  ExtractionResult result;
  result.threshold = threshold;
  for (const SentenceRecord& rec : corpus.records) {
    std::vector<double> x;
    try {
      x = featurize_record(rec, model.base.featurizer);
    } catch (const Error& e) {
      throw Error(std::string("featurizer mismatch: ") + e.what());
    }
    const double p = pu_predict_proba(model, x);
    if (p >= threshold) result.rows.push_back({rec.id, rec.subgroup, rec.text, p});
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const ExtractionRow& a, const ExtractionRow& b) {
              if (a.probability != b.probability) return a.probability > b.probability;
              return a.record_id < b.record_id;
            });
  return result;
}

// ---------------------------------------------------------------------------
// Model file
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json model_to_json(const PUModel& m) {
  using ojson = nlohmann::ordered_json;
  const FeaturizerConfig& f = m.base.featurizer;
  const SvmHyperparams& hp = m.base.hyperparams;

  ojson j;
  j["format"] = m.version;
  j["featurizer"] = {{"kind", std::string(to_string(f.kind))},
                     {"dim", f.dim},
                     {"ngram_min", f.ngram_min},
                     {"ngram_max", f.ngram_max},
                     {"hash_seed", f.hash_seed},
                     {"l2_normalize", f.l2_normalize}};
  j["hyperparams"] = {{"C", hp.C},
                      {"tol", hp.tol},
                      {"max_iter", hp.max_iter},
                      {"seed", hp.seed},
                      {"class_weight", std::string(to_string(hp.class_weight))}};
  j["training"] = {{"manifest_hash", m.training_manifest_hash},
                   {"rows", m.training_rows},
                   {"labeled_rows", m.labeled_rows},
                   {"holdout_rows", m.holdout_rows},
                   {"holdout_frac", m.holdout_frac},
                   {"converged", m.base.converged},
                   {"epochs", m.base.epochs}};
  j["c"] = m.c;
  j["platt_A"] = m.base.platt_A;
  j["platt_B"] = m.base.platt_B;
  j["bias"] = m.base.bias;
  j["weights"] = m.base.weights;
  return j;
}

inline PUModel model_from_json(const nlohmann::json& j) {
  try {
    PUModel m;
    m.version = j.at("format").get<std::string>();
    if (m.version != kModelFormatVersion) {
      throw Error("unsupported model format \"" + m.version + "\"");
    }
    const auto& f = j.at("featurizer");
    const std::string kind = f.at("kind").get<std::string>();
    if (kind == "precomputed_embedding") {
      m.base.featurizer.kind = FeaturizerKind::precomputed_embedding;
    } else if (kind == "hashed_ngram") {
      m.base.featurizer.kind = FeaturizerKind::hashed_ngram;
    } else {
      throw Error("unknown featurizer kind \"" + kind + "\"");
    }
    m.base.featurizer.dim = f.at("dim").get<std::size_t>();
    m.base.featurizer.ngram_min = f.at("ngram_min").get<std::size_t>();
    m.base.featurizer.ngram_max = f.at("ngram_max").get<std::size_t>();
    m.base.featurizer.hash_seed = f.at("hash_seed").get<std::uint64_t>();
    m.base.featurizer.l2_normalize = f.at("l2_normalize").get<bool>();

    const auto& hp = j.at("hyperparams");
    m.base.hyperparams.C = hp.at("C").get<double>();
    m.base.hyperparams.tol = hp.at("tol").get<double>();
    m.base.hyperparams.max_iter = hp.at("max_iter").get<std::size_t>();
    m.base.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    m.base.hyperparams.class_weight =
        hp.at("class_weight").get<std::string>() == "balanced" ? ClassWeight::balanced
                                                               : ClassWeight::none;

    const auto& tr = j.at("training");
    m.training_manifest_hash = tr.at("manifest_hash").get<std::string>();
    m.training_rows = tr.at("rows").get<std::size_t>();
    m.labeled_rows = tr.at("labeled_rows").get<std::size_t>();
    m.holdout_rows = tr.at("holdout_rows").get<std::size_t>();
    m.holdout_frac = tr.at("holdout_frac").get<double>();
    m.base.converged = tr.at("converged").get<bool>();
    m.base.epochs = tr.at("epochs").get<std::size_t>();

    m.c = j.at("c").get<double>();
    m.base.platt_A = j.at("platt_A").get<double>();
    m.base.platt_B = j.at("platt_B").get<double>();
    m.base.bias = j.at("bias").get<double>();
    m.base.weights = j.at("weights").get<std::vector<double>>();
    if (!(m.c > 0.0 && m.c <= 1.0)) throw Error("labeling frequency c must lie in (0, 1]");
    if (m.base.weights.size() != m.base.featurizer.dim) {
      throw Error("weight count does not match featurizer dim");
    }
    if (!all_finite(m.base.weights)) throw Error("non-finite weights");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

inline void save_model(const PUModel& m, std::ostream& out) { out << model_to_json(m).dump(1) << '\n'; }

inline void save_model(const PUModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path);
  save_model(m, out);
  if (!out) throw Error("write failed: " + path);
}

inline PUModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
  return model_from_json(j);
}

inline PUModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  try {
    return load_model(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace pukit
