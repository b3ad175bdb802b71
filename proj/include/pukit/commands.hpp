#pragma once

// Implementations behind the `pukit` subcommands. Every command writes its
// outputs through an OutputSet, so either all files appear or none do, and
// echoes its effective configuration to a run manifest.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pukit/common.hpp"
#include "pukit/corpus.hpp"
#include "pukit/features.hpp"
#include "pukit/lexstats.hpp"
#include "pukit/pu_dataset.hpp"
#include "pukit/pulearn.hpp"
#include "pukit/report.hpp"
#include "pukit/svm.hpp"

namespace pukit::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool quiet = false;
};

/// Files are written next to their destination with a ".partial" suffix and
/// renamed on commit(); anything uncommitted is deleted on destruction.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    if (committed_) return;
    for (const auto& [tmp, final_path] : pending_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  std::ofstream open(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".partial";
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    pending_.emplace_back(tmp, path);
    return out;
  }

  void commit() {
    for (const auto& [tmp, final_path] : pending_) fs::rename(tmp, final_path);
    committed_ = true;
  }

  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    for (const auto& p : pending_) out.push_back(p.second.string());
    return out;
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> pending_;
  bool committed_ = false;
};

namespace detail {

inline fs::path resolve_output(const GlobalOptions& g, const std::string& explicit_path,
                               const char* default_name) {
  if (!explicit_path.empty()) return explicit_path;
  return fs::path(g.out_dir) / default_name;
}

inline void close_checked(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw Error("write failed: " + path.string());
}

inline ojson corpus_entry(const Corpus& c) {
  return {{"path", c.manifest.source},
          {"records", c.manifest.record_count},
          {"content_hash", c.manifest.content_hash}};
}

inline void warn(const GlobalOptions& g, const std::string& msg) {
  if (!g.quiet) std::cerr << "warning: " << msg << '\n';
}

inline void info(const GlobalOptions& g, const std::string& msg) {
  if (!g.quiet) std::cout << msg << '\n';
}

inline Subgroup contrast_group(Subgroup g) {
  if (g == Subgroup::depression) return Subgroup::control;
  if (g == Subgroup::control) return Subgroup::depression;
  throw Error("subgroup must be depression or control");
}

inline ExtractionResult load_extraction(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open extraction file: " + path);
  try {
    return read_extraction_csv(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline CorpusStats stats_for(const ExtractionResult& ex, const Corpus& corpus, Subgroup g) {
  CorpusStats s = build_stats(ex, corpus, g);
  if (s.token_count == 0) {
    throw Error("no extracted sentences for subgroup " + std::string(to_string(g)));
  }
  return s;
}

inline std::optional<Pos> parse_pos_filter(const std::string& s) {
  if (s == "all" || s == "ALL") return std::nullopt;
  const auto p = parse_pos(s);
  if (!p) throw Error("unknown POS filter \"" + s + "\"");
  return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainOptions {
  std::string positives;
  std::string unlabeled;
  std::string model;  // default <out-dir>/model.json
  std::size_t cap_pos = 50000;
  std::size_t cap_unl = 50000;
  std::size_t subjects_per_class = 0;  // 0 = every unlabeled user
  SvmHyperparams svm;
  double holdout_frac = 0.2;
  std::string featurizer = "auto";  // auto | embedding | hashed
  std::size_t hash_dim = 4096;
  std::size_t ngram_min = 1;
  std::size_t ngram_max = 2;
  std::uint64_t hash_seed = 0;
  bool l2_normalize = true;
};

inline FeaturizerConfig resolve_featurizer(const TrainOptions& o, const Corpus& positives,
                                           const Corpus& unlabeled) {
  FeaturizerConfig cfg;
  cfg.l2_normalize = o.l2_normalize;
  std::string kind = o.featurizer;
  if (kind == "auto") {
    kind = positives.embedding_dim && unlabeled.embedding_dim ? "embedding" : "hashed";
  }
  if (kind == "embedding") {
    cfg.kind = FeaturizerKind::precomputed_embedding;
    cfg.dim = positives.embedding_dim.value_or(0);
  } else if (kind == "hashed") {
    cfg.kind = FeaturizerKind::hashed_ngram;
    cfg.dim = o.hash_dim;
    cfg.ngram_min = o.ngram_min;
    cfg.ngram_max = o.ngram_max;
    cfg.hash_seed = o.hash_seed;
  } else {
    throw Error("unknown featurizer \"" + o.featurizer + "\" (auto, embedding or hashed)");
  }
  return cfg;
}

inline PUModel cmd_train(const GlobalOptions& g, TrainOptions o) {
  const Corpus positives = load_corpus(o.positives);
  const Corpus unlabeled_all = load_corpus(o.unlabeled);
  const Corpus unlabeled = split_by_subjects(unlabeled_all, o.subjects_per_class).training;

  const FeaturizerConfig featurizer = resolve_featurizer(o, positives, unlabeled);
  o.svm.seed = g.seed;
  const PUDataset data =
      assemble_pu_dataset(positives, unlabeled, {o.cap_pos, o.cap_unl, g.seed}, featurizer);
  for (const auto& w : data.warnings) detail::warn(g, w);

  const PUModel model = elkanoto_fit(data, o.svm, o.holdout_frac, g.seed);
  if (!model.base.converged) {
    detail::warn(g, "SVM stopped at max_iter=" + std::to_string(o.svm.max_iter) +
                        " before reaching tol=" + format_double(o.svm.tol));
  }

  const fs::path model_path = detail::resolve_output(g, o.model, "model.json");
  const fs::path manifest_path = fs::path(g.out_dir) / "train_manifest.json";

  ojson manifest;
  manifest["subcommand"] = "train";
  manifest["config"] = {{"seed", g.seed},
                        {"cap_pos", o.cap_pos},
                        {"cap_unl", o.cap_unl},
                        {"subjects_per_class", o.subjects_per_class},
                        {"C", o.svm.C},
                        {"tol", o.svm.tol},
                        {"max_iter", o.svm.max_iter},
                        {"class_weight", std::string(to_string(o.svm.class_weight))},
                        {"holdout_frac", o.holdout_frac},
                        {"featurizer", std::string(to_string(featurizer.kind))},
                        {"dim", featurizer.dim},
                        {"ngram_min", featurizer.ngram_min},
                        {"ngram_max", featurizer.ngram_max},
                        {"hash_seed", featurizer.hash_seed},
                        {"l2_normalize", featurizer.l2_normalize}};
  manifest["inputs"] = {{"positives", detail::corpus_entry(positives)},
                        {"unlabeled", detail::corpus_entry(unlabeled_all)}};
  manifest["training_subjects"] = unlabeled.records.empty()
                                      ? ojson::array()
                                      : ojson(training_subjects(unlabeled_all, o.subjects_per_class));
  manifest["result"] = {{"training_rows", data.size()},
                        {"labeled_rows", data.labeled_count()},
                        {"unlabeled_rows", data.size() - data.labeled_count()},
                        {"dataset_hash", data.manifest_hash},
                        {"c", model.c},
                        {"platt_A", model.base.platt_A},
                        {"platt_B", model.base.platt_B},
                        {"converged", model.base.converged},
                        {"epochs", model.base.epochs}};
  manifest["warnings"] = data.warnings;
  manifest["outputs"] = {model_path.string()};

  OutputSet outputs;
  {
    auto out = outputs.open(model_path);
    save_model(model, out);
    detail::close_checked(out, model_path);
  }
  {
    auto out = outputs.open(manifest_path);
    out << manifest.dump(2) << '\n';
    detail::close_checked(out, manifest_path);
  }
  outputs.commit();
  detail::info(g, "trained on " + std::to_string(data.size()) + " rows (" +
                      std::to_string(data.labeled_count()) + " labeled); c = " +
                      format_double(model.c) + "; model written to " + model_path.string());
  return model;
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

struct ExtractOptions {
  std::string model;
  std::string corpus;
  std::string output;  // default <out-dir>/extraction.csv
  double threshold = 0.5;
  std::size_t subjects_per_class = 0;  // >0: skip the training subjects
};

inline ExtractionResult cmd_extract(const GlobalOptions& g, const ExtractOptions& o) {
  const PUModel model = load_model(o.model);
  const Corpus full = load_corpus(o.corpus);
  const Corpus corpus =
      o.subjects_per_class > 0 ? split_by_subjects(full, o.subjects_per_class).validation : full;
  const ExtractionResult result = extract_moments(model, corpus, o.threshold);

  std::map<std::string, std::size_t> per_group;
  for (const auto& r : result.rows) ++per_group[std::string(to_string(r.subgroup))];

  const fs::path out_path = detail::resolve_output(g, o.output, "extraction.csv");
  const fs::path manifest_path = fs::path(g.out_dir) / "extract_manifest.json";
  ojson manifest;
  manifest["subcommand"] = "extract";
  manifest["config"] = {{"seed", g.seed},
                        {"threshold", o.threshold},
                        {"subjects_per_class", o.subjects_per_class}};
  manifest["inputs"] = {{"model", o.model}, {"corpus", detail::corpus_entry(full)}};
  manifest["result"] = {{"scanned_records", corpus.size()},
                        {"extracted", result.rows.size()},
                        {"per_subgroup", per_group}};
  manifest["outputs"] = {out_path.string()};

  OutputSet outputs;
  {
    auto out = outputs.open(out_path);
    write_extraction_csv(result, out);
    detail::close_checked(out, out_path);
  }
  {
    auto out = outputs.open(manifest_path);
    out << manifest.dump(2) << '\n';
    detail::close_checked(out, manifest_path);
  }
  outputs.commit();
  detail::info(g, "extracted " + std::to_string(result.rows.size()) + " of " +
                      std::to_string(corpus.size()) + " sentences to " + out_path.string());
  return result;
}

// ---------------------------------------------------------------------------
// dominance / keyness / report
// ---------------------------------------------------------------------------

struct DominanceOptions {
  std::string extraction;
  std::string corpus;
  std::string lexicon;
  std::string foreground = "depression";
  std::string output;  // default <out-dir>/dominance_<foreground>.csv
};

inline std::vector<DominanceRow> cmd_dominance(const GlobalOptions& g, const DominanceOptions& o) {
  const auto fg_group = parse_subgroup(o.foreground);
  if (!fg_group) throw Error("unknown foreground subgroup \"" + o.foreground + "\"");
  const Subgroup bg_group = detail::contrast_group(*fg_group);

  const ExtractionResult ex = detail::load_extraction(o.extraction);
  const Corpus corpus = load_corpus(o.corpus);
  const Lexicon lexicon = load_lexicon(o.lexicon);
  const CorpusStats fg = detail::stats_for(ex, corpus, *fg_group);
  const CorpusStats bg = detail::stats_for(ex, corpus, bg_group);
  const auto rows = dominance_table(fg, bg, lexicon);

  const std::string name = "dominance_" + std::string(to_string(*fg_group)) + ".csv";
  const fs::path out_path = detail::resolve_output(g, o.output, name.c_str());
  OutputSet outputs;
  auto out = outputs.open(out_path);
  write_dominance_csv(rows, out);
  detail::close_checked(out, out_path);
  outputs.commit();
  detail::info(g, "dominance table written to " + out_path.string());
  return rows;
}

struct KeynessOptions {
  std::string extraction;
  std::string corpus;
  std::string target = "depression";
  std::string pos = "all";
  std::uint64_t min_freq = 5;
  std::string output;  // default <out-dir>/keyness_<pos>.csv
};

inline std::vector<KeynessRow> cmd_keyness(const GlobalOptions& g, const KeynessOptions& o) {
  const auto target_group = parse_subgroup(o.target);
  if (!target_group) throw Error("unknown target subgroup \"" + o.target + "\"");
  const Subgroup ref_group = detail::contrast_group(*target_group);
  const auto pos = detail::parse_pos_filter(o.pos);

  const ExtractionResult ex = detail::load_extraction(o.extraction);
  const Corpus corpus = load_corpus(o.corpus);
  const CorpusStats target = detail::stats_for(ex, corpus, *target_group);
  const CorpusStats reference = detail::stats_for(ex, corpus, ref_group);
  const auto rows = keyness_g2(target, reference, pos, o.min_freq);

  const std::string name = "keyness_" + (pos ? to_lower(to_string(*pos)) : std::string("all")) + ".csv";
  const fs::path out_path = detail::resolve_output(g, o.output, name.c_str());
  OutputSet outputs;
  auto out = outputs.open(out_path);
  write_keyness_csv(rows, out);
  detail::close_checked(out, out_path);
  outputs.commit();
  detail::info(g, "keyness ranking written to " + out_path.string());
  return rows;
}

struct ReportOptions {
  std::string extraction;
  std::string corpus;
  std::string lexicon;
  std::string target = "depression";
  std::uint64_t min_freq = 5;
  std::size_t top_n = 20;
};

/// Every file `cmd_report` writes, relative to the output directory.
inline std::vector<std::string> report_file_names() {
  return {"dominance_depression.csv", "dominance_control.csv", "dominance_table.csv",
          "keyness_noun.csv",         "keyness_verb.csv",      "keyness_noun.svg",
          "keyness_verb.svg",         "report_manifest.json"};
}

inline void cmd_report(const GlobalOptions& g, const ReportOptions& o) {
  const auto target_group = parse_subgroup(o.target);
  if (!target_group) throw Error("unknown target subgroup \"" + o.target + "\"");
  const Subgroup ref_group = detail::contrast_group(*target_group);

  const ExtractionResult ex = detail::load_extraction(o.extraction);
  const Corpus corpus = load_corpus(o.corpus);
  const Lexicon lexicon = load_lexicon(o.lexicon);
  const CorpusStats depression = detail::stats_for(ex, corpus, Subgroup::depression);
  const CorpusStats control = detail::stats_for(ex, corpus, Subgroup::control);

  const DominanceSide dep_side{"depression", dominance_table(depression, control, lexicon),
                               &depression};
  const DominanceSide ctl_side{"control", dominance_table(control, depression, lexicon), &control};

  const CorpusStats& target = *target_group == Subgroup::depression ? depression : control;
  const CorpusStats& reference = *target_group == Subgroup::depression ? control : depression;
  const auto nouns = keyness_g2(target, reference, Pos::NOUN, o.min_freq);
  const auto verbs = keyness_g2(target, reference, Pos::VERB, o.min_freq);

  const fs::path dir(g.out_dir);
  OutputSet outputs;
  const auto emit = [&](const char* name, const auto& writer) {
    const fs::path p = dir / name;
    auto out = outputs.open(p);
    writer(out);
    detail::close_checked(out, p);
  };
  emit("dominance_depression.csv", [&](std::ostream& s) { write_dominance_csv(dep_side.rows, s); });
  emit("dominance_control.csv", [&](std::ostream& s) { write_dominance_csv(ctl_side.rows, s); });
  emit("dominance_table.csv",
       [&](std::ostream& s) { write_two_sided_dominance_csv(dep_side, ctl_side, lexicon, s); });
  emit("keyness_noun.csv", [&](std::ostream& s) { write_keyness_csv(nouns, s); });
  emit("keyness_verb.csv", [&](std::ostream& s) { write_keyness_csv(verbs, s); });

  KeynessChartOptions chart;
  chart.target_label = std::string(to_string(*target_group));
  chart.reference_label = std::string(to_string(ref_group));
  chart.top_n = o.top_n;
  chart.title = "Keyness of nouns (" + chart.target_label + " vs " + chart.reference_label + ")";
  emit("keyness_noun.svg", [&](std::ostream& s) { write_keyness_svg(nouns, chart, s); });
  chart.title = "Keyness of verbs (" + chart.target_label + " vs " + chart.reference_label + ")";
  emit("keyness_verb.svg", [&](std::ostream& s) { write_keyness_svg(verbs, chart, s); });

  ojson manifest;
  manifest["subcommand"] = "report";
  manifest["config"] = {{"seed", g.seed},
                        {"target", chart.target_label},
                        {"min_freq", o.min_freq},
                        {"top_n", o.top_n}};
  manifest["inputs"] = {{"extraction", o.extraction},
                        {"corpus", detail::corpus_entry(corpus)},
                        {"lexicon", o.lexicon}};
  manifest["result"] = {{"depression_tokens", depression.token_count},
                        {"control_tokens", control.token_count},
                        {"categories", lexicon.categories.size()},
                        {"noun_rows", nouns.size()},
                        {"verb_rows", verbs.size()}};
  manifest["outputs"] = outputs.paths();
  emit("report_manifest.json", [&](std::ostream& s) { s << manifest.dump(2) << '\n'; });
  outputs.commit();
  detail::info(g, "report written to " + dir.string());
}

}  // namespace pukit::cli
