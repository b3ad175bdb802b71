// pukit: train a PU happy-moment classifier, extract moments, and contrast
// the extracted subcorpora.

#include <iostream>
#include <iterator>
#include <string>

#include "CLI11.hpp"
#include "pukit/commands.hpp"

namespace {

void add_svm_flags(CLI::App* cmd, pukit::SvmHyperparams& svm, std::string& class_weight) {
  cmd->add_option("--C", svm.C, "SVM cost (smaller = stronger regularization)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", svm.tol, "Stop when the largest KKT violation drops below this")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", svm.max_iter, "Maximum solver epochs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--class-weight", class_weight, "Per-class cost scaling")
      ->capture_default_str()
      ->check(CLI::IsMember({"balanced", "none"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive-unlabeled happy-moment extraction and corpus contrast"};
  app.require_subcommand(1);

  pukit::cli::GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for sampling, solver order and holdout split")
      ->capture_default_str();
  app.add_option("--out-dir", global.out_dir, "Directory for outputs and run manifests")
      ->capture_default_str();
  app.add_flag("--quiet", global.quiet, "Suppress progress and warnings");

  // train
  pukit::cli::TrainOptions train;
  std::string train_class_weight = "balanced";
  bool no_l2 = false;
  auto* train_cmd = app.add_subcommand("train", "Fit the PU classifier");
  train_cmd->add_option("--positives", train.positives, "Labeled-positive corpus (JSONL)")
      ->required();
  train_cmd->add_option("--unlabeled", train.unlabeled, "Unlabeled corpus (JSONL)")->required();
  train_cmd->add_option("--model", train.model, "Model output path [<out-dir>/model.json]");
  train_cmd->add_option("--cap-pos", train.cap_pos, "Positive sentences sampled")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--cap-unl", train.cap_unl, "Unlabeled sentences sampled")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd
      ->add_option("--subjects-per-class", train.subjects_per_class,
                   "Train on the first N users of each subgroup (0 = all)")
      ->capture_default_str();
  train_cmd->add_option("--holdout-frac", train.holdout_frac,
                        "Share of labeled positives held out to estimate c")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--featurizer", train.featurizer, "auto, embedding or hashed")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "embedding", "hashed"}));
  train_cmd->add_option("--hash-dim", train.hash_dim, "Buckets for the hashed featurizer")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--ngram-min", train.ngram_min)->capture_default_str();
  train_cmd->add_option("--ngram-max", train.ngram_max)->capture_default_str();
  train_cmd->add_option("--hash-seed", train.hash_seed)->capture_default_str();
  train_cmd->add_flag("--no-l2-normalize", no_l2, "Keep raw feature vectors");
  add_svm_flags(train_cmd, train.svm, train_class_weight);

  // extract
  pukit::cli::ExtractOptions extract;
  auto* extract_cmd = app.add_subcommand("extract", "Score a corpus and keep likely happy moments");
  extract_cmd->add_option("--model", extract.model, "Model file")->required();
  extract_cmd->add_option("--corpus", extract.corpus, "Corpus to scan (JSONL)")->required();
  extract_cmd->add_option("--output", extract.output, "CSV output [<out-dir>/extraction.csv]");
  extract_cmd->add_option("--threshold", extract.threshold, "Minimum adjusted probability")
      ->capture_default_str();
  extract_cmd
      ->add_option("--subjects-per-class", extract.subjects_per_class,
                   "Skip the first N users of each subgroup (the training subjects)")
      ->capture_default_str();

  // dominance
  pukit::cli::DominanceOptions dom;
  auto* dom_cmd = app.add_subcommand("dominance", "Lexicon coverage and dominance scores");
  dom_cmd->add_option("--extraction", dom.extraction, "Extraction CSV")->required();
  dom_cmd->add_option("--corpus", dom.corpus, "Corpus the extraction came from")->required();
  dom_cmd->add_option("--lexicon", dom.lexicon, "Lexicon file")->required();
  dom_cmd->add_option("--foreground", dom.foreground, "depression or control")
      ->capture_default_str()
      ->check(CLI::IsMember({"depression", "control"}));
  dom_cmd->add_option("--output", dom.output, "CSV output [<out-dir>/dominance_<fg>.csv]");

  // keyness
  pukit::cli::KeynessOptions key;
  auto* key_cmd = app.add_subcommand("keyness", "Log-likelihood keyness ranking");
  key_cmd->add_option("--extraction", key.extraction, "Extraction CSV")->required();
  key_cmd->add_option("--corpus", key.corpus, "Corpus the extraction came from")->required();
  key_cmd->add_option("--target", key.target, "depression or control")
      ->capture_default_str()
      ->check(CLI::IsMember({"depression", "control"}));
  key_cmd->add_option("--pos", key.pos, "NOUN, VERB, ADJ, ADV, PRON, OTHER or all")
      ->capture_default_str();
  key_cmd->add_option("--min-freq", key.min_freq, "Minimum combined frequency")
      ->capture_default_str();
  key_cmd->add_option("--output", key.output, "CSV output [<out-dir>/keyness_<pos>.csv]");

  // report
  pukit::cli::ReportOptions rep;
  auto* rep_cmd = app.add_subcommand("report", "Dominance tables, keyness tables and charts");
  rep_cmd->add_option("--extraction", rep.extraction, "Extraction CSV")->required();
  rep_cmd->add_option("--corpus", rep.corpus, "Corpus the extraction came from")->required();
  rep_cmd->add_option("--lexicon", rep.lexicon, "Lexicon file")->required();
  rep_cmd->add_option("--target", rep.target, "Keyness target subgroup")
      ->capture_default_str()
      ->check(CLI::IsMember({"depression", "control"}));
  rep_cmd->add_option("--min-freq", rep.min_freq, "Minimum combined keyness frequency")
      ->capture_default_str();
  rep_cmd->add_option("--top", rep.top_n, "Bars per side in keyness charts")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  // split
  std::string split_input;
  auto* split_cmd =
      app.add_subcommand("split", "Split plain text into sentences, one per output line");
  split_cmd->add_option("input", split_input, "Text file (default: stdin)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      train.svm.class_weight = train_class_weight == "balanced" ? pukit::ClassWeight::balanced
                                                                : pukit::ClassWeight::none;
      train.l2_normalize = !no_l2;
      pukit::cli::cmd_train(global, train);
    } else if (*extract_cmd) {
      pukit::cli::cmd_extract(global, extract);
    } else if (*dom_cmd) {
      pukit::cli::cmd_dominance(global, dom);
    } else if (*key_cmd) {
      pukit::cli::cmd_keyness(global, key);
    } else if (*rep_cmd) {
      pukit::cli::cmd_report(global, rep);
    } else if (*split_cmd) {
      std::string text;
      if (split_input.empty()) {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
      } else {
        std::ifstream in(split_input, std::ios::binary);
        if (!in) throw pukit::Error("cannot open " + split_input);
        text.assign(std::istreambuf_iterator<char>(in), {});
      }
      for (const auto& s : pukit::split_sentences(text)) std::cout << s << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
