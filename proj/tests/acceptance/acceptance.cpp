// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../test_support.hpp"
#include "CLI11.hpp"

namespace {

using namespace pukit;
using testing::fs::path;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) { return format_fixed(v, digits); }

std::vector<int> signed_labels(const std::vector<std::uint8_t>& s) {
  std::vector<int> y;
  for (const auto v : s) y.push_back(v ? 1 : -1);
  return y;
}

// ---------------------------------------------------------------------------

Outcome synthetic_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  int inside = 0;
  std::string values;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = testing::make_gaussian_pu(5000, 0.4, 1.5, seed);
    SvmHyperparams hp;
    hp.seed = seed;
    const PUModel m = elkanoto_fit(testing::to_pu_dataset(g, seed), hp, 0.2, seed);
    inside += (m.c >= 0.33 && m.c <= 0.47);
    values += (values.empty() ? "" : " ") + fmt(m.c, 3);
  }
  const double secs = seconds_since(t0);
  return {inside >= 8 && secs < 30.0,
          "c in [0.33, 0.47] on " + std::to_string(inside) + "/10 seeds (need 8); c = " + values + "; " +
              fmt(secs, 1) + " s (limit 30)"};
}

Outcome supervised_parity() {
  double pu_sum = 0.0, sup_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto train = testing::make_gaussian_pu(5000, 0.4, 1.5, seed);
    const auto test = testing::make_gaussian_pu(5000, 0.4, 1.5, seed + 1000);
    SvmHyperparams hp;
    hp.seed = seed;
    const PUModel pu = elkanoto_fit(testing::to_pu_dataset(train, seed), hp, 0.2, seed);

    std::vector<int> y_true;
    for (const int y : train.y) y_true.push_back(y ? 1 : -1);
    const LinearModel sup = train_linear_svm(train.x, y_true, hp);

    std::vector<int> pred_pu, pred_sup;
    for (std::size_t i = 0; i < test.x.rows(); ++i) {
      pred_pu.push_back(pu_predict_proba(pu, test.x.row(i)) >= 0.5 ? 1 : 0);
      pred_sup.push_back(decision_value(sup, test.x.row(i)) > 0.0 ? 1 : 0);
    }
    pu_sum += testing::f1_score(test.y, pred_pu);
    sup_sum += testing::f1_score(test.y, pred_sup);
  }
  const double pu_f1 = pu_sum / 5.0, sup_f1 = sup_sum / 5.0;
  const double gap = std::abs(pu_f1 - sup_f1);
  return {gap <= 0.05, "mean F1 PU " + fmt(pu_f1) + " vs supervised " + fmt(sup_f1) + "; gap " + fmt(gap) +
                           " (limit 0.05)"};
}

Outcome g2_equivalence() {
  Rng rng(2018);
  double worst = 0.0;
  std::size_t zero_cases = 0;
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t a = rng.uniform_index(1001);
    std::uint64_t b = rng.uniform_index(1001);
    // Force every 0 ln 0 pattern to appear regularly.
    switch (i % 8) {
      case 0: a = 0; break;
      case 1: b = 0; break;
      case 2: a = 0; b = 0; break;
      default: break;
    }
    std::uint64_t c = std::max<std::uint64_t>(a, 1) + rng.uniform_index(1000000 - std::max<std::uint64_t>(a, 1) + 1);
    std::uint64_t d = std::max<std::uint64_t>(b, 1) + rng.uniform_index(1000000 - std::max<std::uint64_t>(b, 1) + 1);
    if (i % 8 == 3) c = std::max<std::uint64_t>(a, 1);  // word is the whole target corpus
    if (i % 8 == 4) d = std::max<std::uint64_t>(b, 1);
    zero_cases += (a == 0 || b == 0);
    const double diff = std::abs(g2(a, b, c, d) - static_cast<double>(testing::g2_oracle(a, b, c, d)));
    worst = std::max(worst, diff);
  }
  return {worst <= 1e-9, "10000 tables (" + std::to_string(zero_cases) + " with a zero cell); max |diff| " +
                             format_double(worst) + " (limit 1e-9)"};
}

Outcome dominance_reciprocity() {
  std::istringstream lex_text(
      "[FRIENDS]\nfriend*\nbuddy\n[FAMILY]\nmom\ndad\nsister\n[MUSIC]\nsong*\nband\n"
      "[SLEEP]\nnap*\nsleep*\n[MONEY]\nmoney\nbonus\n");
  const Lexicon lex = parse_lexicon(lex_text);
  const std::vector<std::string> vocab = {"friend", "friends", "buddy", "mom", "dad", "sister", "song", "songs",
                                          "band", "nap", "sleeping", "money", "bonus", "the", "bus", "day"};
  Rng rng(7);
  const auto random_stats = [&] {
    CorpusStats s;
    for (const auto& w : vocab) {
      if (rng.uniform_index(4) == 0) continue;
      const auto n = rng.uniform_index(200);
      for (std::uint64_t k = 0; k < n; ++k) s.add(Token{w, w, Pos::NOUN});
    }
    s.add(Token{"filler", "filler", Pos::OTHER});
    return s;
  };
  double worst = 0.0;
  std::size_t checked = 0;
  bool identity_exact = true;
  for (int pair = 0; pair < 1000; ++pair) {
    const CorpusStats f = random_stats();
    const CorpusStats b = random_stats();
    for (const auto& [name, cat] : lex.categories) {
      const auto fb = dominance(f, b, cat);
      const auto bf = dominance(b, f, cat);
      if (fb.coverage_f > 0.0 && fb.coverage_b > 0.0) {
        worst = std::max(worst, std::abs(*fb.dominance * *bf.dominance - 1.0));
        ++checked;
      }
      const auto ff = dominance(f, f, cat);
      if (ff.coverage_f > 0.0 && !(ff.dominance && *ff.dominance == 1.0)) identity_exact = false;
    }
  }
  return {worst <= 1e-12 && identity_exact && checked > 0,
          std::to_string(checked) + " category pairs; max |D(F,B) D(B,F) - 1| " + format_double(worst) +
              " (limit 1e-12); identical corpora exactly 1: " + (identity_exact ? "yes" : "no")};
}

Outcome svm_correctness() {
  // Two-point hard margin.
  Matrix two(2, 2);
  two(0, 0) = -1.0;
  two(1, 0) = 1.0;
  const std::vector<int> y2 = {-1, 1};
  SvmHyperparams hp;
  hp.C = 1000.0;
  const LinearModel m2 = train_linear_svm(two, y2, hp);
  const double err2 =
      std::max({std::abs(m2.weights[0] - 1.0), std::abs(m2.weights[1]), std::abs(m2.bias)});

  // Dual monotonicity on overlapping data.
  const auto g = testing::make_gaussian_pu(1000, 0.4, 1.0, 5);
  const auto y = signed_labels(g.s);
  SvmHyperparams hp_mono;
  hp_mono.tol = 1e-6;
  SvmTrace trace;
  const LinearModel mm = train_linear_svm(g.x, y, hp_mono, &trace);
  bool monotone = true;
  for (std::size_t e = 1; e < trace.dual_objective.size(); ++e) {
    if (trace.dual_objective[e] < trace.dual_objective[e - 1]) monotone = false;
  }
  const bool kkt = mm.converged && trace.final_violation < hp_mono.tol;

  // Duplicated rows at half C.
  const auto small = testing::make_gaussian_pu(150, 0.5, 1.0, 6);
  const auto ys = signed_labels(small.s);
  Matrix doubled;
  std::vector<int> yd;
  for (int rep = 0; rep < 2; ++rep) {
    for (std::size_t i = 0; i < small.x.rows(); ++i) {
      doubled.append_row(small.x.row(i));
      yd.push_back(ys[i]);
    }
  }
  SvmHyperparams hp_full;
  hp_full.C = 1.0;
  hp_full.tol = 1e-10;
  hp_full.max_iter = 200000;
  SvmHyperparams hp_half = hp_full;
  hp_half.C = 0.5;
  const LinearModel a = train_linear_svm(small.x, ys, hp_full);
  const LinearModel b = train_linear_svm(doubled, yd, hp_half);
  double dup = std::abs(a.bias - b.bias);
  for (std::size_t j = 0; j < a.weights.size(); ++j) dup = std::max(dup, std::abs(a.weights[j] - b.weights[j]));

  return {err2 < 1e-3 && monotone && kkt && dup <= 1e-6,
          "two-point error " + format_double(err2) + " (limit 1e-3); dual monotone over " +
              std::to_string(trace.dual_objective.size()) + " epochs: " + (monotone ? "yes" : "no") +
              "; final violation < tol: " + (kkt ? "yes" : "no") + "; duplicate/half-C diff " +
              format_double(dup) + " (limit 1e-6)"};
}

Outcome platt_gradient() {
  const auto g = testing::make_gaussian_pu(500, 0.4, 1.5, 11);
  std::vector<double> scores;
  for (std::size_t i = 0; i < g.x.rows(); ++i) scores.push_back(g.x(i, 0) + 0.25 * g.x(i, 1));
  const auto labels = signed_labels(g.s);
  const PlattObjective f(scores, labels);
  Rng rng(99);
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double A = -4.0 + 5.0 * rng.uniform01();
    const double B = -3.0 + 6.0 * rng.uniform01();
    const auto grad = f.gradient(A, B);
    const double fdA = (f.value(A + h, B) - f.value(A - h, B)) / (2.0 * h);
    const double fdB = (f.value(A, B + h) - f.value(A, B - h)) / (2.0 * h);
    const double rel = std::hypot(grad[0] - fdA, grad[1] - fdB) /
                       std::max(std::hypot(grad[0], grad[1]), std::hypot(fdA, fdB));
    worst = std::max(worst, rel);
  }
  return {worst < 1e-5, "20 points; max relative error " + format_double(worst) + " (limit 1e-5)"};
}

// ---------------------------------------------------------------------------
// CLI-driven criteria

struct Pipeline {
  std::string cli;
  path data;
  path out;

  std::vector<std::string> global() const { return {"--seed", "7", "--quiet", "--out-dir", out.string()}; }

  bool run(std::vector<std::string> args, std::string& err) const {
    auto full = global();
    full.insert(full.end(), args.begin(), args.end());
    const auto r = testing::run_cli(cli, full, out.parent_path());
    if (r.exit_code != 0) err = r.stderr_text;
    return r.exit_code == 0;
  }

  bool all(std::string& err) const {
    const std::string happy = (data / "demo" / "happy.jsonl").string();
    const std::string mixed = (data / "demo" / "mixed.jsonl").string();
    const std::string extraction = (out / "extraction.csv").string();
    return run({"train", "--positives", happy, "--unlabeled", mixed, "--subjects-per-class", "5"}, err) &&
           run({"extract", "--model", (out / "model.json").string(), "--corpus", mixed, "--subjects-per-class",
                "5"},
               err) &&
           run({"report", "--extraction", extraction, "--corpus", mixed, "--lexicon",
                (data / "demo_lexicon.txt").string(), "--top", "20"},
               err);
  }
};

std::map<std::string, std::string> snapshot(const path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : testing::fs::directory_iterator(dir)) {
    if (e.is_regular_file()) files[e.path().filename().string()] = testing::read_file(e.path());
  }
  return files;
}

Outcome end_to_end_determinism(const path& work) {
  const path out = work / "determinism" / "out";
  testing::fs::remove_all(out.parent_path());
  testing::fs::create_directories(out);
  const Pipeline p{PUKIT_CLI_PATH, PUKIT_DATA_DIR, out};
  std::string err;
  if (!p.all(err)) return {false, "first run failed: " + err};
  const auto first = snapshot(out);
  testing::fs::remove_all(out);
  testing::fs::create_directories(out);
  if (!p.all(err)) return {false, "second run failed: " + err};
  const auto second = snapshot(out);

  std::vector<std::string> differing;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) differing.push_back(name);
  }
  const bool required = first.count("model.json") && first.count("extraction.csv") &&
                        first.count("dominance_table.csv") && first.count("keyness_noun.svg");
  std::string detail = std::to_string(first.size()) + " files compared";
  if (!differing.empty()) {
    detail += "; differing:";
    for (const auto& d : differing) detail += " " + d;
  }
  if (!required) detail += "; expected outputs missing";
  return {differing.empty() && required && first.size() == second.size(), detail};
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

Outcome demo_smoke(const path& work) {
  const path out = work / "demo" / "out";
  testing::fs::remove_all(out.parent_path());
  testing::fs::create_directories(out);
  const Pipeline p{PUKIT_CLI_PATH, PUKIT_DATA_DIR, out};
  const auto t0 = std::chrono::steady_clock::now();
  std::string err;
  if (!p.all(err)) return {false, "pipeline failed: " + err};
  const double secs = seconds_since(t0);

  std::vector<std::string> problems;
  const Lexicon lex = load_lexicon((p.data / "demo_lexicon.txt").string());

  // Two-sided dominance table: one ranked column group per subgroup.
  std::istringstream table_in(testing::read_file(out / "dominance_table.csv"));
  const auto table = read_csv(table_in);
  const std::vector<std::string> header = {"rank", "depression_category", "depression_score", "depression_examples",
                                           "control_category", "control_score", "control_examples"};
  if (table.empty() || table[0] != header) problems.push_back("dominance table header");
  if (table.size() != lex.categories.size() + 1) problems.push_back("dominance table row count");
  for (std::size_t side = 0; side < 2 && table.size() > 1; ++side) {
    double prev = INFINITY;
    bool seen_undefined = false;
    for (std::size_t r = 1; r < table.size(); ++r) {
      const std::string& score = table[r][2 + 3 * side];
      if (score.empty()) {
        seen_undefined = true;
        continue;
      }
      const double v = std::stod(score);
      if (v > prev || seen_undefined) problems.push_back("dominance column not ranked");
      prev = v;
    }
  }

  // Keyness charts: up to 20 bars per direction, matching the CSV ranking.
  std::size_t bars_total = 0;
  for (const std::string pos : {"noun", "verb"}) {
    std::istringstream csv_in(testing::read_file(out / ("keyness_" + pos + ".csv")));
    const auto rows = read_csv(csv_in);
    std::size_t n_target = 0, n_reference = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) (rows[r][5] == "target" ? n_target : n_reference)++;
    const std::string svg = testing::read_file(out / ("keyness_" + pos + ".svg"));
    const auto t = count_of(svg, "<rect class=\"target\"");
    const auto ref = count_of(svg, "<rect class=\"reference\"");
    if (t != std::min<std::size_t>(20, n_target) || ref != std::min<std::size_t>(20, n_reference)) {
      problems.push_back(pos + " chart bar count");
    }
    if (t == 0 || ref == 0) problems.push_back(pos + " chart missing a side");
    bars_total += t + ref;
  }

  std::string detail = "pipeline " + fmt(secs, 1) + " s (limit 60); dominance table " +
                       std::to_string(table.size() ? table.size() - 1 : 0) + " ranks; " +
                       std::to_string(bars_total) + " keyness bars";
  for (const auto& pr : problems) detail += "; " + pr;
  return {problems.empty() && secs < 60.0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pukit acceptance suite"};
  std::string work_dir = (testing::fs::temp_directory_path() / "pukit_acceptance").string();
  std::vector<int> only;
  app.add_option("--work-dir", work_dir, "Scratch directory for CLI runs");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  testing::fs::create_directories(work_dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"synthetic PU recovery", synthetic_recovery},
      {"PU vs supervised parity", supervised_parity},
      {"G2 oracle equivalence", g2_equivalence},
      {"dominance reciprocity", dominance_reciprocity},
      {"SVM correctness", svm_correctness},
      {"Platt gradient check", platt_gradient},
      {"end-to-end determinism", [&] { return end_to_end_determinism(work_dir); }},
      {"demo pipeline smoke test", [&] { return demo_smoke(work_dir); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
