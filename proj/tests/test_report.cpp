#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "pukit/report.hpp"
#include "test_support.hpp"

namespace pukit {
namespace {

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, RoundTripArbitraryFields) {
  Rng rng(2);
  const std::string alphabet = "ab,\"\n\r x";
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::vector<std::string>> rows;
    const auto n_rows = 1 + rng.uniform_index(5);
    for (std::uint64_t r = 0; r < n_rows; ++r) {
      std::vector<std::string> row;
      const auto n_fields = 1 + rng.uniform_index(4);
      for (std::uint64_t f = 0; f < n_fields; ++f) {
        std::string s;
        const auto len = rng.uniform_index(6);
        for (std::uint64_t k = 0; k < len; ++k) s.push_back(alphabet[rng.uniform_index(alphabet.size())]);
        row.push_back(s);
      }
      if (row.size() == 1 && row[0].empty()) row[0] = "x";  // a lone empty field is a blank line
      rows.push_back(row);
    }
    std::stringstream buf;
    for (const auto& row : rows) write_csv_row(buf, row);
    ASSERT_EQ(read_csv(buf), rows);
  }
}

TEST(ExtractionCsv, RoundTrip) {
  ExtractionResult res;
  res.rows = {{"m1", Subgroup::depression, "I hugged my mom, finally.", 0.9871234567890123},
              {"m2", Subgroup::control, "She said \"yes\"", 0.61}};
  std::stringstream buf;
  write_extraction_csv(res, buf);
  const auto back = read_extraction_csv(buf);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0].text, res.rows[0].text);
  EXPECT_EQ(back.rows[0].probability, res.rows[0].probability);
  EXPECT_EQ(back.rows[1].subgroup, Subgroup::control);
  EXPECT_EQ(back.rows[1].text, res.rows[1].text);
  EXPECT_EQ(back.threshold, 0.61);

  std::stringstream bad("id,group\n");
  EXPECT_THROW(read_extraction_csv(bad), Error);
  std::stringstream bad_prob("record_id,subgroup,probability,text\nm1,control,high,t\n");
  EXPECT_THROW(read_extraction_csv(bad_prob), Error);
}

TEST(DominanceCsv, UndefinedIsEmptyField) {
  std::stringstream buf;
  write_dominance_csv({{"FRIENDS", 0.04, 0.02, 2.0}, {"DEATH", 0.01, 0.0, std::nullopt}}, buf);
  EXPECT_EQ(buf.str(),
            "category,coverage_f,coverage_b,dominance\n"
            "FRIENDS,0.04,0.02,2\n"
            "DEATH,0.01,0,\n");
}

TEST(TwoSidedDominance, LayoutAndOrdering) {
  std::istringstream lex_in("[FRIENDS]\nfriend*\n[MUSIC]\nsong*\n[SLEEP]\nnap\nsleep*\n[TV]\nshow*\n");
  const Lexicon lex = parse_lexicon(lex_in);
  CorpusStats dep, ctl;
  const auto add = [](CorpusStats& s, const std::string& w, int n) {
    for (int i = 0; i < n; ++i) s.add(Token{w, w, Pos::NOUN});
  };
  add(dep, "friend", 6);
  add(dep, "friends", 2);
  add(dep, "song", 6);
  add(dep, "nap", 5);
  add(dep, "show", 2);
  add(dep, "the", 79);
  add(ctl, "friend", 4);
  add(ctl, "song", 4);
  add(ctl, "sleep", 4);
  add(ctl, "show", 8);
  add(ctl, "the", 80);

  const DominanceSide left{"depression", dominance_table(dep, ctl, lex), &dep};
  const DominanceSide right{"control", dominance_table(ctl, dep, lex), &ctl};
  std::vector<std::string> order;
  for (const auto& r : left.rows) order.push_back(r.category);
  EXPECT_EQ(order, (std::vector<std::string>{"FRIENDS", "MUSIC", "SLEEP", "TV"}));

  std::stringstream buf;
  write_two_sided_dominance_csv(left, right, lex, buf);
  const auto rows = read_csv(buf);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"rank", "depression_category", "depression_score",
                                               "depression_examples", "control_category", "control_score",
                                               "control_examples"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "FRIENDS", "2.00", "friend, friends", "TV", "4.00", "show"}));
  EXPECT_EQ(rows[2][1], "MUSIC");
  EXPECT_EQ(rows[2][2], "1.50");
  EXPECT_EQ(rows[3][1], "SLEEP");
  EXPECT_EQ(rows[3][2], "1.25");
}

std::vector<KeynessRow> synthetic_ranking(std::size_t per_side) {
  std::vector<KeynessRow> rows;
  for (std::size_t i = 0; i < per_side; ++i) {
    rows.push_back({"t" + std::to_string(i), Pos::NOUN, 10, 1, 100.0 - static_cast<double>(i), KeyDirection::target});
    rows.push_back({"r" + std::to_string(i), Pos::NOUN, 1, 10, 99.5 - static_cast<double>(i), KeyDirection::reference});
  }
  return rows;
}

TEST(KeynessSvg, TopNBarsPerSide) {
  std::stringstream buf;
  KeynessChartOptions opts;
  opts.title = "Nouns <depression & control>";
  write_keyness_svg(synthetic_ranking(30), opts, buf);
  const std::string svg = buf.str();
  EXPECT_EQ(count_of(svg, "<rect class=\"target\""), 20u);
  EXPECT_EQ(count_of(svg, "<rect class=\"reference\""), 20u);
  EXPECT_NE(svg.find("&lt;depression &amp; control&gt;"), std::string::npos);
  EXPECT_NE(svg.find("G2 (log-likelihood ratio)"), std::string::npos);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
  // Strongest keyword first.
  EXPECT_LT(svg.find(">t0<"), svg.find(">t1<"));
}

TEST(KeynessSvg, FewerKeywordsThanRequested) {
  std::stringstream buf;
  write_keyness_svg(synthetic_ranking(3), {}, buf);
  EXPECT_EQ(count_of(buf.str(), "<rect class=\"target\""), 3u);
  std::stringstream empty;
  write_keyness_svg({}, {}, empty);
  EXPECT_EQ(count_of(empty.str(), "<rect class="), 0u);
}

TEST(KeynessCsv, Header) {
  std::stringstream buf;
  write_keyness_csv({{"friend", Pos::NOUN, 30, 5, 12.5, KeyDirection::target}}, buf);
  const auto rows = read_csv(buf);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"lemma", "pos", "freq_target", "freq_reference", "g2", "direction"}));
  EXPECT_EQ(rows[1][0], "friend");
  EXPECT_EQ(rows[1][1], "NOUN");
  EXPECT_EQ(rows[1][5], "target");
}

}  // namespace
}  // namespace pukit
