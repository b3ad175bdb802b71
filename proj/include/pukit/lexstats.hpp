#pragma once

// Lexicon coverage and dominance, plus log-likelihood (G2) keyness.
//
//   Coverage_X(C)  = sum_{w in C} Frequency_X(w) / Size_X
//   Dominance_F(C) = Coverage_F(C) / Coverage_B(C)
//
// Coverage counts lowercased surface forms; keyness counts (lemma, POS) pairs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pukit/common.hpp"
#include "pukit/corpus.hpp"
#include "pukit/pulearn.hpp"

namespace pukit {

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

struct LexiconCategory {
  std::string name;
  std::vector<std::string> patterns;  // lowercase; a trailing '*' marks a prefix

  /// `word` must already be lowercased.
  bool matches(std::string_view word) const {
    for (const std::string& p : patterns) {
      if (!p.empty() && p.back() == '*') {
        const std::string_view prefix(p.data(), p.size() - 1);
        if (word.substr(0, prefix.size()) == prefix) return true;
      } else if (word == p) {
        return true;
      }
    }
    return false;
  }
};

struct Lexicon {
  std::map<std::string, LexiconCategory> categories;
};

/// Line-oriented format: `# comment`, `[CATEGORY]` headers, one pattern per
/// line below each header.
inline Lexicon parse_lexicon(std::istream& in) {
  Lexicon lex;
  LexiconCategory* current = nullptr;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) {
    throw Error("lexicon line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) fail("malformed category header");
      std::string name(trim(body.substr(1, body.size() - 2)));
      if (name.empty()) fail("empty category name");
      if (lex.categories.count(name)) fail("duplicate category " + name);
      current = &lex.categories[name];
      current->name = std::move(name);
      continue;
    }
    if (!current) fail("pattern before any [CATEGORY] header");
    const std::string pattern = to_lower(body);
    const auto star = pattern.find('*');
    if (star != std::string::npos && star != pattern.size() - 1) {
      fail("'*' is only allowed at the end of a pattern");
    }
    if (pattern == "*") fail("bare '*' pattern");
    if (pattern.find_first_of(" \t") != std::string::npos) fail("patterns are single words");
    current->patterns.push_back(pattern);
  }
  for (const auto& [name, cat] : lex.categories) {
    if (cat.patterns.empty()) throw Error("lexicon category " + name + " has no patterns");
  }
  return lex;
}

inline Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon file: " + path);
  try {
    return parse_lexicon(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

/// Categories whose patterns match the token's surface form, compared
/// case-insensitively.
inline std::set<std::string> match_token(const Lexicon& lexicon, const Token& token) {
  const std::string word = to_lower(token.surface);
  std::set<std::string> out;
  for (const auto& [name, cat] : lexicon.categories) {
    if (cat.matches(word)) out.insert(name);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counts
// ---------------------------------------------------------------------------

struct CorpusStats {
  std::uint64_t token_count = 0;
  std::map<std::string, std::uint64_t> word_frequencies;            // lowercased surface
  std::map<std::pair<std::string, Pos>, std::uint64_t> pos_frequencies;  // (lemma, pos)

  void add(const Token& t) {
    ++token_count;
    ++word_frequencies[to_lower(t.surface)];
    ++pos_frequencies[{t.lemma, t.pos}];
  }

  void add(const SentenceRecord& rec) {
    for (const Token& t : rec.tokens) add(t);
  }

  void merge(const CorpusStats& other) {
    token_count += other.token_count;
    for (const auto& [w, n] : other.word_frequencies) word_frequencies[w] += n;
    for (const auto& [k, n] : other.pos_frequencies) pos_frequencies[k] += n;
  }
};

/// Counts over the tokens of the extracted records that belong to `subgroup`.
inline CorpusStats build_stats(const ExtractionResult& result, const Corpus& corpus,
                               Subgroup subgroup) {
  std::unordered_map<std::string_view, const SentenceRecord*> by_id;
  by_id.reserve(corpus.size());
  for (const SentenceRecord& rec : corpus.records) by_id.emplace(rec.id, &rec);

  CorpusStats stats;
  for (const ExtractionRow& row : result.rows) {
    const auto it = by_id.find(row.record_id);
    if (it == by_id.end()) throw Error("extraction references unknown record " + row.record_id);
    if (it->second->subgroup == subgroup) stats.add(*it->second);
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Coverage and dominance
// ---------------------------------------------------------------------------

inline double coverage(const CorpusStats& stats, const LexiconCategory& category) {
  if (stats.token_count == 0) throw Error("coverage of an empty corpus");
  std::uint64_t hits = 0;
  for (const auto& [word, n] : stats.word_frequencies) {
    if (category.matches(word)) hits += n;
  }
  return static_cast<double>(hits) / static_cast<double>(stats.token_count);
}

struct DominanceRow {
  std::string category;
  double coverage_f = 0.0;
  double coverage_b = 0.0;
  std::optional<double> dominance;  // nullopt: undefined (zero background coverage)
};

inline DominanceRow dominance(const CorpusStats& foreground, const CorpusStats& background,
                              const LexiconCategory& category) {
  DominanceRow row;
  row.category = category.name;
  row.coverage_f = coverage(foreground, category);
  row.coverage_b = coverage(background, category);
  if (row.coverage_b > 0.0) row.dominance = row.coverage_f / row.coverage_b;
  return row;
}

inline void sort_dominance_rows(std::vector<DominanceRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const DominanceRow& a, const DominanceRow& b) {
    if (a.dominance.has_value() != b.dominance.has_value()) return a.dominance.has_value();
    if (a.dominance && *a.dominance != *b.dominance) return *a.dominance > *b.dominance;
    return a.category < b.category;
  });
}

/// One row per lexicon category: highest dominance first, undefined rows
/// last, ties by category name.
inline std::vector<DominanceRow> dominance_table(const CorpusStats& foreground,
                                                 const CorpusStats& background,
                                                 const Lexicon& lexicon) {
  std::vector<DominanceRow> rows;
  rows.reserve(lexicon.categories.size());
  for (const auto& [name, cat] : lexicon.categories) {
    rows.push_back(dominance(foreground, background, cat));
  }
  sort_dominance_rows(rows);
  return rows;
}

// ---------------------------------------------------------------------------
// Keyness
// ---------------------------------------------------------------------------

/// Log-likelihood keyness of a word seen `a` times in a target corpus of
/// `c` tokens and `b` times in a reference corpus of `d` tokens:
///   E1 = c (a + b) / (c + d),  E2 = d (a + b) / (c + d)
///   G2 = 2 (a ln(a / E1) + b ln(b / E2)),  with 0 ln 0 = 0.
inline double g2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  if (c == 0 || d == 0) throw Error("g2: corpus sizes must be positive");
  const double ab = static_cast<double>(a) + static_cast<double>(b);
  const double cd = static_cast<double>(c) + static_cast<double>(d);
  const double e1 = static_cast<double>(c) * ab / cd;
  const double e2 = static_cast<double>(d) * ab / cd;
  double sum = 0.0;
  if (a > 0) sum += static_cast<double>(a) * std::log(static_cast<double>(a) / e1);
  if (b > 0) sum += static_cast<double>(b) * std::log(static_cast<double>(b) / e2);
  return std::max(0.0, 2.0 * sum);
}

enum class KeyDirection { target, reference };

inline std::string_view to_string(KeyDirection d) {
  return d == KeyDirection::target ? "target" : "reference";
}

struct KeynessRow {
  std::string lemma;
  Pos pos = Pos::OTHER;
  std::uint64_t freq_target = 0;
  std::uint64_t freq_reference = 0;
  double g2 = 0.0;
  KeyDirection direction = KeyDirection::target;
};

/// a/c >= b/d, compared exactly.
inline bool relatively_more_frequent(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                     std::uint64_t d) {
  return static_cast<unsigned __int128>(a) * d >= static_cast<unsigned __int128>(b) * c;
}

/// Ranks every (lemma, POS) with freq_target + freq_reference >= min_freq by
/// G2 descending; ties by lemma, then POS.
inline std::vector<KeynessRow> keyness_g2(const CorpusStats& target, const CorpusStats& reference,
                                          std::optional<Pos> pos_filter = std::nullopt,
                                          std::uint64_t min_freq = 5) {
  if (target.token_count == 0) throw Error("keyness: target corpus is empty");
  if (reference.token_count == 0) throw Error("keyness: reference corpus is empty");

  std::map<std::pair<std::string, Pos>, std::pair<std::uint64_t, std::uint64_t>> joint;
  for (const auto& [key, n] : target.pos_frequencies) {
    if (!pos_filter || key.second == *pos_filter) joint[key].first += n;
  }
  for (const auto& [key, n] : reference.pos_frequencies) {
    if (!pos_filter || key.second == *pos_filter) joint[key].second += n;
  }

  const std::uint64_t c = target.token_count;
  const std::uint64_t d = reference.token_count;
  std::vector<KeynessRow> rows;
  for (const auto& [key, freqs] : joint) {
    const auto [a, b] = freqs;
    if (a + b < min_freq) continue;
    KeynessRow row;
    row.lemma = key.first;
    row.pos = key.second;
    row.freq_target = a;
    row.freq_reference = b;
    row.g2 = g2(a, b, c, d);
    row.direction =
        relatively_more_frequent(a, b, c, d) ? KeyDirection::target : KeyDirection::reference;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const KeynessRow& x, const KeynessRow& y) {
    if (x.g2 != y.g2) return x.g2 > y.g2;
    if (x.lemma != y.lemma) return x.lemma < y.lemma;
    return x.pos < y.pos;
  });
  return rows;
}

/// The first `n` rows pointing in `dir`, preserving rank order.
inline std::vector<KeynessRow> top_keywords(const std::vector<KeynessRow>& ranked,
                                            KeyDirection dir, std::size_t n) {
  std::vector<KeynessRow> out;
  for (const KeynessRow& r : ranked) {
    if (out.size() == n) break;
    if (r.direction == dir) out.push_back(r);
  }
  return out;
}

}  // namespace pukit
