#pragma once

// Sentence records, the line-delimited corpus format and sentence splitting.

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pukit/common.hpp"

namespace pukit {

enum class PuSource { labeled_positive, unlabeled };
enum class Subgroup { none, depression, control };
enum class Pos { NOUN, VERB, ADJ, ADV, PRON, OTHER };

inline constexpr std::array<Pos, 6> kAllPos = {Pos::NOUN, Pos::VERB, Pos::ADJ,
                                               Pos::ADV,  Pos::PRON, Pos::OTHER};

inline std::string_view to_string(PuSource s) {
  return s == PuSource::labeled_positive ? "labeled_positive" : "unlabeled";
}

inline std::string_view to_string(Subgroup g) {
  switch (g) {
    case Subgroup::depression: return "depression";
    case Subgroup::control: return "control";
    case Subgroup::none: break;
  }
  return "none";
}

inline std::string_view to_string(Pos p) {
  switch (p) {
    case Pos::NOUN: return "NOUN";
    case Pos::VERB: return "VERB";
    case Pos::ADJ: return "ADJ";
    case Pos::ADV: return "ADV";
    case Pos::PRON: return "PRON";
    case Pos::OTHER: break;
  }
  return "OTHER";
}

inline std::optional<PuSource> parse_pu_source(std::string_view s) {
  if (s == "labeled_positive") return PuSource::labeled_positive;
  if (s == "unlabeled") return PuSource::unlabeled;
  return std::nullopt;
}

/// Accepts the wire names; "none" is accepted alongside JSON null.
inline std::optional<Subgroup> parse_subgroup(std::string_view s) {
  if (s == "depression") return Subgroup::depression;
  if (s == "control") return Subgroup::control;
  if (s == "none") return Subgroup::none;
  return std::nullopt;
}

/// Case-insensitive; "noun" and "NOUN" both work.
inline std::optional<Pos> parse_pos(std::string_view s) {
  const std::string lower = to_lower(s);
  for (const Pos p : kAllPos) {
    if (to_lower(to_string(p)) == lower) return p;
  }
  return std::nullopt;
}

struct Token {
  std::string surface;
  std::string lemma;  // lowercased
  Pos pos = Pos::OTHER;

  friend bool operator==(const Token&, const Token&) = default;
};

struct SentenceRecord {
  std::string id;
  std::string user_id;
  PuSource pu_source = PuSource::unlabeled;
  Subgroup subgroup = Subgroup::none;
  std::string text;
  std::vector<Token> tokens;
  std::optional<std::vector<double>> embedding;

  friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

struct CorpusManifest {
  std::string source;
  std::size_t record_count = 0;
  std::string content_hash;  // FNV-1a 64 of the file bytes, hex
};

struct Corpus {
  std::vector<SentenceRecord> records;
  std::optional<std::size_t> embedding_dim;
  CorpusManifest manifest;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// ---------------------------------------------------------------------------
// Sentence splitting
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_terminator(char ch) { return ch == '.' || ch == '!' || ch == '?'; }
inline bool is_closer(char ch) { return ch == '"' || ch == '\'' || ch == ')' || ch == ']'; }
inline bool is_opener(char ch) { return ch == '"' || ch == '\'' || ch == '(' || ch == '['; }

inline bool is_protected_abbreviation(std::string_view word) {
  static const std::unordered_set<std::string> kProtected = {"mr.", "mrs.", "dr.", "st.",
                                                             "e.g.", "i.e.", "etc.", "vs."};
  while (!word.empty() && is_opener(word.front())) word.remove_prefix(1);
  return kProtected.count(to_lower(word)) != 0;
}

}  // namespace detail

/// Rule-based sentence splitter.
///
/// A boundary sits after a run of `.`, `!` or `?` (optionally followed by
/// closing quotes or brackets) when the next characters are whitespace and
/// then an ASCII uppercase letter, or when the run ends the text. A period
/// that closes one of Mr. Mrs. Dr. St. e.g. i.e. etc. vs. never ends a
/// sentence. Segments are trimmed and empty segments dropped.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const auto emit = [&](std::string_view piece) {
    const std::string_view t = trim(piece);
    if (!t.empty()) out.emplace_back(t);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!detail::is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && detail::is_terminator(text[end])) ++end;
    while (end < text.size() && detail::is_closer(text[end])) ++end;

    bool boundary = false;
    if (end == text.size()) {
      boundary = true;
    } else if (is_space(text[end])) {
      std::size_t next = end;
      while (next < text.size() && is_space(text[next])) ++next;
      boundary = next == text.size() || (text[next] >= 'A' && text[next] <= 'Z');
    }

    if (boundary && text[i] == '.' && end == i + 1) {
      std::size_t word_begin = i;
      while (word_begin > start && !is_space(text[word_begin - 1])) --word_begin;
      if (detail::is_protected_abbreviation(text.substr(word_begin, end - word_begin))) {
        boundary = false;
      }
    }

    if (boundary) {
      emit(text.substr(start, end - start));
      start = end;
    }
    i = end;
  }
  emit(text.substr(start));
  return out;
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void line_error(std::size_t line, const std::string& what) {
  throw Error("line " + std::to_string(line) + ": " + what);
}

inline const json& require_field(const json& obj, const char* name, std::size_t line) {
  const auto it = obj.find(name);
  if (it == obj.end()) line_error(line, std::string("missing field ") + name);
  return *it;
}

inline std::string require_string(const json& obj, const char* name, std::size_t line) {
  const json& v = require_field(obj, name, line);
  if (!v.is_string()) line_error(line, std::string("field ") + name + " must be a string");
  return v.get<std::string>();
}

inline SentenceRecord parse_record(const json& obj, std::size_t line) {
  if (!obj.is_object()) line_error(line, "record must be a JSON object");
  SentenceRecord rec;
  rec.id = require_string(obj, "id", line);
  rec.user_id = require_string(obj, "user_id", line);

  const std::string source = require_string(obj, "pu_source", line);
  const auto ps = parse_pu_source(source);
  if (!ps) line_error(line, "unknown pu_source \"" + source + "\"");
  rec.pu_source = *ps;

  const json& sg = require_field(obj, "subgroup", line);
  if (sg.is_null()) {
    rec.subgroup = Subgroup::none;
  } else if (sg.is_string()) {
    const auto parsed = parse_subgroup(sg.get<std::string>());
    if (!parsed) line_error(line, "unknown subgroup \"" + sg.get<std::string>() + "\"");
    rec.subgroup = *parsed;
  } else {
    line_error(line, "field subgroup must be a string or null");
  }
  if (rec.pu_source == PuSource::labeled_positive && rec.subgroup != Subgroup::none) {
    line_error(line, "labeled_positive record must not carry a subgroup");
  }

  rec.text = require_string(obj, "text", line);

  const json& toks = require_field(obj, "tokens", line);
  if (!toks.is_array()) line_error(line, "field tokens must be an array");
  rec.tokens.reserve(toks.size());
  for (const json& t : toks) {
    if (!t.is_object()) line_error(line, "token must be an object");
    Token tok;
    tok.surface = require_string(t, "surface", line);
    tok.lemma = to_lower(require_string(t, "lemma", line));
    const std::string pos = require_string(t, "pos", line);
    const auto p = parse_pos(pos);
    if (!p) line_error(line, "unknown pos \"" + pos + "\"");
    tok.pos = *p;
    if (tok.surface.empty()) line_error(line, "token surface is empty");
    rec.tokens.push_back(std::move(tok));
  }

  const json& emb = require_field(obj, "embedding", line);
  if (!emb.is_null()) {
    if (!emb.is_array()) line_error(line, "field embedding must be an array or null");
    std::vector<double> v;
    v.reserve(emb.size());
    for (const json& x : emb) {
      if (!x.is_number()) line_error(line, "embedding entries must be numbers");
      v.push_back(x.get<double>());
    }
    if (v.empty()) line_error(line, "embedding is empty");
    if (!all_finite(v)) line_error(line, "embedding has non-finite entries");
    rec.embedding = std::move(v);
  }
  return rec;
}

}  // namespace detail

/// Parses line-delimited records. Blank lines and lines starting with `#`
/// are skipped; line numbers in errors are 1-based physical lines.
inline Corpus parse_corpus(std::istream& in, std::string source_name) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::uint64_t hash = kFnvOffsetBasis;
  std::optional<std::size_t> dim_line;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    hash = fnv1a_update(hash, line);
    hash = fnv1a_update(hash, "\n");
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    detail::json obj;
    try {
      obj = detail::json::parse(body);
    } catch (const detail::json::parse_error& e) {
      detail::line_error(line_no, std::string("malformed JSON (") + e.what() + ")");
    }
    SentenceRecord rec = detail::parse_record(obj, line_no);

    if (!seen_ids.insert(rec.id).second) {
      detail::line_error(line_no, "duplicate id \"" + rec.id + "\"");
    }
    if (rec.embedding) {
      const std::size_t d = rec.embedding->size();
      if (!corpus.embedding_dim) {
        corpus.embedding_dim = d;
        dim_line = line_no;
      } else if (*corpus.embedding_dim != d) {
        detail::line_error(line_no, "embedding dimension " + std::to_string(d) +
                                        " differs from dimension " +
                                        std::to_string(*corpus.embedding_dim) +
                                        " established on line " + std::to_string(*dim_line));
      }
    }
    corpus.records.push_back(std::move(rec));
  }
  corpus.manifest.source = std::move(source_name);
  corpus.manifest.record_count = corpus.records.size();
  corpus.manifest.content_hash = hex64(hash);
  return corpus;
}

inline Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path);
  try {
    return parse_corpus(in, path);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline nlohmann::ordered_json record_to_json(const SentenceRecord& rec) {
  nlohmann::ordered_json obj;
  obj["id"] = rec.id;
  obj["user_id"] = rec.user_id;
  obj["pu_source"] = to_string(rec.pu_source);
  if (rec.subgroup == Subgroup::none) {
    obj["subgroup"] = nullptr;
  } else {
    obj["subgroup"] = to_string(rec.subgroup);
  }
  obj["text"] = rec.text;
  auto toks = nlohmann::ordered_json::array();
  for (const Token& t : rec.tokens) {
    nlohmann::ordered_json jt;
    jt["surface"] = t.surface;
    jt["lemma"] = t.lemma;
    jt["pos"] = to_string(t.pos);
    toks.push_back(std::move(jt));
  }
  obj["tokens"] = std::move(toks);
  if (rec.embedding) {
    obj["embedding"] = *rec.embedding;
  } else {
    obj["embedding"] = nullptr;
  }
  return obj;
}

inline void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const SentenceRecord& rec : corpus.records) out << record_to_json(rec).dump() << '\n';
}

inline void write_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file: " + path);
  write_corpus(corpus, out);
  if (!out) throw Error("write failed: " + path);
}

/// A corpus holding the records that satisfy `keep`, in original order.
template <typename Pred>
Corpus filter_corpus(const Corpus& corpus, Pred keep) {
  Corpus out;
  out.embedding_dim = corpus.embedding_dim;
  for (const SentenceRecord& rec : corpus.records) {
    if (keep(rec)) out.records.push_back(rec);
  }
  out.manifest = corpus.manifest;
  out.manifest.record_count = out.records.size();
  return out;
}

// ---------------------------------------------------------------------------
// Subject selection
// ---------------------------------------------------------------------------

/// The first `per_class` users of each subgroup, ordered by ascending
/// user_id. `per_class == 0` selects every user.
inline std::set<std::string> training_subjects(const Corpus& corpus, std::size_t per_class) {
  std::map<Subgroup, std::set<std::string>> users;
  for (const SentenceRecord& rec : corpus.records) users[rec.subgroup].insert(rec.user_id);
  std::set<std::string> chosen;
  for (const auto& [group, ids] : users) {
    std::size_t taken = 0;
    for (const std::string& id : ids) {
      if (per_class != 0 && taken == per_class) break;
      chosen.insert(id);
      ++taken;
    }
  }
  return chosen;
}

struct SubjectSplit {
  Corpus training;
  Corpus validation;
};

inline SubjectSplit split_by_subjects(const Corpus& corpus, std::size_t per_class) {
  const std::set<std::string> chosen = training_subjects(corpus, per_class);
  SubjectSplit split;
  split.training =
      filter_corpus(corpus, [&](const SentenceRecord& r) { return chosen.count(r.user_id) != 0; });
  split.validation =
      filter_corpus(corpus, [&](const SentenceRecord& r) { return chosen.count(r.user_id) == 0; });
  return split;
}

// ---------------------------------------------------------------------------
// Cleaning
// ---------------------------------------------------------------------------

/// Number of words: the token count when tokens are present, otherwise the
/// count of whitespace-separated pieces of the text.
inline std::size_t word_count(const SentenceRecord& rec) {
  if (!rec.tokens.empty()) return rec.tokens.size();
  std::size_t n = 0;
  bool in_word = false;
  for (const char ch : rec.text) {
    const bool sp = is_space(ch);
    if (!sp && !in_word) ++n;
    in_word = !sp;
  }
  return n;
}

/// True when the text holds nothing but punctuation and whitespace.
inline bool is_empty_after_cleaning(std::string_view text) {
  for (const char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (u >= 0x80 || std::isalnum(u)) return false;
  }
  return true;
}

/// Sentences usable for PU training: some content and at least two words.
inline bool eligible_for_training(const SentenceRecord& rec) {
  return !is_empty_after_cleaning(rec.text) && word_count(rec) >= 2;
}

}  // namespace pukit
