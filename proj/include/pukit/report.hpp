#pragma once

// CSV and SVG renderings of extraction, dominance and keyness results.

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pukit/common.hpp"
#include "pukit/corpus.hpp"
#include "pukit/lexstats.hpp"
#include "pukit/pulearn.hpp"

namespace pukit {

// ---------------------------------------------------------------------------
// CSV (RFC 4180)
// ---------------------------------------------------------------------------

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

/// Parses a whole CSV document; quoted fields may contain commas, quotes and
/// newlines.
inline std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  char ch = 0;
  const auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      end_row();
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get(ch);
      end_row();
    } else {
      field.push_back(ch);
      field_started = true;
    }
  }
  if (quoted) throw Error("csv: unterminated quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

// ---------------------------------------------------------------------------
// Extraction file
// ---------------------------------------------------------------------------

inline void write_extraction_csv(const ExtractionResult& result, std::ostream& out) {
  write_csv_row(out, {"record_id", "subgroup", "probability", "text"});
  for (const ExtractionRow& r : result.rows) {
    write_csv_row(out, {r.record_id, std::string(to_string(r.subgroup)),
                        format_double(r.probability), r.text});
  }
}

inline ExtractionResult read_extraction_csv(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty() || rows[0] != std::vector<std::string>{"record_id", "subgroup", "probability",
                                                          "text"}) {
    throw Error("extraction file: unexpected header");
  }
  ExtractionResult result;
  double lowest = 1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    const std::string where = "extraction file row " + std::to_string(i + 1);
    if (f.size() != 4) throw Error(where + ": expected 4 fields");
    ExtractionRow r;
    r.record_id = f[0];
    const auto sg = parse_subgroup(f[1]);
    if (!sg) throw Error(where + ": unknown subgroup \"" + f[1] + "\"");
    r.subgroup = *sg;
    try {
      std::size_t used = 0;
      r.probability = std::stod(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw Error(where + ": bad probability \"" + f[2] + "\"");
    }
    r.text = f[3];
    lowest = std::min(lowest, r.probability);
    result.rows.push_back(std::move(r));
  }
  result.threshold = result.rows.empty() ? 0.5 : lowest;
  return result;
}

// ---------------------------------------------------------------------------
// Dominance
// ---------------------------------------------------------------------------

inline void write_dominance_csv(const std::vector<DominanceRow>& rows, std::ostream& out) {
  write_csv_row(out, {"category", "coverage_f", "coverage_b", "dominance"});
  for (const DominanceRow& r : rows) {
    write_csv_row(out, {r.category, format_double(r.coverage_f), format_double(r.coverage_b),
                        r.dominance ? format_double(*r.dominance) : std::string()});
  }
}

/// Most frequent words of `stats` that fall in `category` (frequency
/// descending, then alphabetical).
inline std::vector<std::string> example_words(const CorpusStats& stats,
                                              const LexiconCategory& category, std::size_t limit) {
  std::vector<std::pair<std::string, std::uint64_t>> hits;
  for (const auto& [w, n] : stats.word_frequencies) {
    if (category.matches(w)) hits.emplace_back(w, n);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < hits.size() && i < limit; ++i) out.push_back(hits[i].first);
  return out;
}

struct DominanceSide {
  std::string label;  // e.g. "depression"
  std::vector<DominanceRow> rows;
  const CorpusStats* foreground = nullptr;
};

/// Side-by-side table: one column group per foreground corpus, each ranked by
/// its own dominance scores.
inline void write_two_sided_dominance_csv(const DominanceSide& left, const DominanceSide& right,
                                          const Lexicon& lexicon, std::ostream& out,
                                          std::size_t example_limit = 7) {
  write_csv_row(out, {"rank", left.label + "_category", left.label + "_score",
                      left.label + "_examples", right.label + "_category", right.label + "_score",
                      right.label + "_examples"});
  const auto cells = [&](const DominanceSide& side, std::size_t i) -> std::vector<std::string> {
    if (i >= side.rows.size()) return {"", "", ""};
    const DominanceRow& r = side.rows[i];
    std::string examples;
    if (side.foreground) {
      const auto words = example_words(*side.foreground, lexicon.categories.at(r.category),
                                       example_limit);
      for (std::size_t k = 0; k < words.size(); ++k) {
        if (k) examples += ", ";
        examples += words[k];
      }
    }
    return {r.category, r.dominance ? format_fixed(*r.dominance, 2) : std::string(), examples};
  };
  const std::size_t n = std::max(left.rows.size(), right.rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row = {std::to_string(i + 1)};
    for (auto& c : cells(left, i)) row.push_back(std::move(c));
    for (auto& c : cells(right, i)) row.push_back(std::move(c));
    write_csv_row(out, row);
  }
}

// ---------------------------------------------------------------------------
// Keyness
// ---------------------------------------------------------------------------

inline void write_keyness_csv(const std::vector<KeynessRow>& rows, std::ostream& out) {
  write_csv_row(out, {"lemma", "pos", "freq_target", "freq_reference", "g2", "direction"});
  for (const KeynessRow& r : rows) {
    write_csv_row(out, {r.lemma, std::string(to_string(r.pos)), std::to_string(r.freq_target),
                        std::to_string(r.freq_reference), format_double(r.g2),
                        std::string(to_string(r.direction))});
  }
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

/// 1, 2 or 5 times a power of ten, so that about five ticks span `max_value`.
inline double tick_step(double max_value) {
  if (!(max_value > 0.0)) return 1.0;
  const double raw = max_value / 5.0;
  const double base = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0}) {
    if (raw <= m * base) return m * base;
  }
  return 10.0 * base;
}

inline std::string num(double v) { return format_fixed(v, 1); }

}  // namespace detail

struct KeynessChartOptions {
  std::string title;
  std::string target_label = "target";
  std::string reference_label = "reference";
  std::size_t top_n = 20;
};

/// Horizontal bar chart: the top target keywords with positive bars above the
/// top reference keywords drawn as negative bars, one row per lemma.
inline void write_keyness_svg(const std::vector<KeynessRow>& ranked,
                              const KeynessChartOptions& opts, std::ostream& out) {
  const auto target = top_keywords(ranked, KeyDirection::target, opts.top_n);
  const auto reference = top_keywords(ranked, KeyDirection::reference, opts.top_n);

  struct Bar {
    std::string label;
    double value;
    bool is_target;
  };
  std::vector<Bar> bars;
  for (const auto& r : target) bars.push_back({r.lemma, r.g2, true});
  for (auto it = reference.rbegin(); it != reference.rend(); ++it) {
    bars.push_back({it->lemma, -it->g2, false});
  }

  double max_abs = 0.0;
  for (const Bar& b : bars) max_abs = std::max(max_abs, std::abs(b.value));
  const double step = detail::tick_step(max_abs);
  const double extent = std::max(step, std::ceil(max_abs / step) * step);

  constexpr double kWidth = 760.0;
  constexpr double kLeft = 40.0;
  constexpr double kRight = 40.0;
  constexpr double kTop = 60.0;
  constexpr double kRow = 18.0;
  constexpr double kBar = 13.0;
  const double plot_h = std::max<double>(1.0, static_cast<double>(bars.size())) * kRow;
  const double height = kTop + plot_h + 70.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double zero_x = kLeft + plot_w / 2.0;
  const auto to_x = [&](double v) { return zero_x + v / extent * (plot_w / 2.0); };

  constexpr const char* kTargetColor = "#2c7bb6";
  constexpr const char* kReferenceColor = "#d7a33f";

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num(kWidth)
      << "\" height=\"" << detail::num(height) << "\" viewBox=\"0 0 " << detail::num(kWidth) << ' '
      << detail::num(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << detail::num(kWidth) << "\" height=\""
      << detail::num(height) << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << detail::num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << detail::xml_escape(opts.title) << "</text>\n";

  // grid and ticks
  const double axis_y = kTop + plot_h + 6.0;
  out << "<g class=\"axis\" stroke=\"#cccccc\">\n";
  for (double v = -extent; v <= extent + step / 2; v += step) {
    const double x = to_x(v);
    out << "<line x1=\"" << detail::num(x) << "\" y1=\"" << detail::num(kTop - 4) << "\" x2=\""
        << detail::num(x) << "\" y2=\"" << detail::num(axis_y) << "\"/>\n";
  }
  out << "</g>\n<g class=\"ticks\" text-anchor=\"middle\">\n";
  for (double v = -extent; v <= extent + step / 2; v += step) {
    const double shown = std::abs(v) < step / 2 ? 0.0 : v;
    out << "<text x=\"" << detail::num(to_x(v)) << "\" y=\"" << detail::num(axis_y + 14) << "\">"
        << format_fixed(shown, step < 1.0 ? 1 : 0) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << detail::num(zero_x) << "\" y=\"" << detail::num(axis_y + 32)
      << "\" text-anchor=\"middle\">G2 (log-likelihood ratio)</text>\n";

  out << "<g class=\"bars\">\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const Bar& b = bars[i];
    const double y = kTop + static_cast<double>(i) * kRow;
    const double x0 = std::min(to_x(0.0), to_x(b.value));
    const double w = std::abs(to_x(b.value) - to_x(0.0));
    out << "<rect class=\"" << (b.is_target ? "target" : "reference") << "\" x=\""
        << detail::num(x0) << "\" y=\"" << detail::num(y) << "\" width=\"" << detail::num(w)
        << "\" height=\"" << detail::num(kBar) << "\" fill=\""
        << (b.is_target ? kTargetColor : kReferenceColor) << "\"/>\n";
    // label on the opposite side of the zero line
    const bool label_left = b.is_target;
    out << "<text x=\"" << detail::num(zero_x + (label_left ? -4.0 : 4.0)) << "\" y=\""
        << detail::num(y + kBar - 3) << "\" text-anchor=\"" << (label_left ? "end" : "start")
        << "\">" << detail::xml_escape(b.label) << "</text>\n";
  }
  out << "</g>\n";
  out << "<line x1=\"" << detail::num(zero_x) << "\" y1=\"" << detail::num(kTop - 4) << "\" x2=\""
      << detail::num(zero_x) << "\" y2=\"" << detail::num(axis_y)
      << "\" stroke=\"#333333\"/>\n";

  // legend
  const double ly = height - 18.0;
  out << "<g class=\"legend\">\n";
  out << "<rect x=\"" << detail::num(kLeft) << "\" y=\"" << detail::num(ly - 10)
      << "\" width=\"12\" height=\"12\" fill=\"" << kTargetColor << "\"/>\n";
  out << "<text x=\"" << detail::num(kLeft + 18) << "\" y=\"" << detail::num(ly) << "\">"
      << detail::xml_escape(opts.target_label) << "</text>\n";
  out << "<rect x=\"" << detail::num(kLeft + 200) << "\" y=\"" << detail::num(ly - 10)
      << "\" width=\"12\" height=\"12\" fill=\"" << kReferenceColor << "\"/>\n";
  out << "<text x=\"" << detail::num(kLeft + 218) << "\" y=\"" << detail::num(ly) << "\">"
      << detail::xml_escape(opts.reference_label) << "</text>\n";
  out << "</g>\n</svg>\n";
}

}  // namespace pukit
