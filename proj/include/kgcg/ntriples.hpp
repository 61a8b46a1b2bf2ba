#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kgcg/dump.hpp"
#include "kgcg/intern.hpp"
#include "kgcg/term.hpp"

namespace kgcg {

enum class Strictness { strict, skip_bad_lines };

struct LineError {
  std::size_t line = 0;
  std::string message;
};

using Record = std::variant<Triple, LineError>;

/// Parses single N-Triples lines into canonical term tokens. Tokens that
/// contain no escapes are already canonical and are returned as views into
/// the input line; escaped tokens are re-encoded into internal scratch
/// buffers. Views stay valid until the next parse() call or until the input
/// line changes.
class LineParser {
 public:
  enum class Outcome { triple, skip, error };

  Outcome parse(std::string_view line) {
    error_.clear();
    std::size_t pos = skip_ws(line, 0);
    if (pos == line.size() || line[pos] == '#') return Outcome::skip;

    TermKind kind{};
    if (!scan(line, pos, 0, kind)) return Outcome::error;
    if (kind == TermKind::literal) return fail("subject must be an IRI or blank node");
    if (!require_ws(line, pos)) return Outcome::error;
    if (!scan(line, pos, 1, kind)) return Outcome::error;
    if (kind != TermKind::iri) return fail("predicate must be an IRI");
    if (!require_ws(line, pos)) return Outcome::error;
    if (!scan(line, pos, 2, kind)) return Outcome::error;
    pos = skip_ws(line, pos);
    if (pos >= line.size() || line[pos] != '.') return fail("expected '.' after object");
    pos = skip_ws(line, pos + 1);
    if (pos < line.size() && line[pos] != '#') return fail("trailing content after '.'");
    return Outcome::triple;
  }

  std::string_view subject() const { return tokens_[0]; }
  std::string_view predicate() const { return tokens_[1]; }
  std::string_view object() const { return tokens_[2]; }
  const std::string& error() const { return error_; }

 private:
  static std::size_t skip_ws(std::string_view line, std::size_t pos) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    return pos;
  }

  bool require_ws(std::string_view line, std::size_t& pos) {
    const std::size_t next = skip_ws(line, pos);
    if (next == pos) {
      fail("expected whitespace between terms");
      return false;
    }
    pos = next;
    return true;
  }

  Outcome fail(std::string message) {
    error_ = std::move(message);
    return Outcome::error;
  }

  // Scans one term at line[pos], leaving pos just past it.
  bool scan(std::string_view line, std::size_t& pos, int slot, TermKind& kind) {
    const std::size_t start = pos;
    bool escaped = false;
    if (pos >= line.size()) {
      fail("missing term");
      return false;
    }
    const char c = line[pos];
    if (c == '<') {
      kind = TermKind::iri;
      if (!scan_iri(line, pos, escaped)) return false;
    } else if (c == '_' && pos + 1 < line.size() && line[pos + 1] == ':') {
      kind = TermKind::blank;
      pos += 2;
      while (pos < line.size() && detail::is_blank_char(static_cast<unsigned char>(line[pos]))) ++pos;
      // A trailing '.' belongs to the statement terminator.
      while (pos > start + 2 && line[pos - 1] == '.') --pos;
      if (!detail::valid_blank_label(line.substr(start + 2, pos - start - 2))) {
        fail("bad blank node label");
        return false;
      }
    } else if (c == '"') {
      kind = TermKind::literal;
      ++pos;
      while (pos < line.size() && line[pos] != '"') {
        const char ch = line[pos];
        if (ch == '\r') {
          fail("raw carriage return in literal");
          return false;
        }
        if (ch == '\\') {
          escaped = true;
          pos += 2;
        } else {
          ++pos;
        }
      }
      if (pos >= line.size()) {
        fail("unterminated literal");
        return false;
      }
      ++pos;
      if (pos < line.size() && line[pos] == '@') {
        ++pos;
        while (pos < line.size() && (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '-'))
          ++pos;
      } else if (pos + 1 < line.size() && line[pos] == '^' && line[pos + 1] == '^') {
        pos += 2;
        if (pos >= line.size() || line[pos] != '<') {
          fail("datatype must be an IRI");
          return false;
        }
        if (!scan_iri(line, pos, escaped)) return false;
      }
    } else {
      fail("unexpected character '" + std::string(1, c) + "' at column " + std::to_string(pos + 1));
      return false;
    }

    const std::string_view raw = line.substr(start, pos - start);
    if (!escaped && kind != TermKind::literal) {
      tokens_[slot] = raw;
      return true;
    }
    // Literals are validated fully (language tag syntax, quotes); escaped
    // terms are re-encoded.
    try {
      if (!escaped) {
        (void)parse_term(raw);
        tokens_[slot] = raw;
      } else {
        scratch_[slot] = parse_term(raw).canonical();
        tokens_[slot] = scratch_[slot];
      }
    } catch (const TermSyntaxError& e) {
      fail(e.what());
      return false;
    }
    return true;
  }

  bool scan_iri(std::string_view line, std::size_t& pos, bool& escaped) {
    ++pos;
    while (pos < line.size() && line[pos] != '>') {
      const auto ch = static_cast<unsigned char>(line[pos]);
      if (ch == '\\') {
        escaped = true;
        pos += 2;
        continue;
      }
      if (detail::is_forbidden_iri_char(ch)) {
        fail("character not allowed in IRI at column " + std::to_string(pos + 1));
        return false;
      }
      ++pos;
    }
    if (pos >= line.size()) {
      fail("unterminated IRI");
      return false;
    }
    ++pos;
    return true;
  }

  std::string_view tokens_[3];
  std::string scratch_[3];
  std::string error_;
};

struct ParseCounts {
  std::size_t lines = 0;
  std::size_t triples = 0;
  std::size_t errors = 0;
  std::size_t skipped = 0;  // blank and comment lines
};

/// Streams Records out of a LineSource, interning terms into `table`.
/// Strict mode throws ParseError on the first malformed line.
class NTriplesReader {
 public:
  NTriplesReader(LineSource& source, TermTable& table, Strictness strictness = Strictness::skip_bad_lines)
      : source_(source), table_(table), strictness_(strictness) {}

  std::optional<Record> next() {
    while (source_.getline(line_)) {
      ++counts_.lines;
      switch (parser_.parse(line_)) {
        case LineParser::Outcome::skip:
          ++counts_.skipped;
          continue;
        case LineParser::Outcome::error:
          ++counts_.errors;
          if (strictness_ == Strictness::strict) throw ParseError(counts_.lines, parser_.error());
          return Record{LineError{counts_.lines, parser_.error()}};
        case LineParser::Outcome::triple:
          ++counts_.triples;
          return Record{Triple{table_.intern(parser_.subject()), table_.intern(parser_.predicate()),
                               table_.intern(parser_.object())}};
      }
    }
    return std::nullopt;
  }

  // Calls on_triple for each triple and on_error for each line error.
  template <typename OnTriple, typename OnError>
  void for_each(OnTriple&& on_triple, OnError&& on_error) {
    while (auto rec = next()) {
      if (auto* t = std::get_if<Triple>(&*rec))
        on_triple(*t);
      else
        on_error(std::get<LineError>(*rec));
    }
  }

  const ParseCounts& counts() const { return counts_; }

 private:
  LineSource& source_;
  TermTable& table_;
  Strictness strictness_;
  LineParser parser_;
  std::string line_;
  ParseCounts counts_;
};

inline std::string to_ntriples(const Triple& t, const TermTable& table) {
  std::string out;
  out += table.text(t.subject);
  out.push_back(' ');
  out += table.text(t.predicate);
  out.push_back(' ');
  out += table.text(t.object);
  out += " .";
  return out;
}

/// Stable-sorts triples so that each subject's triples are contiguous.
inline void group_by_subject(std::vector<Triple>& triples) {
  std::stable_sort(triples.begin(), triples.end(),
                   [](const Triple& a, const Triple& b) { return a.subject < b.subject; });
}

}  // namespace kgcg
