#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "kgcg/error.hpp"

namespace kgcg {

enum class TermKind { iri, literal, blank };

/// An RDF term in decoded form. The canonical form is the N-Triples token
/// (`<iri>`, `_:label`, `"lexical"^^<datatype>`, `"lexical"@lang`), with
/// escapes decoded to UTF-8 and only `"`, `\`, LF and CR re-escaped.
struct Term {
  TermKind kind = TermKind::iri;
  std::string value;     // IRI, lexical form, or blank-node label
  std::string datatype;  // literals only; empty for plain / language-tagged
  std::string language;  // literals only

  static Term iri(std::string v) { return Term{TermKind::iri, std::move(v), {}, {}}; }
  static Term blank(std::string label) { return Term{TermKind::blank, std::move(label), {}, {}}; }
  static Term literal(std::string lexical, std::string datatype = {}, std::string lang = {}) {
    return Term{TermKind::literal, std::move(lexical), std::move(datatype), std::move(lang)};
  }

  std::string canonical() const;

  friend bool operator==(const Term& a, const Term& b) { return a.canonical() == b.canonical(); }
};

class TermSyntaxError : public Error {
 public:
  explicit TermSyntaxError(const std::string& what) : Error(Stage::ingest, what) {}
};

namespace detail {

inline bool is_forbidden_iri_char(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
         c == '^' || c == '`' || c == '\\';
}

inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes \uXXXX or \UXXXXXXXX starting at text[i] == '\\'. Advances i past it.
inline std::uint32_t decode_uchar(std::string_view text, std::size_t& i) {
  const std::size_t width = text[i + 1] == 'u' ? 4 : 8;
  if (i + 2 + width > text.size()) throw TermSyntaxError("truncated unicode escape");
  std::uint32_t cp = 0;
  for (std::size_t k = 0; k < width; ++k) {
    const int h = hex_value(text[i + 2 + k]);
    if (h < 0) throw TermSyntaxError("bad hex digit in unicode escape");
    cp = cp * 16 + static_cast<std::uint32_t>(h);
  }
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
    throw TermSyntaxError("unicode escape outside scalar range");
  i += 2 + width;
  return cp;
}

inline std::string decode_iri(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size();) {
    const char c = body[i];
    if (c == '\\') {
      if (i + 1 >= body.size() || (body[i + 1] != 'u' && body[i + 1] != 'U'))
        throw TermSyntaxError("only unicode escapes are allowed in IRIs");
      const std::uint32_t cp = decode_uchar(body, i);
      if (cp < 0x80 && is_forbidden_iri_char(static_cast<unsigned char>(cp)))
        throw TermSyntaxError("escaped character not allowed in IRI");
      append_utf8(out, cp);
      continue;
    }
    if (is_forbidden_iri_char(static_cast<unsigned char>(c)))
      throw TermSyntaxError("character not allowed in IRI");
    out.push_back(c);
    ++i;
  }
  return out;
}

inline std::string decode_string(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size();) {
    const char c = body[i];
    if (c == '"' || c == '\n' || c == '\r') throw TermSyntaxError("unescaped character in literal");
    if (c != '\\') {
      out.push_back(c);
      ++i;
      continue;
    }
    if (i + 1 >= body.size()) throw TermSyntaxError("dangling backslash in literal");
    const char e = body[i + 1];
    switch (e) {
      case 't': out.push_back('\t'); break;
      case 'b': out.push_back('\b'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 'f': out.push_back('\f'); break;
      case '"': out.push_back('"'); break;
      case '\'': out.push_back('\''); break;
      case '\\': out.push_back('\\'); break;
      case 'u':
      case 'U':
        append_utf8(out, decode_uchar(body, i));
        continue;
      default:
        throw TermSyntaxError(std::string("unknown escape \\") + e);
    }
    i += 2;
  }
  return out;
}

inline bool is_blank_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c == '.' || c >= 0x80;
}

inline bool valid_blank_label(std::string_view label) {
  if (label.empty() || label.front() == '-' || label.front() == '.' || label.back() == '.') return false;
  for (unsigned char c : label)
    if (!is_blank_char(c)) return false;
  return true;
}

inline bool valid_language(std::string_view lang) {
  if (lang.empty()) return false;
  bool first = true;
  std::size_t run = 0;
  for (char c : lang) {
    const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    const bool digit = c >= '0' && c <= '9';
    if (c == '-') {
      if (run == 0) return false;
      first = false;
      run = 0;
    } else if (alpha || (digit && !first)) {
      ++run;
    } else {
      return false;
    }
  }
  return run > 0;
}

}  // namespace detail

inline std::string Term::canonical() const {
  switch (kind) {
    case TermKind::iri:
      return "<" + value + ">";
    case TermKind::blank:
      return "_:" + value;
    case TermKind::literal: {
      std::string out;
      out.reserve(value.size() + datatype.size() + language.size() + 6);
      out.push_back('"');
      for (char c : value) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\r': out += "\\r"; break;
          default: out.push_back(c);
        }
      }
      out.push_back('"');
      if (!language.empty()) {
        out.push_back('@');
        out += language;
      } else if (!datatype.empty()) {
        out += "^^<";
        out += datatype;
        out.push_back('>');
      }
      return out;
    }
  }
  return {};
}

/// Parses one complete N-Triples term token.
inline Term parse_term(std::string_view token) {
  if (token.empty()) throw TermSyntaxError("empty term");
  if (token.front() == '<') {
    if (token.size() < 2 || token.back() != '>') throw TermSyntaxError("unterminated IRI");
    return Term::iri(detail::decode_iri(token.substr(1, token.size() - 2)));
  }
  if (token.starts_with("_:")) {
    const auto label = token.substr(2);
    if (!detail::valid_blank_label(label)) throw TermSyntaxError("bad blank node label");
    return Term::blank(std::string(label));
  }
  if (token.front() == '"') {
    // Closing quote: first unescaped '"' after the opening one.
    std::size_t i = 1;
    while (i < token.size() && token[i] != '"') i += token[i] == '\\' ? 2 : 1;
    if (i >= token.size()) throw TermSyntaxError("unterminated literal");
    Term t = Term::literal(detail::decode_string(token.substr(1, i - 1)));
    const auto suffix = token.substr(i + 1);
    if (suffix.empty()) return t;
    if (suffix.front() == '@') {
      if (!detail::valid_language(suffix.substr(1))) throw TermSyntaxError("bad language tag");
      t.language = std::string(suffix.substr(1));
      return t;
    }
    if (suffix.starts_with("^^<") && suffix.back() == '>') {
      t.datatype = detail::decode_iri(suffix.substr(3, suffix.size() - 4));
      return t;
    }
    throw TermSyntaxError("bad literal suffix");
  }
  throw TermSyntaxError("not an N-Triples term");
}

inline std::string canonicalize(std::string_view token) { return parse_term(token).canonical(); }

inline TermKind kind_of_canonical(std::string_view canonical) {
  if (!canonical.empty() && canonical.front() == '"') return TermKind::literal;
  if (canonical.starts_with("_:")) return TermKind::blank;
  return TermKind::iri;
}

// IRI text of a canonical `<...>` token; other kinds are returned unchanged.
inline std::string_view strip_iri(std::string_view canonical) {
  if (canonical.size() >= 2 && canonical.front() == '<' && canonical.back() == '>')
    return canonical.substr(1, canonical.size() - 2);
  return canonical;
}

// Accepts either `http://x` or `<http://x>` and returns the canonical token.
inline std::string iri_token(std::string_view iri) {
  if (!iri.empty() && iri.front() == '<') return canonicalize(iri);
  return Term::iri(detail::decode_iri(iri)).canonical();
}

}  // namespace kgcg
