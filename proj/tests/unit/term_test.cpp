#include <gtest/gtest.h>

#include <random>

#include "kgcg/intern.hpp"
#include "kgcg/term.hpp"

namespace kgcg {
namespace {

TEST(Term, ParsesEachKind) {
  const Term iri = parse_term("<http://example.org/a>");
  EXPECT_EQ(iri.kind, TermKind::iri);
  EXPECT_EQ(iri.value, "http://example.org/a");

  const Term blank = parse_term("_:b0");
  EXPECT_EQ(blank.kind, TermKind::blank);
  EXPECT_EQ(blank.value, "b0");

  const Term typed = parse_term("\"1850197130\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  EXPECT_EQ(typed.kind, TermKind::literal);
  EXPECT_EQ(typed.value, "1850197130");
  EXPECT_EQ(typed.datatype, "http://www.w3.org/2001/XMLSchema#integer");

  const Term tagged = parse_term("\"Titanic\"@en-GB");
  EXPECT_EQ(tagged.language, "en-GB");
}

TEST(Term, DecodesEscapes) {
  EXPECT_EQ(parse_term("\"a\\tb\"").value, "a\tb");
  EXPECT_EQ(parse_term("\"caf\\u00E9\"").value, "caf\xC3\xA9");
  EXPECT_EQ(parse_term("<http://x/\\U0001F600>").value, "http://x/\xF0\x9F\x98\x80");
  EXPECT_EQ(canonicalize("\"say \\\"hi\\\"\\n\""), "\"say \\\"hi\\\"\\n\"");
  EXPECT_EQ(canonicalize("\"\\u0041\""), "\"A\"");
}

TEST(Term, RejectsMalformed) {
  EXPECT_THROW(parse_term(""), TermSyntaxError);
  EXPECT_THROW(parse_term("<http://x"), TermSyntaxError);
  EXPECT_THROW(parse_term("<http://x y>"), TermSyntaxError);
  EXPECT_THROW(parse_term("\"open"), TermSyntaxError);
  EXPECT_THROW(parse_term("\"x\"@"), TermSyntaxError);
  EXPECT_THROW(parse_term("\"x\"^^foo"), TermSyntaxError);
  EXPECT_THROW(parse_term("_:"), TermSyntaxError);
  EXPECT_THROW(parse_term("plain"), TermSyntaxError);
}

TEST(Term, CanonicalizeIsIdempotent) {
  std::mt19937 rng(7);
  const std::string alphabet = "ab\"\\\n\r\t\xC3\xA9 ";
  for (int i = 0; i < 500; ++i) {
    std::string lexical;
    const int len = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int k = 0; k < len; ++k) lexical += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    const std::string once = Term::literal(lexical, i % 2 ? "http://x/dt" : "").canonical();
    EXPECT_EQ(canonicalize(once), once);
    EXPECT_EQ(parse_term(once).value, lexical);
  }
}

TEST(Term, StripAndToken) {
  EXPECT_EQ(strip_iri("<http://x>"), "http://x");
  EXPECT_EQ(strip_iri("_:b"), "_:b");
  EXPECT_EQ(iri_token("http://x"), "<http://x>");
  EXPECT_EQ(iri_token("<http://x>"), "<http://x>");
  EXPECT_EQ(kind_of_canonical("\"v\""), TermKind::literal);
  EXPECT_EQ(kind_of_canonical("_:v"), TermKind::blank);
}

TEST(Intern, DenseIdempotentIds) {
  TermTable table;
  EXPECT_EQ(table.intern("<x>").value, 0u);
  EXPECT_EQ(table.intern("<x>").value, 0u);
  EXPECT_EQ(table.intern("<y>").value, 1u);
  EXPECT_EQ(table.size(), 2u);
  EXPECT_EQ(table.text(TermId{1}), "<y>");
  EXPECT_FALSE(table.find("<z>").has_value());
}

TEST(Intern, AbsorbRemapsIds) {
  TermTable a, b;
  a.intern("<x>");
  b.intern("<y>");
  b.intern("<x>");
  const auto remap = a.absorb(b);
  ASSERT_EQ(remap.size(), 2u);
  EXPECT_EQ(remap[0].value, 1u);
  EXPECT_EQ(remap[1].value, 0u);
  EXPECT_EQ(a.size(), 2u);
}

TEST(Intern, TextViewsSurviveGrowth) {
  TermTable table;
  const std::string_view first = table.text(table.intern("<first>"));
  for (int i = 0; i < 10000; ++i) table.intern("<t" + std::to_string(i) + ">");
  EXPECT_EQ(first, "<first>");
}

}  // namespace
}  // namespace kgcg
