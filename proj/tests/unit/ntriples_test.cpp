#include <gtest/gtest.h>

#include <random>

#include "kgcg/ntriples.hpp"

namespace kgcg {
namespace {

std::vector<Record> read_all(const std::string& text, TermTable& table, Strictness s = Strictness::skip_bad_lines) {
  StringSource src(text);
  NTriplesReader reader(src, table, s);
  std::vector<Record> out;
  while (auto r = reader.next()) out.push_back(*r);
  return out;
}

TEST(NTriples, MinimalLine) {
  TermTable table;
  const auto recs = read_all("<s> <p> <o> .\n", table);
  ASSERT_EQ(recs.size(), 1u);
  const auto& t = std::get<Triple>(recs[0]);
  EXPECT_EQ(table.text(t.subject), "<s>");
  EXPECT_EQ(table.text(t.predicate), "<p>");
  EXPECT_EQ(table.text(t.object), "<o>");
}

TEST(NTriples, TypedLiteralObject) {
  TermTable table;
  const auto recs = read_all(
      "<http://x/Titanic> <http://x/boxOffice> \"1850197130\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n", table);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(table.text(std::get<Triple>(recs[0]).object),
            "\"1850197130\"^^<http://www.w3.org/2001/XMLSchema#integer>");
}

TEST(NTriples, MissingObjectIsLineErrorAndStreamContinues) {
  TermTable table;
  const auto recs = read_all("<s> <p> .\n<s> <p> <o> .\n", table);
  ASSERT_EQ(recs.size(), 2u);
  const auto& err = std::get<LineError>(recs[0]);
  EXPECT_EQ(err.line, 1u);
  EXPECT_FALSE(err.message.empty());
  EXPECT_TRUE(std::holds_alternative<Triple>(recs[1]));
}

TEST(NTriples, StrictModeThrowsWithLine) {
  TermTable table;
  try {
    read_all("<s> <p> <o> .\n<s> <p> .\n", table, Strictness::strict);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.stage(), Stage::ingest);
  }
}

TEST(NTriples, RejectsStructuralErrors) {
  LineParser p;
  for (const char* bad : {"\"lit\" <p> <o> .", "<s> _:b <o> .", "<s> <p> <o>", "<s> <p> <o> . extra", "<s><p><o> .",
                          "<s> <p> \"unterminated .", "<s> <p> <o> <x> ."})
    EXPECT_EQ(p.parse(bad), LineParser::Outcome::error) << bad;
  EXPECT_EQ(p.parse("   "), LineParser::Outcome::skip);
  EXPECT_EQ(p.parse("# comment"), LineParser::Outcome::skip);
  EXPECT_EQ(p.parse("_:a <p> _:b . # trailing"), LineParser::Outcome::triple);
  EXPECT_EQ(p.parse("<s>\t<p>\t\"x y\"@en\t."), LineParser::Outcome::triple);
}

TEST(NTriples, EscapedTokensCanonicalized) {
  TermTable table;
  const auto recs = read_all("<s> <p> \"\\u0041\\t\" .\n<s> <p> \"A\\t\" .\n", table);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(std::get<Triple>(recs[0]).object, std::get<Triple>(recs[1]).object);
}

TEST(NTriples, CrLfLineEndings) {
  TermTable table;
  const auto recs = read_all("<s> <p> <o> .\r\n<s> <p> <o2> .\r\n", table);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<Triple>(recs[1]));
}

std::string random_term(std::mt19937& rng, bool literal_ok) {
  const int kind = std::uniform_int_distribution<int>(0, literal_ok ? 3 : 1)(rng);
  const std::string id = std::to_string(rng() % 50);
  switch (kind) {
    case 0: return "<http://example.org/r/" + id + ">";
    case 1: return "_:n" + id;
    case 2: return "\"v" + id + "\\\"q\\\\\\n\"@en";
    default: return "\"" + id + "\"^^<http://www.w3.org/2001/XMLSchema#integer>";
  }
}

TEST(NTriplesProperty, LineCountInvariant) {
  std::mt19937 rng(11);
  for (int round = 0; round < 100; ++round) {
    std::string text;
    std::size_t n_lines = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
    for (std::size_t i = 0; i < n_lines; ++i) {
      switch (rng() % 5) {
        case 0: text += "# note\n"; break;
        case 1: text += "\n"; break;
        case 2: text += "<s> <p> broken\n"; break;
        default: text += random_term(rng, false) + " <http://p/" + std::to_string(rng() % 5) + "> " + random_term(rng, true) + " .\n";
      }
    }
    TermTable table;
    StringSource src(text);
    NTriplesReader reader(src, table, Strictness::skip_bad_lines);
    reader.for_each([](const Triple&) {}, [](const LineError&) {});
    const auto& c = reader.counts();
    EXPECT_EQ(c.lines, n_lines);
    EXPECT_EQ(c.triples + c.errors + c.skipped, c.lines);
  }
}

TEST(NTriplesProperty, SerializeRoundTrip) {
  std::mt19937 rng(23);
  for (int round = 0; round < 100; ++round) {
    std::string text;
    for (int i = 0; i < 20; ++i)
      text += random_term(rng, false) + " <http://p/" + std::to_string(rng() % 5) + "> " + random_term(rng, true) + " .\n";
    TermTable table;
    std::vector<Triple> first;
    {
      StringSource src(text);
      NTriplesReader reader(src, table, Strictness::strict);
      reader.for_each([&](const Triple& t) { first.push_back(t); }, [](const LineError&) {});
    }
    std::string again;
    for (const auto& t : first) again += to_ntriples(t, table) + "\n";
    std::vector<Triple> second;
    StringSource src(again);
    NTriplesReader reader(src, table, Strictness::strict);
    reader.for_each([&](const Triple& t) { second.push_back(t); }, [](const LineError&) {});
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      EXPECT_EQ(first[i].subject, second[i].subject);
      EXPECT_EQ(first[i].predicate, second[i].predicate);
      EXPECT_EQ(first[i].object, second[i].object);
    }
  }
}

TEST(NTriples, GroupBySubjectIsStable) {
  std::vector<Triple> ts{{TermId{2}, TermId{0}, TermId{1}}, {TermId{1}, TermId{0}, TermId{5}}, {TermId{2}, TermId{0}, TermId{3}}};
  group_by_subject(ts);
  EXPECT_EQ(ts[0].subject.value, 1u);
  EXPECT_EQ(ts[1].object.value, 1u);
  EXPECT_EQ(ts[2].object.value, 3u);
}

}  // namespace
}  // namespace kgcg
