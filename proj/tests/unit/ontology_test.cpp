#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "kgcg/ontology.hpp"
#include "support/fixtures.hpp"
#include "support/small_kg.hpp"

namespace kgcg {
namespace {

using testing::ex;
using testing::parse_all;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Onto {
  TermTable table;
  OntologyGraph graph;
  explicit Onto(const std::string& text, HierarchyConfig config = {}) {
    graph = build_hierarchy(parse_all(text, table), config, table);
  }
  static Onto fixture(const std::string& name) { return Onto(slurp(testing::fixture(name))); }
  TermId id(const std::string& token) const { return *table.find(token); }
  std::vector<std::string> names(const std::vector<TermId>& ids) const {
    std::vector<std::string> out;
    for (TermId i : ids) out.emplace_back(table.text(i));
    std::sort(out.begin(), out.end());
    return out;
  }
};

const std::string kSub = std::string("<") + std::string(iri::rdfs_subclass_of) + ">";

TEST(Ontology, SingleSubclassEdge) {
  Onto o("<http://x/Athlete> " + kSub + " <http://x/Person> .\n");
  EXPECT_EQ(o.graph.class_count(), 2u);
  EXPECT_EQ(o.names(o.graph.roots()), std::vector<std::string>{"<http://x/Person>"});
  EXPECT_EQ(o.names(o.graph.parents(o.id("<http://x/Athlete>"))), std::vector<std::string>{"<http://x/Person>"});
  EXPECT_EQ(o.graph.edge_count(), 1u);
}

TEST(Ontology, EmptyStream) {
  Onto o("");
  EXPECT_EQ(o.graph.class_count(), 0u);
  EXPECT_TRUE(o.graph.roots().empty());
}

TEST(Ontology, RejectPolicyNamesCycle) {
  HierarchyConfig c;
  c.cycle_policy = CyclePolicy::reject;
  try {
    Onto o("<http://x/A> " + kSub + " <http://x/B> .\n<http://x/B> " + kSub + " <http://x/A> .\n", c);
    FAIL() << "expected CycleError";
  } catch (const CycleError& e) {
    EXPECT_NE(std::string(e.what()).find("http://x/A"), std::string::npos);
    EXPECT_EQ(e.stage(), Stage::model);
  }
  EXPECT_THROW(Onto("<http://x/A> " + kSub + " <http://x/A> .\n", c), CycleError);
}

TEST(Ontology, CollapsePolicyMergesCycle) {
  Onto o("<http://x/B> " + kSub + " <http://x/A> .\n<http://x/A> " + kSub + " <http://x/B> .\n<http://x/C> " + kSub +
         " <http://x/B> .\n<http://x/B> " + kSub + " <http://x/Top> .\n");
  EXPECT_EQ(o.graph.class_count(), 3u);
  ASSERT_EQ(o.graph.collapsed_cycles().size(), 1u);
  EXPECT_EQ(o.table.text(o.graph.collapsed_cycles()[0].representative), "<http://x/A>");
  EXPECT_EQ(o.graph.resolve(o.id("<http://x/B>")), o.id("<http://x/A>"));
  EXPECT_EQ(o.names(o.graph.parents(o.id("<http://x/C>"))), std::vector<std::string>{"<http://x/A>"});
  EXPECT_EQ(o.names(o.graph.roots()), std::vector<std::string>{"<http://x/Top>"});
}

TEST(Ontology, RelatedClassesOntologyB) {
  Onto o = Onto::fixture("ontology_b.nt");
  EXPECT_EQ(o.graph.class_count(), 9u);
  EXPECT_EQ(o.graph.edge_count(), 8u);
  EXPECT_EQ(o.names(related_classes(o.graph, o.id(ex("Movie"))).members),
            (std::vector<std::string>{ex("TVSeries"), ex("Video")}));
}

TEST(Ontology, RelatedClassesOntologyA) {
  Onto o = Onto::fixture("ontology_a.nt");
  EXPECT_EQ(o.names(related_classes(o.graph, o.id(ex("AudioWork"))).members),
            (std::vector<std::string>{ex("CreativeWork"), ex("VisualWork")}));
  EXPECT_THROW(related_classes(o.graph, o.id(ex("CreativeWork"))), ModelError);
  EXPECT_THROW(related_classes(o.graph, o.id(ex("performer"))), UnknownClassError);
}

TEST(Ontology, SingleChildRelatedIsParentOnly) {
  Onto o("<http://x/X> " + kSub + " <http://x/Root> .\n");
  EXPECT_EQ(o.names(related_classes(o.graph, o.id("<http://x/X>")).members),
            std::vector<std::string>{"<http://x/Root>"});
}

TEST(Ontology, DefinedAndDistinctPredicates) {
  Onto b = Onto::fixture("ontology_b.nt");
  EXPECT_EQ(b.names(defined_predicates(b.graph, b.id(ex("MusicAlbum")), PredicateMode::declared, nullptr)),
            std::vector<std::string>{ex("tracklist")});
  EXPECT_TRUE(distinct_predicates(b.graph, b.id(ex("VisualWork")), PredicateMode::declared, nullptr).predicates.empty());

  Onto a = Onto::fixture("ontology_a.nt");
  EXPECT_EQ(a.names(distinct_predicates(a.graph, a.id(ex("AudioWork")), PredicateMode::declared, nullptr).predicates),
            (std::vector<std::string>{ex("lyricsBy"), ex("performer"), ex("tracklist")}));
}

TEST(Ontology, SiblingSharedDeclarationIsNotDistinct) {
  const std::string dom = std::string("<") + std::string(iri::rdfs_domain) + ">";
  Onto o("<http://x/A> " + kSub + " <http://x/R> .\n<http://x/B> " + kSub + " <http://x/R> .\n<http://x/p> " + dom +
         " <http://x/A> .\n<http://x/p> " + dom + " <http://x/B> .\n");
  EXPECT_TRUE(distinct_predicates(o.graph, o.id("<http://x/A>"), PredicateMode::declared, nullptr).predicates.empty());
}

TEST(Ontology, UndeclaredEmptyClassDefinesNothing) {
  Onto o("<http://x/A> " + kSub + " <http://x/R> .\n");
  InducedPredicates induced;
  EXPECT_TRUE(defined_predicates(o.graph, o.id("<http://x/A>"), PredicateMode::declared, nullptr).empty());
  EXPECT_TRUE(defined_predicates(o.graph, o.id("<http://x/A>"), PredicateMode::induced, &induced).empty());
  EXPECT_THROW(defined_predicates(o.graph, o.id("<http://x/A>"), PredicateMode::induced, nullptr), ModelError);
}

TEST(Ontology, PinnedRootAdoptsOrphans) {
  HierarchyConfig c;
  c.root = std::string(iri::owl_thing);
  Onto o("<http://x/A> " + kSub + " <http://x/R> .\n<http://x/B> " + kSub + " <http://x/S> .\n", c);
  ASSERT_EQ(o.graph.roots().size(), 1u);
  EXPECT_EQ(o.table.text(o.graph.roots()[0]), iri_token(iri::owl_thing));
}

TEST(Ontology, VirtualRootMakesFormerRootsSiblings) {
  HierarchyConfig c;
  c.virtual_root = "http://x/Thing";
  Onto o("<http://x/A> " + kSub + " <http://x/R> .\n<http://x/B> " + kSub + " <http://x/S> .\n", c);
  ASSERT_TRUE(o.graph.virtual_root().has_value());
  EXPECT_EQ(o.names(o.graph.roots()), std::vector<std::string>{"<http://x/Thing>"});
  EXPECT_EQ(o.names(related_classes(o.graph, o.id("<http://x/R>")).members),
            (std::vector<std::string>{"<http://x/S>", "<http://x/Thing>"}));
}

TEST(Ontology, AncestorsIncludeAllPaths) {
  Onto o = Onto::fixture("ontology_b.nt");
  EXPECT_EQ(o.names(o.graph.ancestors_or_self(o.id(ex("Movie")))),
            (std::vector<std::string>{ex("CreativeWork"), ex("Movie"), ex("Video"), ex("VisualWork")}));
}

// Random hierarchies from the shared generator.
struct RandomOnto {
  testing::SmallKg kg;
  Onto onto;
  explicit RandomOnto(std::mt19937_64& rng) : kg(testing::random_kg(rng)), onto(testing::ontology_nt(kg)) {}
  TermId cls(int c) const { return onto.id("<" + testing::class_iri(c) + ">"); }
};

TEST(OntologyProperty, SiblinghoodIsSymmetric) {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 100; ++round) {
    RandomOnto r(rng);
    const auto& g = r.onto.graph;
    for (TermId a : g.classes()) {
      if (g.is_root(a)) continue;
      for (TermId b : related_classes(g, a).members) {
        const bool via_parent = std::find(g.parents(a).begin(), g.parents(a).end(), b) != g.parents(a).end();
        if (via_parent) continue;
        const auto back = related_classes(g, b).members;
        EXPECT_NE(std::find(back.begin(), back.end(), a), back.end());
      }
    }
  }
}

TEST(OntologyProperty, DistinctDisjointFromRelatedDefinitions) {
  std::mt19937_64 rng(202);
  for (int round = 0; round < 100; ++round) {
    RandomOnto r(rng);
    const auto& g = r.onto.graph;
    InducedPredicates induced;
    for (TermId c : g.classes())
      for (TermId p : g.declared_predicates(c))
        if (p.value % 2 == 0) induced[c].push_back(p);
    for (PredicateMode mode : {PredicateMode::declared, PredicateMode::induced}) {
      for (TermId c : g.classes()) {
        if (g.is_root(c)) continue;
        const auto dp = distinct_predicates(g, c, mode, &induced).predicates;
        for (TermId rel : related_classes(g, c).members)
          for (TermId p : defined_predicates(g, rel, mode, &induced))
            EXPECT_EQ(std::find(dp.begin(), dp.end(), p), dp.end());
      }
    }
  }
}

TEST(OntologyProperty, CollapsingNeverAddsClasses) {
  std::mt19937_64 rng(303);
  for (int round = 0; round < 100; ++round) {
    testing::SmallKg kg = testing::random_kg(rng);
    std::string text = testing::ontology_nt(kg);
    const int extra = static_cast<int>(rng() % 3);
    for (int k = 0; k < extra && kg.n_classes > 1; ++k) {
      const int a = static_cast<int>(rng() % kg.n_classes), b = static_cast<int>(rng() % kg.n_classes);
      text += testing::nt(testing::class_iri(a), testing::kSub, testing::class_iri(b));
    }
    Onto o(text);
    EXPECT_LE(o.graph.class_count(), static_cast<std::size_t>(kg.n_classes));
    std::size_t merged = 0;
    for (const auto& cc : o.graph.collapsed_cycles()) merged += cc.members.size() - 1;
    EXPECT_EQ(o.graph.class_count() + merged, static_cast<std::size_t>(kg.n_classes));
  }
}

TEST(OntologyProperty, VirtualRootOnlyChangesFormerRoots) {
  std::mt19937_64 rng(404);
  const std::string dom = std::string("<") + std::string(iri::rdfs_domain) + ">";
  for (int round = 0; round < 100; ++round) {
    // Two or three disjoint trees; tree t has classes <http://x/t{t}c{i}>.
    std::string text;
    std::vector<std::string> roots;
    const int trees = 2 + static_cast<int>(rng() % 2);
    for (int t = 0; t < trees; ++t) {
      auto cls = [&](int i) { return "<http://x/t" + std::to_string(t) + "c" + std::to_string(i) + ">"; };
      roots.push_back(cls(0));
      const int n = 1 + static_cast<int>(rng() % 4);
      text += cls(0) + " <" + std::string(iri::rdf_type) + "> <" + std::string(iri::owl_class) + "> .\n";
      for (int i = 1; i < n; ++i) text += cls(i) + " " + kSub + " " + cls(static_cast<int>(rng() % i)) + " .\n";
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < 4; ++p)
          if (rng() % 3 == 0) text += "<http://x/p" + std::to_string(p) + "> " + dom + " " + cls(i) + " .\n";
    }
    HierarchyConfig with;
    with.virtual_root = "http://x/Virtual";
    Onto plain(text), rooted(text, with);
    for (TermId c : plain.graph.classes()) {
      const std::string name(plain.table.text(c));
      const TermId rc = rooted.id(name);
      if (std::find(roots.begin(), roots.end(), name) != roots.end()) {
        const auto rel = rooted.names(related_classes(rooted.graph, rc).members);
        for (const auto& other : roots)
          if (other != name) {
            EXPECT_NE(std::find(rel.begin(), rel.end(), other), rel.end());
          }
        continue;
      }
      EXPECT_EQ(plain.names(distinct_predicates(plain.graph, c, PredicateMode::declared, nullptr).predicates),
                rooted.names(distinct_predicates(rooted.graph, rc, PredicateMode::declared, nullptr).predicates));
    }
  }
}

}  // namespace
}  // namespace kgcg
