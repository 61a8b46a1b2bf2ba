#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kgcg/kgcg.hpp"

#ifndef KGCG_FIXTURE_DIR
#error "KGCG_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace kgcg::testing {

inline std::string fixture(const std::string& name) { return std::string(KGCG_FIXTURE_DIR) + "/" + name; }

inline const std::string kEx = "http://example.org/kg/";
inline std::string ex(const std::string& local) { return "<" + kEx + local + ">"; }

/// The worked example: nine facts typed against ontology "a" or "b" (or
/// "b_dead", ontology b plus two uninstantiated movie subclasses).
inline RunConfig worked_example(const std::string& ontology, MetricConfig metrics = {}) {
  RunConfig c;
  c.label = "ontology-" + ontology;
  c.ontology_inputs.push_back(Input::file(fixture("ontology_" + ontology + ".nt")));
  const std::string types = ontology == "a" ? "a" : "b";
  c.data_inputs.push_back(Input::file(fixture("worked_types_" + types + ".nt")));
  c.data_inputs.push_back(Input::file(fixture("worked_facts.nt")));
  c.metrics = metrics;
  return c;
}

/// Runs a SmallKg (rendered to N-Triples) through the full pipeline.
inline PipelineResult run_text(const std::string& ontology, const std::string& data, MetricConfig metrics = {},
                               unsigned workers = 1) {
  RunConfig c;
  c.label = "generated";
  if (!ontology.empty()) c.ontology_inputs.push_back(Input::inline_text("ontology", ontology));
  c.data_inputs.push_back(Input::inline_text("data", data));
  c.metrics = metrics;
  c.workers = workers;
  c.chunk_triples = 64;
  return run_pipeline(c);
}

inline std::vector<Triple> parse_all(const std::string& text, TermTable& table) {
  StringSource src(text);
  NTriplesReader reader(src, table, Strictness::strict);
  std::vector<Triple> out;
  reader.for_each([&](const Triple& t) { out.push_back(t); }, [](const LineError&) {});
  return out;
}

inline TermId id_of(const PipelineResult& r, const std::string& token) {
  auto id = r.table->find(token);
  if (!id) throw std::runtime_error("term not interned: " + token);
  return *id;
}

}  // namespace kgcg::testing
