// Computes Class Granularity for a small creative-works graph held in memory
// and prints the per-class breakdown.

#include <iostream>

#include "kgcg/kgcg.hpp"

int main() {
  const std::string ex = "http://example.org/kg/";
  auto triple = [&](const std::string& s, const std::string& p, const std::string& o) {
    return "<" + ex + s + "> <" + p + "> <" + ex + o + "> .\n";
  };
  const std::string sub = std::string(kgcg::iri::rdfs_subclass_of);
  const std::string dom = std::string(kgcg::iri::rdfs_domain);
  const std::string type = std::string(kgcg::iri::rdf_type);

  std::string ontology;
  ontology += triple("AudioWork", sub, "CreativeWork");
  ontology += triple("VisualWork", sub, "CreativeWork");
  ontology += triple("Song", sub, "AudioWork");
  ontology += triple("Film", sub, "VisualWork");
  ontology += "<" + ex + "performer> <" + dom + "> <" + ex + "AudioWork> .\n";
  ontology += "<" + ex + "lyricsBy> <" + dom + "> <" + ex + "Song> .\n";
  ontology += "<" + ex + "director> <" + dom + "> <" + ex + "Film> .\n";

  std::string data;
  data += triple("Imagine", type, "Song");
  data += triple("Imagine", ex + "performer", "JohnLennon");
  data += triple("Imagine", ex + "lyricsBy", "JohnLennon");
  data += triple("Vertigo", type, "Film");
  data += triple("Vertigo", ex + "director", "AlfredHitchcock");

  kgcg::RunConfig config;
  config.label = "sample";
  config.ontology_inputs.push_back(kgcg::Input::inline_text("ontology", ontology));
  config.data_inputs.push_back(kgcg::Input::inline_text("data", data));

  const auto result = kgcg::run_pipeline(config);
  const auto report = kgcg::make_report(result, config);
  std::cout << kgcg::render_report(report, kgcg::OutputFormat::plain);
  std::cout << "\n" << kgcg::render_class_detail(kgcg::class_detail(report, ex + "Song"), kgcg::OutputFormat::plain);
  return 0;
}
