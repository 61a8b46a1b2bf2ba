// kgcg: Class Granularity profiler for RDF N-Triples dumps.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "kgcg/kgcg.hpp"

namespace {

struct Options {
  std::vector<std::string> data;
  std::vector<std::string> ontology;
  std::string adapter = "identity";
  std::optional<nlohmann::json> inline_adapter;
  std::vector<std::string> instance_of;
  std::vector<std::string> subclass_of;
  std::vector<std::string> domain;
  std::string profile = "rdfs";
  std::string mode = "auto";
  std::string tie_policy = "keep";
  std::string empty_class = "idppa-zero";
  std::string cycle_policy = "collapse";
  std::string root;
  std::string virtual_root;
  std::string format = "plain";
  int precision = 4;
  std::string stats_out;
  std::string stats_in;
  std::vector<std::string> compare;
  bool force = false;
  std::string class_iri;
  std::string label;
  std::string output;
  std::string config;
  unsigned workers = 1;
  bool strict = false;
  bool grouped = false;
};

std::string default_label(const std::string& path) {
  std::filesystem::path p(path);
  for (const char* ext : {".gz", ".bz2", ".bzip2"})
    if (p.extension() == ext) p = p.stem();
  for (const char* ext : {".nt", ".ttl"})
    if (p.extension() == ext) p = p.stem();
  return p.filename().string();
}

// Fills options not given on the command line from a JSON config file.
void apply_config_file(const CLI::App& app, Options& o) {
  std::ifstream in(o.config);
  if (!in) throw kgcg::UsageError("cannot read config file " + o.config);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw kgcg::ConfigError("config " + o.config + ": " + e.what());
  }
  if (j.value("config_version", 0) != 1) throw kgcg::ConfigError("config " + o.config + ": config_version must be 1");
  auto fill = [&](const char* flag, const char* key, auto& target) {
    if (app.count(flag) == 0 && j.contains(key)) {
      try {
        j.at(key).get_to(target);
      } catch (const nlohmann::json::exception& e) {
        throw kgcg::ConfigError(std::string("config key '") + key + "': " + e.what());
      }
    }
  };
  fill("--data", "data", o.data);
  fill("--ontology", "ontology", o.ontology);
  if (app.count("--adapter") == 0 && j.contains("adapter")) {
    if (j["adapter"].is_object()) {
      o.inline_adapter = j["adapter"];
    } else {
      o.adapter = j["adapter"].get<std::string>();
    }
  }
  fill("--instance-of", "instance_of", o.instance_of);
  fill("--subclass-of", "subclass_of", o.subclass_of);
  fill("--domain", "domain", o.domain);
  fill("--profile", "profile", o.profile);
  fill("--mode", "mode", o.mode);
  fill("--tie-policy", "tie_policy", o.tie_policy);
  fill("--empty-class", "empty_class", o.empty_class);
  fill("--cycle-policy", "cycle_policy", o.cycle_policy);
  fill("--root", "root", o.root);
  fill("--virtual-root", "virtual_root", o.virtual_root);
  fill("--format", "format", o.format);
  fill("--precision", "precision", o.precision);
  fill("--stats-out", "stats_out", o.stats_out);
  fill("--stats-in", "stats_in", o.stats_in);
  fill("--compare", "compare", o.compare);
  fill("--force", "force", o.force);
  fill("--class", "class", o.class_iri);
  fill("--label", "label", o.label);
  fill("--output", "output", o.output);
  fill("--workers", "workers", o.workers);
  fill("--strict", "strict", o.strict);
  fill("--grouped", "grouped", o.grouped);
}

kgcg::RunConfig to_run_config(const Options& o) {
  kgcg::RunConfig c;
  for (const auto& d : o.data) c.data_inputs.push_back(kgcg::Input::file(d));
  for (const auto& d : o.ontology) c.ontology_inputs.push_back(kgcg::Input::file(d));
  c.label = !o.label.empty() ? o.label : (o.data.empty() ? std::string() : default_label(o.data.front()));
  c.adapter = o.inline_adapter ? kgcg::adapter_from_json(*o.inline_adapter) : kgcg::load_adapter(o.adapter);
  if (o.profile == "wikidata")
    c.hierarchy = kgcg::HierarchyConfig::wikidata();
  else if (o.profile != "rdfs")
    throw kgcg::UsageError("unknown profile '" + o.profile + "'");
  if (!o.instance_of.empty()) {
    c.hierarchy.instance_of = o.instance_of;
    c.instance_of_explicit = true;
  }
  if (!o.subclass_of.empty()) c.hierarchy.subclass_of = o.subclass_of;
  if (!o.domain.empty()) c.hierarchy.domain = o.domain;
  if (o.cycle_policy == "reject")
    c.hierarchy.cycle_policy = kgcg::CyclePolicy::reject;
  else if (o.cycle_policy != "collapse")
    throw kgcg::UsageError("unknown cycle policy '" + o.cycle_policy + "'");
  if (!o.root.empty()) c.hierarchy.root = o.root;
  if (!o.virtual_root.empty()) c.hierarchy.virtual_root = o.virtual_root;

  if (o.mode == "declared")
    c.metrics.predicate_mode = kgcg::PredicateMode::declared;
  else if (o.mode == "induced")
    c.metrics.predicate_mode = kgcg::PredicateMode::induced;
  else if (o.mode != "auto")
    throw kgcg::UsageError("unknown mode '" + o.mode + "'");
  if (o.tie_policy == "zero")
    c.metrics.tie_policy = kgcg::TiePolicy::zero_on_tie;
  else if (o.tie_policy != "keep")
    throw kgcg::UsageError("unknown tie policy '" + o.tie_policy + "'");
  if (o.empty_class == "exclude")
    c.metrics.empty_class_policy = kgcg::EmptyClassPolicy::exclude_from_average;
  else if (o.empty_class != "idppa-zero")
    throw kgcg::UsageError("unknown empty-class policy '" + o.empty_class + "'");
  c.strictness = o.strict ? kgcg::Strictness::strict : kgcg::Strictness::skip_bad_lines;
  c.grouping = o.grouped ? kgcg::Grouping::subject_grouped : kgcg::Grouping::unsorted;
  c.workers = o.workers;
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output);
  if (!out) throw kgcg::UsageError("cannot write " + o.output);
  out << text;
}

int run(const CLI::App& app, Options& o) {
  if (!o.config.empty()) apply_config_file(app, o);
  if (o.precision < 0 || o.precision > 30) throw kgcg::UsageError("precision must be within 0..30");
  const auto format = kgcg::parse_format(o.format);

  if (!o.compare.empty()) {
    std::vector<kgcg::GranularityReport> reports;
    for (const auto& path : o.compare) reports.push_back(kgcg::load_report(path));
    emit(o, kgcg::render_comparison(kgcg::compare(reports, o.force), format, o.precision));
    return 0;
  }

  kgcg::GranularityReport report;
  if (!o.stats_in.empty()) {
    auto config = to_run_config(o);
    if (config.label.empty()) config.label = default_label(o.stats_in);
    kgcg::ojson diagnostics;
    const auto result = kgcg::read_stats(o.stats_in, config.metrics, &diagnostics);
    report = kgcg::make_report(result, config);
    report.diagnostics = diagnostics;
  } else {
    if (o.data.empty()) throw kgcg::UsageError("missing --data input (see --help)");
    const auto config = to_run_config(o);
    const auto result = kgcg::run_pipeline(config);
    if (!o.stats_out.empty()) kgcg::write_stats(result, config, o.stats_out);
    report = kgcg::make_report(result, config);
  }

  if (!o.class_iri.empty())
    emit(o, kgcg::render_class_detail(kgcg::class_detail(report, o.class_iri), format, o.precision));
  else
    emit(o, kgcg::render_report(report, format, o.precision));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class Granularity profiler for RDF N-Triples dumps and their ontologies"};
  app.set_version_flag("--version", std::string("kgcg ") + kgcg::tool_version);
  Options o;
  app.add_option("--data", o.data, "Data dump(s): N-Triples, optionally .gz/.bz2");
  app.add_option("--ontology", o.ontology, "Ontology dump(s)");
  app.add_option("--adapter", o.adapter, "identity|dbpedia|yago|freebase or an adapter JSON file");
  app.add_option("--instance-of", o.instance_of, "Instance-of predicate IRI(s)");
  app.add_option("--subclass-of", o.subclass_of, "Subclass-of predicate IRI(s)");
  app.add_option("--domain", o.domain, "Predicate-declaration (domain) IRI(s)");
  app.add_option("--profile", o.profile, "Vocabulary defaults: rdfs|wikidata");
  app.add_option("--mode", o.mode, "Predicate definitions: declared|induced|auto");
  app.add_option("--tie-policy", o.tie_policy, "keep|zero");
  app.add_option("--empty-class", o.empty_class, "idppa-zero|exclude");
  app.add_option("--cycle-policy", o.cycle_policy, "collapse|reject");
  app.add_option("--root", o.root, "Pin the root class IRI");
  app.add_option("--virtual-root", o.virtual_root, "Inject this virtual root above multiple roots");
  app.add_option("--format", o.format, "json|csv|markdown|plain");
  app.add_option("--precision", o.precision, "Decimal places in rendered values");
  app.add_option("--stats-out", o.stats_out, "Write ingested statistics for later --stats-in runs");
  app.add_option("--stats-in", o.stats_in, "Recompute metrics from a --stats-out file");
  app.add_option("--compare", o.compare, "Compare two or more JSON reports");
  app.add_flag("--force", o.force, "Compare reports even when metric settings differ");
  app.add_option("--class", o.class_iri, "Show the per-predicate breakdown of one class");
  app.add_option("--label", o.label, "Dataset label");
  app.add_option("--output,-o", o.output, "Write to a file instead of stdout");
  app.add_option("--config", o.config, "JSON config file (config_version 1); flags override it");
  app.add_option("--workers", o.workers, "Worker threads for the per-triple passes");
  app.add_flag("--strict", o.strict, "Abort on the first malformed line");
  app.add_flag("--grouped", o.grouped, "Data is grouped by subject (lower memory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kgcg::exit_code(kgcg::Stage::usage);
  }

  try {
    return run(app, o);
  } catch (const kgcg::Error& e) {
    std::cerr << "kgcg: " << kgcg::stage_name(e.stage()) << " error: " << e.what() << "\n";
    return kgcg::exit_code(e.stage());
  } catch (const std::exception& e) {
    std::cerr << "kgcg: error: " << e.what() << "\n";
    return 1;
  }
}
