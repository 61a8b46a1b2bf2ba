#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kgcg/error.hpp"
#include "kgcg/metrics.hpp"
#include "kgcg/pipeline.hpp"
#include "kgcg/ratio.hpp"

namespace kgcg {

using ojson = nlohmann::ordered_json;

inline constexpr int report_schema_version = 1;
inline constexpr int stats_format_version = 1;

struct PredicateRow {
  std::string predicate;
  Ratio ipp;
  Ratio max_related_ipp;
  Ratio idpp;
};

struct UsageRow {
  std::string predicate;
  Ratio ipp;
};

struct ClassRow {
  std::string cls;
  std::uint64_t instances = 0;
  std::size_t n_dp = 0;
  Ratio idppa;
  bool excluded = false;
  std::vector<std::string> related;
  std::vector<PredicateRow> distinct;
  std::vector<UsageRow> in_use;
};

/// Self-contained, string-keyed report. Everything but `generated_at` is a
/// pure function of the inputs and configuration.
struct GranularityReport {
  int schema_version = report_schema_version;
  std::string label;
  Ratio class_granularity;
  std::uint64_t n_classes = 0;
  std::uint64_t averaged_classes = 0;
  std::string mode;
  std::vector<std::string> roots;
  std::string virtual_root;
  CompanionMetrics companion;
  std::vector<ClassRow> classes;
  ojson config;
  ojson diagnostics;
  std::vector<InputDigest> inputs;
  std::string tool_version = kgcg::tool_version;
  std::string generated_at;
};

// ---------------------------------------------------------------- config echo

inline ojson config_echo(const RunConfig& config) {
  const HierarchyConfig h = config.effective_hierarchy();
  ojson hier{{"subclass_of", h.subclass_of},
             {"instance_of", h.instance_of},
             {"domain", h.domain},
             {"class_markers", h.class_markers},
             {"property_markers", h.property_markers},
             {"cycle_policy", h.cycle_policy == CyclePolicy::reject ? "reject" : "collapse"},
             {"root", h.root ? ojson(*h.root) : ojson(nullptr)},
             {"virtual_root", h.virtual_root ? ojson(*h.virtual_root) : ojson(nullptr)}};
  const auto& m = config.metrics;
  ojson metrics{{"tie_policy", tie_policy_name(m.tie_policy)},
                {"empty_class", empty_class_policy_name(m.empty_class_policy)},
                {"mode", m.predicate_mode ? mode_name(*m.predicate_mode) : "auto"}};
  return ojson{{"adapter", ojson::parse(to_json(config.adapter).dump())},
               {"hierarchy", hier},
               {"metrics", metrics},
               {"strictness", config.strictness == Strictness::strict ? "strict" : "skip-bad-lines"},
               {"grouping", config.grouping == Grouping::unsorted ? "unsorted" : "subject-grouped"}};
}

inline ojson diagnostics_json(const RunDiagnostics& d, const TermTable& table) {
  ojson collapsed = ojson::array();
  for (const auto& c : d.collapsed) {
    std::vector<std::string> members;
    for (TermId m : c.members) members.emplace_back(strip_iri(table.text(m)));
    collapsed.push_back({{"representative", std::string(strip_iri(table.text(c.representative)))}, {"members", members}});
  }
  return ojson{{"lines_read", d.lines_read},
               {"triples_read", d.triples_read},
               {"line_errors", d.line_errors},
               {"first_line_errors", d.first_line_errors},
               {"adapter_dropped", d.adapter_dropped},
               {"type_assertions", d.membership.type_assertions},
               {"unknown_class_assertions", d.membership.unknown_class_assertions},
               {"unknown_classes", d.membership.unknown_classes},
               {"dropped_instances", d.membership.dropped_instances},
               {"collapsed_cycles", collapsed}};
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// -------------------------------------------------------------- construction

inline GranularityReport make_report(const PipelineResult& run, const RunConfig& config) {
  const TermTable& table = *run.table;
  auto name = [&](TermId id) { return std::string(strip_iri(table.text(id))); };
  GranularityReport r;
  r.label = config.label;
  r.class_granularity = run.result.class_granularity;
  r.n_classes = run.result.n_classes;
  r.averaged_classes = run.result.averaged_classes;
  r.mode = mode_name(run.result.mode);
  for (TermId root : run.graph.roots()) r.roots.push_back(name(root));
  std::sort(r.roots.begin(), r.roots.end());
  if (auto v = run.graph.virtual_root()) r.virtual_root = name(*v);
  r.companion = run.result.companion;

  for (const auto& cr : run.result.class_results) {
    ClassRow row;
    row.cls = name(cr.cls);
    row.instances = cr.instances;
    row.n_dp = cr.n_dp;
    row.idppa = cr.idppa;
    row.excluded = cr.excluded;
    for (TermId rc : related_classes(run.graph, cr.cls).members) row.related.push_back(name(rc));
    std::sort(row.related.begin(), row.related.end());
    for (const auto& p : cr.per_predicate) row.distinct.push_back({name(p.predicate), p.ipp, p.max_related_ipp, p.idpp});
    if (cr.instances > 0)
      for (TermId p : run.stats.all_predicates(cr.cls))
        row.in_use.push_back({name(p), Ratio(run.stats.with_predicate_count(cr.cls, p), cr.instances)});
    std::sort(row.in_use.begin(), row.in_use.end(), [](const auto& a, const auto& b) { return a.predicate < b.predicate; });
    r.classes.push_back(std::move(row));
  }
  r.config = config_echo(config);
  r.diagnostics = diagnostics_json(run.diagnostics, table);
  r.inputs = run.digests;
  r.generated_at = utc_timestamp();
  return r;
}

// ---------------------------------------------------------------------- JSON

inline ojson ratio_json(const Ratio& r, int precision) {
  return ojson{{"num", r.numerator().str()}, {"den", r.denominator().str()}, {"value", r.render(precision)}};
}

inline Ratio ratio_from_json(const ojson& j) {
  return Ratio(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
}

inline ojson to_json(const GranularityReport& r, int precision = 4) {
  ojson classes = ojson::array();
  for (const auto& c : r.classes) {
    ojson distinct = ojson::array();
    for (const auto& p : c.distinct)
      distinct.push_back({{"predicate", p.predicate},
                          {"ipp", ratio_json(p.ipp, precision)},
                          {"max_related_ipp", ratio_json(p.max_related_ipp, precision)},
                          {"idpp", ratio_json(p.idpp, precision)}});
    ojson in_use = ojson::array();
    for (const auto& u : c.in_use) in_use.push_back({{"predicate", u.predicate}, {"ipp", ratio_json(u.ipp, precision)}});
    classes.push_back({{"class", c.cls},
                       {"instances", c.instances},
                       {"n_dp", c.n_dp},
                       {"idppa", ratio_json(c.idppa, precision)},
                       {"excluded", c.excluded},
                       {"related", c.related},
                       {"distinct_predicates", distinct},
                       {"predicates_in_use", in_use}});
  }
  const auto& cm = r.companion;
  ojson inputs = ojson::array();
  for (const auto& d : r.inputs)
    inputs.push_back({{"role", d.role}, {"name", d.name}, {"sha256", d.sha256}, {"bytes", d.bytes}});
  return ojson{
      {"schema_version", r.schema_version},
      {"label", r.label},
      {"generated_at", r.generated_at},
      {"result",
       {{"class_granularity", ratio_json(r.class_granularity, precision)},
        {"n_classes", r.n_classes},
        {"averaged_classes", r.averaged_classes},
        {"mode", r.mode},
        {"roots", r.roots},
        {"virtual_root", r.virtual_root.empty() ? ojson(nullptr) : ojson(r.virtual_root)},
        {"companion",
         {{"class_count", cm.class_count},
          {"predicate_count", cm.predicate_count},
          {"instance_count", cm.instance_count},
          {"triple_count", cm.triple_count},
          {"avg_predicates_per_class", ratio_json(cm.avg_predicates_per_class, precision)},
          {"attribute_richness", ratio_json(cm.attribute_richness, precision)},
          {"inheritance_richness", ratio_json(cm.inheritance_richness, precision)}}}}},
      {"classes", classes},
      {"diagnostics", r.diagnostics},
      {"provenance", {{"tool", "kgcg"}, {"tool_version", r.tool_version}, {"inputs", inputs}, {"config", r.config}}}};
}

inline GranularityReport report_from_json(const ojson& j) {
  try {
    GranularityReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != report_schema_version)
      throw ConfigError("unsupported report schema_version " + std::to_string(r.schema_version));
    r.label = j.at("label").get<std::string>();
    r.generated_at = j.value("generated_at", std::string());
    const auto& res = j.at("result");
    r.class_granularity = ratio_from_json(res.at("class_granularity"));
    r.n_classes = res.at("n_classes").get<std::uint64_t>();
    r.averaged_classes = res.at("averaged_classes").get<std::uint64_t>();
    r.mode = res.at("mode").get<std::string>();
    r.roots = res.at("roots").get<std::vector<std::string>>();
    if (!res.at("virtual_root").is_null()) r.virtual_root = res.at("virtual_root").get<std::string>();
    const auto& cm = res.at("companion");
    r.companion.class_count = cm.at("class_count").get<std::uint64_t>();
    r.companion.predicate_count = cm.at("predicate_count").get<std::uint64_t>();
    r.companion.instance_count = cm.at("instance_count").get<std::uint64_t>();
    r.companion.triple_count = cm.at("triple_count").get<std::uint64_t>();
    r.companion.avg_predicates_per_class = ratio_from_json(cm.at("avg_predicates_per_class"));
    r.companion.attribute_richness = ratio_from_json(cm.at("attribute_richness"));
    r.companion.inheritance_richness = ratio_from_json(cm.at("inheritance_richness"));
    for (const auto& cj : j.at("classes")) {
      ClassRow c;
      c.cls = cj.at("class").get<std::string>();
      c.instances = cj.at("instances").get<std::uint64_t>();
      c.n_dp = cj.at("n_dp").get<std::size_t>();
      c.idppa = ratio_from_json(cj.at("idppa"));
      c.excluded = cj.at("excluded").get<bool>();
      c.related = cj.at("related").get<std::vector<std::string>>();
      for (const auto& pj : cj.at("distinct_predicates"))
        c.distinct.push_back({pj.at("predicate").get<std::string>(), ratio_from_json(pj.at("ipp")),
                              ratio_from_json(pj.at("max_related_ipp")), ratio_from_json(pj.at("idpp"))});
      for (const auto& uj : cj.at("predicates_in_use"))
        c.in_use.push_back({uj.at("predicate").get<std::string>(), ratio_from_json(uj.at("ipp"))});
      r.classes.push_back(std::move(c));
    }
    r.diagnostics = j.at("diagnostics");
    const auto& prov = j.at("provenance");
    r.tool_version = prov.at("tool_version").get<std::string>();
    r.config = prov.at("config");
    for (const auto& ij : prov.at("inputs"))
      r.inputs.push_back({ij.at("role").get<std::string>(), ij.at("name").get<std::string>(),
                          ij.at("sha256").get<std::string>(), ij.at("bytes").get<std::uint64_t>()});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

inline GranularityReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read report " + path);
  ojson j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("report " + path + ": " + e.what());
  }
  return report_from_json(j);
}

// ------------------------------------------------------------------- tables

namespace detail {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string md_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

inline std::string render_table(const Table& t, OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::csv: {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
        os << "\n";
      };
      line(t.header);
      for (const auto& r : t.rows) line(r);
      break;
    }
    case OutputFormat::markdown: {
      auto line = [&](const std::vector<std::string>& cells) {
        os << "|";
        for (const auto& c : cells) os << " " << md_field(c) << " |";
        os << "\n";
      };
      line(t.header);
      os << "|";
      for (std::size_t i = 0; i < t.header.size(); ++i) os << (i == 0 ? " --- |" : " ---: |");
      os << "\n";
      for (const auto& r : t.rows) line(r);
      break;
    }
    default: {
      std::vector<std::size_t> width(t.header.size(), 0);
      for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
      for (const auto& r : t.rows)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (i) os << "  ";
          if (i == 0)
            os << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
          else
            os << std::right << std::setw(static_cast<int>(width[i])) << cells[i];
        }
        os << "\n";
      };
      line(t.header);
      for (const auto& r : t.rows) line(r);
    }
  }
  return os.str();
}

}  // namespace detail

inline std::string render_report(const GranularityReport& r, OutputFormat format, int precision = 4) {
  if (format == OutputFormat::json) return to_json(r, precision).dump(2) + "\n";
  const auto& cm = r.companion;
  std::ostringstream os;
  if (format == OutputFormat::csv) {
    detail::Table t{{"kind", "name", "instances", "n_dp", "value", "exact"}, {}};
    t.rows.push_back({"dataset", r.label, std::to_string(cm.instance_count), "", r.class_granularity.render(precision),
                      r.class_granularity.exact()});
    for (const auto& c : r.classes)
      t.rows.push_back({c.excluded ? "class-excluded" : "class", c.cls, std::to_string(c.instances),
                        std::to_string(c.n_dp), c.idppa.render(precision), c.idppa.exact()});
    return detail::render_table(t, format);
  }
  detail::Table summary{{"Metric", "Value"}, {}};
  summary.rows = {{"Class Granularity", r.class_granularity.render(precision) + " (" + r.class_granularity.exact() + ")"},
                  {"Classes", std::to_string(cm.class_count)},
                  {"Averaged classes", std::to_string(r.averaged_classes)},
                  {"Predicates", std::to_string(cm.predicate_count)},
                  {"Instances", std::to_string(cm.instance_count)},
                  {"Triples", std::to_string(cm.triple_count)},
                  {"Avg. Predicates per Class", cm.avg_predicates_per_class.render(precision)},
                  {"Attribute Richness", cm.attribute_richness.render(precision)},
                  {"Inheritance Richness", cm.inheritance_richness.render(precision)},
                  {"Predicate definitions", r.mode}};
  detail::Table classes{{"Class", "Instances", "Distinct predicates", "IDPPA"}, {}};
  for (const auto& c : r.classes)
    classes.rows.push_back({c.cls + (c.excluded ? " (excluded)" : ""), std::to_string(c.instances),
                            std::to_string(c.n_dp), c.idppa.render(precision)});
  if (format == OutputFormat::markdown) {
    os << "# " << (r.label.empty() ? "Class Granularity report" : r.label) << "\n\n";
    os << detail::render_table(summary, format) << "\n## Classes\n\n" << detail::render_table(classes, format);
  } else {
    os << (r.label.empty() ? "report" : r.label) << "\n\n"
       << detail::render_table(summary, format) << "\n"
       << detail::render_table(classes, format);
  }
  return os.str();
}

/// Drill-down for one class: its distinct predicates and every predicate in use.
inline const ClassRow& class_detail(const GranularityReport& r, std::string_view iri) {
  const std::string key(strip_iri(iri));
  for (const auto& c : r.classes)
    if (c.cls == key) return c;
  throw UnknownClassError("class not in report: " + key);
}

inline std::string render_class_detail(const ClassRow& c, OutputFormat format, int precision = 4) {
  if (format == OutputFormat::json) {
    ojson distinct = ojson::array();
    for (const auto& p : c.distinct)
      distinct.push_back({{"predicate", p.predicate},
                          {"ipp", ratio_json(p.ipp, precision)},
                          {"max_related_ipp", ratio_json(p.max_related_ipp, precision)},
                          {"idpp", ratio_json(p.idpp, precision)}});
    ojson in_use = ojson::array();
    for (const auto& u : c.in_use) in_use.push_back({{"predicate", u.predicate}, {"ipp", ratio_json(u.ipp, precision)}});
    return ojson{{"class", c.cls},
                 {"instances", c.instances},
                 {"idppa", ratio_json(c.idppa, precision)},
                 {"related", c.related},
                 {"distinct_predicates", distinct},
                 {"predicates_in_use", in_use}}
               .dump(2) +
           "\n";
  }
  detail::Table d{{"Distinct predicate", "IPP", "Max related IPP", "IDPP"}, {}};
  for (const auto& p : c.distinct)
    d.rows.push_back({p.predicate, p.ipp.render(precision), p.max_related_ipp.render(precision), p.idpp.render(precision)});
  detail::Table u{{"Predicate in use", "IPP"}, {}};
  for (const auto& x : c.in_use) u.rows.push_back({x.predicate, x.ipp.render(precision)});
  if (format == OutputFormat::csv) return detail::render_table(d, format) + "\n" + detail::render_table(u, format);
  std::ostringstream os;
  os << (format == OutputFormat::markdown ? "## " : "") << c.cls << "\n\n"
     << "instances: " << c.instances << ", IDPPA: " << c.idppa.render(precision) << " (" << c.idppa.exact() << ")\n";
  os << "related: ";
  for (std::size_t i = 0; i < c.related.size(); ++i) os << (i ? ", " : "") << c.related[i];
  os << "\n\n";
  if (c.distinct.empty())
    os << "no distinct predicates\n";
  else
    os << detail::render_table(d, format);
  os << "\n" << detail::render_table(u, format);
  return os.str();
}

// ---------------------------------------------------------------- comparison

struct ComparisonRow {
  std::string label;
  std::uint64_t classes = 0;
  std::uint64_t predicates = 0;
  std::uint64_t instances = 0;
  std::uint64_t triples = 0;
  Ratio avg_predicates_per_class;
  Ratio granularity;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::vector<std::string> footnotes;  // per-dataset metric settings
};

inline std::string metric_settings(const GranularityReport& r) {
  const auto& m = r.config.contains("metrics") ? r.config.at("metrics") : ojson::object();
  return "tie=" + m.value("tie_policy", std::string("?")) + ", empty-class=" + m.value("empty_class", std::string("?")) +
         ", mode=" + r.mode;
}

/// One row per report, in input order. Reports computed under different
/// metric settings are refused unless `force` is set.
inline Comparison compare(const std::vector<GranularityReport>& reports, bool force = false) {
  if (reports.size() < 2) throw UsageError("comparison needs at least two reports");
  Comparison out;
  const auto reference = metric_settings(reports.front());
  std::map<std::string, int> seen;
  for (const auto& r : reports) {
    const auto settings = metric_settings(r);
    if (settings != reference && !force)
      throw UsageError("reports use different metric settings ('" + reference + "' vs '" + settings +
                       "'); pass --force to compare anyway");
    std::string label = r.label.empty() ? "dataset" : r.label;
    if (const int n = ++seen[label]; n > 1) label += " (" + std::to_string(n) + ")";
    const auto& cm = r.companion;
    out.rows.push_back({label, cm.class_count, cm.predicate_count, cm.instance_count, cm.triple_count,
                        cm.avg_predicates_per_class, r.class_granularity});
    out.footnotes.push_back(label + ": " + settings);
  }
  return out;
}

inline std::string render_comparison(const Comparison& c, OutputFormat format, int precision = 4) {
  if (format == OutputFormat::json) {
    ojson rows = ojson::array();
    for (const auto& r : c.rows)
      rows.push_back({{"dataset", r.label},
                      {"classes", r.classes},
                      {"predicates", r.predicates},
                      {"instances", r.instances},
                      {"triples", r.triples},
                      {"avg_predicates_per_class", ratio_json(r.avg_predicates_per_class, precision)},
                      {"granularity", ratio_json(r.granularity, precision)}});
    return ojson{{"rows", rows}, {"settings", c.footnotes}}.dump(2) + "\n";
  }
  detail::Table t{{"Dataset", "Classes", "Predicates", "Instances", "Triples", "Avg. Predicates per Class", "Granularity"}, {}};
  for (const auto& r : c.rows)
    t.rows.push_back({r.label, std::to_string(r.classes), std::to_string(r.predicates), std::to_string(r.instances),
                      std::to_string(r.triples), r.avg_predicates_per_class.render(precision), r.granularity.render(precision)});
  std::string out = detail::render_table(t, format);
  if (format == OutputFormat::csv) return out;
  out += "\n";
  for (std::size_t i = 0; i < c.footnotes.size(); ++i)
    out += (format == OutputFormat::markdown ? "[" + std::to_string(i + 1) + "] " : "* ") + c.footnotes[i] + "\n";
  return out;
}

// --------------------------------------------------------------- stats spill

/// Writes the ingested model (hierarchy, counts, diagnostics) so metrics can
/// be recomputed without re-reading the dumps.
inline void write_stats(const PipelineResult& run, const RunConfig& config, const std::string& path) {
  const TermTable& table = *run.table;
  auto name = [&](TermId id) { return std::string(table.text(id)); };
  const auto& g = run.graph;
  ojson classes = ojson::array(), edges = ojson::array(), declared = ojson::object(), counts = ojson::object();
  std::vector<TermId> ordered(g.classes());
  std::sort(ordered.begin(), ordered.end(), [&](TermId a, TermId b) { return table.text(a) < table.text(b); });
  for (TermId c : ordered) {
    classes.push_back(name(c));
    for (TermId p : g.parents(c)) edges.push_back({name(c), name(p)});
    if (!g.declared_predicates(c).empty()) {
      std::vector<std::string> ps;
      for (TermId p : g.declared_predicates(c)) ps.push_back(name(p));
      std::sort(ps.begin(), ps.end());
      declared[name(c)] = ps;
    }
    counts[name(c)] = run.membership.class_instance_count(c);
  }
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> pc;
  run.stats.for_each_count([&](TermId c, TermId p, std::uint64_t n) { pc.emplace_back(name(c), name(p), n); });
  std::sort(pc.begin(), pc.end());
  ojson pairs = ojson::array();
  for (const auto& [c, p, n] : pc) pairs.push_back({c, p, n});
  std::map<std::string, std::vector<std::string>> induced;
  for (const auto& [c, ps] : run.stats.induced())
    for (TermId p : ps) induced[name(c)].push_back(name(p));
  for (auto& [c, ps] : induced) std::sort(ps.begin(), ps.end());
  ojson inputs = ojson::array();
  for (const auto& d : run.digests)
    inputs.push_back({{"role", d.role}, {"name", d.name}, {"sha256", d.sha256}, {"bytes", d.bytes}});

  const ojson j{{"format", "kgcg-stats"},
                {"version", stats_format_version},
                {"label", config.label},
                {"classes", classes},
                {"edges", edges},
                {"virtual_root", g.virtual_root() ? ojson(name(*g.virtual_root())) : ojson(nullptr)},
                {"declared_predicates", declared},
                {"class_instance_count", counts},
                {"instance_total", run.membership.instance_count()},
                {"with_predicate_count", pairs},
                {"induced_predicates", induced},
                {"counted_triples", run.stats.counted_triples()},
                {"diagnostics", diagnostics_json(run.diagnostics, table)},
                {"inputs", inputs},
                {"config", config_echo(config)}};
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write stats file " + path);
  out << j.dump() << "\n";
}

/// Reloads a stats file and recomputes metrics under `metrics`.
inline PipelineResult read_stats(const std::string& path, const MetricConfig& metrics, ojson* diagnostics = nullptr) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read stats file " + path);
  ojson j;
  try {
    in >> j;
    if (j.at("format") != "kgcg-stats") throw ConfigError(path + " is not a kgcg stats file");
    if (j.at("version").get<int>() != stats_format_version)
      throw ConfigError(path + ": unsupported stats version " + std::to_string(j.at("version").get<int>()));
    PipelineResult out;
    out.table = std::make_shared<TermTable>();
    TermTable& table = *out.table;
    OntologyBuilder builder(Vocabulary{}, table);
    for (const auto& c : j.at("classes")) builder.add_class(table.intern(c.get<std::string>()));
    for (const auto& e : j.at("edges"))
      builder.add_edge(table.intern(e.at(0).get<std::string>()), table.intern(e.at(1).get<std::string>()));
    for (const auto& [c, ps] : j.at("declared_predicates").items())
      for (const auto& p : ps) builder.add_declaration(table.intern(c), table.intern(p.get<std::string>()));
    std::optional<TermId> vroot;
    if (!j.at("virtual_root").is_null()) vroot = table.intern(j.at("virtual_root").get<std::string>());
    out.graph = builder.build(CyclePolicy::reject, std::nullopt, vroot);

    std::unordered_map<TermId, std::uint64_t> counts;
    for (const auto& [c, n] : j.at("class_instance_count").items()) counts[table.intern(c)] = n.get<std::uint64_t>();
    out.membership = MembershipIndex::from_parts({}, std::move(counts), j.at("instance_total").get<std::size_t>(), {});
    for (const auto& e : j.at("with_predicate_count"))
      out.stats.add_count(table.intern(e.at(0).get<std::string>()), table.intern(e.at(1).get<std::string>()),
                          e.at(2).get<std::uint64_t>());
    for (const auto& [c, ps] : j.at("induced_predicates").items())
      for (const auto& p : ps) out.stats.add_induced(table.intern(c), table.intern(p.get<std::string>()));
    out.stats.add_triples(j.at("counted_triples").get<std::uint64_t>());
    for (const auto& ij : j.at("inputs"))
      out.digests.push_back({ij.at("role").get<std::string>(), ij.at("name").get<std::string>(),
                             ij.at("sha256").get<std::string>(), ij.at("bytes").get<std::uint64_t>()});
    if (diagnostics) *diagnostics = j.at("diagnostics");
    out.result = class_granularity(out.graph, out.membership, out.stats, table, metrics);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed stats file " + path + ": " + e.what());
  }
}

}  // namespace kgcg
