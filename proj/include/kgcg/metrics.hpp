#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgcg/error.hpp"
#include "kgcg/instance_stats.hpp"
#include "kgcg/intern.hpp"
#include "kgcg/ontology.hpp"
#include "kgcg/ratio.hpp"

namespace kgcg {

// keep: a distinct predicate survives when no related class has a higher
// ratio (ties keep). zero: it survives only when strictly higher than all.
enum class TiePolicy { keep_on_tie, zero_on_tie };
enum class EmptyClassPolicy { idppa_zero, exclude_from_average };

inline const char* tie_policy_name(TiePolicy p) { return p == TiePolicy::keep_on_tie ? "keep" : "zero"; }
inline const char* empty_class_policy_name(EmptyClassPolicy p) {
  return p == EmptyClassPolicy::idppa_zero ? "idppa-zero" : "exclude";
}

struct MetricConfig {
  TiePolicy tie_policy = TiePolicy::keep_on_tie;
  EmptyClassPolicy empty_class_policy = EmptyClassPolicy::idppa_zero;
  // Unset: declared when the ontology declares any predicate, else induced.
  std::optional<PredicateMode> predicate_mode;

  PredicateMode resolve_mode(const OntologyGraph& graph) const {
    if (predicate_mode) return *predicate_mode;
    return graph.has_declarations() ? PredicateMode::declared : PredicateMode::induced;
  }
};

struct PredicateResult {
  TermId predicate;
  Ratio ipp;
  Ratio max_related_ipp;
  Ratio idpp;
};

struct ClassResult {
  TermId cls;
  std::uint64_t instances = 0;
  std::size_t n_dp = 0;
  std::vector<PredicateResult> per_predicate;  // sorted by predicate text
  Ratio idppa;
  bool excluded = false;  // empty class dropped under exclude-from-average
};

struct CompanionMetrics {
  Ratio attribute_richness;
  Ratio inheritance_richness;
  std::uint64_t class_count = 0;
  std::uint64_t predicate_count = 0;
  std::uint64_t instance_count = 0;
  std::uint64_t triple_count = 0;
  Ratio avg_predicates_per_class;
};

struct DatasetResult {
  Ratio class_granularity;
  std::uint64_t n_classes = 0;
  std::uint64_t averaged_classes = 0;  // divisor actually used
  PredicateMode mode = PredicateMode::declared;
  std::vector<ClassResult> class_results;  // non-root classes, sorted by IRI
  CompanionMetrics companion;
};

/// A distinct predicate's ratio, or zero when a related class outranks it.
inline Ratio idpp(const Ratio& ipp_class, const Ratio& max_related_ipp, const MetricConfig& config) {
  const bool keep = config.tie_policy == TiePolicy::keep_on_tie ? max_related_ipp <= ipp_class
                                                                 : ipp_class > max_related_ipp;
  return keep ? ipp_class : Ratio::zero();
}

/// Mean of the per-predicate values; exactly zero when there are none.
inline Ratio idppa(std::span<const Ratio> idpps, std::size_t n_dp) {
  if (idpps.size() != n_dp) throw MetricError("idppa: expected " + std::to_string(n_dp) + " values");
  if (n_dp == 0) return Ratio::zero();
  Ratio sum;
  for (const auto& r : idpps) sum += r;
  return sum.divided_by(n_dp);
}

namespace detail {

// IPP, with empty classes treated as ratio 0 (they show no usage).
inline Ratio ipp_or_zero(const ClassPredicateStats& stats, const MembershipIndex& m, TermId cls, TermId p) {
  const auto n = m.class_instance_count(cls);
  return n == 0 ? Ratio::zero() : Ratio(stats.with_predicate_count(cls, p), n);
}

inline void check_consistent(const OntologyGraph& graph, const MembershipIndex& membership,
                             const ClassPredicateStats& stats) {
  stats.for_each_count([&](TermId cls, TermId, std::uint64_t n) {
    if (!graph.is_class(cls))
      throw MetricError("inconsistent inputs: statistics name class id " + std::to_string(cls.value) +
                        " unknown to the ontology");
    if (n > membership.class_instance_count(cls))
      throw MetricError("inconsistent inputs: class id " + std::to_string(cls.value) +
                        " has more instances with a predicate than instances");
  });
  for (const auto& [cls, n] : membership.class_counts())
    if (!graph.is_class(cls))
      throw MetricError("inconsistent inputs: membership names class id " + std::to_string(cls.value) +
                        " unknown to the ontology");
  for (const auto& [instance, types] : membership.direct_map())
    for (TermId c : types)
      if (!graph.is_class(c))
        throw MetricError("inconsistent inputs: instance typed with unknown class id " + std::to_string(c.value));
}

}  // namespace detail

inline ClassResult evaluate_class(const OntologyGraph& graph, const MembershipIndex& membership,
                                  const ClassPredicateStats& stats, const TermTable& table, TermId cls,
                                  PredicateMode mode, const MetricConfig& config) {
  ClassResult r;
  r.cls = cls;
  r.instances = membership.class_instance_count(cls);
  const auto related = related_classes(graph, cls);
  const auto distinct = distinct_predicates(graph, cls, mode, &stats.induced());
  r.n_dp = distinct.predicates.size();
  std::vector<Ratio> values;
  for (TermId p : distinct.predicates) {
    PredicateResult pr{p, detail::ipp_or_zero(stats, membership, cls, p), Ratio::zero(), Ratio::zero()};
    for (TermId rc : related.members) pr.max_related_ipp = std::max(pr.max_related_ipp, detail::ipp_or_zero(stats, membership, rc, p));
    pr.idpp = idpp(pr.ipp, pr.max_related_ipp, config);
    values.push_back(pr.idpp);
    r.per_predicate.push_back(std::move(pr));
  }
  r.idppa = idppa(values, r.n_dp);
  r.excluded = r.instances == 0 && config.empty_class_policy == EmptyClassPolicy::exclude_from_average;
  std::sort(r.per_predicate.begin(), r.per_predicate.end(), [&](const auto& a, const auto& b) {
    return table.text(a.predicate) < table.text(b.predicate);
  });
  return r;
}

inline Ratio attribute_richness(const OntologyGraph& graph, PredicateMode mode, const ClassPredicateStats& stats) {
  if (graph.class_count() == 0) throw MetricError("attribute richness of an empty ontology");
  std::uint64_t total = 0;
  for (TermId c : graph.classes()) total += defined_predicates(graph, c, mode, &stats.induced()).size();
  return Ratio(total, graph.class_count());
}

inline Ratio inheritance_richness(const OntologyGraph& graph) {
  if (graph.class_count() == 0) throw MetricError("inheritance richness of an empty ontology");
  return Ratio(graph.edge_count(), graph.class_count());
}

inline CompanionMetrics basic_stats(const OntologyGraph& graph, const MembershipIndex& membership,
                                    const ClassPredicateStats& stats, std::uint64_t triple_count) {
  CompanionMetrics c;
  c.class_count = graph.class_count();
  c.predicate_count = stats.predicates_in_use().size();
  c.instance_count = membership.instance_count();
  c.triple_count = triple_count;
  c.avg_predicates_per_class = c.class_count == 0 ? Ratio::zero() : Ratio(c.predicate_count, c.class_count);
  return c;
}

/// IDPPA averaged over every non-root class. Roots (including a virtual
/// root) are excluded; with no non-root class the result is 0.
inline DatasetResult class_granularity(const OntologyGraph& graph, const MembershipIndex& membership,
                                       const ClassPredicateStats& stats, const TermTable& table,
                                       const MetricConfig& config) {
  detail::check_consistent(graph, membership, stats);
  DatasetResult out;
  out.mode = config.resolve_mode(graph);
  out.n_classes = graph.class_count();

  std::vector<TermId> ordered(graph.classes());
  std::sort(ordered.begin(), ordered.end(), [&](TermId a, TermId b) { return table.text(a) < table.text(b); });

  Ratio total;
  for (TermId c : ordered) {
    if (graph.is_root(c)) continue;
    auto r = evaluate_class(graph, membership, stats, table, c, out.mode, config);
    if (!r.excluded) {
      total += r.idppa;
      ++out.averaged_classes;
    }
    out.class_results.push_back(std::move(r));
  }
  out.class_granularity = out.averaged_classes == 0 ? Ratio::zero() : total.divided_by(out.averaged_classes);

  out.companion = basic_stats(graph, membership, stats, stats.counted_triples());
  if (graph.class_count() > 0) {
    out.companion.attribute_richness = attribute_richness(graph, out.mode, stats);
    out.companion.inheritance_richness = inheritance_richness(graph);
  }
  return out;
}

}  // namespace kgcg
