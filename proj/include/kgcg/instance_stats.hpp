#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgcg/error.hpp"
#include "kgcg/intern.hpp"
#include "kgcg/ontology.hpp"
#include "kgcg/ratio.hpp"
#include "kgcg/vocab.hpp"

namespace kgcg {

struct MembershipDiagnostics {
  std::uint64_t type_assertions = 0;          // instance-of triples seen
  std::uint64_t unknown_class_assertions = 0;  // ... whose object is not an ontology class
  std::uint64_t dropped_instances = 0;         // typed subjects with no ontology class
  std::uint64_t unknown_classes = 0;           // distinct non-ontology type objects
};

/// Instance -> direct classes, and per-class sizes of transitive extensions.
class MembershipIndex {
 public:
  bool is_instance(TermId id) const { return direct_.contains(id); }
  std::size_t instance_count() const { return total_; }

  const std::vector<TermId>& direct_types(TermId instance) const {
    static const std::vector<TermId> none;
    auto it = direct_.find(instance);
    return it == direct_.end() ? none : it->second;
  }

  // Distinct instances in the class's transitive extension.
  std::uint64_t class_instance_count(TermId cls) const {
    auto it = counts_.find(cls);
    return it == counts_.end() ? 0 : it->second;
  }
  const std::unordered_map<TermId, std::uint64_t>& class_counts() const { return counts_; }
  const std::unordered_map<TermId, std::vector<TermId>>& direct_map() const { return direct_; }

  /// Union of ancestors-or-self over the instance's direct types, sorted.
  std::vector<TermId> transitive_classes(TermId instance, const OntologyGraph& graph) const {
    std::vector<TermId> out;
    for (TermId c : direct_types(instance)) {
      const auto& anc = graph.ancestors_or_self(c);
      out.insert(out.end(), anc.begin(), anc.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  const MembershipDiagnostics& diagnostics() const { return diag_; }

  // Rebuilds an index from its parts (used when loading spilled stats).
  // The per-instance map may be empty here; counts then stand alone.
  static MembershipIndex from_parts(std::unordered_map<TermId, std::vector<TermId>> direct,
                                    std::unordered_map<TermId, std::uint64_t> counts, std::size_t total,
                                    MembershipDiagnostics diag) {
    MembershipIndex m;
    m.direct_ = std::move(direct);
    m.counts_ = std::move(counts);
    m.total_ = total;
    m.diag_ = diag;
    return m;
  }

 private:
  friend class MembershipBuilder;
  std::unordered_map<TermId, std::vector<TermId>> direct_;
  std::unordered_map<TermId, std::uint64_t> counts_;
  std::size_t total_ = 0;
  MembershipDiagnostics diag_;
};

/// Pass 1: collects instance-of assertions whose object is an ontology class.
class MembershipBuilder {
 public:
  MembershipBuilder(const OntologyGraph& graph, const Vocabulary& vocab) : graph_(graph), vocab_(vocab) {}

  void add(const Triple& t) {
    if (!vocab_.is_instance_of(t.predicate)) return;
    if (vocab_.is_class_marker(t.object) || vocab_.is_property_marker(t.object)) return;
    ++diag_.type_assertions;
    typed_.insert(t.subject);
    if (auto cls = graph_.resolve(t.object)) {
      direct_[t.subject].push_back(*cls);
    } else {
      ++diag_.unknown_class_assertions;
      unknown_.insert(t.object);
    }
  }

  /// Absorbs a builder that saw a disjoint set of subjects.
  void merge(MembershipBuilder&& other) {
    for (auto& [instance, types] : other.direct_) {
      auto& mine = direct_[instance];
      mine.insert(mine.end(), types.begin(), types.end());
    }
    typed_.merge(other.typed_);
    unknown_.merge(other.unknown_);
    diag_.type_assertions += other.diag_.type_assertions;
    diag_.unknown_class_assertions += other.diag_.unknown_class_assertions;
  }

  MembershipIndex build() && {
    MembershipIndex m;
    std::vector<std::uint32_t> stamp(graph_.class_count(), 0);
    std::uint32_t epoch = 0;
    std::vector<std::uint64_t> counts(graph_.class_count(), 0);
    for (auto& [instance, types] : direct_) {
      std::sort(types.begin(), types.end());
      types.erase(std::unique(types.begin(), types.end()), types.end());
      ++epoch;
      for (TermId c : types)
        for (TermId a : graph_.ancestors_or_self(c)) {
          const auto i = graph_.index_of(a);
          if (stamp[i] != epoch) {
            stamp[i] = epoch;
            ++counts[i];
          }
        }
    }
    for (std::size_t i = 0; i < counts.size(); ++i) m.counts_.emplace(graph_.classes()[i], counts[i]);
    diag_.dropped_instances = typed_.size() - direct_.size();
    diag_.unknown_classes = unknown_.size();
    m.total_ = direct_.size();
    m.direct_ = std::move(direct_);
    m.diag_ = diag_;
    return m;
  }

 private:
  const OntologyGraph& graph_;
  Vocabulary vocab_;
  std::unordered_map<TermId, std::vector<TermId>> direct_;
  std::unordered_set<TermId> typed_;
  std::unordered_set<TermId> unknown_;
  MembershipDiagnostics diag_;
};

template <typename Range>
MembershipIndex build_membership(const Range& triples, const OntologyGraph& graph, const Vocabulary& vocab) {
  MembershipBuilder b(graph, vocab);
  for (const Triple& t : triples) b.add(t);
  return std::move(b).build();
}

/// Per (class, predicate): distinct instances of the class's transitive
/// extension that use the predicate in subject position.
class ClassPredicateStats {
 public:
  std::uint64_t with_predicate_count(TermId cls, TermId predicate) const {
    auto it = counts_.find(key(cls, predicate));
    return it == counts_.end() ? 0 : it->second;
  }

  // Predicates with a nonzero count for the class, sorted by id.
  const std::vector<TermId>& all_predicates(TermId cls) const {
    static const std::vector<TermId> none;
    auto it = all_.find(cls);
    return it == all_.end() ? none : it->second;
  }

  const InducedPredicates& induced() const { return induced_; }

  // Triples with a kept-instance subject, instance-of triples excluded.
  std::uint64_t counted_triples() const { return triples_; }

  std::vector<TermId> predicates_in_use() const {
    std::unordered_set<TermId> s;
    for (const auto& [cls, ps] : all_) s.insert(ps.begin(), ps.end());
    std::vector<TermId> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    return v;
  }

  template <typename F>
  void for_each_count(F&& f) const {
    for (const auto& [k, n] : counts_) f(TermId{static_cast<std::uint32_t>(k >> 32)}, TermId{static_cast<std::uint32_t>(k)}, n);
  }

  void add_count(TermId cls, TermId predicate, std::uint64_t n) {
    if (n == 0) return;
    auto& slot = counts_[key(cls, predicate)];
    if (slot == 0) insert_sorted(all_[cls], predicate);
    slot += n;
  }

  void add_induced(TermId cls, TermId predicate) { insert_sorted(induced_[cls], predicate); }
  void add_triples(std::uint64_t n) { triples_ += n; }

  /// Merges counters from a disjoint shard by addition.
  void merge(const ClassPredicateStats& other) {
    for (const auto& [k, n] : other.counts_)
      add_count(TermId{static_cast<std::uint32_t>(k >> 32)}, TermId{static_cast<std::uint32_t>(k)}, n);
    for (const auto& [cls, ps] : other.induced_)
      for (TermId p : ps) add_induced(cls, p);
    triples_ += other.triples_;
  }

 private:
  static std::uint64_t key(TermId c, TermId p) { return (static_cast<std::uint64_t>(c.value) << 32) | p.value; }

  static void insert_sorted(std::vector<TermId>& v, TermId p) {
    auto it = std::lower_bound(v.begin(), v.end(), p);
    if (it == v.end() || *it != p) v.insert(it, p);
  }

  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
  std::unordered_map<TermId, std::vector<TermId>> all_;
  InducedPredicates induced_;
  std::uint64_t triples_ = 0;
};

enum class Grouping {
  unsorted,         // per-instance predicate sets, folded at finish()
  subject_grouped,  // eager fold on subject change; input must be grouped
};

/// Pass 2: folds each kept instance's predicate set into all classes of its
/// transitive extension, once per (class, predicate).
class PredicateStatsBuilder {
 public:
  PredicateStatsBuilder(const OntologyGraph& graph, const MembershipIndex& membership, const Vocabulary& vocab,
                        Grouping grouping = Grouping::unsorted)
      : graph_(graph), membership_(membership), vocab_(vocab), grouping_(grouping) {}

  void add(const Triple& t) {
    if (vocab_.is_instance_of(t.predicate)) return;
    if (!membership_.is_instance(t.subject)) return;
    stats_.add_triples(1);
    if (grouping_ == Grouping::unsorted) {
      auto& preds = pending_[t.subject];
      auto it = std::lower_bound(preds.begin(), preds.end(), t.predicate);
      if (it == preds.end() || *it != t.predicate) preds.insert(it, t.predicate);
      return;
    }
    if (!current_ || *current_ != t.subject) {
      flush_current();
      if (!folded_.insert(t.subject).second)
        throw ModelError("input is not grouped by subject (subject id " + std::to_string(t.subject.value) +
                         " reappeared)");
      current_ = t.subject;
    }
    auto it = std::lower_bound(current_preds_.begin(), current_preds_.end(), t.predicate);
    if (it == current_preds_.end() || *it != t.predicate) current_preds_.insert(it, t.predicate);
  }

  ClassPredicateStats finish() && {
    if (grouping_ == Grouping::unsorted) {
      for (const auto& [instance, preds] : pending_) fold(instance, preds);
      pending_.clear();
    } else {
      flush_current();
    }
    return std::move(stats_);
  }

 private:
  void flush_current() {
    if (current_) fold(*current_, current_preds_);
    current_preds_.clear();
    current_.reset();
  }

  void fold(TermId instance, const std::vector<TermId>& preds) {
    for (TermId c : membership_.transitive_classes(instance, graph_))
      for (TermId p : preds) stats_.add_count(c, p, 1);
    for (TermId c : membership_.direct_types(instance))
      for (TermId p : preds) stats_.add_induced(c, p);
  }

  const OntologyGraph& graph_;
  const MembershipIndex& membership_;
  Vocabulary vocab_;
  Grouping grouping_;
  ClassPredicateStats stats_;
  std::unordered_map<TermId, std::vector<TermId>> pending_;
  std::optional<TermId> current_;
  std::vector<TermId> current_preds_;
  std::unordered_set<TermId> folded_;
};

template <typename Range>
ClassPredicateStats build_predicate_stats(const Range& triples, const MembershipIndex& membership,
                                          const OntologyGraph& graph, const Vocabulary& vocab,
                                          Grouping grouping = Grouping::unsorted) {
  PredicateStatsBuilder b(graph, membership, vocab, grouping);
  for (const Triple& t : triples) b.add(t);
  return std::move(b).finish();
}

/// Fraction of the class's instances using `predicate`.
inline Ratio ipp(const ClassPredicateStats& stats, const MembershipIndex& membership, TermId cls, TermId predicate) {
  const auto n = membership.class_instance_count(cls);
  if (n == 0) throw EmptyClassError("class id " + std::to_string(cls.value) + " has no instances");
  return Ratio(stats.with_predicate_count(cls, predicate), n);
}

}  // namespace kgcg
