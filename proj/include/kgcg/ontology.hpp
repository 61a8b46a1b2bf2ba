#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgcg/error.hpp"
#include "kgcg/intern.hpp"
#include "kgcg/vocab.hpp"

namespace kgcg {

enum class PredicateMode { declared, induced };

inline const char* mode_name(PredicateMode m) { return m == PredicateMode::declared ? "declared" : "induced"; }

/// Predicates used by instances directly typed with each class.
using InducedPredicates = std::unordered_map<TermId, std::vector<TermId>>;

/// A subclass cycle merged into one class node.
struct CollapsedCycle {
  TermId representative;
  std::vector<TermId> members;  // includes the representative
};

/// Immutable class hierarchy. Edges run child -> parent and are acyclic.
class OntologyGraph {
 public:
  const std::vector<TermId>& classes() const { return classes_; }
  std::size_t class_count() const { return classes_.size(); }
  bool is_class(TermId id) const { return index_.contains(id); }

  // Maps a class or a collapsed-cycle member to its class node.
  std::optional<TermId> resolve(TermId id) const {
    if (is_class(id)) return id;
    if (auto it = alias_.find(id); it != alias_.end()) return it->second;
    return std::nullopt;
  }

  const std::vector<TermId>& parents(TermId c) const { return parents_[at(c)]; }
  const std::vector<TermId>& children(TermId c) const { return children_[at(c)]; }
  const std::vector<TermId>& ancestors_or_self(TermId c) const { return ancestors_[at(c)]; }
  const std::vector<TermId>& declared_predicates(TermId c) const { return declared_[at(c)]; }

  const std::vector<TermId>& roots() const { return roots_; }
  bool is_root(TermId c) const { return parents(c).empty(); }
  std::optional<TermId> virtual_root() const { return virtual_root_; }

  std::size_t edge_count() const { return edge_count_; }
  bool has_declarations() const {
    return std::any_of(declared_.begin(), declared_.end(), [](const auto& v) { return !v.empty(); });
  }
  const std::vector<CollapsedCycle>& collapsed_cycles() const { return collapsed_; }

  // Dense position of a class in classes(); useful for per-class arrays.
  std::size_t index_of(TermId c) const { return at(c); }

 private:
  friend class OntologyBuilder;

  std::size_t at(TermId c) const {
    auto it = index_.find(c);
    if (it == index_.end()) throw UnknownClassError("unknown class id " + std::to_string(c.value));
    return it->second;
  }

  std::vector<TermId> classes_;
  std::unordered_map<TermId, std::size_t> index_;
  std::unordered_map<TermId, TermId> alias_;
  std::vector<std::vector<TermId>> parents_;
  std::vector<std::vector<TermId>> children_;
  std::vector<std::vector<TermId>> ancestors_;
  std::vector<std::vector<TermId>> declared_;
  std::vector<TermId> roots_;
  std::optional<TermId> virtual_root_;
  std::size_t edge_count_ = 0;
  std::vector<CollapsedCycle> collapsed_;
};

/// Sequential fold of schema triples into an OntologyGraph.
///
/// Classes are every subject/object of a subclass triple, every subject of
/// `X instance-of <class marker>`, every non-marker object of an instance-of
/// triple and every object of a domain triple. `p domain C` declares p on C.
class OntologyBuilder {
 public:
  OntologyBuilder(const Vocabulary& vocab, const TermTable& table) : vocab_(vocab), table_(table) {}

  void add(const Triple& t) {
    if (vocab_.is_subclass_of(t.predicate)) {
      if (!is_iri(t.subject) || !is_iri(t.object)) return;
      note_class(t.subject);
      note_class(t.object);
      edges_.emplace_back(t.subject, t.object);
    } else if (vocab_.is_instance_of(t.predicate)) {
      if (vocab_.is_class_marker(t.object)) {
        if (is_iri(t.subject)) note_class(t.subject);
      } else if (!vocab_.is_property_marker(t.object) && is_iri(t.object)) {
        note_class(t.object);
      }
    } else if (vocab_.is_domain(t.predicate)) {
      if (!is_iri(t.object) || !is_iri(t.subject)) return;
      note_class(t.object);
      declarations_.emplace_back(t.object, t.subject);
    }
  }

  // Direct construction, bypassing vocabulary classification.
  void add_class(TermId c) { note_class(c); }
  void add_edge(TermId child, TermId parent) {
    note_class(child);
    note_class(parent);
    edges_.emplace_back(child, parent);
  }
  void add_declaration(TermId cls, TermId predicate) {
    note_class(cls);
    declarations_.emplace_back(cls, predicate);
  }

  /// Finishes the graph. `root` pins a root class; `virtual_root` names the
  /// class injected above multiple roots. Both are canonical tokens.
  OntologyGraph build(CyclePolicy policy, std::optional<TermId> root = std::nullopt,
                      std::optional<TermId> virtual_root = std::nullopt) {
    OntologyGraph g;
    if (root) note_class(*root);

    // Dense indexing in first-seen order.
    const std::size_t n = seen_order_.size();
    std::unordered_map<TermId, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos.emplace(seen_order_[i], i);

    std::vector<std::vector<std::size_t>> out(n);
    bool self_loop = false;
    std::size_t self_loop_at = 0;
    for (auto [child, parent] : edges_) {
      const auto c = pos.at(child), p = pos.at(parent);
      if (c == p) {
        if (!self_loop) self_loop_at = c;
        self_loop = true;
        continue;
      }
      out[c].push_back(p);
    }

    const auto comp = strongly_connected(out);
    std::size_t n_comp = 0;
    for (auto c : comp) n_comp = std::max(n_comp, c + 1);
    std::vector<std::vector<std::size_t>> members(n_comp);
    for (std::size_t i = 0; i < n; ++i) members[comp[i]].push_back(i);

    for (const auto& m : members) {
      if (m.size() > 1 && policy == CyclePolicy::reject) throw CycleError("subclass cycle: " + describe_cycle(m, out));
    }
    if (self_loop && policy == CyclePolicy::reject)
      throw CycleError("subclass cycle: " + std::string(table_.text(seen_order_[self_loop_at])) + " -> itself");

    // One node per component, represented by its smallest canonical text.
    std::vector<TermId> rep(n_comp);
    for (std::size_t k = 0; k < n_comp; ++k) {
      const auto& m = members[k];
      TermId best = seen_order_[m.front()];
      for (auto i : m)
        if (table_.text(seen_order_[i]) < table_.text(best)) best = seen_order_[i];
      rep[k] = best;
      if (m.size() > 1) {
        CollapsedCycle cc{best, {}};
        for (auto i : m) {
          cc.members.push_back(seen_order_[i]);
          if (seen_order_[i] != best) g.alias_.emplace(seen_order_[i], best);
        }
        std::sort(cc.members.begin(), cc.members.end(),
                  [&](TermId a, TermId b) { return table_.text(a) < table_.text(b); });
        g.collapsed_.push_back(std::move(cc));
      }
    }
    std::sort(g.collapsed_.begin(), g.collapsed_.end(), [&](const auto& a, const auto& b) {
      return table_.text(a.representative) < table_.text(b.representative);
    });

    for (std::size_t i = 0; i < n; ++i)
      if (rep[comp[i]] == seen_order_[i]) add_node(g, seen_order_[i]);

    std::vector<std::pair<TermId, TermId>> edges;
    for (std::size_t c = 0; c < n; ++c)
      for (auto p : out[c])
        if (comp[c] != comp[p]) edges.emplace_back(rep[comp[c]], rep[comp[p]]);

    // Pinned root adopts every other parentless class.
    auto parentless = [&](const std::vector<std::pair<TermId, TermId>>& es) {
      std::unordered_set<TermId> has_parent;
      for (auto [c, p] : es) has_parent.insert(c);
      std::vector<TermId> r;
      for (TermId c : g.classes_)
        if (!has_parent.contains(c)) r.push_back(c);
      return r;
    };
    if (root) {
      const TermId pinned = rep[comp[pos.at(*root)]];
      for (TermId c : parentless(edges))
        if (c != pinned) edges.emplace_back(c, pinned);
    }

    if (virtual_root) {
      const auto roots = parentless(edges);
      const bool already_root = g.index_.contains(*virtual_root) &&
                                std::find(roots.begin(), roots.end(), *virtual_root) != roots.end();
      if (already_root) {
        g.virtual_root_ = *virtual_root;
      } else if (roots.size() > 1 && !g.index_.contains(*virtual_root)) {
        add_node(g, *virtual_root);
        for (TermId r : roots) edges.emplace_back(r, *virtual_root);
        g.virtual_root_ = *virtual_root;
      }
    }

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edge_count_ = edges.size();
    g.parents_.assign(g.classes_.size(), {});
    g.children_.assign(g.classes_.size(), {});
    for (auto [c, p] : edges) {
      g.parents_[g.index_.at(c)].push_back(p);
      g.children_[g.index_.at(p)].push_back(c);
    }

    g.declared_.assign(g.classes_.size(), {});
    for (auto [cls, pred] : declarations_) {
      const TermId node = g.alias_.contains(cls) ? g.alias_.at(cls) : cls;
      g.declared_[g.index_.at(node)].push_back(pred);
    }
    for (auto& d : g.declared_) {
      std::sort(d.begin(), d.end());
      d.erase(std::unique(d.begin(), d.end()), d.end());
    }

    for (TermId c : g.classes_)
      if (g.parents_[g.index_.at(c)].empty()) g.roots_.push_back(c);
    compute_ancestors(g);
    return g;
  }

 private:
  bool is_iri(TermId id) const { return kind_of_canonical(table_.text(id)) == TermKind::iri; }

  void note_class(TermId c) {
    if (seen_.insert(c).second) seen_order_.push_back(c);
  }

  static void add_node(OntologyGraph& g, TermId c) {
    g.index_.emplace(c, g.classes_.size());
    g.classes_.push_back(c);
  }

  // Iterative Tarjan; returns component id per node.
  static std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& out) {
    const std::size_t n = out.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, n_comp = 0;
    std::vector<std::pair<std::size_t, std::size_t>> frames;  // (node, next edge)
    for (std::size_t s = 0; s < n; ++s) {
      if (index[s] != unvisited) continue;
      frames.emplace_back(s, 0);
      index[s] = low[s] = counter++;
      stack.push_back(s);
      on_stack[s] = true;
      while (!frames.empty()) {
        auto& [v, e] = frames.back();
        if (e < out[v].size()) {
          const std::size_t w = out[v][e++];
          if (index[w] == unvisited) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = true;
            frames.emplace_back(w, 0);
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        if (low[v] == index[v]) {
          std::size_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = n_comp;
          } while (w != v);
          ++n_comp;
        }
        const std::size_t done = v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      }
    }
    return comp;
  }

  // Walks edges inside one component until a node repeats.
  std::string describe_cycle(const std::vector<std::size_t>& component,
                             const std::vector<std::vector<std::size_t>>& out) const {
    std::unordered_set<std::size_t> in(component.begin(), component.end());
    std::vector<std::size_t> path{component.front()};
    std::unordered_map<std::size_t, std::size_t> at;
    at[component.front()] = 0;
    while (true) {
      std::size_t next = path.back();
      for (auto w : out[path.back()])
        if (in.contains(w)) {
          next = w;
          break;
        }
      if (auto it = at.find(next); it != at.end()) {
        std::string s;
        for (std::size_t i = it->second; i < path.size(); ++i) {
          s += table_.text(seen_order_[path[i]]);
          s += " -> ";
        }
        s += table_.text(seen_order_[next]);
        return s;
      }
      at[next] = path.size();
      path.push_back(next);
    }
  }

  static void compute_ancestors(OntologyGraph& g) {
    const std::size_t n = g.classes_.size();
    g.ancestors_.assign(n, {});
    // Kahn order from roots downward so parents are finished first.
    std::vector<std::size_t> pending(n);
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
      pending[i] = g.parents_[i].size();
      if (pending[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
      const std::size_t i = ready.back();
      ready.pop_back();
      auto& anc = g.ancestors_[i];
      anc.push_back(g.classes_[i]);
      for (TermId p : g.parents_[i]) {
        const auto& pa = g.ancestors_[g.index_.at(p)];
        anc.insert(anc.end(), pa.begin(), pa.end());
      }
      std::sort(anc.begin(), anc.end());
      anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
      for (TermId c : g.children_[i]) {
        const std::size_t ci = g.index_.at(c);
        if (--pending[ci] == 0) ready.push_back(ci);
      }
    }
  }

  Vocabulary vocab_;
  const TermTable& table_;
  std::unordered_set<TermId> seen_;
  std::vector<TermId> seen_order_;
  std::vector<std::pair<TermId, TermId>> edges_;
  std::vector<std::pair<TermId, TermId>> declarations_;
};

/// Builds a graph from an in-memory triple range.
template <typename Range>
OntologyGraph build_hierarchy(const Range& triples, const HierarchyConfig& config, TermTable& table) {
  const Vocabulary vocab = resolve_vocabulary(config, table);
  std::optional<TermId> root, vroot;
  if (config.root) root = table.intern(iri_token(*config.root));
  if (config.virtual_root) vroot = table.intern(iri_token(*config.virtual_root));
  OntologyBuilder builder(vocab, table);
  for (const Triple& t : triples) builder.add(t);
  return builder.build(config.cycle_policy, root, vroot);
}

struct RelatedClassSet {
  TermId owner;
  std::vector<TermId> members;  // sorted by id
};

/// Direct parents of `cls` plus every class sharing one of those parents.
inline RelatedClassSet related_classes(const OntologyGraph& graph, TermId cls) {
  if (!graph.is_class(cls)) throw UnknownClassError("unknown class id " + std::to_string(cls.value));
  if (graph.is_root(cls)) throw ModelError("related classes are undefined for a root class");
  RelatedClassSet r{cls, {}};
  for (TermId p : graph.parents(cls)) {
    r.members.push_back(p);
    for (TermId sibling : graph.children(p))
      if (sibling != cls) r.members.push_back(sibling);
  }
  std::sort(r.members.begin(), r.members.end());
  r.members.erase(std::unique(r.members.begin(), r.members.end()), r.members.end());
  return r;
}

/// Declared mode: the ontology's declarations. Induced mode: predicates used
/// by instances directly typed with `cls`.
inline const std::vector<TermId>& defined_predicates(const OntologyGraph& graph, TermId cls, PredicateMode mode,
                                                     const InducedPredicates* induced) {
  static const std::vector<TermId> none;
  if (!graph.is_class(cls)) throw UnknownClassError("unknown class id " + std::to_string(cls.value));
  if (mode == PredicateMode::declared) return graph.declared_predicates(cls);
  if (!induced) throw ModelError("induced predicate definitions need instance statistics");
  auto it = induced->find(cls);
  return it == induced->end() ? none : it->second;
}

struct DistinctPredicateSet {
  TermId owner;
  std::vector<TermId> predicates;  // sorted by id
};

inline DistinctPredicateSet distinct_predicates(const OntologyGraph& graph, TermId cls, PredicateMode mode,
                                                const InducedPredicates* induced) {
  const auto related = related_classes(graph, cls);
  std::unordered_set<TermId> taken;
  for (TermId r : related.members)
    for (TermId p : defined_predicates(graph, r, mode, induced)) taken.insert(p);
  DistinctPredicateSet d{cls, {}};
  for (TermId p : defined_predicates(graph, cls, mode, induced))
    if (!taken.contains(p)) d.predicates.push_back(p);
  std::sort(d.predicates.begin(), d.predicates.end());
  return d;
}

}  // namespace kgcg
