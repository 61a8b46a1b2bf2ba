#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <bitset>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgcg/error.hpp"
#include "kgcg/intern.hpp"
#include "kgcg/vocab.hpp"

namespace kgcg {

struct AdapterRule {
  enum class Kind { drop_empty_object, drop_unicode_class_names, reverse_predicate, rename_predicate, inject_virtual_root };

  Kind kind = Kind::drop_empty_object;
  std::string from;  // reverse/rename: predicate IRI matched
  std::string to;    // reverse/rename: replacement predicate IRI
  std::string root;  // inject-virtual-root: root class IRI
  // drop-unicode-class-names: inclusive byte ranges allowed in class IRIs.
  std::vector<std::pair<unsigned, unsigned>> allowed{{0x21, 0x7E}};

  static AdapterRule of(Kind kind) {
    AdapterRule r;
    r.kind = kind;
    return r;
  }
  static AdapterRule drop_empty_object() { return of(Kind::drop_empty_object); }
  static AdapterRule drop_unicode_class_names() { return of(Kind::drop_unicode_class_names); }
  static AdapterRule reverse_predicate(std::string from, std::string to) {
    AdapterRule r = of(Kind::reverse_predicate);
    r.from = std::move(from);
    r.to = std::move(to);
    return r;
  }
  static AdapterRule rename_predicate(std::string from, std::string to) {
    AdapterRule r = of(Kind::rename_predicate);
    r.from = std::move(from);
    r.to = std::move(to);
    return r;
  }
  static AdapterRule inject_virtual_root(std::string root) {
    AdapterRule r = of(Kind::inject_virtual_root);
    r.root = std::move(root);
    return r;
  }
};

/// Ordered normalization rules for one dataset's dump quirks.
struct AdapterSpec {
  std::string name = "identity";
  std::vector<AdapterRule> rules;
  // Instance-of predicates the adapter's output uses, if it differs from
  // the hierarchy default (freebase rewrites typing to type.object.type).
  std::vector<std::string> instance_of;

  std::optional<std::string> virtual_root() const {
    for (const auto& r : rules)
      if (r.kind == AdapterRule::Kind::inject_virtual_root) return r.root;
    return std::nullopt;
  }
};

inline const char* rule_kind_name(AdapterRule::Kind k) {
  switch (k) {
    case AdapterRule::Kind::drop_empty_object: return "drop-empty-object";
    case AdapterRule::Kind::drop_unicode_class_names: return "drop-unicode-class-names";
    case AdapterRule::Kind::reverse_predicate: return "reverse-predicate";
    case AdapterRule::Kind::rename_predicate: return "rename-predicate";
    case AdapterRule::Kind::inject_virtual_root: return "inject-virtual-root";
  }
  return "?";
}

inline AdapterRule::Kind parse_rule_kind(const std::string& s) {
  for (auto k : {AdapterRule::Kind::drop_empty_object, AdapterRule::Kind::drop_unicode_class_names,
                 AdapterRule::Kind::reverse_predicate, AdapterRule::Kind::rename_predicate,
                 AdapterRule::Kind::inject_virtual_root})
    if (s == rule_kind_name(k)) return k;
  throw ConfigError("unknown adapter rule kind '" + s + "'");
}

inline nlohmann::json to_json(const AdapterSpec& spec) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : spec.rules) {
    nlohmann::json j{{"kind", rule_kind_name(r.kind)}};
    switch (r.kind) {
      case AdapterRule::Kind::reverse_predicate:
      case AdapterRule::Kind::rename_predicate:
        j["from"] = r.from;
        j["to"] = r.to;
        break;
      case AdapterRule::Kind::inject_virtual_root:
        j["root"] = r.root;
        break;
      case AdapterRule::Kind::drop_unicode_class_names:
        j["allowed"] = r.allowed;
        break;
      default:
        break;
    }
    rules.push_back(std::move(j));
  }
  nlohmann::json out{{"name", spec.name}, {"rules", rules}};
  if (!spec.instance_of.empty()) out["instance_of"] = spec.instance_of;
  return out;
}

inline AdapterSpec adapter_from_json(const nlohmann::json& j) {
  try {
    AdapterSpec spec;
    spec.name = j.value("name", std::string("custom"));
    if (j.contains("instance_of")) spec.instance_of = j.at("instance_of").get<std::vector<std::string>>();
    for (const auto& rj : j.at("rules")) {
      AdapterRule r;
      r.kind = parse_rule_kind(rj.at("kind").get<std::string>());
      switch (r.kind) {
        case AdapterRule::Kind::reverse_predicate:
        case AdapterRule::Kind::rename_predicate:
          r.from = rj.at("from").get<std::string>();
          r.to = rj.at("to").get<std::string>();
          break;
        case AdapterRule::Kind::inject_virtual_root:
          r.root = rj.at("root").get<std::string>();
          break;
        case AdapterRule::Kind::drop_unicode_class_names:
          if (rj.contains("allowed")) r.allowed = rj.at("allowed").get<std::vector<std::pair<unsigned, unsigned>>>();
          break;
        default:
          break;
      }
      spec.rules.push_back(std::move(r));
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad adapter spec: ") + e.what());
  }
}

inline AdapterSpec builtin_adapter(std::string_view name) {
  AdapterSpec spec;
  spec.name = std::string(name);
  if (name == "identity") return spec;
  if (name == "dbpedia") {
    spec.rules = {AdapterRule::drop_empty_object(), AdapterRule::drop_unicode_class_names()};
    return spec;
  }
  if (name == "yago") {
    spec.rules = {AdapterRule::drop_empty_object()};
    return spec;
  }
  if (name == "freebase") {
    spec.rules = {
        AdapterRule::reverse_predicate(std::string(iri::fb_type_instance), std::string(iri::fb_object_type)),
        AdapterRule::rename_predicate(std::string(iri::rdf_type), std::string(iri::fb_object_type)),
        AdapterRule::rename_predicate(std::string(iri::fb_property_schema), std::string(iri::rdfs_domain)),
        AdapterRule::inject_virtual_root("Thing"),
    };
    spec.instance_of = {std::string(iri::fb_object_type)};
    return spec;
  }
  throw ConfigError("unknown adapter '" + std::string(name) + "'");
}

/// Resolves `--adapter` values: a built-in name, else a JSON spec file.
inline AdapterSpec load_adapter(const std::string& name_or_path) {
  for (const char* builtin : {"identity", "dbpedia", "yago", "freebase"})
    if (name_or_path == builtin) return builtin_adapter(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw ConfigError("adapter '" + name_or_path + "' is neither built-in nor a readable file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("adapter file " + name_or_path + ": " + e.what());
  }
  return adapter_from_json(j);
}

/// Applies an AdapterSpec to a triple stream. Every rule except
/// inject-virtual-root is a pure triple -> 0..1 triple map; that rule
/// watches the stream and emits its subclass triples from finish().
class Adapter {
 public:
  Adapter(const AdapterSpec& spec, TermTable& table, const Vocabulary& vocab) : table_(table), vocab_(vocab) {
    for (const auto& r : spec.rules) {
      Compiled c{r.kind, {}, {}, {}};
      switch (r.kind) {
        case AdapterRule::Kind::reverse_predicate:
        case AdapterRule::Kind::rename_predicate:
          c.from = table.intern(iri_token(r.from));
          c.to = table.intern(iri_token(r.to));
          break;
        case AdapterRule::Kind::inject_virtual_root:
          c.from = table.intern(iri_token(r.root));
          tracking_ = true;
          root_ = c.from;
          break;
        case AdapterRule::Kind::drop_unicode_class_names:
          for (auto [lo, hi] : r.allowed)
            for (unsigned b = lo; b <= hi && b < 256; ++b) c.allowed.set(b);
          break;
        default:
          break;
      }
      rules_.push_back(c);
    }
  }

  std::optional<Triple> apply(Triple t) {
    for (const auto& r : rules_) {
      switch (r.kind) {
        case AdapterRule::Kind::drop_empty_object: {
          const auto text = table_.text(t.object);
          if (text == "<>" || text.starts_with("\"\"")) return drop();
          break;
        }
        case AdapterRule::Kind::drop_unicode_class_names:
          if (declares_bad_class(t, r.allowed)) return drop();
          break;
        case AdapterRule::Kind::reverse_predicate:
          if (t.predicate == r.from) {
            if (kind_of_canonical(table_.text(t.object)) == TermKind::literal) return drop();
            t = Triple{t.object, r.to, t.subject};
          }
          break;
        case AdapterRule::Kind::rename_predicate:
          if (t.predicate == r.from) t.predicate = r.to;
          break;
        case AdapterRule::Kind::inject_virtual_root:
          break;
      }
    }
    if (tracking_) track(t);
    return t;
  }

  /// Synthetic `C subClassOf root` for every class seen without a parent,
  /// in canonical-text order.
  std::vector<Triple> finish() {
    std::vector<Triple> out;
    if (!tracking_ || vocab_.subclass_of.empty()) return out;
    std::vector<TermId> orphans;
    for (TermId c : classes_)
      if (c != root_ && !has_parent_.contains(c)) orphans.push_back(c);
    std::sort(orphans.begin(), orphans.end(),
              [&](TermId a, TermId b) { return table_.text(a) < table_.text(b); });
    for (TermId c : orphans) out.push_back(Triple{c, vocab_.subclass_of.front(), root_});
    return out;
  }

  std::size_t dropped() const { return dropped_; }

 private:
  struct Compiled {
    AdapterRule::Kind kind;
    TermId from{};
    TermId to{};
    std::bitset<256> allowed;
  };

  std::optional<Triple> drop() {
    ++dropped_;
    return std::nullopt;
  }

  bool bad_iri(TermId id, const std::bitset<256>& allowed) const {
    const auto text = table_.text(id);
    if (kind_of_canonical(text) != TermKind::iri) return false;
    for (unsigned char c : strip_iri(text))
      if (!allowed.test(c)) return true;
    return false;
  }

  bool declares_bad_class(const Triple& t, const std::bitset<256>& allowed) const {
    if (vocab_.is_subclass_of(t.predicate)) return bad_iri(t.subject, allowed) || bad_iri(t.object, allowed);
    if (vocab_.is_instance_of(t.predicate) && vocab_.is_class_marker(t.object)) return bad_iri(t.subject, allowed);
    if (vocab_.is_domain(t.predicate)) return bad_iri(t.object, allowed);
    return false;
  }

  void track(const Triple& t) {
    if (vocab_.is_subclass_of(t.predicate)) {
      classes_.insert(t.subject);
      classes_.insert(t.object);
      if (t.subject != t.object) has_parent_.insert(t.subject);
    } else if (vocab_.is_instance_of(t.predicate)) {
      if (vocab_.is_class_marker(t.object))
        classes_.insert(t.subject);
      else if (!vocab_.is_property_marker(t.object) &&
               kind_of_canonical(table_.text(t.object)) == TermKind::iri)
        classes_.insert(t.object);
    }
  }

  TermTable& table_;
  Vocabulary vocab_;
  std::vector<Compiled> rules_;
  bool tracking_ = false;
  TermId root_{};
  std::unordered_set<TermId> classes_;
  std::unordered_set<TermId> has_parent_;
  std::size_t dropped_ = 0;
};

}  // namespace kgcg
