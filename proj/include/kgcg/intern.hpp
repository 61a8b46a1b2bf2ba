#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgcg/term.hpp"

namespace kgcg {

/// Dense handle into a TermTable.
struct TermId {
  std::uint32_t value = 0;
  friend auto operator<=>(TermId, TermId) = default;
};

struct Triple {
  TermId subject;
  TermId predicate;
  TermId object;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Interns canonical term tokens. Ids are dense, assigned in first-seen
/// order, and never reused for the table's lifetime.
class TermTable {
 public:
  TermId intern(std::string_view canonical) {
    if (auto it = index_.find(canonical); it != index_.end()) return TermId{it->second};
    const auto id = static_cast<std::uint32_t>(by_id_.size());
    auto [it, inserted] = index_.emplace(std::string(canonical), id);
    by_id_.push_back(&it->first);
    return TermId{id};
  }

  TermId intern(const Term& term) { return intern(term.canonical()); }

  std::optional<TermId> find(std::string_view canonical) const {
    if (auto it = index_.find(canonical); it != index_.end()) return TermId{it->second};
    return std::nullopt;
  }

  std::string_view text(TermId id) const { return *by_id_.at(id.value); }
  Term term(TermId id) const { return parse_term(text(id)); }
  std::size_t size() const { return by_id_.size(); }

  /// Interns every term of `other` (in its id order) and returns the
  /// other-id -> this-id mapping. Merging worker tables in a fixed order
  /// makes the resulting ids deterministic.
  std::vector<TermId> absorb(const TermTable& other) {
    std::vector<TermId> remap;
    remap.reserve(other.size());
    for (const std::string* s : other.by_id_) remap.push_back(intern(*s));
    return remap;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };

  // Node-based map: key addresses stay valid across rehash.
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
  std::vector<const std::string*> by_id_;
};

}  // namespace kgcg

template <>
struct std::hash<kgcg::TermId> {
  std::size_t operator()(kgcg::TermId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
