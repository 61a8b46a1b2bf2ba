#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kgcg/intern.hpp"

namespace kgcg {

namespace iri {
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view rdf_property = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
inline constexpr std::string_view rdfs_subclass_of = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view rdfs_domain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline constexpr std::string_view rdfs_class = "http://www.w3.org/2000/01/rdf-schema#Class";
inline constexpr std::string_view owl_class = "http://www.w3.org/2002/07/owl#Class";
inline constexpr std::string_view owl_thing = "http://www.w3.org/2002/07/owl#Thing";
inline constexpr std::string_view owl_object_property = "http://www.w3.org/2002/07/owl#ObjectProperty";
inline constexpr std::string_view owl_datatype_property = "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline constexpr std::string_view owl_functional_property = "http://www.w3.org/2002/07/owl#FunctionalProperty";
inline constexpr std::string_view owl_annotation_property = "http://www.w3.org/2002/07/owl#AnnotationProperty";
inline constexpr std::string_view schema_domain_includes = "http://schema.org/domainIncludes";
inline constexpr std::string_view wd_instance_of = "http://www.wikidata.org/prop/direct/P31";
inline constexpr std::string_view wd_subclass_of = "http://www.wikidata.org/prop/direct/P279";
inline constexpr std::string_view fb_type_instance = "http://rdf.freebase.com/ns/type.type.instance";
inline constexpr std::string_view fb_object_type = "http://rdf.freebase.com/ns/type.object.type";
inline constexpr std::string_view fb_property_schema = "http://rdf.freebase.com/ns/type.property.schema";
}  // namespace iri

enum class CyclePolicy { reject, collapse };

/// Which predicates carry schema meaning, plus hierarchy shaping options.
/// IRIs are given without angle brackets.
struct HierarchyConfig {
  std::vector<std::string> subclass_of{std::string(iri::rdfs_subclass_of)};
  std::vector<std::string> instance_of{std::string(iri::rdf_type)};
  std::vector<std::string> domain{std::string(iri::rdfs_domain), std::string(iri::schema_domain_includes)};
  // `X instance-of M` with M here declares X as a class.
  std::vector<std::string> class_markers{std::string(iri::owl_class), std::string(iri::rdfs_class)};
  // `X instance-of M` with M here declares a property; never a class.
  std::vector<std::string> property_markers{
      std::string(iri::rdf_property), std::string(iri::owl_object_property),
      std::string(iri::owl_datatype_property), std::string(iri::owl_functional_property),
      std::string(iri::owl_annotation_property)};
  CyclePolicy cycle_policy = CyclePolicy::collapse;
  // Pinned root: every other parentless class is attached beneath it.
  std::optional<std::string> root;
  // When set and the hierarchy has several roots (or the IRI was already
  // synthesized by an adapter), this class becomes the virtual root.
  std::optional<std::string> virtual_root;

  static HierarchyConfig wikidata() {
    HierarchyConfig c;
    c.subclass_of = {std::string(iri::wd_subclass_of)};
    c.instance_of = {std::string(iri::wd_instance_of)};
    return c;
  }
};

/// HierarchyConfig resolved against one TermTable.
struct Vocabulary {
  std::vector<TermId> subclass_of;
  std::vector<TermId> instance_of;
  std::vector<TermId> domain;
  std::vector<TermId> class_markers;
  std::vector<TermId> property_markers;

  static bool contains(const std::vector<TermId>& set, TermId id) {
    return std::find(set.begin(), set.end(), id) != set.end();
  }
  bool is_subclass_of(TermId p) const { return contains(subclass_of, p); }
  bool is_instance_of(TermId p) const { return contains(instance_of, p); }
  bool is_domain(TermId p) const { return contains(domain, p); }
  bool is_class_marker(TermId o) const { return contains(class_markers, o); }
  bool is_property_marker(TermId o) const { return contains(property_markers, o); }
};

inline Vocabulary resolve_vocabulary(const HierarchyConfig& config, TermTable& table) {
  auto resolve = [&](const std::vector<std::string>& iris) {
    std::vector<TermId> ids;
    for (const auto& s : iris) ids.push_back(table.intern(iri_token(s)));
    return ids;
  };
  return Vocabulary{resolve(config.subclass_of), resolve(config.instance_of), resolve(config.domain),
                    resolve(config.class_markers), resolve(config.property_markers)};
}

}  // namespace kgcg
