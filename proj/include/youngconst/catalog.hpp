#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "youngconst/constants.hpp"
#include "youngconst/exponents.hpp"

namespace youngconst {

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExactRule { none, compact_one, nielsen_power, beckner_rn };

/// How the two linked groups decompose the parent.  `extension`: normal
/// subgroup and quotient.  `iwasawa`: G = K A N with subgroup AN and maximal
/// compact K; dimensions and compact dimensions still add.
enum class LinkRelation { extension, iwasawa };

struct StructureFlags {
  bool solvable = false;
  bool nilpotent = false;
  bool simply_connected = false;
  bool unimodular = false;
  bool compact = false;
  bool in_class_A = false;

  friend bool operator==(const StructureFlags&, const StructureFlags&) = default;
};

struct SubgroupLink {
  std::string subgroup;
  std::string quotient;
  LinkRelation relation = LinkRelation::extension;

  friend bool operator==(const SubgroupLink&, const SubgroupLink&) = default;
};

/// Catalog entry for a connected Lie group (or, for `Z`, a discrete group
/// kept for the finite/discrete test beds).  `r` is the dimension of the
/// maximal compact subgroups; it is recorded data, not derived.
struct LieGroupDescriptor {
  std::string name;
  int dim = 0;
  int r = 0;
  StructureFlags flags;
  std::vector<SubgroupLink> links;
  ExactRule exact_value_rule = ExactRule::none;
  std::string description;

  friend bool operator==(const LieGroupDescriptor&, const LieGroupDescriptor&) = default;
};

inline std::string to_string(ExactRule rule) {
  switch (rule) {
    case ExactRule::none: return "none";
    case ExactRule::compact_one: return "compact_one";
    case ExactRule::nielsen_power: return "nielsen_power";
    case ExactRule::beckner_rn: return "beckner_rn";
  }
  return "none";
}

inline ExactRule exact_rule_from_string(const std::string& s) {
  if (s == "none") return ExactRule::none;
  if (s == "compact_one") return ExactRule::compact_one;
  if (s == "nielsen_power") return ExactRule::nielsen_power;
  if (s == "beckner_rn") return ExactRule::beckner_rn;
  throw CatalogError("unknown exact_value_rule '" + s + "'");
}

inline std::string to_string(LinkRelation rel) {
  return rel == LinkRelation::iwasawa ? "iwasawa" : "extension";
}

inline LinkRelation link_relation_from_string(const std::string& s) {
  if (s == "extension") return LinkRelation::extension;
  if (s == "iwasawa") return LinkRelation::iwasawa;
  throw CatalogError("unknown link relation '" + s + "'");
}

/// Y(R)^(dim - r).  Only defined for groups flagged as class A (finite center
/// of the semisimple part); other descriptors are rejected.
inline double corollary_bound(const LieGroupDescriptor& g, const YoungExponents& ex) {
  if (!g.flags.in_class_A) {
    throw DomainError("corollary_bound: '" + g.name + "' is not flagged in class A");
  }
  const int excess = g.dim - g.r;
  if (excess <= 0) return 1.0;
  return std::pow(beckner_Y_Rn(ex, 1), excess);
}

/// Exact value where a closed form is known: Y(R)^(dim - r) for simply
/// connected solvable or connected nilpotent groups (and R^n), 1 for compact
/// groups.  Empty otherwise.
inline std::optional<double> nielsen_exact(const LieGroupDescriptor& g, const YoungExponents& ex) {
  switch (g.exact_value_rule) {
    case ExactRule::compact_one:
      return 1.0;
    case ExactRule::beckner_rn:
      if (g.dim == 0) return 1.0;
      return beckner_Y_Rn(ex, g.dim);
    case ExactRule::nielsen_power: {
      const int excess = g.dim - g.r;
      if (excess <= 0) return 1.0;
      return std::pow(beckner_Y_Rn(ex, 1), excess);
    }
    case ExactRule::none:
      break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Shipped catalog

inline std::vector<LieGroupDescriptor> shipped_catalog() {
  auto flags = [](bool solvable, bool nilpotent, bool sc, bool unimodular, bool compact, bool class_a) {
    return StructureFlags{solvable, nilpotent, sc, unimodular, compact, class_a};
  };
  using L = SubgroupLink;
  std::vector<LieGroupDescriptor> c;
  c.push_back({"trivial", 0, 0, flags(true, true, true, true, true, true), {}, ExactRule::compact_one,
               "trivial group {e}"});
  c.push_back({"R", 1, 0, flags(true, true, true, true, false, true), {}, ExactRule::beckner_rn,
               "real line"});
  c.push_back({"R2", 2, 0, flags(true, true, true, true, false, true),
               {L{"R", "R", LinkRelation::extension}}, ExactRule::beckner_rn, "euclidean plane"});
  c.push_back({"R3", 3, 0, flags(true, true, true, true, false, true),
               {L{"R2", "R", LinkRelation::extension}, L{"R", "R2", LinkRelation::extension}},
               ExactRule::beckner_rn, "euclidean 3-space"});
  c.push_back({"R4", 4, 0, flags(true, true, true, true, false, true),
               {L{"R3", "R", LinkRelation::extension}, L{"R2", "R2", LinkRelation::extension}},
               ExactRule::beckner_rn, "euclidean 4-space"});
  c.push_back({"T", 1, 1, flags(true, true, false, true, true, true), {}, ExactRule::compact_one,
               "circle R/Z"});
  c.push_back({"SO2", 1, 1, flags(true, true, false, true, true, true), {}, ExactRule::compact_one,
               "rotation group of the plane"});
  c.push_back({"T2", 2, 2, flags(true, true, false, true, true, true),
               {L{"T", "T", LinkRelation::extension}}, ExactRule::compact_one, "2-torus"});
  c.push_back({"Z", 0, 0, flags(true, true, false, true, false, false), {}, ExactRule::none,
               "integers (discrete, not connected)"});
  c.push_back({"H3", 3, 0, flags(true, true, true, true, false, true),
               {L{"R", "R2", LinkRelation::extension}}, ExactRule::nielsen_power,
               "Heisenberg group (center R, quotient R2)"});
  c.push_back({"AffR", 2, 0, flags(true, false, true, false, false, true),
               {L{"R", "R", LinkRelation::extension}}, ExactRule::nielsen_power,
               "ax+b group Aff+(R): translations normal, quotient R_{>0}"});
  c.push_back({"SE2cover", 3, 0, flags(true, false, true, true, false, true),
               {L{"R2", "R", LinkRelation::extension}}, ExactRule::nielsen_power,
               "universal cover of SE(2)"});
  c.push_back({"SE2", 3, 1, flags(true, false, false, true, false, true),
               {L{"R2", "SO2", LinkRelation::extension}}, ExactRule::none, "euclidean motions of the plane"});
  c.push_back({"SL2R", 3, 1, flags(false, false, false, true, false, true),
               {L{"AffR", "SO2", LinkRelation::iwasawa}}, ExactRule::none,
               "SL(2,R); Iwasawa AN = Aff+(R), K = SO(2)"});
  c.push_back({"SO3", 3, 3, flags(false, false, false, true, true, true), {}, ExactRule::compact_one,
               "rotation group of 3-space"});
  return c;
}

inline const LieGroupDescriptor* find_descriptor(std::span<const LieGroupDescriptor> catalog,
                                                 const std::string& name) {
  auto it = std::find_if(catalog.begin(), catalog.end(),
                         [&](const LieGroupDescriptor& d) { return d.name == name; });
  return it == catalog.end() ? nullptr : &*it;
}

// ---------------------------------------------------------------------------
// Consistency check

struct CatalogViolation {
  std::string entry;
  std::string check;
  std::string detail;
};

/// Triples used to probe the bound ordering when none are given.
inline std::vector<YoungExponents> default_probe_triples() {
  return {young_p(Exponent::ratio(4, 3), Exponent::ratio(4, 3)),
          young_p(Exponent::ratio(3, 2), Exponent::ratio(3, 2)),
          young_p(Exponent::ratio(5, 4), Exponent::ratio(10, 7)),
          young_p(Exponent::ratio(6, 5), Exponent::ratio(2))};
}

inline std::vector<CatalogViolation> catalog_consistency_check(
    std::span<const LieGroupDescriptor> catalog,
    const std::vector<YoungExponents>& probes = default_probe_triples()) {
  std::vector<CatalogViolation> out;
  auto fail = [&](const std::string& entry, const std::string& check, const std::string& detail) {
    out.push_back({entry, check, detail});
  };

  for (const auto& g : catalog) {
    if (g.dim < 0 || g.r < 0 || g.r > g.dim) {
      fail(g.name, "range", "need 0 <= r <= dim, got dim=" + std::to_string(g.dim) + " r=" + std::to_string(g.r));
    }
    if (g.flags.compact && g.r != g.dim) {
      fail(g.name, "compact", "compact group must have r = dim");
    }
    if (g.flags.nilpotent && !g.flags.solvable) {
      fail(g.name, "flags", "nilpotent but not solvable");
    }
    if (g.exact_value_rule == ExactRule::compact_one && !g.flags.compact) {
      fail(g.name, "rule", "compact_one rule on a non-compact group");
    }
    if (g.exact_value_rule == ExactRule::nielsen_power &&
        !((g.flags.solvable && g.flags.simply_connected) || g.flags.nilpotent)) {
      fail(g.name, "rule", "nielsen_power needs simply connected solvable or nilpotent");
    }
    if (g.exact_value_rule == ExactRule::beckner_rn && g.r != 0) {
      fail(g.name, "rule", "beckner_rn needs r = 0");
    }

    for (const auto& link : g.links) {
      const auto* h = find_descriptor(catalog, link.subgroup);
      const auto* q = find_descriptor(catalog, link.quotient);
      if (h == nullptr || q == nullptr) {
        fail(g.name, "link", "unresolved link (" + link.subgroup + ", " + link.quotient + ")");
        continue;
      }
      if (g.dim != h->dim + q->dim) {
        fail(g.name, "dim_additivity",
             "dim " + std::to_string(g.dim) + " != " + std::to_string(h->dim) + " + " + std::to_string(q->dim) +
                 " via (" + link.subgroup + ", " + link.quotient + ")");
      }
      if (g.r != h->r + q->r) {
        fail(g.name, "r_additivity",
             "r " + std::to_string(g.r) + " != " + std::to_string(h->r) + " + " + std::to_string(q->r) +
                 " via (" + link.subgroup + ", " + link.quotient + ")");
      }
    }

    if (!g.flags.in_class_A) continue;
    for (const auto& ex : probes) {
      const double bound = corollary_bound(g, ex);
      if (!(bound > 0.0) || bound > 1.0) {
        fail(g.name, "bound_range", "corollary bound " + std::to_string(bound) + " outside (0, 1] at " + ex.str());
      }
      if (const auto exact = nielsen_exact(g, ex); exact && *exact > bound + 1e-12) {
        fail(g.name, "bound_order", "exact value exceeds corollary bound at " + ex.str());
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const LieGroupDescriptor& g) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : g.links) {
    links.push_back({{"subgroup", l.subgroup}, {"quotient", l.quotient}, {"relation", to_string(l.relation)}});
  }
  return {{"name", g.name},
          {"dim", g.dim},
          {"r", g.r},
          {"flags",
           {{"solvable", g.flags.solvable},
            {"nilpotent", g.flags.nilpotent},
            {"simply_connected", g.flags.simply_connected},
            {"unimodular", g.flags.unimodular},
            {"compact", g.flags.compact},
            {"in_class_A", g.flags.in_class_A}}},
          {"links", links},
          {"exact_value_rule", to_string(g.exact_value_rule)},
          {"description", g.description}};
}

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw CatalogError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw CatalogError(where + ": unknown field '" + key + "'");
    }
  }
}

template <class T>
T required(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw CatalogError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw CatalogError(where + ": bad field '" + key + "': " + e.what());
  }
}

}  // namespace detail

inline LieGroupDescriptor descriptor_from_json(const nlohmann::json& j) {
  const std::string where = "catalog entry " + (j.is_object() && j.contains("name") ? j["name"].dump() : "?");
  detail::reject_unknown(j, {"name", "dim", "r", "flags", "links", "exact_value_rule", "description"}, where);
  LieGroupDescriptor g;
  g.name = detail::required<std::string>(j, "name", where);
  g.dim = detail::required<int>(j, "dim", where);
  g.r = detail::required<int>(j, "r", where);
  const auto& f = j.at("flags");
  detail::reject_unknown(f, {"solvable", "nilpotent", "simply_connected", "unimodular", "compact", "in_class_A"},
                         where + ".flags");
  g.flags.solvable = f.value("solvable", false);
  g.flags.nilpotent = f.value("nilpotent", false);
  g.flags.simply_connected = f.value("simply_connected", false);
  g.flags.unimodular = f.value("unimodular", false);
  g.flags.compact = f.value("compact", false);
  g.flags.in_class_A = f.value("in_class_A", false);
  if (j.contains("links")) {
    for (const auto& l : j.at("links")) {
      detail::reject_unknown(l, {"subgroup", "quotient", "relation"}, where + ".links");
      SubgroupLink link;
      link.subgroup = detail::required<std::string>(l, "subgroup", where);
      link.quotient = detail::required<std::string>(l, "quotient", where);
      link.relation = link_relation_from_string(l.value("relation", std::string("extension")));
      g.links.push_back(std::move(link));
    }
  }
  g.exact_value_rule = exact_rule_from_string(j.value("exact_value_rule", std::string("none")));
  g.description = j.value("description", std::string());
  return g;
}

inline nlohmann::json catalog_to_json(std::span<const LieGroupDescriptor> catalog) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : catalog) arr.push_back(to_json(g));
  return arr;
}

inline std::vector<LieGroupDescriptor> catalog_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw CatalogError("catalog must be a JSON array");
  std::vector<LieGroupDescriptor> out;
  for (const auto& e : j) out.push_back(descriptor_from_json(e));
  return out;
}

inline std::vector<LieGroupDescriptor> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CatalogError("catalog '" + path + "': " + e.what());
  }
  return catalog_from_json(j);
}

}  // namespace youngconst
