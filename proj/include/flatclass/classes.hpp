#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatclass/canonical.hpp"
#include "flatclass/io.hpp"
#include "flatclass/linear.hpp"
#include "flatclass/matroid.hpp"

namespace flatclass {

struct Universe {
  enum class Kind { All, Representable };

  Kind kind = Kind::All;
  int q = 0;

  static Universe all() { return {}; }
  static Universe representable(int field_order) {
    (void)Field::get(field_order);
    return {Kind::Representable, field_order};
  }

  bool contains(const Matroid& m) const {
    return kind == Kind::All || is_representable(m, q).has_value();
  }

  std::string describe() const { return kind == Kind::All ? "all" : "GF(" + std::to_string(q) + ")"; }

  friend bool operator==(const Universe&, const Universe&) = default;
};

struct ForbiddenFlat {
  Matroid matroid;
  CanonicalKey key;
  std::string label;
};

/// The matroids of a universe having no flat isomorphic to a listed forbidden
/// matroid. Closed under restriction to flats by construction.
class HereditaryClass {
 public:
  /// Rejects empty, duplicate (isomorphic) or out-of-universe entries.
  HereditaryClass(std::string name, Universe universe, std::vector<std::pair<Matroid, std::string>> forbidden)
      : name_(std::move(name)), universe_(universe) {
    for (auto& [m, label] : forbidden) {
      if (m.size() == 0) throw Error(ErrorKind::InvalidArgument, "forbidden flat \"" + label + "\" is empty");
      const CanonicalKey& key = canonical_form(m);
      for (const auto& existing : forbidden_) {
        if (existing.key == key) {
          throw Error(ErrorKind::DuplicateForbidden,
                      "forbidden flats \"" + existing.label + "\" and \"" + label + "\" are isomorphic");
        }
      }
      if (!universe_.contains(m)) {
        throw Error(ErrorKind::NotInUniverse, "forbidden flat \"" + label + "\" is not in universe " + universe_.describe());
      }
      forbidden_.push_back({m, key, label});
    }
  }

  const std::string& name() const { return name_; }
  const Universe& universe() const { return universe_; }
  const std::vector<ForbiddenFlat>& forbidden() const { return forbidden_; }

 private:
  std::string name_;
  Universe universe_;
  std::vector<ForbiddenFlat> forbidden_;
};

/// Simple binary matroids with no flat isomorphic to U(3,3) or U(2,3)+U(1,1).
inline HereditaryClass binary_targets() {
  return HereditaryClass("binary-targets", Universe::representable(2),
                         {{uniform(3, 3), "U(3,3)"}, {direct_sum(uniform(2, 3), uniform(1, 1)), "U(2,3)+U(1,1)"}});
}

struct MembershipVerdict {
  bool in_class = true;
  std::optional<SubsetMask> witness_flat;
  std::optional<std::size_t> witness_forbidden_index;
  bool universe_violation = false;
};

struct ExtensionVerdict {
  bool in_extension = false;
  bool already_in_class = false;
  std::optional<ElementId> witness_element;
};

/// Whether to run the (possibly expensive) universe test in in_class.
enum class UniverseCheck { Verify, Assume };

/// Some flat X of m with m|X isomorphic to f, scanning flats in ascending mask order.
inline std::optional<SubsetMask> has_flat_isomorphic_to(const Matroid& m, const Matroid& f) {
  const CanonicalKey& key = canonical_form(f);
  for (SubsetMask x : m.flats()) {
    if (popcount(x) != f.size() || m.rank(x) != f.rank()) continue;
    if (canonical_form(restrict(m, x)) == key) return x;
  }
  return std::nullopt;
}

inline MembershipVerdict in_class(const Matroid& m, const HereditaryClass& c,
                                  UniverseCheck check = UniverseCheck::Verify) {
  MembershipVerdict v;
  if (check == UniverseCheck::Verify && !c.universe().contains(m)) {
    v.in_class = false;
    v.universe_violation = true;
    return v;
  }
  const auto& forbidden = c.forbidden();
  for (SubsetMask x : m.flats()) {
    const int size = popcount(x);
    const int rank = m.rank(x);
    std::optional<Matroid> sub;
    for (std::size_t i = 0; i < forbidden.size(); ++i) {
      const Matroid& f = forbidden[i].matroid;
      if (f.size() != size || f.rank() != rank) continue;
      if (!sub) sub = restrict(m, x);
      if (canonical_form(*sub) == forbidden[i].key) {
        v.in_class = false;
        v.witness_flat = x;
        v.witness_forbidden_index = i;
        return v;
      }
    }
  }
  return v;
}

inline ExtensionVerdict in_extension_class(const Matroid& m, const HereditaryClass& c,
                                           UniverseCheck check = UniverseCheck::Verify) {
  ExtensionVerdict v;
  if (in_class(m, c, check).in_class) {
    v.in_extension = true;
    v.already_in_class = true;
    return v;
  }
  for (ElementId e = 0; e < m.size(); ++e) {
    if (in_class(deletion(m, e), c, check).in_class) {
      v.in_extension = true;
      v.witness_element = e;
      return v;
    }
  }
  return v;
}

/// f is outside the class but every proper flat of f lies inside it.
template <typename Member>
bool is_minimal_forbidden(const Matroid& f, Member&& member) {
  if (member(f)) return false;
  const SubsetMask ground = f.ground();
  for (SubsetMask x : f.flats()) {
    if (x == ground) continue;
    if (!member(restrict(f, x))) return false;
  }
  return true;
}

inline auto class_member(const HereditaryClass& c, UniverseCheck check = UniverseCheck::Verify) {
  return [&c, check](const Matroid& m) { return in_class(m, c, check).in_class; };
}

inline auto extension_member(const HereditaryClass& c, UniverseCheck check = UniverseCheck::Verify) {
  return [&c, check](const Matroid& m) { return in_extension_class(m, c, check).in_extension; };
}

// ---------------------------------------------------------------------------
// Class config: { "name": ..., "universe": "all" | {"gf": q}, "forbidden": [...] }

inline HereditaryClass class_from_json(const Json& j, const std::string& source = "<config>") {
  if (!j.is_object()) throw ParseError(source, 0, "expected class config object");
  if (!j.contains("name") || !j["name"].is_string()) throw ParseError(source, 0, "expected string field \"name\"");
  Universe universe;
  if (!j.contains("universe")) throw ParseError(source, 0, "expected field \"universe\"");
  const Json& u = j["universe"];
  if (u.is_string() && u.get<std::string>() == "all") {
    universe = Universe::all();
  } else if (u.is_object() && u.contains("gf") && u["gf"].is_number_integer()) {
    const int q = u["gf"].get<int>();
    if (!is_supported_field(q)) throw ParseError(source, 0, "expected \"gf\" in {2,3,4,5,7,8,9}");
    universe = Universe::representable(q);
  } else {
    throw ParseError(source, 0, "expected \"universe\" to be \"all\" or {\"gf\": q}");
  }
  if (!j.contains("forbidden") || !j["forbidden"].is_array()) throw ParseError(source, 0, "expected array field \"forbidden\"");
  std::vector<std::pair<Matroid, std::string>> forbidden;
  std::size_t index = 0;
  for (const auto& entry : j["forbidden"]) {
    MatroidRecord r = record_from_json(entry, source);
    std::string label;
    if (r.format == MatroidRecord::Format::Name) {
      label = r.expr;
    } else if (entry.is_object() && entry.contains("name") && entry["name"].is_string()) {
      label = entry["name"].get<std::string>();
    } else {
      label = "forbidden[" + std::to_string(index) + "]";
    }
    forbidden.emplace_back(to_matroid(r), label);
    ++index;
  }
  return HereditaryClass(j["name"].get<std::string>(), universe, std::move(forbidden));
}

inline Json to_json(const HereditaryClass& c) {
  Json j;
  j["name"] = c.name();
  if (c.universe().kind == Universe::Kind::All) {
    j["universe"] = "all";
  } else {
    j["universe"] = Json{{"gf", c.universe().q}};
  }
  Json list = Json::array();
  for (const auto& f : c.forbidden()) {
    Json rec = to_json(bases_record(f.matroid));
    rec["name"] = f.label;
    list.push_back(rec);
  }
  j["forbidden"] = list;
  return j;
}

/// "binary-targets" or a path to a JSON class config.
inline HereditaryClass load_class(const std::string& arg) {
  if (arg == "binary-targets") return binary_targets();
  const std::string content = read_file(arg);
  Json j;
  try {
    j = Json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(arg, 0, std::string("invalid JSON: ") + e.what());
  }
  return class_from_json(j, arg);
}

}  // namespace flatclass
