#pragma once

#include <algorithm>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "flatclass/canonical.hpp"
#include "flatclass/classes.hpp"
#include "flatclass/enumeration.hpp"
#include "flatclass/io.hpp"
#include "flatclass/parallel.hpp"

namespace flatclass {

/// r: largest forbidden-flat rank, k: largest forbidden-flat size, and the
/// resulting ceiling on the rank of any forbidden flat of the extension class.
struct ClassParams {
  int r = 0;
  int k = 0;
  int bound = 0;

  friend bool operator==(const ClassParams&, const ClassParams&) = default;
};

inline int rank_bound(int r, int k) { return std::max(2 * r, r + k * (r - 1)); }

inline ClassParams class_params(const HereditaryClass& c) {
  if (c.forbidden().empty()) {
    throw Error(ErrorKind::EmptyForbiddenList,
                "class \"" + c.name() + "\" has no forbidden flats; its extension class is the whole universe");
  }
  ClassParams p;
  for (const auto& f : c.forbidden()) {
    p.r = std::max(p.r, f.matroid.rank());
    p.k = std::max(p.k, f.matroid.size());
  }
  p.bound = rank_bound(p.r, p.k);
  return p;
}

/// Class and extension-class membership keyed by canonical form. Safe for
/// concurrent use; candidates are assumed to lie in the class universe.
class MembershipMemo {
 public:
  explicit MembershipMemo(const HereditaryClass& c) : class_(c) {}

  bool in_class(const Matroid& m) {
    return lookup(class_cache_, m, [&] { return flatclass::in_class(m, class_, UniverseCheck::Assume).in_class; });
  }

  bool in_extension(const Matroid& m) {
    return lookup(ext_cache_, m, [&] {
      if (in_class(m)) return true;
      for (ElementId e = 0; e < m.size(); ++e) {
        if (in_class(deletion(m, e))) return true;
      }
      return false;
    });
  }

 private:
  using Cache = std::unordered_map<CanonicalKey, bool, CanonicalKeyHash>;

  template <typename Compute>
  bool lookup(Cache& cache, const Matroid& m, Compute&& compute) {
    const CanonicalKey& key = canonical_form(m);
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const bool value = compute();
    std::unique_lock lock(mutex_);
    cache.try_emplace(key, value);
    return value;
  }

  const HereditaryClass& class_;
  std::shared_mutex mutex_;
  Cache class_cache_;
  Cache ext_cache_;
};

struct FoundFlat {
  CanonicalKey key;
  Matroid matroid;
};

struct SearchReport {
  std::string class_name;
  ClassParams params;
  EnumLimits limits;
  int effective_max_rank = 0;
  std::vector<FoundFlat> found;
  bool complete = false;
  std::string universe_note;
};

namespace detail {

inline long long projective_points(int q, int rank) {
  long long total = 1;
  for (int i = 0; i < rank; ++i) {
    total *= q;
    if (total > (1LL << 40)) return total;
  }
  return (total - 1) / (q - 1);
}

}  // namespace detail

/// Minimal forbidden flats of the extension class among the enumerated
/// universe region. With clamp_rank the rank limit is lowered to the
/// class-parameter bound, which no forbidden flat of the extension class exceeds.
inline SearchReport forbidden_flats_ext(const HereditaryClass& c, const EnumLimits& lim, int jobs = 1,
                                        bool clamp_rank = true) {
  SearchReport report;
  report.class_name = c.name();
  report.params = class_params(c);
  report.limits = lim;
  report.effective_max_rank = clamp_rank ? std::min(lim.max_rank, report.params.bound) : lim.max_rank;

  const EnumLimits effective{lim.max_elements, report.effective_max_rank};
  const std::vector<Matroid> candidates = enumerate_universe(c.universe(), effective, jobs);
  MembershipMemo memo(c);
  std::vector<char> hit(candidates.size(), 0);
  parallel_for(candidates.size(), jobs, [&](std::size_t i) {
    hit[i] = is_minimal_forbidden(candidates[i], [&](const Matroid& x) { return memo.in_extension(x); });
  });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (hit[i]) report.found.push_back({canonical_form(candidates[i]), candidates[i]});
  }
  std::sort(report.found.begin(), report.found.end(),
            [](const FoundFlat& a, const FoundFlat& b) { return a.key < b.key; });

  const int bound = report.params.bound;
  if (c.universe().kind == Universe::Kind::All) {
    report.complete = false;
    report.universe_note =
        "all simple matroids: element count is unbounded at fixed rank, so no finite limit covers rank <= " +
        std::to_string(bound) + "; the list is partial";
  } else {
    const long long needed = detail::projective_points(c.universe().q, bound);
    report.complete = lim.max_rank >= bound && lim.max_elements >= needed;
    report.universe_note = "GF(" + std::to_string(c.universe().q) + "): rank <= " + std::to_string(bound) +
                           " implies at most " + std::to_string(needed) + " elements; searched up to " +
                           std::to_string(lim.max_elements) + " elements and rank " +
                           std::to_string(report.effective_max_rank) +
                           (report.complete ? "; the list is complete" : "; the list is partial");
  }
  return report;
}

/// Proof data for a minimal forbidden flat m of the extension class: a flat s
/// of m isomorphic to a forbidden flat, and for each element e_i of s a flat
/// F_i of m \ e_i isomorphic to a forbidden flat (expressed in m's labels).
struct WitnessDecomposition {
  SubsetMask s = 0;
  std::size_t s_forbidden_index = 0;
  std::vector<ElementId> elements;
  std::vector<SubsetMask> parts;
  std::vector<std::size_t> part_forbidden_index;
  int union_rank = 0;

  SubsetMask union_mask() const {
    SubsetMask u = s;
    for (SubsetMask f : parts) u |= f;
    return u;
  }

  /// Some pair among {s, F_1, ...} is disjoint.
  bool has_disjoint_pair() const {
    std::vector<SubsetMask> all{s};
    all.insert(all.end(), parts.begin(), parts.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        if ((all[i] & all[j]) == 0) return true;
      }
    }
    return false;
  }
};

inline WitnessDecomposition extract_witness(const Matroid& m, const HereditaryClass& c,
                                            UniverseCheck check = UniverseCheck::Verify) {
  if (!is_minimal_forbidden(m, extension_member(c, check))) {
    throw Error(ErrorKind::NotForbidden, "matroid is not a minimal forbidden flat of the extension of \"" + c.name() + "\"");
  }
  WitnessDecomposition w;
  const MembershipVerdict top = in_class(m, c, UniverseCheck::Assume);
  w.s = *top.witness_flat;
  w.s_forbidden_index = *top.witness_forbidden_index;
  w.elements = elements_of(w.s);
  for (ElementId e : w.elements) {
    const MembershipVerdict v = in_class(deletion(m, e), c, UniverseCheck::Assume);
    w.parts.push_back(expand_after_deletion(*v.witness_flat, e));
    w.part_forbidden_index.push_back(*v.witness_forbidden_index);
  }
  w.union_rank = m.rank(w.union_mask());
  return w;
}

// ---------------------------------------------------------------------------
// JSON

inline Json found_json(const Matroid& m) {
  Json j;
  j["n"] = m.size();
  j["rank"] = m.rank();
  j["canonical"] = canonical_form(m).hex();
  Json bases = Json::array();
  for (const auto& b : basis_tuples(m)) bases.push_back(b);
  j["bases"] = bases;
  return j;
}

inline Json params_json(const ClassParams& p) { return Json{{"r", p.r}, {"k", p.k}, {"bound", p.bound}}; }

inline Json to_json(const SearchReport& r) {
  Json j;
  j["class"] = r.class_name;
  j["params"] = params_json(r.params);
  j["limits"] = Json{{"max_elements", r.limits.max_elements},
                     {"max_rank", r.limits.max_rank},
                     {"effective_max_rank", r.effective_max_rank}};
  j["complete"] = r.complete;
  j["universe_note"] = r.universe_note;
  Json found = Json::array();
  for (const auto& f : r.found) found.push_back(found_json(f.matroid));
  j["found"] = found;
  return j;
}

inline Json to_json(const WitnessDecomposition& w) {
  Json j;
  j["s"] = format_set(w.s);
  j["s_forbidden_index"] = w.s_forbidden_index;
  Json parts = Json::array();
  for (std::size_t i = 0; i < w.parts.size(); ++i) {
    parts.push_back(Json{{"element", w.elements[i]},
                         {"flat", format_set(w.parts[i])},
                         {"forbidden_index", w.part_forbidden_index[i]}});
  }
  j["parts"] = parts;
  j["union_rank"] = w.union_rank;
  j["disjoint_pair"] = w.has_disjoint_pair();
  return j;
}

}  // namespace flatclass
