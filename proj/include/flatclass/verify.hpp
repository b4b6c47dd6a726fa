#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "flatclass/apex.hpp"
#include "flatclass/canonical.hpp"
#include "flatclass/classes.hpp"
#include "flatclass/enumeration.hpp"
#include "flatclass/linear.hpp"
#include "flatclass/parallel.hpp"

namespace flatclass {

// ---------------------------------------------------------------------------
// Hereditary property of the extension class

struct LemmaCounterexample {
  CanonicalKey key;
  SubsetMask flat = 0;
};

struct LemmaReport {
  std::size_t matroids = 0;
  std::size_t members = 0;
  std::size_t flats_checked = 0;
  std::size_t violations = 0;
  std::vector<LemmaCounterexample> counterexamples;
};

/// For every enumerated member of the extension class, every restriction to a
/// flat must again be a member. Membership is recomputed for every flat.
inline LemmaReport verify_lemma(const HereditaryClass& c, const EnumLimits& lim, int jobs = 1) {
  const std::vector<Matroid> all = enumerate_universe(c.universe(), lim, jobs);
  struct Partial {
    bool member = false;
    std::size_t flats = 0;
    std::vector<SubsetMask> bad;
  };
  std::vector<Partial> partial(all.size());
  parallel_for(all.size(), jobs, [&](std::size_t i) {
    const Matroid& m = all[i];
    Partial& p = partial[i];
    p.member = in_extension_class(m, c, UniverseCheck::Assume).in_extension;
    if (!p.member) return;
    for (SubsetMask f : m.flats()) {
      ++p.flats;
      if (!in_extension_class(restrict(m, f), c, UniverseCheck::Assume).in_extension) p.bad.push_back(f);
    }
  });
  LemmaReport r;
  r.matroids = all.size();
  for (std::size_t i = 0; i < all.size(); ++i) {
    r.members += partial[i].member ? 1 : 0;
    r.flats_checked += partial[i].flats;
    for (SubsetMask f : partial[i].bad) {
      ++r.violations;
      r.counterexamples.push_back({canonical_form(all[i]), f});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rank ceiling and witness structure

struct TheoremEntry {
  CanonicalKey key;
  int rank = 0;
  WitnessDecomposition witness;
  bool within_bound = false;
  bool spans = false;
  bool dichotomy = false;
  bool parts_verified = false;
  bool minimal = false;
};

struct TheoremReport {
  ClassParams params;
  EnumLimits limits;
  std::vector<TheoremEntry> entries;
  std::size_t violations = 0;
};

namespace detail {

/// Brute-force re-check of a decomposition: s is a flat of m matching its
/// forbidden flat, each F_i avoids e_i, is a flat of m \ e_i, and matches its
/// forbidden flat.
inline bool witness_parts_hold(const Matroid& m, const HereditaryClass& c, const WitnessDecomposition& w) {
  const auto& forbidden = c.forbidden();
  if (!m.is_flat(w.s) || !brute_force_isomorphism(restrict(m, w.s), forbidden[w.s_forbidden_index].matroid)) return false;
  if (w.elements != elements_of(w.s) || w.parts.size() != w.elements.size()) return false;
  for (std::size_t i = 0; i < w.parts.size(); ++i) {
    const ElementId e = w.elements[i];
    const SubsetMask f = w.parts[i];
    if (f & bit(e)) return false;
    const int rf = m.rank(f);
    for (ElementId x = 0; x < m.size(); ++x) {
      if (x == e || (f & bit(x))) continue;
      if (m.rank(f | bit(x)) == rf) return false;
    }
    if (!brute_force_isomorphism(restrict(m, f), forbidden[w.part_forbidden_index[i]].matroid)) return false;
  }
  return true;
}

}  // namespace detail

/// Runs the search without the rank clamp and checks every found flat against
/// the rank ceiling, the spanning property of its witness, and the dichotomy:
/// a disjoint pair among {s, F_i} forces rank <= 2r; otherwise rank <= r + |F|(r-1).
inline TheoremReport verify_theorem_bound(const HereditaryClass& c, const EnumLimits& lim, int jobs = 1) {
  TheoremReport report;
  report.params = class_params(c);
  report.limits = lim;
  const SearchReport search = forbidden_flats_ext(c, lim, jobs, /*clamp_rank=*/false);
  const int r = report.params.r;
  report.entries.resize(search.found.size());
  parallel_for(search.found.size(), jobs, [&](std::size_t i) {
    const Matroid& m = search.found[i].matroid;
    TheoremEntry& e = report.entries[i];
    e.key = search.found[i].key;
    e.rank = m.rank();
    e.minimal = is_minimal_forbidden(m, extension_member(c, UniverseCheck::Verify));
    e.within_bound = m.rank() <= report.params.bound;
    e.witness = extract_witness(m, c, UniverseCheck::Assume);
    e.spans = e.witness.union_rank == m.rank();
    const int parts = static_cast<int>(e.witness.parts.size());
    e.dichotomy = e.witness.has_disjoint_pair() ? m.rank() <= 2 * r : m.rank() <= r + parts * (r - 1);
    e.parts_verified = detail::witness_parts_hold(m, c, e.witness);
  });
  for (const auto& e : report.entries) {
    if (!(e.minimal && e.within_bound && e.spans && e.dichotomy && e.parts_verified)) ++report.violations;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Oracle equivalence

/// Enumerate without clamp, test every candidate with a fresh unmemoized
/// predicate (universe membership recomputed), collect keys.
inline std::set<CanonicalKey> naive_forbidden_flats_ext(const HereditaryClass& c, const EnumLimits& lim) {
  std::set<CanonicalKey> out;
  for (const Matroid& m : enumerate_universe(c.universe(), lim, 1)) {
    if (is_minimal_forbidden(m, extension_member(c, UniverseCheck::Verify))) out.insert(canonical_form(m));
  }
  return out;
}

struct OracleReport {
  std::size_t search_count = 0;
  std::size_t oracle_count = 0;
  std::vector<CanonicalKey> missing;  // in oracle only
  std::vector<CanonicalKey> extra;    // in search only
  bool equal() const { return missing.empty() && extra.empty(); }
};

inline OracleReport verify_oracle(const HereditaryClass& c, const EnumLimits& lim, int jobs = 1) {
  const SearchReport search = forbidden_flats_ext(c, lim, jobs, /*clamp_rank=*/true);
  std::set<CanonicalKey> fast;
  for (const auto& f : search.found) fast.insert(f.key);
  const std::set<CanonicalKey> naive = naive_forbidden_flats_ext(c, lim);
  OracleReport r;
  r.search_count = fast.size();
  r.oracle_count = naive.size();
  std::set_difference(naive.begin(), naive.end(), fast.begin(), fast.end(), std::back_inserter(r.missing));
  std::set_difference(fast.begin(), fast.end(), naive.begin(), naive.end(), std::back_inserter(r.extra));
  return r;
}

// ---------------------------------------------------------------------------
// Rank-axiom corpus

/// A random simple matrix over GF(q): distinct nonzero projective points.
inline GFMatrix random_simple_matrix(std::mt19937& rng, int q, int rows, int cols) {
  const Field& field = Field::get(q);
  std::uniform_int_distribution<int> entry(0, q - 1);
  std::vector<std::vector<FieldElement>> chosen;
  int attempts = 0;
  while (static_cast<int>(chosen.size()) < cols && attempts++ < 10000) {
    std::vector<FieldElement> v(rows);
    for (auto& x : v) x = static_cast<FieldElement>(entry(rng));
    std::vector<FieldElement> w = v;
    if (!normalize_projective(field, w)) continue;
    bool dup = false;
    for (const auto& c : chosen) {
      std::vector<FieldElement> cw = c;
      normalize_projective(field, cw);
      dup = dup || cw == w;
    }
    if (!dup) chosen.push_back(v);
  }
  GFMatrix m{q, rows, static_cast<int>(chosen.size()), {}};
  m.entries.resize(static_cast<std::size_t>(rows) * chosen.size());
  for (int c = 0; c < m.cols; ++c) {
    for (int i = 0; i < rows; ++i) m.at(i, c) = chosen[c][i];
  }
  return m;
}

/// Matroids from every constructor: simple uniforms with r <= 4, n <= 8;
/// PG(1,2), PG(2,2), PG(2,3); random GF(2)/GF(3) matrices with n <= 8; and
/// direct sums, restrictions, deletions and extensions derived from them.
inline std::vector<Matroid> axiom_corpus(std::uint32_t seed = 20261015, int random_matrices = 200) {
  std::vector<Matroid> out;
  for (int n = 0; n <= 8; ++n) {
    for (int r = 0; r <= std::min(4, n); ++r) {
      if ((r == 0 && n > 0) || (r == 1 && n > 1)) continue;
      out.push_back(uniform(r, n));
    }
  }
  out.push_back(projective_geometry(1, 2));
  out.push_back(projective_geometry(2, 2));
  out.push_back(projective_geometry(2, 3));
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> rows_dist(1, 4);
  std::uniform_int_distribution<int> cols_dist(1, 8);
  for (int i = 0; i < random_matrices; ++i) {
    const int q = i % 2 == 0 ? 2 : 3;
    out.push_back(from_matrix(random_simple_matrix(rng, q, rows_dist(rng), cols_dist(rng))));
  }
  const std::size_t base = out.size();
  for (std::size_t i = 0; i + 1 < base; i += 7) {
    if (out[i].size() + out[i + 1].size() <= 10) out.push_back(direct_sum(out[i], out[i + 1]));
  }
  for (std::size_t i = 0; i < base; i += 3) {
    const Matroid m = out[i];
    if (m.size() == 0) continue;
    out.push_back(deletion(m, m.size() - 1));
    const auto& flats = m.flats();
    out.push_back(restrict(m, flats[flats.size() / 2]));
    out.push_back(restrict(m, m.ground() & 0x55u));
  }
  for (std::size_t i = 0; i < base; i += 11) {
    if (out[i].size() <= 6) {
      for (const Matroid& e : extensions(out[i])) out.push_back(e);
    }
  }
  return out;
}

/// A copy of a valid table with one entry changed so that an axiom is
/// certainly broken: r(empty) > 0, r(A) > |A|, a jump of 2, or a decrease.
inline RankTable mutate_table(const RankTable& t, std::mt19937& rng) {
  RankTable out = t;
  const std::size_t size = t.ranks.size();
  std::uniform_int_distribution<std::size_t> pick(1, size > 1 ? size - 1 : 1);
  std::uniform_int_distribution<int> kind_dist(0, 3);
  const int kind = size > 1 ? kind_dist(rng) : 0;
  if (kind == 0) {
    out.ranks[0] = 1;
    return out;
  }
  const auto a = static_cast<SubsetMask>(pick(rng));
  const auto elems = elements_of(a);
  const ElementId e = elems[std::uniform_int_distribution<std::size_t>(0, elems.size() - 1)(rng)];
  const int below = t.ranks[a & ~bit(e)];
  if (kind == 1) {
    out.ranks[a] = static_cast<std::uint8_t>(popcount(a) + 1);
  } else if (kind == 2 || below == 0) {
    out.ranks[a] = static_cast<std::uint8_t>(below + 2);
  } else {
    out.ranks[a] = static_cast<std::uint8_t>(below - 1);
  }
  return out;
}

struct AxiomReport {
  std::size_t constructed = 0;
  std::size_t constructed_invalid = 0;
  std::size_t mutated = 0;
  std::size_t mutated_accepted = 0;
  std::size_t violations() const { return constructed_invalid + mutated_accepted; }
};

inline AxiomReport verify_axioms(std::uint32_t seed = 20261015, int mutations = 50) {
  AxiomReport r;
  const std::vector<Matroid> corpus = axiom_corpus(seed);
  for (const Matroid& m : corpus) {
    ++r.constructed;
    if (!validate(m.table())) ++r.constructed_invalid;
  }
  std::mt19937 rng(seed + 1);
  for (int i = 0; i < mutations; ++i) {
    const Matroid& m = corpus[std::uniform_int_distribution<std::size_t>(0, corpus.size() - 1)(rng)];
    ++r.mutated;
    if (validate(mutate_table(m.table(), rng))) ++r.mutated_accepted;
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const LemmaReport& r) {
  Json j;
  j["suite"] = "lemma";
  j["matroids"] = r.matroids;
  j["members"] = r.members;
  j["flats_checked"] = r.flats_checked;
  j["violations"] = r.violations;
  Json ce = Json::array();
  for (const auto& c : r.counterexamples) ce.push_back(Json{{"canonical", c.key.hex()}, {"flat", format_set(c.flat)}});
  j["counterexamples"] = ce;
  return j;
}

inline Json to_json(const TheoremReport& r) {
  Json j;
  j["suite"] = "theorem";
  j["params"] = params_json(r.params);
  j["limits"] = Json{{"max_elements", r.limits.max_elements}, {"max_rank", r.limits.max_rank}};
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json x;
    x["canonical"] = e.key.hex();
    x["n"] = e.key.n;
    x["rank"] = e.rank;
    x["minimal"] = e.minimal;
    x["within_bound"] = e.within_bound;
    x["spans"] = e.spans;
    x["dichotomy"] = e.dichotomy;
    x["parts_verified"] = e.parts_verified;
    x["witness"] = to_json(e.witness);
    entries.push_back(x);
  }
  j["found"] = entries;
  j["violations"] = r.violations;
  return j;
}

inline Json to_json(const OracleReport& r) {
  Json j;
  j["suite"] = "oracle";
  j["search_count"] = r.search_count;
  j["oracle_count"] = r.oracle_count;
  Json missing = Json::array(), extra = Json::array();
  for (const auto& k : r.missing) missing.push_back(k.hex());
  for (const auto& k : r.extra) extra.push_back(k.hex());
  j["missing"] = missing;
  j["extra"] = extra;
  j["equal"] = r.equal();
  j["violations"] = r.missing.size() + r.extra.size();
  return j;
}

inline Json to_json(const AxiomReport& r) {
  Json j;
  j["suite"] = "axioms";
  j["constructed"] = r.constructed;
  j["constructed_invalid"] = r.constructed_invalid;
  j["mutated"] = r.mutated;
  j["mutated_accepted"] = r.mutated_accepted;
  j["violations"] = r.violations();
  return j;
}

}  // namespace flatclass
