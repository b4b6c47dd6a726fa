// Acceptance gate: one PASS/FAIL line per criterion, with its runtime limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>

#include "flatclass/flatclass.hpp"
#include "oracles.hpp"

using namespace flatclass;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3fs < %.0fs", secs, limit_seconds);
  std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << title << "  [" << timing
            << (in_time ? "" : " exceeded") << "]  " << o.detail << std::endl;
}

std::set<CanonicalKey> keys(const std::vector<Matroid>& ms) {
  std::set<CanonicalKey> out;
  for (const Matroid& m : ms) out.insert(canonical_form(m));
  return out;
}

std::string theorem_json(int jobs) { return to_json(verify_theorem_bound(binary_targets(), {7, 7}, jobs)).dump(); }
std::string search_json(int jobs) { return to_json(forbidden_flats_ext(binary_targets(), {7, 7}, jobs)).dump(); }
std::string oracle_json(int jobs) { return to_json(verify_oracle(binary_targets(), {6, 6}, jobs)).dump(); }

}  // namespace

int main() {
  const HereditaryClass targets = binary_targets();

  criterion(1, "rank axioms hold on the constructed corpus; mutated tables fail", 30, [] {
    const AxiomReport r = verify_axioms(20261015, 50);
    // Independent check of the corpus with the all-pairs axiom oracle.
    std::size_t oracle_bad = 0;
    for (const Matroid& m : axiom_corpus(20261015)) {
      if (!oracle::global_axioms(m.table().ranks, m.size())) ++oracle_bad;
    }
    return Outcome{r.violations() == 0 && oracle_bad == 0 && r.mutated == 50,
                   "constructed=" + std::to_string(r.constructed) + " invalid=" + std::to_string(r.constructed_invalid) +
                       " oracle_invalid=" + std::to_string(oracle_bad) + " mutated=" + std::to_string(r.mutated) +
                       " mutated_accepted=" + std::to_string(r.mutated_accepted)};
  });

  criterion(2, "binary targets: U(3,3) and U(2,3)+U(1,1) are minimal forbidden flats", 1, [&] {
    bool ok = true;
    const std::vector<Matroid> listed{uniform(3, 3), direct_sum(uniform(2, 3), uniform(1, 1))};
    for (std::size_t i = 0; i < listed.size(); ++i) {
      const MembershipVerdict v = in_class(listed[i], targets);
      ok = ok && !v.in_class && !v.universe_violation && v.witness_flat == listed[i].ground() &&
           v.witness_forbidden_index == i && is_minimal_forbidden(listed[i], class_member(targets));
    }
    return Outcome{ok, "witness = whole ground set for both"};
  });

  criterion(3, "class parameters of binary targets are r=3, k=4, bound=11", 1, [&] {
    const ClassParams p = class_params(targets);
    return Outcome{p == ClassParams{3, 4, 11} && rank_bound(3, 4) == std::max(2 * 3, 3 + 4 * 2),
                   "r=" + std::to_string(p.r) + " k=" + std::to_string(p.k) + " bound=" + std::to_string(p.bound)};
  });

  criterion(4, "extension class is closed under flats on binary matroids with <= 7 elements", 300, [&] {
    const LemmaReport r = verify_lemma(targets, {7, 7}, 1);
    // Coverage: the enumeration contains every point subset of PG(3,2) of size <= 7.
    const GFMatrix pg = projective_geometry_matrix(3, 2);
    std::set<CanonicalKey> subsets;
    for (SubsetMask s = 0; s < (SubsetMask{1} << pg.cols); ++s) {
      if (popcount(s) > 7) continue;
      GFMatrix a{2, pg.rows, 0, {}};
      std::vector<ElementId> cols = elements_of(s);
      a.cols = static_cast<int>(cols.size());
      a.entries.resize(static_cast<std::size_t>(a.rows) * a.cols);
      for (int c = 0; c < a.cols; ++c) {
        for (int i = 0; i < a.rows; ++i) a.at(i, c) = pg.at(i, cols[c]);
      }
      subsets.insert(canonical_form(from_matrix(a)));
    }
    std::set<CanonicalKey> enumerated_rank4;
    for (const Matroid& m : enumerate_universe(targets.universe(), {7, 4})) enumerated_rank4.insert(canonical_form(m));
    const bool covered = subsets == enumerated_rank4;
    return Outcome{r.violations == 0 && covered,
                   "matroids=" + std::to_string(r.matroids) + " members=" + std::to_string(r.members) +
                       " flats_checked=" + std::to_string(r.flats_checked) + " violations=" + std::to_string(r.violations) +
                       " pg32_subset_classes=" + std::to_string(subsets.size()) + (covered ? " covered" : " NOT covered")};
  });

  criterion(5, "unclamped search to 7 elements: rank <= 11, witnesses span, dichotomy holds", 600, [&] {
    const TheoremReport r = verify_theorem_bound(targets, {7, 7}, 1);
    int max_rank = 0;
    for (const auto& e : r.entries) max_rank = std::max(max_rank, e.rank);
    return Outcome{r.violations == 0 && !r.entries.empty(),
                   "found=" + std::to_string(r.entries.size()) + " max_rank=" + std::to_string(max_rank) +
                       " violations=" + std::to_string(r.violations)};
  });

  criterion(6, "U(4,4) is a forbidden flat of the extension class", 60, [&] {
    const SearchReport r = forbidden_flats_ext(targets, {4, 4});
    bool found = false;
    for (const auto& f : r.found) found = found || f.key == canonical_form(uniform(4, 4));
    // Brute-force argument, independent of the search.
    const Matroid u44 = uniform(4, 4);
    bool deletions = true, proper = true;
    for (ElementId e = 0; e < 4; ++e) {
      deletions = deletions && oracle::isomorphic(deletion(u44, e).table().ranks, uniform(3, 3).table().ranks, 3);
    }
    for (SubsetMask f : u44.flats()) {
      if (f == u44.ground()) continue;
      const Matroid sub = restrict(u44, f);
      proper = proper && sub.rank() == sub.size() && in_extension_class(sub, targets).in_extension;
    }
    const bool outside = !in_extension_class(u44, targets).in_extension;
    return Outcome{found && deletions && proper && outside,
                   std::string("search ") + (found ? "contains" : "misses") + " U(4,4); deletions all U(3,3): " +
                       (deletions ? "yes" : "no") + "; proper flats free and in extension: " + (proper ? "yes" : "no")};
  });

  criterion(7, "clamped memoized search equals the naive oracle on GF(2) up to 6 elements", 300, [&] {
    bool ok = true;
    std::string counts;
    for (int n = 0; n <= 6; ++n) {
      const OracleReport r = verify_oracle(targets, {n, n}, 1);
      ok = ok && r.equal();
      counts += (n ? "," : "") + std::to_string(r.search_count);
    }
    return Outcome{ok, "found per max_elements 0..6 = " + counts};
  });

  criterion(8, "canonical keys agree with brute-force isomorphism on 200 random pairs", 120, [] {
    std::vector<Matroid> pool;
    for (const Matroid& m : axiom_corpus(20261015)) {
      if (m.size() >= 1 && m.size() <= 7) pool.push_back(m);
    }
    std::mt19937 rng(8);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    int agree = 0, iso = 0;
    for (int i = 0; i < 200; ++i) {
      const Matroid& a = pool[pick(rng)];
      Matroid b = pool[pick(rng)];
      if (i % 3 == 0) {
        // A relabelled copy, so that isomorphic pairs are well represented.
        std::vector<ElementId> p(a.size());
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        b = relabel(a, p);
      } else if (i % 3 == 1) {
        // Same size and rank where possible.
        for (int t = 0; t < 50 && (b.size() != a.size() || b.rank() != a.rank()); ++t) b = pool[pick(rng)];
      }
      const bool brute = brute_force_isomorphism(a, b).has_value();
      iso += brute;
      agree += (canonical_form(a) == canonical_form(b)) == brute;
    }
    return Outcome{agree == 200, "agree=" + std::to_string(agree) + "/200 isomorphic_pairs=" + std::to_string(iso)};
  });

  criterion(9, "enumeration of all simple matroids up to 4 elements matches brute force", 60, [] {
    std::set<CanonicalKey> brute;
    for (int n = 0; n <= 4; ++n) {
      for (const auto& t : oracle::dedup_isomorphic(oracle::all_simple_tables(n), n)) {
        brute.insert(canonical_form(Matroid::from_table(RankTable(n, t))));
      }
    }
    const auto got = enumerate_universe(Universe::all(), {4, 4});
    const std::set<CanonicalKey> k = keys(got);
    return Outcome{k == brute && k.size() == got.size(),
                   "enumerated=" + std::to_string(got.size()) + " brute_force=" + std::to_string(brute.size())};
  });

  criterion(10, "reports of criteria 5-7 are byte-identical with 1 and 4 jobs", 600, [] {
    const bool theorem = theorem_json(1) == theorem_json(4);
    const bool search = search_json(1) == search_json(4);
    const bool oracle_same = oracle_json(1) == oracle_json(4);
    return Outcome{theorem && search && oracle_same, std::string("theorem ") + (theorem ? "same" : "differs") +
                                                         ", search " + (search ? "same" : "differs") + ", oracle " +
                                                         (oracle_same ? "same" : "differs")};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
