#include "catch_amalgamated.hpp"

#include "flatclass/flatclass.hpp"

using namespace flatclass;

namespace {

HereditaryClass single(const Matroid& f, const std::string& label, Universe u = Universe::all()) {
  return HereditaryClass(label, u, {{f, label}});
}

std::set<CanonicalKey> found_keys(const SearchReport& r) {
  std::set<CanonicalKey> out;
  for (const auto& f : r.found) out.insert(f.key);
  return out;
}

}  // namespace

TEST_CASE("class parameters") {
  CHECK(class_params(binary_targets()) == ClassParams{3, 4, 11});
  CHECK(class_params(single(uniform(2, 3), "U(2,3)")) == ClassParams{2, 3, 5});
  CHECK(class_params(single(uniform(1, 1), "U(1,1)")) == ClassParams{1, 1, 2});
  CHECK(class_params(single(projective_geometry(2, 2), "F7")) == ClassParams{3, 7, 17});
  for (int r = 1; r <= 6; ++r) {
    for (int k = r; k <= 12; ++k) CHECK(rank_bound(r, k) == std::max(2 * r, r + k * (r - 1)));
  }
  try {
    class_params(HereditaryClass("empty", Universe::all(), {}));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyForbiddenList);
  }
}

TEST_CASE("U(4,4) is a forbidden flat of the binary-targets extension") {
  const HereditaryClass c = binary_targets();
  const SearchReport r = forbidden_flats_ext(c, {4, 4});
  CHECK(found_keys(r).count(canonical_form(uniform(4, 4))) == 1);
  CHECK(r.params == ClassParams{3, 4, 11});
  CHECK(r.effective_max_rank == 4);
  CHECK_FALSE(r.complete);
  CHECK(std::is_sorted(r.found.begin(), r.found.end(), [](const FoundFlat& a, const FoundFlat& b) { return a.key < b.key; }));
  // Independent argument: each deletion is U(3,3), each proper flat is free on at most three elements.
  for (ElementId e = 0; e < 4; ++e) CHECK(brute_force_isomorphism(deletion(uniform(4, 4), e), uniform(3, 3)).has_value());
  for (SubsetMask f : uniform(4, 4).flats()) {
    if (f != 0b1111) CHECK(in_extension_class(restrict(uniform(4, 4), f), c).in_extension);
  }
}

TEST_CASE("the rank limit is clamped to the bound") {
  const SearchReport r = forbidden_flats_ext(single(uniform(1, 1), "U(1,1)"), {5, 5});
  CHECK(r.effective_max_rank == 2);
  const SearchReport unclamped = forbidden_flats_ext(single(uniform(1, 1), "U(1,1)"), {5, 5}, 1, false);
  CHECK(unclamped.effective_max_rank == 5);
  CHECK(found_keys(r) == found_keys(unclamped));
}

TEST_CASE("forbidding a point in GF(2)") {
  // Only the empty matroid is in the class, so the extension holds the empty
  // matroid and a single point; U(2,2) and U(2,3) are its forbidden flats.
  const HereditaryClass c = single(uniform(1, 1), "U(1,1)", Universe::representable(2));
  const SearchReport r = forbidden_flats_ext(c, {3, 3});
  CHECK(found_keys(r) == std::set<CanonicalKey>{canonical_form(uniform(2, 2)), canonical_form(uniform(2, 3))});
  CHECK(r.complete);
  CHECK_FALSE(forbidden_flats_ext(c, {2, 3}).complete);
  CHECK_FALSE(forbidden_flats_ext(c, {3, 1}).complete);
}

TEST_CASE("forbidding a point among all matroids finds every line") {
  const SearchReport r = forbidden_flats_ext(single(uniform(1, 1), "U(1,1)"), {6, 6});
  std::set<CanonicalKey> lines;
  for (int n = 2; n <= 6; ++n) lines.insert(canonical_form(uniform(2, n)));
  CHECK(found_keys(r) == lines);
  CHECK_FALSE(r.complete);
  CHECK(r.universe_note.find("partial") != std::string::npos);
}

TEST_CASE("search soundness against a fresh predicate") {
  for (const HereditaryClass& c :
       {binary_targets(), single(uniform(2, 3), "U(2,3)", Universe::representable(3)), single(uniform(2, 3), "U(2,3)")}) {
    const SearchReport r = forbidden_flats_ext(c, {6, 6});
    for (const auto& f : r.found) {
      CHECK(is_minimal_forbidden(f.matroid, extension_member(c, UniverseCheck::Verify)));
      CHECK(f.matroid.rank() <= r.params.bound);
    }
  }
}

TEST_CASE("membership memo agrees with direct evaluation") {
  const HereditaryClass c = binary_targets();
  MembershipMemo memo(c);
  const auto ms = enumerate_universe(c.universe(), {6, 4});
  std::vector<char> a(ms.size()), b(ms.size());
  parallel_for(ms.size(), 4, [&](std::size_t i) { a[i] = memo.in_extension(ms[i]); });
  for (std::size_t i = 0; i < ms.size(); ++i) {
    b[i] = in_extension_class(ms[i], c).in_extension;
    CHECK(memo.in_class(ms[i]) == in_class(ms[i], c).in_class);
  }
  CHECK(a == b);
}

TEST_CASE("witness for U(4,4)") {
  const WitnessDecomposition w = extract_witness(uniform(4, 4), binary_targets());
  CHECK(w.s == SubsetMask{0b0111});
  CHECK(w.s_forbidden_index == 0);
  CHECK(w.elements == std::vector<ElementId>{0, 1, 2});
  REQUIRE(w.parts.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(popcount(w.parts[i]) == 3);
    CHECK((w.parts[i] & bit(w.elements[i])) == 0);
    CHECK(w.part_forbidden_index[i] == 0);
  }
  CHECK(w.parts[0] == SubsetMask{0b1110});
  CHECK(w.union_rank == 4);
  CHECK_FALSE(w.has_disjoint_pair());
  const Json j = to_json(w);
  CHECK(j["s"] == "{0,1,2}");
  CHECK(j["union_rank"] == 4);
}

TEST_CASE("witness extraction rejects non-forbidden matroids") {
  const HereditaryClass c = binary_targets();
  for (const Matroid& m : {projective_geometry(2, 2), uniform(3, 3), uniform(2, 3)}) {
    try {
      extract_witness(m, c);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotForbidden);
    }
  }
}

TEST_CASE("witnesses span and satisfy the dichotomy") {
  for (const HereditaryClass& c : {binary_targets(), single(uniform(2, 3), "U(2,3)"), single(uniform(1, 1), "U(1,1)")}) {
    const ClassParams p = class_params(c);
    for (const auto& f : forbidden_flats_ext(c, {6, 6}, 2, false).found) {
      const WitnessDecomposition w = extract_witness(f.matroid, c);
      CHECK(w.union_rank == f.matroid.rank());
      CHECK(f.matroid.rank(w.union_mask()) == w.union_rank);
      if (w.has_disjoint_pair()) {
        CHECK(f.matroid.rank() <= 2 * p.r);
      } else {
        CHECK(f.matroid.rank() <= p.r + static_cast<int>(w.parts.size()) * (p.r - 1));
      }
      CHECK(detail::witness_parts_hold(f.matroid, c, w));
    }
  }
}

TEST_CASE("lemma suite") {
  const LemmaReport r = verify_lemma(binary_targets(), {6, 6}, 2);
  CHECK(r.violations == 0);
  CHECK(r.members > 0);
  CHECK(r.flats_checked > r.members);
  CHECK(verify_lemma(HereditaryClass("empty", Universe::all(), {}), {4, 4}).violations == 0);
  const LemmaReport tiny = verify_lemma(binary_targets(), {0, 0});
  CHECK(tiny.matroids == 1);
  CHECK(tiny.violations == 0);
  CHECK(verify_lemma(single(uniform(2, 3), "U(2,3)"), {5, 5}).violations == 0);
}

TEST_CASE("theorem suite") {
  const TheoremReport r = verify_theorem_bound(binary_targets(), {6, 6}, 2);
  CHECK(r.violations == 0);
  CHECK_FALSE(r.entries.empty());
  for (const auto& e : r.entries) {
    CHECK(e.rank <= 11);
    CHECK(e.spans);
    CHECK(e.dichotomy);
    CHECK(e.parts_verified);
  }
  const TheoremReport point = verify_theorem_bound(single(uniform(1, 1), "U(1,1)"), {5, 5});
  CHECK(point.violations == 0);
  for (const auto& e : point.entries) CHECK(e.rank <= 2);
  // Below the smallest forbidden flat nothing is found.
  CHECK(verify_theorem_bound(binary_targets(), {2, 2}).entries.empty());
}

TEST_CASE("oracle suite") {
  const OracleReport r = verify_oracle(binary_targets(), {5, 5}, 2);
  CHECK(r.equal());
  CHECK(r.search_count == r.oracle_count);
  CHECK(r.search_count > 0);
  CHECK(verify_oracle(single(uniform(2, 3), "U(2,3)", Universe::representable(3)), {5, 5}).equal());
}

TEST_CASE("axiom suite") {
  const AxiomReport r = verify_axioms(7, 50);
  CHECK(r.constructed >= 200);
  CHECK(r.mutated == 50);
  CHECK(r.violations() == 0);
}

TEST_CASE("reports are byte-stable across jobs and relabelled inputs") {
  const HereditaryClass c = binary_targets();
  const std::string a = to_json(forbidden_flats_ext(c, {6, 6}, 1)).dump();
  const std::string b = to_json(forbidden_flats_ext(c, {6, 6}, 4)).dump();
  CHECK(a == b);
  const HereditaryClass permuted(
      "binary-targets", Universe::representable(2),
      {{relabel(uniform(3, 3), {1, 2, 0}), "U(3,3)"},
       {relabel(direct_sum(uniform(2, 3), uniform(1, 1)), {3, 0, 2, 1}), "U(2,3)+U(1,1)"}});
  CHECK(to_json(forbidden_flats_ext(permuted, {6, 6}, 3)).dump() == a);
  const Json j = Json::parse(a);
  std::vector<std::string> fields;
  for (auto it = j.begin(); it != j.end(); ++it) fields.push_back(it.key());
  CHECK(fields == std::vector<std::string>{"class", "params", "limits", "complete", "universe_note", "found"});
  CHECK(j["params"]["bound"] == 11);
  CHECK(j["found"][0].contains("canonical"));
}
