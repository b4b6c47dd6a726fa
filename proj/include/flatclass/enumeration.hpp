#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "flatclass/canonical.hpp"
#include "flatclass/classes.hpp"
#include "flatclass/io.hpp"
#include "flatclass/linear.hpp"
#include "flatclass/matroid.hpp"
#include "flatclass/parallel.hpp"

namespace flatclass {

/// Flats of a base matroid that receive the new element in their closure.
struct ModularCut {
  std::vector<SubsetMask> flats;  // ascending

  bool contains(SubsetMask f) const { return std::binary_search(flats.begin(), flats.end(), f); }
  friend bool operator==(const ModularCut&, const ModularCut&) = default;
};

struct EnumLimits {
  int max_elements = 0;
  int max_rank = 0;
};

inline bool is_modular_pair(const Matroid& m, SubsetMask a, SubsetMask b) {
  return m.rank(a) + m.rank(b) == m.rank(a | b) + m.rank(a & b);
}

/// Up-closed, closed under modular intersections, no flat of rank < 2.
inline bool is_modular_cut(const Matroid& m, const ModularCut& cut) {
  for (SubsetMask f : cut.flats) {
    if ((f & ~m.ground()) != 0 || !m.is_flat(f) || m.rank(f) < 2) return false;
  }
  for (SubsetMask g : m.flats()) {
    if (cut.contains(g)) continue;
    for (SubsetMask f : cut.flats) {
      if ((f & g) == f) return false;
    }
  }
  for (SubsetMask f : cut.flats) {
    for (SubsetMask g : cut.flats) {
      if (is_modular_pair(m, f, g) && !cut.contains(f & g)) return false;
    }
  }
  return true;
}

/// The single-element extension of m by a new element n placed according to cut:
/// r'(A + e) = r(A) if cl(A) is in the cut, else r(A) + 1.
inline Matroid extend_by_cut(const Matroid& m, const ModularCut& cut) {
  if (!is_modular_cut(m, cut)) throw Error(ErrorKind::InvalidCut, "flat family is not a modular cut of rank >= 2 flats");
  const int n = m.size();
  if (n + 1 > kGroundSetCap) throw Error(ErrorKind::TooLarge, "extension exceeds the ground-set cap");
  std::vector<char> in_cut(std::size_t{1} << n, 0);
  for (SubsetMask f : cut.flats) in_cut[f] = 1;
  RankTable t = RankTable::zeros(n + 1);
  const SubsetMask count = SubsetMask{1} << n;
  for (SubsetMask a = 0; a < count; ++a) {
    const int r = m.rank(a);
    t.ranks[a] = static_cast<std::uint8_t>(r);
    t.ranks[a | bit(n)] = static_cast<std::uint8_t>(in_cut[m.closure(a)] ? r : r + 1);
  }
  return Matroid::from_valid_table(std::move(t));
}

namespace detail {

/// Backtracking over flats from the top of the lattice. Choosing a flat
/// requires all of its covers to be chosen already; every modular pair among
/// chosen flats forces its meet, which always lies lower in the order.
class CutEnumerator {
 public:
  explicit CutEnumerator(const Matroid& m) : m_(m) {
    order_ = m.flats();
    std::stable_sort(order_.begin(), order_.end(),
                     [&](SubsetMask a, SubsetMask b) { return m.rank(a) > m.rank(b); });
    position_.assign(std::size_t{1} << m.size(), -1);
    for (std::size_t i = 0; i < order_.size(); ++i) position_[order_[i]] = static_cast<int>(i);
    covers_.resize(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const SubsetMask f = order_[i], g = order_[j];
        if ((f & g) == f && m.rank(g) == m.rank(f) + 1) covers_[i].push_back(static_cast<int>(j));
      }
    }
    state_.assign(order_.size(), 0);
    forced_.assign(order_.size(), 0);
  }

  std::vector<ModularCut> run() {
    search(0);
    return std::move(cuts_);
  }

 private:
  void search(std::size_t p) {
    if (p == order_.size()) {
      ModularCut cut;
      for (int i : chosen_) cut.flats.push_back(order_[i]);
      std::sort(cut.flats.begin(), cut.flats.end());
      cuts_.push_back(std::move(cut));
      return;
    }
    const SubsetMask f = order_[p];
    const bool forced = forced_[p] > 0;
    if (m_.rank(f) >= 2 && can_choose(p)) {
      std::vector<int> pushed;
      bool ok = true;
      for (int q : chosen_) {
        const SubsetMask g = order_[q];
        if (!is_modular_pair(m_, f, g)) continue;
        const int meet = position_[f & g];
        if (meet == static_cast<int>(p)) continue;
        if (m_.rank(order_[meet]) < 2) {
          ok = false;
          break;
        }
        ++forced_[meet];
        pushed.push_back(meet);
      }
      if (ok) {
        state_[p] = 1;
        chosen_.push_back(static_cast<int>(p));
        search(p + 1);
        chosen_.pop_back();
      }
      for (int meet : pushed) --forced_[meet];
    }
    if (!forced) {
      state_[p] = 2;
      search(p + 1);
    }
    state_[p] = 0;
  }

  bool can_choose(std::size_t p) const {
    for (int c : covers_[p]) {
      if (state_[c] != 1) return false;
    }
    return true;
  }

  const Matroid& m_;
  std::vector<SubsetMask> order_;
  std::vector<int> position_;
  std::vector<std::vector<int>> covers_;
  std::vector<int> state_;  // 0 undecided, 1 in, 2 out
  std::vector<int> forced_;
  std::vector<int> chosen_;
  std::vector<ModularCut> cuts_;
};

}  // namespace detail

/// Every modular cut of m avoiding flats of rank 0 and 1 (simple extensions only).
inline std::vector<ModularCut> modular_cuts(const Matroid& m) { return detail::CutEnumerator(m).run(); }

/// All simple single-element extensions of m up to isomorphism, sorted by
/// canonical key. The new element is the last one.
inline std::vector<Matroid> extensions(const Matroid& m) {
  if (m.size() + 1 > kCanonicalCap) throw Error(ErrorKind::TooLarge, "extensions exceed the canonicalization cap");
  std::map<CanonicalKey, Matroid> seen;
  for (const ModularCut& cut : modular_cuts(m)) {
    Matroid ext = extend_by_cut(m, cut);
    seen.try_emplace(canonical_form(ext), ext);
  }
  std::vector<Matroid> out;
  for (auto& [key, ext] : seen) out.push_back(ext);
  return out;
}

namespace detail {

inline void check_limits(const Universe& u, const EnumLimits& lim) {
  if (lim.max_elements < 0 || lim.max_rank < 0) throw Error(ErrorKind::InvalidArgument, "limits must be nonnegative");
  if (lim.max_elements > kCanonicalCap) {
    throw Error(ErrorKind::TooLarge, "max_elements " + std::to_string(lim.max_elements) + " exceeds cap " +
                                         std::to_string(kCanonicalCap));
  }
  if (u.kind == Universe::Kind::Representable && u.q > 3 && lim.max_elements > kEmbeddingCap) {
    throw Error(ErrorKind::TooLarge, "GF(" + std::to_string(u.q) + ") enumeration is capped at " +
                                         std::to_string(kEmbeddingCap) + " elements");
  }
}

struct Represented {
  Matroid matroid;
  GFMatrix matrix;
};

inline Represented canonical_represented(const GFMatrix& a) {
  Matroid m = from_matrix(a);
  CanonicalLabeling lab = canonical_labeling(m);
  GFMatrix b{a.q, a.rows, a.cols, std::vector<FieldElement>(a.entries.size())};
  for (int c = 0; c < a.cols; ++c) {
    for (int i = 0; i < a.rows; ++i) b.at(i, c) = a.at(i, lab.permutation[c]);
  }
  Matroid canon = relabel(m, lab.permutation);
  cached_canonical_form_impl(canon, [&](const Matroid&) { return lab.key; });
  return {canon, b};
}

/// Children of a represented matroid: the coloop extension and every new
/// projective point in the current column span.
inline std::vector<GFMatrix> point_extensions(const GFMatrix& a, int max_rank) {
  const Field& field = Field::get(a.q);
  std::vector<GFMatrix> out;
  if (a.rows + 1 <= max_rank) {
    GFMatrix b{a.q, a.rows + 1, a.cols + 1, {}};
    b.entries.assign(static_cast<std::size_t>(b.rows) * b.cols, 0);
    for (int i = 0; i < a.rows; ++i) {
      for (int c = 0; c < a.cols; ++c) b.at(i, c) = a.at(i, c);
    }
    b.at(a.rows, a.cols) = 1;
    out.push_back(std::move(b));
  }
  if (a.rows == 0) return out;
  std::set<std::vector<FieldElement>> existing;
  for (int c = 0; c < a.cols; ++c) {
    std::vector<FieldElement> v = a.column(c);
    normalize_projective(field, v);
    existing.insert(std::move(v));
  }
  std::vector<FieldElement> v(a.rows, 0);
  long long total = 1;
  for (int i = 0; i < a.rows; ++i) total *= a.q;
  for (long long code = 1; code < total; ++code) {
    long long x = code;
    for (int i = a.rows - 1; i >= 0; --i) {
      v[i] = static_cast<FieldElement>(x % a.q);
      x /= a.q;
    }
    std::vector<FieldElement> w = v;
    normalize_projective(field, w);
    if (w != v || existing.count(v)) continue;
    GFMatrix b{a.q, a.rows, a.cols + 1, {}};
    b.entries.assign(static_cast<std::size_t>(b.rows) * b.cols, 0);
    for (int i = 0; i < a.rows; ++i) {
      for (int c = 0; c < a.cols; ++c) b.at(i, c) = a.at(i, c);
      b.at(i, a.cols) = v[i];
    }
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<Matroid> enumerate_by_extensions(const EnumLimits& lim, int jobs, int filter_q) {
  std::vector<Matroid> out{Matroid()};
  std::vector<Matroid> level{Matroid()};
  (void)canonical_form(level.front());
  for (int n = 0; n < lim.max_elements; ++n) {
    std::vector<std::vector<Matroid>> children(level.size());
    parallel_for(level.size(), jobs, [&](std::size_t i) {
      for (const Matroid& ext : extensions(level[i])) {
        if (ext.rank() > lim.max_rank) continue;
        if (filter_q != 0 && !is_representable(ext, filter_q)) continue;
        CanonicalLabeling lab = canonical_labeling(ext);
        Matroid canon = relabel(ext, lab.permutation);
        cached_canonical_form_impl(canon, [&](const Matroid&) { return lab.key; });
        children[i].push_back(canon);
      }
    });
    std::map<CanonicalKey, Matroid> next;
    for (auto& group : children) {
      for (auto& c : group) next.try_emplace(canonical_form(c), c);
    }
    level.clear();
    for (auto& [key, m] : next) level.push_back(m);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Point-set growth. GF(2) and GF(3) representations are unique up to
/// projective equivalence, so one stored matrix per isomorphism class reaches
/// every child class.
inline std::vector<Matroid> enumerate_by_points(int q, const EnumLimits& lim, int jobs) {
  std::vector<Matroid> out{Matroid()};
  std::vector<Represented> level{{Matroid(), GFMatrix{q, 0, 0, {}}}};
  for (int n = 0; n < lim.max_elements; ++n) {
    std::vector<std::vector<Represented>> children(level.size());
    parallel_for(level.size(), jobs, [&](std::size_t i) {
      for (const GFMatrix& b : point_extensions(level[i].matrix, lim.max_rank)) {
        children[i].push_back(canonical_represented(b));
      }
    });
    std::map<CanonicalKey, Represented> next;
    for (auto& group : children) {
      for (auto& c : group) next.try_emplace(canonical_form(c.matroid), c);
    }
    level.clear();
    for (auto& [key, r] : next) {
      level.push_back(r);
      out.push_back(r.matroid);
    }
  }
  return out;
}

}  // namespace detail

/// Every simple matroid of the universe with at most max_elements elements and
/// rank at most max_rank, once per isomorphism class, as canonically labelled
/// representatives ordered by (n, rank, canonical key).
inline std::vector<Matroid> enumerate_universe(const Universe& u, const EnumLimits& lim, int jobs = 1) {
  detail::check_limits(u, lim);
  std::vector<Matroid> out;
  if (u.kind == Universe::Kind::All) {
    out = detail::enumerate_by_extensions(lim, jobs, 0);
  } else if (u.q <= 3) {
    out = detail::enumerate_by_points(u.q, lim, jobs);
  } else {
    out = detail::enumerate_by_extensions(lim, jobs, u.q);
  }
  std::sort(out.begin(), out.end(),
            [](const Matroid& a, const Matroid& b) { return canonical_form(a) < canonical_form(b); });
  return out;
}

/// Same as enumerate_universe for GF(q) universes, but via modular-cut
/// extensions filtered by is_representable. Used to cross-check point growth.
inline std::vector<Matroid> enumerate_representable_by_extensions(int q, const EnumLimits& lim, int jobs = 1) {
  detail::check_limits(Universe::representable(q), lim);
  if (lim.max_elements > kEmbeddingCap) throw Error(ErrorKind::TooLarge, "embedding cap exceeded");
  auto out = detail::enumerate_by_extensions(lim, jobs, q);
  std::sort(out.begin(), out.end(),
            [](const Matroid& a, const Matroid& b) { return canonical_form(a) < canonical_form(b); });
  return out;
}

// ---------------------------------------------------------------------------
// Cache file: a header comment, then one line per representative:
//   n rank canonical_key_hex bases...

inline std::string cache_header(const Universe& u, const EnumLimits& lim) {
  return "# flatclass enumeration universe=" + (u.kind == Universe::Kind::All ? std::string("all") : "gf" + std::to_string(u.q)) +
         " max_elements=" + std::to_string(lim.max_elements) + " max_rank=" + std::to_string(lim.max_rank);
}

inline std::string cache_line(const Matroid& m) {
  const CanonicalKey& key = canonical_form(m);
  std::string line = std::to_string(m.size()) + " " + std::to_string(m.rank()) + " " + key.hex();
  for (const std::string& b : basis_tuples(m)) line += " " + (b.empty() ? std::string("-") : b);
  return line;
}

inline std::string write_cache(const Universe& u, const EnumLimits& lim, const std::vector<Matroid>& ms) {
  std::string out = cache_header(u, lim) + "\n";
  for (const Matroid& m : ms) out += cache_line(m) + "\n";
  return out;
}

/// Parses a cache written for the same universe and limits; nullopt when the
/// header does not match. Every record is rebuilt from its key and checked
/// against its basis list.
inline std::optional<std::vector<Matroid>> read_cache(std::string_view text, const Universe& u, const EnumLimits& lim,
                                                      const std::string& source = "<cache>") {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != cache_header(u, lim)) return std::nullopt;
  std::vector<Matroid> out;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int n = -1, rank = -1;
    std::string hex;
    if (!(ls >> n >> rank >> hex)) throw ParseError(source, number, "expected 'n rank canonical_key_hex bases...'");
    auto key = key_from_hex(n, rank, hex);
    if (!key) throw ParseError(source, number, "expected hexadecimal canonical key");
    Matroid m;
    try {
      m = from_canonical(*key);
    } catch (const Error& e) {
      throw ParseError(source, number, e.what());
    }
    std::vector<std::string> bases;
    std::string b;
    while (ls >> b) bases.push_back(b == "-" ? std::string() : b);
    if (m.rank() != rank || bases != basis_tuples(m) || canonical_form(m) != *key) {
      throw ParseError(source, number, "record does not match its canonical key");
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace flatclass
