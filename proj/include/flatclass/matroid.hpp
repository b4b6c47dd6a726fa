#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatclass/rank_table.hpp"
#include "flatclass/types.hpp"

namespace flatclass {

/// A simple matroid on {0..n-1} given by its full rank table. Immutable; copies
/// share state. The flat list and canonical key are computed once on demand
/// and are safe to request from several threads.
class Matroid {
 public:
  /// The empty matroid.
  Matroid() : state_(std::make_shared<State>(RankTable())) {}

  /// Validates the rank axioms and simplicity.
  static Matroid from_table(RankTable table) {
    if (!validate(table)) throw Error(ErrorKind::InvalidRankTable, "rank table violates the matroid axioms");
    return from_valid_table(std::move(table));
  }

  /// Checks simplicity only; the caller guarantees the rank axioms.
  static Matroid from_valid_table(RankTable table) {
    const int n = table.n;
    for (int e = 0; e < n; ++e) {
      if (table[bit(e)] != 1) throw Error(ErrorKind::NonSimple, "element " + std::to_string(e) + " is a loop");
      for (int f = e + 1; f < n; ++f) {
        if (table[bit(e) | bit(f)] != 2) {
          throw Error(ErrorKind::NonSimple,
                      "elements " + std::to_string(e) + " and " + std::to_string(f) + " are parallel");
        }
      }
    }
    return Matroid(std::move(table));
  }

  int size() const { return state_->table.n; }
  int rank() const { return state_->table.ranks.back(); }
  int rank(SubsetMask s) const { return state_->table.ranks[s]; }
  SubsetMask ground() const { return full_mask(size()); }
  const RankTable& table() const& { return state_->table; }
  RankTable table() && { return state_->table; }

  /// {e : r(s + e) = r(s)}
  SubsetMask closure(SubsetMask s) const {
    const auto& r = state_->table.ranks;
    const int rs = r[s];
    SubsetMask out = s;
    for (int e = 0; e < size(); ++e) {
      if (!(s & bit(e)) && r[s | bit(e)] == rs) out |= bit(e);
    }
    return out;
  }

  bool is_flat(SubsetMask s) const {
    const auto& r = state_->table.ranks;
    const int rs = r[s];
    for (int e = 0; e < size(); ++e) {
      if (!(s & bit(e)) && r[s | bit(e)] == rs) return false;
    }
    return true;
  }

  /// All flats in ascending mask order. Temporaries return a copy so that
  /// `for (auto f : make().flats())` does not dangle.
  std::vector<SubsetMask> flats() && { return std::as_const(*this).flats(); }
  const std::vector<SubsetMask>& flats() const& {
    std::call_once(state_->flats_once, [this] {
      const SubsetMask count = SubsetMask{1} << size();
      for (SubsetMask s = 0; s < count; ++s) {
        if (is_flat(s)) state_->flats.push_back(s);
      }
    });
    return state_->flats;
  }

  std::vector<SubsetMask> flats(int rank_filter) const {
    std::vector<SubsetMask> out;
    for (SubsetMask f : flats()) {
      if (rank(f) == rank_filter) out.push_back(f);
    }
    return out;
  }

  std::vector<SubsetMask> hyperplanes() const {
    if (rank() < 1) throw Error(ErrorKind::InvalidArgument, "a rank-0 matroid has no hyperplanes");
    return flats(rank() - 1);
  }

  /// Subsets of size rank() with full rank, ascending mask order.
  std::vector<SubsetMask> bases() const {
    std::vector<SubsetMask> out;
    const SubsetMask count = SubsetMask{1} << size();
    for (SubsetMask s = 0; s < count; ++s) {
      if (popcount(s) == rank() && rank(s) == rank()) out.push_back(s);
    }
    return out;
  }

  friend bool operator==(const Matroid& a, const Matroid& b) {
    return a.state_ == b.state_ || a.state_->table == b.state_->table;
  }

 private:
  template <typename F>
  friend const CanonicalKey& cached_canonical_form_impl(const Matroid& m, F&& compute);

  struct State {
    explicit State(RankTable t) : table(std::move(t)) {}
    RankTable table;
    std::once_flag flats_once;
    std::vector<SubsetMask> flats;
    std::once_flag key_once;
    CanonicalKey key;
  };

  explicit Matroid(RankTable table) : state_(std::make_shared<State>(std::move(table))) {}

  std::shared_ptr<State> state_;
};

template <typename F>
const CanonicalKey& cached_canonical_form_impl(const Matroid& m, F&& compute) {
  std::call_once(m.state_->key_once, [&] { m.state_->key = compute(m); });
  return m.state_->key;
}

/// U_{r,n}: r(A) = min(|A|, r).
inline Matroid uniform(int r, int n) {
  if (r < 0 || n < 0 || r > n) {
    throw Error(ErrorKind::InvalidArgument,
                "U(" + std::to_string(r) + "," + std::to_string(n) + ") needs 0 <= r <= n");
  }
  if ((r == 0 && n > 0) || (r == 1 && n > 1)) {
    throw Error(ErrorKind::NonSimple, "U(" + std::to_string(r) + "," + std::to_string(n) + ") is not simple");
  }
  RankTable t = RankTable::zeros(n);
  for (std::size_t s = 0; s < t.ranks.size(); ++s) {
    t.ranks[s] = static_cast<std::uint8_t>(std::min(popcount(static_cast<SubsetMask>(s)), r));
  }
  return Matroid::from_valid_table(std::move(t));
}

/// Elements of b are relabelled after those of a.
inline Matroid direct_sum(const Matroid& a, const Matroid& b) {
  const int na = a.size();
  const int n = na + b.size();
  if (n > kGroundSetCap) {
    throw Error(ErrorKind::TooLarge, "direct sum has " + std::to_string(n) + " elements, cap is " +
                                         std::to_string(kGroundSetCap));
  }
  RankTable t = RankTable::zeros(n);
  const SubsetMask low = a.ground();
  for (std::size_t s = 0; s < t.ranks.size(); ++s) {
    const auto m = static_cast<SubsetMask>(s);
    t.ranks[s] = static_cast<std::uint8_t>(a.rank(m & low) + b.rank(m >> na));
  }
  return Matroid::from_valid_table(std::move(t));
}

/// M|s, relabelled so that the elements of s keep their relative order.
inline Matroid restrict(const Matroid& m, SubsetMask s) {
  if ((s & ~m.ground()) != 0) throw Error(ErrorKind::InvalidArgument, "subset outside the ground set");
  const std::vector<ElementId> elems = elements_of(s);
  const int k = static_cast<int>(elems.size());
  RankTable t = RankTable::zeros(k);
  std::vector<SubsetMask> embedded(t.ranks.size(), 0);
  for (std::size_t sub = 1; sub < t.ranks.size(); ++sub) {
    const auto x = static_cast<SubsetMask>(sub);
    embedded[sub] = embedded[x & (x - 1)] | bit(elems[std::countr_zero(x)]);
    t.ranks[sub] = static_cast<std::uint8_t>(m.rank(embedded[sub]));
  }
  return Matroid::from_valid_table(std::move(t));
}

/// M \ e
inline Matroid deletion(const Matroid& m, ElementId e) {
  if (e < 0 || e >= m.size()) throw Error(ErrorKind::InvalidArgument, "element " + std::to_string(e) + " out of range");
  return restrict(m, m.ground() & ~bit(e));
}

/// Re-embeds a mask over E - e (relabelled) into E.
inline SubsetMask expand_after_deletion(SubsetMask s, ElementId e) {
  const SubsetMask low = s & (bit(e) - 1);
  const SubsetMask high = (s & ~(bit(e) - 1)) << 1;
  return low | high;
}

/// Re-embeds a mask over the relabelled restriction M|within into E.
inline SubsetMask expand_from_restriction(SubsetMask s, SubsetMask within) {
  SubsetMask out = 0;
  int i = 0;
  for (ElementId e : elements_of(within)) {
    if (s & bit(i)) out |= bit(e);
    ++i;
  }
  return out;
}

/// Relabels so that new element i is old element perm[i].
inline Matroid relabel(const Matroid& m, const std::vector<ElementId>& perm) {
  const int n = m.size();
  if (static_cast<int>(perm.size()) != n) throw Error(ErrorKind::SizeMismatch, "permutation size mismatch");
  RankTable t = RankTable::zeros(n);
  std::vector<SubsetMask> embedded(t.ranks.size(), 0);
  for (std::size_t sub = 1; sub < t.ranks.size(); ++sub) {
    const auto x = static_cast<SubsetMask>(sub);
    embedded[sub] = embedded[x & (x - 1)] | bit(perm[std::countr_zero(x)]);
    t.ranks[sub] = static_cast<std::uint8_t>(m.rank(embedded[sub]));
  }
  return Matroid::from_valid_table(std::move(t));
}

}  // namespace flatclass
