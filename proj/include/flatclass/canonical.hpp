#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "flatclass/matroid.hpp"

namespace flatclass {

namespace detail {

/// Depth-first search for the lexicographically least rank table over all
/// relabellings. Labels are assigned in order 0, 1, ...; once labels 0..j-1
/// are fixed, table entries [0, 2^j) are fixed too, so each level appends one
/// block and branches that exceed the best block so far are cut. Elements x, y
/// whose transposition is an automorphism yield identical subtrees, so only
/// the first unused member of each such twin class is tried.
class CanonicalSearch {
 public:
  explicit CanonicalSearch(const Matroid& m)
      : m_(m), n_(m.size()), cur_(std::size_t{1} << n_, 0), best_(cur_.size(), 0), embedded_(cur_.size(), 0) {
    twin_rep_.resize(n_);
    for (int x = 0; x < n_; ++x) {
      twin_rep_[x] = x;
      for (int y = 0; y < x; ++y) {
        if (twin_rep_[y] == y && transposition_is_automorphism(y, x)) {
          twin_rep_[x] = y;
          break;
        }
      }
    }
    perm_.assign(n_, -1);
    best_perm_.assign(n_, -1);
  }

  void run() {
    if (n_ == 0) {
      have_best_ = true;
      return;
    }
    search(0, 0, 0);
  }

  const std::vector<std::uint8_t>& table() const { return best_; }
  const std::vector<ElementId>& permutation() const { return best_perm_; }

 private:
  bool transposition_is_automorphism(ElementId x, ElementId y) const {
    const SubsetMask bx = bit(x), by = bit(y);
    const SubsetMask count = SubsetMask{1} << n_;
    for (SubsetMask s = 0; s < count; ++s) {
      const bool hx = s & bx, hy = s & by;
      if (hx == hy) continue;
      if (m_.rank(s) != m_.rank(s ^ bx ^ by)) return false;
    }
    return true;
  }

  // status: -1 when the current prefix is already below best, 0 when equal.
  void search(int depth, SubsetMask used, int status) {
    const SubsetMask block = SubsetMask{1} << depth;
    for (int x = 0; x < n_; ++x) {
      if (used & bit(x)) continue;
      bool skip = false;
      for (int y = twin_rep_[x]; y < x; ++y) {
        if (twin_rep_[y] == twin_rep_[x] && !(used & bit(y))) {
          skip = true;
          break;
        }
      }
      if (skip) continue;

      int child = status;
      for (SubsetMask a = 0; a < block; ++a) {
        const SubsetMask e = embedded_[a] | bit(x);
        embedded_[block + a] = e;
        cur_[block + a] = static_cast<std::uint8_t>(m_.rank(e));
        if (child == 0 && have_best_) {
          if (cur_[block + a] > best_[block + a]) {
            child = 1;
            break;
          }
          if (cur_[block + a] < best_[block + a]) child = -1;
        }
      }
      if (!have_best_) child = -1;
      if (child == 1) continue;

      perm_[depth] = x;
      const unsigned long version = version_;
      if (depth + 1 == n_) {
        if (child == -1) {
          best_ = cur_;
          best_perm_ = perm_;
          have_best_ = true;
          ++version_;
        }
      } else {
        search(depth + 1, used | bit(x), child);
      }
      // A new best found below shares this node's prefix.
      if (version_ != version) status = 0;
    }
  }

  const Matroid& m_;
  int n_;
  std::vector<std::uint8_t> cur_;
  std::vector<std::uint8_t> best_;
  std::vector<SubsetMask> embedded_;
  std::vector<int> twin_rep_;
  std::vector<ElementId> perm_;
  std::vector<ElementId> best_perm_;
  bool have_best_ = false;
  unsigned long version_ = 0;
};

inline std::string pack_nibbles(const std::vector<std::uint8_t>& table) {
  std::string out((table.size() + 1) / 2, '\0');
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto v = static_cast<unsigned char>(table[i] & 15);
    out[i / 2] = static_cast<char>(static_cast<unsigned char>(out[i / 2]) | (i % 2 == 0 ? v << 4 : v));
  }
  return out;
}

inline void check_canonical_cap(const Matroid& m) {
  if (m.size() > kCanonicalCap) {
    throw Error(ErrorKind::TooLarge, std::to_string(m.size()) + " elements exceed the canonicalization cap " +
                                         std::to_string(kCanonicalCap));
  }
}

}  // namespace detail

/// Relabelling perm (new label i = old element perm[i]) that yields the
/// canonical rank table.
struct CanonicalLabeling {
  CanonicalKey key;
  std::vector<ElementId> permutation;
};

inline CanonicalLabeling canonical_labeling(const Matroid& m) {
  detail::check_canonical_cap(m);
  detail::CanonicalSearch search(m);
  search.run();
  CanonicalLabeling out;
  out.key.n = m.size();
  out.key.rank = m.rank();
  out.key.bytes = detail::pack_nibbles(search.table());
  out.permutation = search.permutation();
  return out;
}

/// Canonical key, cached on the matroid.
inline const CanonicalKey& canonical_form(const Matroid& m) {
  detail::check_canonical_cap(m);
  return cached_canonical_form_impl(m, [](const Matroid& x) { return canonical_labeling(x).key; });
}

inline bool isomorphic(const Matroid& a, const Matroid& b) {
  if (a.size() != b.size() || a.rank() != b.rank()) return false;
  return canonical_form(a) == canonical_form(b);
}

/// The canonically labelled representative encoded by a key.
inline Matroid from_canonical(const CanonicalKey& key) {
  if (key.n < 0 || key.n > kCanonicalCap) throw Error(ErrorKind::TooLarge, "canonical key size out of range");
  const std::size_t entries = std::size_t{1} << key.n;
  if (key.bytes.size() != (entries + 1) / 2) throw Error(ErrorKind::SizeMismatch, "canonical key length mismatch");
  RankTable t = RankTable::zeros(key.n);
  for (std::size_t i = 0; i < entries; ++i) {
    const auto c = static_cast<unsigned char>(key.bytes[i / 2]);
    t.ranks[i] = static_cast<std::uint8_t>(i % 2 == 0 ? c >> 4 : c & 15);
  }
  return Matroid::from_table(std::move(t));
}

inline std::optional<CanonicalKey> key_from_hex(int n, int rank, const std::string& hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  CanonicalKey key{n, rank, {}};
  auto digit = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = digit(hex[i]), lo = digit(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    key.bytes += static_cast<char>(hi * 16 + lo);
  }
  return key;
}

/// Exhaustive search for an isomorphism a -> b: result[i] is the image of i.
/// Independent of canonical_form; intended for verification at small n.
inline std::optional<std::vector<ElementId>> brute_force_isomorphism(const Matroid& a, const Matroid& b) {
  if (a.size() != b.size() || a.rank() != b.rank()) return std::nullopt;
  const int n = a.size();
  std::vector<ElementId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const SubsetMask count = SubsetMask{1} << n;
  do {
    bool ok = true;
    for (SubsetMask s = 1; s < count && ok; ++s) {
      SubsetMask image = 0;
      for (ElementId e : elements_of(s)) image |= bit(perm[e]);
      ok = a.rank(s) == b.rank(image);
    }
    if (ok) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace flatclass
