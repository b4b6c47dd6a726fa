#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flatclass/types.hpp"

namespace flatclass {

/// Rank of every subset of {0..n-1}, indexed by SubsetMask.
struct RankTable {
  int n = 0;
  std::vector<std::uint8_t> ranks;

  RankTable() : ranks(1, 0) {}
  RankTable(int size, std::vector<std::uint8_t> values) : n(size), ranks(std::move(values)) {}

  /// Zero-filled table with 2^size entries.
  static RankTable zeros(int size) {
    if (size < 0 || size > kGroundSetCap) {
      throw Error(ErrorKind::TooLarge, "ground set of " + std::to_string(size) + " elements exceeds cap " +
                                           std::to_string(kGroundSetCap));
    }
    return RankTable(size, std::vector<std::uint8_t>(std::size_t{1} << size, 0));
  }

  int operator[](SubsetMask s) const { return ranks[s]; }

  friend bool operator==(const RankTable&, const RankTable&) = default;
};

/// Checks normalization, unit increase and local submodularity. Together with
/// r(empty) = 0 these are equivalent to the full rank axioms
/// (0 <= r(A) <= |A|, monotone, submodular over all pairs).
inline bool validate(const RankTable& table) {
  if (table.n < 0 || table.n > kGroundSetCap) {
    throw Error(ErrorKind::TooLarge, "rank table of " + std::to_string(table.n) + " elements exceeds cap");
  }
  const std::size_t expected = std::size_t{1} << table.n;
  if (table.ranks.size() != expected) {
    throw Error(ErrorKind::SizeMismatch, "rank table for n=" + std::to_string(table.n) + " needs " +
                                             std::to_string(expected) + " entries, got " +
                                             std::to_string(table.ranks.size()));
  }
  const auto& r = table.ranks;
  if (r[0] != 0) return false;
  const int n = table.n;
  for (SubsetMask a = 0; a < expected; ++a) {
    const int ra = r[a];
    for (int e = 0; e < n; ++e) {
      const SubsetMask be = bit(e);
      if (a & be) continue;
      const int rae = r[a | be];
      if (rae != ra && rae != ra + 1) return false;
      for (int f = e + 1; f < n; ++f) {
        const SubsetMask bf = bit(f);
        if (a & bf) continue;
        if (rae + r[a | bf] < r[a | be | bf] + ra) return false;
      }
    }
  }
  return true;
}

}  // namespace flatclass
