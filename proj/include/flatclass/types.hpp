#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flatclass {

/// Bit i set means element i is present. Only the low n bits may be set.
using SubsetMask = std::uint32_t;
using ElementId = int;

/// Largest ground set with a stored rank table (2^24 bytes).
inline constexpr int kGroundSetCap = 24;
/// Largest ground set accepted by canonical_form.
inline constexpr int kCanonicalCap = 12;
/// Largest ground set accepted by is_representable.
inline constexpr int kEmbeddingCap = 10;

enum class ErrorKind {
  InvalidArgument,
  SizeMismatch,
  InvalidRankTable,
  NonSimple,
  LoopColumn,
  ParallelColumns,
  UnsupportedField,
  TooLarge,
  InvalidCut,
  DuplicateForbidden,
  NotInUniverse,
  EmptyForbiddenList,
  NotForbidden,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::InvalidRankTable: return "InvalidRankTable";
    case ErrorKind::NonSimple: return "NonSimple";
    case ErrorKind::LoopColumn: return "LoopColumn";
    case ErrorKind::ParallelColumns: return "ParallelColumns";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidCut: return "InvalidCut";
    case ErrorKind::DuplicateForbidden: return "DuplicateForbidden";
    case ErrorKind::NotInUniverse: return "NotInUniverse";
    case ErrorKind::EmptyForbiddenList: return "EmptyForbiddenList";
    case ErrorKind::NotForbidden: return "NotForbidden";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure carrying the source name and 1-based line (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(std::string source, int line, const std::string& message)
      : Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + message),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }

 private:
  std::string source_;
  int line_;
};

inline constexpr SubsetMask bit(ElementId e) { return SubsetMask{1} << e; }

inline constexpr SubsetMask full_mask(int n) {
  return n >= 32 ? ~SubsetMask{0} : (SubsetMask{1} << n) - 1;
}

inline constexpr int popcount(SubsetMask s) { return std::popcount(s); }

inline std::vector<ElementId> elements_of(SubsetMask s) {
  std::vector<ElementId> out;
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

/// "{0,1,2}"
inline std::string format_set(SubsetMask s) {
  std::string out = "{";
  bool first = true;
  for (ElementId e : elements_of(s)) {
    if (!first) out += ',';
    out += std::to_string(e);
    first = false;
  }
  out += '}';
  return out;
}

/// Permutation-invariant encoding of a matroid: the lexicographically least
/// relabelled rank table, packed one nibble per entry.
struct CanonicalKey {
  int n = 0;
  int rank = 0;
  std::string bytes;

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend std::strong_ordering operator<=>(const CanonicalKey& a, const CanonicalKey& b) {
    if (auto c = a.n <=> b.n; c != 0) return c;
    if (auto c = a.rank <=> b.rank; c != 0) return c;
    return a.bytes.compare(b.bytes) <=> 0;
  }

  std::string hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
      out += kDigits[c >> 4];
      out += kDigits[c & 15];
    }
    return out;
  }
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    return std::hash<std::string_view>{}(k.bytes) ^ (static_cast<std::size_t>(k.n) << 1);
  }
};

}  // namespace flatclass
