#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flatclass/types.hpp"

namespace flatclass {

using FieldElement = std::uint8_t;

inline constexpr std::array<int, 7> kSupportedFields = {2, 3, 4, 5, 7, 8, 9};

inline bool is_supported_field(int q) {
  for (int s : kSupportedFields) {
    if (s == q) return true;
  }
  return false;
}

/// Arithmetic tables for GF(q). Elements are integers 0..q-1 whose base-p
/// digits are polynomial coefficients (lowest degree first). Prime-power
/// fields reduce modulo a fixed irreducible polynomial:
///   GF(4): x^2+x+1, GF(8): x^3+x+1, GF(9): x^2+1.
class Field {
 public:
  static const Field& get(int q) {
    static const std::array<Field, 10> fields = [] {
      std::array<Field, 10> out{};
      for (int s : kSupportedFields) out[s] = Field(s);
      return out;
    }();
    if (q < 0 || q >= 10 || !is_supported_field(q)) {
      throw Error(ErrorKind::UnsupportedField, "GF(" + std::to_string(q) + ") is not supported");
    }
    return fields[q];
  }

  Field() = default;

  int order() const { return q_; }
  int characteristic() const { return p_; }

  FieldElement add(FieldElement a, FieldElement b) const { return add_[a * q_ + b]; }
  FieldElement sub(FieldElement a, FieldElement b) const { return add_[a * q_ + neg_[b]]; }
  FieldElement mul(FieldElement a, FieldElement b) const { return mul_[a * q_ + b]; }
  FieldElement neg(FieldElement a) const { return neg_[a]; }
  /// Undefined for 0.
  FieldElement inv(FieldElement a) const { return inv_[a]; }

 private:
  explicit Field(int q) : q_(q) {
    int degree = 1;
    p_ = q;
    for (int p : {2, 3}) {
      if (q % p == 0 && q != p) {
        p_ = p;
        degree = q == 4 ? 2 : q == 8 ? 3 : 2;
      }
    }
    // Irreducible modulus coefficients of x^0..x^{degree-1} (monic).
    std::array<int, 3> modulus{};
    if (q == 4) modulus = {1, 1, 0};
    if (q == 8) modulus = {1, 1, 0};
    if (q == 9) modulus = {1, 0, 0};

    auto digits = [&](int v) {
      std::array<int, 3> d{};
      for (int i = 0; i < degree; ++i) {
        d[i] = v % p_;
        v /= p_;
      }
      return d;
    };
    auto value = [&](const std::array<int, 3>& d) {
      int v = 0;
      for (int i = degree - 1; i >= 0; --i) v = v * p_ + d[i];
      return v;
    };

    add_.assign(q * q, 0);
    mul_.assign(q * q, 0);
    neg_.assign(q, 0);
    inv_.assign(q, 0);
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        if (degree == 1) {
          add_[a * q + b] = static_cast<FieldElement>((a + b) % q);
          mul_[a * q + b] = static_cast<FieldElement>((a * b) % q);
          continue;
        }
        auto da = digits(a);
        auto db = digits(b);
        std::array<int, 3> sum{};
        for (int i = 0; i < degree; ++i) sum[i] = (da[i] + db[i]) % p_;
        add_[a * q + b] = static_cast<FieldElement>(value(sum));

        std::array<int, 5> prod{};
        for (int i = 0; i < degree; ++i) {
          for (int j = 0; j < degree; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        }
        // x^degree = -(modulus low terms)
        for (int k = 2 * degree - 2; k >= degree; --k) {
          const int c = prod[k];
          if (c == 0) continue;
          prod[k] = 0;
          for (int i = 0; i < degree; ++i) {
            prod[k - degree + i] = ((prod[k - degree + i] - c * modulus[i]) % p_ + p_) % p_;
          }
        }
        std::array<int, 3> low{};
        for (int i = 0; i < degree; ++i) low[i] = prod[i];
        mul_[a * q + b] = static_cast<FieldElement>(value(low));
      }
    }
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        if (add_[a * q + b] == 0) neg_[a] = static_cast<FieldElement>(b);
        if (mul_[a * q + b] == 1) inv_[a] = static_cast<FieldElement>(b);
      }
    }
  }

  int q_ = 0;
  int p_ = 0;
  std::vector<FieldElement> add_, mul_, neg_, inv_;
};

/// A rows x cols matrix over GF(q), row-major.
struct GFMatrix {
  int q = 2;
  int rows = 0;
  int cols = 0;
  std::vector<FieldElement> entries;

  FieldElement at(int row, int col) const { return entries[static_cast<std::size_t>(row) * cols + col]; }
  FieldElement& at(int row, int col) { return entries[static_cast<std::size_t>(row) * cols + col]; }

  std::vector<FieldElement> column(int col) const {
    std::vector<FieldElement> v(rows);
    for (int i = 0; i < rows; ++i) v[i] = at(i, col);
    return v;
  }

  friend bool operator==(const GFMatrix&, const GFMatrix&) = default;
};

/// Scales v so that its first nonzero entry is 1. Returns false for the zero vector.
inline bool normalize_projective(const Field& field, std::span<FieldElement> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) {
      const FieldElement s = field.inv(v[i]);
      for (std::size_t j = i; j < v.size(); ++j) v[j] = field.mul(v[j], s);
      return true;
    }
  }
  return false;
}

/// Incremental row-echelon basis. Each stored vector has a pivot equal to 1 and
/// zeros at the pivots of earlier vectors, so reduction in insertion order is exact.
class EchelonBasis {
 public:
  EchelonBasis(const Field& field, int dim) : field_(&field), dim_(dim) {}

  int size() const { return static_cast<int>(pivots_.size()); }

  /// Reduces v in place against the basis; returns true if the residue is nonzero.
  bool reduce(std::vector<FieldElement>& v) const {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const FieldElement c = v[pivots_[i]];
      if (c == 0) continue;
      const auto& b = vectors_[i];
      for (int j = 0; j < dim_; ++j) {
        if (b[j] != 0) v[j] = field_->sub(v[j], field_->mul(c, b[j]));
      }
    }
    for (FieldElement x : v) {
      if (x != 0) return true;
    }
    return false;
  }

  /// Appends an already-reduced nonzero residue.
  void push_reduced(std::vector<FieldElement> v) {
    int pivot = 0;
    while (v[pivot] == 0) ++pivot;
    const FieldElement s = field_->inv(v[pivot]);
    for (auto& x : v) x = field_->mul(x, s);
    pivots_.push_back(pivot);
    vectors_.push_back(std::move(v));
  }

  bool insert(std::vector<FieldElement> v) {
    if (!reduce(v)) return false;
    push_reduced(std::move(v));
    return true;
  }

  void pop() {
    pivots_.pop_back();
    vectors_.pop_back();
  }

 private:
  const Field* field_;
  int dim_;
  std::vector<int> pivots_;
  std::vector<std::vector<FieldElement>> vectors_;
};

/// Linear rank over GF(q) of the given columns of m.
inline int column_rank(const GFMatrix& m, SubsetMask columns) {
  const Field& field = Field::get(m.q);
  EchelonBasis basis(field, m.rows);
  for (ElementId c : elements_of(columns)) basis.insert(m.column(c));
  return basis.size();
}

}  // namespace flatclass
