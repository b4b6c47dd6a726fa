#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "flatclass/gf.hpp"
#include "flatclass/matroid.hpp"

namespace flatclass {

namespace detail {

inline void fill_column_ranks(const GFMatrix& m, const Field& field, EchelonBasis& basis, int col, SubsetMask mask,
                              RankTable& table) {
  if (col == m.cols) {
    table.ranks[mask] = static_cast<std::uint8_t>(basis.size());
    return;
  }
  fill_column_ranks(m, field, basis, col + 1, mask, table);
  std::vector<FieldElement> v = m.column(col);
  if (basis.reduce(v)) {
    basis.push_reduced(std::move(v));
    fill_column_ranks(m, field, basis, col + 1, mask | bit(col), table);
    basis.pop();
  } else {
    fill_column_ranks(m, field, basis, col + 1, mask | bit(col), table);
  }
}

}  // namespace detail

/// Rank table of the column matroid, without simplicity checks.
inline RankTable column_rank_table(const GFMatrix& m) {
  const Field& field = Field::get(m.q);
  if (m.cols > kGroundSetCap) {
    throw Error(ErrorKind::TooLarge, std::to_string(m.cols) + " columns exceed the ground-set cap");
  }
  RankTable table = RankTable::zeros(m.cols);
  EchelonBasis basis(field, m.rows);
  detail::fill_column_ranks(m, field, basis, 0, 0, table);
  return table;
}

inline void check_matrix_shape(const GFMatrix& m) {
  if (!is_supported_field(m.q)) {
    throw Error(ErrorKind::UnsupportedField, "GF(" + std::to_string(m.q) + ") is not supported");
  }
  if (m.rows < 0 || m.cols < 0 ||
      m.entries.size() != static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols)) {
    throw Error(ErrorKind::SizeMismatch, "matrix entry count does not match rows x cols");
  }
  for (FieldElement x : m.entries) {
    if (x >= m.q) {
      throw Error(ErrorKind::InvalidArgument,
                  "entry " + std::to_string(x) + " is not an element of GF(" + std::to_string(m.q) + ")");
    }
  }
}

/// Column matroid over GF(q). Rejects zero columns and scalar-multiple pairs.
inline Matroid from_matrix(const GFMatrix& m) {
  check_matrix_shape(m);
  if (m.cols > kGroundSetCap) {
    throw Error(ErrorKind::TooLarge, std::to_string(m.cols) + " columns exceed the ground-set cap");
  }
  const Field& field = Field::get(m.q);
  std::vector<std::vector<FieldElement>> normalized;
  for (int c = 0; c < m.cols; ++c) {
    std::vector<FieldElement> v = m.column(c);
    if (!normalize_projective(field, v)) {
      throw Error(ErrorKind::LoopColumn, "column " + std::to_string(c) + " is zero");
    }
    for (std::size_t d = 0; d < normalized.size(); ++d) {
      if (normalized[d] == v) {
        throw Error(ErrorKind::ParallelColumns,
                    "columns " + std::to_string(d) + " and " + std::to_string(c) + " are parallel");
      }
    }
    normalized.push_back(std::move(v));
  }
  return Matroid::from_valid_table(column_rank_table(m));
}

/// One normalized representative column (first nonzero entry 1) for each
/// point of PG(dim, q), in ascending order of the base-q code with row 0
/// most significant.
inline GFMatrix projective_geometry_matrix(int dim, int q) {
  const Field& field = Field::get(q);
  if (dim < 0) throw Error(ErrorKind::InvalidArgument, "PG dimension must be nonnegative");
  long long total = 1;
  for (int i = 0; i <= dim; ++i) {
    total *= q;
    if (total > 1'000'000) break;
  }
  const long long points = (total - 1) / (q - 1);
  if (points > kGroundSetCap || total > 1'000'000) {
    throw Error(ErrorKind::TooLarge, "PG(" + std::to_string(dim) + "," + std::to_string(q) +
                                         ") has more points than the ground-set cap " +
                                         std::to_string(kGroundSetCap));
  }
  const int rows = dim + 1;
  std::vector<std::vector<FieldElement>> cols;
  for (long long code = 1; code < total; ++code) {
    std::vector<FieldElement> v(rows);
    long long c = code;
    for (int i = rows - 1; i >= 0; --i) {
      v[i] = static_cast<FieldElement>(c % q);
      c /= q;
    }
    std::vector<FieldElement> w = v;
    normalize_projective(field, w);
    if (w == v) cols.push_back(std::move(v));
  }
  GFMatrix out{q, rows, static_cast<int>(cols.size()), {}};
  out.entries.resize(static_cast<std::size_t>(rows) * cols.size());
  for (int c = 0; c < out.cols; ++c) {
    for (int i = 0; i < rows; ++i) out.at(i, c) = cols[c][i];
  }
  return out;
}

/// PG(dim, q): all points of the (dim+1)-dimensional vector space over GF(q).
inline Matroid projective_geometry(int dim, int q) { return from_matrix(projective_geometry_matrix(dim, q)); }

namespace detail {

class Embedder {
 public:
  Embedder(const Matroid& m, const Field& field) : m_(m), field_(field), rank_(m.rank()) {}

  std::optional<GFMatrix> run() {
    const int n = m_.size();
    const SubsetMask basis = m_.bases().front();
    columns_.assign(n, std::vector<FieldElement>(rank_, 0));
    int row = 0;
    for (ElementId b : elements_of(basis)) {
      basis_row_.push_back(b);
      columns_[b][row++] = 1;
      order_.push_back(b);
    }
    assigned_ = basis;
    std::vector<ElementId> rest;
    for (int e = 0; e < n; ++e) {
      if (!(basis & bit(e))) rest.push_back(e);
    }
    // Row/column scaling lets entries on a spanning forest of the bipartite
    // support graph be fixed to 1.
    std::vector<int> parent(rank_ + static_cast<int>(rest.size()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t j = 0; j < rest.size(); ++j) {
      const ElementId e = rest[j];
      Slot slot{e, {}, {}};
      for (int i = 0; i < rank_; ++i) {
        const SubsetMask swapped = (basis & ~bit(basis_row_[i])) | bit(e);
        if (m_.rank(swapped) != rank_) continue;
        const int a = find(i);
        const int b = find(rank_ + static_cast<int>(j));
        if (a != b) {
          parent[a] = b;
          slot.fixed.push_back(i);
        } else {
          slot.free.push_back(i);
        }
      }
      slots_.push_back(std::move(slot));
    }
    if (!assign(0)) return std::nullopt;
    GFMatrix out{field_.order(), rank_, n, {}};
    out.entries.resize(static_cast<std::size_t>(rank_) * n);
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i < rank_; ++i) out.at(i, c) = columns_[c][i];
    }
    return out;
  }

 private:
  struct Slot {
    ElementId element;
    std::vector<int> fixed;
    std::vector<int> free;
  };

  bool assign(std::size_t index) {
    if (index == slots_.size()) return true;
    const Slot& slot = slots_[index];
    auto& col = columns_[slot.element];
    std::fill(col.begin(), col.end(), 0);
    for (int i : slot.fixed) col[i] = 1;
    std::vector<int> choice(slot.free.size(), 1);
    while (true) {
      for (std::size_t k = 0; k < slot.free.size(); ++k) col[slot.free[k]] = static_cast<FieldElement>(choice[k]);
      if (consistent(slot.element)) {
        order_.push_back(slot.element);
        assigned_ |= bit(slot.element);
        if (assign(index + 1)) return true;
        order_.pop_back();
        assigned_ &= ~bit(slot.element);
      }
      std::size_t k = 0;
      while (k < choice.size() && choice[k] == field_.order() - 1) choice[k++] = 1;
      if (k == choice.size()) break;
      ++choice[k];
    }
    std::fill(col.begin(), col.end(), 0);
    return false;
  }

  // r(A + e) agrees with m for every subset A of the already-placed elements.
  bool consistent(ElementId e) {
    EchelonBasis basis(field_, rank_);
    return check_subsets(basis, 0, 0, e);
  }

  bool check_subsets(EchelonBasis& basis, std::size_t pos, SubsetMask mask, ElementId e) {
    if (pos == order_.size()) {
      std::vector<FieldElement> v = columns_[e];
      const int with_e = basis.size() + (basis.reduce(v) ? 1 : 0);
      return with_e == m_.rank(mask | bit(e));
    }
    if (!check_subsets(basis, pos + 1, mask, e)) return false;
    std::vector<FieldElement> v = columns_[order_[pos]];
    if (basis.reduce(v)) {
      basis.push_reduced(std::move(v));
      const bool ok = check_subsets(basis, pos + 1, mask | bit(order_[pos]), e);
      basis.pop();
      return ok;
    }
    return check_subsets(basis, pos + 1, mask | bit(order_[pos]), e);
  }

  const Matroid& m_;
  const Field& field_;
  int rank_;
  std::vector<ElementId> basis_row_;
  std::vector<std::vector<FieldElement>> columns_;
  std::vector<ElementId> order_;
  SubsetMask assigned_ = 0;
  std::vector<Slot> slots_;
};

}  // namespace detail

/// A GF(q) matrix whose column matroid equals m (same labelling), or nullopt.
/// The first basis in mask order is placed on the identity; the support of
/// every other column is forced by its fundamental circuit, and the remaining
/// nonzero entries are searched by backtracking with subset-rank checks.
inline std::optional<GFMatrix> is_representable(const Matroid& m, int q) {
  const Field& field = Field::get(q);
  if (m.size() > kEmbeddingCap) {
    throw Error(ErrorKind::TooLarge, std::to_string(m.size()) + " elements exceed the embedding-search cap " +
                                         std::to_string(kEmbeddingCap));
  }
  if (m.size() == 0) return GFMatrix{q, 0, 0, {}};
  return detail::Embedder(m, field).run();
}

}  // namespace flatclass
