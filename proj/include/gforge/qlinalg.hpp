#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

namespace gforge {

/// Incrementally maintained row-echelon basis of a subspace of Q^dim.
class RationalBasis {
public:
  explicit RationalBasis(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  /// Reduces v against the stored pivots; returns the residue.
  std::vector<mpq_class> reduce(std::vector<mpq_class> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t p = pivots_[r];
      if (v[p] == 0) continue;
      mpq_class c = v[p];
      const auto& row = rows_[r];
      for (std::size_t k = 0; k < dim_; ++k)
        if (row[k] != 0) v[k] -= c * row[k];
    }
    return v;
  }

  bool contains(const std::vector<mpq_class>& v) const {
    auto r = reduce(v);
    for (const auto& q : r)
      if (q != 0) return false;
    return true;
  }

  /// Adds v; returns true if it was independent of the current span.
  bool insert(const std::vector<mpq_class>& v) {
    auto r = reduce(v);
    std::size_t p = 0;
    while (p < dim_ && r[p] == 0) ++p;
    if (p == dim_) return false;
    mpq_class inv = 1 / r[p];
    for (std::size_t k = p; k < dim_; ++k) r[k] *= inv;
    // keep rows fully reduced so reduce() can work in one pass
    for (auto& row : rows_) {
      if (row[p] == 0) continue;
      mpq_class c = row[p];
      for (std::size_t k = p; k < dim_; ++k) row[k] -= c * r[k];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

private:
  std::size_t dim_;
  std::vector<std::vector<mpq_class>> rows_;
  std::vector<std::size_t> pivots_;
};

/// Solves sum_c x_c columns[c] = rhs exactly; nullopt if inconsistent. Free
/// unknowns are set to zero.
inline std::optional<std::vector<mpq_class>> solveRational(const std::vector<std::vector<mpq_class>>& columns,
                                                           const std::vector<mpq_class>& rhs) {
  const std::size_t rows = rhs.size(), cols = columns.size();
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = columns[c][r];
    a[r][cols] = rhs[r];
  }
  std::vector<std::size_t> pivotCol;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    const mpq_class inv = 1 / a[rank][c];
    for (auto& q : a[rank]) q *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const mpq_class f = a[r][c];
      for (std::size_t k = c; k <= cols; ++k) a[r][k] -= f * a[rank][k];
    }
    pivotCol.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (a[r][cols] != 0) return std::nullopt;
  std::vector<mpq_class> x(cols);
  for (std::size_t r = 0; r < rank; ++r) x[pivotCol[r]] = a[r][cols];
  return x;
}

}  // namespace gforge
